//! The `rbk` command line.
//!
//! Exit codes: 0 on success, 2 on bad input (unreadable or malformed matrix,
//! bad flags, non-Kähler input to `verify`), 3 when the combinatorial spin
//! criterion and the cohomological oracle disagree.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bott::BottMatrix;
use crate::census::{self, CensusOptions, CensusReport};
use crate::error::Error;
use crate::f2poly::Deg2Vector;
use crate::pmatrix::PMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "rbk",
    version,
    about = "Kähler and spin structures on real Bott manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kähler, orientability and spin verdicts for one Bott matrix
    Check(MatrixArgs),
    /// Classes alpha_j, beta_j, theta_j and Stiefel-Whitney classes w1, w2
    Sw(MatrixArgs),
    /// The P-matrix of a Bott matrix, or predicates of a general P-matrix
    Pmatrix(PmatrixArgs),
    /// Generators s_i of the crystallographic group
    Generators(MatrixArgs),
    /// Enumerate all Bott matrices of one dimension and cross-check spin
    Census(CensusArgs),
    /// Spin criterion and oracle side by side, with the w2 reduction trace
    Verify(MatrixArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Matrix file (`-` for stdin)
    path: Option<PathBuf>,
    /// Inline matrix, rows separated by `;`, e.g. "011;001;000"
    #[arg(long)]
    matrix: Option<String>,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct PmatrixArgs {
    #[command(flatten)]
    input: MatrixArgs,
    /// Read the input as a general P-matrix (digits 0-3) instead of a Bott matrix
    #[arg(long)]
    general: bool,
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Skip the cohomological oracle and count with the combinatorial criterion only
    #[arg(long)]
    no_oracle: bool,
    /// Override the dimension ceiling
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            msg: e.to_string(),
        }
    }
}

fn read_input(args: &MatrixArgs) -> Result<String, Failure> {
    if let Some(m) = &args.input.matrix {
        return Ok(m.replace(';', "\n"));
    }
    let path = args.input.path.as_ref().expect("clap enforces one input");
    let io_err = |e: std::io::Error| Failure {
        code: EXIT_INPUT,
        msg: format!("cannot read {}: {e}", path.display()),
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn load_bott(args: &MatrixArgs) -> Result<BottMatrix, Failure> {
    Ok(read_input(args)?.parse::<BottMatrix>()?)
}

trait Report: Serialize {
    fn text(&self) -> String;

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn yes_no(b: Option<bool>) -> String {
    b.map_or_else(|| "n/a".to_owned(), |b| b.to_string())
}

fn bits(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| b as u8).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|k| k + 1).collect()
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub dimension: usize,
    pub strictly_upper: bool,
    pub kahler: bool,
    pub orientable: bool,
    pub spin_theorem: Option<bool>,
    pub spin_oracle: bool,
    pub kept_columns: Option<Vec<usize>>,
    pub reduced_row_sums: Option<Vec<u8>>,
}

impl CheckReport {
    pub fn new(a: &BottMatrix) -> Self {
        let reduced = a.reduce().ok();
        Self {
            schema_version: SCHEMA_VERSION,
            command: "check",
            dimension: a.dim(),
            strictly_upper: true,
            kahler: a.is_kahler(),
            orientable: a.to_pmatrix().is_orientable(),
            spin_theorem: a.spin_main_theorem().ok(),
            spin_oracle: a.spin_oracle(),
            kept_columns: reduced.as_ref().map(|r| one_based(&r.kept_columns)),
            reduced_row_sums: reduced.as_ref().map(|r| bits(&r.row_sums)),
        }
    }
}

impl Report for CheckReport {
    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dimension: {}", self.dimension).unwrap();
        writeln!(s, "strictly_upper: {}", self.strictly_upper).unwrap();
        writeln!(s, "kahler: {}", self.kahler).unwrap();
        writeln!(s, "orientable: {}", self.orientable).unwrap();
        writeln!(s, "spin_theorem: {}", yes_no(self.spin_theorem)).unwrap();
        writeln!(s, "spin_oracle: {}", self.spin_oracle).unwrap();
        let kept = self
            .kept_columns
            .as_ref()
            .map_or("n/a".to_owned(), |k| join(k, " "));
        writeln!(s, "kept_columns: {kept}").unwrap();
        let sums = self
            .reduced_row_sums
            .as_ref()
            .map_or("n/a".to_owned(), |k| join(k, " "));
        writeln!(s, "reduced_row_sums: {sums}").unwrap();
        s
    }
}

#[derive(Debug, Serialize)]
pub struct SwReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub generators: usize,
    pub columns: usize,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub theta: Vec<String>,
    pub w1: String,
    pub w2: String,
    pub total_sw_up_to_degree_2: String,
    pub ideal_rank: usize,
}

impl SwReport {
    pub fn new(e: &PMatrix) -> Self {
        let sw = e.sw_data();
        let col = |f: &dyn Fn(usize) -> String| (1..=e.cols()).map(f).collect();
        Self {
            schema_version: SCHEMA_VERSION,
            command: "sw",
            generators: e.rows(),
            columns: e.cols(),
            alpha: col(&|j| e.class_alpha(j).unwrap().to_string()),
            beta: col(&|j| e.class_beta(j).unwrap().to_string()),
            theta: sw.thetas.iter().map(|t| t.to_string()).collect(),
            w1: sw.w1.to_string(),
            w2: sw.w2.to_string(),
            total_sw_up_to_degree_2: e.total_sw_class(2).to_string(),
            ideal_rank: e.characteristic_ideal_deg2().dimension(),
        }
    }
}

impl Report for SwReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for j in 0..self.columns {
            writeln!(s, "alpha_{} = {}", j + 1, self.alpha[j]).unwrap();
            writeln!(s, "beta_{} = {}", j + 1, self.beta[j]).unwrap();
            writeln!(s, "theta_{} = {}", j + 1, self.theta[j]).unwrap();
        }
        writeln!(s, "w1 = {}", self.w1).unwrap();
        writeln!(s, "w2 = {}", self.w2).unwrap();
        writeln!(s, "w (degree <= 2) = {}", self.total_sw_up_to_degree_2).unwrap();
        writeln!(s, "ideal_rank = {}", self.ideal_rank).unwrap();
        s
    }
}

#[derive(Debug, Serialize)]
pub struct PmatrixReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub generators: usize,
    pub columns: usize,
    pub matrix: Vec<String>,
    pub free_action: bool,
    pub full_holonomy: bool,
    pub orientable: bool,
    pub w2_in_ideal: bool,
    pub spin: bool,
}

impl PmatrixReport {
    pub fn new(e: &PMatrix) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: "pmatrix",
            generators: e.rows(),
            columns: e.cols(),
            matrix: e.to_string().lines().map(str::to_owned).collect(),
            free_action: e.is_free_action(),
            full_holonomy: e.has_full_holonomy(),
            orientable: e.is_orientable(),
            w2_in_ideal: e.w2_in_ideal(),
            spin: e.admits_spin(),
        }
    }
}

impl Report for PmatrixReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for row in &self.matrix {
            writeln!(s, "{row}").unwrap();
        }
        writeln!(s, "free_action: {}", self.free_action).unwrap();
        writeln!(s, "full_holonomy: {}", self.full_holonomy).unwrap();
        writeln!(s, "orientable: {}", self.orientable).unwrap();
        writeln!(s, "w2_in_ideal: {}", self.w2_in_ideal).unwrap();
        writeln!(s, "spin: {}", self.spin).unwrap();
        s
    }
}

#[derive(Debug, Serialize)]
pub struct GeneratorEntry {
    pub index: usize,
    pub signs: Vec<i8>,
    /// Translation part, entries written as `0`, `1/2`, ...
    pub translation: Vec<String>,
    pub square: String,
    pub square_is_unit_translation: bool,
}

#[derive(Debug, Serialize)]
pub struct GeneratorsReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub dimension: usize,
    pub generators: Vec<GeneratorEntry>,
}

impl GeneratorsReport {
    pub fn new(a: &BottMatrix) -> Self {
        let generators = a
            .generators()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let sq = s.compose(s).expect("same dimension");
                let unit = sq.is_pure_translation()
                    && sq
                        .translation2()
                        .iter()
                        .enumerate()
                        .all(|(k, &t)| t == if k == i { 2 } else { 0 });
                GeneratorEntry {
                    index: i + 1,
                    signs: s.signs().to_vec(),
                    translation: s
                        .translation2()
                        .iter()
                        .map(|&k| {
                            if k % 2 == 0 {
                                (k / 2).to_string()
                            } else {
                                format!("{k}/2")
                            }
                        })
                        .collect(),
                    square: sq.to_string(),
                    square_is_unit_translation: unit,
                }
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            command: "generators",
            dimension: a.dim(),
            generators,
        }
    }
}

impl Report for GeneratorsReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            writeln!(
                s,
                "s{} = (diag({}), ({}))",
                g.index,
                join(&g.signs, ", "),
                g.translation.join(", ")
            )
            .unwrap();
            writeln!(s, "s{}^2 = {}", g.index, g.square).unwrap();
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct TraceStep {
    /// 1-based row of the echelon basis that was added.
    pub basis_row: usize,
    /// The monomial eliminated by this step.
    pub pivot: String,
    pub residual: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub dimension: usize,
    pub kept_columns: Vec<usize>,
    pub reduced_row_sums: Vec<u8>,
    /// Rows `i` with reduced row sum 1 (1-based).
    pub odd_rows: Vec<usize>,
    /// Pairs `(i, j)` with `a_ij = 1` and `j` an odd row (1-based).
    pub obstructions: Vec<(usize, usize)>,
    pub w2: String,
    pub theta: Vec<String>,
    pub theta_basis: Vec<String>,
    pub reduction: Vec<TraceStep>,
    pub residual: String,
    pub spin_theorem: bool,
    pub spin_oracle: bool,
    pub agree: bool,
}

impl VerifyReport {
    pub fn new(a: &BottMatrix) -> Result<Self, Error> {
        let reduced = a.reduce()?;
        let spin_theorem = a.spin_main_theorem()?;
        let p = a.to_pmatrix();
        let (sw, ideal, reduction) = p.w2_reduction();
        let spin_oracle = sw.w1.is_zero() && reduction.is_member();
        let odd_rows = reduced.odd_rows();
        let obstructions = odd_rows
            .iter()
            .flat_map(|&j| {
                (0..a.dim())
                    .filter(move |&i| a.get(i, j))
                    .map(move |i| (i + 1, j + 1))
            })
            .collect();
        let n = a.dim();
        let term = |idx: usize| {
            let mut v = Deg2Vector::zero(n);
            v.flip(idx);
            v.to_polynomial().to_string()
        };
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            command: "verify",
            dimension: n,
            kept_columns: one_based(&reduced.kept_columns),
            reduced_row_sums: bits(&reduced.row_sums),
            odd_rows: one_based(&odd_rows),
            obstructions,
            w2: sw.w2.to_string(),
            theta: sw.thetas.iter().map(|t| t.to_string()).collect(),
            theta_basis: ideal
                .basis()
                .iter()
                .map(|b| b.to_polynomial().to_string())
                .collect(),
            reduction: reduction
                .steps
                .iter()
                .map(|st| TraceStep {
                    basis_row: st.row + 1,
                    pivot: term(st.pivot),
                    residual: st.residual.to_polynomial().to_string(),
                })
                .collect(),
            residual: reduction.residual.to_polynomial().to_string(),
            spin_theorem,
            spin_oracle,
            agree: spin_theorem == spin_oracle,
        })
    }
}

impl Report for VerifyReport {
    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dimension: {}", self.dimension).unwrap();
        writeln!(s, "kept_columns: {}", join(&self.kept_columns, " ")).unwrap();
        writeln!(s, "reduced_row_sums: {}", join(&self.reduced_row_sums, " ")).unwrap();
        writeln!(s, "odd_rows J: {{{}}}", join(&self.odd_rows, ", ")).unwrap();
        let obs: Vec<String> = self
            .obstructions
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        writeln!(s, "obstructions K: {{{}}}", obs.join(", ")).unwrap();
        writeln!(s, "w2 = {}", self.w2).unwrap();
        for (j, t) in self.theta.iter().enumerate() {
            writeln!(s, "theta_{} = {}", j + 1, t).unwrap();
        }
        writeln!(s, "ideal basis (degree 2, echelon form):").unwrap();
        for (k, b) in self.theta_basis.iter().enumerate() {
            writeln!(s, "  b{} = {}", k + 1, b).unwrap();
        }
        writeln!(s, "reduction of w2:").unwrap();
        writeln!(s, "  start: {}", self.w2).unwrap();
        for st in &self.reduction {
            writeln!(
                s,
                "  + b{} (clears {}) -> {}",
                st.basis_row, st.pivot, st.residual
            )
            .unwrap();
        }
        writeln!(s, "residual: {}", self.residual).unwrap();
        writeln!(s, "spin_theorem: {}", self.spin_theorem).unwrap();
        writeln!(s, "spin_oracle: {}", self.spin_oracle).unwrap();
        writeln!(s, "agree: {}", self.agree).unwrap();
        s
    }
}

impl Report for CensusReport {
    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dimension: {}", self.dimension).unwrap();
        writeln!(s, "oracle: {}", self.oracle).unwrap();
        writeln!(s, "total: {}", self.total).unwrap();
        writeln!(s, "kahler: {}", self.kahler_count).unwrap();
        writeln!(s, "orientable: {}", self.orientable_count).unwrap();
        writeln!(s, "spin_by_theorem: {}", self.spin_by_theorem_count).unwrap();
        let o = |v: Option<u64>| v.map_or("n/a".to_owned(), |v| v.to_string());
        writeln!(s, "spin_by_oracle: {}", o(self.spin_by_oracle_count)).unwrap();
        writeln!(
            s,
            "spin_by_oracle_kahler: {}",
            o(self.spin_by_oracle_kahler_count)
        )
        .unwrap();
        writeln!(s, "mismatches: {}", self.mismatch_count).unwrap();
        for m in &self.mismatches {
            writeln!(
                s,
                "  #{} {} theorem={} oracle={}",
                m.index,
                m.rows.join(";"),
                m.spin_theorem,
                m.spin_oracle
            )
            .unwrap();
        }
        writeln!(s, "elapsed_seconds: {:.3}", self.elapsed_seconds).unwrap();
        s
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let emit = |out: &mut dyn Write, text: String| {
        out.write_all(text.as_bytes()).map_err(|e| Failure {
            code: EXIT_INPUT,
            msg: format!("cannot write output: {e}"),
        })
    };
    match cli.command {
        Command::Check(args) => {
            let a = load_bott(&args)?;
            emit(out, CheckReport::new(&a).render(args.format))?;
            Ok(EXIT_OK)
        }
        Command::Sw(args) => {
            let a = load_bott(&args)?;
            emit(out, SwReport::new(&a.to_pmatrix()).render(args.format))?;
            Ok(EXIT_OK)
        }
        Command::Pmatrix(args) => {
            let e = if args.general {
                read_input(&args.input)?.parse::<PMatrix>()?
            } else {
                load_bott(&args.input)?.to_pmatrix()
            };
            emit(out, PmatrixReport::new(&e).render(args.input.format))?;
            Ok(EXIT_OK)
        }
        Command::Generators(args) => {
            let a = load_bott(&args)?;
            emit(out, GeneratorsReport::new(&a).render(args.format))?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let a = load_bott(&args)?;
            let report = VerifyReport::new(&a).map_err(|e| match e {
                Error::NotKahler => Failure {
                    code: EXIT_INPUT,
                    msg: "verify needs a Kähler Bott matrix (columns must pair up)".to_owned(),
                },
                e => e.into(),
            })?;
            emit(out, report.render(args.format))?;
            Ok(if report.agree { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Census(args) => {
            let options = CensusOptions {
                oracle: !args.no_oracle,
                workers: args.workers as usize,
                max_dim: args.max_dim,
            };
            let _ = writeln!(
                err,
                "census: dimension {}, {} matrices, {} worker(s), oracle {}",
                args.dim,
                1u128 << census::free_bits(args.dim).min(127),
                options.workers,
                if options.oracle { "on" } else { "off" }
            );
            let report = census::run_census(args.dim, &options)?;
            let _ = writeln!(
                err,
                "census: done in {:.3}s, {} mismatch(es)",
                report.elapsed_seconds, report.mismatch_count
            );
            emit(out, report.render(args.format))?;
            Ok(census_exit_code(&report))
        }
    }
}

pub fn census_exit_code(report: &CensusReport) -> i32 {
    if report.is_consistent() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

/// Runs the command line with the given arguments (including the program
/// name) and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(rendered.as_bytes());
            return EXIT_INPUT;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
