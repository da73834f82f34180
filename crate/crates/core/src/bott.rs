//! Bott matrices and the real Bott manifolds they define.
//!
//! A Bott matrix is a strictly upper triangular `n x n` matrix `A` over F2.
//! It determines the crystallographic group `Γ(A)` generated by the affine
//! isometries [`BottMatrix::generators`], and the flat manifold
//! `M(A) = R^n / Γ(A)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pmatrix::{PEntry, PMatrix};

/// Largest supported dimension; columns are stored as 64-bit masks.
pub const MAX_DIM: usize = 64;

/// A strictly upper triangular square matrix over F2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BottMatrix {
    n: usize,
    // cols[j] bit i  <=>  a_{ij} = 1  (0-based)
    cols: Vec<u64>,
}

impl BottMatrix {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&n));
        Self {
            n,
            cols: vec![0; n],
        }
    }

    /// Validates a square array of 0/1 values.
    pub fn validate<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                max: MAX_DIM,
            });
        }
        let mut cols = vec![0u64; n];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 if i < j => cols[j] |= 1 << i,
                    1 => {
                        return Err(Error::NotStrictlyUpperTriangular {
                            row: i + 1,
                            col: j + 1,
                        })
                    }
                    _ => {
                        return Err(Error::parse(
                            i + 1,
                            j + 1,
                            format!("entry {v} is not 0 or 1"),
                        ))
                    }
                }
            }
        }
        Ok(Self { n, cols })
    }

    /// Builds a matrix from column masks (bit `i` of `cols[j]` is `a_{ij}`).
    pub fn from_columns(cols: Vec<u64>) -> Result<Self> {
        let n = cols.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: n,
                max: MAX_DIM,
            });
        }
        for (j, &c) in cols.iter().enumerate() {
            let allowed = if j == 0 { 0 } else { u64::MAX >> (64 - j) };
            if c & !allowed != 0 {
                let i = (c & !allowed).trailing_zeros() as usize;
                return Err(Error::NotStrictlyUpperTriangular {
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
        Ok(Self { n, cols })
    }

    /// Parses rows separated by `;`, e.g. `"011;001;000"`.
    pub fn parse_inline(s: &str) -> Result<Self> {
        s.replace(';', "\n").parse()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `a_{ij}`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j] >> i & 1 == 1
    }

    /// Column `A^(j)` as a bit mask, 0-based.
    pub fn column(&self, j: usize) -> u64 {
        self.cols[j]
    }

    pub fn columns(&self) -> &[u64] {
        &self.cols
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    /// The P-matrix `P_A`: 1 on the diagonal, 2 where `a_ij = 1`, 0 elsewhere.
    pub fn to_pmatrix(&self) -> PMatrix {
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                entries.push(if i == j {
                    PEntry::G1
                } else if self.get(i, j) {
                    PEntry::G2
                } else {
                    PEntry::G0
                });
            }
        }
        PMatrix::new(self.n, self.n, entries).expect("square and nonempty")
    }

    /// Kähler criterion: `n` is even and the columns split into pairs of
    /// equal ones. A pairing exists iff every column value occurs an even
    /// number of times.
    pub fn is_kahler(&self) -> bool {
        if !self.n.is_multiple_of(2) {
            return false;
        }
        let mut sorted = self.cols.clone();
        sorted.sort_unstable();
        sorted.chunks_exact(2).all(|p| p[0] == p[1])
    }

    /// Keeps one column out of each equal pair. For a column value of
    /// multiplicity `2m` the `m` smallest indices are kept; the kept indices
    /// are listed in increasing order.
    pub fn reduce(&self) -> Result<ReducedMatrix> {
        if !self.is_kahler() {
            return Err(Error::NotKahler);
        }
        let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (j, &c) in self.cols.iter().enumerate() {
            classes.entry(c).or_default().push(j);
        }
        let mut kept: Vec<usize> = classes
            .values()
            .flat_map(|idx| idx[..idx.len() / 2].iter().copied())
            .collect();
        kept.sort_unstable();
        let columns: Vec<u64> = kept.iter().map(|&j| self.cols[j]).collect();
        let parity = columns.iter().fold(0u64, |acc, c| acc ^ c);
        Ok(ReducedMatrix {
            rows: self.n,
            kept_columns: kept,
            columns,
            row_sums: (0..self.n).map(|i| parity >> i & 1 == 1).collect(),
        })
    }

    /// Spin criterion for Kähler Bott matrices: whenever the reduced row sum
    /// `S̃_i` is 1, the column `A^(i)` must vanish.
    pub fn spin_main_theorem(&self) -> Result<bool> {
        let reduced = self.reduce()?;
        Ok(reduced
            .row_sums
            .iter()
            .zip(&self.cols)
            .all(|(&s, &c)| !s || c == 0))
    }

    /// Cohomological spin test on `P_A`; defined for every Bott matrix.
    pub fn spin_oracle(&self) -> bool {
        self.to_pmatrix().admits_spin()
    }

    /// `w1 = sum_i (row sum of A)_i x_i`, so `M(A)` is orientable iff every
    /// row of `A` has an even number of ones.
    pub fn is_orientable(&self) -> bool {
        self.cols.iter().fold(0u64, |acc, c| acc ^ c) == 0
    }

    /// True iff the nonzero columns split into 4-element groups of equal
    /// columns. Such matrices always admit a spin structure.
    pub fn corollary_check(&self) -> Result<bool> {
        if !self.is_kahler() {
            return Err(Error::NotKahler);
        }
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for &c in self.cols.iter().filter(|&&c| c != 0) {
            *counts.entry(c).or_default() += 1;
        }
        Ok(counts.values().all(|&m| m % 4 == 0))
    }

    /// Generators `s_1, ..., s_n` of `Γ(A)`. `s_i` negates coordinates
    /// `k > i` with `a_ik = 1` and translates by `e_i / 2`.
    pub fn generators(&self) -> Vec<AffineIsometry> {
        (0..self.n)
            .map(|i| {
                let signs = (0..self.n)
                    .map(|k| if self.get(i, k) { -1 } else { 1 })
                    .collect();
                let mut translation2 = vec![0; self.n];
                translation2[i] = 1;
                AffineIsometry {
                    signs,
                    translation2,
                }
            })
            .collect()
    }
}

impl fmt::Display for BottMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BottMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|b| b.to_string()).collect())
            .collect();
        write!(f, "BottMatrix[{}]", rows.join(";"))
    }
}

/// Text format: an optional first line holding `n`, then `n` rows of `n`
/// characters `0`/`1`. Spaces inside rows, blank lines and `#` comment lines
/// are ignored.
///
/// A first line made of `0`/`1` only is read as the header when it has no
/// leading zero and the number of rows after it equals its value, and as a
/// row otherwise. No valid matrix file is ambiguous under this rule.
impl FromStr for BottMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = s
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l))
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .collect();
        let Some(&(first_ln, first)) = lines.first() else {
            return Err(Error::Empty);
        };

        let compact: String = first.chars().filter(|c| !c.is_whitespace()).collect();
        let header = compact
            .parse::<usize>()
            .ok()
            .filter(|_| compact.chars().all(|c| c.is_ascii_digit()) && !compact.starts_with('0'));
        let body = match header {
            Some(n) if compact.chars().any(|c| c != '0' && c != '1') => {
                if lines.len() - 1 != n {
                    return Err(Error::parse(
                        first_ln,
                        1,
                        format!("header declares {n} rows, found {}", lines.len() - 1),
                    ));
                }
                &lines[1..]
            }
            Some(n) if lines.len() - 1 == n && n > 0 => &lines[1..],
            _ => &lines[..],
        };

        let n = body.len();
        let mut rows = Vec::with_capacity(n);
        for &(ln, line) in body {
            let mut row = Vec::with_capacity(n);
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => row.push(0u8),
                    '1' => row.push(1u8),
                    ch if ch.is_whitespace() => {}
                    ch => {
                        return Err(Error::parse(
                            ln,
                            c + 1,
                            format!("expected 0 or 1, found {ch:?}"),
                        ))
                    }
                }
            }
            if row.len() != n {
                return Err(Error::parse(
                    ln,
                    1,
                    format!("row has {} entries, expected {n}", row.len()),
                ));
            }
            rows.push(row);
        }
        Self::validate(&rows)
    }
}

/// The reduced matrix `Ã` of a Kähler Bott matrix together with its row
/// sums `S̃`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedMatrix {
    pub rows: usize,
    pub kept_columns: Vec<usize>,
    pub columns: Vec<u64>,
    pub row_sums: Vec<bool>,
}

impl ReducedMatrix {
    /// Rows with `S̃_i = 1`, 0-based.
    pub fn odd_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&i| self.row_sums[i]).collect()
    }

    pub fn get(&self, i: usize, k: usize) -> bool {
        self.columns[k] >> i & 1 == 1
    }
}

/// An isometry `x -> Sx + t` of `R^n` with `S` diagonal with entries `±1`
/// and `t` a half-integer vector. Translations are stored doubled, so a
/// stored `k` means `k/2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineIsometry {
    signs: Vec<i8>,
    translation2: Vec<i64>,
}

impl AffineIsometry {
    pub fn identity(n: usize) -> Self {
        Self {
            signs: vec![1; n],
            translation2: vec![0; n],
        }
    }

    /// `signs` must be `±1`; `translation2` holds twice the translation.
    pub fn new(signs: Vec<i8>, translation2: Vec<i64>) -> Result<Self> {
        if signs.len() != translation2.len() {
            return Err(Error::DimensionMismatch {
                left: signs.len(),
                right: translation2.len(),
            });
        }
        assert!(signs.iter().all(|s| s.abs() == 1), "signs must be ±1");
        Ok(Self {
            signs,
            translation2,
        })
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Twice the translation part.
    pub fn translation2(&self) -> &[i64] {
        &self.translation2
    }

    pub fn is_pure_translation(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    /// `self ∘ other`, i.e. `(S, a)(T, b) = (ST, Sb + a)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let signs = self
            .signs
            .iter()
            .zip(&other.signs)
            .map(|(s, t)| s * t)
            .collect();
        let translation2 = self
            .signs
            .iter()
            .zip(&other.translation2)
            .zip(&self.translation2)
            .map(|((&s, &b), &a)| s as i64 * b + a)
            .collect();
        Ok(Self {
            signs,
            translation2,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            signs: self.signs.clone(),
            translation2: self
                .signs
                .iter()
                .zip(&self.translation2)
                .map(|(&s, &a)| -(s as i64) * a)
                .collect(),
        }
    }

    /// Applies the isometry to a point given in half units.
    pub fn apply2(&self, x2: &[i64]) -> Vec<i64> {
        self.signs
            .iter()
            .zip(x2)
            .zip(&self.translation2)
            .map(|((&s, &x), &a)| s as i64 * x + a)
            .collect()
    }
}

fn half(k: i64) -> String {
    if k % 2 == 0 {
        (k / 2).to_string()
    } else {
        format!("{k}/2")
    }
}

impl fmt::Display for AffineIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.signs.iter().map(|s| s.to_string()).collect();
        let t: Vec<String> = self.translation2.iter().map(|&k| half(k)).collect();
        write!(f, "(diag({}), ({}))", s.join(", "), t.join(", "))
    }
}
