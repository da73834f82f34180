//! Exhaustive census of Bott matrices of one dimension.
//!
//! Matrices are indexed by the `m = n(n-1)/2` entries above the diagonal read
//! row by row as a binary numeral, most significant bit first: index `k`
//! sets `a_{12}` iff bit `m-1` of `k` is set, and so on down to
//! `a_{n-1,n}` at bit 0. The index space `[0, 2^m)` is cut into contiguous
//! shards that run on separate threads and merge by adding counts.

use std::ops::Range;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bott::BottMatrix;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Default dimension ceiling when every matrix is also run through the
/// cohomological oracle.
pub const DEFAULT_MAX_DIM_ORACLE: usize = 8;
/// Default dimension ceiling for the combinatorial criterion alone.
pub const DEFAULT_MAX_DIM_THEOREM: usize = 9;
/// Hard limit: the index space must fit in a `u64`.
pub const HARD_MAX_DIM: usize = 11;

/// At most this many mismatching matrices are stored in a report.
pub const MISMATCH_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    pub oracle: bool,
    pub workers: usize,
    /// Overrides the default ceiling for the chosen mode.
    pub max_dim: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            oracle: true,
            workers: 1,
            max_dim: None,
        }
    }
}

impl CensusOptions {
    pub fn ceiling(&self) -> usize {
        let default = if self.oracle {
            DEFAULT_MAX_DIM_ORACLE
        } else {
            DEFAULT_MAX_DIM_THEOREM
        };
        self.max_dim.unwrap_or(default).min(HARD_MAX_DIM)
    }
}

/// A matrix on which the combinatorial criterion and the oracle disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: u64,
    pub rows: Vec<String>,
    pub spin_theorem: bool,
    pub spin_oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub dimension: usize,
    pub oracle: bool,
    /// `2^(n(n-1)/2)`.
    pub total: u64,
    pub kahler_count: u64,
    pub orientable_count: u64,
    pub spin_by_theorem_count: u64,
    /// Oracle verdicts over all matrices; `None` when the oracle is off.
    pub spin_by_oracle_count: Option<u64>,
    /// Oracle verdicts over the Kähler matrices only.
    pub spin_by_oracle_kahler_count: Option<u64>,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
    pub mismatches_truncated: bool,
    pub elapsed_seconds: f64,
}

impl CensusReport {
    pub fn is_consistent(&self) -> bool {
        self.mismatch_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Number of entries above the diagonal.
pub fn free_bits(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn check_dim(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > max.min(HARD_MAX_DIM) {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: max.min(HARD_MAX_DIM),
        });
    }
    Ok(())
}

/// The Bott matrix with the given counter index. `index < 2^(n(n-1)/2)`.
pub fn matrix_at(n: usize, index: u64) -> BottMatrix {
    let m = free_bits(n);
    debug_assert!(m == 64 || index >> m == 0);
    let mut cols = vec![0u64; n];
    let mut bit = m;
    for i in 0..n {
        for col in cols.iter_mut().skip(i + 1) {
            bit -= 1;
            *col |= (index >> bit & 1) << i;
        }
    }
    BottMatrix::from_columns(cols).expect("strictly upper triangular by construction")
}

/// All Bott matrices of dimension `n`, in counter order.
pub fn enumerate_bott(n: usize, max_dim: usize) -> Result<impl Iterator<Item = BottMatrix>> {
    check_dim(n, max_dim)?;
    Ok((0..1u64 << free_bits(n)).map(move |k| matrix_at(n, k)))
}

/// Splits `[0, 2^(n(n-1)/2))` into at most `workers` contiguous nonempty
/// ranges whose sizes differ by at most one.
pub fn partition_space(n: usize, workers: usize) -> Vec<Range<u64>> {
    assert!(workers >= 1, "need at least one worker");
    let total = 1u64 << free_bits(n);
    let parts = (workers as u64).min(total);
    let (base, extra) = (total / parts, total % parts);
    let mut start = 0;
    (0..parts)
        .map(|k| {
            let len = base + u64::from(k < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

#[derive(Default)]
struct Tally {
    kahler: u64,
    orientable: u64,
    spin_theorem: u64,
    spin_oracle: u64,
    spin_oracle_kahler: u64,
    mismatch_count: u64,
    mismatches: Vec<Mismatch>,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.kahler += other.kahler;
        self.orientable += other.orientable;
        self.spin_theorem += other.spin_theorem;
        self.spin_oracle += other.spin_oracle;
        self.spin_oracle_kahler += other.spin_oracle_kahler;
        self.mismatch_count += other.mismatch_count;
        let room = MISMATCH_CAP - self.mismatches.len();
        self.mismatches
            .extend(other.mismatches.into_iter().take(room));
    }
}

fn run_shard(n: usize, range: Range<u64>, oracle: bool) -> Tally {
    let mut t = Tally::default();
    for index in range {
        let a = matrix_at(n, index);
        t.orientable += a.is_orientable() as u64;
        let by_oracle = oracle.then(|| a.spin_oracle());
        t.spin_oracle += by_oracle.unwrap_or(false) as u64;
        if !a.is_kahler() {
            continue;
        }
        t.kahler += 1;
        let by_theorem = a.spin_main_theorem().expect("Kähler checked above");
        t.spin_theorem += by_theorem as u64;
        if let Some(by_oracle) = by_oracle {
            t.spin_oracle_kahler += by_oracle as u64;
            if by_oracle != by_theorem {
                t.mismatch_count += 1;
                if t.mismatches.len() < MISMATCH_CAP {
                    t.mismatches.push(Mismatch {
                        index,
                        rows: a.to_string().lines().map(str::to_owned).collect(),
                        spin_theorem: by_theorem,
                        spin_oracle: by_oracle,
                    });
                }
            }
        }
    }
    t
}

/// Runs the census of dimension `n`. Counts do not depend on
/// `options.workers`.
pub fn run_census(n: usize, options: &CensusOptions) -> Result<CensusReport> {
    check_dim(n, options.ceiling())?;
    let start = Instant::now();
    let ranges = partition_space(n, options.workers.max(1));
    let oracle = options.oracle;

    let tallies: Vec<Tally> = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| scope.spawn(move || run_shard(n, r, oracle)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census shard panicked"))
            .collect()
    });
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t);
    }

    Ok(CensusReport {
        schema_version: SCHEMA_VERSION,
        dimension: n,
        oracle,
        total: 1u64 << free_bits(n),
        kahler_count: total.kahler,
        orientable_count: total.orientable,
        spin_by_theorem_count: total.spin_theorem,
        spin_by_oracle_count: oracle.then_some(total.spin_oracle),
        spin_by_oracle_kahler_count: oracle.then_some(total.spin_oracle_kahler),
        mismatch_count: total.mismatch_count,
        mismatches_truncated: total.mismatch_count > total.mismatches.len() as u64,
        mismatches: total.mismatches,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
