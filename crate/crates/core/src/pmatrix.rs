//! P-matrices of diagonal `C2^d` actions on the torus `T^n`.
//!
//! Each entry of a P-matrix names one of the four circle automorphisms
//! `g0(z) = z`, `g1(z) = -z`, `g2(z) = conj(z)`, `g3(z) = -conj(z)` that a
//! generator of `C2^d` applies to one coordinate of `T^n`. The set
//! `P = {0, 1, 2, 3}` is a 2-dimensional F2-vector space (`g3 = g1 g2`).
//!
//! From a P-matrix we read off:
//! * whether the action is free and whether `C2^d` is the whole holonomy
//!   group (row-subset criteria);
//! * the classes `alpha_j`, `beta_j`, `theta_j = alpha_j beta_j` in
//!   `F2[x1, ..., xd]`;
//! * the Stiefel-Whitney classes `w1`, `w2` of the quotient, from
//!   `w = prod_j (1 + alpha_j + beta_j)`;
//! * the degree-2 part of the characteristic ideal `<theta_1, ..., theta_n>`,
//!   and with it the spin test `w1 = 0` and `w2` in the ideal.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::f2poly::{Deg2Vector, F2Polynomial, F2RowSpace, Reduction};

/// An element of `P = {0, 1, 2, 3}`, standing for `g0, g1, g2, g3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PEntry(u8);

impl PEntry {
    pub const G0: PEntry = PEntry(0);
    pub const G1: PEntry = PEntry(1);
    pub const G2: PEntry = PEntry(2);
    pub const G3: PEntry = PEntry(3);
    pub const ALL: [PEntry; 4] = [Self::G0, Self::G1, Self::G2, Self::G3];

    pub fn new(value: u8) -> Option<Self> {
        (value < 4).then_some(PEntry(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// The linear form `alpha`: 0, 1, 1, 0 on g0..g3.
    pub fn alpha(self) -> bool {
        (self.0 & 1) ^ (self.0 >> 1) == 1
    }

    /// The linear form `beta`: 0, 1, 0, 1 on g0..g3.
    pub fn beta(self) -> bool {
        self.0 & 1 == 1
    }
}

// g1 and g2 form a basis, with g1 + g2 = g3.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for PEntry {
    type Output = PEntry;

    fn add(self, rhs: PEntry) -> PEntry {
        PEntry(self.0 ^ rhs.0)
    }
}

impl fmt::Display for PEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Degree-1 and degree-2 Stiefel-Whitney data of a P-matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwData {
    pub w1: F2Polynomial,
    pub w2: F2Polynomial,
    /// `theta_1, ..., theta_n`.
    pub thetas: Vec<F2Polynomial>,
}

/// A `d x n` matrix over `P`. Row `i` describes generator `b_i` of `C2^d`,
/// column `j` the `j`-th circle factor of `T^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<PEntry>,
}

impl PMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<PEntry>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows of values in `0..4`. Panics on bad input;
    /// meant for literals.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::new();
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged P-matrix literal");
            entries.extend(
                r.as_ref()
                    .iter()
                    .map(|&v| PEntry::new(v).expect("entry out of range")),
            );
        }
        Self::new(rows.len(), cols, entries).expect("invalid P-matrix literal")
    }

    /// Number of generators `d`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Torus dimension `n`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `p_{ij}`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> PEntry {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[PEntry] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Visits the entrywise sum of every nonempty subset of rows, stopping
    /// early when `visit` returns false. The sums are walked in Gray-code
    /// order, so each step costs one row addition.
    fn all_row_subset_sums(&self, mut visit: impl FnMut(&[u64], &[u64]) -> bool) -> bool {
        assert!(self.rows < 64, "too many generators for subset enumeration");
        let words = self.cols.div_ceil(64);
        // bit planes: entry value = lo + 2*hi
        let mut lo_rows = vec![0u64; self.rows * words];
        let mut hi_rows = vec![0u64; self.rows * words];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j).value() as u64;
                lo_rows[i * words + j / 64] |= (v & 1) << (j % 64);
                hi_rows[i * words + j / 64] |= (v >> 1) << (j % 64);
            }
        }
        let mut lo = vec![0u64; words];
        let mut hi = vec![0u64; words];
        for k in 1u64..(1 << self.rows) {
            let i = k.trailing_zeros() as usize;
            for w in 0..words {
                lo[w] ^= lo_rows[i * words + w];
                hi[w] ^= hi_rows[i * words + w];
            }
            if !visit(&lo, &hi) {
                return false;
            }
        }
        true
    }

    /// The action of `C2^d` on `T^n` is free iff every nonempty sum of rows
    /// has an entry equal to 1. Costs `O(2^d n)`.
    pub fn is_free_action(&self) -> bool {
        self.all_row_subset_sums(|lo, hi| lo.iter().zip(hi).any(|(l, h)| l & !h != 0))
    }

    /// `C2^d` is the holonomy group of the quotient iff every nonempty sum of
    /// rows has an entry equal to 2 or 3. Costs `O(2^d n)`.
    pub fn has_full_holonomy(&self) -> bool {
        self.all_row_subset_sums(|_, hi| hi.iter().any(|&h| h != 0))
    }

    fn check_column(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.cols {
            return Err(Error::ColumnOutOfRange {
                column: j,
                columns: self.cols,
            });
        }
        Ok(())
    }

    fn column_form(&self, j: usize, form: fn(PEntry) -> bool) -> Result<F2Polynomial> {
        self.check_column(j)?;
        Ok(F2Polynomial::linear(
            (0..self.rows)
                .filter(|&i| form(self.get(i, j - 1)))
                .map(|i| i as u32 + 1),
        ))
    }

    /// `alpha_j = sum_i alpha(p_ij) x_i`, for a 1-based column `j`.
    pub fn class_alpha(&self, j: usize) -> Result<F2Polynomial> {
        self.column_form(j, PEntry::alpha)
    }

    /// `beta_j = sum_i beta(p_ij) x_i`, for a 1-based column `j`.
    pub fn class_beta(&self, j: usize) -> Result<F2Polynomial> {
        self.column_form(j, PEntry::beta)
    }

    /// `theta_j = alpha_j beta_j`, for a 1-based column `j`.
    pub fn class_theta(&self, j: usize) -> Result<F2Polynomial> {
        Ok(&self.class_alpha(j)? * &self.class_beta(j)?)
    }

    /// `alpha_j + beta_j`, the factor contributed by column `j` to the total
    /// Stiefel-Whitney class.
    pub fn class_alpha_plus_beta(&self, j: usize) -> Result<F2Polynomial> {
        // alpha + beta is the linear form 0, 0, 1, 1: the high bit
        self.column_form(j, |p| p.value() >> 1 == 1)
    }

    /// `w1` and `w2` as the first two elementary symmetric polynomials of
    /// `c_j = alpha_j + beta_j`, together with all `theta_j`.
    pub fn sw_data(&self) -> SwData {
        let mut e1 = F2Polynomial::zero();
        let mut e2 = F2Polynomial::zero();
        let mut thetas = Vec::with_capacity(self.cols);
        for j in 1..=self.cols {
            let c = self.class_alpha_plus_beta(j).expect("column in range");
            e2 += &(&e1 * &c);
            e1 += &c;
            thetas.push(self.class_theta(j).expect("column in range"));
        }
        SwData {
            w1: e1,
            w2: e2,
            thetas,
        }
    }

    /// `prod_j (1 + alpha_j + beta_j)` truncated at `max_degree`. Only the
    /// parts of degree at most 2 are invariants of the quotient manifold.
    pub fn total_sw_class(&self, max_degree: u32) -> F2Polynomial {
        let one = F2Polynomial::one();
        (1..=self.cols).fold(one.truncate(max_degree), |w, j| {
            let factor = &one + &self.class_alpha_plus_beta(j).expect("column in range");
            w.mul_truncated(&factor, max_degree)
        })
    }

    /// Degree-2 piece of the characteristic ideal: the F2-span of the
    /// `theta_j`, as coordinate vectors in `d` variables.
    pub fn characteristic_ideal_deg2(&self) -> F2RowSpace {
        self.ideal_from_thetas(&self.sw_data().thetas)
    }

    fn ideal_from_thetas(&self, thetas: &[F2Polynomial]) -> F2RowSpace {
        F2RowSpace::span(
            self.rows,
            thetas.iter().map(|t| {
                Deg2Vector::from_polynomial(t, self.rows)
                    .expect("theta is quadratic in d variables")
            }),
        )
        .expect("vectors share the ideal's length")
    }

    pub fn is_orientable(&self) -> bool {
        (1..=self.cols)
            .fold(F2Polynomial::zero(), |acc, j| {
                &acc + &self.class_alpha_plus_beta(j).expect("column in range")
            })
            .is_zero()
    }

    /// Reduction of `w2` against the echelon basis of the degree-2 ideal.
    pub fn w2_reduction(&self) -> (SwData, F2RowSpace, Reduction) {
        let sw = self.sw_data();
        let ideal = self.ideal_from_thetas(&sw.thetas);
        let w2 =
            Deg2Vector::from_polynomial(&sw.w2, self.rows).expect("w2 is quadratic in d variables");
        let reduction = ideal.reduce(&w2).expect("w2 has the ideal's length");
        (sw, ideal, reduction)
    }

    /// Whether `w2` lies in the characteristic ideal, ignoring `w1`.
    pub fn w2_in_ideal(&self) -> bool {
        self.w2_reduction().2.is_member()
    }

    /// Spin test on the quotient: `w1 = 0` and `w2` in the characteristic
    /// ideal.
    pub fn admits_spin(&self) -> bool {
        self.is_orientable() && self.w2_in_ideal()
    }
}

impl fmt::Display for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for p in self.row(i) {
                write!(f, "{p}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| p.to_string()).collect())
            .collect();
        write!(f, "PMatrix[{}]", rows.join(";"))
    }
}

/// One row per line, digits `0`-`3`, whitespace between digits optional.
/// Blank lines and lines starting with `#` are skipped.
impl FromStr for PMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut rows = 0;
        let mut cols = None;
        for (ln, line) in s.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut count = 0;
            for (c, ch) in line.chars().enumerate() {
                if ch.is_whitespace() {
                    continue;
                }
                let p = ch
                    .to_digit(10)
                    .and_then(|v| PEntry::new(v as u8))
                    .ok_or_else(|| {
                        Error::parse(ln + 1, c + 1, format!("expected a digit 0-3, found {ch:?}"))
                    })?;
                entries.push(p);
                count += 1;
            }
            match cols {
                None => cols = Some(count),
                Some(n) if n != count => {
                    return Err(Error::parse(
                        ln + 1,
                        1,
                        format!("row has {count} entries, expected {n}"),
                    ));
                }
                _ => {}
            }
            rows += 1;
        }
        Self::new(rows, cols.unwrap_or(0), entries)
    }
}
