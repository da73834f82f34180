//! Sparse multivariate polynomials over F2 and linear algebra on the
//! degree-2 graded piece of `F2[x1, ..., xd]`.
//!
//! A polynomial is a set of monomials (every coefficient is 1). Monomials are
//! ordered by degree first and then lexicographically with `x1 > x2 > ...`,
//! so iteration and printing go `1 + x1 + x2 + x1^2 + x1*x2 + x2^2 + ...`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use crate::error::{Error, Result};

/// A monomial `x_{i1}^{e1} ... x_{ik}^{ek}` with 1-based variable indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    // variable index -> exponent, never zero
    exps: BTreeMap<u32, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// The monomial `x_i`. Panics if `i == 0`.
    pub fn var(i: u32) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: u32, e: u32) -> Self {
        assert!(i >= 1, "variables are indexed from 1");
        let mut exps = BTreeMap::new();
        if e > 0 {
            exps.insert(i, e);
        }
        Self { exps }
    }

    /// Builds a monomial from `(variable, exponent)` pairs; repeated variables
    /// multiply and zero exponents are dropped.
    pub fn from_exponents(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m = Self::one();
        for (i, e) in pairs {
            m = &m * &Self::var_pow(i, e);
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.exps.get(&var).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// `(variable, exponent)` pairs in increasing variable order.
    pub fn exponents(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps.iter().map(|(&i, &e)| (i, e))
    }

    pub fn max_variable(&self) -> Option<u32> {
        self.exps.keys().next_back().copied()
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (&i, &e) in &rhs.exps {
            *exps.entry(i).or_insert(0) += e;
        }
        Monomial { exps }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let vars: BTreeSet<u32> = self.exps.keys().chain(other.exps.keys()).copied().collect();
            for v in vars {
                match self.exponent(v).cmp(&other.exponent(v)) {
                    Ordering::Equal => continue,
                    // lex-larger monomial comes first within a degree
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (i, e)) in self.exponents().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A polynomial over F2, stored as the set of monomials with coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Polynomial {
    terms: BTreeSet<Monomial>,
}

impl F2Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(Monomial::one())
    }

    pub fn var(i: u32) -> Self {
        Self::from(Monomial::var(i))
    }

    /// Sums the given monomials; a monomial listed twice cancels.
    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero();
        for m in monomials {
            p.toggle(m);
        }
        p
    }

    /// Sum of the variables `x_i` for the given indices.
    pub fn linear(vars: impl IntoIterator<Item = u32>) -> Self {
        Self::from_monomials(vars.into_iter().map(Monomial::var))
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().next_back().map(Monomial::degree)
    }

    pub fn max_variable(&self) -> Option<u32> {
        self.terms.iter().filter_map(Monomial::max_variable).max()
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.iter().all(|m| m.degree() == k)
    }

    /// Sum of the terms of degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|m| m.degree() == k)
                .cloned()
                .collect(),
        }
    }

    /// Sum of the terms of degree at most `k`.
    pub fn truncate(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|m| m.degree() <= k)
                .cloned()
                .collect(),
        }
    }

    /// `self * rhs` with every term of degree above `k` discarded.
    pub fn mul_truncated(&self, rhs: &Self, k: u32) -> Self {
        let mut out = Self::zero();
        for a in &self.terms {
            if a.degree() > k {
                continue;
            }
            for b in &rhs.terms {
                if a.degree() + b.degree() <= k {
                    out.toggle(a * b);
                }
            }
        }
        out
    }
}

impl From<Monomial> for F2Polynomial {
    fn from(m: Monomial) -> Self {
        Self {
            terms: BTreeSet::from([m]),
        }
    }
}

impl AddAssign<&F2Polynomial> for F2Polynomial {
    fn add_assign(&mut self, rhs: &F2Polynomial) {
        for m in &rhs.terms {
            self.toggle(m.clone());
        }
    }
}

impl Add for &F2Polynomial {
    type Output = F2Polynomial;

    fn add(self, rhs: &F2Polynomial) -> F2Polynomial {
        F2Polynomial {
            terms: self
                .terms
                .symmetric_difference(&rhs.terms)
                .cloned()
                .collect(),
        }
    }
}

impl Add for F2Polynomial {
    type Output = F2Polynomial;

    fn add(self, rhs: F2Polynomial) -> F2Polynomial {
        &self + &rhs
    }
}

impl Mul for &F2Polynomial {
    type Output = F2Polynomial;

    fn mul(self, rhs: &F2Polynomial) -> F2Polynomial {
        let mut out = F2Polynomial::zero();
        for a in &self.terms {
            for b in &rhs.terms {
                out.toggle(a * b);
            }
        }
        out
    }
}

impl Mul for F2Polynomial {
    type Output = F2Polynomial;

    fn mul(self, rhs: F2Polynomial) -> F2Polynomial {
        &self * &rhs
    }
}

impl fmt::Display for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the rendering produced by `Display`, e.g. `1 + x1 + x1*x2^3`.
/// Terms are summed over F2, so `x1 + x1` parses to `0`.
impl FromStr for F2Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for (t, term) in s.split('+').enumerate() {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::parse(1, t + 1, "empty term"));
            }
            if term == "1" {
                p.toggle(Monomial::one());
                continue;
            }
            let mut m = Monomial::one();
            for factor in term.split('*') {
                let factor = factor.trim();
                let body = factor
                    .strip_prefix('x')
                    .ok_or_else(|| Error::parse(1, t + 1, format!("bad factor {factor:?}")))?;
                let (var, exp) = match body.split_once('^') {
                    Some((v, e)) => (v, e),
                    None => (body, "1"),
                };
                let var: u32 = var
                    .parse()
                    .map_err(|_| Error::parse(1, t + 1, format!("bad variable in {factor:?}")))?;
                let exp: u32 = exp
                    .parse()
                    .map_err(|_| Error::parse(1, t + 1, format!("bad exponent in {factor:?}")))?;
                if var == 0 {
                    return Err(Error::parse(1, t + 1, "variables are indexed from 1"));
                }
                m = &m * &Monomial::var_pow(var, exp);
            }
            p.toggle(m);
        }
        Ok(p)
    }
}

/// Position of `x_i * x_j` (`1 <= i <= j <= d`) in a degree-2 coordinate
/// vector. Pairs are laid out row by row:
/// `(1,1), (1,2), ..., (1,d), (2,2), ..., (2,d), ..., (d,d)`,
/// so `(i, j)` sits at `(i-1)(d+1) - (i-1)i/2 + (j-i)`.
pub fn pair_index(i: usize, j: usize, d: usize) -> usize {
    debug_assert!(1 <= i && i <= j && j <= d);
    (i - 1) * (d + 1) - (i - 1) * i / 2 + (j - i)
}

/// Inverse of [`pair_index`].
pub fn index_pair(mut idx: usize, d: usize) -> (usize, usize) {
    for i in 1..=d {
        let row = d - i + 1;
        if idx < row {
            return (i, i + idx);
        }
        idx -= row;
    }
    panic!("index out of range for d = {d}");
}

/// Coordinates of a homogeneous degree-2 polynomial in `d` variables.
/// Bit `pair_index(i, j, d)` is the coefficient of `x_i * x_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Deg2Vector {
    vars: usize,
    words: Vec<u64>,
}

impl Deg2Vector {
    pub fn zero(vars: usize) -> Self {
        let len = vars * (vars + 1) / 2;
        Self {
            vars,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Coordinate vector of `p` in `vars` variables.
    pub fn from_polynomial(p: &F2Polynomial, vars: usize) -> Result<Self> {
        let mut v = Self::zero(vars);
        for m in p.terms() {
            if m.degree() != 2 {
                return Err(Error::NotHomogeneousDegree2 {
                    term: m.to_string(),
                    degree: m.degree(),
                });
            }
            let mut idx = m
                .exponents()
                .flat_map(|(i, e)| std::iter::repeat_n(i, e as usize));
            let (i, j) = (idx.next().unwrap(), idx.next().unwrap());
            if j as usize > vars {
                return Err(Error::VariableOutOfRange { index: j, vars });
            }
            v.flip(pair_index(i as usize, j as usize, vars));
        }
        Ok(v)
    }

    pub fn to_polynomial(&self) -> F2Polynomial {
        F2Polynomial::from_monomials(self.ones().map(|idx| {
            let (i, j) = index_pair(idx, self.vars);
            &Monomial::var(i as u32) * &Monomial::var(j as u32)
        }))
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.vars * (self.vars + 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, idx: usize) -> bool {
        assert!(idx < self.len());
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn flip(&mut self, idx: usize) {
        assert!(idx < self.len());
        self.words[idx / 64] ^= 1 << (idx % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set coordinate.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.get(k))
    }

    fn xor_assign(&mut self, rhs: &Self) {
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for Deg2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len() {
            f.write_str(if self.get(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// One elimination step: basis row `row` (pivot coordinate `pivot`) was
/// added to the vector being reduced, leaving `residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub row: usize,
    pub pivot: usize,
    pub residual: Deg2Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub steps: Vec<ReductionStep>,
    pub residual: Deg2Vector,
}

impl Reduction {
    pub fn is_member(&self) -> bool {
        self.residual.is_zero()
    }
}

/// An F2-subspace of degree-2 coordinate space, kept in reduced row-echelon
/// form: rows are nonzero, sorted by strictly increasing pivot, and each pivot
/// column is zero in every other row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2RowSpace {
    vars: usize,
    basis: Vec<Deg2Vector>,
}

impl F2RowSpace {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            basis: Vec::new(),
        }
    }

    pub fn span(vars: usize, vectors: impl IntoIterator<Item = Deg2Vector>) -> Result<Self> {
        let mut space = Self::new(vars);
        for v in vectors {
            space.insert(v)?;
        }
        Ok(space)
    }

    fn check_len(&self, v: &Deg2Vector) -> Result<()> {
        if v.vars != self.vars {
            return Err(Error::LengthMismatch {
                expected: self.vars * (self.vars + 1) / 2,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Adds `v` to the spanning set. Returns whether the dimension grew.
    pub fn insert(&mut self, v: Deg2Vector) -> Result<bool> {
        let v = self.reduce(&v)?.residual;
        let Some(pivot) = v.leading() else {
            return Ok(false);
        };
        // v is clear at every existing pivot; clear its pivot in the others.
        for row in &mut self.basis {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        let at = self.basis.partition_point(|r| r.leading() < Some(pivot));
        self.basis.insert(at, v);
        Ok(true)
    }

    /// Reduces `v` against the basis, recording every row used.
    pub fn reduce(&self, v: &Deg2Vector) -> Result<Reduction> {
        self.check_len(v)?;
        let mut residual = v.clone();
        let mut steps = Vec::new();
        for (row, b) in self.basis.iter().enumerate() {
            let pivot = b.leading().expect("basis rows are nonzero");
            if residual.get(pivot) {
                residual.xor_assign(b);
                steps.push(ReductionStep {
                    row,
                    pivot,
                    residual: residual.clone(),
                });
            }
        }
        Ok(Reduction { steps, residual })
    }

    pub fn contains(&self, v: &Deg2Vector) -> Result<bool> {
        Ok(self.reduce(v)?.is_member())
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Deg2Vector] {
        &self.basis
    }

    pub fn vars(&self) -> usize {
        self.vars
    }
}
