//! Exact computations on real Bott manifolds.
//!
//! A real Bott manifold `M(A)` is determined by a strictly upper triangular
//! matrix `A` over F2. This crate decides whether `M(A)` carries a Kähler
//! structure (column pairing criterion) and whether it admits a spin
//! structure, the latter in two independent ways:
//!
//! * the combinatorial criterion on the reduced matrix and its row sums
//!   ([`bott::BottMatrix::spin_main_theorem`]);
//! * a cohomological oracle that builds the P-matrix of the diagonal torus
//!   action, its Stiefel-Whitney classes and the degree-2 part of its
//!   characteristic ideal, and tests `w2` for membership
//!   ([`pmatrix::PMatrix::admits_spin`]).
//!
//! The [`census`] module enumerates every Bott matrix of a given dimension and
//! checks that both routes agree.

pub mod bott;
pub mod census;
pub mod cli;
pub mod error;
pub mod f2poly;
pub mod pmatrix;

pub use bott::{AffineIsometry, BottMatrix, ReducedMatrix};
pub use census::{CensusOptions, CensusReport};
pub use error::{Error, Result};
pub use f2poly::{Deg2Vector, F2Polynomial, F2RowSpace, Monomial};
pub use pmatrix::{PEntry, PMatrix, SwData};
