//! Exact computation of vector partition functions as piecewise
//! quasipolynomials over a chamber complex.

pub mod arith;
pub mod complex;
pub mod cones;
pub mod elementary;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod partfrac;
pub mod poly;
pub mod quasipoly;
pub mod roots;

pub use arith::{IntVector, Rational, RationalMatrix, RationalVector};
pub use complex::ChamberComplex;
pub use cones::{Chamber, SplitResult};
pub use engine::{compute, compute_elementary, compute_pf, evaluate_result, identity_check, Algorithm, Strategy, VpfResult};
pub use error::{Error, Result};
pub use lattice::Lattice;
pub use oracle::count_partitions;
pub use partfrac::PartialFractionSum;
pub use poly::Polynomial;
pub use quasipoly::QuasiPolynomial;
pub use roots::root_system;
