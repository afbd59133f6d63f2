//! Exact Berglund–Hübsch mirror symmetry for `W = x_0^k + f`.

pub mod catalog;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod milnor;
pub mod mirror;
pub mod poly;
pub mod statespace;
pub mod symmetry;

pub use error::{Error, Result};
pub use linalg::Q;
pub use poly::{Atom, InvertiblePolynomial};
pub use symmetry::{CyclicSetup, DiagonalSymmetry, GroupSpec, SymmetryGroup};
