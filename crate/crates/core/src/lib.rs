//! Exact symbolic machinery for real-algebraic Levi-flat sets.

pub mod context;
pub mod error;
pub mod foliation;
pub mod forms;
pub mod gaussian;
pub mod groebner;
pub mod hermitian;
pub mod ideal;
pub mod levicheck;
pub mod linalg;
pub mod model;
pub mod monomial;
pub mod parser;
pub mod poly;
pub mod sample;
pub mod segre;
pub mod univariate;

#[cfg(test)]
mod testutil;

pub use context::{Block, VarContext};
pub use error::{Error, Result};
pub use gaussian::GaussianRational;
pub use groebner::{groebner_basis, Budget, GroebnerBasis, DEFAULT_BUDGET};
pub use hermitian::{HermitianPoly, LeviFlatModel};
pub use ideal::{Dimension, Ideal};
pub use monomial::{Monomial, TermOrder};
pub use parser::{parse_poly, print_poly, print_poly_auto, print_poly_display, ParseError};
pub use poly::{poly_arith, ArithOp, Polynomial};
