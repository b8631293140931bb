//! Exact algebra: number field towers, polynomials, factorization, linear
//! algebra and truncated power series.

pub mod bipoly;
pub mod factor;
pub mod factor_q;
pub mod field;
pub mod form;
pub mod irreducible;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod pseries;

pub use field::{Elem, Extension, FieldTower, Level};
pub use poly::{BPoly, UPoly};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial has no root")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("parse error: {0}")]
    Parse(String),
}
