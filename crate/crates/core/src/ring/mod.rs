//! Exact polynomials over F_p or Q, dense polynomial matrices, and a Gröbner
//! kernel for membership, lifting, syzygies and unimodular inversion.

mod field;
pub mod groebner;
mod linalg;
mod matrix;
pub mod parse;
mod poly;
mod regular;

pub use field::{Coeff, Field};
pub use groebner::{groebner_basis, ideal_gb, ideal_normal_form, solve_lift, solve_lift_with, syzygy_module, GroebnerBasis};
pub use linalg::invert_unimodular;
pub use matrix::PolyMatrix;
pub use parse::{format_poly, parse_poly};
pub use poly::{Monomial, Poly, Ring};
pub use regular::{check_regular_sequence, krull_dimension};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("literal {literal} at byte {pos} is not invertible in the coefficient field")]
    DivisionInCoefficient { pos: usize, literal: String },
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("column {column} is not in the image; residual ({residual})")]
    NotInImage { column: usize, residual: String },
    #[error("matrix is not unimodular; det = {det}")]
    NotUnimodular { det: String },
    #[error("expected exactly 4 generators, got {0}")]
    WrongLength(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// `f / g` for polynomials, failing when `g` does not divide `f`.
pub fn poly_divide_exact(num: &Poly, den: &Poly) -> Result<Poly, RingError> {
    num.divide_exact(den)
}
