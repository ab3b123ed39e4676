//! Exact arithmetic in Q and in quadratic extensions K = Q(t), t^2 = alpha.

mod quad;
mod rational;
mod torus;

pub use quad::{Discriminant, QuadElem};
pub use rational::{
    int, is_square_rational, parse_rational, parse_rational_lenient, rat, render_rational,
    ParseRationalError, Rational,
};
pub use torus::{mat2_det, mat2_mul, RatMatrix2, TorusPoint};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("alpha = {0} is a square in Q")]
    SquareDiscriminant(String),
    #[error("mismatched discriminants {left} and {right}")]
    MismatchedDiscriminant { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{value} is not on the norm-one torus (norm {norm})")]
    NotNormOne { value: String, norm: String },
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}
