//! Sparse Laurent polynomials over K, Galois action, polynomial maps.

mod json;
mod map;
mod norm;
mod sparse;
mod var;

pub use json::{load_map_file, map_from_json, map_to_json, MapFileError};
pub use map::PolyMap;
pub use norm::{rewrite_norm, NormForm};
pub use sparse::{Monomial, SparsePoly};
pub use var::{VarKind, VarSpec};

use thiserror::Error;

use crate::arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot substitute a non-invertible expression {substitute} for {var} (negative exponent)")]
    NotInvertible { var: String, substitute: String },
    #[error("substitution produces a negative exponent of affine variable {0}")]
    NegativeAffineExponent(String),
    #[error("no value given for variable {0}")]
    MissingValue(String),
    #[error("unit variable {0} evaluated at zero")]
    ZeroUnit(String),
    #[error("not a polynomial in the norm; offending monomials: {}", offending.join(", "))]
    NotNormForm { offending: Vec<String> },
    #[error("variable {0} declared with conflicting kinds or partners")]
    VarConflict(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("component {component} uses undeclared variable {var}")]
    UndeclaredVariable { component: usize, var: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl PolyError {
    pub(crate) fn for_var(self, name: &str) -> Self {
        match self {
            PolyError::NotInvertible { substitute, .. } => PolyError::NotInvertible {
                var: name.to_string(),
                substitute,
            },
            other => other,
        }
    }
}

#[cfg(test)]
mod tests;
