use std::fmt;

use num_traits::One;

use super::quad::{Discriminant, QuadElem};
use super::rational::{render_rational, Rational};
use super::ArithError;

/// A point of the norm-one torus S = { z in K* : z * sigma(z) = 1 }.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint {
    value: QuadElem,
}

/// 2x2 matrix over Q, row-major.
pub type RatMatrix2 = [[Rational; 2]; 2];

impl TorusPoint {
    pub fn new(value: QuadElem) -> Result<Self, ArithError> {
        let norm = value.norm();
        if !norm.is_one() {
            return Err(ArithError::NotNormOne {
                value: value.to_string(),
                norm: render_rational(&norm),
            });
        }
        Ok(TorusPoint { value })
    }

    pub fn one(disc: &Discriminant) -> Self {
        TorusPoint {
            value: QuadElem::one(disc),
        }
    }

    pub fn minus_one(disc: &Discriminant) -> Self {
        TorusPoint {
            value: QuadElem::from_int(-1, disc),
        }
    }

    /// Rational parametrization of the conic x^2 - alpha y^2 = 1 through
    /// (-1, 0): slope m gives ((1 + alpha m^2), 2m) / (1 - alpha m^2).
    ///
    /// The denominator never vanishes because alpha is not a square.
    pub fn from_slope(disc: &Discriminant, m: &Rational) -> Self {
        let am2 = disc.alpha() * m * m;
        let den = Rational::one() - &am2;
        let x = (Rational::one() + am2) / &den;
        let y = (m + m) / den;
        TorusPoint {
            value: QuadElem::new(x, y, disc),
        }
    }

    pub fn value(&self) -> &QuadElem {
        &self.value
    }

    pub fn into_value(self) -> QuadElem {
        self.value
    }

    /// On S the inverse is the Galois conjugate.
    pub fn inverse(&self) -> TorusPoint {
        TorusPoint {
            value: self.value.conjugate(),
        }
    }

    pub fn mul(&self, other: &TorusPoint) -> Result<TorusPoint, ArithError> {
        Ok(TorusPoint {
            value: self.value.checked_mul(&other.value)?,
        })
    }

    pub fn pow(&self, exp: i64) -> TorusPoint {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut acc = TorusPoint::one(self.value.disc());
        for _ in 0..exp.unsigned_abs() {
            acc = TorusPoint {
                value: &acc.value * &base.value,
            };
        }
        acc
    }

    /// [[x, alpha*y], [y, x]]: multiplication by the point on the basis {1, t}.
    pub fn matrix(&self) -> RatMatrix2 {
        let x = self.value.x().clone();
        let y = self.value.y().clone();
        let ay = self.value.disc().alpha() * &y;
        [[x.clone(), ay], [y, x]]
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

pub fn mat2_mul(a: &RatMatrix2, b: &RatMatrix2) -> RatMatrix2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_det(a: &RatMatrix2) -> Rational {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}
