//! Elements x + t*y of K = Q(t), t^2 = alpha, for a rational non-square alpha.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rational::{is_square_rational, parse_rational_lenient, render_rational, Rational};
use super::ArithError;

#[derive(Debug)]
struct DiscInner {
    alpha: Rational,
    validated: bool,
}

/// The defining constant alpha of K = Q[X]/(X^2 - alpha).
///
/// Cheap to clone; every [`QuadElem`] carries one.
#[derive(Clone, Debug)]
pub struct Discriminant(Arc<DiscInner>);

impl Discriminant {
    /// Rejects rational squares, for which Q[X]/(X^2 - alpha) is not a field.
    pub fn new(alpha: Rational) -> Result<Self, ArithError> {
        if is_square_rational(&alpha) {
            return Err(ArithError::SquareDiscriminant(render_rational(&alpha)));
        }
        Ok(Discriminant(Arc::new(DiscInner {
            alpha,
            validated: true,
        })))
    }

    pub fn from_int(alpha: i64) -> Result<Self, ArithError> {
        Self::new(Rational::from_integer(alpha.into()))
    }

    pub fn parse(s: &str) -> Result<Self, ArithError> {
        let alpha = parse_rational_lenient(s).map_err(ArithError::Parse)?;
        Self::new(alpha)
    }

    /// Builds the algebra Q[X]/(X^2 - alpha) without the non-square check.
    ///
    /// The result is not a field when alpha is a square; only meant for
    /// exercising code paths that must refuse to run on such an algebra.
    #[doc(hidden)]
    pub fn new_unchecked(alpha: Rational) -> Self {
        let validated = !is_square_rational(&alpha);
        Discriminant(Arc::new(DiscInner { alpha, validated }))
    }

    pub fn alpha(&self) -> &Rational {
        &self.0.alpha
    }

    /// Whether the norm form x^2 - alpha y^2 is known to be anisotropic.
    pub fn is_anisotropic(&self) -> bool {
        self.0.validated
    }
}

impl PartialEq for Discriminant {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.alpha == other.0.alpha
    }
}

impl Eq for Discriminant {}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_rational(&self.0.alpha))
    }
}

/// An element x + t*y of K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    x: Rational,
    y: Rational,
    disc: Discriminant,
}

impl QuadElem {
    pub fn new(x: Rational, y: Rational, disc: &Discriminant) -> Self {
        QuadElem {
            x,
            y,
            disc: disc.clone(),
        }
    }

    pub fn from_rational(x: Rational, disc: &Discriminant) -> Self {
        Self::new(x, Rational::zero(), disc)
    }

    pub fn from_int(n: i64, disc: &Discriminant) -> Self {
        Self::from_rational(Rational::from_integer(n.into()), disc)
    }

    pub fn zero(disc: &Discriminant) -> Self {
        Self::from_int(0, disc)
    }

    pub fn one(disc: &Discriminant) -> Self {
        Self::from_int(1, disc)
    }

    /// The generator t with t^2 = alpha. Also serves as the anti-invariant
    /// element j (sigma(j) = -j).
    pub fn t(disc: &Discriminant) -> Self {
        Self::new(Rational::zero(), Rational::one(), disc)
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// True when the t-part vanishes, i.e. the element lies in the base field.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// The Galois conjugate x - t*y.
    pub fn conjugate(&self) -> Self {
        QuadElem {
            x: self.x.clone(),
            y: -&self.y,
            disc: self.disc.clone(),
        }
    }

    /// N(x + t*y) = x^2 - alpha*y^2.
    pub fn norm(&self) -> Rational {
        &self.x * &self.x - self.disc.alpha() * &self.y * &self.y
    }

    /// z + sigma(z) = 2x.
    pub fn trace(&self) -> Rational {
        &self.x + &self.x
    }

    fn check_disc(&self, other: &QuadElem) -> Result<(), ArithError> {
        if self.disc != other.disc {
            return Err(ArithError::MismatchedDiscriminant {
                left: self.disc.to_string(),
                right: other.disc.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &QuadElem) -> Result<QuadElem, ArithError> {
        self.check_disc(other)?;
        Ok(QuadElem {
            x: &self.x + &other.x,
            y: &self.y + &other.y,
            disc: self.disc.clone(),
        })
    }

    pub fn checked_sub(&self, other: &QuadElem) -> Result<QuadElem, ArithError> {
        self.check_disc(other)?;
        Ok(QuadElem {
            x: &self.x - &other.x,
            y: &self.y - &other.y,
            disc: self.disc.clone(),
        })
    }

    /// (x1 + t y1)(x2 + t y2) = (x1 x2 + alpha y1 y2) + t (x1 y2 + x2 y1).
    pub fn checked_mul(&self, other: &QuadElem) -> Result<QuadElem, ArithError> {
        self.check_disc(other)?;
        let (x, y) = if self.y.is_zero() {
            (&self.x * &other.x, &self.x * &other.y)
        } else if other.y.is_zero() {
            (&self.x * &other.x, &self.y * &other.x)
        } else {
            (
                &self.x * &other.x + &self.y * &other.y * self.disc.alpha(),
                &self.x * &other.y + &other.x * &self.y,
            )
        };
        Ok(QuadElem {
            x,
            y,
            disc: self.disc.clone(),
        })
    }

    /// sigma(z) / N(z).
    pub fn inverse(&self) -> Result<QuadElem, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self.conjugate().scale(&self.norm().recip()))
    }

    pub fn scale(&self, r: &Rational) -> QuadElem {
        QuadElem {
            x: &self.x * r,
            y: &self.y * r,
            disc: self.disc.clone(),
        }
    }

    pub fn pow(&self, exp: i64) -> Result<QuadElem, ArithError> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        if e == 0 {
            return Ok(QuadElem::one(&self.disc));
        }
        let mut acc: Option<QuadElem> = None;
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => &a * &sq,
                    None => sq.clone(),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = &sq * &sq;
        }
        Ok(acc.expect("nonzero exponent"))
    }
}

impl fmt::Display for QuadElem {
    /// `x`, `y*t` or `x + y*t` / `x - |y|*t`, rationals in canonical form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return f.write_str(&render_rational(&self.x));
        }
        if self.x.is_zero() {
            return write!(f, "{}*t", render_rational(&self.y));
        }
        if self.y.is_negative() {
            write!(
                f,
                "{} - {}*t",
                render_rational(&self.x),
                render_rational(&-&self.y)
            )
        } else {
            write!(
                f,
                "{} + {}*t",
                render_rational(&self.x),
                render_rational(&self.y)
            )
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadElem> for &QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &QuadElem) -> QuadElem {
                self.$checked(rhs).expect("quadratic field operation")
            }
        }
        impl $trait<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Div<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadElem) -> QuadElem {
        self * &rhs.inverse().expect("division by zero in K")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            x: -&self.x,
            y: -&self.y,
            disc: self.disc.clone(),
        }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn q(x: i64, y: i64, d: &Discriminant) -> QuadElem {
        QuadElem::new(int(x), int(y), d)
    }

    #[test]
    fn multiplication_examples() {
        let d = Discriminant::from_int(2).unwrap();
        assert_eq!(&q(1, 1, &d) * &q(1, 1, &d), q(3, 2, &d));
        assert_eq!(&q(1, 1, &d) * &q(3, 2, &d), q(7, 5, &d));
        let z = QuadElem::new(rat(-5, 7), rat(2, 3), &d);
        assert_eq!(&z * &QuadElem::one(&d), z);
    }

    #[test]
    fn mismatched_discriminants() {
        let d2 = Discriminant::from_int(2).unwrap();
        let d3 = Discriminant::from_int(3).unwrap();
        let err = q(1, 1, &d2).checked_mul(&q(1, 1, &d3)).unwrap_err();
        assert!(matches!(err, ArithError::MismatchedDiscriminant { .. }));
    }

    #[test]
    fn conjugation_and_norm() {
        let d = Discriminant::from_int(2).unwrap();
        assert_eq!(QuadElem::t(&d).conjugate(), -QuadElem::t(&d));
        assert_eq!(q(3, 2, &d).conjugate(), q(3, -2, &d));
        assert_eq!(q(5, 0, &d).conjugate(), q(5, 0, &d));
        assert_eq!(q(3, 2, &d).norm(), int(1));
        assert_eq!(QuadElem::one(&d).norm(), int(1));
        assert_eq!(q(3, 2, &d).trace(), int(6));

        let dm1 = Discriminant::from_int(-1).unwrap();
        let z = QuadElem::new(rat(3, 5), rat(4, 5), &dm1);
        assert_eq!(z.norm(), int(1));
    }

    #[test]
    fn inverses() {
        let d = Discriminant::from_int(2).unwrap();
        assert_eq!(q(3, 2, &d).inverse().unwrap(), q(3, -2, &d));
        assert_eq!(QuadElem::one(&d).inverse().unwrap(), QuadElem::one(&d));
        assert_eq!(
            QuadElem::t(&d).inverse().unwrap(),
            QuadElem::new(int(0), rat(1, 2), &d)
        );
        assert_eq!(
            QuadElem::zero(&d).inverse().unwrap_err(),
            ArithError::DivisionByZero
        );
        assert_eq!(q(3, 2, &d).pow(-2).unwrap(), q(17, -12, &d));
    }

    #[test]
    fn square_discriminants_rejected() {
        assert!(matches!(
            Discriminant::new(rat(9, 4)),
            Err(ArithError::SquareDiscriminant(s)) if s == "9/4"
        ));
        assert!(Discriminant::from_int(1).is_err());
        assert!(Discriminant::from_int(0).is_err());
        assert!(!Discriminant::new_unchecked(int(1)).is_anisotropic());
        assert!(Discriminant::new_unchecked(int(5)).is_anisotropic());
    }

    #[test]
    fn display() {
        let d = Discriminant::from_int(2).unwrap();
        assert_eq!(q(3, 2, &d).to_string(), "3 + 2*t");
        assert_eq!(q(3, -2, &d).to_string(), "3 - 2*t");
        assert_eq!(QuadElem::new(int(0), rat(1, 2), &d).to_string(), "1/2*t");
        assert_eq!(q(-4, 0, &d).to_string(), "-4");
    }
}
