use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("non-canonical rational {given:?} (canonical form is {canonical:?})")]
    NonCanonical { given: String, canonical: String },
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// True iff `q` is the square of a rational.
///
/// For a reduced fraction p/d this holds iff p >= 0 and p*d is a perfect
/// square integer.
pub fn is_square_rational(q: &Rational) -> bool {
    if q.is_negative() {
        return false;
    }
    let prod = q.numer() * q.denom();
    let root = prod.sqrt();
    &root * &root == prod
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn render_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses any `p` or `p/q` literal and reduces it.
pub fn parse_rational_lenient(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = || ParseRationalError::Malformed(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Parses a rational and rejects anything that is not already in canonical
/// text form (`2/4`, `3/1`, `+1`, `-0` are all refused).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let q = parse_rational_lenient(s)?;
    let canonical = render_rational(&q);
    if canonical != s {
        return Err(ParseRationalError::NonCanonical {
            given: s.to_string(),
            canonical,
        });
    }
    Ok(q)
}
