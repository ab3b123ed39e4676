//! Seeded generators for exact random samples.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{Discriminant, QuadElem, Rational, TorusPoint};

/// Sample magnitudes stay at or below this bound (numerators and denominators).
pub const SAMPLE_BOUND: i64 = 99;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
    let d = rng.gen_range(1..=SAMPLE_BOUND);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = rational(rng);
        if q != Rational::from_integer(0.into()) {
            return q;
        }
    }
}

pub fn quad<R: Rng>(rng: &mut R, disc: &Discriminant) -> QuadElem {
    QuadElem::new(rational(rng), rational(rng), disc)
}

pub fn nonzero_quad<R: Rng>(rng: &mut R, disc: &Discriminant) -> QuadElem {
    loop {
        let z = quad(rng, disc);
        if !z.is_zero() {
            return z;
        }
    }
}

pub fn torus_point<R: Rng>(rng: &mut R, disc: &Discriminant) -> TorusPoint {
    TorusPoint::from_slope(disc, &rational(rng))
}
