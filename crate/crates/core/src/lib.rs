//! Exact construction and verification of the Schwarz action on affine
//! 4-space, the linearization of its involution, the Galois
//! twist of the action by a quadratic field K = Q(sqrt(alpha)), and a
//! bounded-degree mechanization of the classification of involutions
//! commuting with the norm-one torus.

pub mod arith;
pub mod check;
pub mod linalg;
pub mod poly;
pub mod prop1;
pub mod sample;
pub mod schwarz;
pub mod suite;
pub mod twist;
