//! The Schwarz action of G_m ⋊ Z/2 on A^4 = A^2 x A^2, its involution tau,
//! and the automorphism phi that makes tau linear.
//!
//! Coordinates are ordered (a, b, x, y): (a, b) is the base of the rank-2
//! bundle, (x, y) the fibre. The torus parameter is the unit variable `l`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{Discriminant, QuadElem};
use crate::check::CheckResult;
use crate::linalg::QuadMatrix;
use crate::poly::{PolyError, PolyMap, SparsePoly, VarSpec};

pub const LAMBDA: &str = "l";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchwarzError {
    #[error("map is not fibrewise linear: {}", offending.join(", "))]
    NotFiberwiseLinear { offending: Vec<String> },
    #[error("fibre determinant {det} is not a nonzero constant")]
    NonConstantDeterminant { det: String },
    #[error("expected a map on (a, b, x, y), got domain dimension {0}")]
    WrongShape(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Coordinate variables (a, b, x, y).
pub fn coords() -> [VarSpec; 4] {
    [
        VarSpec::affine("a"),
        VarSpec::affine("b"),
        VarSpec::affine("x"),
        VarSpec::affine("y"),
    ]
}

pub fn lambda() -> VarSpec {
    VarSpec::unit(LAMBDA)
}

struct Vars {
    a: SparsePoly,
    b: SparsePoly,
    x: SparsePoly,
    y: SparsePoly,
    one: SparsePoly,
}

impl Vars {
    fn new(disc: &Discriminant) -> Self {
        let [a, b, x, y] = coords();
        Vars {
            a: SparsePoly::var(disc, &a),
            b: SparsePoly::var(disc, &b),
            x: SparsePoly::var(disc, &x),
            y: SparsePoly::var(disc, &y),
            one: SparsePoly::one(disc),
        }
    }

    fn k(&self, n: i64) -> SparsePoly {
        SparsePoly::from_int(n, self.one.disc())
    }
}

fn l_pow(disc: &Discriminant, e: i32) -> SparsePoly {
    SparsePoly::monomial(QuadElem::one(disc), &[(lambda(), e)])
}

/// mu(l; a, b, x, y) = (l^2 a, l^-2 b, l^3 x, l^-3 y).
pub fn build_mu(disc: &Discriminant) -> PolyMap {
    let v = Vars::new(disc);
    let comps = vec![
        &l_pow(disc, 2) * &v.a,
        &l_pow(disc, -2) * &v.b,
        &l_pow(disc, 3) * &v.x,
        &l_pow(disc, -3) * &v.y,
    ];
    PolyMap::new(disc, coords().to_vec(), vec![lambda()], comps).expect("well-formed action")
}

/// tau(a, b, x, y) = (b, a, M(a, b) (y, x)) with
/// M = [[1 + ab + (ab)^2, -b^3], [a^3, 1 - ab]].
pub fn build_tau(disc: &Discriminant) -> PolyMap {
    let m = tau_matrix(disc);
    let v = Vars::new(disc);
    let comps = vec![
        v.b.clone(),
        v.a.clone(),
        &(&m[0][0] * &v.y) + &(&m[0][1] * &v.x),
        &(&m[1][0] * &v.y) + &(&m[1][1] * &v.x),
    ];
    PolyMap::new(disc, coords().to_vec(), vec![], comps).expect("well-formed involution")
}

/// Entries of M(a, b), acting on (y, x).
pub fn tau_matrix(disc: &Discriminant) -> [[SparsePoly; 2]; 2] {
    let v = Vars::new(disc);
    let ab = &v.a * &v.b;
    [
        [&(&v.one + &ab) + &ab.pow(2), -&v.b.pow(3)],
        [v.a.pow(3), &v.one - &ab],
    ]
}

/// Entries c11, c12, c21, c22 of C(a, b), acting on (x, y).
pub fn phi_matrix(disc: &Discriminant) -> [[SparsePoly; 2]; 2] {
    let v = Vars::new(disc);
    let (a, b) = (&v.a, &v.b);
    let sum = |terms: &[(i64, u32, u32)]| {
        terms.iter().fold(SparsePoly::zero(disc), |acc, &(c, i, j)| {
            &acc + &(&v.k(c) * &(&a.pow(i) * &b.pow(j)))
        })
    };
    // c11 = 2(1 + a - 2b - a^2 b + 2ab^2 - b^3)
    let c11 = &v.k(2) * &sum(&[(1, 0, 0), (1, 1, 0), (-2, 0, 1), (-1, 2, 1), (2, 1, 2), (-1, 0, 3)]);
    // c12 = 2(1 - 2a + b + ab + a^4 - 2a^3 b + a^2 b^2)
    let c12 = &v.k(2)
        * &sum(&[(1, 0, 0), (-2, 1, 0), (1, 0, 1), (1, 1, 1), (1, 4, 0), (-2, 3, 1), (1, 2, 2)]);
    // c21 = -2 - a - b + ab - b^2 + a^2 b - b^3
    let c21 = sum(&[(-2, 0, 0), (-1, 1, 0), (-1, 0, 1), (1, 1, 1), (-1, 0, 2), (1, 2, 1), (-1, 0, 3)]);
    // c22 = 2 + b + a + a^2 + ab - a^3 + a^2 b - a^4 + a^2 b^2
    let c22 = sum(&[
        (2, 0, 0),
        (1, 0, 1),
        (1, 1, 0),
        (1, 2, 0),
        (1, 1, 1),
        (-1, 3, 0),
        (1, 2, 1),
        (-1, 4, 0),
        (1, 2, 2),
    ]);
    [[c11, c12], [c21, c22]]
}

/// phi(a, b, x, y) = (a, b, C(a, b) (x, y)).
pub fn build_phi(disc: &Discriminant) -> PolyMap {
    let c = phi_matrix(disc);
    let v = Vars::new(disc);
    let comps = vec![
        v.a.clone(),
        v.b.clone(),
        &(&c[0][0] * &v.x) + &(&c[0][1] * &v.y),
        &(&c[1][0] * &v.x) + &(&c[1][1] * &v.y),
    ];
    PolyMap::new(disc, coords().to_vec(), vec![], comps).expect("well-formed automorphism")
}

/// Inverse of a fibrewise-linear map over the identity of the base, via the
/// adjugate divided by a constant determinant.
pub fn invert_fiberwise(f: &PolyMap) -> Result<PolyMap, SchwarzError> {
    let fm = fiber_matrix(f, FiberOrder::XY)?;
    let disc = f.disc();
    let v = Vars::new(disc);
    if f.component(0) != &v.a || f.component(1) != &v.b {
        return Err(SchwarzError::NotFiberwiseLinear {
            offending: vec!["base map is not the identity".into()],
        });
    }
    if !fm.det.is_constant() || fm.det.is_zero() {
        return Err(SchwarzError::NonConstantDeterminant {
            det: fm.det.to_string(),
        });
    }
    let inv_det = fm.det.constant_term().inverse().map_err(PolyError::from)?;
    let e = &fm.entries;
    let adj = [
        [e[1][1].scale(&inv_det), (-&e[0][1]).scale(&inv_det)],
        [(-&e[1][0]).scale(&inv_det), e[0][0].scale(&inv_det)],
    ];
    let comps = vec![
        v.a.clone(),
        v.b.clone(),
        &(&adj[0][0] * &v.x) + &(&adj[0][1] * &v.y),
        &(&adj[1][0] * &v.x) + &(&adj[1][1] * &v.y),
    ];
    Ok(PolyMap::new(disc, coords().to_vec(), f.params().to_vec(), comps)?)
}

pub fn build_phi_inverse(disc: &Discriminant) -> Result<PolyMap, SchwarzError> {
    invert_fiberwise(&build_phi(disc))
}

/// Which fibre vector a [`FiberMatrix`] multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberOrder {
    XY,
    YX,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberMatrix {
    pub entries: [[SparsePoly; 2]; 2],
    pub order: FiberOrder,
    pub det: SparsePoly,
}

/// Extracts the 2x2 fibre matrix of a bundle map on (a, b, x, y): the base
/// components must not involve the fibre, the fibre components must be
/// linear homogeneous in (x, y).
pub fn fiber_matrix(f: &PolyMap, order: FiberOrder) -> Result<FiberMatrix, SchwarzError> {
    if f.domain_dim() != 4 || f.codomain_dim() != 4 {
        return Err(SchwarzError::WrongShape(f.domain_dim()));
    }
    let mut offending = Vec::new();
    for i in 0..2 {
        if let Some((lo, hi)) = f.component(i).degree_range_in(&["x", "y"]) {
            if lo != 0 || hi != 0 {
                offending.push(format!("base component {i} involves the fibre"));
            }
        }
    }
    let mut rows: Vec<[SparsePoly; 2]> = Vec::new();
    for i in 2..4 {
        let parts = f.component(i).collect_in(&["x", "y"]);
        let disc = f.disc();
        let mut cx = SparsePoly::zero(disc);
        let mut cy = SparsePoly::zero(disc);
        for (key, coeff) in parts {
            match key.as_slice() {
                [1, 0] => cx = coeff.trimmed(),
                [0, 1] => cy = coeff.trimmed(),
                [ex, ey] => offending.push(format!("component {i}: x^{ex}*y^{ey} term")),
                _ => unreachable!(),
            }
        }
        rows.push(match order {
            FiberOrder::XY => [cx, cy],
            FiberOrder::YX => [cy, cx],
        });
    }
    if !offending.is_empty() {
        return Err(SchwarzError::NotFiberwiseLinear { offending });
    }
    let entries = [rows[0].clone(), rows[1].clone()];
    let det = &(&entries[0][0] * &entries[1][1]) - &(&entries[0][1] * &entries[1][0]);
    Ok(FiberMatrix {
        entries,
        order,
        det,
    })
}

/// f ∘ f = id.
pub fn check_involution(f: &PolyMap) -> CheckResult {
    let anchor = "f o f = id";
    match f.compose(f) {
        Ok(ff) => {
            let ok = ff.is_identity();
            let r = CheckResult::new("involution", anchor, ok);
            if ok {
                r
            } else {
                r.detail(format!("f o f = {ff}"))
            }
        }
        Err(e) => CheckResult::new("involution", anchor, false).detail(e.to_string()),
    }
}

fn unit_param(mu: &PolyMap) -> Option<VarSpec> {
    mu.params().iter().find(|v| v.is_unit()).cloned()
}

fn subst_param(mu: &PolyMap, name: &str, by: SparsePoly) -> Result<PolyMap, PolyError> {
    mu.substitute(&BTreeMap::from([(name.to_string(), by)]))
}

/// mu_{l1} ∘ mu_{l2} = mu_{l1 l2} and mu_1 = id, as Laurent map identities.
pub fn check_group_law(mu: &PolyMap) -> CheckResult {
    let anchor = "mu_l1 o mu_l2 = mu_(l1 l2), mu_1 = id";
    let name = "group law";
    let Some(u) = unit_param(mu) else {
        let ok = mu.is_identity();
        return CheckResult::new(name, anchor, ok).detail("no torus parameter; trivial action only");
    };
    let disc = mu.disc();
    let run = || -> Result<(bool, bool), PolyError> {
        let l1 = VarSpec::unit(format!("{}1", u.name()));
        let l2 = VarSpec::unit(format!("{}2", u.name()));
        let m1 = subst_param(mu, u.name(), SparsePoly::var(disc, &l1))?;
        let m2 = subst_param(mu, u.name(), SparsePoly::var(disc, &l2))?;
        let prod = &SparsePoly::var(disc, &l1) * &SparsePoly::var(disc, &l2);
        let m12 = subst_param(mu, u.name(), prod)?;
        let law = m1.compose(&m2)? == m12;
        let unit = mu.at_param(u.name(), &QuadElem::one(disc))?.is_identity();
        Ok((law, unit))
    };
    match run() {
        Ok((law, unit)) => CheckResult::new(name, anchor, law && unit)
            .detail(format!("composition law: {}", if law { "holds" } else { "fails" }))
            .detail(format!("neutral element: {}", if unit { "acts trivially" } else { "acts nontrivially" })),
        Err(e) => CheckResult::new(name, anchor, false).detail(e.to_string()),
    }
}

/// tau ∘ mu_l = mu_{1/l} ∘ tau.
pub fn check_equivariance(mu: &PolyMap, tau: &PolyMap) -> CheckResult {
    let anchor = "tau o mu_l = mu_(1/l) o tau";
    let run = || -> Result<(PolyMap, PolyMap), PolyError> {
        let lhs = tau.compose(mu)?;
        let inv_mu = match unit_param(mu) {
            Some(u) => {
                let inv = SparsePoly::var(mu.disc(), &u).monomial_inverse()?;
                subst_param(mu, u.name(), inv)?
            }
            None => mu.clone(),
        };
        Ok((lhs, inv_mu.compose(tau)?))
    };
    match run() {
        Ok((lhs, rhs)) => {
            let ok = lhs == rhs;
            let r = CheckResult::new("equivariance", anchor, ok);
            if ok {
                r
            } else {
                r.detail(format!("lhs = {lhs}")).detail(format!("rhs = {rhs}"))
            }
        }
        Err(e) => CheckResult::new("equivariance", anchor, false).detail(e.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearityReport {
    pub linear: bool,
    pub involutive: bool,
    /// Rows of the matrix of L on (a, b, x, y); present when L is linear.
    pub matrix: Option<QuadMatrix>,
    pub nonlinear_terms: Vec<String>,
    /// The (a, b) block swaps the base coordinates.
    pub base_block_is_swap: bool,
    /// The (x, y) block is diagonal with constant entries and the blocks do
    /// not mix.
    pub fiber_block_diagonal: bool,
}

/// Matrix of a linear map (degree-1 homogeneous components, constant
/// coefficients), or the offending terms.
pub fn linear_matrix(f: &PolyMap) -> Result<QuadMatrix, Vec<String>> {
    let disc = f.disc();
    let names: Vec<&str> = f.domain().iter().map(VarSpec::name).collect();
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for (i, c) in f.components().iter().enumerate() {
        let mut row = vec![QuadElem::zero(disc); names.len()];
        for (key, coeff) in c.collect_in(&names) {
            let deg: i32 = key.iter().sum();
            if deg == 1 && key.iter().all(|e| *e >= 0) && coeff.is_constant() {
                let j = key.iter().position(|e| *e == 1).unwrap();
                row[j] = coeff.constant_term();
            } else {
                bad.push(format!("component {i}: ({coeff}) at exponents {key:?}"));
            }
        }
        rows.push(row);
    }
    if bad.is_empty() {
        Ok(crate::linalg::Matrix::from_rows(rows))
    } else {
        Err(bad)
    }
}

/// L = phi ∘ tau ∘ phi^-1 and a report on its shape.
pub fn conjugate_involution(
    phi: &PolyMap,
    tau: &PolyMap,
) -> Result<(PolyMap, LinearityReport), SchwarzError> {
    let phi_inv = invert_fiberwise(phi)?;
    let l = phi.compose(&tau.compose(&phi_inv)?)?;
    let involutive = l.compose(&l)?.is_identity();
    let report = match linear_matrix(&l) {
        Ok(m) => {
            let is = |i: usize, j: usize, v: i64| {
                m[(i, j)] == QuadElem::from_int(v, l.disc())
            };
            let base_block_is_swap = is(0, 0, 0) && is(0, 1, 1) && is(1, 0, 1) && is(1, 1, 0);
            let no_mixing = (0..2).all(|i| (2..4).all(|j| is(i, j, 0) && is(j, i, 0)));
            let fiber_block_diagonal = no_mixing && is(2, 3, 0) && is(3, 2, 0);
            LinearityReport {
                linear: true,
                involutive,
                matrix: Some(m),
                nonlinear_terms: vec![],
                base_block_is_swap,
                fiber_block_diagonal,
            }
        }
        Err(bad) => LinearityReport {
            linear: false,
            involutive,
            matrix: None,
            nonlinear_terms: bad,
            base_block_is_swap: false,
            fiber_block_diagonal: false,
        },
    };
    Ok((l, report))
}

/// The full Schwarz data over a given quadratic field.
#[derive(Clone, Debug)]
pub struct ActionBundle {
    pub mu: PolyMap,
    pub tau: PolyMap,
    pub phi: PolyMap,
    pub phi_inv: PolyMap,
}

impl ActionBundle {
    pub fn new(disc: &Discriminant) -> Result<Self, SchwarzError> {
        Ok(ActionBundle {
            mu: build_mu(disc),
            tau: build_tau(disc),
            phi: build_phi(disc),
            phi_inv: build_phi_inverse(disc)?,
        })
    }
}
