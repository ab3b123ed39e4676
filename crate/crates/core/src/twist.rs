//! Semilinear algebra over K/Q: splitting k-linear maps into K-linear and
//! K-antilinear parts, Weil restriction, and the twisted form E0 cut out by
//! sigma(v) = tau(v).

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{int, rat, Discriminant, QuadElem, Rational, TorusPoint};
use crate::check::CheckResult;
use crate::linalg::{Matrix, QuadMatrix, RatMatrix};
use crate::poly::{PolyError, PolyMap, SparsePoly, VarSpec};
use crate::sample;
use crate::schwarz::{self, linear_matrix, ActionBundle, SchwarzError, LAMBDA};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("a {rows}x{cols} matrix is not the k-matrix of a map on K^m")]
    Shape { rows: usize, cols: usize },
    #[error("cocycle condition fails: sigma(L) L - I = {defect}")]
    Cocycle { defect: String },
    #[error("twisting map has a nonzero antilinear part")]
    Antilinear,
    #[error("{0} is a unit variable and has no polynomial Weil restriction")]
    UnitVariable(String),
    #[error("conjugated involution is not linear: {}", .0.join("; "))]
    NonLinear(Vec<String>),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Schwarz(#[from] SchwarzError),
}

/// (x1, y1, x2, y2, ...) with v_i = x_i + t y_i.
pub fn to_k_vector(v: &[QuadElem]) -> Vec<Rational> {
    v.iter().flat_map(|c| [c.x().clone(), c.y().clone()]).collect()
}

pub fn from_k_vector(disc: &Discriminant, v: &[Rational]) -> Vec<QuadElem> {
    v.chunks(2)
        .map(|c| QuadElem::new(c[0].clone(), c[1].clone(), disc))
        .collect()
}

pub fn sigma_matrix(m: &QuadMatrix) -> QuadMatrix {
    m.map(QuadElem::conjugate)
}

fn sigma_vec(v: &[QuadElem]) -> Vec<QuadElem> {
    v.iter().map(QuadElem::conjugate).collect()
}

/// v -> A v + B sigma(v) on K^m.
#[derive(Clone, Debug, PartialEq)]
pub struct SemilinearMap {
    pub linear: QuadMatrix,
    pub antilinear: QuadMatrix,
}

impl SemilinearMap {
    pub fn new(linear: QuadMatrix, antilinear: QuadMatrix) -> Result<Self, TwistError> {
        let m = linear.rows();
        for mat in [&linear, &antilinear] {
            if mat.rows() != m || mat.cols() != m || m == 0 {
                return Err(TwistError::Shape {
                    rows: mat.rows(),
                    cols: mat.cols(),
                });
            }
        }
        Ok(SemilinearMap { linear, antilinear })
    }

    pub fn from_linear(a: QuadMatrix) -> Result<Self, TwistError> {
        let zero = a.map(|c| QuadElem::zero(c.disc()));
        Self::new(a, zero)
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn disc(&self) -> &Discriminant {
        self.linear[(0, 0)].disc()
    }

    pub fn apply(&self, v: &[QuadElem]) -> Vec<QuadElem> {
        let a = self.linear.apply(v);
        let b = self.antilinear.apply(&sigma_vec(v));
        a.iter().zip(&b).map(|(x, y)| x + y).collect()
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &SemilinearMap) -> SemilinearMap {
        let (a, b) = (&self.linear, &self.antilinear);
        let (c, d) = (&inner.linear, &inner.antilinear);
        let add = |p: &QuadMatrix, q: &QuadMatrix| p.sub(&q.map(|x| -x));
        SemilinearMap {
            linear: add(&a.mul(c), &b.mul(&sigma_matrix(d))),
            antilinear: add(&a.mul(d), &b.mul(&sigma_matrix(c))),
        }
    }

    /// Matrix over Q in the basis (e_1, t e_1, e_2, t e_2, ...).
    pub fn k_matrix(&self) -> RatMatrix {
        let m = self.dim();
        let disc = self.disc().clone();
        let mut out = Matrix::filled(2 * m, 2 * m, Rational::zero());
        for j in 0..m {
            for (k, unit) in [QuadElem::one(&disc), QuadElem::t(&disc)].into_iter().enumerate() {
                let mut e = vec![QuadElem::zero(&disc); m];
                e[j] = unit;
                for (i, c) in to_k_vector(&self.apply(&e)).into_iter().enumerate() {
                    out[(i, 2 * j + k)] = c;
                }
            }
        }
        out
    }
}

/// Unique (A, B) with f(v) = A v + B sigma(v) for a k-linear f on K^m given
/// as a 2m x 2m rational matrix.
pub fn decompose_semilinear(f: &RatMatrix, disc: &Discriminant) -> Result<SemilinearMap, TwistError> {
    if f.rows() != f.cols() || !f.rows().is_multiple_of(2) || f.rows() == 0 {
        return Err(TwistError::Shape {
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    let m = f.rows() / 2;
    let half = rat(1, 2);
    let alpha = disc.alpha();
    let mut a = Matrix::filled(m, m, QuadElem::zero(disc));
    let mut b = a.clone();
    for i in 0..m {
        for j in 0..m {
            let f11 = &f[(2 * i, 2 * j)];
            let f12 = &f[(2 * i, 2 * j + 1)];
            let f21 = &f[(2 * i + 1, 2 * j)];
            let f22 = &f[(2 * i + 1, 2 * j + 1)];
            let p = (f11 + f22) * &half;
            let r = (f11 - f22) * &half;
            let q = (f21 + f12 / alpha) * &half;
            let s = (f21 - f12 / alpha) * &half;
            a[(i, j)] = QuadElem::new(p, q, disc);
            b[(i, j)] = QuadElem::new(r, s, disc);
        }
    }
    SemilinearMap::new(a, b)
}

fn split_coefficients(p: &SparsePoly) -> Result<(SparsePoly, SparsePoly), PolyError> {
    let disc = p.disc();
    let part = |f: fn(&QuadElem) -> &Rational| {
        SparsePoly::from_terms(
            disc,
            p.vars().to_vec(),
            p.terms()
                .map(|(m, c)| (m.0.clone(), QuadElem::from_rational(f(c).clone(), disc))),
        )
        .map(|q| q.trimmed())
    };
    Ok((part(QuadElem::x)?, part(QuadElem::y)?))
}

/// Real-part and t-part variable names for a K-variable.
pub fn weil_names(name: &str) -> (String, String) {
    (format!("{name}_z"), format!("{name}_w"))
}

/// Rewrites a map over K in doubled rational coordinates: every coordinate
/// or parameter v becomes v_z + t v_w (its partner v_z - t v_w), and every
/// component splits into its t-free part and its t-part.
pub fn weil_restrict(f: &PolyMap) -> Result<PolyMap, TwistError> {
    let disc = f.disc();
    let t = SparsePoly::constant(QuadElem::t(disc));
    let mut subst = BTreeMap::new();
    let mut double = |vars: &[VarSpec]| -> Result<Vec<VarSpec>, TwistError> {
        let mut out = Vec::new();
        for v in vars {
            if v.is_unit() {
                return Err(TwistError::UnitVariable(v.name().to_string()));
            }
            let (zn, wn) = weil_names(v.name());
            let (zs, ws) = (VarSpec::affine(zn), VarSpec::affine(wn));
            let z = SparsePoly::var(disc, &zs);
            let w = &t * &SparsePoly::var(disc, &ws);
            subst.insert(v.name().to_string(), &z + &w);
            if let Some(p) = v.partner() {
                subst.insert(p.to_string(), &z - &w);
            }
            out.extend([zs, ws]);
        }
        Ok(out)
    };
    let domain = double(f.domain())?;
    let params = double(f.params())?;
    let mut comps = Vec::new();
    for c in f.components() {
        let (re, im) = split_coefficients(&c.compose(&subst)?)?;
        comps.extend([re, im]);
    }
    Ok(PolyMap::new(disc, domain, params, comps)?)
}

/// A k-form of K^m, given by a k-basis of its points.
#[derive(Clone, Debug, PartialEq)]
pub struct KStructure {
    disc: Discriminant,
    ambient_dim: usize,
    basis: Vec<Vec<QuadElem>>,
}

impl KStructure {
    pub fn from_basis(disc: &Discriminant, ambient_dim: usize, basis: Vec<Vec<QuadElem>>) -> Self {
        KStructure {
            disc: disc.clone(),
            ambient_dim,
            basis,
        }
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<QuadElem>] {
        &self.basis
    }

    pub fn k_dim(&self) -> usize {
        self.basis.len()
    }

    fn columns(&self, vectors: &[Vec<QuadElem>]) -> RatMatrix {
        let mut m = Matrix::filled(2 * self.ambient_dim, vectors.len(), Rational::zero());
        for (j, v) in vectors.iter().enumerate() {
            for (i, c) in to_k_vector(v).into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        m
    }

    /// Rational coordinates of `v` in the basis, if v lies in the k-span.
    pub fn coords(&self, v: &[QuadElem]) -> Option<Vec<Rational>> {
        if self.basis.is_empty() {
            return v.iter().all(QuadElem::is_zero).then(Vec::new);
        }
        self.columns(&self.basis).solve(&to_k_vector(v))
    }

    pub fn contains(&self, v: &[QuadElem]) -> bool {
        self.coords(v).is_some()
    }

    /// The basis together with its t-multiples spans K^m over k, i.e. the
    /// basis spans K^m over K.
    pub fn spans_over_k_field(&self) -> bool {
        let t = QuadElem::t(&self.disc);
        let mut all = self.basis.clone();
        all.extend(self.basis.iter().map(|v| v.iter().map(|c| c * &t).collect()));
        !all.is_empty() && self.columns(&all).rank() == 2 * self.ambient_dim
    }

    pub fn same_span(&self, other: &KStructure) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.columns(&self.basis).rank() == other.columns(&other.basis).rank()
            && other.basis.iter().all(|v| self.contains(v))
    }

    pub fn combination(&self, coeffs: &[Rational]) -> Vec<QuadElem> {
        let mut out = vec![QuadElem::zero(&self.disc); self.ambient_dim];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o = &*o + &x.scale(c);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .basis
            .iter()
            .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

/// The k-points {v : sigma(v) = L v} of the twist of K^m by a cocycle L.
pub fn twisted_points(l: &SemilinearMap) -> Result<KStructure, TwistError> {
    if !l.antilinear.is_zero() {
        return Err(TwistError::Antilinear);
    }
    let a = &l.linear;
    let one = QuadElem::one(l.disc());
    let defect = sigma_matrix(a).mul(a).sub(&Matrix::identity(l.dim(), &one));
    if !defect.is_zero() {
        return Err(TwistError::Cocycle {
            defect: defect.to_string(),
        });
    }
    // sigma(v) = A v  <=>  v = sigma(A) sigma(v), a k-linear fixed point problem
    let f = SemilinearMap::new(a.map(|c| QuadElem::zero(c.disc())), sigma_matrix(a))?.k_matrix();
    let m = f.sub(&Matrix::identity(f.rows(), &int(1)));
    let basis = m
        .nullspace(&Rational::zero())
        .iter()
        .map(|v| from_k_vector(l.disc(), v))
        .collect();
    Ok(KStructure::from_basis(l.disc(), l.dim(), basis))
}

/// E0 in the coordinates where the involution is linear.
#[derive(Clone, Debug)]
pub struct TwistedForm {
    pub bundle: ActionBundle,
    /// L = phi ∘ tau ∘ phi^-1.
    pub conjugated: PolyMap,
    pub conjugated_matrix: QuadMatrix,
    pub structure: KStructure,
    /// Whether the basis spans the same k-space as {t e1, e2, e3, e4}.
    pub matches_reference_shape: bool,
}

/// span{t e1, e2, e3, e4}, the shape one expects when L acts as
/// diag(-1, 1, 1, 1).
pub fn reference_shape(disc: &Discriminant) -> KStructure {
    let basis = (0..4)
        .map(|i| {
            let mut v = vec![QuadElem::zero(disc); 4];
            v[i] = if i == 0 { QuadElem::t(disc) } else { QuadElem::one(disc) };
            v
        })
        .collect();
    KStructure::from_basis(disc, 4, basis)
}

pub fn build_e0(bundle: &ActionBundle) -> Result<TwistedForm, TwistError> {
    let (l, report) = schwarz::conjugate_involution(&bundle.phi, &bundle.tau)?;
    let matrix = match report.matrix {
        Some(m) => m,
        None => return Err(TwistError::NonLinear(report.nonlinear_terms)),
    };
    let structure = twisted_points(&SemilinearMap::from_linear(matrix.clone())?)?;
    let matches = structure.same_span(&reference_shape(l.disc()));
    Ok(TwistedForm {
        bundle: bundle.clone(),
        conjugated: l,
        conjugated_matrix: matrix,
        structure,
        matches_reference_shape: matches,
    })
}

/// One link of the chain sigma(tau(lv)) = tau(sigma(lv)) = tau(l^-1 sigma v)
/// = tau(l^-1 tau v) = lv.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub identity: String,
    pub holds: bool,
}

fn paired_coords() -> (Vec<VarSpec>, Vec<VarSpec>) {
    schwarz::coords()
        .iter()
        .map(|v| VarSpec::pair(v.name(), format!("{}bar", v.name())))
        .unzip()
}

fn maps_equal(lhs: &[SparsePoly], rhs: &[SparsePoly]) -> bool {
    lhs.len() == rhs.len() && lhs.iter().zip(rhs).all(|(a, b)| a == b)
}

/// Checks each equality of the stabilization chain as an identity of
/// Laurent polynomials in (a, b, x, y), their conjugates and l.
pub fn stabilization_chain(mu: &PolyMap, tau: &PolyMap) -> Result<Vec<ChainStep>, TwistError> {
    let disc = mu.disc();
    let (plain, bars) = paired_coords();
    let to_paired: BTreeMap<String, VarSpec> =
        plain.iter().map(|v| (v.name().to_string(), v.clone())).collect();
    let to_bar: BTreeMap<String, SparsePoly> = plain
        .iter()
        .zip(&bars)
        .map(|(v, b)| (v.name().to_string(), SparsePoly::var(disc, b)))
        .collect();
    let rename_all = |m: &PolyMap| -> Result<Vec<SparsePoly>, PolyError> {
        m.components().iter().map(|c| c.rename(&to_paired)).collect()
    };
    let at_bar = |cs: &[SparsePoly]| -> Result<Vec<SparsePoly>, PolyError> {
        cs.iter().map(|c| c.compose(&to_bar)).collect()
    };
    let sigma = |cs: &[SparsePoly]| -> Vec<SparsePoly> { cs.iter().map(SparsePoly::apply_sigma).collect() };

    let tau_p = rename_all(tau)?;
    let mu_p = rename_all(mu)?;
    let inv = SparsePoly::var(disc, &schwarz::lambda()).monomial_inverse()?;
    let mu_inv = mu.substitute(&BTreeMap::from([(LAMBDA.to_string(), inv)]))?;
    let mu_inv_p = rename_all(&mu_inv)?;

    let mut steps = Vec::new();
    steps.push(ChainStep {
        identity: "sigma(tau(v)) = tau(sigma v)".into(),
        holds: maps_equal(&sigma(&tau_p), &at_bar(&tau_p)?),
    });
    steps.push(ChainStep {
        identity: "sigma(mu(l, v)) = mu(1/l, sigma v)".into(),
        holds: maps_equal(&sigma(&mu_p), &at_bar(&mu_inv_p)?),
    });
    // on E0 the conjugate coordinates are the components of tau(v)
    let on_e0: BTreeMap<String, SparsePoly> = bars
        .iter()
        .zip(tau.components())
        .map(|(b, c)| (b.name().to_string(), c.clone()))
        .collect();
    let lhs: Vec<SparsePoly> = at_bar(&mu_inv_p)?
        .iter()
        .map(|c| c.compose(&on_e0))
        .collect::<Result<_, _>>()?;
    let mu_inv_tau = mu_inv.compose(tau)?;
    steps.push(ChainStep {
        identity: "mu(1/l, sigma v) = mu(1/l, tau v) when sigma v = tau v".into(),
        holds: maps_equal(&lhs, mu_inv_tau.components()),
    });
    let closed = tau.compose(&mu_inv_tau)?;
    steps.push(ChainStep {
        identity: "tau(mu(1/l, tau v)) = mu(l, v)".into(),
        holds: closed == *mu,
    });
    Ok(steps)
}

/// Torus points used for sampling: a fixed nontrivial point when one is
/// known for alpha, then -1 and 1.
pub fn stabilization_torus_points(disc: &Discriminant) -> Vec<TorusPoint> {
    let special = |x: Rational, y: Rational| {
        TorusPoint::new(QuadElem::new(x, y, disc)).expect("norm one by construction")
    };
    let a = disc.alpha();
    let first = if *a == int(2) {
        special(int(3), int(2))
    } else if *a == int(-1) {
        special(rat(3, 5), rat(4, 5))
    } else if *a == int(3) {
        special(int(2), int(1))
    } else {
        TorusPoint::from_slope(disc, &rat(1, 2))
    };
    vec![first, TorusPoint::minus_one(disc), TorusPoint::one(disc)]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub samples: usize,
    pub torus_points: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

fn render_vec(v: &[QuadElem]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Draws random k-points of `e0` (in the linearizing coordinates), pulls
/// them back, and checks that mu(l0, v) and tau(v) land in `e0` again.
pub fn sample_stabilization(
    bundle: &ActionBundle,
    e0: &KStructure,
    samples: usize,
    seed: u64,
) -> Result<SampleOutcome, TwistError> {
    let disc = e0.disc().clone();
    let mut rng = sample::rng(seed);
    let points = stabilization_torus_points(&disc);
    let mut failures = 0;
    let mut first_failure = None;
    let mut fail = |msg: String, failures: &mut usize| {
        *failures += 1;
        if first_failure.is_none() {
            first_failure = Some(msg);
        }
    };
    for _ in 0..samples {
        let coeffs: Vec<Rational> = (0..e0.k_dim()).map(|_| sample::rational(&mut rng)).collect();
        let w = e0.combination(&coeffs);
        let v = bundle.phi_inv.eval_at(&w, &[])?;
        let tv = bundle.tau.eval_at(&v, &[])?;
        if !e0.contains(&bundle.phi.eval_at(&tv, &[])?) {
            fail(format!("tau{} leaves the form", render_vec(&v)), &mut failures);
        }
        for lam in &points {
            let u = bundle.mu.eval_at(&v, &[(LAMBDA, lam.value().clone())])?;
            let in_form = e0.contains(&bundle.phi.eval_at(&u, &[])?);
            let fixed = sigma_vec(&u) == bundle.tau.eval_at(&u, &[])?;
            if !in_form || !fixed {
                fail(
                    format!("mu({}, {}) leaves the form", lam.value(), render_vec(&v)),
                    &mut failures,
                );
            }
        }
    }
    Ok(SampleOutcome {
        samples,
        torus_points: points.len(),
        failures,
        first_failure,
    })
}

/// Symbolic chain plus sampling.
pub fn check_stabilization(
    bundle: &ActionBundle,
    e0: &KStructure,
    samples: usize,
    seed: u64,
) -> CheckResult {
    let anchor = "tau(l^-1 tau v) = l v: H(k) stabilizes E0(k)";
    let name = "stabilization";
    let chain = match stabilization_chain(&bundle.mu, &bundle.tau) {
        Ok(c) => c,
        Err(e) => return CheckResult::new(name, anchor, false).detail(e.to_string()),
    };
    let sampled = match sample_stabilization(bundle, e0, samples, seed) {
        Ok(s) => s,
        Err(e) => return CheckResult::new(name, anchor, false).detail(e.to_string()),
    };
    let ok = chain.iter().all(|s| s.holds) && sampled.failures == 0;
    let mut r = CheckResult::new(name, anchor, ok);
    for s in &chain {
        r = r.detail(format!("{}: {}", s.identity, if s.holds { "holds" } else { "fails" }));
    }
    r = r.detail(format!(
        "{} samples x {} torus points, {} failures",
        sampled.samples, sampled.torus_points, sampled.failures
    ));
    if let Some(f) = sampled.first_failure {
        r = r.detail(f);
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusVerdict {
    /// Exactly the base directions are fixed.
    ZeroSection,
    /// -1 acts trivially although the action is not trivial.
    Inapplicable,
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedLocus {
    /// K-basis of the fixed subspace, when the slice is linear.
    pub basis: Vec<Vec<QuadElem>>,
    pub verdict: LocusVerdict,
}

/// Fixed locus of l = -1 on A^n = A^base x A^(n - base); it should be the
/// zero section {fibre = 0}.
pub fn fixed_locus_i(mu: &PolyMap, base_dim: usize) -> (FixedLocus, CheckResult) {
    let anchor = "I = {1, -1} fixes exactly the zero section";
    let name = "fixed locus of I";
    let disc = mu.disc();
    let n = mu.domain_dim();
    let unit = mu.params().iter().find(|p| p.is_unit()).cloned();
    let slice = match &unit {
        Some(u) => mu.at_param(u.name(), &QuadElem::from_int(-1, disc)),
        None => Ok(mu.clone()),
    };
    let other = |msg: String| {
        (
            FixedLocus {
                basis: vec![],
                verdict: LocusVerdict::Other,
            },
            CheckResult::new(name, anchor, false).detail(msg),
        )
    };
    let slice = match slice {
        Ok(s) => s,
        Err(e) => return other(e.to_string()),
    };
    let m = match linear_matrix(&slice) {
        Ok(m) => m,
        Err(bad) => return other(format!("slice at -1 is not linear: {}", bad.join("; "))),
    };
    let one = QuadElem::one(disc);
    let basis = m.sub(&Matrix::identity(n, &one)).nullspace(&QuadElem::zero(disc));
    let trivial_action = match &unit {
        Some(u) => mu.at_param(u.name(), &QuadElem::from_int(2, disc)).map(|s| s.is_identity()).unwrap_or(false),
        None => mu.is_identity(),
    };
    let zero_section = basis.len() == base_dim && basis.iter().all(|v| v[base_dim..].iter().all(QuadElem::is_zero));
    let (verdict, detail) = if zero_section {
        (LocusVerdict::ZeroSection, "fixed locus: fibre coordinates vanish".to_string())
    } else if basis.len() == n && !trivial_action {
        (
            LocusVerdict::Inapplicable,
            "criterion inapplicable: -1 acts trivially".to_string(),
        )
    } else {
        (LocusVerdict::Other, format!("fixed subspace has dimension {}", basis.len()))
    };
    let r = CheckResult::new(name, anchor, verdict == LocusVerdict::ZeroSection).detail(detail);
    (FixedLocus { basis, verdict }, r)
}

/// A random invertible m x m matrix over K.
pub fn random_invertible<R: Rng>(rng: &mut R, disc: &Discriminant, m: usize) -> QuadMatrix {
    loop {
        let rows = (0..m)
            .map(|_| (0..m).map(|_| sample::quad(rng, disc)).collect())
            .collect();
        let c = Matrix::from_rows(rows);
        if c.inverse().is_some() {
            return c;
        }
    }
}

/// L = C sigma(C)^-1, which always satisfies sigma(L) L = I.
pub fn random_cocycle<R: Rng>(rng: &mut R, disc: &Discriminant, m: usize) -> SemilinearMap {
    let c = random_invertible(rng, disc, m);
    let inv = sigma_matrix(&c).inverse().expect("conjugate of invertible");
    SemilinearMap::from_linear(c.mul(&inv)).expect("square")
}
