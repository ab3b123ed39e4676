//! Bounded-degree classification of the involutions
//! tau(x, y) = (sigma x, phi'(x) y + phi''(x) sigma y) of K^2 that are
//! equivariant for the norm-one torus acting with weights (2, 3).
//!
//! phi' and phi'' start as polynomials in x and sigma x with unknown
//! coefficients. The torus filter, the rewrite in z = x sigma(x) and a
//! degree-parity descent leave phi' = 0, phi'' = omega with N(omega) = 1.

mod family;
mod trace;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{Discriminant, QuadElem};
use crate::poly::{rewrite_norm, PolyError, PolyMap, SparsePoly, VarSpec};
use crate::schwarz;
use crate::twist::TwistError;

pub use family::{check_conditions, mu_on, verify_family, ConditionReport, Omega};
pub use trace::{eliminate, ProofTrace, SolutionFamily, StepKind, TraceStep};

pub const MAX_BOUND: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Prop1Error {
    #[error("degree bound {0} exceeds {MAX_BOUND}")]
    BoundTooLarge(u32),
    #[error("input is not weight-filtered: {}", offending.join(", "))]
    NotFiltered { offending: Vec<String> },
    #[error("norm-zero rule needs an anisotropic norm form; alpha = {0} is a square")]
    NormZeroUnsound(String),
    #[error("top equation at z^{degree} mixes odd and even contributions: {equation}")]
    ParityViolation { degree: u32, equation: String },
    #[error("top equation at z^{degree} is not a pure top term: {equation}")]
    UnexpectedShape { degree: u32, equation: String },
    #[error("elimination left {0}")]
    Residual(String),
    #[error("replay diverged at step {step}: {message}")]
    Replay { step: usize, message: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

pub fn x_pair() -> (VarSpec, VarSpec) {
    VarSpec::pair("x", "xb")
}

pub fn y_pair() -> (VarSpec, VarSpec) {
    VarSpec::pair("y", "yb")
}

/// Coordinates (x, y) on K^2, each paired with its conjugate.
pub fn k2_coords() -> Vec<VarSpec> {
    vec![x_pair().0, y_pair().0]
}

pub fn z_var() -> VarSpec {
    VarSpec::affine("z")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    PhiPrime,
    PhiDoublePrime,
}

impl Slot {
    fn prefix(self) -> &'static str {
        match self {
            Slot::PhiPrime => "a",
            Slot::PhiDoublePrime => "b",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Slot::PhiPrime => "phi'",
            Slot::PhiDoublePrime => "phi''",
        }
    }

    /// Torus weight of the coefficient of x^k xb^l in the equivariance
    /// relation.
    pub fn weight(self, k: u32, l: u32) -> i64 {
        let base = match self {
            Slot::PhiPrime => 6,
            Slot::PhiDoublePrime => 0,
        };
        base + 2 * k as i64 - 2 * l as i64
    }

    /// Offset l - k of the surviving coefficients.
    pub fn survivor_shift(self) -> u32 {
        match self {
            Slot::PhiPrime => 3,
            Slot::PhiDoublePrime => 0,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn unknown(slot: Slot, k: u32, l: u32) -> VarSpec {
    let name = format!("{}{k}_{l}", slot.prefix());
    VarSpec::pair(name.clone(), format!("{name}b")).0
}

/// sum of c_{k,l} x^k xb^l with formal coefficients c_{k,l}.
#[derive(Clone, Debug, PartialEq)]
pub struct UnknownPoly {
    pub slot: Slot,
    pub bound: u32,
    pub coeffs: BTreeMap<(u32, u32), VarSpec>,
    pub poly: SparsePoly,
}

impl UnknownPoly {
    fn from_coeffs(
        disc: &Discriminant,
        slot: Slot,
        bound: u32,
        coeffs: BTreeMap<(u32, u32), VarSpec>,
    ) -> Self {
        let (x, xb) = x_pair();
        let poly = coeffs.iter().fold(SparsePoly::zero(disc), |acc, (&(k, l), c)| {
            &acc + &SparsePoly::monomial(
                QuadElem::one(disc),
                &[(c.clone(), 1), (x.clone(), k as i32), (xb.clone(), l as i32)],
            )
        });
        UnknownPoly {
            slot,
            bound,
            coeffs,
            poly,
        }
    }

    pub fn num_unknowns(&self) -> usize {
        self.coeffs.len()
    }

    pub fn indices(&self) -> Vec<(u32, u32)> {
        self.coeffs.keys().copied().collect()
    }

    pub fn unknowns(&self) -> Vec<VarSpec> {
        self.coeffs.values().cloned().collect()
    }
}

/// Full families of unknown coefficients for 0 <= k, l <= bound.
pub fn ansatz(disc: &Discriminant, bound: u32) -> Result<(UnknownPoly, UnknownPoly), Prop1Error> {
    if bound > MAX_BOUND {
        return Err(Prop1Error::BoundTooLarge(bound));
    }
    let make = |slot| {
        let coeffs = (0..=bound)
            .flat_map(|k| (0..=bound).map(move |l| ((k, l), unknown(slot, k, l))))
            .collect();
        UnknownPoly::from_coeffs(disc, slot, bound, coeffs)
    };
    Ok((make(Slot::PhiPrime), make(Slot::PhiDoublePrime)))
}

/// mu_l(x, y) = (l^2 x, l^3 y) on K^2.
pub fn mu_k2(disc: &Discriminant) -> PolyMap {
    mu_on(disc, &k2_coords())
}

/// tau(x, y) = (xb, phi1 y + phi2 yb).
pub fn tau_from(
    disc: &Discriminant,
    phi1: &SparsePoly,
    phi2: &SparsePoly,
    params: Vec<VarSpec>,
) -> Result<PolyMap, PolyError> {
    let (_, xb) = x_pair();
    let (y, yb) = y_pair();
    let second = &(phi1 * &SparsePoly::var(disc, &y)) + &(phi2 * &SparsePoly::var(disc, &yb));
    PolyMap::new(disc, k2_coords(), params, vec![SparsePoly::var(disc, &xb), second])
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterOutcome {
    pub filtered: UnknownPoly,
    pub killed: Vec<(u32, u32)>,
    /// Coefficient of y (phi') or yb (phi'') in tau o mu_l - mu_(1/l) o tau.
    pub relation: SparsePoly,
}

impl FilterOutcome {
    pub fn survivors(&self) -> Vec<(u32, u32)> {
        self.filtered.indices()
    }
}

/// Imposes tau o mu_l = mu_(1/l) o tau on one slot. Each coefficient of
/// l^w x^k xb^l in the defect that is a single unknown forces it to vanish.
pub fn apply_equivariance_filter(p: &UnknownPoly) -> Result<FilterOutcome, Prop1Error> {
    let disc = p.poly.disc();
    let zero = SparsePoly::zero(disc);
    let (phi1, phi2, key) = match p.slot {
        Slot::PhiPrime => (&p.poly, &zero, vec![1, 0]),
        Slot::PhiDoublePrime => (&zero, &p.poly, vec![0, 1]),
    };
    let tau = tau_from(disc, phi1, phi2, p.unknowns())?;
    let mu = mu_k2(disc);
    let inv = SparsePoly::var(disc, &schwarz::lambda()).monomial_inverse()?;
    let mu_inv = mu.substitute(&BTreeMap::from([(schwarz::LAMBDA.to_string(), inv)]))?;
    let lhs = tau.compose(&mu)?;
    let rhs = mu_inv.compose(&tau)?;
    let defect = lhs.component(1) - rhs.component(1);
    let (y, yb) = y_pair();
    let relation = defect
        .collect_in(&[y.name(), yb.name()])
        .remove(&key)
        .unwrap_or_else(|| SparsePoly::zero(disc))
        .trimmed();

    let by_name: BTreeMap<&str, (u32, u32)> =
        p.coeffs.iter().map(|(k, v)| (v.name(), *k)).collect();
    let mut killed = Vec::new();
    for coeff in relation.collect_in(&["x", "xb", schwarz::LAMBDA]).values() {
        let used = coeff.used_vars();
        match (coeff.num_terms(), used.as_slice()) {
            (1, [u]) => match by_name.get(u.name()) {
                Some(idx) => killed.push(*idx),
                None => {
                    return Err(Prop1Error::UnexpectedShape {
                        degree: 0,
                        equation: coeff.to_string(),
                    })
                }
            },
            _ => {
                return Err(Prop1Error::UnexpectedShape {
                    degree: 0,
                    equation: coeff.to_string(),
                })
            }
        }
    }
    killed.sort();
    killed.dedup();
    let coeffs = p
        .coeffs
        .iter()
        .filter(|(k, _)| !killed.contains(k))
        .map(|(k, v)| (*k, v.clone()))
        .collect();
    Ok(FilterOutcome {
        filtered: UnknownPoly::from_coeffs(disc, p.slot, p.bound, coeffs),
        killed,
        relation,
    })
}

/// phi' = xb^3 R(z), phi'' = Q(z) with z = x xb.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub r: Vec<VarSpec>,
    pub q: Vec<VarSpec>,
    /// (ansatz unknown, normal-form unknown)
    pub renaming: Vec<(String, String)>,
    disc: Discriminant,
}

fn coeff_var(prefix: &str, i: usize) -> VarSpec {
    let name = format!("{prefix}{i}");
    VarSpec::pair(name.clone(), format!("{name}b")).0
}

impl NormalForm {
    /// R of degree `deg_r` (None: R = 0) and Q of degree `deg_q`.
    pub fn with_degrees(disc: &Discriminant, deg_r: Option<u32>, deg_q: u32) -> Self {
        let r = deg_r.map_or(0, |d| d as usize + 1);
        NormalForm {
            r: (0..r).map(|i| coeff_var("r", i)).collect(),
            q: (0..=deg_q as usize).map(|i| coeff_var("q", i)).collect(),
            renaming: vec![],
            disc: disc.clone(),
        }
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    fn univariate(&self, cs: &[VarSpec], z: &SparsePoly) -> SparsePoly {
        cs.iter().enumerate().fold(SparsePoly::zero(&self.disc), |acc, (i, c)| {
            &acc + &(&SparsePoly::var(&self.disc, c) * &z.pow(i as u32))
        })
    }

    /// R(z) in the variable z.
    pub fn r_poly(&self) -> SparsePoly {
        self.univariate(&self.r, &SparsePoly::var(&self.disc, &z_var()))
    }

    pub fn q_poly(&self) -> SparsePoly {
        self.univariate(&self.q, &SparsePoly::var(&self.disc, &z_var()))
    }

    pub fn phi_prime(&self) -> SparsePoly {
        let (x, xb) = x_pair();
        let xb_p = SparsePoly::var(&self.disc, &xb);
        let z = &SparsePoly::var(&self.disc, &x) * &xb_p;
        &xb_p.pow(3) * &self.univariate(&self.r, &z)
    }

    pub fn phi_double_prime(&self) -> SparsePoly {
        let (x, xb) = x_pair();
        let z = &SparsePoly::var(&self.disc, &x) * &SparsePoly::var(&self.disc, &xb);
        self.univariate(&self.q, &z)
    }

    pub fn unknowns(&self) -> Vec<VarSpec> {
        self.r.iter().chain(&self.q).cloned().collect()
    }
}

fn rename_single(
    p: &UnknownPoly,
    prefix: &str,
    renaming: &mut Vec<(String, String)>,
) -> Result<Vec<VarSpec>, Prop1Error> {
    let shift = p.slot.survivor_shift();
    let offending: Vec<String> = p
        .coeffs
        .iter()
        .filter(|((k, l), _)| *l != k + shift)
        .map(|(_, v)| v.name().to_string())
        .collect();
    if !offending.is_empty() {
        return Err(Prop1Error::NotFiltered { offending });
    }
    let (x, xb) = x_pair();
    let nf = rewrite_norm(&p.poly, &x, &xb)?;
    if !p.poly.is_zero() && nf.shift != shift {
        return Err(Prop1Error::NotFiltered {
            offending: vec![format!("{} has shift {}", p.slot, nf.shift)],
        });
    }
    let mut out = Vec::new();
    for (i, c) in &nf.coefficients {
        if *i as usize != out.len() {
            return Err(Prop1Error::NotFiltered {
                offending: vec![format!("gap below z^{i} in {}", p.slot)],
            });
        }
        let used = c.used_vars();
        let [u] = used.as_slice() else {
            return Err(Prop1Error::UnexpectedShape {
                degree: *i,
                equation: c.to_string(),
            });
        };
        let v = coeff_var(prefix, out.len());
        renaming.push((u.name().to_string(), v.name().to_string()));
        out.push(v);
    }
    Ok(out)
}

/// Renames the surviving unknowns: a_{i,i+3} -> r_i and b_{i,i} -> q_i.
pub fn normal_form_norm(p1: &UnknownPoly, p2: &UnknownPoly) -> Result<NormalForm, Prop1Error> {
    let disc = p1.poly.disc();
    let mut renaming = Vec::new();
    let r = rename_single(p1, "r", &mut renaming)?;
    let q = rename_single(p2, "q", &mut renaming)?;
    let nf = NormalForm {
        r,
        q,
        renaming,
        disc: disc.clone(),
    };
    // substituting back must reproduce the filtered ansatz
    let back: BTreeMap<String, VarSpec> = nf
        .renaming
        .iter()
        .map(|(old, new)| {
            let spec = p1
                .coeffs
                .values()
                .chain(p2.coeffs.values())
                .find(|v| v.name() == old)
                .cloned()
                .expect("renamed unknown exists");
            (new.clone(), spec)
        })
        .collect();
    let ok1 = nf.phi_prime().rename(&back)? == p1.poly;
    let ok2 = nf.phi_double_prime().rename(&back)? == p2.poly;
    if !(ok1 && ok2) {
        return Err(Prop1Error::Residual("normal form does not reproduce the ansatz".into()));
    }
    Ok(nf)
}

/// Source of a coefficient equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// y-coefficient of tau o tau equals 1.
    InvolutionY,
    /// conjugate-y coefficient of tau o tau vanishes.
    InvolutionConjugateY,
}

/// Coefficientwise equations (each polynomial = 0) in the unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    pub nf: NormalForm,
    /// z^i coefficient of z^3 R^2 + Q sigma(Q) - 1.
    pub eq1: BTreeMap<u32, SparsePoly>,
    /// z^i coefficient of R Q + Q sigma(R), after removing the factor x^3.
    pub eq2: BTreeMap<u32, SparsePoly>,
    /// eq1 agrees with the closed form z^3 R(z)^2 + Q(z) sigma(Q)(z) - 1.
    pub closed_form_matches: bool,
}

impl ConstraintSystem {
    pub fn disc(&self) -> &Discriminant {
        self.nf.disc()
    }

    pub fn equations(&self) -> Vec<(Source, u32, &SparsePoly)> {
        let a = self.eq1.iter().map(|(d, p)| (Source::InvolutionY, *d, p));
        let b = self.eq2.iter().map(|(d, p)| (Source::InvolutionConjugateY, *d, p));
        a.chain(b).collect()
    }
}

fn nonzero_coefficients(nf: crate::poly::NormForm) -> BTreeMap<u32, SparsePoly> {
    nf.coefficients
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Expands tau o tau for the normal form and reads off the coefficient
/// equations in z.
pub fn extract_involution_constraints(nf: &NormalForm) -> Result<ConstraintSystem, Prop1Error> {
    let disc = nf.disc();
    let tau = tau_from(disc, &nf.phi_prime(), &nf.phi_double_prime(), nf.unknowns())?;
    let tt = tau.compose(&tau)?;
    let (x, xb) = x_pair();
    let (y, yb) = y_pair();
    let mut parts = tt.component(1).collect_in(&[y.name(), yb.name()]);
    let zero = SparsePoly::zero(disc);
    let cy = parts.remove(&vec![1, 0]).unwrap_or_else(|| zero.clone());
    let cyb = parts.remove(&vec![0, 1]).unwrap_or_else(|| zero.clone());
    if let Some((k, p)) = parts.into_iter().find(|(_, p)| !p.is_zero()) {
        return Err(Prop1Error::UnexpectedShape {
            degree: 0,
            equation: format!("{p} at y-exponents {k:?}"),
        });
    }
    let eq1 = nonzero_coefficients(rewrite_norm(&(&cy - &SparsePoly::one(disc)), &x, &xb)?);
    // the conjugate-y coefficient carries x^3 in front; swap to read it as
    // a shift in xb
    let eq2_form = rewrite_norm(&cyb.swap_vars(&x, &xb), &x, &xb)?;
    let eq2 = nonzero_coefficients(eq2_form);

    let z = SparsePoly::var(disc, &z_var());
    let r = nf.r_poly();
    let q = nf.q_poly();
    let closed = &(&(&z.pow(3) * &r.pow(2)) + &(&q * &q.apply_sigma())) - &SparsePoly::one(disc);
    let closed_coeffs: BTreeMap<u32, SparsePoly> = closed
        .collect_in(&["z"])
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k[0] as u32, c.trimmed()))
        .collect();
    let closed_form_matches = closed_coeffs.len() == eq1.len()
        && closed_coeffs.iter().all(|(k, c)| eq1.get(k) == Some(c));
    Ok(ConstraintSystem {
        nf: nf.clone(),
        eq1,
        eq2,
        closed_form_matches,
    })
}

/// Whole pipeline at one degree bound.
#[derive(Clone, Debug)]
pub struct Prop1Run {
    pub bound: u32,
    pub filters: [FilterOutcome; 2],
    pub system: ConstraintSystem,
    pub family: SolutionFamily,
    pub trace: ProofTrace,
}

pub fn run(disc: &Discriminant, bound: u32) -> Result<Prop1Run, Prop1Error> {
    let (p1, p2) = ansatz(disc, bound)?;
    let f1 = apply_equivariance_filter(&p1)?;
    let f2 = apply_equivariance_filter(&p2)?;
    let nf = normal_form_norm(&f1.filtered, &f2.filtered)?;
    let system = extract_involution_constraints(&nf)?;
    let mut steps = trace::pipeline_steps(&f1, &f2, &nf, &system);
    let (family, elim) = eliminate(&system)?;
    steps.extend(elim.steps);
    Ok(Prop1Run {
        bound,
        filters: [f1, f2],
        system,
        family,
        trace: ProofTrace { bound, steps },
    })
}

#[cfg(test)]
mod tests;
