use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    ansatz, apply_equivariance_filter, extract_involution_constraints, normal_form_norm,
    ConstraintSystem, FilterOutcome, NormalForm, Prop1Error, Slot,
};
use crate::arith::{render_rational, Discriminant};
use crate::poly::{SparsePoly, VarSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    WeightFilter,
    NormRewrite,
    TopCoefficient,
    SquareZero,
    NormZero,
    Substitution,
    Conclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub anchor: String,
    pub before: String,
    pub after: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unknown: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

impl TraceStep {
    fn new(kind: StepKind, anchor: &str, before: String, after: String) -> Self {
        TraceStep {
            kind,
            anchor: anchor.to_string(),
            before,
            after,
            unknown: None,
            degree: None,
        }
    }

    fn on(mut self, unknown: Option<&VarSpec>, degree: Option<u32>) -> Self {
        self.unknown = unknown.map(|v| v.name().to_string());
        self.degree = degree;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    pub bound: u32,
    pub steps: Vec<TraceStep>,
}

/// phi' = 0, phi'' = omega, omega sigma(omega) = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFamily {
    pub omega: VarSpec,
    pub eliminated: Vec<String>,
    pub phi_prime: SparsePoly,
    pub phi_double_prime: SparsePoly,
    /// The one remaining relation, as a polynomial that must vanish.
    pub residual: SparsePoly,
}

impl SolutionFamily {
    fn new(disc: &Discriminant, omega: VarSpec, eliminated: Vec<String>, residual: SparsePoly) -> Self {
        SolutionFamily {
            phi_prime: SparsePoly::zero(disc),
            phi_double_prime: SparsePoly::var(disc, &omega),
            omega,
            eliminated,
            residual,
        }
    }

    /// phi' = 0, phi'' = omega and residual omega omegab - 1.
    pub fn is_norm_one_family(&self) -> bool {
        let disc = self.residual.disc();
        let w = SparsePoly::var(disc, &self.omega);
        let wb = SparsePoly::var(disc, &self.omega.partner_spec().expect("paired unknown"));
        self.phi_prime.is_zero()
            && self.phi_double_prime == w
            && self.residual == &(&w * &wb) - &SparsePoly::one(disc)
    }

    pub fn describe(&self) -> String {
        format!(
            "{} = {}, {} = {}, {} = 0",
            Slot::PhiPrime,
            self.phi_prime,
            Slot::PhiDoublePrime,
            self.phi_double_prime,
            self.residual
        )
    }

    /// Every member (eliminated unknowns 0, omega on the norm-one torus)
    /// satisfies every equation of the system.
    pub fn satisfies(&self, cs: &ConstraintSystem) -> Result<bool, Prop1Error> {
        let disc = cs.disc();
        let mut subst = zero_subst(cs, &self.eliminated);
        let w = VarSpec::unit("w");
        let wp = SparsePoly::var(disc, &w);
        subst.insert(self.omega.name().to_string(), wp.clone());
        let wb = self.omega.partner().expect("paired unknown").to_string();
        subst.insert(wb, wp.monomial_inverse()?);
        for (_, _, p) in cs.equations() {
            if !p.compose(&subst)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn find_unknown(nf: &NormalForm, name: &str) -> Option<VarSpec> {
    nf.unknowns().into_iter().find(|v| v.name() == name)
}

fn zero_subst(cs: &ConstraintSystem, names: &[String]) -> BTreeMap<String, SparsePoly> {
    let zero = SparsePoly::zero(cs.disc());
    let mut subst = BTreeMap::new();
    for n in names {
        if let Some(v) = find_unknown(&cs.nf, n) {
            subst.insert(v.name().to_string(), zero.clone());
            if let Some(p) = v.partner() {
                subst.insert(p.to_string(), zero.clone());
            }
        }
    }
    subst
}

fn apply_subst(
    eqs: &BTreeMap<u32, SparsePoly>,
    subst: &BTreeMap<String, SparsePoly>,
) -> Result<BTreeMap<u32, SparsePoly>, Prop1Error> {
    let mut out = BTreeMap::new();
    for (d, p) in eqs {
        let q = p.compose(subst)?.trimmed();
        if !q.is_zero() {
            out.insert(*d, q);
        }
    }
    Ok(out)
}

struct State<'a> {
    cs: &'a ConstraintSystem,
    eq1: BTreeMap<u32, SparsePoly>,
    eliminated: Vec<String>,
}

enum TopTerm {
    Square(VarSpec),
    Norm(VarSpec),
}

const ODD_ANCHOR: &str = "z^3 R(z)^2 has odd top degree 2e+3, Q sigma(Q) even top degree 2d";
const SQUARE_ANCHOR: &str = "r^2 = 0 forces r = 0 in a field";
const NORM_ANCHOR: &str = "c sigma(c) = N(c) = 0 forces c = 0: the norm form is anisotropic";
const SUBST_ANCHOR: &str = "substitute the vanishing unknown and its conjugate";
const EQ2_ANCHOR: &str = "conjugate-y coefficients x^3 (R Q + Q sigma(R)) vanish once R = 0";
const CONCLUSION_ANCHOR: &str = "R = 0 and Q sigma(Q) = 1: tau(x, y) = (sigma x, omega sigma y)";

impl<'a> State<'a> {
    fn new(cs: &'a ConstraintSystem) -> Self {
        State {
            cs,
            eq1: cs.eq1.clone(),
            eliminated: Vec::new(),
        }
    }

    fn top(&self) -> Option<(u32, SparsePoly)> {
        self.eq1.iter().next_back().map(|(d, p)| (*d, p.clone()))
    }

    fn classify(&self, degree: u32, eq: &SparsePoly) -> Result<TopTerm, Prop1Error> {
        let nf = &self.cs.nf;
        let disc = nf.disc();
        let names = |vs: &[VarSpec]| -> Vec<String> {
            vs.iter()
                .flat_map(|v| [v.name().to_string(), v.partner().unwrap_or_default().to_string()])
                .collect()
        };
        let (rn, qn) = (names(&nf.r), names(&nf.q));
        let used: Vec<String> = eq.used_vars().iter().map(|v| v.name().to_string()).collect();
        let has_r = used.iter().any(|u| rn.contains(u));
        let has_q = used.iter().any(|u| qn.contains(u));
        if has_r && has_q {
            return Err(Prop1Error::ParityViolation {
                degree,
                equation: eq.to_string(),
            });
        }
        let shape = || Prop1Error::UnexpectedShape {
            degree,
            equation: eq.to_string(),
        };
        if degree % 2 == 1 {
            let e = ((degree as i64 - 3) / 2) as usize;
            let r = nf.r.get(e).filter(|_| degree >= 3).ok_or_else(shape)?;
            if *eq == SparsePoly::var(disc, r).pow(2) {
                return Ok(TopTerm::Square(r.clone()));
            }
        } else {
            let q = nf.q.get(degree as usize / 2).ok_or_else(shape)?;
            let qb = q.partner_spec().expect("paired unknown");
            if *eq == &SparsePoly::var(disc, q) * &SparsePoly::var(disc, &qb) {
                return Ok(TopTerm::Norm(q.clone()));
            }
        }
        Err(shape())
    }

    fn zero_out(&mut self, v: &VarSpec) -> Result<(), Prop1Error> {
        self.eliminated.push(v.name().to_string());
        let subst = zero_subst(self.cs, std::slice::from_ref(&v.name().to_string()));
        self.eq1 = apply_subst(&self.eq1, &subst)?;
        Ok(())
    }

    fn residual(&self) -> SparsePoly {
        let disc = self.cs.disc();
        let q0 = &self.cs.nf.q[0];
        let q0b = q0.partner_spec().expect("paired unknown");
        &(&SparsePoly::var(disc, q0) * &SparsePoly::var(disc, &q0b)) - &SparsePoly::one(disc)
    }

    fn finished(&self) -> bool {
        self.eq1.len() == 1 && self.eq1.get(&0) == Some(&self.residual())
    }

    fn eq2_after(&self) -> Result<BTreeMap<u32, SparsePoly>, Prop1Error> {
        apply_subst(&self.cs.eq2, &zero_subst(self.cs, &self.eliminated))
    }

    fn r_eliminated(&self) -> bool {
        self.cs.nf.r.iter().all(|r| self.eliminated.iter().any(|e| e == r.name()))
    }

    fn family(&self) -> SolutionFamily {
        SolutionFamily::new(
            self.cs.disc(),
            self.cs.nf.q[0].clone(),
            self.eliminated.clone(),
            self.residual(),
        )
    }
}

fn top_text(degree: u32, eq: &SparsePoly) -> String {
    format!("[z^{degree}] {eq} = 0")
}

fn pending_text(n: usize) -> String {
    format!("{n} pending equations")
}

/// Degree descent on the y-coefficient equations: the top equation is
/// always a pure square r_e^2 (odd degree) or a pure norm q_d q_db (even
/// degree), and each forces one unknown to vanish.
pub fn eliminate(cs: &ConstraintSystem) -> Result<(SolutionFamily, ProofTrace), Prop1Error> {
    let disc = cs.disc();
    let mut st = State::new(cs);
    let mut steps = Vec::new();
    while let Some((n, eq)) = st.top() {
        if n == 0 {
            break;
        }
        let term = st.classify(n, &eq)?;
        let (v, rule) = match &term {
            TopTerm::Square(v) => (v.clone(), (StepKind::SquareZero, SQUARE_ANCHOR, format!("{}^2 = 0", v.name()))),
            TopTerm::Norm(v) => {
                if !disc.is_anisotropic() {
                    return Err(Prop1Error::NormZeroUnsound(render_rational(disc.alpha())));
                }
                let vb = v.partner().unwrap_or_default();
                (v.clone(), (StepKind::NormZero, NORM_ANCHOR, format!("{}*{vb} = 0", v.name())))
            }
        };
        steps.push(TraceStep::new(StepKind::TopCoefficient, ODD_ANCHOR, top_text(n, &eq), rule.2.clone()).on(Some(&v), Some(n)));
        steps.push(TraceStep::new(rule.0, rule.1, rule.2, format!("{} = 0", v.name())).on(Some(&v), Some(n)));
        let before = pending_text(st.eq1.len());
        st.zero_out(&v)?;
        steps.push(TraceStep::new(StepKind::Substitution, SUBST_ANCHOR, before, pending_text(st.eq1.len())).on(Some(&v), None));
    }
    if !st.finished() {
        let rest: Vec<String> = st.eq1.iter().map(|(d, p)| top_text(*d, p)).collect();
        return Err(Prop1Error::Residual(rest.join("; ")));
    }
    if !st.r_eliminated() {
        return Err(Prop1Error::Residual("R is not identically zero".into()));
    }
    let eq2 = st.eq2_after()?;
    if !eq2.is_empty() {
        let rest: Vec<String> = eq2.values().map(ToString::to_string).collect();
        return Err(Prop1Error::Residual(rest.join("; ")));
    }
    steps.push(TraceStep::new(StepKind::Substitution, EQ2_ANCHOR, pending_text(cs.eq2.len()), pending_text(0)));
    let family = st.family();
    steps.push(TraceStep::new(StepKind::Conclusion, CONCLUSION_ANCHOR, top_text(0, &family.residual), family.describe()));
    let bound = cs.nf.q.len() as u32 - 1;
    Ok((family, ProofTrace { bound, steps }))
}

fn survivors_text(f: &FilterOutcome) -> String {
    let s = f.survivors();
    if s.is_empty() {
        return "no survivors".into();
    }
    let parts: Vec<String> = s.iter().map(|(k, l)| format!("({k},{l})")).collect();
    format!("survivors {}", parts.join(" "))
}

fn filter_step(f: &FilterOutcome) -> TraceStep {
    let anchor = match f.filtered.slot {
        Slot::PhiPrime => "weight 6+2k-2l of x^k xb^l must vanish: l = k+3",
        Slot::PhiDoublePrime => "weight 2k-2l of x^k xb^l must vanish: l = k",
    };
    let total = f.killed.len() + f.survivors().len();
    TraceStep::new(
        StepKind::WeightFilter,
        anchor,
        format!("{}: {total} unknowns", f.filtered.slot),
        survivors_text(f),
    )
}

fn rewrite_steps(nf: &NormalForm, cs: &ConstraintSystem) -> Vec<TraceStep> {
    let show = |p: SparsePoly| if p.is_zero() { "0".to_string() } else { p.to_string() };
    let renaming: Vec<String> = nf.renaming.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
    vec![
        TraceStep::new(
            StepKind::NormRewrite,
            "phi' = xb^3 R(x xb), phi'' = Q(x xb)",
            renaming.join(", "),
            format!("R = {}, Q = {}", show(nf.r_poly()), show(nf.q_poly())),
        ),
        TraceStep::new(
            StepKind::NormRewrite,
            "z = x xb takes infinitely many values in k, so the relations hold coefficientwise in z",
            "tau o tau = id".into(),
            format!(
                "{} y-coefficient and {} conjugate-y coefficient equations; closed form {}",
                cs.eq1.len(),
                cs.eq2.len(),
                if cs.closed_form_matches { "agrees" } else { "differs" }
            ),
        ),
    ]
}

pub(super) fn pipeline_steps(
    f1: &FilterOutcome,
    f2: &FilterOutcome,
    nf: &NormalForm,
    cs: &ConstraintSystem,
) -> Vec<TraceStep> {
    let mut steps = vec![filter_step(f1), filter_step(f2)];
    steps.extend(rewrite_steps(nf, cs));
    steps
}

impl ProofTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    /// Rebuilds the system from the ansatz at this bound and executes the
    /// recorded steps, checking each against the recomputed state.
    pub fn replay(&self, disc: &Discriminant) -> Result<SolutionFamily, Prop1Error> {
        let diverged = |step: usize, message: String| Prop1Error::Replay { step, message };
        let (p1, p2) = ansatz(disc, self.bound)?;
        let f1 = apply_equivariance_filter(&p1)?;
        let f2 = apply_equivariance_filter(&p2)?;
        let nf = normal_form_norm(&f1.filtered, &f2.filtered)?;
        let cs = extract_involution_constraints(&nf)?;
        let prefix = pipeline_steps(&f1, &f2, &nf, &cs);
        for (i, expect) in prefix.iter().enumerate() {
            if self.steps.get(i) != Some(expect) {
                return Err(diverged(i, format!("expected {:?} step", expect.kind)));
            }
        }
        self.replay_elimination(&cs, prefix.len())
    }

    /// Executes the elimination steps from index `start` on `cs`.
    pub fn replay_elimination(&self, cs: &ConstraintSystem, start: usize) -> Result<SolutionFamily, Prop1Error> {
        let diverged = |step: usize, message: String| Prop1Error::Replay { step, message };
        let disc = cs.disc();
        let mut st = State::new(cs);
        let mut concluded = false;
        for (i, step) in self.steps.iter().enumerate().skip(start) {
            if concluded {
                return Err(diverged(i, "step after conclusion".into()));
            }
            let unknown = || {
                step.unknown
                    .as_deref()
                    .and_then(|n| find_unknown(&cs.nf, n))
                    .ok_or_else(|| diverged(i, "missing or unknown variable".into()))
            };
            match step.kind {
                StepKind::TopCoefficient => {
                    let (n, eq) = st.top().ok_or_else(|| diverged(i, "no equations".into()))?;
                    if Some(n) != step.degree || top_text(n, &eq) != step.before {
                        return Err(diverged(i, format!("top equation is {}", top_text(n, &eq))));
                    }
                }
                StepKind::SquareZero | StepKind::NormZero => {
                    let v = unknown()?;
                    let d = step.degree.ok_or_else(|| diverged(i, "missing degree".into()))?;
                    let eq = st.eq1.get(&d).cloned().ok_or_else(|| diverged(i, format!("no equation at z^{d}")))?;
                    let ok = match (step.kind, st.classify(d, &eq)?) {
                        (StepKind::SquareZero, TopTerm::Square(r)) => r == v,
                        (StepKind::NormZero, TopTerm::Norm(q)) => {
                            if !disc.is_anisotropic() {
                                return Err(Prop1Error::NormZeroUnsound(render_rational(disc.alpha())));
                            }
                            q == v
                        }
                        _ => false,
                    };
                    if !ok {
                        return Err(diverged(i, format!("rule does not apply to {eq}")));
                    }
                }
                StepKind::Substitution => match &step.unknown {
                    Some(_) => st.zero_out(&unknown()?)?,
                    None => {
                        if !st.r_eliminated() || !st.eq2_after()?.is_empty() {
                            return Err(diverged(i, "conjugate-y equations do not vanish".into()));
                        }
                    }
                },
                StepKind::Conclusion => {
                    if !st.finished() {
                        return Err(diverged(i, "system is not in solved form".into()));
                    }
                    concluded = true;
                }
                StepKind::WeightFilter | StepKind::NormRewrite => {
                    return Err(diverged(i, "preprocessing step inside the elimination".into()));
                }
            }
        }
        if !concluded {
            return Err(diverged(self.steps.len(), "no conclusion".into()));
        }
        Ok(st.family())
    }
}
