use std::collections::BTreeMap;

use serde::Serialize;

use super::{tau_from, Prop1Error, SolutionFamily};
use crate::arith::{Discriminant, QuadElem};
use crate::check::CheckResult;
use crate::poly::{PolyMap, SparsePoly, VarSpec};
use crate::schwarz::{self, check_equivariance, check_involution};
use crate::twist::weil_restrict;

/// mu_l(c0, c1) = (l^2 c0, l^3 c1).
pub fn mu_on(disc: &Discriminant, coords: &[VarSpec]) -> PolyMap {
    let l = |e| SparsePoly::monomial(QuadElem::one(disc), &[(schwarz::lambda(), e)]);
    let comps = vec![
        &l(2) * &SparsePoly::var(disc, &coords[0]),
        &l(3) * &SparsePoly::var(disc, &coords[1]),
    ];
    PolyMap::new(disc, coords.to_vec(), vec![schwarz::lambda()], comps).expect("well-formed action")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub label: String,
    /// First component is sigma(x).
    pub first_component: bool,
    /// Second component is phi'(x) y + phi''(x) sigma(y).
    pub k_linear: bool,
    /// A Weil restriction to rational coordinates exists.
    pub weil_restriction: bool,
    pub involution: bool,
    pub equivariance: bool,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.failed().is_empty()
    }

    pub fn failed(&self) -> Vec<&'static str> {
        [
            ("(i) first component", self.first_component),
            ("(ii) k-linear in y", self.k_linear),
            ("(iii) Weil restriction", self.weil_restriction),
            ("(iv) involution", self.involution),
            ("(v) equivariance", self.equivariance),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n)
        .collect()
    }

    pub fn to_check(&self, name: &str) -> CheckResult {
        let failed = self.failed();
        let mut r = CheckResult::new(
            name,
            "tau(x, y) = (sigma x, omega sigma y) with N(omega) = 1 satisfies (i)-(v)",
            failed.is_empty(),
        )
        .detail(self.label.clone());
        if !failed.is_empty() {
            r = r.detail(format!("failed: {}", failed.join(", ")));
        }
        for n in &self.notes {
            r = r.detail(n.clone());
        }
        r
    }
}

/// Replaces unit parameters that occur with nonnegative exponents only by
/// conjugate pairs of affine parameters, so the map becomes polynomial.
fn affine_params(f: &PolyMap) -> Result<PolyMap, String> {
    let mut subst = BTreeMap::new();
    for p in f.params().iter().filter(|p| p.is_unit()) {
        for c in f.components() {
            if let Some((lo, _)) = c.degree_range_in(&[p.name()]) {
                if lo < 0 {
                    return Err(format!("{} occurs with a negative exponent", p.name()));
                }
            }
        }
        let (a, _) = VarSpec::pair(format!("{}_", p.name()), format!("{}_b", p.name()));
        subst.insert(p.name().to_string(), SparsePoly::var(f.disc(), &a));
    }
    f.substitute(&subst).map_err(|e| e.to_string())
}

/// Conditions (i)-(v) for a map on K^2 with conjugate-paired coordinates.
pub fn check_conditions(tau: &PolyMap, label: impl Into<String>) -> ConditionReport {
    let disc = tau.disc();
    let mut notes = Vec::new();
    let shape_ok = tau.domain_dim() == 2 && tau.codomain_dim() == 2;
    let partner = |i: usize| tau.domain().get(i).and_then(VarSpec::partner_spec);
    let first_component = shape_ok
        && partner(0).is_some_and(|xb| *tau.component(0) == SparsePoly::var(disc, &xb));
    let k_linear = shape_ok
        && match partner(1) {
            Some(yb) => {
                let y = tau.domain()[1].name();
                let free0 = tau.component(0).degree_range_in(&[y, yb.name()]).is_none_or(|r| r == (0, 0));
                let keys_ok = tau
                    .component(1)
                    .collect_in(&[y, yb.name()])
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .all(|(k, _)| k == [1, 0] || k == [0, 1]);
                free0 && keys_ok
            }
            None => false,
        };
    let weil_restriction = match affine_params(tau) {
        Ok(f) => match weil_restrict(&f) {
            Ok(_) => true,
            Err(e) => {
                notes.push(format!("Weil restriction: {e}"));
                false
            }
        },
        Err(e) => {
            notes.push(format!("Weil restriction: {e}"));
            false
        }
    };
    let inv = check_involution(tau);
    let involution = inv.passed();
    if !involution {
        notes.extend(inv.details);
    }
    let equivariance = shape_ok && check_equivariance(&mu_on(disc, tau.domain()), tau).passed();
    ConditionReport {
        label: label.into(),
        first_component,
        k_linear,
        weil_restriction,
        involution,
        equivariance,
        notes,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Omega {
    /// A unit variable w with sigma(w) = 1/w, i.e. N(w) = 1 built in.
    Formal,
    Value(QuadElem),
}

/// Instantiates the family and rechecks (i)-(v).
pub fn verify_family(
    family: &SolutionFamily,
    omega: &Omega,
    disc: &Discriminant,
) -> Result<ConditionReport, Prop1Error> {
    let (by, params, label) = match omega {
        Omega::Formal => {
            let w = VarSpec::unit("w");
            (SparsePoly::var(disc, &w), vec![w], "omega formal, sigma(omega) = 1/omega".to_string())
        }
        Omega::Value(c) => (
            SparsePoly::constant(c.clone()),
            vec![],
            format!("omega = {c} (norm {})", crate::arith::render_rational(&c.norm())),
        ),
    };
    let subst = BTreeMap::from([(family.omega.name().to_string(), by)]);
    let phi1 = family.phi_prime.compose(&subst)?;
    let phi2 = family.phi_double_prime.compose(&subst)?;
    let tau = tau_from(disc, &phi1, &phi2, params)?;
    Ok(check_conditions(&tau, label))
}
