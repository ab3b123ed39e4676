use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Discriminant, QuadElem};

use super::sparse::{merge_vars, SparsePoly};
use super::var::VarSpec;
use super::PolyError;

/// A polynomial morphism of affine spaces.
///
/// Components may mention the domain coordinates, their declared conjugate
/// partners, and free parameters (e.g. the torus parameter of an action).
/// Composition substitutes the partner of a coordinate by the Galois
/// conjugate of the incoming component, so sigma-semilinear maps compose
/// correctly.
#[derive(Clone, Debug)]
pub struct PolyMap {
    disc: Discriminant,
    domain: Vec<VarSpec>,
    params: Vec<VarSpec>,
    components: Vec<SparsePoly>,
}

impl PolyMap {
    pub fn new(
        disc: &Discriminant,
        domain: Vec<VarSpec>,
        params: Vec<VarSpec>,
        components: Vec<SparsePoly>,
    ) -> Result<Self, PolyError> {
        let mut allowed = merge_vars(&domain, &params)?;
        for v in domain.iter().chain(&params) {
            if let Some(p) = v.partner_spec() {
                allowed = merge_vars(&allowed, &[p])?;
            }
        }
        for (i, c) in components.iter().enumerate() {
            if c.disc() != disc {
                return Err(PolyError::Arith(crate::arith::ArithError::MismatchedDiscriminant {
                    left: disc.to_string(),
                    right: c.disc().to_string(),
                }));
            }
            for v in c.used_vars() {
                match allowed.iter().find(|w| w.name() == v.name()) {
                    Some(w) if w == v => {}
                    Some(_) => return Err(PolyError::VarConflict(v.name().to_string())),
                    None => {
                        return Err(PolyError::UndeclaredVariable {
                            component: i,
                            var: v.name().to_string(),
                        })
                    }
                }
            }
        }
        Ok(PolyMap {
            disc: disc.clone(),
            domain,
            params,
            components,
        })
    }

    pub fn identity(disc: &Discriminant, domain: Vec<VarSpec>) -> Self {
        let components = domain.iter().map(|v| SparsePoly::var(disc, v)).collect();
        PolyMap {
            disc: disc.clone(),
            domain,
            params: Vec::new(),
            components,
        }
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn domain(&self) -> &[VarSpec] {
        &self.domain
    }

    pub fn params(&self) -> &[VarSpec] {
        &self.params
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SparsePoly {
        &self.components[i]
    }

    pub fn domain_dim(&self) -> usize {
        self.domain.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_endo(&self) -> bool {
        self.domain_dim() == self.codomain_dim()
    }

    /// True when component i is exactly the i-th coordinate.
    pub fn is_identity(&self) -> bool {
        self.is_endo()
            && self
                .components
                .iter()
                .zip(&self.domain)
                .all(|(c, v)| *c == SparsePoly::var(&self.disc, v))
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.components
            .iter()
            .all(SparsePoly::has_rational_coefficients)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap, PolyError> {
        if inner.codomain_dim() != self.domain_dim() {
            return Err(PolyError::DimensionMismatch {
                expected: self.domain_dim(),
                found: inner.codomain_dim(),
            });
        }
        let mut subst = BTreeMap::new();
        for (v, g) in self.domain.iter().zip(&inner.components) {
            subst.insert(v.name().to_string(), g.clone());
            if let Some(p) = v.partner() {
                subst.insert(p.to_string(), g.apply_sigma());
            }
        }
        let components = self
            .components
            .iter()
            .map(|c| c.compose(&subst))
            .collect::<Result<Vec<_>, _>>()?;
        let params = merge_vars(&inner.params, &self.params)?;
        Ok(PolyMap {
            disc: self.disc.clone(),
            domain: inner.domain.clone(),
            params,
            components,
        })
    }

    /// Substitutes parameters (or any variables) in every component.
    ///
    /// The substituted names leave the parameter list; variables brought in
    /// by the substitutes that are not coordinates become parameters.
    pub fn substitute(&self, subst: &BTreeMap<String, SparsePoly>) -> Result<PolyMap, PolyError> {
        let components = self
            .components
            .iter()
            .map(|c| c.compose(subst))
            .collect::<Result<Vec<_>, _>>()?;
        let mut params: Vec<VarSpec> = self
            .params
            .iter()
            .filter(|p| !subst.contains_key(p.name()))
            .cloned()
            .collect();
        for s in subst.values() {
            for v in s.used_vars() {
                let is_coord = self
                    .domain
                    .iter()
                    .any(|d| d.name() == v.name() || d.partner() == Some(v.name()));
                let is_param_partner = params.iter().any(|d| d.partner() == Some(v.name()));
                if !is_coord && !is_param_partner {
                    params = merge_vars(&params, std::slice::from_ref(v))?;
                }
            }
        }
        PolyMap::new(&self.disc, self.domain.clone(), params, components)
    }

    /// Fixes a parameter to a constant.
    pub fn at_param(&self, name: &str, value: &QuadElem) -> Result<PolyMap, PolyError> {
        let subst = BTreeMap::from([(name.to_string(), SparsePoly::constant(value.clone()))]);
        self.substitute(&subst)
    }

    /// Evaluates at a point. `point` holds coordinates, partners and
    /// parameters by name.
    pub fn eval(&self, point: &BTreeMap<String, QuadElem>) -> Result<Vec<QuadElem>, PolyError> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// Evaluates at coordinates `v`; partners get the conjugates and
    /// `params` the given values.
    pub fn eval_at(
        &self,
        v: &[QuadElem],
        params: &[(&str, QuadElem)],
    ) -> Result<Vec<QuadElem>, PolyError> {
        if v.len() != self.domain_dim() {
            return Err(PolyError::DimensionMismatch {
                expected: self.domain_dim(),
                found: v.len(),
            });
        }
        let mut point = BTreeMap::new();
        for (var, val) in self.domain.iter().zip(v) {
            point.insert(var.name().to_string(), val.clone());
            if let Some(p) = var.partner() {
                point.insert(p.to_string(), val.conjugate());
            }
        }
        for (name, val) in params {
            point.insert(name.to_string(), val.clone());
            let partner = self.params.iter().find(|p| p.name() == *name).and_then(|p| p.partner());
            if let Some(p) = partner {
                point.entry(p.to_string()).or_insert_with(|| val.conjugate());
            }
        }
        self.eval(&point)
    }
}

impl PartialEq for PolyMap {
    fn eq(&self, other: &Self) -> bool {
        self.disc == other.disc
            && self.domain == other.domain
            && self.components == other.components
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dom: Vec<&str> = self.domain.iter().map(VarSpec::name).collect();
        write!(f, "({}) -> (", dom.join(", "))?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
