use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{render_rational, Discriminant, QuadElem, Rational};

use super::var::{VarKind, VarSpec};
use super::PolyError;

/// Exponent vector, ordered graded-lexicographically over the declared
/// variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate Laurent polynomial with coefficients in K.
///
/// Operations between polynomials over different variable lists merge the
/// lists by name; a name declared twice with different kinds or partners
/// is a programming error and panics.
#[derive(Clone, Debug)]
pub struct SparsePoly {
    disc: Discriminant,
    vars: Vec<VarSpec>,
    terms: BTreeMap<Monomial, QuadElem>,
}

pub(crate) fn merge_vars(a: &[VarSpec], b: &[VarSpec]) -> Result<Vec<VarSpec>, PolyError> {
    let mut out = a.to_vec();
    for v in b {
        match out.iter().find(|w| w.name() == v.name()) {
            Some(w) if w != v => return Err(PolyError::VarConflict(v.name().to_string())),
            Some(_) => {}
            None => out.push(v.clone()),
        }
    }
    Ok(out)
}

fn merged(a: &[VarSpec], b: &[VarSpec]) -> Vec<VarSpec> {
    merge_vars(a, b).unwrap_or_else(|e| panic!("{e}"))
}

impl SparsePoly {
    pub fn zero(disc: &Discriminant) -> Self {
        SparsePoly {
            disc: disc.clone(),
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: QuadElem) -> Self {
        let mut p = SparsePoly::zero(c.disc());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(0), c);
        }
        p
    }

    pub fn from_rational(q: Rational, disc: &Discriminant) -> Self {
        Self::constant(QuadElem::from_rational(q, disc))
    }

    pub fn from_int(n: i64, disc: &Discriminant) -> Self {
        Self::constant(QuadElem::from_int(n, disc))
    }

    pub fn one(disc: &Discriminant) -> Self {
        Self::from_int(1, disc)
    }

    pub fn var(disc: &Discriminant, spec: &VarSpec) -> Self {
        Self::monomial(QuadElem::one(disc), &[(spec.clone(), 1)])
    }

    /// c * prod v^e. Panics on a negative exponent of an affine variable.
    pub fn monomial(c: QuadElem, factors: &[(VarSpec, i32)]) -> Self {
        let mut vars: Vec<VarSpec> = Vec::new();
        for (v, _) in factors {
            vars = merged(&vars, std::slice::from_ref(v));
        }
        let mut exps = vec![0i32; vars.len()];
        for (v, e) in factors {
            assert!(
                *e >= 0 || v.is_unit(),
                "negative exponent on affine variable {}",
                v.name()
            );
            let i = vars.iter().position(|w| w.name() == v.name()).unwrap();
            exps[i] += e;
        }
        let mut p = SparsePoly {
            disc: c.disc().clone(),
            vars,
            terms: BTreeMap::new(),
        };
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    /// Builds a polynomial from raw exponent vectors over `vars`, validating
    /// every term.
    pub fn from_terms(
        disc: &Discriminant,
        vars: Vec<VarSpec>,
        terms: impl IntoIterator<Item = (Vec<i32>, QuadElem)>,
    ) -> Result<Self, PolyError> {
        merge_vars(&[], &vars)?;
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name() == v.name()) {
                return Err(PolyError::VarConflict(v.name().to_string()));
            }
        }
        let mut p = SparsePoly {
            disc: disc.clone(),
            vars,
            terms: BTreeMap::new(),
        };
        for (exps, c) in terms {
            if exps.len() != p.vars.len() {
                return Err(PolyError::DimensionMismatch {
                    expected: p.vars.len(),
                    found: exps.len(),
                });
            }
            for (e, v) in exps.iter().zip(&p.vars) {
                if *e < 0 && !v.is_unit() {
                    return Err(PolyError::NegativeAffineExponent(v.name().to_string()));
                }
            }
            if c.disc() != disc {
                return Err(PolyError::Arith(crate::arith::ArithError::MismatchedDiscriminant {
                    left: disc.to_string(),
                    right: c.disc().to_string(),
                }));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name() == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &QuadElem)> {
        self.terms.iter()
    }

    /// Names of variables that occur with a nonzero exponent.
    pub fn used_vars(&self) -> Vec<&VarSpec> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m.0[*i] != 0))
            .map(|(_, v)| v)
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant term (zero when absent).
    pub fn constant_term(&self) -> QuadElem {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| QuadElem::zero(&self.disc))
    }

    /// True when every coefficient lies in the base field Q.
    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().all(QuadElem::is_rational)
    }

    /// Exponent of `name` in monomial `m` (zero if undeclared).
    pub fn exponent(&self, m: &Monomial, name: &str) -> i32 {
        self.var_index(name).map_or(0, |i| m.0[i])
    }

    /// Total degree in the named variables: (min, max) over all terms.
    pub fn degree_range_in(&self, names: &[&str]) -> Option<(i32, i32)> {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.var_index(n)).collect();
        let degs = self
            .terms
            .keys()
            .map(|m| idx.iter().map(|&i| m.0[i]).sum::<i32>());
        degs.fold(None, |acc, d| match acc {
            None => Some((d, d)),
            Some((lo, hi)) => Some((lo.min(d), hi.max(d))),
        })
    }

    fn add_term(&mut self, m: Monomial, c: QuadElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Re-embeds into a variable list that contains every declared variable.
    pub fn with_vars(&self, vars: &[VarSpec]) -> SparsePoly {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let positions: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w.name() == v.name())
                    .unwrap_or_else(|| panic!("variable {} missing from target list", v.name()))
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; vars.len()];
                for (e, &p) in m.0.iter().zip(&positions) {
                    exps[p] = *e;
                }
                (Monomial(exps), c.clone())
            })
            .collect();
        SparsePoly {
            disc: self.disc.clone(),
            vars: vars.to_vec(),
            terms,
        }
    }

    /// Drops declared variables that do not occur.
    pub fn trimmed(&self) -> SparsePoly {
        let keep: Vec<VarSpec> = self.used_vars().into_iter().cloned().collect();
        let idx: Vec<usize> = keep
            .iter()
            .map(|v| self.var_index(v.name()).unwrap())
            .collect();
        SparsePoly {
            disc: self.disc.clone(),
            vars: keep,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(idx.iter().map(|&i| m.0[i]).collect()), c.clone()))
                .collect(),
        }
    }

    fn check_disc(&self, other: &SparsePoly) {
        assert!(
            self.disc == other.disc,
            "polynomials over different quadratic fields ({} vs {})",
            self.disc,
            other.disc
        );
    }

    pub fn scale(&self, c: &QuadElem) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly {
                disc: self.disc.clone(),
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        SparsePoly {
            disc: self.disc.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(&self.disc).with_vars(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Simultaneous substitution of variables by polynomials.
    ///
    /// A variable occurring with a negative exponent must be replaced by an
    /// invertible monomial: a nonzero coefficient times unit variables.
    pub fn compose(&self, subst: &BTreeMap<String, SparsePoly>) -> Result<SparsePoly, PolyError> {
        let mut vars: Vec<VarSpec> = self
            .vars
            .iter()
            .filter(|v| !subst.contains_key(v.name()))
            .cloned()
            .collect();
        for s in subst.values() {
            self.check_disc(s);
            vars = merge_vars(&vars, &s.vars)?;
        }
        let keep: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| {
                if subst.contains_key(v.name()) {
                    None
                } else {
                    vars.iter().position(|w| w.name() == v.name())
                }
            })
            .collect();
        let replacement: Vec<Option<SparsePoly>> = self
            .vars
            .iter()
            .map(|v| subst.get(v.name()).map(|s| s.with_vars(&vars)))
            .collect();

        let mut cache: HashMap<(usize, i32), SparsePoly> = HashMap::new();
        let mut out = SparsePoly {
            disc: self.disc.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let mut exps = vec![0; vars.len()];
            for (i, e) in m.0.iter().enumerate() {
                if let Some(p) = keep[i] {
                    exps[p] = *e;
                }
            }
            let mut term = SparsePoly {
                disc: self.disc.clone(),
                vars: vars.clone(),
                terms: BTreeMap::from([(Monomial(exps), c.clone())]),
            };
            for (i, &e) in m.0.iter().enumerate() {
                let Some(rep) = &replacement[i] else { continue };
                if e == 0 {
                    continue;
                }
                if let Entry::Vacant(slot) = cache.entry((i, e)) {
                    let base = if e < 0 {
                        rep.monomial_inverse()
                            .map_err(|err| err.for_var(self.vars[i].name()))?
                    } else {
                        rep.clone()
                    };
                    slot.insert(base.pow(e.unsigned_abs()));
                }
                term = &term * &cache[&(i, e)];
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Inverse of an invertible monomial c * prod u^e over unit variables.
    pub fn monomial_inverse(&self) -> Result<SparsePoly, PolyError> {
        if self.terms.len() != 1 {
            return Err(PolyError::NotInvertible {
                var: String::new(),
                substitute: self.to_string(),
            });
        }
        let (m, c) = self.terms.iter().next().unwrap();
        for (e, v) in m.0.iter().zip(&self.vars) {
            if *e != 0 && v.kind() == VarKind::Affine {
                return Err(PolyError::NegativeAffineExponent(v.name().to_string()));
            }
        }
        let inv = Monomial(m.0.iter().map(|e| -e).collect());
        Ok(SparsePoly {
            disc: self.disc.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::from([(inv, c.inverse()?)]),
        })
    }

    /// Substitutes single variables by single variables.
    pub fn rename(&self, map: &BTreeMap<String, VarSpec>) -> Result<SparsePoly, PolyError> {
        let subst = map
            .iter()
            .map(|(k, v)| (k.clone(), SparsePoly::var(&self.disc, v)))
            .collect();
        self.compose(&subst)
    }

    /// Swaps two variables without touching coefficients.
    pub fn swap_vars(&self, a: &VarSpec, b: &VarSpec) -> SparsePoly {
        let map = BTreeMap::from([
            (a.name().to_string(), b.clone()),
            (b.name().to_string(), a.clone()),
        ]);
        self.rename(&map).expect("renaming cannot fail")
    }

    /// The Galois involution: conjugates coefficients, swaps partnered
    /// variables and inverts unpartnered unit variables.
    pub fn apply_sigma(&self) -> SparsePoly {
        let mut vars = self.vars.clone();
        for v in &self.vars {
            if let Some(p) = v.partner_spec() {
                vars = merged(&vars, &[p]);
            }
        }
        let target: Vec<(usize, i32)> = self
            .vars
            .iter()
            .map(|v| match v.partner() {
                Some(p) => (vars.iter().position(|w| w.name() == p).unwrap(), 1),
                None if v.is_unit() => (vars.iter().position(|w| w == v).unwrap(), -1),
                None => (vars.iter().position(|w| w == v).unwrap(), 1),
            })
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0; vars.len()];
                for (e, (pos, sign)) in m.0.iter().zip(&target) {
                    exps[*pos] += sign * e;
                }
                (Monomial(exps), c.conjugate())
            })
            .collect();
        SparsePoly {
            disc: self.disc.clone(),
            vars,
            terms,
        }
    }

    /// Splits by the exponent of the named variables. Keys are the exponent
    /// vectors in those variables; values no longer contain them.
    pub fn collect_in(&self, names: &[&str]) -> BTreeMap<Vec<i32>, SparsePoly> {
        let idx: Vec<Option<usize>> = names.iter().map(|n| self.var_index(n)).collect();
        let mut out: BTreeMap<Vec<i32>, SparsePoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<i32> = idx.iter().map(|i| i.map_or(0, |i| m.0[i])).collect();
            let mut rest = m.clone();
            for i in idx.iter().flatten() {
                rest.0[*i] = 0;
            }
            out.entry(key)
                .or_insert_with(|| SparsePoly {
                    disc: self.disc.clone(),
                    vars: self.vars.clone(),
                    terms: BTreeMap::new(),
                })
                .add_term(rest, c.clone());
        }
        out
    }

    /// Splits by the exponent of `u`; parts are free of `u`.
    pub fn weight_decompose(&self, u: &str) -> BTreeMap<i32, SparsePoly> {
        self.collect_in(&[u])
            .into_iter()
            .map(|(k, v)| (k[0], v))
            .collect()
    }

    /// Keeps exactly the terms in which `u` has exponent `w`.
    pub fn filter_weight(&self, u: &str, w: i32) -> SparsePoly {
        let mut out = SparsePoly {
            disc: self.disc.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            if self.exponent(m, u) == w {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Exact evaluation. Every occurring variable needs a value; unit
    /// variables need a nonzero one.
    pub fn eval(&self, point: &BTreeMap<String, QuadElem>) -> Result<QuadElem, PolyError> {
        let mut acc = QuadElem::zero(&self.disc);
        let mut powers: HashMap<(usize, i32), QuadElem> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = &self.vars[i];
                let val = point
                    .get(v.name())
                    .ok_or_else(|| PolyError::MissingValue(v.name().to_string()))?;
                if v.is_unit() && val.is_zero() {
                    return Err(PolyError::ZeroUnit(v.name().to_string()));
                }
                if let Entry::Vacant(slot) = powers.entry((i, e)) {
                    slot.insert(val.pow(e as i64)?);
                }
                term = &term * &powers[&(i, e)];
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.vars)
            .filter(|(e, _)| **e != 0)
            .map(|(e, v)| {
                if *e == 1 {
                    v.name().to_string()
                } else {
                    format!("{}^{}", v.name(), e)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for SparsePoly {
    /// Leading (largest) term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono = self.render_monomial(m);
            let (neg, body) = if c.is_rational() {
                let x = c.x();
                let neg = x < &Rational::from_integer(0.into());
                let abs = if neg { -x } else { x.clone() };
                let coeff = render_rational(&abs);
                let body = if mono.is_empty() {
                    coeff
                } else if coeff == "1" {
                    mono
                } else {
                    format!("{coeff}*{mono}")
                };
                (neg, body)
            } else if mono.is_empty() {
                (false, format!("({c})"))
            } else {
                (false, format!("({c})*{mono}"))
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => f.write_str(&body)?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl PartialEq for SparsePoly {
    /// Structural equality after aligning variable lists by name.
    fn eq(&self, other: &Self) -> bool {
        if self.disc != other.disc {
            return false;
        }
        let Ok(vars) = merge_vars(&self.vars, &other.vars) else {
            return false;
        };
        self.with_vars(&vars).terms == other.with_vars(&vars).terms
    }
}

impl Eq for SparsePoly {}

impl Add<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_disc(rhs);
        let vars = merged(&self.vars, &rhs.vars);
        let mut out = self.with_vars(&vars);
        for (m, c) in rhs.with_vars(&vars).terms {
            out.add_term(m, c);
        }
        out
    }
}

impl Sub<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            disc: self.disc.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_disc(rhs);
        let vars = merged(&self.vars, &rhs.vars);
        let a = self.with_vars(&vars);
        let b = rhs.with_vars(&vars);
        let mut out = SparsePoly {
            disc: self.disc.clone(),
            vars,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}
