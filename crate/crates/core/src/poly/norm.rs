use std::collections::BTreeMap;

use crate::arith::Discriminant;

use super::sparse::SparsePoly;
use super::var::VarSpec;
use super::PolyError;

/// p = xb^shift * sum_i c_i * (x*xb)^i with coefficients free of x and xb.
#[derive(Clone, Debug, PartialEq)]
pub struct NormForm {
    pub x: VarSpec,
    pub xb: VarSpec,
    pub shift: u32,
    /// Coefficient of z^i, z = x*xb.
    pub coefficients: BTreeMap<u32, SparsePoly>,
}

impl NormForm {
    pub fn degree(&self) -> Option<u32> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn coefficient(&self, i: u32, disc: &Discriminant) -> SparsePoly {
        self.coefficients
            .get(&i)
            .cloned()
            .unwrap_or_else(|| SparsePoly::zero(disc))
    }

    /// The univariate polynomial sum_i c_i z^i in a variable `z`.
    pub fn univariate(&self, z: &VarSpec, disc: &Discriminant) -> SparsePoly {
        let zp = SparsePoly::var(disc, z);
        self.coefficients
            .iter()
            .fold(SparsePoly::zero(disc), |acc, (i, c)| &acc + &(c * &zp.pow(*i)))
    }

    /// Substitutes z = x*xb back and restores the xb^shift factor.
    pub fn expand(&self, disc: &Discriminant) -> SparsePoly {
        let x = SparsePoly::var(disc, &self.x);
        let xb = SparsePoly::var(disc, &self.xb);
        let z = &x * &xb;
        let body = self
            .coefficients
            .iter()
            .fold(SparsePoly::zero(disc), |acc, (i, c)| &acc + &(c * &z.pow(*i)));
        &xb.pow(self.shift) * &body
    }
}

/// Rewrites `p` as a polynomial in the norm z = x*xb, up to a common factor
/// xb^s. Terms x^i xb^j need j - i = s >= 0 for one s shared by all terms.
pub fn rewrite_norm(p: &SparsePoly, x: &VarSpec, xb: &VarSpec) -> Result<NormForm, PolyError> {
    let (xn, xbn) = (x.name(), xb.name());
    let mut shift: Option<i32> = None;
    let mut offending = Vec::new();
    let mut coefficients: BTreeMap<u32, SparsePoly> = BTreeMap::new();
    for (key, coeff) in p.collect_in(&[xn, xbn]) {
        let (i, j) = (key[0], key[1]);
        let s = j - i;
        let expected = *shift.get_or_insert(s);
        if s < 0 || s != expected {
            offending.push(render_xy(xn, i, xbn, j));
            continue;
        }
        coefficients.insert(i as u32, coeff.trimmed());
    }
    if !offending.is_empty() {
        return Err(PolyError::NotNormForm { offending });
    }
    Ok(NormForm {
        x: x.clone(),
        xb: xb.clone(),
        shift: shift.unwrap_or(0) as u32,
        coefficients,
    })
}

fn render_xy(x: &str, i: i32, xb: &str, j: i32) -> String {
    match (i, j) {
        (0, 0) => "1".to_string(),
        (i, 0) => format!("{x}^{i}"),
        (0, j) => format!("{xb}^{j}"),
        (i, j) => format!("{x}^{i}*{xb}^{j}"),
    }
}
