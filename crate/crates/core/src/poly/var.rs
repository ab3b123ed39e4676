use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    /// Ordinary coordinate; exponents are nonnegative.
    Affine,
    /// Laurent variable (a torus parameter); exponents may be negative.
    Unit,
}

/// A named polynomial variable.
///
/// `partner` names the variable standing for the Galois conjugate of this
/// one. Galois conjugation swaps partners; an unpartnered unit variable is
/// inverted instead (sigma(l) = 1/l on the norm-one torus); an unpartnered
/// affine variable is a k-valued coordinate and stays fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSpec {
    name: String,
    kind: VarKind,
    partner: Option<String>,
}

impl VarSpec {
    pub fn affine(name: impl Into<String>) -> Self {
        VarSpec {
            name: name.into(),
            kind: VarKind::Affine,
            partner: None,
        }
    }

    pub fn unit(name: impl Into<String>) -> Self {
        VarSpec {
            name: name.into(),
            kind: VarKind::Unit,
            partner: None,
        }
    }

    /// An affine variable and the variable standing for its conjugate.
    pub fn pair(name: impl Into<String>, conj: impl Into<String>) -> (Self, Self) {
        let name = name.into();
        let conj = conj.into();
        assert_ne!(name, conj, "a variable cannot be its own partner");
        (
            VarSpec {
                name: name.clone(),
                kind: VarKind::Affine,
                partner: Some(conj.clone()),
            },
            VarSpec {
                name: conj,
                kind: VarKind::Affine,
                partner: Some(name),
            },
        )
    }

    pub fn with_partner(mut self, partner: Option<String>) -> Self {
        self.partner = partner;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn partner(&self) -> Option<&str> {
        self.partner.as_deref()
    }

    pub fn is_unit(&self) -> bool {
        self.kind == VarKind::Unit
    }

    /// The spec of the partner variable, if any.
    pub fn partner_spec(&self) -> Option<VarSpec> {
        self.partner.as_ref().map(|p| VarSpec {
            name: p.clone(),
            kind: self.kind,
            partner: Some(self.name.clone()),
        })
    }
}

impl fmt::Display for VarSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
