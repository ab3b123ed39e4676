//! JSON interchange format for [`PolyMap`].
//!
//! ```json
//! {
//!   "alpha": "2",
//!   "variables": [{"name": "a", "kind": "affine", "partner": null}, ...],
//!   "domain": ["a", "b", "x", "y"],
//!   "params": ["l"],
//!   "components": [[[[1, 0, 0, 0, 0], "1", "0"], ...], ...]
//! }
//! ```
//!
//! Each term is `[exponents over "variables", x, y]` for the coefficient
//! x + y*t, with x and y canonical rationals.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{parse_rational, render_rational, Discriminant, QuadElem};

use super::map::PolyMap;
use super::sparse::{merge_vars, SparsePoly};
use super::var::{VarKind, VarSpec};

#[derive(Debug, Error)]
pub enum MapFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> MapFileError {
    MapFileError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    alpha: String,
    variables: Vec<VarEntry>,
    domain: Vec<String>,
    #[serde(default)]
    params: Vec<String>,
    components: Vec<Vec<(Vec<i32>, String, String)>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VarEntry {
    name: String,
    kind: String,
    #[serde(default)]
    partner: Option<String>,
}

pub fn map_to_json(map: &PolyMap) -> String {
    let mut vars: Vec<VarSpec> = Vec::new();
    for v in map.domain() {
        vars = merge_vars(&vars, std::slice::from_ref(v)).expect("consistent map");
        if let Some(p) = v.partner_spec() {
            vars = merge_vars(&vars, &[p]).expect("consistent map");
        }
    }
    vars = merge_vars(&vars, map.params()).expect("consistent map");
    for c in map.components() {
        vars = merge_vars(&vars, c.vars()).expect("consistent map");
    }
    let variables = vars
        .iter()
        .map(|v| VarEntry {
            name: v.name().to_string(),
            kind: match v.kind() {
                VarKind::Affine => "affine".into(),
                VarKind::Unit => "unit".into(),
            },
            partner: v.partner().map(str::to_string),
        })
        .collect();
    let components = map
        .components()
        .iter()
        .map(|c| {
            c.with_vars(&vars)
                .terms()
                .rev()
                .map(|(m, q)| (m.0.clone(), render_rational(q.x()), render_rational(q.y())))
                .collect()
        })
        .collect();
    let file = MapFile {
        alpha: map.disc().to_string(),
        variables,
        domain: map.domain().iter().map(|v| v.name().to_string()).collect(),
        params: map.params().iter().map(|v| v.name().to_string()).collect(),
        components,
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn map_from_json(text: &str) -> Result<PolyMap, MapFileError> {
    let file: MapFile = serde_json::from_str(text).map_err(|e| MapFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let disc = Discriminant::parse(&file.alpha).map_err(|e| field_err("alpha", e.to_string()))?;
    if render_rational(disc.alpha()) != file.alpha {
        return Err(field_err("alpha", "non-canonical rational"));
    }

    let mut vars: Vec<VarSpec> = Vec::new();
    for (i, v) in file.variables.iter().enumerate() {
        let path = format!("variables[{i}]");
        let kind = match v.kind.as_str() {
            "affine" => VarKind::Affine,
            "unit" => VarKind::Unit,
            other => {
                return Err(field_err(
                    format!("{path}.kind"),
                    format!("unknown variable kind {other:?}"),
                ))
            }
        };
        if vars.iter().any(|w| w.name() == v.name) {
            return Err(field_err(format!("{path}.name"), "duplicate variable"));
        }
        let base = match kind {
            VarKind::Affine => VarSpec::affine(v.name.clone()),
            VarKind::Unit => VarSpec::unit(v.name.clone()),
        };
        vars.push(base.with_partner(v.partner.clone()));
    }
    for (i, v) in vars.iter().enumerate() {
        if let Some(p) = v.partner() {
            let back = vars.iter().find(|w| w.name() == p);
            match back {
                Some(w) if w.partner() == Some(v.name()) && w.kind() == v.kind() => {}
                _ => {
                    return Err(field_err(
                        format!("variables[{i}].partner"),
                        format!("partner {p:?} must be declared with the same kind and point back"),
                    ))
                }
            }
        }
    }
    let lookup = |name: &str, path: String| {
        vars.iter()
            .find(|v| v.name() == name)
            .cloned()
            .ok_or_else(|| field_err(path, format!("undeclared variable {name:?}")))
    };
    let domain = file
        .domain
        .iter()
        .enumerate()
        .map(|(i, n)| lookup(n, format!("domain[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let params = file
        .params
        .iter()
        .enumerate()
        .map(|(i, n)| lookup(n, format!("params[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;

    let mut components = Vec::new();
    for (ci, terms) in file.components.iter().enumerate() {
        let mut parsed = Vec::new();
        for (ti, (exps, x, y)) in terms.iter().enumerate() {
            let path = format!("components[{ci}][{ti}]");
            if exps.len() != vars.len() {
                return Err(field_err(
                    format!("{path}[0]"),
                    format!("expected {} exponents, found {}", vars.len(), exps.len()),
                ));
            }
            for (e, v) in exps.iter().zip(&vars) {
                if *e < 0 && !v.is_unit() {
                    return Err(field_err(
                        format!("{path}[0]"),
                        format!("negative exponent on affine variable {:?}", v.name()),
                    ));
                }
            }
            let x = parse_rational(x)
                .map_err(|e| field_err(format!("{path}[1]"), non_canonical(e)))?;
            let y = parse_rational(y)
                .map_err(|e| field_err(format!("{path}[2]"), non_canonical(e)))?;
            let c = QuadElem::new(x, y, &disc);
            if c.is_zero() {
                return Err(field_err(path, "zero coefficient"));
            }
            parsed.push((exps.clone(), c));
        }
        let poly = SparsePoly::from_terms(&disc, vars.clone(), parsed)
            .map_err(|e| field_err(format!("components[{ci}]"), e.to_string()))?;
        components.push(poly);
    }
    PolyMap::new(&disc, domain, params, components)
        .map_err(|e| field_err("components", e.to_string()))
}

fn non_canonical(e: crate::arith::ParseRationalError) -> String {
    match e {
        crate::arith::ParseRationalError::NonCanonical { given, canonical } => {
            format!("non-canonical rational {given:?} (expected {canonical:?})")
        }
        other => other.to_string(),
    }
}

pub fn load_map_file(path: &Path) -> Result<PolyMap, MapFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| MapFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    map_from_json(&text)
}
