//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Every export takes plain strings and returns a JSON document; errors come
//! back as a JS string. The `*_json` functions are the same operations for
//! native callers and tests.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use kform::arith::{parse_rational_lenient, render_rational, Discriminant, QuadElem, Rational, TorusPoint};
use kform::prop1;
use kform::schwarz::{self, ActionBundle, LAMBDA};

/// Largest orbit the page will compute; heights grow linearly.
pub const MAX_STEPS: u32 = 64;

fn disc(alpha: &str) -> Result<Discriminant, String> {
    Discriminant::parse(alpha).map_err(|e| e.to_string())
}

fn rational(name: &str, s: &str) -> Result<Rational, String> {
    parse_rational_lenient(s).map_err(|e| format!("{name}: {e}"))
}

fn render_vec(v: &[QuadElem]) -> Value {
    v.iter().map(|q| Value::String(q.to_string())).collect()
}

/// Powers p^0..p^steps of the torus point with slope `slope`, each with its
/// norm and 2x2 matrix.
pub fn torus_orbit_json(alpha: &str, slope: &str, steps: u32) -> Result<Value, String> {
    let d = disc(alpha)?;
    let m = rational("slope", slope)?;
    if steps > MAX_STEPS {
        return Err(format!("steps must be at most {MAX_STEPS}"));
    }
    let p = TorusPoint::from_slope(&d, &m);
    let mut acc = TorusPoint::one(&d);
    let mut rows = Vec::new();
    for k in 0..=steps {
        let mat = acc.matrix();
        rows.push(json!({
            "k": k,
            "value": acc.value().to_string(),
            "norm": render_rational(&acc.value().norm()),
            "matrix": mat.iter().map(|r| r.iter().map(render_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }));
        acc = acc.mul(&p).map_err(|e| e.to_string())?;
    }
    Ok(json!({ "alpha": render_rational(d.alpha()), "generator": p.value().to_string(), "orbit": rows }))
}

/// Evaluates tau, mu, phi and L at a rational point and checks the
/// identities pointwise.
pub fn schwarz_probe_json(alpha: &str, point: [&str; 4], lambda: &str) -> Result<Value, String> {
    let d = disc(alpha)?;
    let names = ["a", "b", "x", "y"];
    let v = names
        .iter()
        .zip(point)
        .map(|(n, s)| rational(n, s).map(|q| QuadElem::from_rational(q, &d)))
        .collect::<Result<Vec<_>, _>>()?;
    let l = rational("lambda", lambda)?;
    if l == Rational::from_integer(0.into()) {
        return Err("lambda must be nonzero".into());
    }
    let l = QuadElem::from_rational(l, &d);
    let l_inv = l.inverse().map_err(|e| e.to_string())?;
    let b = ActionBundle::new(&d).map_err(|e| e.to_string())?;
    let (conj, _) = schwarz::conjugate_involution(&b.phi, &b.tau).map_err(|e| e.to_string())?;
    let ev = |m: &kform::poly::PolyMap, p: &[QuadElem], lam: Option<&QuadElem>| {
        let params: Vec<(&str, QuadElem)> = lam.map(|x| (LAMBDA, x.clone())).into_iter().collect();
        m.eval_at(p, &params).map_err(|e| e.to_string())
    };
    let tv = ev(&b.tau, &v, None)?;
    let ttv = ev(&b.tau, &tv, None)?;
    let mv = ev(&b.mu, &v, Some(&l))?;
    let lhs = ev(&b.tau, &mv, None)?;
    let rhs = ev(&b.mu, &tv, Some(&l_inv))?;
    let pv = ev(&b.phi, &v, None)?;
    let lpv = ev(&conj, &pv, None)?;
    let ptv = ev(&b.phi, &tv, None)?;
    Ok(json!({
        "point": render_vec(&v),
        "lambda": l.to_string(),
        "tau": render_vec(&tv),
        "tau_tau": render_vec(&ttv),
        "mu": render_vec(&mv),
        "tau_mu": render_vec(&lhs),
        "mu_inv_tau": render_vec(&rhs),
        "phi": render_vec(&pv),
        "l_phi": render_vec(&lpv),
        "phi_tau": render_vec(&ptv),
        "checks": {
            "involution": ttv == v,
            "equivariance": lhs == rhs,
            "linearized": lpv == ptv,
        },
        "linear_map": conj.to_string(),
    }))
}

/// Runs the bounded-degree classification and returns the trace.
pub fn prop1_trace_json(alpha: &str, bound: u32) -> Result<Value, String> {
    let d = disc(alpha)?;
    let run = prop1::run(&d, bound).map_err(|e| e.to_string())?;
    let replay_ok = run.trace.replay(&d).map(|f| f == run.family).unwrap_or(false);
    Ok(json!({
        "alpha": render_rational(d.alpha()),
        "bound": bound,
        "family": run.family.describe(),
        "norm_one": run.family.is_norm_one_family(),
        "replay": replay_ok,
        "trace": serde_json::to_value(&run.trace).map_err(|e| e.to_string())?,
    }))
}

fn out(v: Result<Value, String>) -> Result<String, String> {
    v.map(|v| v.to_string())
}

#[wasm_bindgen]
pub fn torus_orbit(alpha: &str, slope: &str, steps: u32) -> Result<String, String> {
    out(torus_orbit_json(alpha, slope, steps))
}

#[wasm_bindgen]
pub fn schwarz_probe(alpha: &str, a: &str, b: &str, x: &str, y: &str, lambda: &str) -> Result<String, String> {
    out(schwarz_probe_json(alpha, [a, b, x, y], lambda))
}

#[wasm_bindgen]
pub fn prop1_trace(alpha: &str, bound: u32) -> Result<String, String> {
    out(prop1_trace_json(alpha, bound))
}
