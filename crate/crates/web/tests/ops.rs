use kform_web::{prop1_trace_json, schwarz_probe_json, torus_orbit_json, MAX_STEPS};

#[test]
fn orbit_stays_on_the_torus() {
    let r = torus_orbit_json("2", "1/2", 3).unwrap();
    assert_eq!(r["generator"], "3 + 2*t");
    let orbit = r["orbit"].as_array().unwrap();
    assert_eq!(orbit.len(), 4);
    assert_eq!(orbit[0]["value"], "1");
    assert_eq!(orbit[2]["value"], "17 + 12*t");
    assert!(orbit.iter().all(|p| p["norm"] == "1"));
    assert_eq!(orbit[1]["matrix"], serde_json::json!([["3", "4"], ["2", "3"]]));
}

#[test]
fn orbit_rejects_bad_input() {
    assert!(torus_orbit_json("9/4", "1", 2).unwrap_err().contains("square"));
    assert!(torus_orbit_json("2", "one", 2).unwrap_err().starts_with("slope"));
    assert!(torus_orbit_json("2", "1", MAX_STEPS + 1).is_err());
}

#[test]
fn probe_spot_value() {
    let r = schwarz_probe_json("2", ["1", "1", "0", "0"], "2").unwrap();
    assert_eq!(r["tau"], serde_json::json!(["1", "1", "0", "0"]));
    let r = schwarz_probe_json("-1", ["1", "1", "5", "2"], "3").unwrap();
    assert_eq!(r["tau"], serde_json::json!(["1", "1", "1", "2"]));
    for c in ["involution", "equivariance", "linearized"] {
        assert_eq!(r["checks"][c], true, "{c}");
    }
    assert_eq!(r["linear_map"], "(a, b, x, y) -> (b, a, x, -y)");
}

#[test]
fn probe_rejects_zero_lambda() {
    assert!(schwarz_probe_json("2", ["1", "2", "3", "4"], "0").is_err());
}

#[test]
fn trace_concludes_with_norm_one_family() {
    let r = prop1_trace_json("3", 3).unwrap();
    assert_eq!(r["norm_one"], true);
    assert_eq!(r["replay"], true);
    let steps = r["trace"]["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["kind"], "conclusion");
    assert!(prop1_trace_json("2", 13).is_err());
}
