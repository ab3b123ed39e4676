use super::*;
use crate::arith::rat;

fn quiet(alpha: Rational) -> SuiteConfig {
    let mut c = SuiteConfig::new(alpha);
    c.timing = false;
    c
}

#[test]
fn square_alpha_is_a_config_error() {
    let e = quiet(rat(9, 4)).validate().unwrap_err();
    assert_eq!(e.to_string(), "alpha is a square: 9/4 = (3/2)^2");
    assert!(matches!(quiet(rat(4, 1)).validate(), Err(ConfigError::SquareAlpha(..))));
    assert!(matches!(quiet(rat(0, 1)).validate(), Err(ConfigError::SquareAlpha(..))));
}

#[test]
fn bound_is_capped() {
    let mut c = quiet(rat(2, 1));
    c.degree_bound = 13;
    assert_eq!(c.validate().unwrap_err(), ConfigError::Bound(13));
}

#[test]
fn arith_always_runs_first() {
    let mut c = quiet(rat(2, 1));
    c.suites = vec![Suite::Prop1, Suite::Schwarz];
    assert_eq!(c.ordered_suites(), [Suite::Arith, Suite::Schwarz, Suite::Prop1]);
    assert_eq!("twist".parse::<Suite>(), Ok(Suite::Twist));
    assert!("map".parse::<Suite>().is_err());
}

#[test]
fn empty_report_is_not_a_failure() {
    let r = VerificationReport::empty(&quiet(rat(2, 1)));
    assert_eq!(r.overall(), Overall::Empty);
    assert_eq!(r.exit_code(), 0);
    assert!(emit_text(&r).ends_with("OVERALL no checks run\n"));
}

#[test]
fn single_failure_fails_the_run() {
    let mut r = VerificationReport::empty(&quiet(rat(2, 1)));
    r.push(Suite::Arith, CheckResult::assumption("a", "b"), None);
    assert_eq!(r.exit_code(), 0);
    r.push(Suite::Arith, CheckResult::new("x", "y", false), None);
    assert_eq!(r.overall(), Overall::Fail);
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn arith_and_schwarz_pass() {
    let mut c = quiet(rat(-1, 1));
    c.suites = vec![Suite::Schwarz];
    let r = run_suite(&c).unwrap();
    let failed: Vec<_> = r.records.iter().filter(|x| x.status == CheckStatus::Fail).map(|x| &x.name).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(r.count(CheckStatus::Pass), 13);
    assert_eq!(r.count(CheckStatus::Assumption), 1);
    let text = emit_text(&r);
    assert!(text.contains("tau(1, 1, x, y) = (1, 1, 3*y - x, y)"), "{text}");
    assert!(text.contains("det C(a, b) = 8"), "{text}");
}

#[test]
fn full_run_at_two() {
    let mut c = quiet(rat(2, 1));
    c.degree_bound = 4;
    c.trace = true;
    let r = run_suite(&c).unwrap();
    let failed: Vec<_> = r.records.iter().filter(|x| x.status == CheckStatus::Fail).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert!(r.count(CheckStatus::Pass) >= 14);
    assert_eq!(r.count(CheckStatus::Assumption), 2);
    assert!(r.trace.is_some());
    let j = emit_json(&r);
    assert_eq!(j, emit_json(&run_suite(&c).unwrap()));
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    assert_eq!(v["overall"], "pass");
    assert_eq!(v["schema"], "kform-report/1");
    assert!(v["records"][0].get("wall_time_ms").is_none());
}

#[test]
fn map_over_other_field_is_rejected() {
    let d3 = Discriminant::new(rat(3, 1)).unwrap();
    let mut c = quiet(rat(2, 1));
    c.map = Some(crate::schwarz::build_tau(&d3));
    assert!(matches!(run_suite(&c), Err(ConfigError::Map(_))));
}

#[test]
fn user_map_checks() {
    let d = Discriminant::new(rat(2, 1)).unwrap();
    let mut c = quiet(rat(2, 1));
    c.suites = vec![];
    c.map = Some(crate::schwarz::build_tau(&d));
    let r = run_suite(&c).unwrap();
    assert_eq!(r.suites, [Suite::Arith, Suite::Map]);
    assert_eq!(r.overall(), Overall::Pass);
    c.map = Some(crate::schwarz::build_mu(&d).at_param(crate::schwarz::LAMBDA, &crate::arith::QuadElem::from_int(2, &d)).unwrap());
    let r = run_suite(&c).unwrap();
    assert_eq!(r.overall(), Overall::Fail);
}

