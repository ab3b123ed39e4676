use super::*;
use crate::arith::{int, rat};

fn d2() -> Discriminant {
    Discriminant::from_int(2).unwrap()
}

fn var(disc: &Discriminant, name: &str) -> SparsePoly {
    SparsePoly::var(disc, &coeff_var(&name[..1], name[1..].parse().unwrap()))
}

fn bar(disc: &Discriminant, name: &str) -> SparsePoly {
    let v = coeff_var(&name[..1], name[1..].parse().unwrap());
    SparsePoly::var(disc, &v.partner_spec().unwrap())
}

#[test]
fn ansatz_sizes() {
    let disc = d2();
    let (p, q) = ansatz(&disc, 0).unwrap();
    assert_eq!((p.num_unknowns(), q.num_unknowns()), (1, 1));
    assert_eq!(p.poly.to_string(), "a0_0");
    let (p, q) = ansatz(&disc, 3).unwrap();
    assert_eq!((p.num_unknowns(), q.num_unknowns()), (16, 16));
    assert_eq!(ansatz(&disc, 13).unwrap_err(), Prop1Error::BoundTooLarge(13));
}

#[test]
fn filter_survivors() {
    let disc = d2();
    let (p, _) = ansatz(&disc, 5).unwrap();
    let f = apply_equivariance_filter(&p).unwrap();
    assert_eq!(f.survivors(), vec![(0, 3), (1, 4), (2, 5)]);
    assert_eq!(f.killed.len(), 33);

    let (p, q) = ansatz(&disc, 2).unwrap();
    assert_eq!(apply_equivariance_filter(&q).unwrap().survivors(), vec![(0, 0), (1, 1), (2, 2)]);
    let f = apply_equivariance_filter(&p).unwrap();
    assert!(f.survivors().is_empty());
    assert!(f.filtered.poly.is_zero());
}

#[test]
fn filter_pattern_up_to_ten() {
    let disc = d2();
    let (x, xb) = x_pair();
    for k in 0..=10u32 {
        for l in 0..=10u32 {
            let m = SparsePoly::monomial(
                QuadElem::one(&disc),
                &[
                    (x.clone(), k as i32),
                    (xb.clone(), l as i32),
                    (schwarz::lambda(), Slot::PhiPrime.weight(k, l) as i32),
                ],
            );
            let lambda_free = m.degree_range_in(&[schwarz::LAMBDA]) == Some((0, 0));
            assert_eq!(lambda_free, l == k + 3, "({k},{l})");
        }
    }
    let (p, q) = ansatz(&disc, 10).unwrap();
    let fp = apply_equivariance_filter(&p).unwrap();
    let fq = apply_equivariance_filter(&q).unwrap();
    assert!(fp.survivors().iter().all(|(k, l)| *l == k + 3));
    assert_eq!(fp.survivors().len(), 8);
    assert!(fq.survivors().iter().all(|(k, l)| k == l));
    assert_eq!(fq.survivors().len(), 11);
}

#[test]
fn relation_has_the_torus_weights() {
    let disc = d2();
    let (p, _) = ansatz(&disc, 1).unwrap();
    let f = apply_equivariance_filter(&p).unwrap();
    // l^3 phi'(l^2 x) - l^-3 phi'(x): a_{k,l} sits at l^(3+2k-2l) and l^-3
    for (key, coeff) in f.relation.collect_in(&["x", "xb", schwarz::LAMBDA]) {
        let (k, l, w) = (key[0], key[1], key[2]);
        assert!(w == -3 || w == 3 + 2 * k - 2 * l);
        assert_eq!(coeff.num_terms(), 1);
    }
}

#[test]
fn normal_form_degrees() {
    let disc = d2();
    let nf_at = |bound| {
        let (p, q) = ansatz(&disc, bound).unwrap();
        let fp = apply_equivariance_filter(&p).unwrap();
        let fq = apply_equivariance_filter(&q).unwrap();
        normal_form_norm(&fp.filtered, &fq.filtered).unwrap()
    };
    let nf = nf_at(5);
    assert_eq!((nf.r.len(), nf.q.len()), (3, 6));
    assert!(nf.renaming.contains(&("a2_5".to_string(), "r2".to_string())));
    assert!(nf.renaming.contains(&("b4_4".to_string(), "q4".to_string())));
    let nf = nf_at(2);
    assert!(nf.r.is_empty());
    assert_eq!(nf.q.len(), 3);
    assert!(nf.r_poly().is_zero());
    let nf = nf_at(3);
    assert_eq!(nf.r.len(), 1);
    assert_eq!(nf.r_poly().to_string(), "r0");
}

#[test]
fn unfiltered_input_is_rejected() {
    let disc = d2();
    let (p, q) = ansatz(&disc, 1).unwrap();
    match normal_form_norm(&p, &q) {
        Err(Prop1Error::NotFiltered { offending }) => assert!(offending.contains(&"a0_0".to_string())),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn constraints_degenerate_case() {
    let disc = d2();
    let nf = NormalForm::with_degrees(&disc, None, 0);
    let cs = extract_involution_constraints(&nf).unwrap();
    assert_eq!(cs.eq1.len(), 1);
    assert_eq!(cs.eq1[&0], &(&var(&disc, "q0") * &bar(&disc, "q0")) - &SparsePoly::one(&disc));
    assert!(cs.eq2.is_empty());
    assert!(cs.closed_form_matches);
}

#[test]
fn constraints_r_constant_q_linear() {
    let disc = d2();
    let nf = NormalForm::with_degrees(&disc, Some(0), 1);
    let cs = extract_involution_constraints(&nf).unwrap();
    let (q0, q1, q0b, q1b) = (var(&disc, "q0"), var(&disc, "q1"), bar(&disc, "q0"), bar(&disc, "q1"));
    assert_eq!(cs.eq1.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    assert_eq!(cs.eq1[&3], var(&disc, "r0").pow(2));
    assert_eq!(cs.eq1[&2], &q1 * &q1b);
    assert_eq!(cs.eq1[&1], &(&q0 * &q1b) + &(&q1 * &q0b));
    assert_eq!(cs.eq1[&0], &(&q0 * &q0b) - &SparsePoly::one(&disc));
    assert!(cs.closed_form_matches);
    // R Q + Q sigma(R) = r0 q0 + q0 r0b + (r0 q1 + q1 r0b) z
    let (r0, r0b) = (var(&disc, "r0"), bar(&disc, "r0"));
    assert_eq!(cs.eq2[&0], &(&r0 * &q0) + &(&q0 * &r0b));
    assert_eq!(cs.eq2[&1], &(&r0 * &q1) + &(&q1 * &r0b));
}

#[test]
fn constraints_r_linear_top() {
    let disc = d2();
    let nf = NormalForm::with_degrees(&disc, Some(1), 1);
    let cs = extract_involution_constraints(&nf).unwrap();
    assert_eq!(cs.eq1.keys().next_back(), Some(&5));
    assert_eq!(cs.eq1[&5], var(&disc, "r1").pow(2));
}

#[test]
fn elimination_at_five() {
    let disc = d2();
    let run5 = run(&disc, 5).unwrap();
    let fam = &run5.family;
    assert!(fam.is_norm_one_family());
    assert_eq!(fam.omega.name(), "q0");
    let mut elim = fam.eliminated.clone();
    elim.sort();
    assert_eq!(elim, ["q1", "q2", "q3", "q4", "q5", "r0", "r1", "r2"]);
    assert_eq!(run5.trace.count(StepKind::SquareZero), 3);
    assert_eq!(run5.trace.count(StepKind::NormZero), 5);
    assert_eq!(run5.trace.count(StepKind::Conclusion), 1);
    assert!(fam.satisfies(&run5.system).unwrap());
    // top degrees 10, 8, 7, 6, 5, 4, 3, 2
    let order: Vec<&str> = run5
        .trace
        .steps
        .iter()
        .filter(|s| matches!(s.kind, StepKind::SquareZero | StepKind::NormZero))
        .map(|s| s.unknown.as_deref().unwrap())
        .collect();
    assert_eq!(order, ["q5", "q4", "r2", "q3", "r1", "q2", "r0", "q1"]);
}

#[test]
fn elimination_small_bounds() {
    let disc = d2();
    let r2 = run(&disc, 2).unwrap();
    assert!(r2.family.is_norm_one_family());
    assert!(r2.trace.len() < run(&disc, 5).unwrap().trace.len());
    assert_eq!(r2.trace.count(StepKind::SquareZero), 0);

    let r0 = run(&disc, 0).unwrap();
    assert_eq!(r0.filters[0].killed, vec![(0, 0)]);
    assert!(r0.family.is_norm_one_family());
    assert_eq!(r0.family.residual.to_string(), "q0*q0b - 1");
    assert_eq!(r0.trace.count(StepKind::NormZero), 0);
}

#[test]
fn family_for_every_bound_and_replay() {
    for a in [2, -1, 3] {
        let disc = Discriminant::from_int(a).unwrap();
        for bound in 0..=8 {
            let r = run(&disc, bound).unwrap();
            assert!(r.family.is_norm_one_family(), "bound {bound}");
            assert!(r.system.closed_form_matches);
            assert_eq!(r.trace.replay(&disc).unwrap(), r.family);
        }
    }
}

#[test]
fn parity_guard_never_fires() {
    let disc = d2();
    for bound in 0..=MAX_BOUND {
        // top degrees 2e+3 and 2d never coincide
        let e_top = bound.checked_sub(3).map(|e| 2 * e + 3);
        assert_ne!(e_top, Some(2 * bound));
        assert!(run(&disc, bound).is_ok(), "bound {bound}");
    }
}

#[test]
fn mixed_top_equation_trips_the_guard() {
    let disc = d2();
    let nf = NormalForm::with_degrees(&disc, Some(0), 1);
    let mut cs = extract_involution_constraints(&nf).unwrap();
    let mixed = &var(&disc, "r0").pow(2) + &(&var(&disc, "q1") * &bar(&disc, "q1"));
    cs.eq1.insert(3, mixed);
    assert!(matches!(eliminate(&cs), Err(Prop1Error::ParityViolation { degree: 3, .. })));
}

#[test]
fn tampered_trace_is_rejected() {
    let disc = d2();
    let r = run(&disc, 4).unwrap();
    let mut t = r.trace.clone();
    let i = t.steps.iter().position(|s| s.kind == StepKind::NormZero).unwrap();
    t.steps[i].kind = StepKind::SquareZero;
    assert!(matches!(t.replay(&disc), Err(Prop1Error::Replay { .. })));

    let mut t = r.trace.clone();
    t.steps.pop();
    assert!(matches!(t.replay(&disc), Err(Prop1Error::Replay { .. })));

    let mut t = r.trace.clone();
    let i = t.steps.iter().position(|s| s.kind == StepKind::Substitution).unwrap();
    t.steps.remove(i);
    assert!(t.replay(&disc).is_err());
}

#[test]
fn norm_zero_rule_needs_anisotropy() {
    let split = Discriminant::new_unchecked(int(1));
    assert!(!split.is_anisotropic());
    // c = 1 - t is nonzero but c sigma(c) = 1 - t^2 = 0
    let c = QuadElem::new(int(1), int(-1), &split);
    assert!(!c.is_zero());
    assert!((&c * &c.conjugate()).is_zero());
    assert_eq!(run(&split, 0).unwrap().family.residual.to_string(), "q0*q0b - 1");
    assert!(matches!(run(&split, 1), Err(Prop1Error::NormZeroUnsound(a)) if a == "1"));
}

#[test]
fn family_conditions() {
    let disc = d2();
    let fam = run(&disc, 3).unwrap().family;
    let formal = verify_family(&fam, &Omega::Formal, &disc).unwrap();
    assert!(formal.all_pass(), "{formal:?}");
    for w in [QuadElem::from_int(1, &disc), QuadElem::from_int(-1, &disc), QuadElem::new(int(3), int(2), &disc)] {
        let rep = verify_family(&fam, &Omega::Value(w), &disc).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }
    let bad = verify_family(&fam, &Omega::Value(QuadElem::new(int(1), int(1), &disc)), &disc).unwrap();
    assert_eq!(bad.failed(), vec!["(iv) involution"]);
    assert!(bad.to_check("family").failed());

    let disc = Discriminant::from_int(-1).unwrap();
    let fam = run(&disc, 1).unwrap().family;
    let w = QuadElem::new(rat(3, 5), rat(4, 5), &disc);
    assert!(verify_family(&fam, &Omega::Value(w), &disc).unwrap().all_pass());
}

#[test]
fn conditions_on_other_maps() {
    let disc = d2();
    let (x, xb) = x_pair();
    let (y, _) = y_pair();
    // identity: first component is x, not sigma x
    let id = PolyMap::identity(&disc, k2_coords());
    let rep = check_conditions(&id, "identity");
    assert!(!rep.first_component && rep.involution);
    // (xb, x^2 y): not equivariant and not an involution
    let f = PolyMap::new(
        &disc,
        k2_coords(),
        vec![],
        vec![SparsePoly::var(&disc, &xb), &SparsePoly::var(&disc, &x).pow(2) * &SparsePoly::var(&disc, &y)],
    )
    .unwrap();
    let rep = check_conditions(&f, "x^2 y");
    assert!(rep.first_component && rep.k_linear && rep.weil_restriction);
    assert!(!rep.equivariance && !rep.involution);
}

#[test]
fn trace_serializes() {
    let disc = d2();
    let r = run(&disc, 3).unwrap();
    let v = serde_json::to_value(&r.trace).unwrap();
    assert_eq!(v["bound"], 3);
    assert_eq!(v["steps"][0]["kind"], "weight-filter");
    assert_eq!(v["steps"][0]["after"], "survivors (0,3)");
    let last = v["steps"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["kind"], "conclusion");
}
