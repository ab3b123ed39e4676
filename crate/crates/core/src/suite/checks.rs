use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{timed, Suite, SuiteConfig, VerificationReport, PROPERTY_CASES, SAMPLES};
use crate::arith::{int, mat2_det, mat2_mul, render_rational, Discriminant, QuadElem, Rational};
use crate::check::CheckResult;
use crate::linalg::Matrix;
use crate::poly::PolyMap;
use crate::prop1::{self, Omega, Slot, StepKind};
use crate::sample;
use crate::schwarz::{self, ActionBundle, FiberOrder, LAMBDA};
use crate::twist;

fn add(report: &mut VerificationReport, suite: Suite, cfg: &SuiteConfig, f: impl FnOnce() -> CheckResult) {
    let (r, t) = timed(cfg.timing, f);
    report.push(suite, r, t);
}

fn cases(n: usize) -> String {
    format!("{n} seeded samples")
}

pub(super) fn arith(disc: &Discriminant, cfg: &SuiteConfig, report: &mut VerificationReport) {
    let s = Suite::Arith;
    let seed = cfg.seed;
    add(report, s, cfg, || {
        let mut rng = sample::rng(seed);
        let ok = (0..PROPERTY_CASES).all(|_| !sample::nonzero_quad(&mut rng, disc).norm().is_zero());
        CheckResult::new("anisotropy", "x^2 - alpha y^2 = 0 only at x = y = 0", ok && disc.is_anisotropic())
            .detail(format!("alpha = {disc} is not a square in Q"))
            .detail(cases(PROPERTY_CASES))
    });
    add(report, s, cfg, || {
        let mut rng = sample::rng(seed ^ 1);
        let ok = (0..PROPERTY_CASES).all(|_| {
            let (a, b) = (sample::quad(&mut rng, disc), sample::quad(&mut rng, disc));
            (&a * &b).norm() == a.norm() * b.norm()
        });
        CheckResult::new("norm multiplicativity", "N(zw) = N(z) N(w)", ok).detail(cases(PROPERTY_CASES))
    });
    add(report, s, cfg, || {
        let mut rng = sample::rng(seed ^ 2);
        let ok = (0..PROPERTY_CASES).all(|_| {
            let (a, b) = (sample::quad(&mut rng, disc), sample::quad(&mut rng, disc));
            a.conjugate().conjugate() == a
                && (&a + &b).conjugate() == &a.conjugate() + &b.conjugate()
                && (&a * &b).conjugate() == &a.conjugate() * &b.conjugate()
                && (a.conjugate() == a) == a.is_rational()
        });
        CheckResult::new("sigma ring involution", "sigma^2 = id, sigma(z + w) = sigma z + sigma w, sigma(zw) = sigma z sigma w, fixed field Q", ok)
            .detail(cases(PROPERTY_CASES))
    });
    add(report, s, cfg, || {
        let mut rng = sample::rng(seed ^ 3);
        let ok = (0..PROPERTY_CASES).all(|_| {
            let p = sample::torus_point(&mut rng, disc);
            let q = sample::torus_point(&mut rng, disc);
            let pq = p.mul(&q).expect("same field");
            p.value().norm().is_one()
                && mat2_det(&p.matrix()).is_one()
                && mat2_mul(&p.matrix(), &q.matrix()) == pq.matrix()
                && p.mul(&p.inverse()).expect("same field").value().is_one()
        });
        CheckResult::new(
            "torus matrix isomorphism",
            "x + t y -> [[x, alpha y], [y, x]] is multiplicative on S, det = N = 1",
            ok,
        )
        .detail(cases(PROPERTY_CASES))
    });
    add(report, s, cfg, || {
        let p = crate::arith::TorusPoint::from_slope(disc, &crate::arith::rat(1, 2));
        let v = p.value();
        let ok = v.norm().is_one()
            && *v.x() == (Rational::one() + disc.alpha() / int(4)) / (Rational::one() - disc.alpha() / int(4));
        CheckResult::new(
            "torus parametrization",
            "m -> ((1 + alpha m^2) / (1 - alpha m^2), 2m / (1 - alpha m^2)) lands on S",
            ok,
        )
        .detail(format!("slope 1/2 -> {v}"))
    });
}

fn eval_consistency(b: &ActionBundle, disc: &Discriminant, seed: u64) -> CheckResult {
    let mut rng = sample::rng(seed);
    let mut bad = Vec::new();
    for i in 0..SAMPLES {
        let v: Vec<QuadElem> = (0..4)
            .map(|_| QuadElem::from_rational(sample::rational(&mut rng), disc))
            .collect();
        let l0 = QuadElem::from_rational(sample::nonzero_rational(&mut rng), disc);
        let l1 = QuadElem::from_rational(sample::nonzero_rational(&mut rng), disc);
        let ev = |m: &PolyMap, p: &[QuadElem], l: Option<&QuadElem>| {
            let params: Vec<(&str, QuadElem)> = l.map(|l| (LAMBDA, l.clone())).into_iter().collect();
            m.eval_at(p, &params).expect("evaluation")
        };
        let tv = ev(&b.tau, &v, None);
        let checks = [
            ev(&b.tau, &tv, None) == v,
            ev(&b.tau, &ev(&b.mu, &v, Some(&l0)), None)
                == ev(&b.mu, &tv, Some(&l0.inverse().expect("nonzero"))),
            ev(&b.mu, &ev(&b.mu, &v, Some(&l1)), Some(&l0)) == ev(&b.mu, &v, Some(&(&l0 * &l1))),
            ev(&b.phi, &ev(&b.phi_inv, &v, None), None) == v,
        ];
        if checks.iter().any(|c| !c) {
            bad.push(i);
        }
    }
    CheckResult::new(
        "evaluation consistency",
        "identities hold pointwise at random rational points",
        bad.is_empty(),
    )
    .detail(format!("{SAMPLES} rational points and lambda values, {} mismatches", bad.len()))
}

pub(super) fn schwarz(disc: &Discriminant, cfg: &SuiteConfig, report: &mut VerificationReport) {
    let s = Suite::Schwarz;
    let bundle = match ActionBundle::new(disc) {
        Ok(b) => b,
        Err(e) => {
            report.push(s, CheckResult::new("phi automorphism", "det C(a, b) is a nonzero constant", false).detail(e.to_string()), None);
            return;
        }
    };
    let b = &bundle;
    add(report, s, cfg, || {
        let mut r = schwarz::check_involution(&b.tau);
        r.name = "tau involution".into();
        r.anchor = "tau o tau = id".into();
        let at = b
            .tau
            .substitute(&BTreeMap::from([
                ("a".to_string(), crate::poly::SparsePoly::from_int(1, disc)),
                ("b".to_string(), crate::poly::SparsePoly::from_int(1, disc)),
            ]))
            .map(|m| m.to_string())
            .unwrap_or_else(|e| e.to_string());
        r.detail(format!("tau(1, 1, x, y) = {}", at.split(" -> ").nth(1).unwrap_or(&at)))
    });
    add(report, s, cfg, || schwarz::check_group_law(&b.mu));
    add(report, s, cfg, || schwarz::check_equivariance(&b.mu, &b.tau));
    add(report, s, cfg, || match schwarz::fiber_matrix(&b.tau, FiberOrder::YX) {
        Ok(m) => CheckResult::new("det M = 1", "det [[1 + ab + (ab)^2, -b^3], [a^3, 1 - ab]] = 1", m.det == crate::poly::SparsePoly::one(disc))
            .detail(format!("det M(a, b) = {}", m.det)),
        Err(e) => CheckResult::new("det M = 1", "det M(a, b) = 1", false).detail(e.to_string()),
    });
    add(report, s, cfg, || {
        let name = "phi automorphism";
        let anchor = "det C(a, b) is a nonzero constant and phi o phi^-1 = id";
        match schwarz::fiber_matrix(&b.phi, FiberOrder::XY) {
            Ok(c) => {
                let det_ok = c.det.is_constant() && !c.det.is_zero();
                let inv_ok = b.phi.compose(&b.phi_inv).map(|m| m.is_identity()).unwrap_or(false)
                    && b.phi_inv.compose(&b.phi).map(|m| m.is_identity()).unwrap_or(false);
                CheckResult::new(name, anchor, det_ok && inv_ok)
                    .detail(format!("det C(a, b) = {}", c.det))
                    .detail(format!("phi o phi^-1 = id: {inv_ok}"))
            }
            Err(e) => CheckResult::new(name, anchor, false).detail(e.to_string()),
        }
    });
    add(report, s, cfg, || {
        let name = "conjugated involution";
        let anchor = "L = phi o tau o phi^-1 is linear and L o L = id";
        match schwarz::conjugate_involution(&b.phi, &b.tau) {
            Ok((l, rep)) => {
                let mut r = CheckResult::new(name, anchor, rep.linear && rep.involutive)
                    .detail(format!("L = {l}"));
                if let Some(m) = &rep.matrix {
                    r = r.detail(format!("matrix of L on (a, b, x, y): {m}"));
                }
                let shape = if rep.base_block_is_swap && rep.fiber_block_diagonal {
                    "base block swaps (a, b); fibre block is constant diagonal"
                } else {
                    "shape differs from a swap plus constant diagonal fibre block"
                };
                r.detail(shape)
            }
            Err(e) => CheckResult::new(name, anchor, false).detail(e.to_string()),
        }
    });
    add(report, s, cfg, || {
        let ok = [&b.mu, &b.tau, &b.phi, &b.phi_inv].iter().all(|m| m.has_rational_coefficients());
        CheckResult::new("defined over Q", "mu, tau, phi, phi^-1 have rational coefficients", ok)
    });
    add(report, s, cfg, || eval_consistency(b, disc, cfg.seed));
    report.push(
        s,
        CheckResult::assumption(
            "not linearizable over C",
            "the Schwarz action of O(2, C) on C^4 is not linearizable (external result)",
        )
        .detail("taken from the literature; not verified here"),
        None,
    );
}

pub(super) fn twist(disc: &Discriminant, cfg: &SuiteConfig, report: &mut VerificationReport) {
    let s = Suite::Twist;
    let bundle = match ActionBundle::new(disc) {
        Ok(b) => b,
        Err(e) => {
            report.push(s, CheckResult::new("twisted form", "E0(k) = {v : sigma v = tau v}", false).detail(e.to_string()), None);
            return;
        }
    };
    let (form, t) = timed(cfg.timing, || twist::build_e0(&bundle));
    let form = match form {
        Ok(f) => {
            let st = &f.structure;
            let ok = st.k_dim() == 4 && st.spans_over_k_field();
            let r = CheckResult::new("twisted form", "E0(k) = {v : sigma v = tau v} is a k-form of dimension 4", ok)
                .detail(format!("k-dimension {}", st.k_dim()))
                .detail(format!("k-basis in linearizing coordinates: {}", st.to_json()))
                .detail(if f.matches_reference_shape {
                    "matches span{t e1, e2, e3, e4}".to_string()
                } else {
                    "differs from span{t e1, e2, e3, e4}; the computed basis is normative".to_string()
                });
            report.push(s, r, t);
            f
        }
        Err(e) => {
            report.push(s, CheckResult::new("twisted form", "E0(k) is a k-form", false).detail(e.to_string()), t);
            return;
        }
    };
    add(report, s, cfg, || twist::check_stabilization(&bundle, &form.structure, SAMPLES, cfg.seed));
    let (fixed, t) = timed(cfg.timing, || twist::fixed_locus_i(&bundle.mu, 2));
    let zero_section = fixed.1.passed();
    report.push(s, fixed.1, t);
    add(report, s, cfg, || {
        let mut rng = sample::rng(cfg.seed ^ 5);
        let mut bad = 0;
        let n = 50;
        for i in 0..n {
            let m = 1 + i % 4;
            let l = twist::random_cocycle(&mut rng, disc, m);
            match twist::twisted_points(&l) {
                Ok(k) if k.k_dim() == m && k.spans_over_k_field() => {}
                _ => bad += 1,
            }
        }
        CheckResult::new("descent dimension", "a cocycle on K^m has a fixed k-form of dimension m", bad == 0)
            .detail(format!("{n} random cocycles C sigma(C)^-1, m <= 4, {bad} failures"))
    });
    add(report, s, cfg, || {
        let mut rng = sample::rng(cfg.seed ^ 6);
        let ok = (0..SAMPLES).all(|i| {
            let n = 2 * (1 + i % 3);
            let f = Matrix::from_rows(
                (0..n).map(|_| (0..n).map(|_| sample::rational(&mut rng)).collect()).collect(),
            );
            twist::decompose_semilinear(&f, disc).map(|sl| sl.k_matrix() == f).unwrap_or(false)
        });
        CheckResult::new(
            "semilinear decomposition",
            "a k-linear map on K^m is A v + B sigma(v), uniquely",
            ok,
        )
        .detail(cases(SAMPLES))
    });
    if zero_section {
        report.push(
            s,
            CheckResult::assumption(
                "bundle triviality criterion",
                "with I fixing only the zero section, linearizability is equivalent to triviality of E as an equivariant bundle (external result)",
            )
            .detail("taken from the literature; not verified here"),
            None,
        );
    }
}

pub(super) fn prop1(disc: &Discriminant, cfg: &SuiteConfig, report: &mut VerificationReport) {
    let s = Suite::Prop1;
    let bound = cfg.degree_bound;
    let (run, t) = timed(cfg.timing, || prop1::run(disc, bound));
    let run = match run {
        Ok(r) => r,
        Err(e) => {
            report.push(s, CheckResult::new("elimination", "phi' = 0, phi'' = omega, N(omega) = 1", false).detail(e.to_string()), t);
            return;
        }
    };
    add(report, s, cfg, || {
        let pattern = |slot: Slot, f: &prop1::FilterOutcome| {
            let shift = slot.survivor_shift();
            let expect: Vec<(u32, u32)> = (0..=bound)
                .flat_map(|k| (0..=bound).map(move |l| (k, l)))
                .filter(|(k, l)| *l == k + shift)
                .collect();
            f.survivors() == expect
        };
        let brute = (0..=10u32).all(|k| (0..=10u32).all(|l| (Slot::PhiPrime.weight(k, l) == 0) == (l == k + 3)));
        let ok = pattern(Slot::PhiPrime, &run.filters[0]) && pattern(Slot::PhiDoublePrime, &run.filters[1]) && brute;
        CheckResult::new("weight filter", "survivors l = k+3 for phi' and l = k for phi''", ok)
            .detail(format!("phi': {} of {} coefficients survive", run.filters[0].survivors().len(), (bound + 1).pow(2)))
            .detail(format!("phi'': {} of {} coefficients survive", run.filters[1].survivors().len(), (bound + 1).pow(2)))
    });
    add(report, s, cfg, || {
        CheckResult::new(
            "norm rewrite",
            "tau o tau = id reads z^3 R(z)^2 + Q(z) sigma(Q)(z) = 1 in z = x sigma(x)",
            run.system.closed_form_matches,
        )
        .detail(format!("{} + {} coefficient equations", run.system.eq1.len(), run.system.eq2.len()))
    });
    let mut elim = CheckResult::new(
        "elimination",
        "only phi' = 0, phi'' = omega with N(omega) = 1 survive",
        run.family.is_norm_one_family() && run.family.satisfies(&run.system).unwrap_or(false),
    )
    .detail(run.family.describe())
    .detail(format!(
        "{} square-zero and {} norm-zero steps",
        run.trace.count(StepKind::SquareZero),
        run.trace.count(StepKind::NormZero)
    ));
    elim = elim.detail(format!("degree bound {bound}"));
    report.push(s, elim, t);
    add(report, s, cfg, || {
        let ok = run.trace.replay(disc).map(|f| f == run.family).unwrap_or(false);
        CheckResult::new("trace replay", "replaying the recorded steps reproduces the solved form", ok)
            .detail(format!("{} steps", run.trace.len()))
    });
    let special = twist::stabilization_torus_points(disc)[0].value().clone();
    add(report, s, cfg, || {
        let omegas = [
            Omega::Formal,
            Omega::Value(QuadElem::one(disc)),
            Omega::Value(QuadElem::from_int(-1, disc)),
            Omega::Value(special.clone()),
        ];
        let mut r = CheckResult::new("family conditions", "tau(x, y) = (sigma x, omega sigma y) satisfies (i)-(v) when N(omega) = 1", true);
        for w in &omegas {
            match prop1::verify_family(&run.family, w, disc) {
                Ok(rep) => {
                    let failed = rep.failed();
                    if !failed.is_empty() {
                        r.status = crate::check::CheckStatus::Fail;
                    }
                    r = r.detail(format!(
                        "{}: {}",
                        rep.label,
                        if failed.is_empty() { "all hold".to_string() } else { failed.join(", ") }
                    ));
                }
                Err(e) => {
                    r.status = crate::check::CheckStatus::Fail;
                    r = r.detail(e.to_string());
                }
            }
        }
        r
    });
    add(report, s, cfg, || {
        let w = QuadElem::new(int(1), int(1), disc);
        let name = "non-unit omega rejected";
        let anchor = "N(omega) != 1 breaks tau o tau = id and nothing else";
        match prop1::verify_family(&run.family, &Omega::Value(w.clone()), disc) {
            Ok(rep) => CheckResult::new(name, anchor, rep.failed() == ["(iv) involution"])
                .detail(format!("omega = {w}, N = {}: failed {}", render_rational(&w.norm()), rep.failed().join(", "))),
            Err(e) => CheckResult::new(name, anchor, false).detail(e.to_string()),
        }
    });
    if cfg.trace {
        report.trace = Some(run.trace.clone());
    }
}

pub(super) fn user_map(map: &PolyMap, cfg: &SuiteConfig, report: &mut VerificationReport) {
    let s = Suite::Map;
    if map.domain_dim() == 2 {
        add(report, s, cfg, || prop1::check_conditions(map, "user map on K^2").to_check("map conditions"));
    } else {
        let mu = schwarz::build_mu(map.disc());
        add(report, s, cfg, || {
            let mut r = schwarz::check_involution(map);
            r.name = "map involution".into();
            r
        });
        add(report, s, cfg, || {
            let mut r = schwarz::check_equivariance(&mu, map);
            r.name = "map equivariance".into();
            r
        });
    }
}
