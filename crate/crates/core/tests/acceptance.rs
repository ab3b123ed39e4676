//! End-to-end acceptance criteria. Runs without the libtest harness, one
//! criterion after another, so the lines always print and the wall-clock
//! bounds are measured without other tests competing for cores.

use std::process::Command;
use std::time::{Duration, Instant};

use kform::arith::{int, rat, Discriminant, QuadElem, Rational};
use kform::prop1::{self, Omega, Slot};
use kform::schwarz::{self, ActionBundle, FiberOrder};
use kform::suite::{run_suite, Suite, SuiteConfig};
use kform::twist::{self, LocusVerdict};

struct Outcome {
    id: u32,
    name: &'static str,
    ok: bool,
    note: String,
}

fn disc(p: i64, q: i64) -> Discriminant {
    Discriminant::new(rat(p, q)).unwrap()
}

fn within(elapsed: Duration, limit_ms: u128) -> Result<(), String> {
    if elapsed.as_millis() < limit_ms {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit_ms} ms"))
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn involution() -> Result<String, String> {
    let start = Instant::now();
    let d = disc(2, 1);
    let tau = schwarz::build_tau(&d);
    ensure(tau.compose(&tau).unwrap().is_identity(), "tau o tau is not the identity")?;
    let one = kform::poly::SparsePoly::from_int(1, &d);
    let spot = tau
        .substitute(&[("a".to_string(), one.clone()), ("b".to_string(), one)].into_iter().collect())
        .unwrap();
    let x = spot.component(2).to_string();
    ensure(x == "3*y - x", format!("tau(1, 1, x, y)_x = {x}"))?;
    ensure(spot.component(3).to_string() == "y", "tau(1, 1, x, y)_y != y")?;
    within(start.elapsed(), 1000)?;
    Ok(format!("{:?}", start.elapsed()))
}

fn group_law() -> Result<String, String> {
    let start = Instant::now();
    let d = disc(2, 1);
    let b = ActionBundle::new(&d).unwrap();
    ensure(schwarz::check_group_law(&b.mu).passed(), "group law")?;
    ensure(
        b.mu.at_param(schwarz::LAMBDA, &QuadElem::one(&d)).unwrap().is_identity(),
        "mu(1, .) != id",
    )?;
    ensure(schwarz::check_equivariance(&b.mu, &b.tau).passed(), "equivariance")?;
    within(start.elapsed(), 1000)?;
    Ok(format!("{:?}", start.elapsed()))
}

fn det_m() -> Result<String, String> {
    let d = disc(2, 1);
    let m = schwarz::fiber_matrix(&schwarz::build_tau(&d), FiberOrder::YX).map_err(|e| e.to_string())?;
    ensure(m.det == kform::poly::SparsePoly::one(&d), format!("det M = {}", m.det))?;
    Ok("det M(a, b) = 1".into())
}

fn phi_bundle() -> Result<String, String> {
    let d = disc(2, 1);
    let b = ActionBundle::new(&d).map_err(|e| e.to_string())?;
    let c = schwarz::fiber_matrix(&b.phi, FiberOrder::XY).map_err(|e| e.to_string())?;
    ensure(c.det.is_constant() && !c.det.is_zero(), format!("det C = {}", c.det))?;
    ensure(b.phi.compose(&b.phi_inv).unwrap().is_identity(), "phi o phi^-1")?;
    ensure(b.phi_inv.compose(&b.phi).unwrap().is_identity(), "phi^-1 o phi")?;
    let (_, rep) = schwarz::conjugate_involution(&b.phi, &b.tau).map_err(|e| e.to_string())?;
    ensure(rep.linear && rep.involutive, "L not a linear involution")?;
    let m = rep.matrix.ok_or("no matrix")?;
    Ok(format!(
        "det C = {}, L = {m}, swap+diagonal shape: {}",
        c.det,
        rep.base_block_is_swap && rep.fiber_block_diagonal
    ))
}

fn twisted_form() -> Result<String, String> {
    let start = Instant::now();
    for (p, expected) in [(2, "3 + 2*t"), (3, "2 + 1*t"), (-1, "3/5 + 4/5*t")] {
        let d = disc(p, 1);
        let b = ActionBundle::new(&d).map_err(|e| e.to_string())?;
        let f = twist::build_e0(&b).map_err(|e| e.to_string())?;
        ensure(f.structure.k_dim() == 4, format!("alpha {p}: k-dim {}", f.structure.k_dim()))?;
        ensure(f.structure.spans_over_k_field(), format!("alpha {p}: K-span is not K^4"))?;
        let chain = twist::stabilization_chain(&b.mu, &b.tau).map_err(|e| e.to_string())?;
        ensure(chain.len() == 4 && chain.iter().all(|s| s.holds), format!("alpha {p}: chain"))?;
        let l0 = twist::stabilization_torus_points(&d)[0].value().to_string();
        ensure(l0 == expected, format!("alpha {p}: lambda0 = {l0}"))?;
        let s = twist::sample_stabilization(&b, &f.structure, 100, 424242).map_err(|e| e.to_string())?;
        ensure(s.failures == 0, format!("alpha {p}: {:?}", s.first_failure))?;
    }
    within(start.elapsed(), 5000)?;
    Ok(format!("alpha 2, 3, -1 in {:?}", start.elapsed()))
}

fn fixed_locus() -> Result<String, String> {
    let d = disc(2, 1);
    let (locus, r) = twist::fixed_locus_i(&schwarz::build_mu(&d), 2);
    ensure(locus.verdict == LocusVerdict::ZeroSection && r.passed(), format!("{:?}", locus.verdict))?;
    Ok("fixed locus is {x = y = 0}".into())
}

fn prop1_bounds() -> Result<String, String> {
    let d = disc(2, 1);
    let mut d10 = Duration::ZERO;
    for bound in 0..=10 {
        let start = Instant::now();
        let run = prop1::run(&d, bound).map_err(|e| format!("D = {bound}: {e}"))?;
        let replayed = run.trace.replay(&d).map_err(|e| format!("D = {bound}: {e}"))?;
        if bound == 10 {
            d10 = start.elapsed();
        }
        ensure(run.family.is_norm_one_family(), format!("D = {bound}: {}", run.family.describe()))?;
        ensure(run.family.satisfies(&run.system).unwrap_or(false), format!("D = {bound}: family"))?;
        ensure(replayed == run.family, format!("D = {bound}: replay differs"))?;
        if bound == 10 {
            for (slot, f) in [Slot::PhiPrime, Slot::PhiDoublePrime].into_iter().zip(&run.filters) {
                let shift = slot.survivor_shift();
                let expect: Vec<(u32, u32)> = (0..=10u32)
                    .flat_map(|k| (0..=10u32).map(move |l| (k, l)))
                    .filter(|(k, l)| *l == k + shift)
                    .collect();
                ensure(f.survivors() == expect, format!("{} survivors", slot.label()))?;
            }
            for w in [QuadElem::one(&d), QuadElem::from_int(-1, &d), QuadElem::new(int(3), int(2), &d)] {
                let rep = prop1::verify_family(&run.family, &Omega::Value(w.clone()), &d).map_err(|e| e.to_string())?;
                ensure(rep.all_pass(), format!("omega = {w}: {:?}", rep.failed()))?;
            }
            let bad = QuadElem::new(int(1), int(1), &d);
            ensure(bad.norm() == Rational::from_integer((-1).into()), "N(1+t)")?;
            let rep = prop1::verify_family(&run.family, &Omega::Value(bad), &d).map_err(|e| e.to_string())?;
            ensure(rep.failed() == ["(iv) involution"], format!("omega = 1+t: {:?}", rep.failed()))?;
        }
    }
    within(d10, 5000)?;
    Ok(format!("D = 0..10, D = 10 in {d10:?}"))
}

fn arith_properties() -> Result<String, String> {
    let start = Instant::now();
    let mut cfg = SuiteConfig::new(rat(2, 1));
    cfg.suites = vec![Suite::Arith];
    let r = run_suite(&cfg).map_err(|e| e.to_string())?;
    let names: Vec<&str> = r.records.iter().map(|r| r.name.as_str()).collect();
    for n in ["anisotropy", "norm multiplicativity", "sigma ring involution", "torus matrix isomorphism"] {
        ensure(names.contains(&n), format!("missing {n}"))?;
    }
    ensure(r.records.iter().all(|x| x.details.iter().any(|d| d.contains("1000")) || x.name == "torus parametrization"), "case count")?;
    ensure(r.overall() == kform::suite::Overall::Pass, "arith suite failed")?;
    within(start.elapsed(), 5000)?;
    Ok(format!("4 x 1000 cases in {:?}", start.elapsed()))
}

fn cli() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_kform");
    let out = Command::new(bin).args(["verify", "--alpha", "2"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), format!("exit {:?}", out.status.code()))?;
    let pass = text.lines().filter(|l| l.starts_with("CHECK") && l.contains("] PASS")).count();
    let assume = text.lines().filter(|l| l.starts_with("CHECK") && l.contains("] ASSUMPTION")).count();
    ensure(pass >= 14 && assume == 2, format!("{pass} pass, {assume} assumption"))?;
    let sq = Command::new(bin).args(["verify", "--alpha", "9/4"]).output().unwrap();
    ensure(sq.status.code() == Some(2), format!("9/4 exit {:?}", sq.status.code()))?;
    ensure(String::from_utf8_lossy(&sq.stderr).contains("alpha is a square"), "9/4 message")?;
    let json = || {
        Command::new(bin)
            .args(["verify", "--alpha", "2", "--format", "json", "--no-timing"])
            .output()
            .unwrap()
            .stdout
    };
    ensure(json() == json(), "JSON differs between runs")?;
    Ok(format!("{pass} pass, {assume} assumption"))
}

type Criterion = (u32, &'static str, fn() -> Result<String, String>);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "involution", involution),
        (2, "group law and equivariance", group_law),
        (3, "det M = 1", det_m),
        (4, "phi bundle automorphism, L linear involution", phi_bundle),
        (5, "twisted form and stabilization", twisted_form),
        (6, "fixed locus of I", fixed_locus),
        (7, "classification at D = 0..10", prop1_bounds),
        (8, "arithmetic kernel properties", arith_properties),
        (9, "CLI", cli),
    ];
    let mut outcomes = Vec::new();
    for (id, name, f) in criteria {
        let (ok, note) = match f() {
            Ok(n) => (true, n),
            Err(e) => (false, e),
        };
        println!("criterion {id} {name}: {} ({note})", if ok { "PASS" } else { "FAIL" });
        outcomes.push(Outcome { id, name, ok, note });
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.ok)
        .map(|o| format!("{} {}: {}", o.id, o.name, o.note))
        .collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:#?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of {} criteria pass", outcomes.len(), outcomes.len());
}
