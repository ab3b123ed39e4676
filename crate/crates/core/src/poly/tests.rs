use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::arith::{int, rat, Discriminant, QuadElem, TorusPoint};

fn d2() -> Discriminant {
    Discriminant::from_int(2).unwrap()
}

fn v(d: &Discriminant, s: &VarSpec) -> SparsePoly {
    SparsePoly::var(d, s)
}

fn c(d: &Discriminant, n: i64) -> SparsePoly {
    SparsePoly::from_int(n, d)
}

#[test]
fn multiplication_examples() {
    let d = d2();
    let (x, xb) = VarSpec::pair("x", "xb");
    let (px, pxb) = (v(&d, &x), v(&d, &xb));
    assert_eq!(
        &(&px + &pxb) * &(&px - &pxb),
        &px.pow(2) - &pxb.pow(2)
    );
    assert!((&px * &SparsePoly::zero(&d)).is_zero());
    let tx = px.scale(&QuadElem::t(&d));
    assert_eq!(&tx * &tx, &c(&d, 2) * &px.pow(2));
}

#[test]
fn composition_examples() {
    let d = d2();
    let (x, xb) = VarSpec::pair("x", "xb");
    let l = VarSpec::unit("l");
    let y = VarSpec::affine("y");
    let (px, pxb, pl, py) = (v(&d, &x), v(&d, &xb), v(&d, &l), v(&d, &y));

    let sub = BTreeMap::from([("x".to_string(), &pl.pow(2) * &px)]);
    assert_eq!(px.pow(2).compose(&sub).unwrap(), &pl.pow(4) * &px.pow(2));

    let linv = pl.monomial_inverse().unwrap();
    let sub = BTreeMap::from([
        ("x".to_string(), &pl.pow(2) * &px),
        ("xb".to_string(), &linv.pow(2) * &pxb),
    ]);
    assert_eq!((&px * &pxb).compose(&sub).unwrap(), &px * &pxb);

    let sub = BTreeMap::from([("y".to_string(), &(&c(&d, 3) * &py) - &px)]);
    let expect = &(&(&c(&d, 9) * &py.pow(2)) - &(&c(&d, 6) * &(&px * &py))) + &px.pow(2);
    assert_eq!(py.pow(2).compose(&sub).unwrap(), expect);

    // identity substitution
    let p = &(&px * &linv) + &py.pow(3);
    let id = BTreeMap::from([("x".to_string(), px.clone()), ("l".to_string(), pl.clone())]);
    assert_eq!(p.compose(&id).unwrap(), p);
}

#[test]
fn composition_errors() {
    let d = d2();
    let l = VarSpec::unit("l");
    let a = VarSpec::affine("a");
    let pl = v(&d, &l);
    let p = pl.monomial_inverse().unwrap();
    let sub = BTreeMap::from([("l".to_string(), v(&d, &a))]);
    assert_eq!(
        p.compose(&sub).unwrap_err(),
        PolyError::NegativeAffineExponent("a".into())
    );
    let sub = BTreeMap::from([("l".to_string(), &pl + &c(&d, 1))]);
    assert!(matches!(
        p.compose(&sub).unwrap_err(),
        PolyError::NotInvertible { var, .. } if var == "l"
    ));
    // constants are invertible
    let sub = BTreeMap::from([("l".to_string(), c(&d, -1))]);
    assert_eq!(p.compose(&sub).unwrap(), c(&d, -1));
}

#[test]
fn sigma_examples() {
    let d = d2();
    let (x, xb) = VarSpec::pair("x", "xb");
    let l = VarSpec::unit("l");
    let k = QuadElem::new(int(3), int(2), &d);
    let cx = v(&d, &x).scale(&k);
    assert_eq!(cx.apply_sigma(), v(&d, &xb).scale(&k.conjugate()));
    let l3 = v(&d, &l).pow(3);
    assert_eq!(l3.apply_sigma(), l3.monomial_inverse().unwrap());
    let z = &v(&d, &x) * &v(&d, &xb);
    assert_eq!(z.apply_sigma(), z);
    // unpartnered affine variables are fixed
    let a = v(&d, &VarSpec::affine("a"));
    assert_eq!(a.apply_sigma(), a);
}

#[test]
fn weight_examples() {
    let d = d2();
    let l = VarSpec::unit("l");
    let (x, y) = (VarSpec::affine("x"), VarSpec::affine("y"));
    let p = &(&v(&d, &l).pow(6) * &v(&d, &x)) + &v(&d, &y);
    let parts = p.weight_decompose("l");
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[&6], v(&d, &x));
    assert_eq!(parts[&0], v(&d, &y));
    assert_eq!(p.filter_weight("l", 0), v(&d, &y));
    assert!(p.filter_weight("l", 3).is_zero());

    let k = c(&d, 5);
    assert_eq!(k.weight_decompose("l")[&0], k);
    assert_eq!(k.filter_weight("l", 0), k);
    assert!(k.filter_weight("l", 1).is_zero());
}

#[test]
fn weight_of_equivariance_twist() {
    // l^6 * phi'(l^2 x) for phi' = sum a_kl x^k xb^l puts a_kl at weight 6+2k-2l
    let d = d2();
    let (x, xb) = VarSpec::pair("x", "xb");
    let l = VarSpec::unit("l");
    let pl = v(&d, &l);
    let sub = BTreeMap::from([
        ("x".to_string(), &pl.pow(2) * &v(&d, &x)),
        ("xb".to_string(), &pl.monomial_inverse().unwrap().pow(2) * &v(&d, &xb)),
    ]);
    for k in 0..4 {
        for j in 0..4 {
            let mono = &v(&d, &x).pow(k) * &v(&d, &xb).pow(j);
            let twisted = &pl.pow(6) * &mono.compose(&sub).unwrap();
            let parts = twisted.weight_decompose("l");
            let w = 6 + 2 * k as i32 - 2 * j as i32;
            assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![w]);
        }
    }
}

#[test]
fn evaluation_examples() {
    let d = d2();
    let (x, y) = (VarSpec::affine("x"), VarSpec::affine("y"));
    let p = &v(&d, &x).pow(2) - &(&c(&d, 2) * &v(&d, &y).pow(2));
    let pt = BTreeMap::from([
        ("x".to_string(), QuadElem::from_int(3, &d)),
        ("y".to_string(), QuadElem::from_int(2, &d)),
    ]);
    assert_eq!(p.eval(&pt).unwrap(), QuadElem::one(&d));
    assert!(SparsePoly::zero(&d).eval(&pt).unwrap().is_zero());

    let (zx, zxb) = VarSpec::pair("x", "xb");
    let z = &v(&d, &zx) * &v(&d, &zxb);
    let w = QuadElem::new(int(1), int(1), &d);
    let pt = BTreeMap::from([
        ("x".to_string(), w.clone()),
        ("xb".to_string(), w.conjugate()),
    ]);
    assert_eq!(z.eval(&pt).unwrap(), QuadElem::from_int(-1, &d));

    let l = VarSpec::unit("l");
    let pt = BTreeMap::from([("l".to_string(), QuadElem::zero(&d))]);
    assert_eq!(
        v(&d, &l).eval(&pt).unwrap_err(),
        PolyError::ZeroUnit("l".into())
    );
    assert_eq!(
        v(&d, &l).eval(&BTreeMap::new()).unwrap_err(),
        PolyError::MissingValue("l".into())
    );
}

#[test]
fn rendering_is_canonical() {
    let d = d2();
    let (x, xb) = VarSpec::pair("x", "xb");
    let l = VarSpec::unit("l");
    let p = SparsePoly::monomial(
        QuadElem::new(int(7), int(5), &d),
        &[(x.clone(), 2), (xb.clone(), 5), (l.clone(), -3)],
    );
    assert_eq!(p.to_string(), "(7 + 5*t)*x^2*xb^5*l^-3");
    let q = &(&v(&d, &x) - &c(&d, 1)) + &SparsePoly::from_rational(rat(-1, 2), &d).scale(&QuadElem::one(&d));
    assert_eq!(q.to_string(), "x - 3/2");
    assert_eq!(SparsePoly::zero(&d).to_string(), "0");
}

#[test]
fn map_composition_is_matrix_product() {
    let d = d2();
    let (x, y) = (VarSpec::affine("x"), VarSpec::affine("y"));
    let dom = vec![x.clone(), y.clone()];
    let lin = |m: [[i64; 2]; 2]| {
        let comps = m
            .iter()
            .map(|r| &(&c(&d, r[0]) * &v(&d, &x)) + &(&c(&d, r[1]) * &v(&d, &y)))
            .collect();
        PolyMap::new(&d, dom.clone(), vec![], comps).unwrap()
    };
    let f = lin([[1, 2], [3, 4]]);
    let g = lin([[0, 1], [-1, 5]]);
    // [[1,2],[3,4]] * [[0,1],[-1,5]] = [[-2,11],[-4,23]]
    assert_eq!(f.compose(&g).unwrap(), lin([[-2, 11], [-4, 23]]));
    let id = PolyMap::identity(&d, dom.clone());
    assert_eq!(f.compose(&id).unwrap(), f);
    assert_eq!(id.compose(&f).unwrap(), f);
    assert!(id.is_identity());
    let three = PolyMap::identity(&d, vec![x.clone(), y.clone(), VarSpec::affine("z")]);
    assert!(matches!(
        f.compose(&three),
        Err(PolyError::DimensionMismatch { .. })
    ));
}

#[test]
fn semilinear_composition_conjugates_inner_components() {
    // tau(x, y) = (xb, w*yb) with w a unit variable: tau o tau = (x, w*w^-1*y) = id
    let d = d2();
    let (x, xb) = VarSpec::pair("x", "xb");
    let (y, yb) = VarSpec::pair("y", "yb");
    let w = VarSpec::unit("w");
    let tau = PolyMap::new(
        &d,
        vec![x.clone(), y.clone()],
        vec![w.clone()],
        vec![v(&d, &xb), &v(&d, &w) * &v(&d, &yb)],
    )
    .unwrap();
    assert!(tau.compose(&tau).unwrap().is_identity());
}

#[test]
fn json_round_trip_and_validation() {
    let d = Discriminant::new(rat(-3, 7)).unwrap();
    let (x, xb) = VarSpec::pair("x", "xb");
    let l = VarSpec::unit("l");
    let f = PolyMap::new(
        &d,
        vec![x.clone()],
        vec![l.clone()],
        vec![&v(&d, &l).monomial_inverse().unwrap() * &v(&d, &xb).scale(&QuadElem::new(rat(1, 2), int(-3), &d))],
    )
    .unwrap();
    let text = map_to_json(&f);
    assert_eq!(map_from_json(&text).unwrap(), f);

    let bad = text.replace("\"1/2\"", "\"2/4\"");
    let err = map_from_json(&bad).unwrap_err().to_string();
    assert!(err.contains("non-canonical rational"), "{err}");
    assert!(err.starts_with("components[0][0][1]"), "{err}");

    let bad = text.replace("\"unit\"", "\"laurent\"");
    let err = map_from_json(&bad).unwrap_err().to_string();
    assert!(err.contains("unknown variable kind"), "{err}");

    let err = map_from_json("{\"alpha\": ").unwrap_err();
    assert!(matches!(err, MapFileError::Syntax { line: 1, .. }));
}

#[test]
fn json_rejects_negative_affine_exponent() {
    let text = r#"{
      "alpha": "2",
      "variables": [{"name": "a", "kind": "affine", "partner": null}],
      "domain": ["a"],
      "components": [[[[-1], "1", "0"]]]
    }"#;
    let err = map_from_json(text).unwrap_err().to_string();
    assert!(err.contains("negative exponent on affine variable"), "{err}");
    assert!(err.starts_with("components[0][0][0]"), "{err}");
}

// ---- properties ----

fn specs() -> Vec<VarSpec> {
    vec![
        VarSpec::affine("x").with_partner(Some("y".into())),
        VarSpec::affine("y").with_partner(Some("x".into())),
        VarSpec::unit("l"),
    ]
}

fn arb_coeff(d: Discriminant) -> impl Strategy<Value = QuadElem> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(move |(a, b, c, e)| QuadElem::new(rat(a, b), rat(c, e), &d))
}

fn arb_poly(d: Discriminant) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(
        (arb_coeff(d.clone()), 0i32..3, 0i32..3, -2i32..3),
        0..5,
    )
    .prop_map(move |terms| {
        SparsePoly::from_terms(
            &d,
            specs(),
            terms.into_iter().map(|(c, a, b, e)| (vec![a, b, e], c)),
        )
        .unwrap()
    })
}

fn arb_point(d: Discriminant) -> impl Strategy<Value = BTreeMap<String, QuadElem>> {
    (arb_coeff(d.clone()), -20i64..20, 1i64..20).prop_map(move |(xv, n, m)| {
        let lam = TorusPoint::from_slope(&d, &rat(n, m)).into_value();
        BTreeMap::from([
            ("x".to_string(), xv.clone()),
            ("y".to_string(), xv.conjugate()),
            ("l".to_string(), lam),
        ])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(p in arb_poly(d2()), q in arb_poly(d2()), r in arb_poly(d2())) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn sigma_is_involutive_ring_map(p in arb_poly(d2()), q in arb_poly(d2())) {
        prop_assert_eq!(p.apply_sigma().apply_sigma(), p.clone());
        prop_assert_eq!((&p * &q).apply_sigma(), &p.apply_sigma() * &q.apply_sigma());
        prop_assert_eq!((&p + &q).apply_sigma(), &p.apply_sigma() + &q.apply_sigma());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in arb_poly(d2()), q in arb_poly(d2()), pt in arb_point(d2())) {
        prop_assert_eq!((&p * &q).eval(&pt).unwrap(), &p.eval(&pt).unwrap() * &q.eval(&pt).unwrap());
        prop_assert_eq!((&p + &q).eval(&pt).unwrap(), &p.eval(&pt).unwrap() + &q.eval(&pt).unwrap());
    }

    #[test]
    fn evaluation_commutes_with_composition(p in arb_poly(d2()), s in arb_poly(d2()), pt in arb_point(d2())) {
        // substitute x -> s (y is x's partner, so keep the substitution polynomial)
        let sub = BTreeMap::from([("x".to_string(), s.clone())]);
        let composed = p.compose(&sub).unwrap();
        let mut inner = pt.clone();
        inner.insert("x".into(), s.eval(&pt).unwrap());
        prop_assert_eq!(composed.eval(&pt).unwrap(), p.eval(&inner).unwrap());
    }

    #[test]
    fn sigma_matches_conjugated_evaluation(p in arb_poly(d2()), pt in arb_point(d2())) {
        // at points with y = sigma(x) and l in S: eval(sigma p) = sigma(eval p)
        prop_assert_eq!(p.apply_sigma().eval(&pt).unwrap(), p.eval(&pt).unwrap().conjugate());
    }

    #[test]
    fn weight_parts_recombine(p in arb_poly(d2()), w in -4i32..5) {
        let d = d2();
        let l = SparsePoly::var(&d, &VarSpec::unit("l"));
        let linv = l.monomial_inverse().unwrap();
        let parts = p.weight_decompose("l");
        let mut sum = SparsePoly::zero(&d);
        for (k, part) in &parts {
            let lk = if *k >= 0 { l.pow(*k as u32) } else { linv.pow(k.unsigned_abs()) };
            sum = &sum + &(&lk * part);
        }
        prop_assert_eq!(&sum, &p);
        let lw = if w >= 0 { l.pow(w as u32) } else { linv.pow(w.unsigned_abs()) };
        let expect = parts.get(&w).map(|q| &lw * q).unwrap_or_else(|| SparsePoly::zero(&d));
        prop_assert_eq!(p.filter_weight("l", w), expect);
    }

    #[test]
    fn norm_rewrite_round_trip(coeffs in prop::collection::vec(arb_coeff(d2()), 0..5), s in 0u32..4) {
        let d = d2();
        let (x, xb) = VarSpec::pair("x", "xb");
        let px = SparsePoly::var(&d, &x);
        let pxb = SparsePoly::var(&d, &xb);
        let mut p = SparsePoly::zero(&d);
        for (i, c) in coeffs.iter().enumerate() {
            p = &p + &(&(&px * &pxb).pow(i as u32) * &pxb.pow(s)).scale(c);
        }
        let nf = rewrite_norm(&p, &x, &xb).unwrap();
        prop_assert_eq!(nf.expand(&d), p);
    }
}
