#![allow(clippy::excessive_precision)]

use expmarkov::multifractal::{concavity_violation, default_q_grid, Multifractal};
use expmarkov::{MarkovMap, Potential};

const P: f64 = 0.7;

// Reference values computed independently with 40-digit arithmetic.
const ETA_Q2: f64 = -0.785875194647152575;
const ALPHA_MAX: f64 = 1.1257693834979822034;
const HDIM: f64 = 0.881290899230692618;
const ALPHA_MINUS: f64 = 0.514573172829758240;
const ALPHA_PLUS: f64 = 1.736965594166206166;
const ALPHA_Q2: f64 = 0.704254755450931194;
const D_AT_07: f64 = 0.614057729874733863;

fn bernoulli() -> Multifractal {
    let map = MarkovMap::doubling();
    let phi = Potential::bernoulli(&map, &[P, 1.0 - P]).unwrap();
    Multifractal::new(&map, &phi).unwrap()
}

fn eta_closed_form(q: f64) -> f64 {
    (P.powf(q) + (1.0 - P).powf(q)).log2()
}

#[test]
fn eta_matches_closed_form_on_grid() {
    let mf = bernoulli();
    assert!((mf.eta(2.0).unwrap() - ETA_Q2).abs() < 1e-12);
    for i in 0..81 {
        let q = -20.0 + 0.5 * i as f64;
        let eta = mf.eta(q).unwrap();
        assert!((eta - eta_closed_form(q)).abs() < 1e-8, "q = {q}: {eta}");
    }
}

#[test]
fn alpha_anchor_values() {
    let mf = bernoulli();
    assert!((mf.alpha(0.0).unwrap() - ALPHA_MAX).abs() < 1e-8);
    assert!((mf.alpha(1.0).unwrap() - HDIM).abs() < 1e-8);
    assert!((mf.alpha(2.0).unwrap() - ALPHA_Q2).abs() < 1e-8);
    let a = [-5.0, 0.0, 5.0].map(|q| mf.alpha(q).unwrap());
    assert!(a[0] > a[1] && a[1] > a[2]);
}

#[test]
fn spectrum_shape() {
    let mf = bernoulli();
    let pts = mf.spectrum(&default_q_grid()).unwrap();
    let at_one = pts.iter().find(|p| p.q == 1.0).unwrap();
    assert!((at_one.dim - at_one.alpha).abs() < 1e-8);
    let max = pts.iter().map(|p| p.dim).fold(f64::MIN, f64::max);
    assert!((max - 1.0).abs() < 1e-8);
    assert!(pts.iter().all(|p| p.valid));
    let curve: Vec<(f64, f64)> = pts.iter().map(|p| (p.alpha, p.dim)).collect();
    let v = concavity_violation(&curve);
    assert!(v <= 1e-8, "violation {v}");
    // eta is convex in q: -eta is concave.
    let neg_eta: Vec<(f64, f64)> = pts.iter().map(|p| (p.q, -p.eta)).collect();
    assert!(concavity_violation(&neg_eta) <= 1e-8);
    assert!(pts.windows(2).all(|w| w[1].eta < w[0].eta && w[1].alpha < w[0].alpha));
}

#[test]
fn critical_exponents_bernoulli() {
    let c = bernoulli().critical_exponents().unwrap();
    assert!((c.alpha_minus - ALPHA_MINUS).abs() < 1e-10);
    assert!((c.alpha_plus - ALPHA_PLUS).abs() < 1e-10);
    assert!((c.alpha_max - ALPHA_MAX).abs() < 1e-8);
    assert!((c.hdim - HDIM).abs() < 1e-8);
    assert!(c.cross_check_ok(), "{c:?}");
    assert!(c.alpha_minus <= c.hdim && c.hdim <= c.alpha_max && c.alpha_max <= c.alpha_plus);
}

#[test]
fn critical_exponents_lebesgue_degenerate() {
    let map = MarkovMap::doubling();
    let phi = Potential::neg_log_derivative(&map);
    let c = Multifractal::new(&map, &phi).unwrap().critical_exponents().unwrap();
    for v in [c.alpha_minus, c.alpha_max, c.alpha_plus, c.hdim] {
        assert!((v - 1.0).abs() < 1e-10, "{c:?}");
    }
}

#[test]
fn spectrum_at_alpha_point_seven() {
    let p = bernoulli().at_alpha(0.7).unwrap();
    assert!((p.alpha - 0.7).abs() < 1e-9);
    assert!((p.dim - D_AT_07).abs() < 1e-8);
}
