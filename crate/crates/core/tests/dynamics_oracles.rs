#![allow(clippy::excessive_precision)]

use expmarkov::dynamics::{self, sample_point, sample_point_on_stream};
use expmarkov::multifractal::{local_dimension_trace, Multifractal};
use expmarkov::orbit::ChainSampler;
use expmarkov::{GibbsModel, MarkovMap, Potential};

const HDIM: f64 = 0.881290899230692618;
const ALPHA_Q2: f64 = 0.704254755450931194;

fn models() -> (GibbsModel, GibbsModel) {
    let map = MarkovMap::doubling();
    let b = GibbsModel::new(&map, &Potential::bernoulli(&map, &[0.7, 0.3]).unwrap()).unwrap();
    let l = GibbsModel::new(&map, &Potential::neg_log_derivative(&map)).unwrap();
    (b, l)
}

fn zero_frequency(model: &GibbsModel, samples: u64, m: usize) -> f64 {
    let zeros: usize = (0..samples)
        .map(|s| {
            let p = sample_point_on_stream(model, m, 11, s).unwrap();
            p.word.symbols().iter().filter(|&&d| d == 0).count()
        })
        .sum();
    zeros as f64 / (samples as usize * m) as f64
}

#[test]
fn sampled_digit_frequencies_are_within_three_sigma() {
    let (b, l) = models();
    let n: f64 = 10_000.0 * 20.0;
    for (model, p) in [(&l, 0.5f64), (&b, 0.7)] {
        let f = zero_frequency(model, 10_000, 20);
        let sigma = (p * (1.0 - p) / n).sqrt();
        assert!((f - p).abs() <= 3.0 * sigma, "frequency {f} vs {p}");
    }
}

#[test]
fn sample_points_are_deterministic_midpoints() {
    let (b, _) = models();
    let a = sample_point(&b, 30, 5).unwrap();
    assert_eq!(a, sample_point(&b, 30, 5).unwrap());
    let c = b.map().cylinder(&a.word).unwrap();
    assert_eq!(a.value, c.midpoint());
    assert!(sample_point(&b, 0, 5).is_err());
}

#[test]
fn lebesgue_local_dimension_is_one() {
    let (_, l) = models();
    let w = ChainSampler::new(&l).unwrap().sample_word(500, 1, 0);
    for d in local_dimension_trace(&l, w.symbols(), 500).unwrap() {
        assert!((d - 1.0).abs() < 1e-12);
    }
}

/// `log mu(I_n) / log |I_n|` equals the digit-frequency formula, and
/// concentrates at `hdim` for typical points.
#[test]
fn bernoulli_local_dimension_matches_digit_counts() {
    let (b, _) = models();
    let sampler = ChainSampler::new(&b).unwrap();
    let n = 10_000;
    let mut close = 0;
    for t in 0..100 {
        let w = sampler.sample_word(n, 3, t);
        let d = *local_dimension_trace(&b, w.symbols(), n).unwrap().last().unwrap();
        let f0 = w.symbols().iter().filter(|&&s| s == 0).count() as f64 / n as f64;
        let oracle = -(f0 * 0.7f64.log2() + (1.0 - f0) * 0.3f64.log2());
        assert!((d - oracle).abs() < 1e-9);
        if (d - HDIM).abs() <= 0.02 {
            close += 1;
        }
    }
    assert!(close >= 95, "{close} of 100 trials within 0.02");
}

#[test]
fn mu_q_typical_points_have_local_dimension_alpha_q() {
    let (b, _) = models();
    let map = MarkovMap::doubling();
    let mf = Multifractal::new(&map, &Potential::bernoulli(&map, &[0.7, 0.3]).unwrap()).unwrap();
    assert!((mf.alpha(2.0).unwrap() - ALPHA_Q2).abs() < 1e-10);
    let sampler = ChainSampler::new(&mf.mu_q(2.0).unwrap()).unwrap();
    let n = 10_000;
    let close = (0..100)
        .filter(|&t| {
            let w = sampler.sample_word(n, 4, t);
            let d = *local_dimension_trace(&b, w.symbols(), n).unwrap().last().unwrap();
            (d - ALPHA_Q2).abs() <= 0.02
        })
        .count();
    assert!(close >= 95, "{close} of 100 trials within 0.02");
}

#[test]
fn predicted_rates_match_closed_forms() {
    let (b, l) = models();
    let p = 0.7f64;
    let alpha_max = -(p * (1.0 - p)).log2() / 2.0;
    assert!((dynamics::predicted_rate(&b, &l).unwrap() - alpha_max).abs() < 1e-12);
    assert!((dynamics::predicted_rate(&b, &b).unwrap() - HDIM).abs() < 1e-12);
    assert!((dynamics::predicted_rate(&l, &l).unwrap() - 1.0).abs() < 1e-12);
}
