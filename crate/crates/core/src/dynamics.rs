//! Sampled points, exact iteration, hitting times and the hitting-time law
//! experiment.

use crate::error::{Error, Result};
use crate::map::{MarkovMap, Symbol, Word};
use crate::multifractal::Multifractal;
use crate::orbit::{Ball, ChainSampler, ExactOrbit, Orbit, SampledOrbit};
use crate::parallel;
use crate::rational::{self, Rational};
use crate::thermo::{GibbsModel, Potential};

/// Smallest radius exponent used by rate estimates.
pub const J_MIN: u32 = 4;

/// A rational point drawn as the midpoint of a sampled cylinder.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint {
    pub value: Rational,
    pub word: Word,
    pub seed: u64,
    pub stream: u64,
}

impl SamplePoint {
    pub fn prefix_len(&self) -> usize {
        self.word.len()
    }
}

/// Midpoint of the cylinder of a length-`m` word drawn from the stationary
/// chain of `model`, using RNG stream 0.
pub fn sample_point(model: &GibbsModel, m: usize, seed: u64) -> Result<SamplePoint> {
    sample_point_on_stream(model, m, seed, 0)
}

pub fn sample_point_on_stream(model: &GibbsModel, m: usize, seed: u64, stream: u64) -> Result<SamplePoint> {
    if m < model.depth() || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "prefix length {m} is shorter than the model depth {}",
            model.depth()
        )));
    }
    let sampler = ChainSampler::new(model)?;
    let word = sampler.sample_word(m, seed, stream);
    let value = model.map().cylinder(&word)?.midpoint();
    Ok(SamplePoint {
        value,
        word,
        seed,
        stream,
    })
}

/// Exact `T^n x`.
pub fn iterate(map: &MarkovMap, x: &Rational, n: u64) -> Result<Rational> {
    let mut orbit = ExactOrbit::new(map, x.clone())?;
    for _ in 0..n {
        orbit.advance()?;
    }
    Ok(orbit.point().clone())
}

/// First entrance time, or the horizon if the ball was not entered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HitTime {
    Hit(u64),
    Exceeded(u64),
}

impl HitTime {
    pub fn time(&self) -> Option<u64> {
        match self {
            HitTime::Hit(n) => Some(*n),
            HitTime::Exceeded(_) => None,
        }
    }

    /// `log tau / (j log 2)`, infinite when the horizon was exceeded.
    pub fn quotient(&self, j: u32) -> f64 {
        match self {
            HitTime::Hit(n) => (*n as f64).ln() / (j as f64 * std::f64::consts::LN_2),
            HitTime::Exceeded(_) => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingRecord {
    pub x: Rational,
    pub y: Rational,
    pub r: Rational,
    pub tau: HitTime,
}

/// First `n` in `[1, n_max]` with `T^n x` in an open ball, on any orbit.
pub fn first_hit<O: Orbit>(orbit: &mut O, ball: &Ball, n_max: u64) -> Result<HitTime> {
    while orbit.index() < n_max {
        orbit.advance()?;
        if orbit.in_open_ball(ball)? {
            return Ok(HitTime::Hit(orbit.index()));
        }
    }
    Ok(HitTime::Exceeded(n_max))
}

/// `tau_r(x, y)` for a rational point `x`, with exact arithmetic.
pub fn hitting_time(map: &MarkovMap, x: &Rational, y: &Rational, r: &Rational, n_max: u64) -> Result<HittingRecord> {
    if r <= &Rational::from_integer(0.into()) || n_max == 0 {
        return Err(Error::InvalidArgument("need r > 0 and n_max >= 1".into()));
    }
    let mut orbit = ExactOrbit::new(map, x.clone())?;
    let tau = first_hit(&mut orbit, &Ball::new(y.clone(), r.clone()), n_max)?;
    Ok(HittingRecord {
        x: x.clone(),
        y: y.clone(),
        r: r.clone(),
        tau,
    })
}

/// Hitting times at radii `2^{-j}`, `j = J_MIN..=j_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateEstimate {
    pub j: Vec<u32>,
    pub taus: Vec<HitTime>,
    pub quotients: Vec<f64>,
}

impl RateEstimate {
    /// Quotients with `j > j_max / 2`.
    pub fn tail(&self) -> Vec<f64> {
        let j_max = *self.j.last().unwrap_or(&0);
        self.j
            .iter()
            .zip(&self.quotients)
            .filter(|(&j, _)| 2 * j > j_max)
            .map(|(_, &q)| q)
            .collect()
    }

    /// Lower-limit proxy: minimum over the tail.
    pub fn liminf_proxy(&self) -> f64 {
        self.tail().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Upper-limit proxy: maximum over the tail.
    pub fn limsup_proxy(&self) -> f64 {
        self.tail().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn tail_median(&self) -> f64 {
        median(&self.tail())
    }
}

/// Median (mean of the middle pair for even length); `NaN` when empty.
/// Infinite values sort last.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Hitting times of the nested balls `B(y, 2^{-j})` in one pass over the orbit.
pub fn rate_estimate_on<O: Orbit>(orbit: &mut O, y: &Rational, j_max: u32, n_max: u64) -> Result<RateEstimate> {
    if j_max < J_MIN {
        return Err(Error::InvalidArgument(format!("j_max must be at least {J_MIN}")));
    }
    let balls: Vec<Ball> = (J_MIN..=j_max).map(|j| Ball::dyadic(y.clone(), j)).collect();
    let mut taus = vec![HitTime::Exceeded(n_max); balls.len()];
    // Balls are nested, so unhit radii always form a suffix starting at `next`.
    let mut next = 0usize;
    while next < balls.len() && orbit.index() < n_max {
        orbit.advance()?;
        if orbit.in_open_ball(&balls[next])? {
            let n = orbit.index();
            taus[next] = HitTime::Hit(n);
            next += 1;
            while next < balls.len() && orbit.in_open_ball(&balls[next])? {
                taus[next] = HitTime::Hit(n);
                next += 1;
            }
        }
    }
    let j: Vec<u32> = (J_MIN..=j_max).collect();
    let quotients = j.iter().zip(&taus).map(|(&j, t)| t.quotient(j)).collect();
    Ok(RateEstimate { j, taus, quotients })
}

/// [`rate_estimate_on`] for a rational starting point.
pub fn rate_estimate(map: &MarkovMap, x: &Rational, y: &Rational, j_max: u32, n_max: u64) -> Result<RateEstimate> {
    rate_estimate_on(&mut ExactOrbit::new(map, x.clone())?, y, j_max, n_max)
}

/// One trial of the hitting-time law experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct HittingTrial {
    pub trial: usize,
    pub y: Rational,
    pub estimate: RateEstimate,
    pub tail_median: f64,
    pub liminf_proxy: f64,
    pub limsup_proxy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingSummary {
    pub trials: Vec<HittingTrial>,
    /// Median over trials of the per-trial tail medians.
    pub median: f64,
    /// `-int phi dmu_psi / int log|T'| dmu_psi` with `phi` normalized.
    pub prediction: f64,
}

/// Parameters of [`hitting_law_experiment`].
#[derive(Clone, Copy, Debug)]
pub struct HittingParams {
    pub trials: usize,
    pub j_max: u32,
    pub n_max: u64,
    pub seed: u64,
}

/// `int f dmu` for a function of the first `depth` symbols.
pub fn integrate_words(model: &GibbsModel, depth: usize, f: impl Fn(&[Symbol]) -> f64) -> Result<f64> {
    let words = model.map().admissible_words(depth.max(model.depth()))?;
    Ok(words
        .iter()
        .map(|w| model.measure(w.symbols()) * f(&w.symbols()[..depth]))
        .sum())
}

/// Predicted hitting exponent `d_{mu_phi}(y)` for `mu_psi`-typical `y`.
pub fn predicted_rate(phi_model: &GibbsModel, psi_model: &GibbsModel) -> Result<f64> {
    let map = phi_model.map();
    let mf = Multifractal::new(map, phi_model.potential())?;
    let phi = mf.phi();
    let num = integrate_words(psi_model, phi.depth(), |w| phi.value(w).expect("admissible"))?;
    let den = integrate_words(psi_model, 1, |w| map.log_abs_slope(w[0]))?;
    Ok(-num / den)
}

/// Number of symbols for a sampled target to be resolved to about `2^{-64}`.
pub fn target_prefix_len(map: &MarkovMap) -> usize {
    map.generations_for_precision(64)
}

/// Per trial: `x ~ mu_phi` (an infinite sampled itinerary), `y ~ mu_psi`
/// (midpoint of a long sampled cylinder), and the nested-ball rate estimate.
/// Trial `t` uses RNG streams `2t` for `x` and `2t + 1` for `y`.
pub fn hitting_law_experiment(
    phi_model: &GibbsModel,
    psi_model: &GibbsModel,
    params: HittingParams,
) -> Result<HittingSummary> {
    let map = phi_model.map();
    let x_sampler = ChainSampler::new(phi_model)?;
    let y_len = target_prefix_len(map).max(psi_model.depth());
    let prediction = predicted_rate(phi_model, psi_model)?;
    let trials = parallel::try_map_indexed(params.trials, |t| {
        let y = sample_point_on_stream(psi_model, y_len, params.seed, 2 * t as u64 + 1)?.value;
        let mut orbit = SampledOrbit::new(map, &x_sampler, params.seed, 2 * t as u64);
        let estimate = rate_estimate_on(&mut orbit, &y, params.j_max, params.n_max)?;
        Ok::<_, Error>(HittingTrial {
            trial: t,
            y,
            tail_median: estimate.tail_median(),
            liminf_proxy: estimate.liminf_proxy(),
            limsup_proxy: estimate.limsup_proxy(),
            estimate,
        })
    })?;
    let medians: Vec<f64> = trials.iter().map(|t| t.tail_median).collect();
    Ok(HittingSummary {
        median: median(&medians),
        prediction,
        trials,
    })
}

/// Convenience: build both models from potentials.
pub fn hitting_law_from_potentials(
    map: &MarkovMap,
    phi: &Potential,
    psi: &Potential,
    params: HittingParams,
) -> Result<HittingSummary> {
    let phi_model = GibbsModel::new(map, phi)?;
    let psi_model = GibbsModel::new(map, psi)?;
    hitting_law_experiment(&phi_model, &psi_model, params)
}

/// `y` as a float, for reporting.
pub fn to_f64(x: &Rational) -> f64 {
    rational::to_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn one_third_has_period_two() {
        let map = MarkovMap::doubling();
        assert_eq!(iterate(&map, &ratio(1, 3), 1).unwrap(), ratio(2, 3));
        assert_eq!(iterate(&map, &ratio(1, 3), 2).unwrap(), ratio(1, 3));
        assert_eq!(iterate(&map, &int(0), 50).unwrap(), int(0));
    }

    #[test]
    fn hitting_examples() {
        let map = MarkovMap::doubling();
        let x = ratio(3, 7);
        let y = iterate(&map, &x, 5).unwrap();
        let r = hitting_time(&map, &x, &y, &ratio(1, 1_000_000), 100).unwrap();
        assert!(r.tau.time().unwrap() <= 5);
        let tx = iterate(&map, &x, 1).unwrap();
        let r = hitting_time(&map, &x, &tx, &ratio(1, 1 << 20), 100).unwrap();
        assert_eq!(r.tau, HitTime::Hit(1));
        assert_eq!(r.tau.quotient(20), 0.0);
        // Orbit of 0 stays at 0.
        let r = hitting_time(&map, &int(0), &ratio(1, 2), &ratio(1, 4), 1000).unwrap();
        assert_eq!(r.tau, HitTime::Exceeded(1000));
        assert_eq!(r.tau.quotient(5), f64::INFINITY);
    }

    #[test]
    fn nested_radii_are_monotone() {
        let map = MarkovMap::doubling();
        let est = rate_estimate(&map, &ratio(5, 127), &ratio(1, 5), 12, 10_000).unwrap();
        let times: Vec<u64> = est.taus.iter().map(|t| t.time().unwrap_or(u64::MAX)).collect();
        assert!(times.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn median_handles_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(&[1.0, f64::INFINITY, f64::INFINITY]), f64::INFINITY);
    }
}
