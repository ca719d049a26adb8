//! Multifractal analysis of Gibbs measures: the pressure equation
//! `P(-eta log|T'| + q phi) = 0`, the exponent `alpha(q)`, the spectrum
//! `D = eta + q alpha` and the critical exponents.

use crate::cycle_ratio::{self, RatioGraph};
use crate::error::{Error, Result};
use crate::map::{MarkovMap, Symbol};
use crate::parallel;
use crate::thermo::{self, GibbsModel, Potential};

pub const ETA_BRACKET: f64 = 10.0;
pub const ETA_WIDENINGS: usize = 2;
pub const CYCLE_TOLERANCE: f64 = 1e-12;
pub const CROSS_CHECK_Q: f64 = 50.0;
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-3;

/// One sample `(q, eta(q), alpha(q), D)` of the spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumPoint {
    pub q: f64,
    pub eta: f64,
    pub alpha: f64,
    /// `eta + q * alpha`, unclipped.
    pub dim: f64,
    /// Whether `dim` lies in `[0, 1]`.
    pub valid: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalExponents {
    pub alpha_minus: f64,
    pub alpha_max: f64,
    pub alpha_plus: f64,
    pub hdim: f64,
    /// `alpha(CROSS_CHECK_Q)`, which approaches `alpha_minus`.
    pub alpha_at_large_q: f64,
    /// `alpha(-CROSS_CHECK_Q)`, which approaches `alpha_plus`.
    pub alpha_at_large_negative_q: f64,
}

impl CriticalExponents {
    pub fn cross_check_ok(&self) -> bool {
        (self.alpha_minus - self.alpha_at_large_q).abs() <= CROSS_CHECK_TOLERANCE
            && (self.alpha_plus - self.alpha_at_large_negative_q).abs() <= CROSS_CHECK_TOLERANCE
    }
}

/// A map with a normalized potential and `log|T'|` at a common depth.
#[derive(Clone, Debug)]
pub struct Multifractal {
    map: MarkovMap,
    phi: Potential,
    log_derivative: Potential,
}

impl Multifractal {
    /// Normalizes `phi` by its pressure.
    pub fn new(map: &MarkovMap, phi: &Potential) -> Result<Self> {
        let p = thermo::pressure(map, phi)?;
        let phi = thermo::normalize(phi, p);
        let log_derivative = Potential::from_fn(map, phi.depth(), |w| map.log_abs_slope(w[0]))?;
        Ok(Multifractal {
            map: map.clone(),
            phi,
            log_derivative,
        })
    }

    pub fn map(&self) -> &MarkovMap {
        &self.map
    }

    /// The normalized potential.
    pub fn phi(&self) -> &Potential {
        &self.phi
    }

    /// `-eta log|T'| + q phi`.
    pub fn family_member(&self, eta: f64, q: f64) -> Result<Potential> {
        self.log_derivative.combine(&self.map, -eta, &self.phi, q)
    }

    fn pressure_at(&self, eta: f64, q: f64) -> Result<f64> {
        thermo::pressure(&self.map, &self.family_member(eta, q)?)
    }

    /// The unique root of `eta -> P(-eta log|T'| + q phi)`.
    pub fn eta(&self, q: f64) -> Result<f64> {
        let mut half_width = ETA_BRACKET;
        let mut bracket = None;
        for _ in 0..=ETA_WIDENINGS {
            let lo = self.pressure_at(-half_width, q)?;
            let hi = self.pressure_at(half_width, q)?;
            if lo >= 0.0 && hi <= 0.0 {
                bracket = Some((-half_width, half_width));
                break;
            }
            half_width *= 10.0;
        }
        let (mut lo, mut hi) = bracket.ok_or(Error::BracketFailure { q })?;
        // Pressure is strictly decreasing in eta.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.pressure_at(mid, q)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The Gibbs measure `mu_q` of `-eta(q) log|T'| + q phi`.
    pub fn mu_q(&self, q: f64) -> Result<GibbsModel> {
        let eta = self.eta(q)?;
        GibbsModel::new(&self.map, &self.family_member(eta, q)?)
    }

    fn alpha_from_model(&self, model: &GibbsModel) -> f64 {
        let phi_integral = model.integrate_states(|w| self.phi.value(w).expect("admissible"));
        let log_derivative_integral = model.integrate_states(|w: &[Symbol]| self.map.log_abs_slope(w[0]));
        -phi_integral / log_derivative_integral
    }

    /// `alpha(q) = -int phi dmu_q / int log|T'| dmu_q`.
    pub fn alpha(&self, q: f64) -> Result<f64> {
        Ok(self.alpha_from_model(&self.mu_q(q)?))
    }

    pub fn point(&self, q: f64) -> Result<SpectrumPoint> {
        let eta = self.eta(q)?;
        let model = GibbsModel::new(&self.map, &self.family_member(eta, q)?)?;
        let alpha = self.alpha_from_model(&model);
        let dim = eta + q * alpha;
        Ok(SpectrumPoint {
            q,
            eta,
            alpha,
            dim,
            valid: (0.0..=1.0).contains(&dim),
        })
    }

    /// Spectrum points in grid order; grid points are evaluated in parallel.
    pub fn spectrum(&self, q_grid: &[f64]) -> Result<Vec<SpectrumPoint>> {
        parallel::map_slice(q_grid, |&q| self.point(q)).into_iter().collect()
    }

    /// The spectrum point whose `alpha(q)` equals `alpha`, by bisection in `q`.
    pub fn at_alpha(&self, alpha: f64) -> Result<SpectrumPoint> {
        let (mut lo, mut hi) = (-CROSS_CHECK_Q, CROSS_CHECK_Q);
        let a_lo = self.alpha(lo)?;
        let a_hi = self.alpha(hi)?;
        if !(a_hi <= alpha && alpha <= a_lo) {
            return Err(Error::InvalidArgument(format!(
                "alpha {alpha} is outside [{a_hi}, {a_lo}] reachable with |q| <= {CROSS_CHECK_Q}"
            )));
        }
        // alpha(q) is decreasing.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.alpha(mid)? > alpha {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.point(0.5 * (lo + hi))
    }

    /// `alpha_-`, `alpha_max`, `alpha_+` and `hdim mu_phi`.
    pub fn critical_exponents(&self) -> Result<CriticalExponents> {
        let graph = self.ratio_graph();
        let alpha_minus = cycle_ratio::min_cycle_ratio(&graph, CYCLE_TOLERANCE);
        let alpha_plus = cycle_ratio::max_cycle_ratio(&graph, CYCLE_TOLERANCE);
        Ok(CriticalExponents {
            alpha_minus,
            alpha_max: self.alpha(0.0)?,
            alpha_plus,
            hdim: self.alpha(1.0)?,
            alpha_at_large_q: self.alpha(CROSS_CHECK_Q)?,
            alpha_at_large_negative_q: self.alpha(-CROSS_CHECK_Q)?,
        })
    }

    /// The `k`-word graph with cost `-phi` and time `log|T'|` on each node.
    fn ratio_graph(&self) -> RatioGraph {
        let model_states = self.phi.words();
        let k = self.phi.depth();
        let mut successors = Vec::with_capacity(model_states.len());
        let mut window = vec![0 as Symbol; k];
        for w in model_states {
            let s = w.symbols();
            window[..k - 1].copy_from_slice(&s[1..]);
            let succ = self
                .map
                .successors(s[k - 1])
                .iter()
                .map(|&next| {
                    window[k - 1] = next;
                    self.phi.index_of(&window).expect("admissible")
                })
                .collect();
            successors.push(succ);
        }
        RatioGraph {
            successors,
            cost: self.phi.values().iter().map(|v| -v).collect(),
            time: model_states.iter().map(|w| self.map.log_abs_slope(w.symbols()[0])).collect(),
        }
    }
}

pub fn eta(map: &MarkovMap, phi: &Potential, q: f64) -> Result<f64> {
    Multifractal::new(map, phi)?.eta(q)
}

pub fn alpha_of_q(map: &MarkovMap, phi: &Potential, q: f64) -> Result<f64> {
    Multifractal::new(map, phi)?.alpha(q)
}

pub fn spectrum(map: &MarkovMap, phi: &Potential, q_grid: &[f64]) -> Result<Vec<SpectrumPoint>> {
    Multifractal::new(map, phi)?.spectrum(q_grid)
}

pub fn critical_exponents(map: &MarkovMap, phi: &Potential) -> Result<CriticalExponents> {
    Multifractal::new(map, phi)?.critical_exponents()
}

/// 81 points on `[-20, 20]` with extra points at spacing 0.025 within 0.1 of
/// `q = 0` and `q = 1`, sorted and deduplicated.
pub fn default_q_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..81).map(|i| -20.0 + 0.5 * i as f64).collect();
    for center in [0.0, 1.0] {
        for i in -4..=4 {
            grid.push(center + 0.025 * i as f64);
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}

/// Largest violation of concavity of `y` as a function of `x` over
/// consecutive triples, after sorting by `x`: the chord value minus the
/// middle value. Triples with coincident `x` are skipped.
pub fn concavity_violation(points: &[(f64, f64)]) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut worst = f64::NEG_INFINITY;
    for t in sorted.windows(3) {
        let (x0, y0) = t[0];
        let (x1, y1) = t[1];
        let (x2, y2) = t[2];
        if x2 - x0 <= 1e-9 || x1 - x0 <= 1e-12 || x2 - x1 <= 1e-12 {
            continue;
        }
        let chord = y0 + (y2 - y0) * (x1 - x0) / (x2 - x0);
        worst = worst.max(chord - y1);
    }
    worst
}

/// `log mu(I_n) / log |I_n|` for `n = 1..=n_max` along an itinerary.
pub fn local_dimension_trace(model: &GibbsModel, itinerary: &[Symbol], n_max: usize) -> Result<Vec<f64>> {
    let n_max = n_max.min(itinerary.len());
    let symbols = &itinerary[..n_max];
    let map = model.map();
    map.check_word(symbols)?;
    let k = model.depth();
    let mut out = Vec::with_capacity(n_max);
    let mut log_len_prefix = 0.0;
    let mut log_mu = 0.0;
    for n in 1..=n_max {
        let last = symbols[n - 1];
        // |I(w_1..w_n)| = |I(w_n)| / prod_{j<n} |s_{w_j}|
        let log_len = (map.endpoints_f64()[last as usize + 1] - map.endpoints_f64()[last as usize]).ln()
            - log_len_prefix;
        log_len_prefix += map.log_abs_slope(last);
        log_mu = if n <= k {
            model.log_measure(&symbols[..n])
        } else {
            log_mu + model.log_transition_step(&symbols[n - k - 1..n])
        };
        out.push(log_mu / log_len);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = default_q_grid();
        assert!(g.len() > 81);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g[0], -20.0);
        assert_eq!(*g.last().unwrap(), 20.0);
        assert!(g.contains(&0.0) && g.contains(&1.0));
    }

    #[test]
    fn concavity_of_parabola() {
        let pts: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, -(i as f64).powi(2))).collect();
        assert!(concavity_violation(&pts) <= 0.0);
        let convex: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, (i as f64).powi(2))).collect();
        assert!(concavity_violation(&convex) > 0.5);
    }

    #[test]
    fn eta_anchor_points() {
        let map = MarkovMap::doubling();
        let phi = Potential::bernoulli(&map, &[0.7, 0.3]).unwrap();
        let mf = Multifractal::new(&map, &phi).unwrap();
        assert!((mf.eta(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(mf.eta(1.0).unwrap().abs() < 1e-12);
    }
}
