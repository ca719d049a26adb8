//! Finite-horizon approximations of the uniform and asymptotic approximation
//! sets of an orbit, rasterized on dyadic grids, and the cover-growth
//! experiment.
//!
//! A grid of resolution `m` has boxes `[j 2^{-m}, (j+1) 2^{-m}]`. A box is set
//! when its closed interval meets the finite-horizon set as judged from
//! binary64 lower bounds on box-to-orbit distances, so every rasterization
//! here is outer: true points always land in set boxes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::map::{MarkovMap, Symbol};
use crate::orbit::{ChainSampler, ExactOrbit, Orbit, SampledOrbit};
use crate::rational::Rational;
use crate::thermo::{self, GibbsModel};

pub const MIN_RESOLUTION: u32 = 4;
pub const MAX_RESOLUTION: u32 = 30;

/// Bitset over the `2^m` dyadic boxes of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridIndicator {
    m: u32,
    bits: BitVec<u64, Lsb0>,
}

impl GridIndicator {
    pub fn empty(m: u32) -> Self {
        GridIndicator {
            m,
            bits: bitvec![u64, Lsb0; 0; 1usize << m],
        }
    }

    pub fn full(m: u32) -> Self {
        GridIndicator {
            m,
            bits: bitvec![u64, Lsb0; 1; 1usize << m],
        }
    }

    pub fn resolution(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn get(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.bits.set(j, value);
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn complement(&self) -> GridIndicator {
        GridIndicator {
            m: self.m,
            bits: !self.bits.clone(),
        }
    }

    pub fn is_subset_of(&self, other: &GridIndicator) -> bool {
        assert_eq!(self.m, other.m, "resolutions differ");
        self.bits.iter_ones().all(|j| other.bits[j])
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// Box indices whose closed boxes may lie within `radius` of `[lo, hi]`.
    fn candidate_range(&self, lo: f64, hi: f64, radius: f64) -> std::ops::RangeInclusive<usize> {
        let scale = (1u64 << self.m) as f64;
        let last = (1usize << self.m) - 1;
        let a = ((lo - radius) * scale).floor().max(0.0) as usize;
        let b = (((hi + radius) * scale).floor().max(0.0) as usize).min(last);
        a.min(last)..=b
    }

    /// Lower bound on the distance from box `j` to the interval `[lo, hi]`.
    fn distance_lower_bound(&self, j: usize, lo: f64, hi: f64) -> f64 {
        let h = 1.0 / (1u64 << self.m) as f64;
        let left = j as f64 * h;
        let right = (j + 1) as f64 * h;
        let d = (left - hi).max(lo - right).max(0.0);
        d * (1.0 - 4.0 * f64::EPSILON)
    }
}

/// `(number of set boxes) 2^{-m}`.
pub fn lebesgue_fraction(ind: &GridIndicator) -> f64 {
    ind.count() as f64 / ind.len() as f64
}

/// Parameters of the uniform cover.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxParams {
    pub kappa: f64,
    /// First level `i` of the intersection over `N`.
    pub start: u64,
    /// Horizon `M`.
    pub horizon: u64,
    /// Grid resolution `m`.
    pub resolution: u32,
}

impl ApproxParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!("kappa must be positive, got {}", self.kappa)));
        }
        if self.start < 1 || self.horizon < self.start {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= i <= M, got i = {}, M = {}",
                self.start, self.horizon
            )));
        }
        if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&self.resolution) {
            return Err(Error::InvalidArgument(format!(
                "resolution must lie in {MIN_RESOLUTION}..={MAX_RESOLUTION}"
            )));
        }
        Ok(())
    }
}

/// Radii `rho_N = N^{-kappa}` in binary64, made nonincreasing.
#[derive(Clone, Debug)]
struct Radii {
    kappa: f64,
    last: f64,
}

impl Radii {
    fn new(kappa: f64) -> Self {
        Radii {
            kappa,
            last: f64::INFINITY,
        }
    }

    fn next(&mut self, n: u64) -> f64 {
        self.last = self.last.min((n as f64).powf(-self.kappa));
        self.last
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Rasterized `cap_{N=i}^{M} cup_{n=1}^{N} B(T^n x, N^{-kappa})` for the orbit
/// starting at its current index (taken as `n = 0`).
///
/// Each box keeps `h`, the smallest distance lower bound to an orbit point
/// seen so far; a box dies at the first level `N >= i` with `h >= rho_N`.
/// Orbit points farther than `rho_N` are never recorded, since radii only
/// shrink. Dead boxes are found with a max-heap keyed by `h`.
pub fn uniform_cover<O: Orbit>(orbit: &mut O, params: &ApproxParams) -> Result<GridIndicator> {
    params.validate()?;
    let mut grid = GridIndicator::full(params.resolution);
    let boxes = grid.len();
    let mut h = vec![f64::INFINITY; boxes];
    let mut heap = BinaryHeap::new();
    let mut radii = Radii::new(params.kappa);
    for n in 1..=params.horizon {
        orbit.advance()?;
        let (lo, hi) = orbit.enclosure();
        let rho = radii.next(n);
        let active = n > params.start;
        for j in grid.candidate_range(lo, hi, rho) {
            let d = grid.distance_lower_bound(j, lo, hi);
            if d < rho && d < h[j] && grid.get(j) {
                h[j] = d;
                if active {
                    heap.push(Entry(d, j));
                }
            }
        }
        if n == params.start {
            for (j, &hj) in h.iter().enumerate() {
                if hj >= rho {
                    grid.set(j, false);
                } else {
                    heap.push(Entry(hj, j));
                }
            }
        } else if active {
            while let Some(&Entry(top, j)) = heap.peek() {
                if top < rho {
                    break;
                }
                heap.pop();
                if grid.get(j) && h[j] == top {
                    grid.set(j, false);
                }
            }
        }
    }
    Ok(grid)
}

/// Rasterized `cup_{n=n_min}^{M} B(T^n x, n^{-kappa})`.
pub fn asymptotic_cover<O: Orbit>(orbit: &mut O, kappa: f64, n_min: u64, horizon: u64, resolution: u32) -> Result<GridIndicator> {
    ApproxParams {
        kappa,
        start: n_min.max(1),
        horizon,
        resolution,
    }
    .validate()?;
    let mut grid = GridIndicator::empty(resolution);
    let mut radii = Radii::new(kappa);
    for n in 1..=horizon {
        orbit.advance()?;
        let rho = radii.next(n);
        if n < n_min {
            continue;
        }
        let (lo, hi) = orbit.enclosure();
        for j in grid.candidate_range(lo, hi, rho) {
            if grid.distance_lower_bound(j, lo, hi) < rho {
                grid.set(j, true);
            }
        }
    }
    Ok(grid)
}

/// [`uniform_cover`] for a rational starting point.
pub fn uniform_cover_exact(map: &MarkovMap, x: &Rational, params: &ApproxParams) -> Result<GridIndicator> {
    uniform_cover(&mut ExactOrbit::new(map, x.clone())?, params)
}

/// [`uniform_cover`] for a `mu`-typical point realized by its sampled
/// itinerary on the given stream.
pub fn uniform_cover_sampled(model: &GibbsModel, params: &ApproxParams, seed: u64, stream: u64) -> Result<GridIndicator> {
    let sampler = ChainSampler::new(model)?;
    uniform_cover(&mut SampledOrbit::new(model.map(), &sampler, seed, stream), params)
}

/// Least-squares fit of `log2(count)` against `m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Box-counting slope across resolutions. Equal counts give slope 0.
pub fn box_dimension_fit(indicators: &[GridIndicator]) -> Result<BoxFit> {
    if indicators.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 resolutions, got {}",
            indicators.len()
        )));
    }
    if indicators.iter().any(|i| i.count() == 0) {
        return Err(Error::DegenerateFit("an indicator has no set boxes".into()));
    }
    let pts: Vec<(f64, f64)> = indicators
        .iter()
        .map(|i| (i.resolution() as f64, (i.count() as f64).log2()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all resolutions are equal".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(BoxFit {
        slope,
        intercept,
        residual,
    })
}

/// Outcome of the finite inclusion check.
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionReport {
    /// Boxes of `U(x)` at distance at least `i^{-kappa}` from `Tx`.
    pub checked: usize,
    /// Those boxes missing from `U(Tx)`.
    pub violations: usize,
}

impl InclusionReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Every box of `U(x; i, M)` whose distance from `Tx` is at least
/// `rho_i = i^{-kappa}` must belong to `U(Tx; i, M)`: at each level `N` its
/// witness `n` cannot be 1, so `n - 1` is a witness for `Tx`.
pub fn inclusion_check(map: &MarkovMap, x: &Rational, params: &ApproxParams) -> Result<InclusionReport> {
    let ux = uniform_cover_exact(map, x, params)?;
    let tx = map.apply(x);
    let utx = uniform_cover_exact(map, &tx, params)?;
    let (lo, hi) = crate::orbit::enclose(&tx);
    let rho_i = {
        let mut r = Radii::new(params.kappa);
        (1..=params.start).map(|n| r.next(n)).last().unwrap()
    };
    let mut checked = 0;
    let mut violations = 0;
    for j in ux.iter_ones() {
        if ux.distance_lower_bound(j, lo, hi) >= rho_i {
            checked += 1;
            if !utx.get(j) {
                violations += 1;
            }
        }
    }
    Ok(InclusionReport { checked, violations })
}

/// Parameters of the cover-growth experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverGrowthParams {
    pub l: u32,
    pub a: f64,
    pub b: f64,
    pub kappa: f64,
    pub i_max: u32,
    /// Raster resolution `R` of `A_n` and `G_{l,i}`.
    pub resolution: u32,
    /// Number of dyadic radii `2^{-n'}`, `n' = n+1, ...`, tested for `A_n`.
    pub radius_levels: u32,
    /// Largest word length used to estimate the Gibbs constant.
    pub gamma_depth: usize,
}

impl CoverGrowthParams {
    pub fn new(l: u32, a: f64, b: f64, kappa: f64, i_max: u32) -> Self {
        CoverGrowthParams {
            l,
            a,
            b,
            kappa,
            i_max,
            resolution: 20,
            radius_levels: 6,
            gamma_depth: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverLevel {
    pub i: u32,
    pub theta: u32,
    /// `N_i = #S_i`.
    pub count: u64,
    /// `M_i`, the number of `2^{i-1} < k <= 2^i` with `T^k x` in `hat G_{l,i-1}`;
    /// absent at `i = l`.
    pub new_points: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverGrowth {
    pub n: u32,
    pub gamma: f64,
    /// `gamma^3 12^b 2^{(1 - b kappa) l}`.
    pub epsilon: f64,
    pub levels: Vec<CoverLevel>,
    /// `N_{i+1} <= N_i + M_{i+1}` at every step.
    pub recursion_holds: bool,
}

impl CoverGrowth {
    /// `N_{i+1} / N_i`, `NaN` where `N_i = 0`.
    pub fn growth_ratios(&self) -> Vec<f64> {
        self.levels
            .windows(2)
            .map(|w| {
                if w[0].count == 0 {
                    f64::NAN
                } else {
                    w[1].count as f64 / w[0].count as f64
                }
            })
            .collect()
    }
}

/// `theta_j = floor(kappa j log_{L_1} 2) + 1`.
pub fn theta(map: &MarkovMap, kappa: f64, j: u32) -> u32 {
    let l1 = crate::rational::to_f64(&map.min_expansion());
    (kappa * j as f64 * std::f64::consts::LN_2 / l1.ln()).floor() as u32 + 1
}

/// Largest `n <= l` with `12 2^{-kappa l} < 2^{-n}`.
pub fn scale_index(kappa: f64, l: u32) -> Option<u32> {
    let bound = kappa * l as f64 - 12f64.log2();
    let n = (bound.ceil() - 1.0).min(l as f64);
    (n >= 1.0).then_some(n as u32)
}

/// Raster on `2^R` cells with rank queries.
struct Raster {
    r: u32,
    bits: BitVec<u64, Lsb0>,
    prefix: Vec<u32>,
}

impl Raster {
    fn new(r: u32, bits: BitVec<u64, Lsb0>) -> Self {
        let mut prefix = Vec::with_capacity(bits.as_raw_slice().len() + 1);
        let mut total = 0u32;
        prefix.push(0);
        for w in bits.as_raw_slice() {
            total += w.count_ones();
            prefix.push(total);
        }
        Raster { r, bits, prefix }
    }

    fn rank(&self, pos: usize) -> u32 {
        let (w, b) = (pos / 64, pos % 64);
        let mut c = self.prefix[w];
        if b > 0 {
            c += (self.bits.as_raw_slice()[w] & ((1u64 << b) - 1)).count_ones();
        }
        c
    }

    /// Whether any set cell meets `[lo, hi]`.
    fn meets(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = cell_range(self.r, lo, hi);
        a <= b && self.rank(b + 1) > self.rank(a)
    }
}

fn cell_range(r: u32, lo: f64, hi: f64) -> (usize, usize) {
    let scale = (1u64 << r) as f64;
    let last = (1usize << r) - 1;
    let a = (lo.max(0.0) * scale).floor() as usize;
    let b = ((hi.min(1.0) * scale).floor() as usize).min(last);
    (a.min(last), b)
}

/// Lazily evaluated raster of `A_n`: cell centre `y` is kept when
/// `mu(B(y, r)) < r^b` for `r = 2^{-n'}`, `n' = n+1 ..= n+radius_levels`,
/// with ball masses bounded above by the cylinders of generation
/// `floor(n' log 2 / log L_2)` containing `y - r`, `y`, `y + r`.
struct ScaleSet<'a> {
    model: &'a GibbsModel,
    n: u32,
    b: f64,
    levels: u32,
    r: u32,
    log_l2: f64,
    // 0 unknown, 1 in, 2 out
    state: Vec<u8>,
}

impl ScaleSet<'_> {
    fn contains(&mut self, cell: usize) -> bool {
        match self.state[cell] {
            1 => return true,
            2 => return false,
            _ => {}
        }
        let y = (cell as f64 + 0.5) / (1u64 << self.r) as f64;
        let map = self.model.map();
        let inside = (self.n + 1..=self.n + self.levels).all(|np| {
            let radius = (-(np as f64)).exp2();
            let generation = ((np as f64 * std::f64::consts::LN_2 / self.log_l2).floor() as usize).max(1);
            let mut words: Vec<Vec<Symbol>> = [y - radius, y, y + radius]
                .iter()
                .filter(|p| (0.0..=1.0).contains(*p))
                .map(|&p| map.locate_f64(p, generation).0)
                .collect();
            words.dedup();
            let mass: f64 = words.iter().map(|w| self.model.measure(w)).sum();
            mass < radius.powf(self.b)
        });
        self.state[cell] = if inside { 1 } else { 2 };
        inside
    }

    fn meets(&mut self, lo: f64, hi: f64) -> bool {
        let (a, b) = cell_range(self.r, lo, hi);
        (a..=b).any(|c| self.contains(c))
    }
}

/// `I_j(z)` for `z` with itinerary `word` (of length `theta_j`): the union of
/// generation-`theta_j` cylinders within `2^{-kappa j}` of the cylinder of `z`.
fn neighbourhood(map: &MarkovMap, word: &[Symbol], radius: f64) -> (f64, f64) {
    let g = word.len();
    let (cl, cr) = map.cylinder_f64(word);
    let left = if cl - radius <= 0.0 {
        0.0
    } else {
        map.locate_f64(cl - radius, g).1
    };
    let right = if cr + radius >= 1.0 {
        1.0
    } else {
        let (_, jl, jr) = map.locate_f64(cr + radius, g);
        if jl >= cr + radius {
            cr + radius
        } else {
            jr
        }
    };
    (left, right)
}

/// The surviving-neighbourhood counts `N_l, ..., N_{i_max}` for the orbit with
/// itinerary `itinerary` (which must have length at least
/// `2^{i_max} + theta_{i_max} + 1`; symbol `k` starts `T^k x`).
pub fn cover_growth(model: &GibbsModel, itinerary: &[Symbol], params: &CoverGrowthParams) -> Result<CoverGrowth> {
    let p = params;
    if !(1.0 / p.kappa < p.b && p.b < p.a) {
        return Err(Error::ParameterOrder(format!(
            "need 1/kappa < b < a, got 1/kappa = {}, b = {}, a = {}",
            1.0 / p.kappa,
            p.b,
            p.a
        )));
    }
    if p.i_max < p.l {
        return Err(Error::ParameterOrder(format!("i_max {} is below l {}", p.i_max, p.l)));
    }
    let n = scale_index(p.kappa, p.l).ok_or_else(|| {
        Error::ParameterOrder(format!("no n >= 1 satisfies 12 2^(-kappa l) < 2^(-n) for l = {}", p.l))
    })?;
    if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&p.resolution) {
        return Err(Error::InvalidArgument(format!(
            "resolution must lie in {MIN_RESOLUTION}..={MAX_RESOLUTION}"
        )));
    }
    let map = model.map();
    let theta_max = theta(map, p.kappa, p.i_max) as usize;
    let needed = (1usize << p.i_max) + theta_max + 1;
    if itinerary.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "itinerary has {} symbols, need {needed}",
            itinerary.len()
        )));
    }
    map.check_word(&itinerary[..needed])?;
    let gamma = thermo::gibbs_constant(model, p.gamma_depth)?;
    let epsilon = gamma.powi(3) * 12f64.powf(p.b) * (2f64).powf((1.0 - p.b * p.kappa) * p.l as f64);
    let log_l2 = crate::rational::to_f64(&map.max_expansion()).ln();
    let mut scale_set = ScaleSet {
        model,
        n,
        b: p.b,
        levels: p.radius_levels,
        r: p.resolution,
        log_l2,
        state: vec![0; 1usize << p.resolution],
    };
    let cells = 1usize << p.resolution;
    let kj = |j: u32| (-(p.kappa * j as f64)).exp2();
    let nbhd = |k: usize, j: u32| {
        let th = theta(map, p.kappa, j) as usize;
        neighbourhood(map, &itinerary[k..k + th], kj(j))
    };
    let mark = |bits: &mut BitVec<u64, Lsb0>, lo: f64, hi: f64| {
        let (a, b) = cell_range(p.resolution, lo, hi);
        if a <= b {
            bits[a..=b].fill(true);
        }
    };

    // Level l: S_l = {k <= 2^l : I_l(T^k x) meets A_n}; G_{l,l} = A_n cap U_l.
    let mut union = bitvec![u64, Lsb0; 0; cells];
    let mut count = 0u64;
    for k in 1..=(1usize << p.l) {
        let (lo, hi) = nbhd(k, p.l);
        if scale_set.meets(lo, hi) {
            count += 1;
        }
        mark(&mut union, lo, hi);
    }
    let mut g_bits = bitvec![u64, Lsb0; 0; cells];
    for c in union.iter_ones() {
        if scale_set.contains(c) {
            g_bits.set(c, true);
        }
    }
    let mut g = Raster::new(p.resolution, g_bits);
    let mut levels = vec![CoverLevel {
        i: p.l,
        theta: theta(map, p.kappa, p.l),
        count,
        new_points: None,
    }];
    let mut recursion_holds = true;
    for i in p.l..p.i_max {
        let next = i + 1;
        let th_i = theta(map, p.kappa, i) as usize;
        let delta = 3.0 * kj(next);
        // M_{i+1}: points 2^i < k <= 2^{i+1} in hat G_{l,i}.
        let mut new_points = 0u64;
        for k in (1usize << i) + 1..=(1usize << next) {
            let (cl, cr) = map.cylinder_f64(&itinerary[k..k + th_i]);
            if g.meets(cl - delta, cr + delta) {
                new_points += 1;
            }
        }
        // S_{i+1} and U_{i+1}.
        let mut union = bitvec![u64, Lsb0; 0; cells];
        let mut count = 0u64;
        for k in 1..=(1usize << next) {
            let (lo, hi) = nbhd(k, next);
            if g.meets(lo, hi) {
                count += 1;
            }
            mark(&mut union, lo, hi);
        }
        let previous = levels.last().unwrap().count;
        recursion_holds &= count <= previous + new_points;
        let g_bits = g.bits.clone() & union;
        g = Raster::new(p.resolution, g_bits);
        levels.push(CoverLevel {
            i: next,
            theta: theta(map, p.kappa, next),
            count,
            new_points: Some(new_points),
        });
    }
    Ok(CoverGrowth {
        n,
        gamma,
        epsilon,
        levels,
        recursion_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn fraction_extremes() {
        assert_eq!(lebesgue_fraction(&GridIndicator::full(6)), 1.0);
        assert_eq!(lebesgue_fraction(&GridIndicator::empty(6)), 0.0);
        assert_eq!(GridIndicator::full(5).complement(), GridIndicator::empty(5));
    }

    #[test]
    fn tiny_kappa_covers_everything() {
        let map = MarkovMap::doubling();
        let params = ApproxParams {
            kappa: 0.01,
            start: 1,
            horizon: 1 << 10,
            resolution: 10,
        };
        let u = uniform_cover_exact(&map, &ratio(1, 3), &params).unwrap();
        assert_eq!(u.count(), 1 << 10);
    }

    #[test]
    fn fixed_point_cover_touches_zero_only() {
        let map = MarkovMap::doubling();
        let params = ApproxParams {
            kappa: 0.5,
            start: 4,
            horizon: 256,
            resolution: 10,
        };
        let u = uniform_cover_exact(&map, &int(0), &params).unwrap();
        let radius = 256f64.powf(-0.5);
        let touching = (radius * 1024.0).ceil() as usize;
        // The box starting exactly at the radius is kept by the outward margin.
        assert_eq!(u.count(), touching + 1);
        assert!(u.iter_ones().all(|j| j <= touching));
    }

    #[test]
    fn theta_and_scale_index() {
        let map = MarkovMap::doubling();
        assert_eq!(theta(&map, 1.0, 10), 11);
        assert_eq!(theta(&map, 1.0 / 0.7, 20), 29);
        // 12 2^{-l} < 2^{-n} iff n < l - log2 12 = l - 3.58...
        assert_eq!(scale_index(1.0, 10), Some(6));
        assert_eq!(scale_index(1.0, 4), None);
        assert_eq!(scale_index(3.0, 4), Some(4));
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(matches!(
            box_dimension_fit(&[GridIndicator::full(4), GridIndicator::full(5)]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(matches!(
            box_dimension_fit(&[GridIndicator::full(4), GridIndicator::full(5), GridIndicator::empty(6)]),
            Err(Error::DegenerateFit(_))
        ));
    }
}
