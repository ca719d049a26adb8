//! Orbits with certified ball membership.
//!
//! [`ExactOrbit`] iterates a rational point exactly. [`SampledOrbit`]
//! represents the point whose infinite itinerary is drawn from the Markov
//! chain of a Gibbs model; its orbit points are evaluated in binary64 by the
//! contracting backward recursion `z_n = g_{w_n}(z_{n+1})`, and any ball test
//! too close to call in floating point is settled with exact rational
//! cylinder intervals.

use num::Signed;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::map::{MarkovMap, Symbol, Word};
use crate::rational::{self, Rational};
use crate::thermo::GibbsModel;

/// Cap on the number of iterates any orbit may produce.
pub const ORBIT_CAP: u64 = 1 << 30;
/// Cap on the denominator size of exact orbit points.
pub const DENOMINATOR_CAP_BITS: u64 = 4096;
/// Half-width of the binary64 enclosure of a sampled orbit point.
pub const SAMPLED_ENCLOSURE: f64 = 1e-14;

const BLOCK: usize = 4096;
const MAX_REFINEMENT: usize = 1 << 14;

/// An open ball `B(center, radius)` with cached binary64 data.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: Rational,
    pub radius: Rational,
    center_f: f64,
    radius_f: f64,
}

impl Ball {
    pub fn new(center: Rational, radius: Rational) -> Self {
        let center_f = rational::to_f64(&center);
        let radius_f = rational::to_f64(&radius);
        Ball {
            center,
            radius,
            center_f,
            radius_f,
        }
    }

    /// Ball of radius `2^{-j}`.
    pub fn dyadic(center: Rational, j: u32) -> Self {
        let radius = Rational::new(1.into(), num::BigInt::from(1u8) << j);
        Ball::new(center, radius)
    }

    pub fn center_f64(&self) -> f64 {
        self.center_f
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius_f
    }

    /// Exact membership of a rational point.
    pub fn contains(&self, x: &Rational) -> bool {
        (x - &self.center).abs() < self.radius
    }

    /// Float decision for a point known to lie in `[lo, hi]`, or `None` if
    /// the enclosure straddles the boundary (with a rounding margin).
    fn decide(&self, lo: f64, hi: f64) -> Option<bool> {
        let margin = 4.0 * f64::EPSILON * (1.0 + self.center_f.abs());
        let a = self.center_f - self.radius_f;
        let b = self.center_f + self.radius_f;
        if lo > a + margin && hi < b - margin {
            Some(true)
        } else if hi < a - margin || lo > b + margin {
            Some(false)
        } else {
            None
        }
    }
}

/// A forward orbit `x, Tx, T^2 x, ...` positioned at some index.
pub trait Orbit {
    /// Index `n` of the current point `T^n x`.
    fn index(&self) -> u64;
    /// Moves to `T^{n+1} x`.
    fn advance(&mut self) -> Result<()>;
    /// Binary64 bounds `lo <= T^n x <= hi`.
    fn enclosure(&mut self) -> (f64, f64);
    /// Exact test `|T^n x - center| < radius`.
    fn in_open_ball(&mut self, ball: &Ball) -> Result<bool>;
    /// The first `len` itinerary symbols of the current point.
    fn current_itinerary(&mut self, len: usize) -> Vec<Symbol>;
}

/// Binary64 neighbours of the rounded value of `x`, which bracket `x`.
pub fn enclose(x: &Rational) -> (f64, f64) {
    let f = rational::to_f64(x);
    (f.next_down(), f.next_up())
}

/// Exact rational orbit.
#[derive(Clone, Debug)]
pub struct ExactOrbit<'a> {
    map: &'a MarkovMap,
    point: Rational,
    index: u64,
    enclosure: (f64, f64),
}

impl<'a> ExactOrbit<'a> {
    pub fn new(map: &'a MarkovMap, x: Rational) -> Result<Self> {
        if !rational::is_unit_interval(&x) {
            return Err(Error::InvalidArgument(format!(
                "orbit start {} is outside [0, 1]",
                rational::display(&x)
            )));
        }
        let enclosure = enclose(&x);
        Ok(ExactOrbit {
            map,
            point: x,
            index: 0,
            enclosure,
        })
    }

    pub fn point(&self) -> &Rational {
        &self.point
    }
}

impl Orbit for ExactOrbit<'_> {
    fn index(&self) -> u64 {
        self.index
    }

    fn advance(&mut self) -> Result<()> {
        if self.index >= ORBIT_CAP {
            return Err(Error::HorizonOverflow {
                horizon: self.index + 1,
                cap: ORBIT_CAP,
            });
        }
        self.point = self.map.apply(&self.point);
        let bits = rational::denominator_bits(&self.point);
        if bits > DENOMINATOR_CAP_BITS {
            return Err(Error::DenominatorOverflow {
                bits,
                cap: DENOMINATOR_CAP_BITS,
            });
        }
        self.index += 1;
        self.enclosure = enclose(&self.point);
        Ok(())
    }

    fn enclosure(&mut self) -> (f64, f64) {
        self.enclosure
    }

    fn in_open_ball(&mut self, ball: &Ball) -> Result<bool> {
        Ok(ball.contains(&self.point))
    }

    fn current_itinerary(&mut self, len: usize) -> Vec<Symbol> {
        self.map.locate(&self.point, len).into_inner()
    }
}

/// Sampling tables for the stationary Markov chain of a Gibbs model.
#[derive(Clone, Debug)]
pub struct ChainSampler {
    depth: usize,
    states: Vec<Vec<Symbol>>,
    initial: WeightedIndex<f64>,
    rows: Vec<(Vec<usize>, WeightedIndex<f64>)>,
}

impl ChainSampler {
    pub fn new(model: &GibbsModel) -> Result<Self> {
        let bad = |e: rand::distr::weighted::Error| Error::InvalidArgument(format!("sampling weights: {e}"));
        let initial = WeightedIndex::new(model.stationary().iter().copied()).map_err(bad)?;
        let mut rows = Vec::with_capacity(model.states().len());
        for u in 0..model.states().len() {
            let succ = model.successors(u).to_vec();
            let weights: Vec<f64> = succ.iter().map(|&v| model.transition().get(u, v)).collect();
            rows.push((succ, WeightedIndex::new(weights).map_err(bad)?));
        }
        Ok(ChainSampler {
            depth: model.depth(),
            states: model.states().iter().map(|w| w.symbols().to_vec()).collect(),
            initial,
            rows,
        })
    }

    /// Deterministic generator for `(seed, stream)`.
    pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng
    }

    pub fn stream(&self, seed: u64, stream: u64) -> SymbolStream {
        SymbolStream {
            sampler: self.clone(),
            rng: ChainSampler::rng(seed, stream),
            state: None,
            pending: Vec::new(),
        }
    }

    /// The first `len` symbols of a sampled itinerary.
    pub fn sample_word(&self, len: usize, seed: u64, stream: u64) -> Word {
        Word::new(self.stream(seed, stream).take(len).collect())
    }
}

/// Infinite itinerary drawn from a [`ChainSampler`].
#[derive(Clone, Debug)]
pub struct SymbolStream {
    sampler: ChainSampler,
    rng: ChaCha8Rng,
    state: Option<usize>,
    pending: Vec<Symbol>,
}

impl Iterator for SymbolStream {
    type Item = Symbol;

    fn next(&mut self) -> Option<Symbol> {
        if let Some(s) = self.pending.pop() {
            return Some(s);
        }
        let s = &self.sampler;
        match self.state {
            None => {
                let u = s.initial.sample(&mut self.rng);
                self.state = Some(u);
                self.pending = s.states[u].iter().rev().copied().collect();
                self.pending.pop()
            }
            Some(u) => {
                let (succ, dist) = &s.rows[u];
                let v = succ[dist.sample(&mut self.rng)];
                self.state = Some(v);
                Some(s.states[v][s.depth - 1])
            }
        }
    }
}

/// Orbit of the point with a sampled infinite itinerary.
#[derive(Clone, Debug)]
pub struct SampledOrbit<'a> {
    map: &'a MarkovMap,
    stream: SymbolStream,
    // symbols[i] is w_{symbols_base + i}
    symbols: Vec<Symbol>,
    symbols_base: u64,
    // positions[i] approximates T^{positions_base + i} x
    positions: Vec<f64>,
    positions_base: u64,
    index: u64,
    guard: usize,
}

impl<'a> SampledOrbit<'a> {
    pub fn new(map: &'a MarkovMap, sampler: &ChainSampler, seed: u64, stream: u64) -> Self {
        let guard = map.generations_for_precision(60).max(8);
        SampledOrbit {
            map,
            stream: sampler.stream(seed, stream),
            symbols: Vec::new(),
            symbols_base: 0,
            positions: Vec::new(),
            positions_base: 0,
            index: 0,
            guard,
        }
    }

    fn ensure_symbols(&mut self, upto: u64) {
        while self.symbols_base + (self.symbols.len() as u64) < upto {
            let s = self.stream.next().expect("infinite stream");
            self.symbols.push(s);
        }
    }

    fn symbol(&self, n: u64) -> Symbol {
        self.symbols[(n - self.symbols_base) as usize]
    }

    /// Symbols `w_n .. w_{n+len}` of the itinerary, sampling as needed.
    pub fn itinerary(&mut self, n: u64, len: usize) -> Vec<Symbol> {
        assert!(n >= self.symbols_base, "itinerary before the retained window");
        self.ensure_symbols(n + len as u64);
        (n..n + len as u64).map(|i| self.symbol(i)).collect()
    }

    fn fill_block(&mut self, start: u64) {
        let end = start + BLOCK as u64;
        let last = end + self.guard as u64;
        // Drop symbols that can no longer be needed.
        let keep_from = start.min(self.index);
        if keep_from > self.symbols_base + (1 << 16) {
            let drop = (keep_from - self.symbols_base) as usize;
            self.symbols.drain(..drop);
            self.symbols_base = keep_from;
        }
        self.ensure_symbols(last);
        let map = self.map;
        let ends = map.endpoints_f64();
        let tail = self.symbol(last - 1) as usize;
        let mut z = 0.5 * (ends[tail] + ends[tail + 1]);
        self.positions.clear();
        self.positions.resize(BLOCK, 0.0);
        for n in (start..last - 1).rev() {
            let s = self.symbol(n);
            z = (z - map.intercept_f64(s)) / map.slope_f64(s);
            if n < end {
                self.positions[(n - start) as usize] = z;
            }
        }
        self.positions_base = start;
    }

    /// Binary64 approximation of `T^n x` at the current index.
    pub fn position(&mut self) -> f64 {
        let n = self.index;
        if self.positions.is_empty() || n < self.positions_base || n >= self.positions_base + BLOCK as u64 {
            self.fill_block(n);
        }
        self.positions[(n - self.positions_base) as usize]
    }

    /// Exact cylinder of `w_n .. w_{n+len}`.
    fn cylinder_at(&mut self, n: u64, len: usize) -> (Rational, Rational) {
        let word = Word::new(self.itinerary(n, len));
        let c = self.map.cylinder(&word).expect("sampled itinerary is admissible");
        (c.left, c.right)
    }
}

impl Orbit for SampledOrbit<'_> {
    fn index(&self) -> u64 {
        self.index
    }

    fn advance(&mut self) -> Result<()> {
        if self.index >= ORBIT_CAP {
            return Err(Error::HorizonOverflow {
                horizon: self.index + 1,
                cap: ORBIT_CAP,
            });
        }
        self.index += 1;
        Ok(())
    }

    fn enclosure(&mut self) -> (f64, f64) {
        let z = self.position();
        (z - SAMPLED_ENCLOSURE, z + SAMPLED_ENCLOSURE)
    }

    fn in_open_ball(&mut self, ball: &Ball) -> Result<bool> {
        let z = self.position();
        if let Some(d) = ball.decide(z - SAMPLED_ENCLOSURE, z + SAMPLED_ENCLOSURE) {
            return Ok(d);
        }
        let n = self.index;
        let lo_edge = &ball.center - &ball.radius;
        let hi_edge = &ball.center + &ball.radius;
        let mut len = 64usize;
        loop {
            let (left, right) = self.cylinder_at(n, len);
            if left > lo_edge && right < hi_edge {
                return Ok(true);
            }
            if right <= lo_edge || left >= hi_edge {
                return Ok(false);
            }
            if len >= MAX_REFINEMENT {
                // A tie at this depth has probability zero; settle on the midpoint.
                return Ok(ball.contains(&((left + right) * rational::half())));
            }
            len *= 2;
        }
    }

    fn current_itinerary(&mut self, len: usize) -> Vec<Symbol> {
        self.itinerary(self.index, len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::thermo::Potential;

    #[test]
    fn exact_orbit_of_one_third() {
        let map = MarkovMap::doubling();
        let mut o = ExactOrbit::new(&map, ratio(1, 3)).unwrap();
        o.advance().unwrap();
        assert_eq!(o.point(), &ratio(2, 3));
        o.advance().unwrap();
        assert_eq!(o.point(), &ratio(1, 3));
        let (lo, hi) = o.enclosure();
        assert!(lo < 1.0 / 3.0 + 1e-17 && hi > 1.0 / 3.0 - 1e-17 && lo < hi);
    }

    #[test]
    fn denominators_are_capped() {
        // Slope 3/2 on the right branch multiplies denominators by 2.
        let partition = crate::map::PartitionSpec::new(vec![ratio(0, 1), ratio(1, 3), ratio(1, 1)]).unwrap();
        let branches = vec![
            crate::map::BranchSpec::new(ratio(3, 1), ratio(0, 1), [0, 1]),
            crate::map::BranchSpec::new(ratio(3, 2), ratio(-1, 2), [0, 1]),
        ];
        let map = crate::map::build_map(partition, branches).unwrap();
        let mut o = ExactOrbit::new(&map, ratio(5, 7)).unwrap();
        let mut result = Ok(());
        for _ in 0..100_000 {
            result = o.advance();
            if result.is_err() {
                break;
            }
        }
        // Either the orbit hits a cycle with bounded denominators or overflows loudly.
        if let Err(e) = result {
            assert!(matches!(e, Error::DenominatorOverflow { .. }));
        }
    }

    #[test]
    fn sampled_positions_match_itinerary_cylinders() {
        let map = MarkovMap::doubling();
        let model = GibbsModel::new(&map, &Potential::bernoulli(&map, &[0.7, 0.3]).unwrap()).unwrap();
        let sampler = ChainSampler::new(&model).unwrap();
        let mut orbit = SampledOrbit::new(&map, &sampler, 11, 0);
        for _ in 0..10_000 {
            orbit.advance().unwrap();
            let n = orbit.index();
            let z = orbit.position();
            let (l, r) = orbit.cylinder_at(n, 30);
            let (l, r) = (rational::to_f64(&l), rational::to_f64(&r));
            assert!(l - 1e-14 <= z && z <= r + 1e-14, "n={n} z={z} [{l},{r}]");
        }
    }

    #[test]
    fn exact_fallback_agrees_with_float_away_from_boundary() {
        let map = MarkovMap::doubling();
        let model = GibbsModel::new(&map, &Potential::neg_log_derivative(&map)).unwrap();
        let sampler = ChainSampler::new(&model).unwrap();
        let mut orbit = SampledOrbit::new(&map, &sampler, 3, 1);
        orbit.advance().unwrap();
        let z = orbit.position();
        // Ball whose boundary sits exactly on the float value forces refinement.
        let center = rational::from_f64(z) + ratio(1, 8);
        let ball = Ball::new(center, ratio(1, 8));
        let inside = orbit.in_open_ball(&ball).unwrap();
        let (l, r) = orbit.cylinder_at(1, 200);
        let mid = (l + r) * rational::half();
        assert_eq!(inside, ball.contains(&mid));
    }

    #[test]
    fn streams_are_deterministic() {
        let map = MarkovMap::doubling();
        let model = GibbsModel::new(&map, &Potential::bernoulli(&map, &[0.7, 0.3]).unwrap()).unwrap();
        let sampler = ChainSampler::new(&model).unwrap();
        assert_eq!(sampler.sample_word(100, 5, 2), sampler.sample_word(100, 5, 2));
        assert_ne!(sampler.sample_word(100, 5, 2), sampler.sample_word(100, 5, 3));
    }
}
