//! Locally constant potentials, topological pressure and Gibbs measures.
//!
//! A depth-`k` potential is a table over the admissible `k`-words. Its
//! transfer matrix lives on the `k`-block state space: states are admissible
//! `k`-words and `u -> v` is an edge when `v` is `u` shifted by one symbol.
//! Pressure is the log of the Perron root; the Gibbs measure is the Markov
//! measure built from the Perron vectors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Perron};
use crate::map::{MarkovMap, Symbol, Word};
use crate::parallel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    Table,
    NegLogDerivative,
}

/// A real function of the first `depth` itinerary symbols.
#[derive(Clone, Debug)]
pub struct Potential {
    depth: usize,
    symbols: usize,
    words: Vec<Word>,
    values: Vec<f64>,
    // Base-Q code of a k-word -> state index, or u32::MAX if inadmissible.
    lookup: Vec<u32>,
    kind: PotentialKind,
}

fn word_code(symbols: &[Symbol], q: usize) -> usize {
    symbols.iter().fold(0usize, |acc, &s| acc * q + s as usize)
}

impl Potential {
    /// Builds a potential from a function evaluated on every admissible `depth`-word.
    pub fn from_fn(map: &MarkovMap, depth: usize, f: impl Fn(&[Symbol]) -> f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidPotential("depth must be at least 1".into()));
        }
        let q = map.symbols();
        let size = (q as u128).checked_pow(depth as u32).filter(|&s| s <= 1 << 24).ok_or_else(|| {
            Error::InvalidPotential(format!("depth {depth} is too large for {q} symbols"))
        })?;
        let words = map.admissible_words(depth)?;
        let mut lookup = vec![u32::MAX; size as usize];
        let mut values = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            lookup[word_code(w.symbols(), q)] = i as u32;
            let v = f(w.symbols());
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!("value at {w} is not finite")));
            }
            values.push(v);
        }
        Ok(Potential {
            depth,
            symbols: q,
            words,
            values,
            lookup,
            kind: PotentialKind::Table,
        })
    }

    /// Builds a potential from explicit `(word, value)` entries, which must
    /// cover exactly the admissible `depth`-words.
    pub fn from_table(map: &MarkovMap, depth: usize, entries: impl IntoIterator<Item = (Word, f64)>) -> Result<Self> {
        let mut table: HashMap<Word, f64> = HashMap::new();
        for (w, v) in entries {
            if w.len() != depth {
                return Err(Error::InvalidPotential(format!("word {w} does not have length {depth}")));
            }
            if !map.is_admissible(w.symbols()) {
                return Err(Error::InvalidPotential(format!("word {w} is not admissible")));
            }
            if table.insert(w.clone(), v).is_some() {
                return Err(Error::InvalidPotential(format!("word {w} given twice")));
            }
        }
        let missing = map
            .admissible_words(depth)?
            .into_iter()
            .find(|w| !table.contains_key(w));
        if let Some(w) = missing {
            return Err(Error::InvalidPotential(format!("no value for admissible word {w}")));
        }
        Potential::from_fn(map, depth, |s| table[&Word::from(s)])
    }

    /// `-log|T'|`, depth 1.
    pub fn neg_log_derivative(map: &MarkovMap) -> Self {
        let mut p = Potential::from_fn(map, 1, |s| -map.log_abs_slope(s[0])).expect("depth 1 is valid");
        p.kind = PotentialKind::NegLogDerivative;
        p
    }

    /// Depth-1 potential `log p_k` for positive weights `p`.
    pub fn bernoulli(map: &MarkovMap, probabilities: &[f64]) -> Result<Self> {
        if probabilities.len() != map.symbols() {
            return Err(Error::InvalidPotential(format!(
                "{} weights for {} symbols",
                probabilities.len(),
                map.symbols()
            )));
        }
        if probabilities.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::InvalidPotential("weights must be positive".into()));
        }
        Potential::from_fn(map, 1, |s| probabilities[s[0] as usize].ln())
    }

    pub fn constant(map: &MarkovMap, depth: usize, value: f64) -> Result<Self> {
        Potential::from_fn(map, depth, |_| value)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    /// Admissible `depth`-words in lexicographic order.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// State index of an admissible `depth`-word.
    #[inline]
    pub fn index_of(&self, window: &[Symbol]) -> Option<usize> {
        if window.len() != self.depth || window.iter().any(|&s| s as usize >= self.symbols) {
            return None;
        }
        match self.lookup[word_code(window, self.symbols)] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }

    pub fn value(&self, window: &[Symbol]) -> Option<f64> {
        self.index_of(window).map(|i| self.values[i])
    }

    /// `phi + c`.
    pub fn shifted(&self, c: f64) -> Potential {
        let mut p = self.clone();
        p.values.iter_mut().for_each(|v| *v += c);
        p.kind = PotentialKind::Table;
        p
    }

    /// The same function viewed as a depth-`depth` potential.
    pub fn lift(&self, map: &MarkovMap, depth: usize) -> Result<Potential> {
        if depth < self.depth {
            return Err(Error::InvalidPotential(format!(
                "cannot lower depth {} to {depth}",
                self.depth
            )));
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        Potential::from_fn(map, depth, |w| self.value(&w[..self.depth]).expect("prefix is admissible"))
    }

    /// `a * self + b * other`, at the larger of the two depths.
    pub fn combine(&self, map: &MarkovMap, a: f64, other: &Potential, b: f64) -> Result<Potential> {
        let depth = self.depth.max(other.depth);
        Potential::from_fn(map, depth, |w| {
            a * self.value(&w[..self.depth]).expect("admissible") + b * other.value(&w[..other.depth]).expect("admissible")
        })
    }
}

/// `phi - P`.
pub fn normalize(potential: &Potential, pressure: f64) -> Potential {
    potential.shifted(-pressure)
}

/// `S_n phi` for a word of length `n`; the final `k - 1` windows are completed
/// with the lexicographically smallest admissible continuation.
pub fn birkhoff_sum(map: &MarkovMap, potential: &Potential, word: &Word) -> Result<f64> {
    let symbols = word.symbols();
    if symbols.is_empty() {
        return Ok(0.0);
    }
    map.check_word(symbols)?;
    let k = potential.depth();
    let mut padded = symbols.to_vec();
    for _ in 1..k {
        let last = *padded.last().unwrap();
        padded.push(map.successors(last)[0]);
    }
    Ok((0..symbols.len())
        .map(|j| potential.value(&padded[j..j + k]).expect("admissible window"))
        .sum())
}

/// States, edges and shifted weights of the `k`-block transfer matrix.
struct Transfer {
    successors: Vec<Vec<usize>>,
    weights: Matrix,
    shift: f64,
}

fn transfer(map: &MarkovMap, potential: &Potential) -> Transfer {
    let k = potential.depth();
    let n = potential.words().len();
    let shift = potential.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut weights = Matrix::zeros(n);
    let mut successors = Vec::with_capacity(n);
    let mut window = vec![0 as Symbol; k];
    for (u, word) in potential.words().iter().enumerate() {
        let s = word.symbols();
        window[..k - 1].copy_from_slice(&s[1..]);
        let w = (potential.values()[u] - shift).exp();
        let mut succ = Vec::new();
        for &next in map.successors(s[k - 1]) {
            window[k - 1] = next;
            let v = potential.index_of(&window).expect("shifted window is admissible");
            weights.set(u, v, w);
            succ.push(v);
        }
        successors.push(succ);
    }
    Transfer {
        successors,
        weights,
        shift,
    }
}

/// Topological pressure `P(phi)`, the log of the transfer matrix Perron root.
pub fn pressure(map: &MarkovMap, potential: &Potential) -> Result<f64> {
    let t = transfer(map, potential);
    Ok(linalg::spectral_radius(&t.weights)?.ln() + t.shift)
}

/// Gibbs measure of a locally constant potential, as a stationary Markov
/// chain on `k`-words.
#[derive(Clone, Debug)]
pub struct GibbsModel {
    map: MarkovMap,
    potential: Potential,
    pressure: f64,
    shift: f64,
    weights: Matrix,
    perron: Perron,
    lambda2: f64,
    successors: Vec<Vec<usize>>,
    stationary: Vec<f64>,
    transition: Matrix,
    log_transition: Matrix,
    log_stationary: Vec<f64>,
}

/// Builds the Gibbs model of `potential`; normalization is applied internally.
pub fn gibbs_model(map: &MarkovMap, potential: &Potential) -> Result<GibbsModel> {
    GibbsModel::new(map, potential)
}

impl GibbsModel {
    pub fn new(map: &MarkovMap, potential: &Potential) -> Result<Self> {
        let t = transfer(map, potential);
        let perron = linalg::perron(&t.weights)?;
        let lambda = perron.value;
        let pressure = lambda.ln() + t.shift;
        let lambda2 = linalg::second_eigenvalue_modulus(&t.weights, &perron);
        let n = t.successors.len();
        let stationary: Vec<f64> = (0..n).map(|u| perron.left[u] * perron.right[u]).collect();
        let mut transition = Matrix::zeros(n);
        let mut log_transition = Matrix::zeros(n);
        for (u, succ) in t.successors.iter().enumerate() {
            for &v in succ {
                let p = t.weights.get(u, v) * perron.right[v] / (lambda * perron.right[u]);
                transition.set(u, v, p);
                log_transition.set(u, v, p.ln());
            }
            for v in 0..n {
                if transition.get(u, v) == 0.0 {
                    log_transition.set(u, v, f64::NEG_INFINITY);
                }
            }
        }
        let log_stationary = stationary.iter().map(|p| p.ln()).collect();
        Ok(GibbsModel {
            map: map.clone(),
            potential: potential.clone(),
            pressure,
            shift: t.shift,
            weights: t.weights,
            perron,
            lambda2,
            successors: t.successors,
            stationary,
            transition,
            log_transition,
            log_stationary,
        })
    }

    pub fn map(&self) -> &MarkovMap {
        &self.map
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn depth(&self) -> usize {
        self.potential.depth()
    }

    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    /// Admissible `k`-words indexing the state space.
    pub fn states(&self) -> &[Word] {
        self.potential.words()
    }

    /// `W[u][v] = exp(phi(u) - c)` on edges, with `c = max phi`.
    pub fn weight_matrix(&self) -> &Matrix {
        &self.weights
    }

    /// Additive shift `c` used to form the weights; `P = log(lambda) + c`.
    pub fn weight_shift(&self) -> f64 {
        self.shift
    }

    pub fn perron(&self) -> &Perron {
        &self.perron
    }

    /// `|lambda_2| / lambda`, the predicted mixing rate.
    pub fn mixing_rate(&self) -> f64 {
        self.lambda2 / self.perron.value
    }

    pub fn successors(&self, state: usize) -> &[usize] {
        &self.successors[state]
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Row-stochastic transition matrix of the underlying chain.
    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    /// `sum_u pi_u f(u)`, the integral of a function of the first `k` symbols.
    pub fn integrate_states(&self, f: impl Fn(&[Symbol]) -> f64) -> f64 {
        self.states()
            .iter()
            .zip(&self.stationary)
            .map(|(w, p)| p * f(w.symbols()))
            .sum()
    }

    /// `log mu(I(w))`; `-inf` for inadmissible words.
    pub fn log_measure(&self, symbols: &[Symbol]) -> f64 {
        if symbols.is_empty() {
            return 0.0;
        }
        if !self.map.is_admissible(symbols) {
            return f64::NEG_INFINITY;
        }
        let k = self.depth();
        if symbols.len() < k {
            let total: f64 = self
                .states()
                .iter()
                .zip(&self.stationary)
                .filter(|(w, _)| w.symbols().starts_with(symbols))
                .map(|(_, p)| p)
                .sum();
            return total.ln();
        }
        let mut state = self.potential.index_of(&symbols[..k]).expect("admissible");
        let mut total = self.log_stationary[state];
        for j in 1..=symbols.len() - k {
            let next = self.potential.index_of(&symbols[j..j + k]).expect("admissible");
            total += self.log_transition.get(state, next);
            state = next;
        }
        total
    }

    /// `log P[u][v]` for the `k + 1`-word `window` with `u = window[..k]`,
    /// `v = window[1..]`.
    pub fn log_transition_step(&self, window: &[Symbol]) -> f64 {
        let k = self.depth();
        match (self.potential.index_of(&window[..k]), self.potential.index_of(&window[1..])) {
            (Some(u), Some(v)) => self.log_transition.get(u, v),
            _ => f64::NEG_INFINITY,
        }
    }

    /// `mu(I(w))`.
    pub fn measure(&self, symbols: &[Symbol]) -> f64 {
        self.log_measure(symbols).exp()
    }

    /// Log of the Gibbs ratio `mu(w) / exp(S_n phi - n P)`.
    pub fn log_gibbs_ratio(&self, word: &Word) -> Result<f64> {
        let s = birkhoff_sum(&self.map, &self.potential, word)?;
        Ok(self.log_measure(word.symbols()) - (s - word.len() as f64 * self.pressure))
    }
}

/// `mu(I(w))` with an admissibility check.
pub fn cylinder_measure(model: &GibbsModel, word: &Word) -> Result<f64> {
    model.map().check_word(word.symbols())?;
    Ok(model.measure(word.symbols()))
}

/// Largest `max(ratio, 1/ratio)` of Gibbs ratios over all admissible words of
/// length at most `n_max`. A lower bound for the Gibbs constant.
pub fn gibbs_constant(model: &GibbsModel, n_max: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        let words = model.map().admissible_words(n)?;
        let level = parallel::map_slice(&words, |w| model.log_gibbs_ratio(w).map(f64::abs))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        worst = worst.max(level);
    }
    Ok(worst.exp())
}

/// Result of the quasi-Bernoulli check.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiBernoulliReport {
    /// Largest `max(r, 1/r)` with `r = mu(I) / (mu(I') mu(I''))`.
    pub worst_ratio: f64,
    pub gamma: f64,
    pub splits_checked: u64,
    pub holds: bool,
}

/// Checks `gamma^{-3} mu(I') mu(I'') <= mu(I) <= gamma^3 mu(I') mu(I'')` over
/// every split `I = I' cap T^{-j} I''` of every admissible word of length
/// `2..=n_max`. Splits of admissible words are always admissible, so no
/// zero-mass case arises.
pub fn quasi_bernoulli_check(model: &GibbsModel, n_max: usize) -> Result<QuasiBernoulliReport> {
    let gamma = gibbs_constant(model, n_max)?;
    let mut worst = 0.0f64;
    let mut splits = 0u64;
    for n in 2..=n_max {
        let words = model.map().admissible_words(n)?;
        let level = parallel::map_slice(&words, |w| {
            let s = w.symbols();
            let full = model.log_measure(s);
            (1..n)
                .map(|j| (full - model.log_measure(&s[..j]) - model.log_measure(&s[j..])).abs())
                .fold(0.0f64, f64::max)
        });
        worst = level.into_iter().fold(worst, f64::max);
        splits += (words.len() * (n - 1)) as u64;
    }
    let worst_ratio = worst.exp();
    let bound = gamma.powi(3);
    Ok(QuasiBernoulliReport {
        worst_ratio,
        gamma,
        splits_checked: splits,
        holds: worst_ratio <= bound * (1.0 + 1e-12),
    })
}

/// Correlation decay of cylinder pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct MixingReport {
    pub lags: Vec<usize>,
    /// Per lag, the largest `|mu(A cap T^{-n} B) - mu(A) mu(B)| / mu(B)`.
    pub ratios: Vec<f64>,
    /// Fitted decay rate; `None` when every ratio is below the noise floor.
    pub beta: Option<f64>,
    /// Smallest `C` with `ratio_n <= C beta^n` on the sampled lags.
    pub constant: Option<f64>,
    /// `|lambda_2| / lambda` of the weight matrix.
    pub predicted_beta: f64,
}

/// Ratios below this are treated as roundoff when fitting the decay rate.
pub const MIXING_FLOOR: f64 = 1e-13;

/// All pairs of admissible words of length `len`.
pub fn default_sample_cylinders(model: &GibbsModel, len: usize) -> Result<Vec<(Word, Word)>> {
    let words = model.map().admissible_words(len.max(model.depth()))?;
    Ok(words
        .iter()
        .flat_map(|a| words.iter().map(move |b| (a.clone(), b.clone())))
        .collect())
}

/// Exact correlations `mu(A cap T^{-n} B)` from powers of the transition
/// matrix, and a log-linear fit of their nonincreasing envelope.
pub fn mixing_report(model: &GibbsModel, lags: &[usize], samples: &[(Word, Word)]) -> Result<MixingReport> {
    let k = model.depth();
    struct Pair {
        log_mu_a: f64,
        len_a: usize,
        last_a: usize,
        first_b: usize,
    }
    let mut pairs = Vec::with_capacity(samples.len());
    for (a, b) in samples {
        model.map().check_word(a.symbols())?;
        model.map().check_word(b.symbols())?;
        if a.len() < k || b.len() < k {
            return Err(Error::InvalidArgument(format!(
                "sample cylinders must have length at least the potential depth {k}"
            )));
        }
        let sa = a.symbols();
        pairs.push(Pair {
            log_mu_a: model.log_measure(sa),
            len_a: a.len(),
            last_a: model.potential.index_of(&sa[sa.len() - k..]).expect("admissible"),
            first_b: model.potential.index_of(&b.symbols()[..k]).expect("admissible"),
        });
    }
    let max_len_a = pairs.iter().map(|p| p.len_a).max().unwrap_or(0);
    if let Some(&bad) = lags.iter().find(|&&n| n < max_len_a) {
        return Err(Error::InvalidArgument(format!(
            "lag {bad} is shorter than the sampled cylinder length {max_len_a}"
        )));
    }
    let max_steps = lags.iter().copied().max().unwrap_or(0) + k;
    // powers[s] = P^s
    let mut powers = vec![Matrix::identity(model.transition.dim())];
    for s in 1..=max_steps {
        let next = powers[s - 1].mul(&model.transition);
        powers.push(next);
    }
    let ratios: Vec<f64> = lags
        .iter()
        .map(|&n| {
            pairs
                .iter()
                .map(|p| {
                    let steps = n - p.len_a + k;
                    let joint_over_product = powers[steps].get(p.last_a, p.first_b) / model.stationary[p.first_b];
                    p.log_mu_a.exp() * (joint_over_product - 1.0).abs()
                })
                .fold(0.0f64, f64::max)
        })
        .collect();
    let (beta, constant) = fit_decay(lags, &ratios);
    Ok(MixingReport {
        lags: lags.to_vec(),
        ratios,
        beta,
        constant,
        predicted_beta: model.mixing_rate(),
    })
}

/// Log-linear least squares on the nonincreasing envelope of the ratios above
/// the noise floor.
fn fit_decay(lags: &[usize], ratios: &[f64]) -> (Option<f64>, Option<f64>) {
    let mut order: Vec<usize> = (0..lags.len()).collect();
    order.sort_by_key(|&i| lags[i]);
    let mut envelope = vec![0.0; lags.len()];
    let mut running = 0.0f64;
    for &i in order.iter().rev() {
        running = running.max(ratios[i]);
        envelope[i] = running;
    }
    let points: Vec<(f64, f64)> = order
        .iter()
        .filter(|&&i| envelope[i] > MIXING_FLOOR)
        .map(|&i| (lags[i] as f64, envelope[i].ln()))
        .collect();
    if points.len() < 2 {
        return (None, None);
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let beta = (sxy / sxx).exp();
    let constant = lags
        .iter()
        .zip(ratios)
        .map(|(&n, &r)| r / beta.powi(n as i32))
        .fold(0.0f64, f64::max);
    (Some(beta), Some(constant))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli(p: f64) -> (MarkovMap, Potential) {
        let map = MarkovMap::doubling();
        let pot = Potential::bernoulli(&map, &[p, 1.0 - p]).unwrap();
        (map, pot)
    }

    #[test]
    fn birkhoff_sum_examples() {
        let (map, pot) = bernoulli(0.7);
        let s = birkhoff_sum(&map, &pot, &Word::new(vec![0, 0, 1])).unwrap();
        assert!((s - (2.0 * 0.7f64.ln() + 0.3f64.ln())).abs() < 1e-15);
        let leb = Potential::neg_log_derivative(&map);
        let s = birkhoff_sum(&map, &leb, &Word::new(vec![1, 0, 1, 1, 0])).unwrap();
        assert!((s + 5.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn padding_uses_smallest_continuation() {
        let map = MarkovMap::doubling();
        let pot = Potential::from_fn(&map, 2, |w| (w[0] * 2 + w[1]) as f64).unwrap();
        // windows 01, 10 (padded with 0)
        let s = birkhoff_sum(&map, &pot, &Word::new(vec![0, 1])).unwrap();
        assert_eq!(s, 1.0 + 2.0);
    }

    #[test]
    fn pressure_examples() {
        let (map, pot) = bernoulli(0.3);
        assert!(pressure(&map, &pot).unwrap().abs() < 1e-14);
        let leb = Potential::neg_log_derivative(&map);
        assert!(pressure(&map, &leb).unwrap().abs() < 1e-14);
        let zero = Potential::constant(&map, 1, 0.0).unwrap();
        assert!((pressure(&map, &zero).unwrap() - 2f64.ln()).abs() < 1e-14);
        let normalized = normalize(&zero, 2f64.ln());
        assert!(normalized.values().iter().all(|&v| (v + 2f64.ln()).abs() < 1e-15));
    }

    #[test]
    fn bernoulli_measure_is_product() {
        let (map, pot) = bernoulli(0.7);
        let model = gibbs_model(&map, &pot).unwrap();
        for w in map.admissible_words(8).unwrap() {
            let zeros = w.symbols().iter().filter(|&&s| s == 0).count() as i32;
            let expected = 0.7f64.powi(zeros) * 0.3f64.powi(8 - zeros);
            assert!((model.measure(w.symbols()) - expected).abs() < 1e-15);
        }
        assert!((gibbs_constant(&model, 8).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn short_words_use_marginals() {
        let map = MarkovMap::doubling();
        let pot = Potential::from_fn(&map, 2, |w| [0.9f64, 0.1, 0.5, 0.5][(w[0] * 2 + w[1]) as usize].ln()).unwrap();
        let model = gibbs_model(&map, &pot).unwrap();
        assert!((model.measure(&[0]) - 5.0 / 6.0).abs() < 1e-12);
        assert!((model.measure(&[0, 1]) - 5.0 / 60.0).abs() < 1e-12);
        assert!((model.mixing_rate() - 0.4).abs() < 1e-10);
    }

    #[test]
    fn bernoulli_correlations_vanish() {
        let (map, pot) = bernoulli(0.7);
        let model = gibbs_model(&map, &pot).unwrap();
        let samples = default_sample_cylinders(&model, 2).unwrap();
        let report = mixing_report(&model, &[2, 3, 5, 8], &samples).unwrap();
        assert!(report.ratios.iter().all(|&r| r <= 1e-15));
        assert_eq!(report.beta, None);
    }
}
