//! Piecewise-affine expanding Markov maps of the unit interval and their
//! symbolic dynamics.
//!
//! A map is given by a partition `0 = a_0 < a_1 < ... < a_Q = 1` and one
//! affine branch `x -> s_k x + t_k` per partition interval. Every branch
//! must expand (`|s_k| > 1`) and send its interval exactly onto a union of
//! consecutive partition intervals; the admissibility matrix records which
//! ones. All geometry is exact rational arithmetic. Points are assigned to
//! partition intervals with the half-open convention `[a_k, a_{k+1})`; the
//! point 1 belongs to the last interval.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::parallel;
use crate::rational::{self, Rational};

pub type Symbol = u16;

/// Default cap on the number of cylinders produced by a single enumeration.
pub const DEFAULT_CYLINDER_CAP: u128 = 10_000_000;

/// A finite sequence of partition symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, symbol: Symbol) {
        self.0.push(symbol);
    }

    /// The word with its first symbol removed (the itinerary of `T x`).
    pub fn shifted(&self) -> Word {
        Word(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }
}

impl From<&[Symbol]> for Word {
    fn from(symbols: &[Symbol]) -> Self {
        Word(symbols.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("-"))
        }
    }
}

/// Partition points `0 = a_0 < a_1 < ... < a_Q = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSpec {
    endpoints: Vec<Rational>,
}

impl PartitionSpec {
    pub fn new(endpoints: Vec<Rational>) -> Result<Self> {
        if endpoints.len() < 3 {
            return Err(Error::InvalidPartition(format!(
                "need at least two intervals, got {} endpoints",
                endpoints.len()
            )));
        }
        if !endpoints[0].is_zero() {
            return Err(Error::InvalidPartition("first endpoint must be 0".into()));
        }
        if !endpoints[endpoints.len() - 1].is_one() {
            return Err(Error::InvalidPartition("last endpoint must be 1".into()));
        }
        if let Some(pair) = endpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!(
                "endpoints not strictly increasing at {} >= {}",
                rational::display(&pair[0]),
                rational::display(&pair[1])
            )));
        }
        Ok(PartitionSpec { endpoints })
    }

    pub fn endpoints(&self) -> &[Rational] {
        &self.endpoints
    }

    /// Number of partition intervals `Q`.
    pub fn len(&self) -> usize {
        self.endpoints.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Half-open `[a_k, a_{k+1})` lookup, with 1 assigned to the last interval.
    pub fn symbol_of(&self, x: &Rational) -> Symbol {
        let q = self.len();
        let idx = self.endpoints[1..q].partition_point(|a| a <= x);
        idx as Symbol
    }
}

/// One affine branch `x -> slope * x + intercept` and the symbols its image covers.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSpec {
    pub slope: Rational,
    pub intercept: Rational,
    pub images: BTreeSet<usize>,
}

impl BranchSpec {
    pub fn new(slope: Rational, intercept: Rational, images: impl IntoIterator<Item = usize>) -> Self {
        BranchSpec {
            slope,
            intercept,
            images: images.into_iter().collect(),
        }
    }
}

/// Closure `[left, right]` of the set of points whose itinerary starts with
/// `word`. Which endpoints belong to the set depends on branch orientations;
/// use [`MarkovMap::in_cylinder`] for exact membership.
#[derive(Clone, Debug, PartialEq)]
pub struct Cylinder {
    pub word: Word,
    pub left: Rational,
    pub right: Rational,
}

impl Cylinder {
    pub fn generation(&self) -> usize {
        self.word.len()
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn midpoint(&self) -> Rational {
        (&self.left + &self.right) * rational::half()
    }
}

/// A validated expanding Markov map with piecewise-affine rational branches.
#[derive(Clone, Debug)]
pub struct MarkovMap {
    partition: PartitionSpec,
    branches: Vec<BranchSpec>,
    admissibility: Vec<Vec<bool>>,
    successors: Vec<Vec<Symbol>>,
    primitivity_exponent: usize,
    cylinder_cap: u128,
    endpoints_f: Vec<f64>,
    slopes_f: Vec<f64>,
    intercepts_f: Vec<f64>,
    log_abs_slopes: Vec<f64>,
    image_lengths: Vec<Rational>,
}

/// Validates the partition and branches and derives the admissibility data.
pub fn build_map(partition: PartitionSpec, branches: Vec<BranchSpec>) -> Result<MarkovMap> {
    MarkovMap::new(partition, branches)
}

impl MarkovMap {
    pub fn new(partition: PartitionSpec, branches: Vec<BranchSpec>) -> Result<Self> {
        let q = partition.len();
        if branches.len() != q {
            return Err(Error::InvalidPartition(format!(
                "{q} partition intervals but {} branches",
                branches.len()
            )));
        }
        let endpoints = partition.endpoints();
        let mut admissibility = vec![vec![false; q]; q];
        let mut image_lengths = Vec::with_capacity(q);
        for (k, branch) in branches.iter().enumerate() {
            if branch.slope.abs() <= Rational::one() {
                return Err(Error::NonExpanding {
                    symbol: k,
                    slope: rational::display(&branch.slope),
                });
            }
            let at_left = &branch.slope * &endpoints[k] + &branch.intercept;
            let at_right = &branch.slope * &endpoints[k + 1] + &branch.intercept;
            let (lo, hi) = if at_left < at_right {
                (at_left, at_right)
            } else {
                (at_right, at_left)
            };
            let find = |v: &Rational| endpoints.iter().position(|a| a == v);
            let (Some(p), Some(r)) = (find(&lo), find(&hi)) else {
                return Err(Error::NonMarkovImage {
                    symbol: k,
                    reason: format!(
                        "image [{}, {}] does not end at partition points",
                        rational::display(&lo),
                        rational::display(&hi)
                    ),
                });
            };
            let covered: BTreeSet<usize> = (p..r).collect();
            if covered != branch.images {
                return Err(Error::NonMarkovImage {
                    symbol: k,
                    reason: format!("declared images {:?} but the branch covers {:?}", branch.images, covered),
                });
            }
            admissibility[k][p..r].fill(true);
            image_lengths.push(hi - lo);
        }
        let primitivity_exponent = primitivity_exponent(&admissibility).ok_or(Error::NotCovering)?;
        let successors = admissibility
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(j, _)| j as Symbol)
                    .collect()
            })
            .collect();
        let endpoints_f = endpoints.iter().map(rational::to_f64).collect();
        let slopes_f: Vec<f64> = branches.iter().map(|b| rational::to_f64(&b.slope)).collect();
        let intercepts_f = branches.iter().map(|b| rational::to_f64(&b.intercept)).collect();
        let log_abs_slopes = slopes_f.iter().map(|s| s.abs().ln()).collect();
        Ok(MarkovMap {
            partition,
            branches,
            admissibility,
            successors,
            primitivity_exponent,
            cylinder_cap: DEFAULT_CYLINDER_CAP,
            endpoints_f,
            slopes_f,
            intercepts_f,
            log_abs_slopes,
            image_lengths,
        })
    }

    /// The doubling map `x -> 2x mod 1`.
    pub fn doubling() -> Self {
        let partition = PartitionSpec::new(vec![rational::int(0), rational::half(), rational::int(1)])
            .expect("valid partition");
        let branches = vec![
            BranchSpec::new(rational::int(2), rational::int(0), [0, 1]),
            BranchSpec::new(rational::int(2), rational::int(-1), [0, 1]),
        ];
        MarkovMap::new(partition, branches).expect("doubling map is valid")
    }

    /// Three intervals of length 1/3; branches 0 and 1 have slope 3 and full
    /// image, branch 2 has slope 2 and image `[0, 2/3]`, so the transition
    /// `2 -> 2` is forbidden.
    pub fn three_symbol_restricted() -> Self {
        let partition = PartitionSpec::new(vec![
            rational::int(0),
            rational::ratio(1, 3),
            rational::ratio(2, 3),
            rational::int(1),
        ])
        .expect("valid partition");
        let branches = vec![
            BranchSpec::new(rational::int(3), rational::int(0), [0, 1, 2]),
            BranchSpec::new(rational::int(3), rational::int(-1), [0, 1, 2]),
            BranchSpec::new(rational::int(2), rational::ratio(-4, 3), [0, 1]),
        ];
        MarkovMap::new(partition, branches).expect("three-symbol map is valid")
    }

    pub fn with_cylinder_cap(mut self, cap: u128) -> Self {
        self.cylinder_cap = cap;
        self
    }

    pub fn cylinder_cap(&self) -> u128 {
        self.cylinder_cap
    }

    /// Number of symbols `Q`.
    pub fn symbols(&self) -> usize {
        self.partition.len()
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }

    pub fn branches(&self) -> &[BranchSpec] {
        &self.branches
    }

    pub fn admissibility(&self) -> &[Vec<bool>] {
        &self.admissibility
    }

    pub fn admissible(&self, from: Symbol, to: Symbol) -> bool {
        self.admissibility[from as usize][to as usize]
    }

    pub fn successors(&self, symbol: Symbol) -> &[Symbol] {
        &self.successors[symbol as usize]
    }

    /// Smallest `R` such that every entry of `A^R` is positive.
    pub fn primitivity_exponent(&self) -> usize {
        self.primitivity_exponent
    }

    /// Minimal expansion rate `L_1 = min |s_k|`.
    pub fn min_expansion(&self) -> Rational {
        self.branches.iter().map(|b| b.slope.abs()).min().expect("nonempty")
    }

    /// Maximal expansion rate `L_2 = max |s_k|`.
    pub fn max_expansion(&self) -> Rational {
        self.branches.iter().map(|b| b.slope.abs()).max().expect("nonempty")
    }

    /// Bounded-distortion constant: `|I| * |(T^n)'| = |T(I(last symbol))|`
    /// lies in `[1/L, 1]`, so `L` is the inverse of the shortest branch image.
    pub fn distortion_constant(&self) -> Rational {
        let shortest = self.image_lengths.iter().min().expect("nonempty");
        Rational::one() / shortest
    }

    /// Length of the image `T(I(k))`.
    pub fn image_length(&self, symbol: Symbol) -> &Rational {
        &self.image_lengths[symbol as usize]
    }

    pub fn endpoints_f64(&self) -> &[f64] {
        &self.endpoints_f
    }

    pub fn slope_f64(&self, symbol: Symbol) -> f64 {
        self.slopes_f[symbol as usize]
    }

    pub fn intercept_f64(&self, symbol: Symbol) -> f64 {
        self.intercepts_f[symbol as usize]
    }

    /// `log |s_k|`, the value of `log |T'|` on the k-th interval.
    pub fn log_abs_slope(&self, symbol: Symbol) -> f64 {
        self.log_abs_slopes[symbol as usize]
    }

    pub fn symbol_of(&self, x: &Rational) -> Symbol {
        self.partition.symbol_of(x)
    }

    /// Half-open symbol lookup in floating point.
    pub fn symbol_of_f64(&self, x: f64) -> Symbol {
        let q = self.symbols();
        self.endpoints_f[1..q].partition_point(|&a| a <= x) as Symbol
    }

    /// One application of `T`.
    pub fn apply(&self, x: &Rational) -> Rational {
        let branch = &self.branches[self.symbol_of(x) as usize];
        &branch.slope * x + &branch.intercept
    }

    /// Inverse of branch `symbol`, defined on `T(I(symbol))`.
    pub fn inverse_branch(&self, symbol: Symbol, u: &Rational) -> Rational {
        let branch = &self.branches[symbol as usize];
        (u - &branch.intercept) / &branch.slope
    }

    pub fn is_admissible(&self, symbols: &[Symbol]) -> bool {
        let q = self.symbols() as Symbol;
        symbols.iter().all(|&s| s < q) && symbols.windows(2).all(|w| self.admissible(w[0], w[1]))
    }

    pub fn check_word(&self, symbols: &[Symbol]) -> Result<()> {
        if self.is_admissible(symbols) {
            Ok(())
        } else {
            Err(Error::InadmissibleWord(Word::from(symbols).to_string()))
        }
    }

    /// Cylinder of an admissible nonempty word, by composing inverse branches.
    pub fn cylinder(&self, word: &Word) -> Result<Cylinder> {
        let symbols = word.symbols();
        if symbols.is_empty() {
            return Err(Error::InadmissibleWord("empty word".into()));
        }
        self.check_word(symbols)?;
        let last = *symbols.last().unwrap() as usize;
        let endpoints = self.partition.endpoints();
        let mut lo = endpoints[last].clone();
        let mut hi = endpoints[last + 1].clone();
        for &s in symbols[..symbols.len() - 1].iter().rev() {
            let a = self.inverse_branch(s, &lo);
            let b = self.inverse_branch(s, &hi);
            (lo, hi) = if a < b { (a, b) } else { (b, a) };
        }
        Ok(Cylinder {
            word: word.clone(),
            left: lo,
            right: hi,
        })
    }

    /// Number of admissible words of length `n` (saturating).
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let q = self.symbols();
        let mut counts = vec![1u128; q];
        for _ in 1..n {
            let mut next = vec![0u128; q];
            for (from, row) in self.admissibility.iter().enumerate() {
                for (to, &ok) in row.iter().enumerate() {
                    if ok {
                        next[from] = next[from].saturating_add(counts[to]);
                    }
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        let count = self.count_words(n);
        if count > self.cylinder_cap {
            return Err(Error::GenerationTooLarge {
                generation: n,
                count,
                cap: self.cylinder_cap,
            });
        }
        Ok(())
    }

    /// All admissible words of length `n`, in lexicographic order.
    pub fn admissible_words(&self, n: usize) -> Result<Vec<Word>> {
        if n == 0 {
            return Err(Error::InvalidArgument("generation must be at least 1".into()));
        }
        self.check_cap(n)?;
        let mut out = Vec::with_capacity(self.count_words(n) as usize);
        let mut stack: Vec<Symbol> = Vec::with_capacity(n);
        self.words_dfs(n, &mut stack, &mut out);
        Ok(out)
    }

    fn words_dfs(&self, n: usize, stack: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        if stack.len() == n {
            out.push(Word::from(stack.as_slice()));
            return;
        }
        let candidates: Vec<Symbol> = match stack.last() {
            None => (0..self.symbols() as Symbol).collect(),
            Some(&s) => self.successors(s).to_vec(),
        };
        for s in candidates {
            stack.push(s);
            self.words_dfs(n, stack, out);
            stack.pop();
        }
    }

    /// All generation-`n` cylinders, in lexicographic word order, with exact
    /// endpoints.
    pub fn enumerate_cylinders(&self, n: usize) -> Result<Vec<Cylinder>> {
        if n == 0 {
            return Err(Error::InvalidArgument("generation must be at least 1".into()));
        }
        self.check_cap(n)?;
        let q = self.symbols();
        let per_prefix = parallel::map_indexed(q, |first| {
            let first = first as Symbol;
            let mut out = Vec::new();
            let (slope, intercept) = self.inverse_affine(first);
            let mut stack = vec![first];
            self.cylinders_dfs(n, &mut stack, &slope, &intercept, &mut out);
            out
        });
        Ok(per_prefix.into_iter().flatten().collect())
    }

    /// `(1/s, -t/s)`, the coefficients of the inverse branch.
    fn inverse_affine(&self, symbol: Symbol) -> (Rational, Rational) {
        let b = &self.branches[symbol as usize];
        (Rational::one() / &b.slope, -(&b.intercept / &b.slope))
    }

    // `slope`/`intercept` describe the composition of inverse branches along
    // `stack` (all symbols); the cylinder of `stack + [s]` is its image of I(s).
    fn cylinders_dfs(
        &self,
        n: usize,
        stack: &mut Vec<Symbol>,
        slope: &Rational,
        intercept: &Rational,
        out: &mut Vec<Cylinder>,
    ) {
        let endpoints = self.partition.endpoints();
        if stack.len() == n {
            // Only reached for n == 1.
            let s = stack[0] as usize;
            out.push(Cylinder {
                word: Word::from(stack.as_slice()),
                left: endpoints[s].clone(),
                right: endpoints[s + 1].clone(),
            });
            return;
        }
        let last = *stack.last().unwrap();
        for &s in self.successors(last) {
            stack.push(s);
            if stack.len() == n {
                let a = slope * &endpoints[s as usize] + intercept;
                let b = slope * &endpoints[s as usize + 1] + intercept;
                let (left, right) = if a < b { (a, b) } else { (b, a) };
                out.push(Cylinder {
                    word: Word::from(stack.as_slice()),
                    left,
                    right,
                });
            } else {
                let (inv_slope, inv_intercept) = self.inverse_affine(s);
                let next_slope = slope * &inv_slope;
                let next_intercept = slope * &inv_intercept + intercept;
                self.cylinders_dfs(n, stack, &next_slope, &next_intercept, out);
            }
            stack.pop();
        }
    }

    /// Whether the itinerary of `x` starts with the cylinder's word.
    pub fn in_cylinder(&self, cylinder: &Cylinder, x: &Rational) -> bool {
        &cylinder.left <= x && x <= &cylinder.right && self.locate(x, cylinder.generation()) == cylinder.word
    }

    /// The itinerary `(i_1, ..., i_n)` of `x`, i.e. the word of `I_n(x)`.
    ///
    /// Symbols follow the half-open partition. A decreasing branch maps the
    /// left end of its interval onto a partition endpoint that its image does
    /// not cover, so orbits through such endpoints can yield inadmissible words.
    pub fn locate(&self, x: &Rational, n: usize) -> Word {
        let mut word = Vec::with_capacity(n);
        let mut point = x.clone();
        for step in 0..n {
            let s = self.symbol_of(&point);
            word.push(s);
            if step + 1 < n {
                let b = &self.branches[s as usize];
                point = &b.slope * &point + &b.intercept;
            }
        }
        Word(word)
    }

    /// `|(T^n)'|` on the cylinder of `word`, i.e. the product of `|s_{i_j}|`.
    pub fn derivative_product(&self, word: &Word) -> Result<Rational> {
        self.check_word(word.symbols())?;
        Ok(word
            .symbols()
            .iter()
            .fold(Rational::one(), |acc, &s| acc * self.branches[s as usize].slope.abs()))
    }

    /// Binary64 endpoints of the cylinder of an admissible word.
    pub fn cylinder_f64(&self, symbols: &[Symbol]) -> (f64, f64) {
        let last = *symbols.last().expect("nonempty word") as usize;
        let (mut lo, mut hi) = (self.endpoints_f[last], self.endpoints_f[last + 1]);
        for &s in symbols[..symbols.len() - 1].iter().rev() {
            let (t, sl) = (self.intercepts_f[s as usize], self.slopes_f[s as usize]);
            let (a, b) = ((lo - t) / sl, (hi - t) / sl);
            (lo, hi) = if a < b { (a, b) } else { (b, a) };
        }
        (lo, hi)
    }

    /// Generation-`n` cylinder containing `p` in binary64, found by descending
    /// the cylinder tree. Returns the word and its endpoints.
    pub fn locate_f64(&self, p: f64, n: usize) -> (Vec<Symbol>, f64, f64) {
        let p = p.clamp(0.0, 1.0);
        let first = self.symbol_of_f64(p);
        let mut word = vec![first];
        let (mut lo, mut hi) = (self.endpoints_f[first as usize], self.endpoints_f[first as usize + 1]);
        // cyl(word + s) = h(I(s)) with h(u) = slope * u + intercept.
        let (mut slope, mut intercept) = self.inverse_f64(first);
        for _ in 1..n {
            let last = *word.last().unwrap();
            let mut best: Option<(Symbol, f64, f64, f64)> = None;
            for &s in self.successors(last) {
                let a = slope * self.endpoints_f[s as usize] + intercept;
                let b = slope * self.endpoints_f[s as usize + 1] + intercept;
                let (cl, cr) = if a < b { (a, b) } else { (b, a) };
                let miss = if p < cl { cl - p } else if p >= cr { p - cr } else { -1.0 };
                if best.is_none_or(|(_, _, _, m)| miss < m) {
                    best = Some((s, cl, cr, miss));
                }
                if miss < 0.0 {
                    break;
                }
            }
            let (s, cl, cr, _) = best.expect("every symbol has a successor");
            word.push(s);
            (lo, hi) = (cl, cr);
            let (is, it) = self.inverse_f64(s);
            intercept += slope * it;
            slope *= is;
        }
        (word, lo, hi)
    }

    fn inverse_f64(&self, s: Symbol) -> (f64, f64) {
        let sl = self.slopes_f[s as usize];
        (1.0 / sl, -self.intercepts_f[s as usize] / sl)
    }

    /// Largest denominator bit length among the branch coefficients.
    pub fn coefficient_bits(&self) -> u64 {
        self.branches
            .iter()
            .flat_map(|b| [rational::denominator_bits(&b.slope), rational::denominator_bits(&b.intercept)])
            .max()
            .unwrap_or(0)
    }

    /// Smallest `K` with `L_1^{-K} <= 2^{-bits}`.
    pub fn generations_for_precision(&self, bits: u32) -> usize {
        let l1 = self.min_expansion().to_f64().unwrap_or(2.0);
        ((bits as f64) * std::f64::consts::LN_2 / l1.ln()).ceil() as usize
    }
}

/// Smallest `R <= (Q-1)^2 + 1` with `A^R` entrywise positive.
fn primitivity_exponent(adjacency: &[Vec<bool>]) -> Option<usize> {
    let q = adjacency.len();
    let bound = (q - 1) * (q - 1) + 1;
    let mut power = adjacency.to_vec();
    for r in 1..=bound {
        if power.iter().all(|row| row.iter().all(|&v| v)) {
            return Some(r);
        }
        let mut next = vec![vec![false; q]; q];
        for i in 0..q {
            for k in 0..q {
                if power[i][k] {
                    for j in 0..q {
                        next[i][j] |= adjacency[k][j];
                    }
                }
            }
        }
        power = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn w(symbols: &[Symbol]) -> Word {
        Word::from(symbols)
    }

    #[test]
    fn doubling_is_full_shift_with_exponent_one() {
        let map = MarkovMap::doubling();
        assert_eq!(map.primitivity_exponent(), 1);
        assert!(map.admissibility().iter().flatten().all(|&a| a));
    }

    #[test]
    fn restricted_three_symbol_map_exponent_from_matrix_powers() {
        let map = MarkovMap::three_symbol_restricted();
        // A has a zero at (2,2); A^2 is positive since 2 -> 0 -> 2.
        assert!(!map.admissible(2, 2));
        assert_eq!(map.primitivity_exponent(), 2);
    }

    #[test]
    fn contracting_slope_is_rejected() {
        let partition = PartitionSpec::new(vec![int(0), ratio(1, 2), int(1)]).unwrap();
        let branches = vec![
            BranchSpec::new(int(2), int(0), [0, 1]),
            BranchSpec::new(ratio(1, 2), ratio(1, 4), [0]),
        ];
        let err = build_map(partition, branches).unwrap_err();
        assert!(matches!(err, Error::NonExpanding { symbol: 1, .. }));
    }

    #[test]
    fn misaligned_image_is_rejected() {
        let partition = PartitionSpec::new(vec![int(0), ratio(1, 2), int(1)]).unwrap();
        let branches = vec![
            BranchSpec::new(int(2), int(0), [0, 1]),
            BranchSpec::new(int(3), ratio(-3, 2), [0, 1]),
        ];
        let err = build_map(partition, branches).unwrap_err();
        assert!(matches!(err, Error::NonMarkovImage { symbol: 1, .. }));
    }

    #[test]
    fn wrong_declared_images_are_rejected() {
        let partition = PartitionSpec::new(vec![int(0), ratio(1, 2), int(1)]).unwrap();
        let branches = vec![
            BranchSpec::new(int(2), int(0), [0]),
            BranchSpec::new(int(2), int(-1), [0, 1]),
        ];
        assert!(matches!(
            build_map(partition, branches),
            Err(Error::NonMarkovImage { symbol: 0, .. })
        ));
    }

    #[test]
    fn reducible_matrix_is_not_covering() {
        // Both branches map onto their own interval only... impossible with
        // expansion, so use four intervals split into two closed classes.
        let partition = PartitionSpec::new(vec![int(0), ratio(1, 4), ratio(1, 2), ratio(3, 4), int(1)]).unwrap();
        let branches = vec![
            BranchSpec::new(int(2), int(0), [0, 1]),
            BranchSpec::new(int(2), ratio(-1, 2), [0, 1]),
            BranchSpec::new(int(2), ratio(-1, 2), [2, 3]),
            BranchSpec::new(int(2), int(-1), [2, 3]),
        ];
        assert_eq!(build_map(partition, branches).unwrap_err(), Error::NotCovering);
    }

    #[test]
    fn partition_validation() {
        assert!(PartitionSpec::new(vec![int(0), int(1)]).is_err());
        assert!(PartitionSpec::new(vec![ratio(1, 3), ratio(1, 2), int(1)]).is_err());
        assert!(PartitionSpec::new(vec![int(0), ratio(1, 2), ratio(1, 2), int(1)]).is_err());
        assert!(PartitionSpec::new(vec![int(0), ratio(1, 2), ratio(9, 10)]).is_err());
    }

    #[test]
    fn negative_slopes_are_allowed() {
        // Tent-like map with slopes 2 and -2.
        let partition = PartitionSpec::new(vec![int(0), ratio(1, 2), int(1)]).unwrap();
        let branches = vec![
            BranchSpec::new(int(2), int(0), [0, 1]),
            BranchSpec::new(int(-2), int(2), [0, 1]),
        ];
        let map = build_map(partition, branches).unwrap();
        let c = map.cylinder(&w(&[1, 0])).unwrap();
        assert_eq!((c.left, c.right), (ratio(3, 4), int(1)));
    }

    #[test]
    fn doubling_generation_two_has_quarter_cylinders() {
        let map = MarkovMap::doubling();
        let cyls = map.enumerate_cylinders(2).unwrap();
        assert_eq!(cyls.len(), 4);
        for c in &cyls {
            assert_eq!(c.length(), ratio(1, 4));
        }
    }

    #[test]
    fn restricted_count_matches_matrix_power() {
        // Sum of the entries of A^4 for A = [[1,1,1],[1,1,1],[1,1,0]] is 164.
        let map = MarkovMap::three_symbol_restricted();
        assert_eq!(map.enumerate_cylinders(5).unwrap().len(), 164);
        assert_eq!(map.count_words(5), 164);
    }

    #[test]
    fn doubling_word_011_is_three_eighths_to_half() {
        let map = MarkovMap::doubling();
        let c = map.cylinder(&w(&[0, 1, 1])).unwrap();
        assert_eq!((c.left.clone(), c.right.clone()), (ratio(3, 8), ratio(1, 2)));
        let listed = map.enumerate_cylinders(3).unwrap();
        assert!(listed.contains(&c));
    }

    #[test]
    fn locate_examples() {
        let map = MarkovMap::doubling();
        assert_eq!(map.locate(&ratio(1, 3), 4), w(&[0, 1, 0, 1]));
        assert_eq!(map.locate(&int(0), 6), w(&[0; 6]));
        assert_eq!(map.locate(&ratio(1, 2), 3).symbols()[0], 1);
        let three = MarkovMap::three_symbol_restricted();
        assert_eq!(three.locate(&ratio(1, 3), 1), w(&[1]));
        assert_eq!(three.locate(&ratio(2, 3), 1), w(&[2]));
    }

    #[test]
    fn derivative_products() {
        let map = MarkovMap::doubling();
        assert_eq!(map.derivative_product(&w(&[0, 1, 1, 0])).unwrap(), int(16));
        let partition = PartitionSpec::new(vec![int(0), ratio(1, 3), int(1)]).unwrap();
        let branches = vec![
            BranchSpec::new(int(3), int(0), [0, 1]),
            BranchSpec::new(ratio(3, 2), ratio(-1, 2), [0, 1]),
        ];
        let mixed = build_map(partition, branches).unwrap();
        assert_eq!(mixed.derivative_product(&w(&[0, 1])).unwrap(), ratio(9, 2));
        for c in mixed.enumerate_cylinders(4).unwrap() {
            assert_eq!(c.length() * mixed.derivative_product(&c.word).unwrap(), int(1));
        }
        assert!(matches!(
            MarkovMap::three_symbol_restricted().derivative_product(&w(&[2, 2])),
            Err(Error::InadmissibleWord(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let map = MarkovMap::doubling().with_cylinder_cap(1000);
        assert!(map.enumerate_cylinders(9).is_ok());
        assert!(matches!(
            map.enumerate_cylinders(10),
            Err(Error::GenerationTooLarge { generation: 10, count: 1024, cap: 1000 })
        ));
    }

    #[test]
    fn word_display() {
        assert_eq!(w(&[0, 1, 2]).to_string(), "012");
        assert_eq!(w(&[1, 12]).to_string(), "1-12");
    }
}
