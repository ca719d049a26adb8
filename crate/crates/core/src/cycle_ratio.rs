//! Minimum cycle ratio on a node-weighted digraph by parametric search.
//!
//! For node costs `c(u)` and positive node times `t(u)`, the minimum over
//! directed cycles of `sum c / sum t` is the largest `tau` such that the
//! weights `c(u) - tau t(u)` admit no negative cycle. Negative cycles are
//! found with Bellman-Ford from a virtual source.

/// Node-weighted digraph with adjacency lists.
#[derive(Clone, Debug)]
pub struct RatioGraph {
    pub successors: Vec<Vec<usize>>,
    pub cost: Vec<f64>,
    pub time: Vec<f64>,
}

fn has_negative_cycle(g: &RatioGraph, tau: f64) -> bool {
    let n = g.cost.len();
    let weight: Vec<f64> = g.cost.iter().zip(&g.time).map(|(c, t)| c - tau * t).collect();
    let mut dist = vec![0.0f64; n];
    for round in 0..=n {
        let mut changed = false;
        for u in 0..n {
            let base = dist[u] + weight[u];
            for &v in &g.successors[u] {
                if base < dist[v] {
                    dist[v] = base;
                    changed = true;
                }
            }
        }
        if !changed {
            return false;
        }
        if round == n {
            return true;
        }
    }
    true
}

/// Minimum cycle ratio, to absolute accuracy `tol`.
///
/// Requires every node to lie on some cycle reachable structure with
/// `time > 0`; the answer is bracketed by the extreme per-node ratios.
pub fn min_cycle_ratio(g: &RatioGraph, tol: f64) -> f64 {
    let ratios = g.cost.iter().zip(&g.time).map(|(c, t)| c / t);
    let mut lo = ratios.clone().fold(f64::INFINITY, f64::min);
    let mut hi = ratios.fold(f64::NEG_INFINITY, f64::max);
    // Invariant: no negative cycle at lo, some cycle has ratio <= hi.
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if has_negative_cycle(g, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Maximum cycle ratio, via the minimum ratio of the negated costs.
pub fn max_cycle_ratio(g: &RatioGraph, tol: f64) -> f64 {
    let negated = RatioGraph {
        successors: g.successors.clone(),
        cost: g.cost.iter().map(|c| -c).collect(),
        time: g.time.clone(),
    };
    -min_cycle_ratio(&negated, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_self_loops() {
        let g = RatioGraph {
            successors: vec![vec![0, 1], vec![0, 1]],
            cost: vec![1.0, 3.0],
            time: vec![1.0, 1.0],
        };
        assert!((min_cycle_ratio(&g, 1e-12) - 1.0).abs() < 1e-11);
        assert!((max_cycle_ratio(&g, 1e-12) - 3.0).abs() < 1e-11);
    }

    #[test]
    fn forced_alternation() {
        // Only cycle is 0 -> 1 -> 0 with ratio (1 + 5) / (1 + 2) = 2.
        let g = RatioGraph {
            successors: vec![vec![1], vec![0]],
            cost: vec![1.0, 5.0],
            time: vec![1.0, 2.0],
        };
        assert!((min_cycle_ratio(&g, 1e-12) - 2.0).abs() < 1e-11);
        assert!((max_cycle_ratio(&g, 1e-12) - 2.0).abs() < 1e-11);
    }
}
