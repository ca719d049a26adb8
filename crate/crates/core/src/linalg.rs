//! Small dense matrices and Perron-Frobenius data by power iteration.

use crate::error::{Error, Result};

pub const POWER_TOLERANCE: f64 = 1e-13;
pub const POWER_FLOOR: f64 = 1e-12;
pub const POWER_STALL: usize = 64;
pub const POWER_MAX_ITERATIONS: usize = 100_000;

/// Square row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T M`.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                for (o, a) in out.iter_mut().zip(self.row(i)) {
                    *o += xi * a;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0.0 {
                    for j in 0..n {
                        out.data[i * n + j] += a * other.get(k, j);
                    }
                }
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Perron root and positive eigenvectors with `r` summing to one and
/// `sum_u l_u r_u = 1`.
#[derive(Clone, Debug)]
pub struct Perron {
    pub value: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Power iteration on `M + s I`, normalized to unit sum, where the shift `s`
/// is the running estimate of the Perron root. The shift leaves eigenvectors
/// unchanged and contracts every other eigenvalue by `|lambda + s| / 2s < 1`,
/// so nearly periodic matrices converge. Stops once the per-entry relative
/// error, extrapolated from the observed contraction of successive steps, is
/// within `POWER_TOLERANCE`, or once steps below `POWER_FLOOR` have not
/// reached a new minimum for `POWER_STALL` iterations, where rounding makes
/// the iterate wander.
fn power_vector(m: &Matrix, transpose: bool) -> Result<(f64, Vec<f64>)> {
    let n = m.dim();
    let mut v = vec![1.0 / n as f64; n];
    let mut value = f64::NAN;
    let mut previous_change = f64::INFINITY;
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..POWER_MAX_ITERATIONS {
        let shift = if value.is_nan() { 0.0 } else { value };
        let mut w = if transpose { m.vec_mul(&v) } else { m.mul_vec(&v) };
        let root: f64 = w.iter().sum();
        if !(root.is_finite() && root > 0.0) {
            return Err(Error::NotPrimitive(format!("power iteration produced total {root}")));
        }
        for (x, y) in w.iter_mut().zip(&v) {
            *x += shift * y;
        }
        let total = root + shift;
        let next: Vec<f64> = w.iter().map(|x| x / total).collect();
        let change = next
            .iter()
            .zip(&v)
            .map(|(a, b)| if *a > 0.0 { (a - b).abs() / a } else { (a - b).abs() })
            .fold(0.0, f64::max);
        let rate = (change / previous_change).clamp(0.0, 0.999);
        let error = change * rate / (1.0 - rate);
        if change < best {
            best = change;
            stalled = 0;
        } else {
            stalled += 1;
        }
        let settled = (root - value).abs() <= POWER_TOLERANCE * root
            && (error <= POWER_TOLERANCE || (best <= POWER_FLOOR && stalled >= POWER_STALL));
        previous_change = change;
        value = root;
        v = next;
        if settled {
            if v.iter().any(|&x| x <= 0.0) {
                return Err(Error::NotPrimitive("Perron vector has a non-positive entry".into()));
            }
            return Ok((value, v));
        }
    }
    Err(Error::NotPrimitive(format!(
        "power iteration did not converge in {POWER_MAX_ITERATIONS} steps"
    )))
}

/// Perron data of a primitive nonnegative matrix.
pub fn perron(m: &Matrix) -> Result<Perron> {
    let (value, right) = power_vector(m, false)?;
    let (_, mut left) = power_vector(m, true)?;
    let pairing: f64 = left.iter().zip(&right).map(|(a, b)| a * b).sum();
    for l in &mut left {
        *l /= pairing;
    }
    Ok(Perron { value, left, right })
}

/// Spectral radius of a primitive nonnegative matrix.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    power_vector(m, false).map(|(v, _)| v)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Largest eigenvalue modulus of a real 2x2 matrix.
fn eig2_modulus(h: [[f64; 2]; 2]) -> f64 {
    let tr = h[0][0] + h[1][1];
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (tr / 2.0 + s).abs().max((tr / 2.0 - s).abs())
    } else {
        det.abs().sqrt()
    }
}

/// `|lambda_2|`, the second largest eigenvalue modulus.
///
/// Runs two-vector orthogonal iteration on the deflated matrix
/// `M - lambda r l^T` starting from the all-ones vector, and reads the
/// dominant modulus off the 2x2 Rayleigh-Ritz projection so that complex
/// pairs are resolved. Stops when the estimate moves by at most
/// `POWER_TOLERANCE * lambda`.
pub fn second_eigenvalue_modulus(m: &Matrix, p: &Perron) -> f64 {
    let n = m.dim();
    if n == 1 {
        return 0.0;
    }
    let mut d = m.clone();
    for i in 0..n {
        for j in 0..n {
            d.set(i, j, m.get(i, j) - p.value * p.right[i] * p.left[j]);
        }
    }
    let scale = p.value;
    let mut q1 = vec![1.0 / (n as f64).sqrt(); n];
    let mut q2: Vec<f64> = (0..n).map(|i| i as f64 - (n as f64 - 1.0) / 2.0).collect();
    let q2n = norm(&q2);
    q2.iter_mut().for_each(|x| *x /= q2n);
    let mut estimate = f64::NAN;
    for _ in 0..POWER_MAX_ITERATIONS {
        let z1 = d.mul_vec(&q1);
        let z2 = d.mul_vec(&q2);
        let h = [[dot(&q1, &z1), dot(&q1, &z2)], [dot(&q2, &z1), dot(&q2, &z2)]];
        let next = eig2_modulus(h);
        let size = norm(&z1).max(norm(&z2));
        if size <= 1e-15 * scale {
            return 0.0;
        }
        // Orthonormalize the images; keep a direction orthogonal to q1 if z2 collapses.
        let n1 = norm(&z1);
        let (a, b) = if n1 > 1e-15 * size { (z1, z2) } else { (z2, z1) };
        let na = norm(&a);
        let new_q1: Vec<f64> = a.iter().map(|x| x / na).collect();
        let mut new_q2: Vec<f64> = b.clone();
        let c = dot(&new_q1, &new_q2);
        new_q2.iter_mut().zip(&new_q1).for_each(|(x, y)| *x -= c * y);
        if norm(&new_q2) <= 1e-12 * size {
            new_q2 = q2.clone();
            let c = dot(&new_q1, &new_q2);
            new_q2.iter_mut().zip(&new_q1).for_each(|(x, y)| *x -= c * y);
            if norm(&new_q2) <= 1e-12 {
                new_q2 = q1.clone();
                let c = dot(&new_q1, &new_q2);
                new_q2.iter_mut().zip(&new_q1).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nb = norm(&new_q2);
        if nb > 0.0 {
            new_q2.iter_mut().for_each(|x| *x /= nb);
        }
        q1 = new_q1;
        q2 = new_q2;
        if (next - estimate).abs() <= POWER_TOLERANCE * scale {
            return next;
        }
        estimate = next;
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perron_of_two_state_chain() {
        let m = Matrix::from_rows(&[vec![0.9, 0.1], vec![0.5, 0.5]]);
        let p = perron(&m).unwrap();
        assert!((p.value - 1.0).abs() < 1e-13);
        // Stationary vector (5/6, 1/6) is the left eigenvector up to scale.
        let ratio = p.left[0] / p.left[1];
        assert!((ratio - 5.0).abs() < 1e-11);
        let pairing: f64 = p.left.iter().zip(&p.right).map(|(a, b)| a * b).sum();
        assert!((pairing - 1.0).abs() < 1e-14);
        assert!((second_eigenvalue_modulus(&m, &p) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn rank_one_has_zero_second_eigenvalue() {
        let m = Matrix::from_rows(&[vec![0.7, 0.7], vec![0.3, 0.3]]);
        let p = perron(&m).unwrap();
        assert!((p.value - 1.0).abs() < 1e-14);
        assert!(second_eigenvalue_modulus(&m, &p) < 1e-12);
    }

    #[test]
    fn complex_pair_is_resolved() {
        // Cyclic permutation plus identity: eigenvalues 2 and 1 + w, |1 + w| = 1.
        let m = Matrix::from_rows(&[
            vec![1.0, 1.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
        ]);
        let p = perron(&m).unwrap();
        assert!((p.value - 2.0).abs() < 1e-12);
        assert!((second_eigenvalue_modulus(&m, &p) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn nilpotent_matrix_is_rejected() {
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(perron(&m).is_err());
    }
}
