//! Square banded matrix with in-place LU (no pivoting).
//!
//! The finite-volume Jacobians are column diagonally dominant, for which
//! Gaussian elimination without pivoting is stable.

// index loops mirror the band algebra
#![allow(clippy::needless_range_loop)]

#[derive(Debug, Clone)]
pub(crate) struct Banded {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Banded {
    pub fn new(n: usize, bw: usize) -> Self {
        Banded { n, bw, data: vec![0.0; n * (2 * bw + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i.abs_diff(j) <= self.bw, "({i},{j}) outside band {}", self.bw);
        i * (2 * self.bw + 1) + (j + self.bw - i)
    }

    pub fn clear(&mut self) {
        self.data.iter_mut().for_each(|v| *v = 0.0);
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    #[cfg(test)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i.abs_diff(j) > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Factorises in place and solves `A x = b`, overwriting `b` with `x`.
    /// Returns `false` on a zero or non-finite pivot.
    pub fn solve_in_place(&mut self, b: &mut [f64]) -> bool {
        let (n, bw) = (self.n, self.bw);
        let w = 2 * bw + 1;
        for k in 0..n {
            let pivot = self.data[k * w + bw];
            if pivot == 0.0 || !pivot.is_finite() {
                return false;
            }
            let last = (k + bw).min(n - 1);
            for i in k + 1..=last {
                let lik_at = i * w + (k + bw - i);
                let l = self.data[lik_at] / pivot;
                if l == 0.0 {
                    continue;
                }
                self.data[lik_at] = l;
                for j in k + 1..=last {
                    let kj = self.data[k * w + (j + bw - k)];
                    self.data[i * w + (j + bw - i)] -= l * kj;
                }
                b[i] -= l * b[k];
            }
        }
        for k in (0..n).rev() {
            let last = (k + bw).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=last {
                s -= self.data[k * w + (j + bw - k)] * b[j];
            }
            b[k] = s / self.data[k * w + bw];
        }
        b.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_diagonally_dominant_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (n, bw) = (60, 5);
        let mut a = Banded::new(n, bw);
        for i in 0..n {
            let mut row = 0.0;
            for j in i.saturating_sub(bw)..=(i + bw).min(n - 1) {
                if i != j {
                    let v: f64 = rng.gen_range(-1.0..1.0);
                    a.add(i, j, v);
                    row += v.abs();
                }
            }
            a.add(i, i, row + 1.0);
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut b = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                b[i] += a.get(i, j) * x[j];
            }
        }
        let mut m = a.clone();
        assert!(m.solve_in_place(&mut b));
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_pivot_reported() {
        let mut a = Banded::new(2, 1);
        a.add(0, 1, 1.0);
        a.add(1, 0, 1.0);
        assert!(!a.solve_in_place(&mut [1.0, 1.0]));
    }
}
