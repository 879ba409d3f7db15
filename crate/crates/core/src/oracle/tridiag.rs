//! Symmetric tridiagonal matrices: Sturm counts, bisection eigenvalues and
//! inverse-iteration eigenvectors.

use crate::error::{Error, Result};

/// Sweep cap for inverse iteration.
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivmin: f64,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Grid(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Grid("non-finite matrix entry".into()));
        }
        let max_e2 = off.iter().fold(1.0_f64, |m, e| m.max(e * e));
        Ok(Self {
            diag,
            off,
            pivmin: f64::MIN_POSITIVE * max_e2,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `x`: negative pivots of the
    /// `LDL^T` factorization of `T - x I`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = (self.diag[i] - x) - e * e / q;
            }
            if q.abs() <= self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Sign agreements between consecutive leading minors
    /// `p_i(x) = det(x I - T_i)`, `p_0 = 1`. Equals [`Self::sturm_count`].
    pub fn sturm_sign_agreements(&self, x: f64) -> usize {
        const BIG: f64 = 1e150;
        let mut prev = 1.0_f64;
        let mut cur = x - self.diag[0];
        let mut last_sign = 1.0_f64;
        let mut agreements = 0;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                let next = (x - self.diag[i]) * cur - e * e * prev;
                prev = cur;
                cur = next;
                if cur.abs() > BIG || prev.abs() > BIG {
                    cur /= BIG;
                    prev /= BIG;
                }
            }
            // a vanishing minor takes the opposite sign of its predecessor
            let sign = if cur == 0.0 { -last_sign } else { cur.signum() };
            if sign == last_sign {
                agreements += 1;
            }
            last_sign = sign;
        }
        agreements
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-based) by Sturm bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let (g_lo, g_hi) = self.gershgorin();
        let mut lo = g_lo;
        // grow the upper bound from below; the spectrum of interest is
        // usually far beneath the Gershgorin ceiling
        let mut width = 1.0_f64.max(1e-3 * g_lo.abs());
        let mut hi = (lo + width).min(g_hi);
        while hi < g_hi && self.sturm_count(hi) <= k {
            lo = hi;
            width *= 2.0;
            hi = (hi + width).min(g_hi);
        }
        if hi >= g_hi {
            hi = g_hi + self.pivmin.max(f64::EPSILON * g_hi.abs());
        }
        loop {
            let mid = 0.5 * (lo + hi);
            let tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + self.pivmin;
            if hi - lo <= tol || mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// The `count` smallest eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.len())).map(|k| self.eigenvalue(k)).collect()
    }

    /// `T x` for testing residuals.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Unit eigenvector for the eigenvalue closest to `shift`: repeated
    /// solves of `(T - shift I) y = x` from the all-ones start vector.
    pub fn inverse_iteration(&self, shift: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let lu = ShiftedLu::factor(self, shift);
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..MAX_SWEEPS {
            let mut y = x.clone();
            lu.solve(&mut y);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                break;
            }
            let dot: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
            let sign = if dot < 0.0 { -1.0 } else { 1.0 };
            y.iter_mut().for_each(|v| *v *= sign / norm);
            let change = y
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            x = y;
            if change <= 1e-12 {
                return Ok(x);
            }
        }
        Err(Error::Convergence { sweeps: MAX_SWEEPS })
    }
}

/// Partial-pivoting LU of the tridiagonal `T - shift I`.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, shift: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // an exactly singular pivot means the shift hit an eigenvalue
        let scale = t.gershgorin().1.abs().max(t.gershgorin().0.abs()).max(1.0);
        let tiny = f64::EPSILON * scale;
        for v in d.iter_mut() {
            if v.abs() < f64::MIN_POSITIVE {
                *v = tiny;
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
