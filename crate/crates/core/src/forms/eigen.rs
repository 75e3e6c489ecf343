//! Smallest eigenpair of a real symmetric tridiagonal pencil `(H, M)` with
//! `M` positive definite: Sturm-count bisection, then inverse iteration.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored as diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        debug_assert_eq!(off.len() + 1, diag.len().max(1));
        SymTridiag { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn mul(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn quad_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.mul(v))
    }

    fn inf_norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                self.diag[i].abs()
                    + if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                    + if i + 1 < n { self.off[i].abs() } else { 0.0 }
            })
            .fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Number of pencil eigenvalues below `sigma` (negative pivots of the
/// `LDLᵀ` factorisation of `H − σM`).
pub fn sturm_count(h: &SymTridiag, m: &SymTridiag, sigma: f64) -> usize {
    let n = h.dim();
    let mut count = 0;
    let mut d = 0.0;
    for i in 0..n {
        let t = h.diag[i] - sigma * m.diag[i];
        d = if i == 0 {
            t
        } else {
            let e = h.off[i - 1] - sigma * m.off[i - 1];
            t - e * e / d
        };
        if d == 0.0 {
            d = -f64::EPSILON * (t.abs() + 1e-300);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `(H − σM) x = b` by tridiagonal `LDLᵀ` without pivoting.
fn solve_shifted(h: &SymTridiag, m: &SymTridiag, sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = h.dim();
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    for i in 0..n {
        let t = h.diag[i] - sigma * m.diag[i];
        d[i] = if i == 0 { t } else { t - l[i - 1] * l[i - 1] * d[i - 1] };
        if d[i] == 0.0 {
            d[i] = f64::MIN_POSITIVE;
        }
        if i + 1 < n {
            l[i] = (h.off[i] - sigma * m.off[i]) / d[i];
        }
    }
    let mut z = b.to_vec();
    for i in 1..n {
        z[i] -= l[i - 1] * z[i - 1];
    }
    for i in 0..n {
        z[i] /= d[i];
    }
    for i in (0..n.saturating_sub(1)).rev() {
        z[i] -= l[i] * z[i + 1];
    }
    z
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// `M`-normalised: `vᵀ M v = 1`.
    pub vector: Vec<f64>,
    /// `‖H v − λ M v‖ / (‖H‖ + |λ| ‖M‖)`
    pub residual: f64,
}

/// Residual level accepted silently.
pub const RESIDUAL_TARGET: f64 = 1e-10;
/// Residual level above which the solve counts as failed.
pub const RESIDUAL_FAIL: f64 = 1e-6;

pub fn smallest_eigenpair(h: &SymTridiag, m: &SymTridiag) -> Result<EigenPair> {
    let n = h.dim();
    if n == 0 || m.dim() != n {
        return Err(Error::Dimension { expected: n, got: m.dim() });
    }
    // bracket [lo, hi] with count(lo) = 0 and count(hi) ≥ 1
    let mut hi = h.diag[0] / m.diag[0];
    let mut lo = hi;
    let scale = h.inf_norm() / m.diag.iter().copied().fold(f64::INFINITY, f64::min).max(f64::MIN_POSITIVE);
    let mut widen = scale.max(1.0);
    while sturm_count(h, m, lo) > 0 {
        lo -= widen;
        widen *= 2.0;
        if !lo.is_finite() {
            return Err(Error::Numeric("eigenvalue bracket diverged".into()));
        }
    }
    let mut widen = 1e-12 * scale.max(1.0);
    while sturm_count(h, m, hi) == 0 {
        hi += widen;
        widen *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Numeric("eigenvalue bracket diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        if sturm_count(h, m, mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // lo lies below the smallest eigenvalue, so H − σM stays definite
    let gap = (1e-9 * hi.abs()).max(1e-12 * scale.max(1.0)).max(hi - lo);
    let mut sigma = lo - gap;
    while sturm_count(h, m, sigma) > 0 {
        sigma -= gap;
    }
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    let mut value = hi;
    let mut residual = f64::INFINITY;
    let h_norm = h.inf_norm();
    let m_norm = m.inf_norm();
    for _ in 0..8 {
        let rhs = m.mul(&v);
        v = solve_shifted(h, m, sigma, &rhs);
        let mv = m.mul(&v);
        let nrm = dot(&v, &mv).sqrt();
        if !(nrm.is_finite() && nrm > 0.0) {
            return Err(Error::Numeric(format!(
                "inverse iteration broke down (shift {sigma:e}, |H| = {h_norm:e}, |M| = {m_norm:e})"
            )));
        }
        for x in v.iter_mut() {
            *x /= nrm;
        }
        value = h.quad_form(&v);
        let hv = h.mul(&v);
        let mv = m.mul(&v);
        let r: f64 = hv.iter().zip(&mv).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
        residual = r / (h_norm + value.abs() * m_norm).max(f64::MIN_POSITIVE);
        if residual <= RESIDUAL_TARGET {
            break;
        }
    }
    if residual > RESIDUAL_FAIL {
        return Err(Error::Numeric(format!(
            "eigenvector residual {residual:e} above {RESIDUAL_FAIL:e} (|H| = {h_norm:e}, |M| = {m_norm:e}, bracket [{lo:e}, {hi:e}])"
        )));
    }
    Ok(EigenPair { value, vector: v, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplace(n: usize) -> (SymTridiag, SymTridiag) {
        let h = 1.0 / n as f64;
        let k = SymTridiag::new(vec![2.0 / h; n - 1], vec![-1.0 / h; n - 2]);
        let m = SymTridiag::new(vec![4.0 * h / 6.0; n - 1], vec![h / 6.0; n - 2]);
        (k, m)
    }

    #[test]
    fn dirichlet_ground_state() {
        let (k, m) = laplace(256);
        let e = smallest_eigenpair(&k, &m).unwrap();
        let h = 1.0 / 256.0;
        // exact discrete value for linear elements
        let c = (PI * h).cos();
        let exact = 6.0 * (1.0 - c) / (h * h * (2.0 + c));
        assert!((e.value - exact).abs() < 1e-9 * exact, "{} vs {}", e.value, exact);
        assert!(e.residual < RESIDUAL_TARGET);
    }

    #[test]
    fn counts_bracket_the_spectrum() {
        let (k, m) = laplace(16);
        assert_eq!(sturm_count(&k, &m, 0.0), 0);
        assert_eq!(sturm_count(&k, &m, 1e9), 15);
    }

    #[test]
    fn indefinite_and_zero_matrices() {
        let (k, m) = laplace(32);
        let neg = SymTridiag::new(k.diag.iter().map(|x| -x).collect(), k.off.iter().map(|x| -x).collect());
        let e = smallest_eigenpair(&neg, &m).unwrap();
        assert!(e.value < -1e3);
        let zero = SymTridiag::new(vec![0.0; 31], vec![0.0; 30]);
        let e = smallest_eigenpair(&zero, &m).unwrap();
        assert!(e.value.abs() < 1e-9);
    }
}
