//! Splitting the form with the partition of unity `Σ φ_k² = 1`,
//! `φ_k(x) = sin(π(x − a_k))` on `[a_k, a_k + 1]`, `a_{k+1} = a_k + 1/2`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{Antiderivative, C64};
use crate::quad;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Continuous piecewise polynomial vanishing at both ends of its support.
/// Coefficients are in the local variable `t = x − breaks[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<C64>>,
}

fn horner(c: &[C64], t: f64) -> C64 {
    c.iter().rev().fold(ZERO, |acc, &k| acc * t + k)
}

fn horner_prime(c: &[C64], t: f64) -> C64 {
    c.iter().enumerate().skip(1).rev().fold(ZERO, |acc, (j, &k)| acc * t + k * j as f64)
}

/// Coefficients of `p(x)` re-expanded around `x = a`.
fn taylor_shift(c: &[C64], a: f64) -> Vec<C64> {
    let mut out = c.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let carry = out[j + 1] * a;
            out[j] += carry;
        }
    }
    out
}

impl TestFunction {
    pub fn new(breaks: Vec<f64>, coeffs: Vec<Vec<C64>>) -> Result<Self> {
        if breaks.len() < 2 || coeffs.len() + 1 != breaks.len() {
            return Err(Error::validation("test function needs one coefficient list per piece"));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::validation("test function breaks must increase"));
        }
        let y = TestFunction { breaks, coeffs };
        let scale = y.coeffs.iter().flatten().map(|c| c.norm()).fold(1.0, f64::max);
        let tol = 1e-10 * scale;
        let n = y.coeffs.len();
        if y.piece(0, y.breaks[0]).norm() > tol || y.piece(n - 1, y.breaks[n]).norm() > tol {
            return Err(Error::validation("test function must vanish at both ends"));
        }
        for i in 1..n {
            if (y.piece(i - 1, y.breaks[i]) - y.piece(i, y.breaks[i])).norm() > tol {
                return Err(Error::validation(format!("test function discontinuous at {}", y.breaks[i])));
            }
        }
        Ok(y)
    }

    /// A single polynomial (coefficients in `x`, lowest first) on `[a, b]`.
    pub fn polynomial(a: f64, b: f64, coeffs: &[f64]) -> Result<Self> {
        let c: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(vec![a, b], vec![taylor_shift(&c, a)])
    }

    fn piece(&self, i: usize, x: f64) -> C64 {
        horner(&self.coeffs[i], x - self.breaks[i])
    }

    fn index(&self, x: f64) -> Option<usize> {
        let n = self.coeffs.len();
        if x < self.breaks[0] || x > self.breaks[n] {
            return None;
        }
        Some(self.breaks[1..n].partition_point(|&b| b <= x))
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], self.breaks[self.breaks.len() - 1])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn value(&self, x: f64) -> C64 {
        self.index(x).map_or(ZERO, |i| self.piece(i, x))
    }

    pub fn derivative(&self, x: f64) -> C64 {
        self.index(x).map_or(ZERO, |i| horner_prime(&self.coeffs[i], x - self.breaks[i]))
    }

    pub fn norm_sq(&self) -> f64 {
        let (a, b) = self.support();
        quad::integrate(|x| [self.value(x).norm_sqr()], &self.breaks, a, b, 1e-13)[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub correction: f64,
    /// `correction / ‖y‖²`; at most `2π²`.
    pub correction_ratio: f64,
    /// `|lhs − rhs| / max(|lhs|, ‖y'‖²)`
    pub residual: f64,
}

/// Window starts `−1/2 + k/2` covering the support of `y`.
fn default_offsets(y: &TestFunction) -> Vec<f64> {
    let (lo, hi) = y.support();
    let first = (2.0 * lo).floor() / 2.0 - 0.5;
    let mut out = vec![first];
    while out[out.len() - 1] + 0.5 < hi {
        out.push(out[out.len() - 1] + 0.5);
    }
    out
}

/// Cut-off `φ_k` and its derivative.
fn cutoff(a: f64, x: f64) -> (f64, f64) {
    if x < a || x > a + 1.0 {
        (0.0, 0.0)
    } else {
        let t = PI * (x - a);
        (t.sin(), PI * t.cos())
    }
}

/// Checks `l[y] = Σ l[φ_k² y] + 2 Σ l[φ_k φ_{k+1} y] − correction` with
/// `l[z] = ∫|z'|² − ∫ s d|z|²` and
/// `correction = 2 Σ ∫ (φ_k' φ_{k+1} − φ_k φ_{k+1}')² |y|²`.
///
/// `offsets` lists the window starts `a_k`, spaced by one half and covering
/// the support of `y`; `None` picks `−1/2 + k/2`.
pub fn partition_identity_check(
    s: &Antiderivative,
    y: &TestFunction,
    offsets: Option<&[f64]>,
) -> Result<PartitionCheck> {
    let (lo, hi) = y.support();
    if lo < 0.0 || hi > s.domain_end() {
        return Err(Error::Domain { x: if lo < 0.0 { lo } else { hi }, lo: 0.0, hi: s.domain_end() });
    }
    let offs = match offsets {
        Some(o) => o.to_vec(),
        None => default_offsets(y),
    };
    if offs.is_empty() || offs.windows(2).any(|w| (w[1] - w[0] - 0.5).abs() > 1e-12) {
        return Err(Error::parameter("window starts must be spaced by 1/2"));
    }
    if offs[0] + 0.5 > lo + 1e-12 || offs[offs.len() - 1] + 0.5 < hi - 1e-12 {
        return Err(Error::parameter("windows do not cover the support of y"));
    }
    let mut breaks: Vec<f64> = s.breaks_in(lo, hi);
    breaks.extend_from_slice(y.breaks());
    for &a in &offs {
        breaks.extend([a, a + 0.5, a + 1.0]);
    }
    breaks.retain(|&b| b >= lo && b <= hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // l[w y] for a real weight given as (w, w') at x
    let form = |w: &dyn Fn(f64) -> (f64, f64)| -> C64 {
        let r = quad::integrate(
            |x| {
                let (wv, wd) = w(x);
                let (yv, yd) = (y.value(x), y.derivative(x));
                let z = yv * wv;
                let dz = yv * wd + yd * wv;
                let d_abs = 2.0 * (z.conj() * dz).re;
                let sv = s.value(x);
                [dz.norm_sqr() - sv.re * d_abs, -sv.im * d_abs]
            },
            &breaks,
            lo,
            hi,
            1e-13,
        );
        C64::new(r[0], r[1])
    };

    let lhs = form(&|_| (1.0, 0.0));
    let mut rhs = ZERO;
    for &a in &offs {
        rhs += form(&|x| {
            let (p, dp) = cutoff(a, x);
            (p * p, 2.0 * p * dp)
        });
    }
    let mut correction = 0.0;
    for w in offs.windows(2) {
        let (a, b) = (w[0], w[1]);
        rhs += 2.0
            * form(&|x| {
                let ((p, dp), (q, dq)) = (cutoff(a, x), cutoff(b, x));
                (p * q, dp * q + p * dq)
            });
        correction += 2.0
            * quad::integrate(
                |x| {
                    let ((p, dp), (q, dq)) = (cutoff(a, x), cutoff(b, x));
                    [(dp * q - p * dq).powi(2) * y.value(x).norm_sqr()]
                },
                &breaks,
                lo,
                hi,
                1e-13,
            )[0];
    }
    rhs -= correction;
    let kinetic = quad::integrate(|x| [y.derivative(x).norm_sqr()], &breaks, lo, hi, 1e-13)[0];
    let norm_sq = y.norm_sq();
    Ok(PartitionCheck {
        lhs,
        rhs,
        correction,
        correction_ratio: if norm_sq > 0.0 { correction / norm_sq } else { 0.0 },
        residual: (lhs - rhs).norm() / lhs.norm().max(kinetic).max(f64::MIN_POSITIVE),
    })
}
