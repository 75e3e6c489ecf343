//! Gauss–Legendre rules and a panel-respecting adaptive integrator.
//!
//! Every integral in the crate goes through [`integrate`]: the range is cut
//! at the supplied break points so that no panel straddles a discontinuity,
//! and each panel is refined by bisection with an 8-point rule until the
//! two-level estimates agree.

use std::sync::OnceLock;

/// Relative tolerance used by the adaptive integrator unless overridden.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;
const STALL_DEPTH: u32 = 8;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z_prev = z;
            z = z_prev - p1 / dp;
            if (z - z_prev).abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

/// Maps the reference rule onto `[a, b]`.
pub fn mapped_rule(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(&w).map(|(xi, wi)| (mid + half * xi, half * wi)).collect()
}

fn rule8<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64) -> ([f64; N], f64) {
    let (x, w) = gl8();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [0.0; N];
    let mut abs = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let v = f(mid + half * xi);
        for k in 0..N {
            acc[k] += wi * v[k];
            abs += wi * v[k].abs();
        }
    }
    for v in acc.iter_mut() {
        *v *= half;
    }
    (acc, abs * half.abs())
}

/// Stopping target shared by every level of one adaptive run.
struct Target {
    rel_tol: f64,
    /// Panel-wide mean of `|f|`.
    density: f64,
}

fn refine<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: &F,
    a: f64,
    b: f64,
    whole: [f64; N],
    target: &Target,
    depth: u32,
    parent_err: f64,
) -> [f64; N] {
    let m = 0.5 * (a + b);
    let (left, labs) = rule8(f, a, m);
    let (right, rabs) = rule8(f, m, b);
    let mut halves = [0.0; N];
    let mut err = 0.0_f64;
    for k in 0..N {
        halves[k] = left[k] + right[k];
        err = err.max((halves[k] - whole[k]).abs());
    }
    // the scale is the integral of |f|, so cancelling integrands do not stall;
    // the density floor keeps subintervals where f nearly vanishes from
    // being refined down to rounding noise
    let scale = (labs + rabs).max(target.density * (b - a));
    // below the rounding floor of f the two-level difference stops shrinking
    let stalled = depth >= STALL_DEPTH && err > 0.5 * parent_err;
    if err <= target.rel_tol * scale || stalled || depth >= MAX_DEPTH || m <= a || m >= b {
        return halves;
    }
    let l = refine(f, a, m, left, target, depth + 1, err);
    let r = refine(f, m, b, right, target, depth + 1, err);
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = l[k] + r[k];
    }
    out
}

/// Adaptive 8-point Gauss–Legendre on a single smooth panel.
pub fn adaptive<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> [f64; N] {
    if b <= a {
        return [0.0; N];
    }
    let (whole, abs) = rule8(f, a, b);
    let target = Target { rel_tol, density: abs / (b - a) };
    refine(f, a, b, whole, &target, 0, f64::INFINITY)
}

/// Integrates `f` over `[a, b]`, splitting at every break point strictly
/// inside the range. `breaks` need not be sorted.
pub fn integrate<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: F,
    breaks: &[f64],
    a: f64,
    b: f64,
    rel_tol: f64,
) -> [f64; N] {
    let mut total = [0.0; N];
    for (lo, hi) in panels(breaks, a, b) {
        let part = adaptive(&f, lo, hi, rel_tol);
        for k in 0..N {
            total[k] += part[k];
        }
    }
    total
}

/// Consecutive sub-intervals of `[a, b]` delimited by the interior breaks.
pub fn panels(breaks: &[f64], a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for c in cuts {
        out.push((lo, c));
        lo = c;
    }
    if b > lo {
        out.push((lo, b));
    }
    out
}

/// Cell midpoints and widths of a grid on `[a, b]` with spacing at most
/// `step`; cells never straddle a break.
pub fn midpoints(breaks: &[f64], a: f64, b: f64, step: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (lo, hi) in panels(breaks, a, b) {
        let cells = ((hi - lo) / step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let w = (hi - lo) / cells as f64;
        out.extend((0..cells).map(|c| (lo + (c as f64 + 0.5) * w, w)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 8, 16] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 1;
            for p in 0..=deg {
                let num: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((num - exact).abs() < 1e-13, "n={n} p={p}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity_in_derivative() {
        let v = adaptive(&|x: f64| [x.sqrt()], 0.0, 1.0, 1e-12);
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn split_integration_of_a_step() {
        let step = |x: f64| [if x >= 0.5 { 1.0 } else { 0.0 }];
        let v = integrate(step, &[0.5], 0.0, 1.0, 1e-12);
        assert_eq!(v[0], 0.5);
    }

    #[test]
    fn zero_integrand_terminates() {
        let v = adaptive(&|_x: f64| [0.0, 0.0], 0.0, 3.0, 1e-10);
        assert_eq!(v, [0.0, 0.0]);
    }

    #[test]
    fn midpoints_respect_breaks() {
        let m = midpoints(&[0.3], 0.0, 1.0, 0.25);
        let xs: Vec<f64> = m.iter().map(|p| p.0).collect();
        assert_eq!(xs.len(), 2 + 3);
        assert!(xs.iter().all(|&x| x != 0.3));
        let total: f64 = m.iter().map(|p| p.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn panels_ignore_outside_breaks() {
        assert_eq!(panels(&[-1.0, 0.25, 0.25, 2.0], 0.0, 1.0), vec![(0.0, 0.25), (0.25, 1.0)]);
    }

    #[test]
    fn noisy_integrand_stops_at_its_rounding_floor() {
        use std::cell::Cell;
        let calls = Cell::new(0u64);
        let noisy = |x: f64| {
            calls.set(calls.get() + 1);
            let jitter = ((x * 1e9).sin() * 43758.5453).fract();
            [1.0 + 1e-9 * jitter]
        };
        let v = adaptive(&noisy, 0.0, 1.0, 1e-14);
        assert!((v[0] - 1.0).abs() < 1e-8);
        assert!(calls.get() < 100_000, "{} evaluations", calls.get());
    }
}
