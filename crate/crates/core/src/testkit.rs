//! Seeded random inputs for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::window_deviation;
use crate::error::Result;
use crate::forms::TestFunction;
use crate::potential::{Antiderivative, Interval, Jump, PieceTerm, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex(rng: &mut impl Rng, scale: f64, real: bool) -> C64 {
    let re = rng.gen_range(-scale..=scale);
    let im = if real { 0.0 } else { rng.gen_range(-scale..=scale) };
    C64::new(re, im)
}

fn cut_points(rng: &mut impl Rng, a: f64, b: f64, pieces: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.gen_range(a..b)).collect();
    cuts.sort_by(f64::total_cmp);
    // keep pieces from collapsing
    let min_gap = (b - a) / (8.0 * pieces as f64);
    let mut out = vec![a];
    for c in cuts {
        if c - out[out.len() - 1] >= min_gap && b - c >= min_gap {
            out.push(c);
        }
    }
    out.push(b);
    out
}

/// Up to four cubic pieces on `[0, X]` plus up to three jumps. Coefficients
/// are bounded by `scale`; `real` suppresses imaginary parts.
pub fn random_potential(rng: &mut impl Rng, domain_end: f64, scale: f64, real: bool) -> Result<Antiderivative> {
    let pieces = rng.gen_range(1..=4);
    let bps = cut_points(rng, 0.0, domain_end, pieces);
    let terms = (0..bps.len() - 1)
        .map(|_| vec![PieceTerm::Poly([0; 4].map(|_| complex(rng, scale, real)))])
        .collect();
    let jumps = (0..rng.gen_range(0..=3))
        .filter(|_| bps.len() > 2)
        .map(|_| Jump { at: bps[rng.gen_range(1..bps.len() - 1)], delta: complex(rng, scale, real) })
        .collect();
    Antiderivative::new(domain_end, bps, terms, jumps)
}

/// A window `(x, a)` with `x + a ≤ X`.
pub fn random_window(rng: &mut impl Rng, domain_end: f64) -> (f64, f64) {
    let a = rng.gen_range(0.05..=domain_end.min(2.0));
    let x = rng.gen_range(0.0..=domain_end - a);
    (x, a)
}

/// Real piecewise-linear `γ` on `[0, X]`, discontinuous at the cuts.
pub fn random_miura_gamma(rng: &mut impl Rng, domain_end: f64) -> Result<Antiderivative> {
    let pieces = rng.gen_range(1..=2 * domain_end.ceil() as usize);
    let bps = cut_points(rng, 0.0, domain_end, pieces);
    let terms = (0..bps.len() - 1)
        .map(|_| {
            let c0 = rng.gen_range(-3.0..=3.0);
            let c1 = rng.gen_range(-3.0..=3.0);
            vec![PieceTerm::linear(C64::new(c0, 0.0), C64::new(c1, 0.0))]
        })
        .collect();
    Antiderivative::new(domain_end, bps, terms, vec![])
}

/// A potential and window with `|I| < 1/8` and `min_c ∫_I |s − c|² < 1/8`.
pub fn small_window_case(rng: &mut impl Rng) -> Result<(Antiderivative, Interval)> {
    let x_end = 1.0;
    let (scale, real) = (rng.gen_range(0.5..=20.0), rng.gen_bool(0.5));
    let s = random_potential(rng, x_end, scale, real)?;
    let len = rng.gen_range(0.01..0.124);
    let a = rng.gen_range(0.0..=x_end - len);
    let iv = Interval::new(a, a + len)?;
    let dev = window_deviation(&s, a, len)?.dev;
    let target = rng.gen_range(0.0..0.124);
    let s = if dev > target { s.scale_real((target / dev).sqrt()) } else { s };
    Ok((s, iv))
}

/// Compactly supported `y` inside `[0, X − 1]`: either a continuous
/// piecewise-linear profile or a polynomial vanishing at both ends.
pub fn random_test_function(rng: &mut impl Rng, domain_end: f64) -> Result<TestFunction> {
    let top = domain_end - 1.0;
    let lo = rng.gen_range(0.0..top * 0.4);
    let hi = rng.gen_range(top * 0.6..=top);
    if rng.gen_bool(0.5) {
        let pieces = rng.gen_range(2..=6);
        let bps = cut_points(rng, lo, hi, pieces);
        let mut vals: Vec<C64> = (0..bps.len()).map(|_| complex(rng, 2.0, false)).collect();
        let last = vals.len() - 1;
        vals[0] = C64::new(0.0, 0.0);
        vals[last] = C64::new(0.0, 0.0);
        let coeffs = bps
            .windows(2)
            .zip(vals.windows(2))
            .map(|(b, v)| vec![v[0], (v[1] - v[0]) / (b[1] - b[0])])
            .collect();
        TestFunction::new(bps, coeffs)
    } else {
        // (x − lo)(hi − x) p(x) with p of degree ≤ 3
        let p: Vec<f64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        let mut c = vec![0.0; p.len() + 2];
        let base = [-lo * hi, lo + hi, -1.0];
        for (i, &pi) in p.iter().enumerate() {
            for (j, &bj) in base.iter().enumerate() {
                c[i + j] += pi * bj;
            }
        }
        TestFunction::polynomial(lo, hi, &c)
    }
}

/// Forcing term for the inhomogeneous solver.
pub fn random_forcing(rng: &mut impl Rng, domain_end: f64) -> Result<Antiderivative> {
    random_potential(rng, domain_end, 2.0, false)
}
