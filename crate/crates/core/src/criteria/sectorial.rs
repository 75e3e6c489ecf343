//! Sector conditions on the differences `s(x) − s(t)`, `0 ≤ x − t ≤ d`.

use std::f64::consts::PI;

use serde::Serialize;

use super::sector::{angular_hull, fit_sector, Sector};
use super::{origins, TrendConfig, WindowSeries};
use crate::error::{Error, Result};
use crate::potential::{Antiderivative, C64};
use crate::quad;

/// Number of grid cells per unit of `d`.
const CELLS_PER_D: f64 = 64.0;

/// Relative vertex drift between the half-domain and full-domain fits above
/// which the sector is treated as not uniform in `x`.
const VERTEX_DRIFT: f64 = 0.05;

fn check_d(d: f64) -> Result<()> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::parameter(format!("sector depth d = {d} must lie in (0, 1]")));
    }
    Ok(())
}

/// `u(x) − w(t)` over midpoint-grid pairs with `0 ≤ x − t ≤ d` and
/// `x ≤ x_max`.
fn pair_values(
    xs: &[f64],
    u: &[C64],
    w: &[C64],
    d: f64,
    x_max: f64,
    out: &mut Vec<C64>,
) {
    let tol = 1e-12 * d;
    for i in 0..xs.len() {
        if xs[i] > x_max {
            break;
        }
        let mut j = i;
        loop {
            out.push(u[i] - w[j]);
            if j == 0 || xs[i] - xs[j - 1] > d + tol {
                break;
            }
            j -= 1;
        }
    }
}

/// Sampled differences `s(x) − s(t)` for `0 ≤ x − t ≤ d`, `x ≤ x_max`, on a
/// midpoint grid of step at most `d/64` split at breakpoints.
pub fn difference_samples(s: &Antiderivative, d: f64, x_max: f64) -> Result<Vec<C64>> {
    check_d(d)?;
    let xs: Vec<f64> = quad::midpoints(s.breakpoints(), 0.0, s.domain_end(), d / CELLS_PER_D)
        .into_iter()
        .map(|p| p.0)
        .collect();
    let vals: Vec<C64> = xs.iter().map(|&x| s.value(x)).collect();
    let mut out = Vec::new();
    pair_values(&xs, &vals, &vals, d, x_max, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BrinckHint {
    CompactResolvent,
    NotCompact,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrinckResult {
    /// Strict sector housing all sampled differences, when one is found and
    /// its vertex is stable under doubling the domain.
    pub diff_sector: Option<Sector>,
    /// Best hull-vertex sector before the strictness and stability checks.
    pub raw_sector: Option<Sector>,
    pub vertex_drift: f64,
    pub growth: WindowSeries,
    pub growth_bounded: bool,
    pub hint: BrinckHint,
}

/// Sector test on local differences plus the growth series
/// `|s(x + a) − s(x)|` on origins of step `a/4`.
pub fn brinck(s: &Antiderivative, d: f64, a: f64, trend: &TrendConfig) -> Result<BrinckResult> {
    check_d(d)?;
    let x_end = s.domain_end();
    if !(a > 0.0 && a <= x_end) {
        return Err(Error::parameter(format!("window length {a} outside (0, {x_end}]")));
    }
    let xs: Vec<f64> = quad::midpoints(s.breakpoints(), 0.0, x_end, d / CELLS_PER_D)
        .into_iter()
        .map(|p| p.0)
        .collect();
    let vals: Vec<C64> = xs.iter().map(|&x| s.value(x)).collect();
    let mut diffs = Vec::new();
    pair_values(&xs, &vals, &vals, d, 0.5 * x_end, &mut diffs);
    let half = fit_sector(&diffs);
    diffs.clear();
    pair_values(&xs, &vals, &vals, d, f64::INFINITY, &mut diffs);
    let raw = fit_sector(&diffs);
    let diameter = diameter(&diffs);
    let drift = match (half, raw) {
        (Some(h), Some(f)) => (h.vertex() - f.vertex()).norm(),
        _ => f64::INFINITY,
    };
    let stable = drift <= VERTEX_DRIFT * diameter + 1e-9;
    let diff_sector = raw.filter(|sec| sec.is_strict() && stable);

    let xs = origins(x_end, a, a / 4.0);
    let values: Vec<f64> = xs.iter().map(|&x| (s.value(x + a) - s.value(x)).norm()).collect();
    let growth_bounded = trend.is_bounded(&values);
    let hint = match diff_sector {
        None => BrinckHint::Inconclusive,
        Some(_) if growth_bounded => BrinckHint::NotCompact,
        Some(_) => BrinckHint::CompactResolvent,
    };
    Ok(BrinckResult {
        diff_sector,
        raw_sector: raw,
        vertex_drift: drift,
        growth: WindowSeries { a, origins: xs, values },
        growth_bounded,
        hint,
    })
}

fn diameter(points: &[C64]) -> f64 {
    let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in points {
        lo_re = lo_re.min(z.re);
        hi_re = hi_re.max(z.re);
        lo_im = lo_im.min(z.im);
        hi_im = hi_im.max(z.im);
    }
    if points.is_empty() {
        return 0.0;
    }
    (hi_re - lo_re).hypot(hi_im - lo_im)
}

/// Angular hull of `arg(s(x) + f(x) − s(t) − g(t))` over `0 ≤ x − t ≤ d`
/// with the vertex fixed at the origin. Zero values carry no direction and
/// are skipped; all-zero data gives the degenerate `[0, 0]`. `None` when the
/// hull is at least `π` wide or reaches the direction `±π`.
pub fn sector_fit(
    s: &Antiderivative,
    d: f64,
    f: Option<&Antiderivative>,
    g: Option<&Antiderivative>,
) -> Result<Option<Sector>> {
    check_d(d)?;
    let x_end = s.domain_end();
    let mut breaks = s.breakpoints().to_vec();
    for extra in [f, g].into_iter().flatten() {
        if (extra.domain_end() - x_end).abs() > 1e-12 * x_end.max(1.0) {
            return Err(Error::validation("f and g must share the domain of s"));
        }
        breaks.extend_from_slice(extra.breakpoints());
    }
    let xs: Vec<f64> = quad::midpoints(&breaks, 0.0, x_end, d / CELLS_PER_D)
        .into_iter()
        .map(|p| p.0)
        .collect();
    let plus = |h: Option<&Antiderivative>| -> Vec<C64> {
        xs.iter()
            .map(|&x| s.value(x) + h.map_or(C64::new(0.0, 0.0), |h| h.value(x)))
            .collect()
    };
    let (u, w) = (plus(f), plus(g));
    let mut vals = Vec::new();
    pair_values(&xs, &u, &w, d, f64::INFINITY, &mut vals);
    let scale = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let angles: Vec<f64> = vals
        .iter()
        .filter(|z| z.norm() > 1e-13 * scale)
        .map(|z| z.arg())
        .collect();
    let Some((alpha, beta)) = angular_hull(&angles) else {
        return Ok(Some(Sector::new(C64::new(0.0, 0.0), 0.0, 0.0)));
    };
    if beta - alpha >= PI || alpha <= -PI || beta >= PI {
        return Ok(None);
    }
    Ok(Some(Sector::new(C64::new(0.0, 0.0), alpha, beta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PieceTerm;

    fn poly(x_end: f64, c: [C64; 4]) -> Antiderivative {
        Antiderivative::polynomial(x_end, c).unwrap()
    }

    fn z(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn half_square_is_real_sector_with_growing_increments() {
        let s = Antiderivative::real_polynomial(20.0, &[0.0, 0.0, 0.5]).unwrap();
        let r = brinck(&s, 1.0, 1.0, &TrendConfig::default()).unwrap();
        let sec = r.diff_sector.unwrap();
        assert_eq!((sec.alpha, sec.beta), (0.0, 0.0));
        assert!(sec.vertex().norm() < 1e-12);
        for (&x, &v) in r.growth.origins.iter().zip(&r.growth.values) {
            assert!((v - (x + 0.5)).abs() < 1e-12);
        }
        assert_eq!(r.hint, BrinckHint::CompactResolvent);
    }

    #[test]
    fn imaginary_line_has_bounded_growth() {
        let s = poly(20.0, [z(0.0, 0.0), z(0.0, 1.0), z(0.0, 0.0), z(0.0, 0.0)]);
        let r = brinck(&s, 1.0, 1.0, &TrendConfig::default()).unwrap();
        let sec = r.diff_sector.unwrap();
        assert!((sec.alpha - PI / 2.0).abs() < 1e-12 && (sec.beta - PI / 2.0).abs() < 1e-12);
        assert!(r.growth.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert_eq!(r.hint, BrinckHint::NotCompact);
    }

    #[test]
    fn zero_is_degenerate_and_not_compact() {
        let s = Antiderivative::zero(10.0).unwrap();
        let r = brinck(&s, 1.0, 1.0, &TrendConfig::default()).unwrap();
        let sec = r.diff_sector.unwrap();
        assert_eq!((sec.alpha, sec.beta), (0.0, 0.0));
        assert_eq!(r.hint, BrinckHint::NotCompact);
    }

    #[test]
    fn sector_fit_examples() {
        let s = Antiderivative::real_polynomial(5.0, &[0.0, 1.0, 0.3]).unwrap();
        let sec = sector_fit(&s, 1.0, None, None).unwrap().unwrap();
        assert_eq!((sec.alpha, sec.beta), (0.0, 0.0));

        let t = poly(5.0, [z(0.0, 0.0), z(1.0, 1.0), z(0.0, 0.0), z(0.0, 0.0)]);
        let sec = sector_fit(&t, 0.5, None, None).unwrap().unwrap();
        assert!((sec.alpha - PI / 4.0).abs() < 1e-14 && (sec.beta - PI / 4.0).abs() < 1e-14);

        // a rotating complex profile: differences point in every direction
        let pieces: Vec<Vec<PieceTerm>> = (0..8)
            .map(|k| {
                let phase = C64::from_polar(1.0, k as f64 * PI / 4.0);
                vec![PieceTerm::constant(phase)]
            })
            .collect();
        let bps: Vec<f64> = (0..=8).map(|k| k as f64 * 0.125).collect();
        let osc = Antiderivative::new(1.0, bps, pieces, vec![]).unwrap();
        assert!(sector_fit(&osc, 1.0, None, None).unwrap().is_none());
    }

    #[test]
    fn sector_fit_uses_f_and_g() {
        // s = −x decreases, but f = 2x flips every difference to the right
        let s = Antiderivative::real_polynomial(2.0, &[0.0, -1.0]).unwrap();
        assert!(sector_fit(&s, 1.0, None, None).unwrap().is_none());
        let f = Antiderivative::real_polynomial(2.0, &[0.0, 2.0]).unwrap();
        let sec = sector_fit(&s, 1.0, Some(&f), Some(&f)).unwrap().unwrap();
        assert_eq!((sec.alpha, sec.beta), (0.0, 0.0));
    }

    #[test]
    fn depth_is_validated() {
        let s = Antiderivative::zero(2.0).unwrap();
        assert!(brinck(&s, 1.5, 1.0, &TrendConfig::default()).is_err());
        assert!(sector_fit(&s, 0.0, None, None).is_err());
    }
}
