//! Computable versions of the compactness and sectoriality criteria.
//!
//! Limits at infinity become trend tests over the finite window `[0, X]`:
//! a scanned series counts as bounded when its last quarter does not exceed
//! its first quarter by more than a growth factor and stays under an
//! absolute ceiling.

mod brasche;
mod classify;
mod decompose;
mod sector;
mod sectorial;

pub use brasche::brasche_check;
pub use classify::{
    classify, ClassifyConfig, Evidence, Outcome, Perturbation, Verdict, RULE_BRINCK, RULE_NECESSARY, RULE_PERTURBATION,
    RULE_SECTOR_FIT,
};
pub use decompose::{decompose_unif, UnifDecomposition};
pub use sector::{angular_hull, convex_hull, fit_sector, sector_with_angles, Sector};
pub use sectorial::{brinck, difference_samples, sector_fit, BrinckHint, BrinckResult};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{Antiderivative, Interval, C64};
use crate::quad;

/// Thresholds for deciding whether a scanned series stays bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendConfig {
    pub growth_factor: f64,
    pub abs_threshold: f64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig { growth_factor: 1.05, abs_threshold: 1e3 }
    }
}

impl TrendConfig {
    /// Max over the last quarter within `growth_factor` of the max over the
    /// first quarter, and under `abs_threshold`.
    pub fn is_bounded(&self, values: &[f64]) -> bool {
        if values.is_empty() {
            return true;
        }
        let q = (values.len() / 4).max(1);
        let first = values[..q].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let last = values[values.len() - q..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        last <= self.growth_factor * first + 1e-12 && last <= self.abs_threshold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowSeries {
    pub a: f64,
    pub origins: Vec<f64>,
    pub values: Vec<f64>,
}

impl WindowSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Origins `0, step, 2 step, …` with `x + a ≤ X`.
pub(crate) fn origins(domain_end: f64, a: f64, step: f64) -> Vec<f64> {
    let last = ((domain_end - a) / step + 1e-9).floor();
    if last < 0.0 {
        return Vec::new();
    }
    (0..=last as usize).map(|i| i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowDeviation {
    /// Minimizing constant `∫ s / a`.
    pub c_min: C64,
    /// `min_c ∫ |s − c|²`
    pub dev: f64,
    /// `∫∫ |s(ξ) − s(η)|² dξ dη = 2 a dev`
    pub dbl: f64,
}

/// Optimal constant, deviation and double integral of `s` on `[x, x + a]`.
pub fn window_deviation(s: &Antiderivative, x: f64, a: f64) -> Result<WindowDeviation> {
    if !(a > 0.0) {
        return Err(Error::parameter(format!("window length {a} must be positive")));
    }
    s.check_interval(Interval { a: x, b: x + a })?;
    let m = s.moments_unchecked(x, x + a);
    let c_min = m.m0 / a;
    // second pass around the mean keeps dev accurate when |c_min| ≫ spread
    let dev = s.centered_l2(x, x + a, c_min);
    Ok(WindowDeviation { c_min, dev, dbl: 2.0 * a * dev })
}

/// Tensor Gauss–Legendre estimate of `∫∫ |s(ξ) − s(η)|²` over
/// `[x, x + a]²` with `n` nodes per panel, panels split at breakpoints.
pub fn dbl_bruteforce(s: &Antiderivative, x: f64, a: f64, n: usize) -> Result<f64> {
    if n < 8 {
        return Err(Error::parameter(format!("grid size {n} below 8")));
    }
    s.check_interval(Interval { a: x, b: x + a })?;
    let nodes: Vec<(f64, C64)> = quad::panels(s.breakpoints(), x, x + a)
        .into_iter()
        .flat_map(|(lo, hi)| quad::mapped_rule(n, lo, hi))
        .map(|(p, w)| (w, s.value(p)))
        .collect();
    let mut total = 0.0;
    for &(wi, si) in &nodes {
        let row: f64 = nodes.iter().map(|&(wj, sj)| wj * (si - sj).norm_sqr()).sum();
        total += wi * row;
    }
    Ok(total)
}

/// Double integral over windows `[x_i, x_i + a]`, `x_i = i a / 2`, and
/// whether the series is bounded (refuting the necessary condition).
pub fn scan_necessary(s: &Antiderivative, a: f64, trend: &TrendConfig) -> Result<(WindowSeries, bool)> {
    if !(a > 0.0 && a <= s.domain_end()) {
        return Err(Error::parameter(format!("window length {a} outside (0, {}]", s.domain_end())));
    }
    let xs = origins(s.domain_end(), a, a / 2.0);
    let values = xs
        .par_iter()
        .map(|&x| window_deviation(s, x, a).map(|w| w.dbl))
        .collect::<Result<Vec<_>>>()?;
    let refuted = trend.is_bounded(&values);
    Ok((WindowSeries { a, origins: xs, values }, refuted))
}

/// Measure of `{(x, t) ∈ window² : |s(x) − s(t)| < A}` from an `n × n`
/// midpoint grid whose cells do not straddle breakpoints.
pub fn ismagilov_measure(s: &Antiderivative, window: Interval, big_a: f64, n: usize) -> Result<f64> {
    if n < 32 {
        return Err(Error::parameter(format!("grid size {n} below 32")));
    }
    s.check_interval(window)?;
    let cells = s.midpoint_samples(window.a, window.b, window.len() / n as f64);
    let total = cells
        .par_iter()
        .map(|&(_, wi, si)| {
            cells
                .iter()
                .filter(|&&(_, _, sj)| (si - sj).norm() < big_a)
                .map(|&(_, wj, _)| wi * wj)
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .sum();
    Ok(total)
}
