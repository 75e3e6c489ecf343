//! Block-by-block schedule search for the staircase counterexample.

use anyhow::{bail, Result};
use serde::Serialize;

use distpot::forms::{assemble, hermitian_lambda_min, Gauge};
use distpot::potential::{gauge_amplitude, shifted_spike, Block};
use distpot::{Antiderivative, Interval};

pub const MAX_DOUBLINGS: u32 = 40;

#[derive(Debug, Clone, Serialize)]
pub struct BlockRecord {
    pub k: usize,
    pub n: u32,
    pub h: f64,
    pub mu: f64,
    pub a: f64,
    pub doublings: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub theta: f64,
    pub epsilon: f64,
    pub h0: f64,
    pub mesh: usize,
    pub blocks: Vec<BlockRecord>,
}

/// Smallest eigenvalue of `∫|y' − κ₁ g y|² − κ₂ ∫ g²|y|²` over the three
/// windows around a spike placed on `[1, 2]`, `g = (1 − θ)^{1/3} γ_h`,
/// `κ₁ = (1 − θ)^{−1/3}`, `κ₂ = κ₁² − κ₁`.
pub fn gauge_form_minimum(h: f64, theta: f64, mesh: usize) -> Result<f64> {
    let amp = gauge_amplitude(theta)?;
    let g = shifted_spike(h, amp, 1.0, 3.0)?;
    let zero = Antiderivative::zero(3.0)?;
    let kappa1 = 1.0 / amp;
    let gauge = Gauge { g: &g, kappa1, kappa2: kappa1 * kappa1 - kappa1 };
    // the spike's inner layer has width 3/h²
    let n = mesh.max((16.0 * h * h).ceil() as usize).min(1 << 22);
    let mut mu = f64::INFINITY;
    for (lo, hi) in [(0.5, 1.5), (1.0, 2.0), (1.5, 2.5)] {
        let w = assemble(&zero, Interval::new(lo, hi)?, n, Some(gauge))?;
        mu = mu.min(hermitian_lambda_min(&w)?);
    }
    Ok(mu)
}

/// For each of `count` blocks: double `h` from the previous value until
/// `A = −μ/(1 + ε)` clears the spacing floor, then take `N = ⌊A⌋`, so that
/// `N ≤ A < N + 1`.
pub fn s2_schedule(theta: f64, count: usize, h0: f64, mesh: usize) -> Result<(Vec<Block>, Provenance)> {
    let amp = gauge_amplitude(theta)?;
    let one_plus_eps = 1.0 / amp;
    let mut blocks = Vec::with_capacity(count);
    let mut records = Vec::with_capacity(count);
    let mut h = h0;
    let mut prev: Option<u32> = None;
    for k in 1..=count {
        let floor_n = prev.map_or(1.0, |p| p as f64 + 3.0);
        let mut doublings = 0;
        loop {
            let mu = gauge_form_minimum(h, theta, mesh)?;
            let a = -mu / one_plus_eps;
            if a.is_finite() && a.floor() >= floor_n {
                let n = a.floor() as u32;
                blocks.push(Block { n, h, a });
                records.push(BlockRecord { k, n, h, mu, a, doublings });
                prev = Some(n);
                break;
            }
            if doublings == MAX_DOUBLINGS {
                bail!("block {k}: no admissible spike height after {MAX_DOUBLINGS} doublings (last h = {h})");
            }
            h *= 2.0;
            doublings += 1;
        }
    }
    let prov = Provenance { theta, epsilon: one_plus_eps - 1.0, h0, mesh, blocks: records };
    Ok((blocks, prov))
}
