//! The first-order system for `(y, y^[1])` with `y^[1] = y' − s y`:
//!
//! ```text
//! (y, y^[1])' = [[s, 1], [−s², −s]] (y, y^[1]) − (0, f)
//! ```
//!
//! Each panel is advanced by the exact exponential of the panel-averaged
//! matrix, which needs only `∫ s` and `∫ s²`. The state is continuous across
//! jumps of `s`, so panels aligned with the breakpoints need no impulse
//! handling.

use serde::Serialize;

use crate::criteria::window_deviation;
use crate::error::{Error, Result};
use crate::potential::{Antiderivative, Interval, C64};
use crate::quad;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct State {
    pub y: C64,
    /// Quasi-derivative `y' − s y`.
    pub y1: C64,
}

impl State {
    pub const fn new(y: C64, y1: C64) -> Self {
        State { y, y1 }
    }

    pub fn real(y: f64, y1: f64) -> Self {
        State { y: C64::new(y, 0.0), y1: C64::new(y1, 0.0) }
    }

    pub fn max_abs(&self) -> f64 {
        self.y.norm().max(self.y1.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PanelMoments {
    pub m0: C64,
    pub m2: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub nodes: Vec<f64>,
    pub states: Vec<State>,
    /// `(∫ s, ∫ s²)` for each panel between consecutive nodes.
    pub panels: Vec<PanelMoments>,
}

impl Trajectory {
    pub fn last(&self) -> State {
        *self.states.last().expect("trajectory has at least one node")
    }
}

/// 2×2 complex matrix, row major.
type Mat2 = [[C64; 2]; 2];

fn apply(m: &Mat2, v: (C64, C64)) -> (C64, C64) {
    (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
}

/// `exp([[m0, h], [−m2, −m0]])`, using that its square is `ω²` times the
/// identity with `ω² = m0² − h m2`.
fn transfer(h: f64, m: PanelMoments) -> Mat2 {
    let w2 = m.m0 * m.m0 - m.m2 * h;
    let (ch, shc) = if w2.norm() < 1e-3 {
        (
            ONE + w2 * (0.5 + w2 * (1.0 / 24.0 + w2 / 720.0)),
            ONE + w2 * (1.0 / 6.0 + w2 * (1.0 / 120.0 + w2 / 5040.0)),
        )
    } else {
        let w = w2.sqrt();
        (w.cosh(), w.sinh() / w)
    };
    [
        [ch + shc * m.m0, shc * h],
        [-shc * m.m2, ch - shc * m.m0],
    ]
}

/// Panel ends covering `[a, b]` with at least `n` cells in total, refined so
/// that no panel straddles a breakpoint.
fn panel_nodes(breaks: &[f64], a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / n as f64;
    let mut nodes = vec![a];
    for (lo, hi) in quad::panels(breaks, a, b) {
        let cells = ((hi - lo) / step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let w = (hi - lo) / cells as f64;
        nodes.extend((1..cells).map(|c| lo + c as f64 * w));
        nodes.push(hi);
    }
    nodes
}

fn check_setup(s: &Antiderivative, iv: Interval, n: usize, f: Option<&Antiderivative>) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::parameter("need at least one panel"));
    }
    s.check_interval(iv)?;
    let mut breaks = s.breakpoints().to_vec();
    if let Some(f) = f {
        f.check_interval(iv)?;
        breaks.extend_from_slice(f.breakpoints());
    }
    Ok(panel_nodes(&breaks, iv.a, iv.b, n))
}

/// One-sided values `(f(x0+), f(x1−))` on the panel `[x0, x1]`.
fn forcing_ends(f: Option<&Antiderivative>, x0: f64, x1: f64) -> (C64, C64) {
    match f {
        None => (ZERO, ZERO),
        Some(f) => {
            let i = f.piece_index(0.5 * (x0 + x1));
            (f.value_in_piece(i, x0), f.value_in_piece(i, x1))
        }
    }
}

fn panel_moments(s: &Antiderivative, nodes: &[f64]) -> Vec<PanelMoments> {
    nodes
        .windows(2)
        .map(|w| {
            let m = s.moments_unchecked(w[0], w[1]);
            PanelMoments { m0: m.m0, m2: m.m2 }
        })
        .collect()
}

/// Integrates from `init` at `I.a` across `I` with at least `n` panels.
///
/// The forcing enters through the trapezoid rule applied to the
/// variation-of-constants integral, so the scheme stays second order.
pub fn propagate(
    s: &Antiderivative,
    iv: Interval,
    init: State,
    f: Option<&Antiderivative>,
    n: usize,
) -> Result<Trajectory> {
    let nodes = check_setup(s, iv, n, f)?;
    let panels = panel_moments(s, &nodes);
    let mut states = Vec::with_capacity(nodes.len());
    states.push(init);
    let mut cur = (init.y, init.y1);
    for (k, w) in nodes.windows(2).enumerate() {
        let h = w[1] - w[0];
        let t = transfer(h, panels[k]);
        let (f0, f1) = forcing_ends(f, w[0], w[1]);
        let (ty, ty1) = apply(&t, cur);
        let (tf, tf1) = apply(&t, (ZERO, f0));
        cur = (ty - tf * (0.5 * h), ty1 - (tf1 + f1) * (0.5 * h));
        if !(cur.0.norm().is_finite() && cur.1.norm().is_finite()) {
            return Err(Error::Numeric(format!("solution overflowed near x = {}", w[1])));
        }
        states.push(State::new(cur.0, cur.1));
    }
    Ok(Trajectory { nodes, states, panels })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FundamentalPair {
    /// `(φ, φ^[1])(a) = (0, 1)`
    pub phi: Trajectory,
    /// `(ψ, ψ^[1])(a) = (1, 0)`
    pub psi: Trajectory,
}

impl FundamentalPair {
    /// `φ ψ^[1] − ψ φ^[1]` at every node; `−1` for exact solutions.
    pub fn wronskian(&self) -> Vec<C64> {
        self.phi
            .states
            .iter()
            .zip(&self.psi.states)
            .map(|(p, q)| p.y * q.y1 - q.y * p.y1)
            .collect()
    }

    /// Largest modulus among `φ, φ^[1], ψ, ψ^[1]` over the nodes.
    pub fn sup_norm(&self) -> f64 {
        self.phi
            .states
            .iter()
            .chain(&self.psi.states)
            .map(State::max_abs)
            .fold(0.0, f64::max)
    }
}

pub fn fundamental_pair(s: &Antiderivative, iv: Interval, n: usize) -> Result<FundamentalPair> {
    let phi = propagate(s, iv, State::real(0.0, 1.0), None, n)?;
    let psi = propagate(s, iv, State::real(1.0, 0.0), None, n)?;
    Ok(FundamentalPair { phi, psi })
}

/// `y = ψ ∫ φ f − φ ∫ ψ f` and `y^[1] = ψ^[1] ∫ φ f − φ^[1] ∫ ψ f`, the
/// solution of `l(y) = f` with zero data at `I.a`, with trapezoid integrals
/// on the panel grid.
pub fn cauchy_apply(s: &Antiderivative, iv: Interval, f: &Antiderivative, n: usize) -> Result<Trajectory> {
    let nodes = check_setup(s, iv, n, Some(f))?;
    let panels = panel_moments(s, &nodes);
    let (mut phi, mut psi) = (State::real(0.0, 1.0), State::real(1.0, 0.0));
    let (mut j_phi, mut j_psi) = (ZERO, ZERO);
    let mut states = Vec::with_capacity(nodes.len());
    states.push(State::new(ZERO, ZERO));
    for (k, w) in nodes.windows(2).enumerate() {
        let h = w[1] - w[0];
        let t = transfer(h, panels[k]);
        let (f0, f1) = forcing_ends(Some(f), w[0], w[1]);
        let next_phi = apply(&t, (phi.y, phi.y1));
        let next_psi = apply(&t, (psi.y, psi.y1));
        j_phi += (phi.y * f0 + next_phi.0 * f1) * (0.5 * h);
        j_psi += (psi.y * f0 + next_psi.0 * f1) * (0.5 * h);
        phi = State::new(next_phi.0, next_phi.1);
        psi = State::new(next_psi.0, next_psi.1);
        states.push(State::new(
            psi.y * j_phi - phi.y * j_psi,
            psi.y1 * j_phi - phi.y1 * j_psi,
        ));
    }
    Ok(Trajectory { nodes, states, panels })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthBound {
    /// `max(|φ|, |φ^[1]|, |ψ|, |ψ^[1]|)` for `s` with its optimal constant
    /// removed.
    pub m: f64,
    /// `|I| < 1/8` and `min_c ∫_I |s − c|² < 1/8`.
    pub applicable: bool,
    pub length: f64,
    pub deviation: f64,
    /// `M ≤ 2 + 1e-6`; meaningful only when applicable.
    pub holds: bool,
}

/// Panels used for the growth bound.
pub const GROWTH_PANELS: usize = 2048;

pub fn growth_bound_check(s: &Antiderivative, iv: Interval) -> Result<GrowthBound> {
    let wd = window_deviation(s, iv.a, iv.len())?;
    let shifted = s.add_constant(-wd.c_min);
    let pair = fundamental_pair(&shifted, iv, GROWTH_PANELS)?;
    let m = pair.sup_norm();
    let applicable = iv.len() < 0.125 && wd.dev < 0.125;
    Ok(GrowthBound { m, applicable, length: iv.len(), deviation: wd.dev, holds: m <= 2.0 + 1e-6 })
}

/// Per-panel weak residual `y^[1](x1) − y^[1](x0) + ∫ (s y^[1] + s² y + f)`,
/// with interior states rebuilt by the same one-step map from `x0`.
pub fn panel_residuals(s: &Antiderivative, traj: &Trajectory, f: Option<&Antiderivative>) -> Vec<f64> {
    traj.nodes
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let (x0, x1) = (w[0], w[1]);
            let start = traj.states[k];
            let inner = |x: f64| -> [f64; 2] {
                let sub = if x > x0 {
                    let m = s.moments_unchecked(x0, x);
                    let t = transfer(x - x0, PanelMoments { m0: m.m0, m2: m.m2 });
                    let (f0, fx) = forcing_ends(f, x0, x);
                    let (ty, ty1) = apply(&t, (start.y, start.y1));
                    let (tf, tf1) = apply(&t, (ZERO, f0));
                    let h = x - x0;
                    (ty - tf * (0.5 * h), ty1 - (tf1 + fx) * (0.5 * h))
                } else {
                    (start.y, start.y1)
                };
                let sv = s.value(x);
                let fv = f.map_or(ZERO, |f| f.value(x));
                let r = sv * sub.1 + sv * sv * sub.0 + fv;
                [r.re, r.im]
            };
            let integral = quad::integrate(inner, &[], x0, x1, 1e-12);
            let diff = traj.states[k + 1].y1 - start.y1;
            (diff + C64::new(integral[0], integral[1])).norm()
        })
        .collect()
}
