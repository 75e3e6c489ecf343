//! Constructors for delta sums, the Miura map `s = bx + γ + ∫γ²`, the
//! spike profile `v_h` with its logarithmic derivative, and the two
//! counterexample families assembled from them.

use super::{simplify, Antiderivative, Jump, PieceTerm, C64};
use crate::error::{Error, Result};
use crate::quad;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `s` with no smooth part and a jump `strengths[k]` at each `positions[k]`.
pub fn delta_sum(positions: &[f64], strengths: &[C64], domain_end: f64) -> Result<Antiderivative> {
    if positions.len() != strengths.len() {
        return Err(Error::Dimension { expected: positions.len(), got: strengths.len() });
    }
    if positions.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::validation("delta positions must be strictly increasing"));
    }
    if let Some(&p) = positions.iter().find(|&&p| !(p > 0.0 && p < domain_end)) {
        return Err(Error::validation(format!("delta position {p} outside (0, {domain_end})")));
    }
    let mut bps = vec![0.0];
    bps.extend_from_slice(positions);
    bps.push(domain_end);
    let jumps = positions
        .iter()
        .zip(strengths)
        .map(|(&at, &delta)| Jump { at, delta })
        .collect();
    Antiderivative::new(domain_end, bps, vec![vec![]; positions.len() + 1], jumps)
}

/// Miura map `s(x) = b x + γ(x) + ∫_0^x γ(t)² dt` for real `γ`.
///
/// Each sub-interval of `γ` must carry one pure term: a polynomial of degree
/// at most one (possibly via the jump offset alone), or a reciprocal with no
/// accumulated jump offset. Jumps of `γ` become jumps of `s`.
pub fn miura(gamma: &Antiderivative, b: f64) -> Result<Antiderivative> {
    if !gamma.is_real() {
        return Err(Error::validation("Miura map needs a real-valued gamma"));
    }
    let bps = gamma.breakpoints().to_vec();
    let mut pieces = Vec::with_capacity(gamma.num_pieces());
    let mut acc = 0.0; // ∫_0^{x_i} γ²
    for (i, terms) in gamma.pieces().iter().enumerate() {
        let (xl, xr) = (bps[i], bps[i + 1]);
        let len = xr - xl;
        let off = gamma.offset(i).re;
        let mut out = vec![PieceTerm::linear(re(b * xl + acc), re(b))];
        out.extend(terms.iter().copied());
        let mut nonzero = terms.iter().filter(|t| !t.is_zero());
        let term = nonzero.next();
        if nonzero.next().is_some() {
            return Err(Error::unsupported(format!(
                "gamma mixes several terms on [{xl}, {xr}]"
            )));
        }
        match term.copied() {
            None => {
                out.push(PieceTerm::linear(ZERO, re(off * off)));
                acc += off * off * len;
            }
            Some(PieceTerm::Poly(c)) => {
                if c[2].re != 0.0 || c[3].re != 0.0 {
                    return Err(Error::unsupported(format!(
                        "gamma has a polynomial of degree above one on [{xl}, {xr}]"
                    )));
                }
                let (c0, c1) = (c[0].re + off, c[1].re);
                out.push(PieceTerm::Poly([ZERO, re(c0 * c0), re(c0 * c1), re(c1 * c1 / 3.0)]));
                acc += c0 * c0 * len + c0 * c1 * len * len + c1 * c1 * len * len * len / 3.0;
            }
            Some(PieceTerm::Recip { amp, pole }) => {
                if off != 0.0 {
                    return Err(Error::unsupported(format!(
                        "gamma combines a reciprocal with a jump offset on [{xl}, {xr}]"
                    )));
                }
                let c2 = amp.re * amp.re;
                out.push(PieceTerm::constant(re(c2 / (xl - pole))));
                out.push(PieceTerm::Recip { amp: re(-c2), pole });
                acc += c2 / (xl - pole) - c2 / (xr - pole);
            }
        }
        pieces.push(simplify(out.into_iter()));
    }
    Antiderivative::new(gamma.domain_end(), bps, pieces, gamma.jumps().to_vec())
}

/// The spike profile `v_h` on `[0, 1]` and `γ_h = v_h'/v_h`, continued by
/// `γ_h = h` near `0` and odd reflection about `1/2`.
#[derive(Debug, Clone)]
pub struct VhProfile {
    pub h: f64,
    pub delta: f64,
    /// `γ_h` on `[0, 1]`.
    pub gamma: Antiderivative,
}

impl VhProfile {
    pub fn new(h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 1.0 + 7f64.sqrt()) {
            return Err(Error::parameter(format!("spike height h = {h} must exceed 1 + sqrt(7)")));
        }
        let d = 3.0 / (h * h);
        let pstar = 0.5 - d - (0.5 - d) * d / h;
        let one = re(1.0);
        let bps = vec![0.0, 1.0 / h, 0.5 - d, 0.5, 0.5 + d, 1.0 - 1.0 / h, 1.0];
        let pieces = vec![
            vec![PieceTerm::constant(re(h))],
            vec![PieceTerm::Recip { amp: one, pole: 0.0 }],
            vec![PieceTerm::Recip { amp: one, pole: pstar }],
            vec![PieceTerm::Recip { amp: one, pole: 1.0 - pstar }],
            vec![PieceTerm::Recip { amp: one, pole: 1.0 }],
            vec![PieceTerm::constant(re(-h))],
        ];
        let gamma = Antiderivative::new(1.0, bps, pieces, vec![])?;
        Ok(VhProfile { h, delta: d, gamma })
    }

    /// Kinks of `v_h`.
    pub fn nodes(&self) -> [f64; 5] {
        [0.0, 0.5 - self.delta, 0.5, 0.5 + self.delta, 1.0]
    }

    pub fn v(&self, x: f64) -> f64 {
        let x = if x > 0.5 { 1.0 - x } else { x };
        if x <= 0.5 - self.delta {
            x
        } else {
            0.5 - self.delta + self.h * (x + self.delta - 0.5) / self.delta
        }
    }

    pub fn v_prime(&self, x: f64) -> f64 {
        let (sign, y) = if x > 0.5 { (-1.0, 1.0 - x) } else { (1.0, x) };
        if y < 0.5 - self.delta {
            sign
        } else {
            sign * self.h / self.delta
        }
    }

    fn breaks(&self) -> Vec<f64> {
        self.gamma.breakpoints().to_vec()
    }

    /// `∫_0^1 v_h²`.
    pub fn norm_sq(&self) -> f64 {
        quad::integrate(|x| [self.v(x).powi(2)], &self.breaks(), 0.0, 1.0, 1e-12)[0]
    }

    /// `∫ (v' − γ v)² − α ∫ γ² v²` over `[0, 1]`.
    pub fn m_form(&self, alpha: f64) -> f64 {
        let r = quad::integrate(
            |x| {
                let g = self.gamma.value(x).re;
                let v = self.v(x);
                let d = self.v_prime(x) - g * v;
                [d * d, g * g * v * v]
            },
            &self.breaks(),
            0.0,
            1.0,
            1e-12,
        );
        r[0] - alpha * r[1]
    }
}

/// `γ_h` scaled by `amp` and moved onto `[at, at + 1]` inside `[0, X]`,
/// zero elsewhere.
pub fn shifted_spike(h: f64, amp: f64, at: f64, domain_end: f64) -> Result<Antiderivative> {
    shifted_spikes(&[(h, at)], amp, domain_end)
}

fn shifted_spikes(blocks: &[(f64, f64)], amp: f64, domain_end: f64) -> Result<Antiderivative> {
    let mut bps = vec![0.0];
    let mut pieces: Vec<Vec<PieceTerm>> = Vec::new();
    for &(h, at) in blocks {
        if at < *bps.last().unwrap() || at + 1.0 > domain_end {
            return Err(Error::validation(format!("spike block at {at} does not fit")));
        }
        let prof = VhProfile::new(h)?;
        if at > *bps.last().unwrap() {
            bps.push(at);
            pieces.push(vec![]);
        }
        let g = &prof.gamma;
        for (i, terms) in g.pieces().iter().enumerate() {
            pieces.push(
                terms
                    .iter()
                    .map(|t| match *t {
                        PieceTerm::Recip { amp: c, pole } => PieceTerm::Recip { amp: c * amp, pole: pole + at },
                        PieceTerm::Poly(c) => PieceTerm::Poly(c.map(|z| z * amp)),
                    })
                    .collect(),
            );
            bps.push(g.breakpoints()[i + 1] + at);
        }
    }
    if domain_end > *bps.last().unwrap() {
        bps.push(domain_end);
        pieces.push(vec![]);
    }
    Antiderivative::new(domain_end, bps, pieces, vec![])
}

/// One bump block of the second counterexample: spike at `[n, n + 1]` with
/// height `h` and plateau slope `a` on `(n − 1/2, n + 3/2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Block {
    pub n: u32,
    pub h: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CounterexampleKind {
    /// `S = x²/2`, blocks at `N_k = 4 + k` with `h_k = N_k`, `k = 1..=blocks`.
    S1 { blocks: usize, theta: f64, domain_end: Option<f64> },
    /// Staircase `S` with the supplied schedule.
    S2 { theta: f64, schedule: Vec<Block>, domain_end: Option<f64> },
}

/// `(1 − θ)^{1/3}`, the amplitude of the gauge function `g`.
pub fn gauge_amplitude(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::parameter(format!("theta = {theta} must lie in (0, 1)")));
    }
    Ok((1.0 - theta).cbrt())
}

/// `s = S + g + ∫g²` for either counterexample family.
pub fn build_counterexample(kind: &CounterexampleKind) -> Result<Antiderivative> {
    match kind {
        CounterexampleKind::S1 { blocks, theta, domain_end } => {
            let amp = gauge_amplitude(*theta)?;
            let last = 4.0 + *blocks as f64;
            let x_end = domain_end.unwrap_or(last + 2.0);
            if x_end < last + 1.0 {
                return Err(Error::validation(format!("domain end {x_end} cuts the last block")));
            }
            let spikes: Vec<(f64, f64)> = (1..=*blocks).map(|k| ((4 + k) as f64, (4 + k) as f64)).collect();
            let g = shifted_spikes(&spikes, amp, x_end)?;
            let big_s = Antiderivative::real_polynomial(x_end, &[0.0, 0.0, 0.5])?;
            miura(&g, 0.0)?.add(&big_s)
        }
        CounterexampleKind::S2 { theta, schedule, domain_end } => {
            let amp = gauge_amplitude(*theta)?;
            let mut prev: Option<u32> = None;
            for blk in schedule {
                if blk.n < 1 {
                    return Err(Error::validation("block position must be at least 1"));
                }
                if let Some(p) = prev {
                    if blk.n < p + 3 {
                        return Err(Error::validation(format!(
                            "blocks at {p} and {} are closer than 3",
                            blk.n
                        )));
                    }
                }
                let nf = blk.n as f64;
                if !(blk.a >= nf - 1.0 && blk.a < nf + 1.0) {
                    return Err(Error::validation(format!(
                        "plateau slope {} outside [{}, {})",
                        blk.a,
                        nf - 1.0,
                        nf + 1.0
                    )));
                }
                prev = Some(blk.n);
            }
            let min_end = schedule.last().map_or(1.0, |b| b.n as f64 + 2.0);
            let x_end = domain_end.unwrap_or(min_end);
            if x_end < min_end {
                return Err(Error::validation(format!("domain end {x_end} cuts the last block")));
            }
            let big_s = staircase(schedule, x_end)?;
            let spikes: Vec<(f64, f64)> = schedule.iter().map(|b| (b.h, b.n as f64)).collect();
            let g = shifted_spikes(&spikes, amp, x_end)?;
            miura(&g, 0.0)?.add(&big_s)
        }
    }
}

/// Continuous piecewise-linear `S` with `S(0) = 0` and slope `l − 1` on
/// `(l − 1, l)`, overridden near each block.
fn staircase(schedule: &[Block], x_end: f64) -> Result<Antiderivative> {
    let slope_at = |x: f64| -> f64 {
        for b in schedule {
            let n = b.n as f64;
            if x > n - 1.0 && x < n + 2.0 {
                return if x < n - 0.5 {
                    n - 1.0
                } else if x < n + 1.5 {
                    b.a
                } else {
                    n + 1.0
                };
            }
        }
        x.floor()
    };
    let mut cuts: Vec<f64> = (0..).map(|l| l as f64).take_while(|&l| l < x_end).collect();
    for b in schedule {
        let n = b.n as f64;
        cuts.extend([n - 0.5, n + 1.5]);
    }
    cuts.retain(|&c| c < x_end);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.push(x_end);
    let mut pieces = Vec::with_capacity(cuts.len() - 1);
    let mut value = 0.0;
    for w in cuts.windows(2) {
        let k = slope_at(0.5 * (w[0] + w[1]));
        pieces.push(vec![PieceTerm::linear(re(value), re(k))]);
        value += k * (w[1] - w[0]);
    }
    Antiderivative::new(x_end, cuts, pieces, vec![])
}
