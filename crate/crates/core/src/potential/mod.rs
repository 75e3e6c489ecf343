//! Exact piecewise model of the antiderivative `s` of a distributional
//! potential `q = s'`.
//!
//! On each sub-interval `[x_i, x_{i+1})` the function is a finite sum of
//! [`PieceTerm`]s: cubic polynomials in the local variable `t = x - x_i`, and
//! reciprocals `c / (x - p)` with a real pole outside the sub-interval. Jumps
//! of `s` (point interactions `Δ δ(x - x_j)` of the potential) are stored
//! separately as cumulative offsets and evaluated right-continuously.

mod generators;
pub mod io;

pub use generators::{
    build_counterexample, delta_sum, gauge_amplitude, miura, shifted_spike, Block, CounterexampleKind, VhProfile,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

pub type C64 = Complex64;

/// Relative distance a reciprocal pole must keep from its sub-interval.
pub const POLE_CLEARANCE: f64 = 1e-12;

/// Tolerance (relative to the domain length) for matching locations to
/// breakpoints.
const SNAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PieceTerm {
    /// `c0 + c1 t + c2 t^2 + c3 t^3` with `t` measured from the left end of
    /// the sub-interval carrying the term.
    Poly([C64; 4]),
    /// `amp / (x - pole)` in the absolute coordinate.
    Recip { amp: C64, pole: f64 },
}

impl PieceTerm {
    pub fn constant(c: C64) -> Self {
        PieceTerm::Poly([c, C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])
    }

    pub fn linear(c0: C64, c1: C64) -> Self {
        PieceTerm::Poly([c0, c1, C64::new(0.0, 0.0), C64::new(0.0, 0.0)])
    }

    #[inline]
    pub fn eval(&self, x: f64, left: f64) -> C64 {
        match *self {
            PieceTerm::Poly(c) => {
                let t = x - left;
                ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
            }
            PieceTerm::Recip { amp, pole } => amp / (x - pole),
        }
    }

    #[inline]
    pub fn derivative(&self, x: f64, left: f64) -> C64 {
        match *self {
            PieceTerm::Poly(c) => {
                let t = x - left;
                (c[3] * (3.0 * t) + c[2] * 2.0) * t + c[1]
            }
            PieceTerm::Recip { amp, pole } => -amp / ((x - pole) * (x - pole)),
        }
    }

    fn scaled(&self, k: C64) -> Self {
        match *self {
            PieceTerm::Poly(c) => PieceTerm::Poly([c[0] * k, c[1] * k, c[2] * k, c[3] * k]),
            PieceTerm::Recip { amp, pole } => PieceTerm::Recip { amp: amp * k, pole },
        }
    }

    /// Re-expresses the term for a sub-interval starting `shift` to the right
    /// of the current one.
    fn shifted(&self, shift: f64) -> Self {
        match *self {
            PieceTerm::Poly(c) => {
                let d = shift;
                PieceTerm::Poly([
                    c[0] + c[1] * d + c[2] * (d * d) + c[3] * (d * d * d),
                    c[1] + c[2] * (2.0 * d) + c[3] * (3.0 * d * d),
                    c[2] + c[3] * (3.0 * d),
                    c[3],
                ])
            }
            other => other,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            PieceTerm::Poly(c) => c.iter().all(|z| z.im == 0.0),
            PieceTerm::Recip { amp, .. } => amp.im == 0.0,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            PieceTerm::Poly(c) => c.iter().all(|z| *z == C64::new(0.0, 0.0)),
            PieceTerm::Recip { amp, .. } => *amp == C64::new(0.0, 0.0),
        }
    }
}

/// A point interaction: `s` gains `delta` at `at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub at: f64,
    pub delta: C64,
}

/// A closed segment `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::validation(format!("interval [{a}, {b}] is empty or not finite")));
        }
        Ok(Interval { a, b })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}

/// Integral moments of `s` over an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// `∫ s`
    pub m0: C64,
    /// `∫ |s|^2`
    pub q2: f64,
    /// `∫ s^2`
    pub m2: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Antiderivative {
    domain_end: f64,
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<PieceTerm>>,
    jumps: Vec<Jump>,
    /// Sum of all jumps located at or left of `breakpoints[i]`.
    offsets: Vec<C64>,
}

impl Antiderivative {
    pub fn new(
        domain_end: f64,
        breakpoints: Vec<f64>,
        pieces: Vec<Vec<PieceTerm>>,
        jumps: Vec<Jump>,
    ) -> Result<Self> {
        if !(domain_end.is_finite() && domain_end > 0.0) {
            return Err(Error::validation(format!("domain end {domain_end} must be positive")));
        }
        if breakpoints.len() < 2 {
            return Err(Error::validation("need at least the breakpoints 0 and X"));
        }
        if breakpoints[0] != 0.0 || breakpoints[breakpoints.len() - 1] != domain_end {
            return Err(Error::validation("breakpoints must start at 0 and end at the domain end"));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::validation("breakpoints must be strictly increasing"));
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(Error::validation(format!(
                "{} sub-intervals but {} piece lists",
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        for (i, terms) in pieces.iter().enumerate() {
            let (lo, hi) = (breakpoints[i], breakpoints[i + 1]);
            for term in terms {
                match *term {
                    PieceTerm::Poly(c) => {
                        if c.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                            return Err(Error::validation("non-finite polynomial coefficient"));
                        }
                    }
                    PieceTerm::Recip { amp, pole } => {
                        if !(amp.re.is_finite() && amp.im.is_finite() && pole.is_finite()) {
                            return Err(Error::validation("non-finite reciprocal term"));
                        }
                        let clearance = POLE_CLEARANCE * (hi - lo);
                        if pole > lo - clearance && pole < hi + clearance {
                            return Err(Error::validation(format!(
                                "pole {pole} touches sub-interval [{lo}, {hi}]"
                            )));
                        }
                    }
                }
            }
        }
        let tol = SNAP_TOL * domain_end.max(1.0);
        let mut snapped = Vec::with_capacity(jumps.len());
        for j in jumps {
            if !(j.delta.re.is_finite() && j.delta.im.is_finite()) {
                return Err(Error::validation("non-finite jump"));
            }
            if !(j.at > 0.0 && j.at < domain_end) {
                return Err(Error::validation(format!("jump at {} outside (0, X)", j.at)));
            }
            let idx = breakpoints.partition_point(|&b| b < j.at - tol);
            match breakpoints.get(idx) {
                Some(&b) if (b - j.at).abs() <= tol => snapped.push(Jump { at: b, delta: j.delta }),
                _ => {
                    return Err(Error::validation(format!("jump at {} is not a breakpoint", j.at)));
                }
            }
        }
        snapped.sort_by(|a, b| a.at.total_cmp(&b.at));
        let mut jumps: Vec<Jump> = Vec::with_capacity(snapped.len());
        for j in snapped {
            match jumps.last_mut() {
                Some(last) if last.at == j.at => last.delta += j.delta,
                _ => jumps.push(j),
            }
        }
        let mut s = Antiderivative {
            domain_end,
            breakpoints,
            pieces,
            jumps,
            offsets: Vec::new(),
        };
        s.rebuild_offsets();
        Ok(s)
    }

    /// `s ≡ 0` on `[0, X]`.
    pub fn zero(domain_end: f64) -> Result<Self> {
        Self::new(domain_end, vec![0.0, domain_end], vec![vec![]], vec![])
    }

    /// A single cubic `Σ c_k x^k` on the whole domain.
    pub fn polynomial(domain_end: f64, coeffs: [C64; 4]) -> Result<Self> {
        Self::new(domain_end, vec![0.0, domain_end], vec![vec![PieceTerm::Poly(coeffs)]], vec![])
    }

    /// Real-coefficient convenience wrapper around [`Antiderivative::polynomial`].
    pub fn real_polynomial(domain_end: f64, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() > 4 {
            return Err(Error::validation("polynomial degree exceeds 3"));
        }
        let mut c = [C64::new(0.0, 0.0); 4];
        for (k, v) in coeffs.iter().enumerate() {
            c[k] = C64::new(*v, 0.0);
        }
        Self::polynomial(domain_end, c)
    }

    fn rebuild_offsets(&mut self) {
        let mut acc = C64::new(0.0, 0.0);
        let mut j = 0;
        self.offsets = self
            .breakpoints
            .iter()
            .map(|&b| {
                while j < self.jumps.len() && self.jumps[j].at <= b {
                    acc += self.jumps[j].delta;
                    j += 1;
                }
                acc
            })
            .collect();
    }

    pub fn domain_end(&self) -> f64 {
        self.domain_end
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<PieceTerm>] {
        &self.pieces
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Cumulative jump offset active on sub-interval `i`.
    pub fn offset(&self, i: usize) -> C64 {
        self.offsets[i]
    }

    pub fn is_real(&self) -> bool {
        self.pieces.iter().flatten().all(PieceTerm::is_real)
            && self.jumps.iter().all(|j| j.delta.im == 0.0)
    }

    /// Index of the sub-interval whose half-open span `[x_i, x_{i+1})`
    /// contains `x`; the last sub-interval also owns `X`.
    pub fn piece_index(&self, x: f64) -> usize {
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        idx.saturating_sub(1).min(self.pieces.len() - 1)
    }

    /// Value of sub-interval `i`'s representation at `x` (also used for
    /// one-sided limits at its ends).
    #[inline]
    pub fn value_in_piece(&self, i: usize, x: f64) -> C64 {
        let left = self.breakpoints[i];
        self.pieces[i].iter().fold(self.offsets[i], |acc, t| acc + t.eval(x, left))
    }

    #[inline]
    pub fn derivative_in_piece(&self, i: usize, x: f64) -> C64 {
        let left = self.breakpoints[i];
        self.pieces[i].iter().fold(C64::new(0.0, 0.0), |acc, t| acc + t.derivative(x, left))
    }

    /// Right-continuous value without the domain check.
    #[inline]
    pub fn value(&self, x: f64) -> C64 {
        self.value_in_piece(self.piece_index(x), x)
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        if !(x >= 0.0 && x <= self.domain_end) {
            return Err(Error::Domain { x, lo: 0.0, hi: self.domain_end });
        }
        Ok(self.value(x))
    }

    /// Left limit `s(x-)`; equals `eval` away from breakpoints.
    pub fn left_limit(&self, x: f64) -> Result<C64> {
        if !(x > 0.0 && x <= self.domain_end) {
            return Err(Error::Domain { x, lo: 0.0, hi: self.domain_end });
        }
        let idx = self.breakpoints.partition_point(|&b| b < x).saturating_sub(1);
        Ok(self.value_in_piece(idx.min(self.pieces.len() - 1), x))
    }

    /// Classical derivative of the piece representation (jumps excluded).
    pub fn derivative(&self, x: f64) -> C64 {
        self.derivative_in_piece(self.piece_index(x), x)
    }

    pub(crate) fn check_interval(&self, iv: Interval) -> Result<()> {
        if iv.a < 0.0 {
            return Err(Error::Domain { x: iv.a, lo: 0.0, hi: self.domain_end });
        }
        if iv.b > self.domain_end * (1.0 + 1e-14) {
            return Err(Error::Domain { x: iv.b, lo: 0.0, hi: self.domain_end });
        }
        Ok(())
    }

    /// Breakpoints strictly inside `(a, b)`.
    pub fn breaks_in(&self, a: f64, b: f64) -> Vec<f64> {
        self.breakpoints.iter().copied().filter(|&x| x > a && x < b).collect()
    }

    /// `(∫ s, ∫ |s|², ∫ s²)` over `iv`, by adaptive Gauss–Legendre on panels
    /// aligned with the breakpoints.
    pub fn moments(&self, iv: Interval) -> Result<Moments> {
        self.check_interval(iv)?;
        Ok(self.moments_unchecked(iv.a, iv.b))
    }

    pub(crate) fn moments_unchecked(&self, a: f64, b: f64) -> Moments {
        let b = b.min(self.domain_end);
        let mut acc = [0.0; 5];
        for (lo, hi) in quad::panels(&self.breakpoints, a, b) {
            let i = self.piece_index(0.5 * (lo + hi));
            let part = quad::adaptive(
                &|x| {
                    let v = self.value_in_piece(i, x);
                    let sq = v * v;
                    [v.re, v.im, v.norm_sqr(), sq.re, sq.im]
                },
                lo,
                hi,
                quad::DEFAULT_REL_TOL,
            );
            for k in 0..5 {
                acc[k] += part[k];
            }
        }
        Moments {
            m0: C64::new(acc[0], acc[1]),
            q2: acc[2],
            m2: C64::new(acc[3], acc[4]),
        }
    }

    /// `∫ |s - c|²` over `[a, b]`.
    pub(crate) fn centered_l2(&self, a: f64, b: f64, c: C64) -> f64 {
        let b = b.min(self.domain_end);
        quad::integrate(
            |x| [(self.value(x) - c).norm_sqr()],
            &self.breakpoints,
            a,
            b,
            quad::DEFAULT_REL_TOL,
        )[0]
    }

    /// Same function on a finer partition; polynomial terms are re-centred.
    pub fn refine(&self, extra: &[f64]) -> Self {
        let tol = SNAP_TOL * self.domain_end.max(1.0);
        let mut bps: Vec<f64> = self.breakpoints.clone();
        for &x in extra {
            if x > 0.0 && x < self.domain_end && bps.iter().all(|&b| (b - x).abs() > tol) {
                bps.push(x);
            }
        }
        bps.sort_by(f64::total_cmp);
        if bps.len() == self.breakpoints.len() {
            return self.clone();
        }
        let pieces = bps[..bps.len() - 1]
            .iter()
            .map(|&left| {
                let i = self.piece_index(left);
                let shift = left - self.breakpoints[i];
                self.pieces[i].iter().map(|t| t.shifted(shift)).collect()
            })
            .collect();
        let mut s = Antiderivative {
            domain_end: self.domain_end,
            breakpoints: bps,
            pieces,
            jumps: self.jumps.clone(),
            offsets: Vec::new(),
        };
        s.rebuild_offsets();
        s
    }

    /// Pointwise sum; both operands must share the domain end.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.domain_end - other.domain_end).abs() > SNAP_TOL * self.domain_end.max(1.0) {
            return Err(Error::validation(format!(
                "domain ends differ: {} vs {}",
                self.domain_end, other.domain_end
            )));
        }
        let a = self.refine(&other.breakpoints);
        let b = other.refine(&a.breakpoints);
        debug_assert_eq!(a.breakpoints.len(), b.breakpoints.len());
        let pieces = a
            .pieces
            .iter()
            .zip(&b.pieces)
            .map(|(x, y)| simplify(x.iter().chain(y.iter()).copied()))
            .collect();
        let mut jumps = a.jumps.clone();
        jumps.extend(b.jumps.iter().map(|j| Jump { at: a.snap(j.at), delta: j.delta }));
        Self::new(a.domain_end, a.breakpoints, pieces, jumps)
    }

    fn snap(&self, x: f64) -> f64 {
        let tol = SNAP_TOL * self.domain_end.max(1.0);
        self.breakpoints
            .iter()
            .copied()
            .find(|b| (b - x).abs() <= tol)
            .unwrap_or(x)
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut s = self.clone();
        for terms in s.pieces.iter_mut() {
            for t in terms.iter_mut() {
                *t = t.scaled(k);
            }
        }
        for j in s.jumps.iter_mut() {
            j.delta *= k;
        }
        s.rebuild_offsets();
        s
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    pub fn add_constant(&self, c: C64) -> Self {
        let mut s = self.clone();
        for terms in s.pieces.iter_mut() {
            let mut merged: Vec<PieceTerm> = terms.clone();
            merged.push(PieceTerm::constant(c));
            *terms = simplify(merged.into_iter());
        }
        s
    }

    /// Restriction to `[0, x_end]`.
    pub fn restrict(&self, x_end: f64) -> Result<Self> {
        if !(x_end > 0.0 && x_end <= self.domain_end) {
            return Err(Error::parameter(format!(
                "restriction end {x_end} outside (0, {}]",
                self.domain_end
            )));
        }
        if x_end == self.domain_end {
            return Ok(self.clone());
        }
        let refined = self.refine(&[x_end]);
        let cut = refined.breakpoints.iter().position(|&b| b >= x_end).unwrap_or(refined.breakpoints.len() - 1);
        let mut bps: Vec<f64> = refined.breakpoints[..cut].to_vec();
        bps.push(x_end);
        let pieces = refined.pieces[..cut].to_vec();
        let jumps = refined.jumps.iter().copied().filter(|j| j.at < x_end).collect();
        let bps_len = bps.len();
        bps[bps_len - 1] = x_end;
        Self::new(x_end, bps, pieces, jumps)
    }

    /// Values at the midpoints of a grid with spacing at most `step`, with
    /// cells never straddling a breakpoint. Returns `(x, weight, s(x))`.
    pub fn midpoint_samples(&self, a: f64, b: f64, step: f64) -> Vec<(f64, f64, C64)> {
        quad::midpoints(&self.breakpoints, a, b, step)
            .into_iter()
            .map(|(x, w)| (x, w, self.value(x)))
            .collect()
    }
}

/// Merges polynomial terms and reciprocals sharing a pole; drops zeros.
pub(crate) fn simplify(terms: impl Iterator<Item = PieceTerm>) -> Vec<PieceTerm> {
    let mut poly: Option<[C64; 4]> = None;
    let mut recips: Vec<(f64, C64)> = Vec::new();
    for t in terms {
        match t {
            PieceTerm::Poly(c) => {
                let acc = poly.get_or_insert([C64::new(0.0, 0.0); 4]);
                for k in 0..4 {
                    acc[k] += c[k];
                }
            }
            PieceTerm::Recip { amp, pole } => match recips.iter_mut().find(|(p, _)| *p == pole) {
                Some((_, a)) => *a += amp,
                None => recips.push((pole, amp)),
            },
        }
    }
    let mut out = Vec::new();
    if let Some(c) = poly {
        let t = PieceTerm::Poly(c);
        if !t.is_zero() {
            out.push(t);
        }
    }
    for (pole, amp) in recips {
        let t = PieceTerm::Recip { amp, pole };
        if !t.is_zero() {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_piece_evaluates() {
        let s = Antiderivative::real_polynomial(1.0, &[0.0, 1.0]).unwrap();
        assert_eq!(s.eval(0.25).unwrap(), c(0.25));
    }

    #[test]
    fn jump_is_right_continuous() {
        let s = delta_sum(&[0.5], &[c(1.0)], 1.0).unwrap();
        assert_eq!(s.eval(0.5).unwrap(), c(1.0));
        assert_eq!(s.eval(0.4999).unwrap(), c(0.0));
        assert_eq!(s.left_limit(0.5).unwrap(), c(0.0));
    }

    #[test]
    fn reciprocal_piece() {
        let s = Antiderivative::new(
            0.5,
            vec![0.0, 0.1, 0.5],
            vec![vec![], vec![PieceTerm::Recip { amp: c(1.0), pole: 0.0 }]],
            vec![],
        )
        .unwrap();
        assert!((s.eval(0.2).unwrap() - c(5.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_inside_is_rejected() {
        let err = Antiderivative::new(
            1.0,
            vec![0.0, 1.0],
            vec![vec![PieceTerm::Recip { amp: c(1.0), pole: 0.5 }]],
            vec![],
        );
        assert!(matches!(err, Err(Error::Validation(_))));
        let at_end = Antiderivative::new(
            1.0,
            vec![0.0, 1.0],
            vec![vec![PieceTerm::Recip { amp: c(1.0), pole: 0.0 }]],
            vec![],
        );
        assert!(at_end.is_err());
    }

    #[test]
    fn out_of_domain_eval_fails() {
        let s = Antiderivative::zero(1.0).unwrap();
        assert!(matches!(s.eval(1.5), Err(Error::Domain { .. })));
        assert!(matches!(s.eval(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn jump_off_breakpoint_rejected() {
        let r = Antiderivative::new(1.0, vec![0.0, 1.0], vec![vec![]], vec![Jump { at: 0.3, delta: c(1.0) }]);
        assert!(r.is_err());
    }

    #[test]
    fn linear_moments() {
        let s = Antiderivative::real_polynomial(1.0, &[0.0, 1.0]).unwrap();
        let m = s.moments(Interval::new(0.0, 1.0).unwrap()).unwrap();
        assert!((m.m0 - c(0.5)).norm() < 1e-14);
        assert!((m.q2 - 1.0 / 3.0).abs() < 1e-14);
        assert!((m.m2 - c(1.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn step_moments() {
        let s = delta_sum(&[0.5], &[c(1.0)], 1.0).unwrap();
        let m = s.moments(Interval::new(0.0, 1.0).unwrap()).unwrap();
        assert!((m.m0 - c(0.5)).norm() < 1e-14);
        assert!((m.q2 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn zero_moments() {
        let s = Antiderivative::zero(2.0).unwrap();
        let m = s.moments(Interval::new(0.0, 2.0).unwrap()).unwrap();
        assert_eq!(m.m0, c(0.0));
        assert_eq!(m.q2, 0.0);
        assert_eq!(m.m2, c(0.0));
    }

    #[test]
    fn refine_preserves_values() {
        let s = Antiderivative::real_polynomial(3.0, &[1.0, -2.0, 0.5, 0.25]).unwrap();
        let r = s.refine(&[0.7, 1.9]);
        assert_eq!(r.breakpoints(), &[0.0, 0.7, 1.9, 3.0]);
        for x in [0.0, 0.3, 0.7, 1.2, 1.9, 2.5, 3.0] {
            assert!((s.value(x) - r.value(x)).norm() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn add_and_scale() {
        let a = Antiderivative::real_polynomial(2.0, &[0.0, 1.0]).unwrap();
        let b = delta_sum(&[1.0], &[C64::new(0.0, 2.0)], 2.0).unwrap();
        let s = a.add(&b).unwrap().scale_real(3.0);
        assert!((s.value(1.5) - C64::new(4.5, 6.0)).norm() < 1e-14);
        assert!((s.value(0.5) - c(1.5)).norm() < 1e-14);
    }

    #[test]
    fn restrict_keeps_prefix() {
        let s = delta_sum(&[1.0, 2.0], &[c(1.0), c(-1.0)], 3.0).unwrap();
        let r = s.restrict(1.5).unwrap();
        assert_eq!(r.domain_end(), 1.5);
        assert_eq!(r.jumps().len(), 1);
        assert_eq!(r.value(1.2), c(1.0));
    }

    #[test]
    fn simplify_merges_like_terms() {
        let t = simplify(
            [
                PieceTerm::Recip { amp: c(1.0), pole: -1.0 },
                PieceTerm::Recip { amp: c(-1.0), pole: -1.0 },
                PieceTerm::constant(c(1.0)),
            ]
            .into_iter(),
        );
        assert_eq!(t, vec![PieceTerm::constant(c(1.0))]);
    }
}
