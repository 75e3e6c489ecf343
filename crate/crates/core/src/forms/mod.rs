//! Finite-element discretisation of the window forms
//! `l_I[y] = ∫_I |y'|² − ∫_I s d|y|²` on `y` vanishing at both ends of `I`.
//!
//! Piecewise-linear hat functions on a mesh that contains every breakpoint
//! of `s`, so jumps of `s` enter the potential matrix exactly. For
//! `y = Σ c_i φ_i` the form value is `cᴴ (A − P + Q) c`, where `Q` carries
//! the optional gauge terms.

mod eigen;
mod partition;
mod range;
mod scan;

pub use eigen::{smallest_eigenpair, sturm_count, EigenPair, SymTridiag};
pub use partition::{partition_identity_check, PartitionCheck, TestFunction};
pub use range::{inf_modulus, range_boundary, RangeEstimate, DEFAULT_ANGLES};
pub use scan::{localization_scan, ScanRow, ScanSummary, ScanTable, WindowFamily};

use crate::error::{Error, Result};
use crate::potential::{Antiderivative, Interval, C64};
use crate::quad;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Gauge data `(g, κ1, κ2)` adding `∫|y' − κ1 g y|² − κ2 ∫ g² |y|² − ∫|y'|²`.
#[derive(Debug, Clone, Copy)]
pub struct Gauge<'a> {
    pub g: &'a Antiderivative,
    pub kappa1: f64,
    pub kappa2: f64,
}

/// Complex symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag {
    pub diag: Vec<C64>,
    pub off: Vec<C64>,
}

impl Tridiag {
    fn zeros(n: usize) -> Self {
        Tridiag { diag: vec![ZERO; n], off: vec![ZERO; n.saturating_sub(1)] }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `cᴴ T c` for symmetric `T`.
    pub fn form(&self, c: &[C64]) -> C64 {
        let mut acc = ZERO;
        for (d, ci) in self.diag.iter().zip(c) {
            acc += d * ci.norm_sqr();
        }
        for i in 0..self.off.len() {
            acc += self.off[i] * (2.0 * (c[i].conj() * c[i + 1]).re);
        }
        acc
    }

    /// Entrywise `Re(e^{−iθ} T)`, the Hermitian part of the rotated matrix.
    /// Entries at rounding level of `|T_ij|` are flushed to zero.
    pub fn rotated_real(&self, theta: f64) -> SymTridiag {
        let r = C64::from_polar(1.0, -theta);
        let rot = |z: &C64| {
            let v = (r * z).re;
            if v.abs() <= 8.0 * f64::EPSILON * z.norm() {
                0.0
            } else {
                v
            }
        };
        SymTridiag::new(self.diag.iter().map(rot).collect(), self.off.iter().map(rot).collect())
    }

    fn scaled_add(&mut self, other: &Tridiag, k: C64) {
        for (a, b) in self.diag.iter_mut().zip(&other.diag) {
            *a += k * b;
        }
        for (a, b) in self.off.iter_mut().zip(&other.off) {
            *a += k * b;
        }
    }

    fn real_part(&self) -> SymTridiag {
        SymTridiag::new(self.diag.iter().map(|z| z.re).collect(), self.off.iter().map(|z| z.re).collect())
    }
}

#[derive(Debug, Clone)]
pub struct WindowForm {
    pub interval: Interval,
    /// Mesh nodes including both ends; unknowns sit at the interior ones.
    pub nodes: Vec<f64>,
    pub stiffness: SymTridiag,
    pub potential: Tridiag,
    pub mass: SymTridiag,
    /// Gauge contribution; zero without a gauge.
    pub gauge: Tridiag,
}

impl WindowForm {
    pub fn dim(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn interior_nodes(&self) -> &[f64] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    /// `A − P + Q`
    pub fn matrix(&self) -> Tridiag {
        let mut k = Tridiag {
            diag: self.stiffness.diag.iter().map(|&x| C64::new(x, 0.0)).collect(),
            off: self.stiffness.off.iter().map(|&x| C64::new(x, 0.0)).collect(),
        };
        k.scaled_add(&self.potential, C64::new(-1.0, 0.0));
        k.scaled_add(&self.gauge, C64::new(1.0, 0.0));
        k
    }

    /// A form built directly from matrices, e.g. for rotated test pencils.
    pub fn from_matrices(interval: Interval, nodes: Vec<f64>, k: Tridiag, mass: SymTridiag) -> Result<Self> {
        let n = nodes.len().saturating_sub(2);
        if k.dim() != n || mass.dim() != n {
            return Err(Error::Dimension { expected: n, got: k.dim().min(mass.dim()) });
        }
        let mut potential = k.clone();
        for z in potential.diag.iter_mut().chain(potential.off.iter_mut()) {
            *z = -*z;
        }
        Ok(WindowForm {
            interval,
            nodes,
            stiffness: SymTridiag::new(vec![0.0; n], vec![0.0; n.saturating_sub(1)]),
            potential,
            mass,
            gauge: Tridiag::zeros(n),
        })
    }

    pub fn mass_norm_sq(&self, c: &[C64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for (d, ci) in self.mass.diag.iter().zip(c) {
            acc += d * ci.norm_sqr();
        }
        for i in 0..n.saturating_sub(1) {
            acc += self.mass.off[i] * 2.0 * (c[i].conj() * c[i + 1]).re;
        }
        acc
    }

    /// Coefficients of the hat interpolant of `f` at the interior nodes.
    pub fn interpolate(&self, f: impl Fn(f64) -> C64) -> Vec<C64> {
        self.interior_nodes().iter().map(|&x| f(x)).collect()
    }
}

/// `cᴴ (A − P + Q) c`.
pub fn form_value(w: &WindowForm, c: &[C64]) -> Result<C64> {
    if c.len() != w.dim() {
        return Err(Error::Dimension { expected: w.dim(), got: c.len() });
    }
    Ok(w.matrix().form(c))
}

/// Uniform mesh of `n` elements on `iv` with every breakpoint of `extra`
/// inside `iv` made a node: a breakpoint within a quarter element of a free
/// node moves that node, otherwise it is inserted.
pub fn build_mesh(iv: Interval, n: usize, breakpoints: &[f64]) -> Vec<f64> {
    let h = iv.len() / n as f64;
    let mut nodes: Vec<f64> = (0..=n).map(|k| iv.a + k as f64 * h).collect();
    nodes[n] = iv.b;
    let mut moved = vec![false; n + 1];
    moved[0] = true;
    moved[n] = true;
    let mut inserted = Vec::new();
    let mut bps: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > iv.a && b < iv.b).collect();
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    for b in bps {
        let k = ((b - iv.a) / h).round() as usize;
        let k = k.min(n);
        if !moved[k] && (nodes[k] - b).abs() <= 0.25 * h {
            nodes[k] = b;
            moved[k] = true;
        } else if (nodes[k] - b).abs() > 0.0 {
            inserted.push(b);
        }
    }
    nodes.extend(inserted);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

fn check_nodes(nodes: &[f64], s: &Antiderivative, iv: Interval) -> Result<()> {
    for &b in s.breakpoints() {
        if b > iv.a && b < iv.b && nodes.binary_search_by(|x| x.total_cmp(&b)).is_err() {
            return Err(Error::Assembly(format!("breakpoint {b} is not a mesh node")));
        }
    }
    Ok(())
}

/// Element integrals `(∫ s φ_L, ∫ s φ_R)` on `[xl, xr]`.
fn hat_moments(s: &Antiderivative, xl: f64, xr: f64) -> (C64, C64) {
    let h = xr - xl;
    let i = s.piece_index(0.5 * (xl + xr));
    let r = quad::adaptive(
        &|x| {
            let v = s.value_in_piece(i, x);
            let (pl, pr) = ((xr - x) / h, (x - xl) / h);
            [v.re * pl, v.im * pl, v.re * pr, v.im * pr]
        },
        xl,
        xr,
        1e-13,
    );
    (C64::new(r[0], r[1]), C64::new(r[2], r[3]))
}

/// `∫ s (φ_i φ_j)'` assembled over the mesh.
fn potential_matrix(s: &Antiderivative, nodes: &[f64]) -> Tridiag {
    let n = nodes.len() - 2;
    let mut p = Tridiag::zeros(n);
    for e in 0..nodes.len() - 1 {
        let (xl, xr) = (nodes[e], nodes[e + 1]);
        let h = xr - xl;
        let (a, b) = hat_moments(s, xl, xr);
        // interior unknown indices of the left/right nodes
        let (l, r) = (e.checked_sub(1), (e < n).then_some(e));
        if let Some(l) = l {
            p.diag[l] += a * (-2.0 / h);
        }
        if let Some(r) = r {
            p.diag[r] += b * (2.0 / h);
        }
        if let (Some(l), Some(_)) = (l, r) {
            p.off[l] += (a - b) / h;
        }
    }
    p
}

/// `∫ w φ_i φ_j` for a real weight `w`.
fn weighted_mass(w: impl Fn(f64) -> f64, nodes: &[f64], breaks: &[f64]) -> SymTridiag {
    let n = nodes.len() - 2;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for e in 0..nodes.len() - 1 {
        let (xl, xr) = (nodes[e], nodes[e + 1]);
        let h = xr - xl;
        let r = quad::integrate(
            |x| {
                let (pl, pr) = ((xr - x) / h, (x - xl) / h);
                let v = w(x);
                [v * pl * pl, v * pl * pr, v * pr * pr]
            },
            breaks,
            xl,
            xr,
            1e-13,
        );
        let (l, rr) = (e.checked_sub(1), (e < n).then_some(e));
        if let Some(l) = l {
            diag[l] += r[0];
        }
        if let Some(rr) = rr {
            diag[rr] += r[2];
        }
        if let (Some(l), Some(_)) = (l, rr) {
            off[l] += r[1];
        }
    }
    SymTridiag::new(diag, off)
}

fn stiffness_and_mass(nodes: &[f64]) -> (SymTridiag, SymTridiag) {
    let n = nodes.len() - 2;
    let mut a = SymTridiag::new(vec![0.0; n], vec![0.0; n.saturating_sub(1)]);
    let mut m = SymTridiag::new(vec![0.0; n], vec![0.0; n.saturating_sub(1)]);
    for e in 0..nodes.len() - 1 {
        let h = nodes[e + 1] - nodes[e];
        let (l, r) = (e.checked_sub(1), (e < n).then_some(e));
        if let Some(l) = l {
            a.diag[l] += 1.0 / h;
            m.diag[l] += h / 3.0;
        }
        if let Some(r) = r {
            a.diag[r] += 1.0 / h;
            m.diag[r] += h / 3.0;
        }
        if let (Some(l), Some(_)) = (l, r) {
            a.off[l] -= 1.0 / h;
            m.off[l] += h / 6.0;
        }
    }
    (a, m)
}

/// Assembles the window form on an explicit mesh (ends included); every
/// breakpoint of `s` and of the gauge function inside `iv` must be a node.
pub fn assemble_on_mesh(s: &Antiderivative, nodes: &[f64], gauge: Option<Gauge>) -> Result<WindowForm> {
    if nodes.len() < 3 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Assembly("mesh needs at least one interior node and increasing nodes".into()));
    }
    let iv = Interval::new(nodes[0], nodes[nodes.len() - 1])?;
    s.check_interval(iv)?;
    check_nodes(nodes, s, iv)?;
    let (stiffness, mass) = stiffness_and_mass(nodes);
    let potential = potential_matrix(s, nodes);
    let n = nodes.len() - 2;
    let mut q = Tridiag::zeros(n);
    if let Some(gg) = gauge {
        if !gg.g.is_real() {
            return Err(Error::unsupported("gauge function must be real"));
        }
        gg.g.check_interval(iv)?;
        check_nodes(nodes, gg.g, iv)?;
        let pg = potential_matrix(gg.g, nodes);
        let wg = weighted_mass(|x| gg.g.value(x).re.powi(2), nodes, gg.g.breakpoints());
        q.scaled_add(&pg, C64::new(-gg.kappa1, 0.0));
        let wq = Tridiag {
            diag: wg.diag.iter().map(|&x| C64::new(x, 0.0)).collect(),
            off: wg.off.iter().map(|&x| C64::new(x, 0.0)).collect(),
        };
        q.scaled_add(&wq, C64::new(gg.kappa1 * gg.kappa1 - gg.kappa2, 0.0));
    }
    Ok(WindowForm { interval: iv, nodes: nodes.to_vec(), stiffness, potential, mass, gauge: q })
}

/// Assembles on a uniform `n`-element mesh with breakpoints made nodes.
pub fn assemble(s: &Antiderivative, iv: Interval, n: usize, gauge: Option<Gauge>) -> Result<WindowForm> {
    if n < 8 {
        return Err(Error::parameter(format!("mesh size {n} below 8")));
    }
    let mut bps = s.breakpoints().to_vec();
    if let Some(gg) = gauge {
        bps.extend_from_slice(gg.g.breakpoints());
    }
    let nodes = build_mesh(iv, n, &bps);
    assemble_on_mesh(s, &nodes, gauge)
}

/// Smallest eigenvalue of the Hermitian part `Re(A − P + Q)` against `M`.
pub fn hermitian_lambda_min(w: &WindowForm) -> Result<f64> {
    Ok(smallest_eigenpair(&w.matrix().real_part(), &w.mass)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::delta_sum;
    use std::f64::consts::PI;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn free_ground_state() {
        let s = Antiderivative::zero(1.0).unwrap();
        let w = assemble(&s, unit(), 512, None).unwrap();
        let l = hermitian_lambda_min(&w).unwrap();
        assert!((l - PI * PI).abs() < 1e-3 * PI * PI);
    }

    #[test]
    fn delta_adds_twice_its_strength() {
        for alpha in [-1.0, 1.0, 5.0] {
            let s = delta_sum(&[0.5], &[C64::new(alpha, 0.0)], 1.0).unwrap();
            let w = assemble(&s, unit(), 512, None).unwrap();
            let c = w.interpolate(|x| C64::new(2f64.sqrt() * (PI * x).sin(), 0.0));
            let v = form_value(&w, &c).unwrap();
            assert!((v.re - (PI * PI + 2.0 * alpha)).abs() < 1e-2, "alpha={alpha}: {v}");
        }
    }

    #[test]
    fn imaginary_line_shifts_by_i() {
        let s = Antiderivative::polynomial(1.0, [ZERO, C64::new(0.0, 1.0), ZERO, ZERO]).unwrap();
        let w = assemble(&s, unit(), 64, None).unwrap();
        let c = w.interpolate(|x| C64::new((3.0 * x).sin() * x * (1.0 - x), x * x * (1.0 - x)));
        let m = w.mass_norm_sq(&c);
        let v = form_value(&w, &c).unwrap();
        assert!((v.im - m).abs() < 1e-12 * m);
        let a = w.stiffness.quad_form(&c.iter().map(|z| z.re).collect::<Vec<_>>())
            + w.stiffness.quad_form(&c.iter().map(|z| z.im).collect::<Vec<_>>());
        assert!((v.re - a).abs() < 1e-10 * a);
    }

    #[test]
    fn zero_vector_and_dimension_check() {
        let s = Antiderivative::zero(1.0).unwrap();
        let w = assemble(&s, unit(), 16, None).unwrap();
        assert_eq!(form_value(&w, &vec![ZERO; w.dim()]).unwrap(), ZERO);
        assert!(matches!(form_value(&w, &[ZERO; 3]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn switched_off_gauge_changes_nothing() {
        let s = Antiderivative::real_polynomial(1.0, &[0.3, -1.0, 2.0]).unwrap();
        let g = Antiderivative::zero(1.0).unwrap();
        let plain = assemble(&s, unit(), 32, None).unwrap();
        let gauged = assemble(&s, unit(), 32, Some(Gauge { g: &g, kappa1: 0.0, kappa2: 0.0 })).unwrap();
        assert_eq!(plain.matrix(), gauged.matrix());
    }

    #[test]
    fn breakpoints_become_nodes() {
        let mesh = build_mesh(unit(), 8, &[0.126, 0.3, 0.5]);
        assert!(mesh.contains(&0.126) && mesh.contains(&0.3) && mesh.contains(&0.5));
        let s = delta_sum(&[0.3], &[C64::new(1.0, 0.0)], 1.0).unwrap();
        let uniform: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
        assert!(matches!(assemble_on_mesh(&s, &uniform, None), Err(Error::Assembly(_))));
    }

    #[test]
    fn constant_shift_invariance() {
        let s = Antiderivative::real_polynomial(2.0, &[0.0, 1.0, -0.5, 0.1]).unwrap();
        let iv = Interval::new(0.5, 1.5).unwrap();
        let w0 = assemble(&s, iv, 40, None).unwrap();
        let w1 = assemble(&s.add_constant(C64::new(7.0, -3.0)), iv, 40, None).unwrap();
        let c = w0.interpolate(|x| C64::new((x - 0.5) * (1.5 - x), (x - 0.5).powi(2) * (1.5 - x)));
        let (a, b) = (form_value(&w0, &c).unwrap(), form_value(&w1, &c).unwrap());
        assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
    }
}
