//! Sectors `Λ_{α,β}(z₀) = { z₀ + r e^{iφ} : r ≥ 0, φ ∈ [α, β] }` and their
//! fitting to finite point sets.

use std::f64::consts::PI;

use serde::Serialize;

use crate::potential::C64;

const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sector {
    pub vertex: C64,
    pub alpha: f64,
    pub beta: f64,
}

impl Sector {
    pub fn new(vertex: C64, alpha: f64, beta: f64) -> Self {
        Sector { vertex, alpha, beta }
    }

    pub fn vertex(&self) -> C64 {
        self.vertex
    }

    pub fn aperture(&self) -> f64 {
        self.beta - self.alpha
    }

    /// Aperture below `π` and the closed arc avoids the direction `π`.
    pub fn is_strict(&self) -> bool {
        self.aperture() < PI && self.alpha > -PI && self.beta < PI
    }

    /// Membership with an absolute slack `tol` on the distance to the
    /// boundary rays.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        let w = z - self.vertex();
        if w.norm() <= tol {
            return true;
        }
        if self.aperture() >= PI {
            let mid = 0.5 * (self.alpha + self.beta);
            return (w * C64::from_polar(1.0, -mid)).re >= -tol;
        }
        let (n1, n2) = self.inward_normals();
        dot(n1, w) >= -tol && dot(n2, w) >= -tol && dot(C64::from_polar(1.0, self.bisector()), w) >= -tol
    }

    pub fn bisector(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    /// Unit normals of the two boundary rays pointing into the sector.
    pub fn inward_normals(&self) -> (C64, C64) {
        (
            C64::from_polar(1.0, self.alpha + PI / 2.0),
            C64::from_polar(1.0, self.beta - PI / 2.0),
        )
    }
}

fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull with collinear points removed.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let scale = pts.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eps = 1e-14 * scale * scale;
    let mut hull: Vec<C64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &C64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    hull
}

fn wrap(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

fn candidate(vertex: C64, start: f64, aperture: f64) -> Sector {
    let mid = wrap(start + 0.5 * aperture);
    Sector::new(vertex, mid - 0.5 * aperture, mid + 0.5 * aperture)
}

/// Smallest-aperture sector with its vertex at a vertex of the convex hull of
/// `points`. Ties go to the bisector closest to the positive real axis, then
/// to the vertex of smallest modulus. All points equal gives `[0, 0]` at
/// that point; an empty set gives `None`.
pub fn fit_sector(points: &[C64]) -> Option<Sector> {
    let hull = convex_hull(points);
    let candidates: Vec<Sector> = match hull.len() {
        0 => return None,
        1 => return Some(Sector::new(hull[0], 0.0, 0.0)),
        2 => vec![
            candidate(hull[0], (hull[1] - hull[0]).arg(), 0.0),
            candidate(hull[1], (hull[0] - hull[1]).arg(), 0.0),
        ],
        n => (0..n)
            .map(|i| {
                let v = hull[i];
                let next = hull[(i + 1) % n];
                let prev = hull[(i + n - 1) % n];
                let a = (next - v).arg();
                let b = (prev - v).arg();
                let mut ap = b - a;
                while ap < 0.0 {
                    ap += 2.0 * PI;
                }
                candidate(v, a, ap)
            })
            .collect(),
    };
    candidates.into_iter().reduce(|best, c| if better(&c, &best) { c } else { best })
}

fn better(c: &Sector, best: &Sector) -> bool {
    let (ca, ba) = (c.aperture(), best.aperture());
    if (ca - ba).abs() > TIE {
        return ca < ba;
    }
    let (cb, bb) = (c.bisector().abs(), best.bisector().abs());
    if (cb - bb).abs() > TIE {
        return cb < bb;
    }
    c.vertex().norm() < best.vertex().norm()
}

/// Smallest closed arc containing every direction, as `[α, β]` with the
/// bisector in `(−π, π]`. `None` for an empty set.
pub fn angular_hull(angles: &[f64]) -> Option<(f64, f64)> {
    if angles.is_empty() {
        return None;
    }
    let mut a: Vec<f64> = angles.iter().map(|&x| wrap(x)).collect();
    a.sort_by(f64::total_cmp);
    // the arc is the complement of the widest gap between consecutive angles
    let n = a.len();
    let mut best_gap = a[0] + 2.0 * PI - a[n - 1];
    let mut start = a[0];
    for i in 1..n {
        let gap = a[i] - a[i - 1];
        if gap > best_gap {
            best_gap = gap;
            start = a[i];
        }
    }
    let width = 2.0 * PI - best_gap;
    let s = candidate(C64::new(0.0, 0.0), start, width);
    Some((s.alpha, s.beta))
}

/// Sector with angles `[α, β]` and the tightest vertex that contains all
/// `points`. For `α = β` the points must be collinear along that direction
/// (relative tolerance `1e-9`), otherwise `None`.
pub fn sector_with_angles(points: &[C64], alpha: f64, beta: f64) -> Option<Sector> {
    if points.is_empty() || beta - alpha >= PI {
        return None;
    }
    let probe = Sector::new(C64::new(0.0, 0.0), alpha, beta);
    let (n1, n2) = probe.inward_normals();
    let c1 = points.iter().map(|&z| dot(n1, z)).fold(f64::INFINITY, f64::min);
    let c2 = points.iter().map(|&z| dot(n2, z)).fold(f64::INFINITY, f64::min);
    let det = n1.re * n2.im - n1.im * n2.re;
    let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if det.abs() < 1e-12 {
        // parallel support lines: the points must sit on one ray direction
        let spread = -c2 - c1;
        if spread.abs() > 1e-9 * scale {
            return None;
        }
        let dir = C64::from_polar(1.0, alpha);
        let along = points.iter().map(|&z| dot(dir, z)).fold(f64::INFINITY, f64::min);
        return Some(Sector::new(dir * along + n1 * c1, alpha, beta));
    }
    // solve dot(n1, z) = c1, dot(n2, z) = c2
    let x = (c1 * n2.im - c2 * n1.im) / det;
    let y = (n1.re * c2 - n2.re * c1) / det;
    Some(Sector::new(C64::new(x, y), alpha, beta))
}
