//! Window-by-window scan over the unit windows `[k − 1, k]` and the
//! half-shifted windows `[k − 1/2, k + 1/2]`.

use rayon::prelude::*;
use serde::Serialize;

use super::{assemble, hermitian_lambda_min, range_boundary};
use crate::criteria::{angular_hull, sector_with_angles, Sector, TrendConfig};
use crate::error::{Error, Result};
use crate::potential::{Antiderivative, Interval, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowFamily {
    Unit,
    HalfShifted,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub family: WindowFamily,
    pub window_lo: f64,
    pub window_hi: f64,
    pub sector: Option<Sector>,
    pub herm_lambda_min: f64,
    pub infmod_lower: f64,
    pub infmod_upper: f64,
    #[serde(skip)]
    samples: Vec<C64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    /// Angles from the arc hull of all window angles, vertex re-fitted to
    /// every sampled range point.
    pub common_sector: Option<Sector>,
    /// Unit-window lower bounds never decrease.
    pub lower_monotone: bool,
    /// Unit-window lower bounds keep growing.
    pub lower_unbounded: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

use WindowFamily::{HalfShifted, Unit};

fn windows(x_end: f64) -> Vec<(WindowFamily, f64, f64)> {
    let eps = 1e-12;
    let mut out = Vec::new();
    let mut k = 1.0;
    while k <= x_end + eps {
        out.push((Unit, k - 1.0, k.min(x_end)));
        k += 1.0;
    }
    let mut k = 1.0;
    while k + 0.5 <= x_end + eps {
        out.push((HalfShifted, k - 0.5, (k + 0.5).min(x_end)));
        k += 1.0;
    }
    out
}

/// Assembles each window with `n` elements and sweeps `m` angles.
pub fn localization_scan(s: &Antiderivative, n: usize, m: usize) -> Result<ScanTable> {
    let x_end = s.domain_end();
    if x_end < 2.0 {
        return Err(Error::parameter(format!("scan needs X ≥ 2, got {x_end}")));
    }
    let rows = windows(x_end)
        .into_par_iter()
        .map(|(family, lo, hi)| {
            let w = assemble(s, Interval::new(lo, hi)?, n, None)?;
            let r = range_boundary(&w, m)?;
            Ok(ScanRow {
                family,
                window_lo: lo,
                window_hi: hi,
                sector: r.sector,
                herm_lambda_min: hermitian_lambda_min(&w)?,
                infmod_lower: r.inf_modulus_lower,
                infmod_upper: r.inf_modulus_upper,
                samples: r.samples,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&rows);
    Ok(ScanTable { rows, summary })
}

fn summarize(rows: &[ScanRow]) -> ScanSummary {
    let angles: Vec<f64> = rows.iter().filter_map(|r| r.sector).flat_map(|s| [s.alpha, s.beta]).collect();
    let common_sector = if rows.iter().any(|r| r.sector.is_none()) {
        None
    } else {
        angular_hull(&angles).and_then(|(a, b)| {
            let pts: Vec<C64> = rows.iter().flat_map(|r| r.samples.iter().copied()).collect();
            sector_with_angles(&pts, a, b)
        })
    };
    let lower: Vec<f64> = rows.iter().filter(|r| r.family == Unit).map(|r| r.infmod_lower).collect();
    let lower_monotone = lower.windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0));
    let lower_unbounded = lower.len() >= 2 && !TrendConfig::default().is_bounded(&lower);
    ScanSummary { common_sector, lower_monotone, lower_unbounded }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn window_families() {
        let w = windows(3.0);
        assert_eq!(w.iter().filter(|x| x.0 == Unit).count(), 3);
        assert_eq!(w.iter().filter(|x| x.0 == HalfShifted).count(), 2);
        assert!(w.iter().all(|&(_, lo, hi)| lo >= 0.0 && hi <= 3.0));
    }

    #[test]
    fn free_windows_are_translation_invariant() {
        let s = Antiderivative::zero(4.0).unwrap();
        let t = localization_scan(&s, 128, 16).unwrap();
        for r in &t.rows {
            assert!((r.infmod_lower - PI * PI).abs() < 1e-2, "{r:?}");
            assert!(r.sector.unwrap().aperture() < 1e-9);
        }
        assert!(!t.summary.lower_unbounded);
        assert!(t.summary.common_sector.is_some());
    }

    #[test]
    fn half_square_lower_bounds_climb() {
        let s = Antiderivative::real_polynomial(5.0, &[0.0, 0.0, 0.5]).unwrap();
        let t = localization_scan(&s, 128, 16).unwrap();
        let units: Vec<&ScanRow> = t.rows.iter().filter(|r| r.family == Unit).collect();
        for (k, r) in units.iter().enumerate().skip(1) {
            let k = (k + 1) as f64;
            assert!(r.infmod_lower >= PI * PI + k - 1.0 - 1e-2 && r.infmod_lower <= PI * PI + k + 1e-2);
        }
        assert!(t.summary.lower_monotone);
    }

    #[test]
    fn short_domain_rejected() {
        let s = Antiderivative::zero(1.5).unwrap();
        assert!(matches!(localization_scan(&s, 32, 16), Err(Error::Parameter(_))));
    }
}
