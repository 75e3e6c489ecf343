//! Unit-window increments of the negative variation of a real `s`.

use crate::error::{Error, Result};
use crate::potential::Antiderivative;
use crate::quad;

const GRID: f64 = 1.0 / 64.0;

struct NegativeVariation<'a> {
    s: &'a Antiderivative,
    /// `(location, size)` of every downward discontinuity.
    atoms: Vec<(f64, f64)>,
}

impl<'a> NegativeVariation<'a> {
    fn new(s: &'a Antiderivative) -> Self {
        let bps = s.breakpoints();
        let atoms = (1..bps.len() - 1)
            .filter_map(|i| {
                let jump = s.value_in_piece(i, bps[i]).re - s.value_in_piece(i - 1, bps[i]).re;
                (jump < 0.0).then_some((bps[i], -jump))
            })
            .collect();
        NegativeVariation { s, atoms }
    }

    /// Negative variation on `[0, x]` (`inclusive`) or `[0, x)`.
    fn at(&self, x: f64, inclusive: bool) -> f64 {
        let smooth = quad::integrate(
            |t| [(-self.s.derivative(t).re).max(0.0)],
            self.s.breakpoints(),
            0.0,
            x,
            1e-12,
        )[0];
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|&&(p, _)| if inclusive { p <= x } else { p < x })
            .map(|&(_, m)| m)
            .sum();
        smooth + atoms
    }
}

/// `sup_x (s⁻(x + 1) − s⁻(x))` for the negative-variation function `s⁻`.
///
/// Windows `(x, x + 1]` are taken on a `1/64` grid and aligned with every
/// discontinuity from both sides, so isolated jumps are captured exactly.
/// On a domain shorter than one the whole domain is the only window.
pub fn brasche_check(s: &Antiderivative) -> Result<f64> {
    if !s.is_real() {
        return Err(Error::unsupported("negative variation needs a real-valued s"));
    }
    let nv = NegativeVariation::new(s);
    let x_end = s.domain_end();
    if x_end <= 1.0 {
        return Ok(nv.at(x_end, true));
    }
    let clamp = |x: f64| x.clamp(0.0, x_end - 1.0);
    // (window start, include the start's atom?)
    let mut windows: Vec<(f64, bool)> = Vec::new();
    let steps = ((x_end - 1.0) / GRID).floor() as usize;
    windows.extend((0..=steps).map(|k| (k as f64 * GRID, false)));
    windows.push((x_end - 1.0, false));
    for &(p, _) in &nv.atoms {
        windows.push((clamp(p - 1.0), false));
        windows.push((clamp(p), true));
    }
    let best = windows
        .iter()
        .map(|&(x, with_start)| {
            if with_start {
                // [x, x + 1): atoms at x count, atoms at x + 1 do not
                nv.at(x + 1.0, false) - nv.at(x, false)
            } else {
                nv.at(x + 1.0, true) - nv.at(x, true)
            }
        })
        .fold(0.0, f64::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{delta_sum, C64};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn jump_examples() {
        let one = delta_sum(&[0.5], &[r(-1.0)], 1.0).unwrap();
        assert_eq!(brasche_check(&one).unwrap(), 1.0);
        let two = delta_sum(&[0.3, 0.6], &[r(-1.0), r(-1.0)], 1.0).unwrap();
        assert_eq!(brasche_check(&two).unwrap(), 2.0);
        let pos = delta_sum(&[0.5], &[r(5.0)], 1.0).unwrap();
        assert_eq!(brasche_check(&pos).unwrap(), 0.0);
    }

    #[test]
    fn windows_of_length_one_separate_far_jumps() {
        let s = delta_sum(&[1.0, 2.5, 3.0], &[r(-1.0), r(-2.0), r(-0.5)], 5.0).unwrap();
        assert_eq!(brasche_check(&s).unwrap(), 2.5);
        let edge = delta_sum(&[1.0, 2.0], &[r(-1.0), r(-1.0)], 4.0).unwrap();
        // (1, 2] and [1, 2) each hold only one; a closed unit window is not a candidate
        assert_eq!(brasche_check(&edge).unwrap(), 1.0);
    }

    #[test]
    fn smooth_decrease_counts() {
        let s = Antiderivative::real_polynomial(3.0, &[0.0, -2.0]).unwrap();
        assert!((brasche_check(&s).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn complex_input_is_unsupported() {
        let s = delta_sum(&[0.5], &[C64::new(0.0, 1.0)], 1.0).unwrap();
        assert!(matches!(brasche_check(&s), Err(Error::Unsupported(_))));
    }
}
