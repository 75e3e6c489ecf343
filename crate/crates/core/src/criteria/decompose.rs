//! Splitting `s` into a locally mean-free part plus a step function, or
//! plus a broken line.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{Antiderivative, PieceTerm, C64};

#[derive(Debug, Clone)]
pub struct UnifDecomposition {
    /// Cell means `C_l` over `[l − 1, l)`; the last cell may be shorter.
    pub cell_means: Vec<C64>,
    /// `s − gamma_step`
    pub sigma1: Antiderivative,
    /// `C_l` on `[l − 1, l)`.
    pub gamma_step: Antiderivative,
    /// Broken line through `(l − 1, C_l)`, constant after the last node.
    pub beta: Antiderivative,
    /// `s − beta`
    pub sigma2: Antiderivative,
    /// `beta'` as a piecewise constant; `beta` is its primitive.
    pub tau: Antiderivative,
    pub summary: UnifSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnifSummary {
    /// `sup_l ∫_{cell l} |σ₁|²`
    pub sup_sigma1_l2: f64,
    /// `sup_l |C_{l+1} − C_l|`
    pub sup_step: f64,
}

pub fn decompose_unif(s: &Antiderivative) -> Result<UnifDecomposition> {
    let x_end = s.domain_end();
    if x_end < 2.0 {
        return Err(Error::parameter(format!("decomposition needs X ≥ 2, got {x_end}")));
    }
    let mut nodes: Vec<f64> = (0..).map(|l| l as f64).take_while(|&l| l < x_end - 1e-12).collect();
    nodes.push(x_end);
    let means: Vec<C64> = nodes
        .windows(2)
        .map(|w| s.moments_unchecked(w[0], w[1]).m0 / (w[1] - w[0]))
        .collect();
    let cells = means.len();

    let step_pieces = means.iter().map(|&c| vec![PieceTerm::constant(c)]).collect();
    let gamma_step = Antiderivative::new(x_end, nodes.clone(), step_pieces, vec![])?;
    let sigma1 = s.add(&gamma_step.scale_real(-1.0))?;

    let zero = C64::new(0.0, 0.0);
    let slopes: Vec<C64> = (0..cells).map(|l| if l + 1 < cells { means[l + 1] - means[l] } else { zero }).collect();
    // unit spacing between consecutive nodes, so the slope is the difference
    let beta_pieces = (0..cells).map(|l| vec![PieceTerm::linear(means[l], slopes[l])]).collect();
    let beta = Antiderivative::new(x_end, nodes.clone(), beta_pieces, vec![])?;
    let tau_pieces = slopes.iter().map(|&k| vec![PieceTerm::constant(k)]).collect();
    let tau = Antiderivative::new(x_end, nodes.clone(), tau_pieces, vec![])?;
    let sigma2 = s.add(&beta.scale_real(-1.0))?;

    let sup_sigma1_l2 = nodes
        .windows(2)
        .map(|w| sigma1.moments_unchecked(w[0], w[1]).q2)
        .fold(0.0, f64::max);
    let sup_step = slopes.iter().map(|k| k.norm()).fold(0.0, f64::max);
    Ok(UnifDecomposition {
        cell_means: means,
        sigma1,
        gamma_step,
        beta,
        sigma2,
        tau,
        summary: UnifSummary { sup_sigma1_l2, sup_step },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::delta_sum;

    #[test]
    fn identity_on_two_cells() {
        let s = Antiderivative::real_polynomial(2.0, &[0.0, 1.0]).unwrap();
        let d = decompose_unif(&s).unwrap();
        assert!((d.cell_means[0].re - 0.5).abs() < 1e-14);
        assert!((d.cell_means[1].re - 1.5).abs() < 1e-14);
        assert!((d.sigma1.moments_unchecked(0.0, 1.0).q2 - 1.0 / 12.0).abs() < 1e-14);
        assert!((d.summary.sup_step - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_has_no_fluctuation() {
        let s = Antiderivative::real_polynomial(3.0, &[2.0]).unwrap();
        let d = decompose_unif(&s).unwrap();
        assert!(d.summary.sup_sigma1_l2 < 1e-28);
        assert!(d.summary.sup_step < 1e-14);
        assert!((d.gamma_step.value(2.5).re - 2.0).abs() < 1e-14);
        assert!(d.tau.value(1.2).norm() < 1e-14);
    }

    #[test]
    fn step_in_second_cell() {
        let s = delta_sum(&[1.5], &[C64::new(1.0, 0.0)], 2.0).unwrap();
        let d = decompose_unif(&s).unwrap();
        assert!(d.cell_means[0].norm() < 1e-15);
        assert!((d.cell_means[1].re - 0.5).abs() < 1e-14);
        assert!((d.sigma1.moments_unchecked(1.0, 2.0).q2 - 0.25).abs() < 1e-14);
    }

    #[test]
    fn reconstruction() {
        let s = Antiderivative::real_polynomial(3.5, &[1.0, -2.0, 0.7, 0.1]).unwrap();
        let d = decompose_unif(&s).unwrap();
        for x in [0.0, 0.4, 1.0, 2.2, 3.0, 3.4] {
            let back = d.sigma1.value(x) + d.gamma_step.value(x);
            assert!((back - s.value(x)).norm() < 1e-12, "x={x}");
            let back2 = d.sigma2.value(x) + d.beta.value(x);
            assert!((back2 - s.value(x)).norm() < 1e-12, "x={x}");
        }
        // the tail cell [3, 3.5] keeps its own mean
        assert_eq!(d.cell_means.len(), 4);
    }
}
