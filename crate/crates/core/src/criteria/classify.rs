//! Combining the individual criteria into a verdict.

use serde::Serialize;
use serde_json::json;

use super::sectorial::{brinck, sector_fit, BrinckHint};
use super::{scan_necessary, TrendConfig};
use crate::error::{Error, Result};
use crate::potential::Antiderivative;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    CompactResolvent,
    NotCompact,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub rule: String,
    pub theorem: String,
    pub values: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    #[serde(rename = "verdict")]
    pub outcome: Outcome,
    /// Rule that decided the outcome, if any.
    pub decided_by: Option<String>,
    pub evidence: Vec<Evidence>,
}

impl Verdict {
    pub fn evidence_for(&self, rule: &str) -> Option<&Evidence> {
        self.evidence.iter().find(|e| e.rule == rule)
    }
}

/// Known base `s₀` with margin `ε` for the perturbation rule.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub base: Antiderivative,
    pub epsilon: f64,
    /// Ceiling on the unit-window double integral of `s − s₀`.
    pub unif_threshold: f64,
}

#[derive(Debug, Clone)]
pub struct ClassifyConfig {
    pub a: f64,
    pub d: f64,
    pub trend: TrendConfig,
    pub perturbation: Option<Perturbation>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { a: 1.0, d: 1.0, trend: TrendConfig::default(), perturbation: None }
    }
}

pub const RULE_NECESSARY: &str = "necessary_condition";
pub const RULE_BRINCK: &str = "difference_sector_growth";
pub const RULE_SECTOR_FIT: &str = "shifted_sector_divergence";
pub const RULE_PERTURBATION: &str = "unif_perturbation";

/// Evaluates every rule, records each in the evidence, and decides by the
/// first rule that applies:
///
/// 1. bounded double-integral scan: not compact;
/// 2. strict sector on local differences: compact iff increments grow;
/// 3. sector on shifted differences with a divergent scan: compact;
/// 4. bounded perturbation of a compact base whose `(1 + ε)` multiple is
///    strictly sectorial: compact;
///
/// otherwise inconclusive.
pub fn classify(s: &Antiderivative, config: &ClassifyConfig) -> Result<Verdict> {
    if !(config.a > 0.0) {
        return Err(Error::parameter(format!("window length {} must be positive", config.a)));
    }
    let a = config.a.min(s.domain_end());
    let mut evidence = Vec::new();
    let mut decided: Option<(Outcome, &str)> = None;

    let (series, refuted) = scan_necessary(s, a, &config.trend)?;
    evidence.push(Evidence {
        rule: RULE_NECESSARY.into(),
        theorem: "windowed double integral must diverge for compactness".into(),
        values: json!({
            "a": a,
            "windows": series.len(),
            "first": series.values.first(),
            "last": series.values.last(),
            "max": series.max(),
            "bounded": refuted,
            "growth_factor": config.trend.growth_factor,
            "abs_threshold": config.trend.abs_threshold,
        }),
    });
    if refuted {
        decided = Some((Outcome::NotCompact, RULE_NECESSARY));
    }

    let br = brinck(s, config.d, a, &config.trend)?;
    evidence.push(Evidence {
        rule: RULE_BRINCK.into(),
        theorem: "strict sector of s(x)−s(t); compact iff |s(x+a)−s(x)| → ∞".into(),
        values: json!({
            "d": config.d,
            "sector": br.diff_sector,
            "raw_sector": br.raw_sector,
            "vertex_drift": br.vertex_drift,
            "growth_last": br.growth.values.last(),
            "growth_bounded": br.growth_bounded,
            "hint": br.hint,
        }),
    });
    if decided.is_none() {
        match br.hint {
            BrinckHint::CompactResolvent => decided = Some((Outcome::CompactResolvent, RULE_BRINCK)),
            BrinckHint::NotCompact => decided = Some((Outcome::NotCompact, RULE_BRINCK)),
            BrinckHint::Inconclusive => {}
        }
    }

    let fit = sector_fit(s, config.d, None, None)?;
    evidence.push(Evidence {
        rule: RULE_SECTOR_FIT.into(),
        theorem: "sector of s(x)+f(x)−s(t)−g(t) with divergent double integral".into(),
        values: json!({ "sector": fit, "divergent": !refuted }),
    });
    if decided.is_none() && fit.is_some() && !refuted {
        decided = Some((Outcome::CompactResolvent, RULE_SECTOR_FIT));
    }

    if let Some(p) = &config.perturbation {
        let fired = perturbation_rule(s, p, config, &mut evidence)?;
        if decided.is_none() && fired {
            decided = Some((Outcome::CompactResolvent, RULE_PERTURBATION));
        }
    }

    let (outcome, by) = match decided {
        Some((o, r)) => (o, Some(r.to_string())),
        None => (Outcome::Inconclusive, None),
    };
    Ok(Verdict { outcome, decided_by: by, evidence })
}

fn perturbation_rule(
    s: &Antiderivative,
    p: &Perturbation,
    config: &ClassifyConfig,
    evidence: &mut Vec<Evidence>,
) -> Result<bool> {
    if !(p.epsilon > 0.0) {
        return Err(Error::parameter(format!("margin ε = {} must be positive", p.epsilon)));
    }
    let sigma = s.add(&p.base.scale_real(-1.0))?;
    let a = 1.0f64.min(s.domain_end());
    let (series, bounded) = scan_necessary(&sigma, a, &config.trend)?;
    let unif = bounded && series.max() <= p.unif_threshold;

    let scaled = p.base.scale_real(1.0 + p.epsilon);
    let br = brinck(&scaled, config.d, config.a.min(s.domain_end()), &config.trend)?;
    let fit = sector_fit(&scaled, config.d, None, None)?;
    let strict = br.diff_sector.is_some() || fit.is_some();

    let base_config = ClassifyConfig { perturbation: None, ..config.clone() };
    let base = classify(&p.base, &base_config)?;
    let fired = unif && strict && base.outcome == Outcome::CompactResolvent;
    evidence.push(Evidence {
        rule: RULE_PERTURBATION.into(),
        theorem: "W^-1_2,unif perturbation of a strictly sectorial (1+ε) base".into(),
        values: json!({
            "epsilon": p.epsilon,
            "sigma_sup_dbl": series.max(),
            "sigma_bounded": unif,
            "scaled_base_strict": strict,
            "base_verdict": base.outcome,
            "fired": fired,
        }),
    });
    Ok(fired)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::C64;

    fn cfg() -> ClassifyConfig {
        ClassifyConfig::default()
    }

    #[test]
    fn linear_is_not_compact_by_necessary_condition() {
        let s = Antiderivative::real_polynomial(20.0, &[0.0, 1.0]).unwrap();
        let v = classify(&s, &cfg()).unwrap();
        assert_eq!(v.outcome, Outcome::NotCompact);
        assert_eq!(v.decided_by.as_deref(), Some(RULE_NECESSARY));
    }

    #[test]
    fn half_square_is_compact_by_difference_sector() {
        let s = Antiderivative::real_polynomial(20.0, &[0.0, 0.0, 0.5]).unwrap();
        let v = classify(&s, &cfg()).unwrap();
        assert_eq!(v.outcome, Outcome::CompactResolvent);
        assert_eq!(v.decided_by.as_deref(), Some(RULE_BRINCK));
    }

    #[test]
    fn imaginary_line_records_sector_equivalence() {
        let z = C64::new(0.0, 0.0);
        let s = Antiderivative::polynomial(20.0, [z, C64::new(0.0, 1.0), z, z]).unwrap();
        let v = classify(&s, &cfg()).unwrap();
        assert_eq!(v.outcome, Outcome::NotCompact);
        let e = v.evidence_for(RULE_BRINCK).unwrap();
        assert_eq!(e.values["hint"], "NotCompact");
    }

    #[test]
    fn perturbation_inherits_compactness() {
        let base = Antiderivative::real_polynomial(20.0, &[0.0, 0.0, 0.5]).unwrap();
        let wiggle = crate::potential::delta_sum(
            &(1..20).map(|k| k as f64).collect::<Vec<_>>(),
            &(1..20).map(|k| C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect::<Vec<_>>(),
            20.0,
        )
        .unwrap();
        let s = base.add(&wiggle).unwrap();
        let config = ClassifyConfig {
            perturbation: Some(Perturbation { base, epsilon: 0.1, unif_threshold: 10.0 }),
            ..cfg()
        };
        let v = classify(&s, &config).unwrap();
        let e = v.evidence_for(RULE_PERTURBATION).unwrap();
        assert_eq!(e.values["fired"], true);
        assert_eq!(v.outcome, Outcome::CompactResolvent);
    }

    #[test]
    fn deterministic() {
        let s = Antiderivative::real_polynomial(12.0, &[1.0, -0.3, 0.2]).unwrap();
        let a = serde_json::to_string(&classify(&s, &cfg()).unwrap()).unwrap();
        let b = serde_json::to_string(&classify(&s, &cfg()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
