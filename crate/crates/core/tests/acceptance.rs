//! One test per acceptance criterion. Each prints a single
//! `PASS`/`FAIL` line with the measured values before asserting.

use std::f64::consts::PI;

use distpot::criteria::{classify, ClassifyConfig, Outcome, RULE_BRINCK, RULE_NECESSARY};
use distpot::forms::{assemble, form_value, hermitian_lambda_min, inf_modulus, localization_scan, WindowFamily};
use distpot::potential::{delta_sum, miura, VhProfile};
use distpot::verify;
use distpot::{testkit, Antiderivative, Interval, C64};

const SEED: u64 = 2024;

fn verdict(id: &str, what: &str, pass: bool, detail: String) {
    println!("{} {id:>3} {what}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({what}) failed: {detail}");
}

fn suite(id: &str, what: &str, r: verify::SuiteResult) {
    let detail = format!("{} cases, worst {:.3e} (tolerance {:.1e})", r.cases, r.worst, r.tolerance);
    let dump = r.dump.as_ref().map(|d| d.to_string()).unwrap_or_default();
    verdict(id, what, r.passed, if dump.is_empty() { detail } else { format!("{detail}; first failure {dump}") });
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

#[test]
fn criterion_01_variance_identity() {
    suite("1", "deviation identity vs direct double integral", verify::variance_identity(SEED, 50).unwrap());
}

#[test]
fn criterion_02_two_sided_inequality() {
    suite("2", "a·dev ≤ dbl ≤ 4a·dev", verify::two_sided_inequality(SEED, 50).unwrap());
}

#[test]
fn criterion_03_free_ground_state() {
    let s = Antiderivative::zero(1.0).unwrap();
    let errs: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|&n| hermitian_lambda_min(&assemble(&s, unit(), n, None).unwrap()).unwrap() - PI * PI)
        .collect();
    let rel = errs[3].abs() / (PI * PI);
    let rates: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let pass = rel < 1e-3 && rates.iter().all(|r| (r - 2.0).abs() < 0.1);
    verdict("3", "FEM ground state and O(n⁻²) rate", pass, format!("rel error {rel:.2e} at n=512, rates {rates:.3?}"));
}

#[test]
fn criterion_04_delta_form() {
    let mut worst: f64 = 0.0;
    for alpha in [-1.0, 1.0, 5.0] {
        let s = delta_sum(&[0.5], &[C64::new(alpha, 0.0)], 1.0).unwrap();
        let w = assemble(&s, unit(), 512, None).unwrap();
        let c = w.interpolate(|x| C64::new(2f64.sqrt() * (PI * x).sin(), 0.0));
        let v = form_value(&w, &c).unwrap();
        worst = worst.max((v - (PI * PI + 2.0 * alpha)).norm());
    }
    verdict("4", "point interaction adds 2α", worst < 1e-2, format!("max |value − (π² + 2α)| = {worst:.2e}"));
}

#[test]
fn criterion_05_classification_triple() {
    let x_end = 20.0;
    let zero = C64::new(0.0, 0.0);
    let cases = [
        ("x", Antiderivative::real_polynomial(x_end, &[0.0, 1.0]).unwrap(), Outcome::NotCompact, RULE_NECESSARY),
        ("x²/2", Antiderivative::real_polynomial(x_end, &[0.0, 0.0, 0.5]).unwrap(), Outcome::CompactResolvent, RULE_BRINCK),
        ("i·x", Antiderivative::polynomial(x_end, [zero, C64::new(0.0, 1.0), zero, zero]).unwrap(), Outcome::NotCompact, RULE_NECESSARY),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, s, want, rule) in cases {
        let v = classify(&s, &ClassifyConfig::default()).unwrap();
        let ok = v.outcome == want && v.decided_by.as_deref() == Some(rule) && v.evidence_for(rule).is_some();
        pass &= ok;
        detail.push(format!("{name} → {:?} by {:?}", v.outcome, v.decided_by.as_deref().unwrap_or("")));
        if name == "i·x" {
            // the sector rule agrees: increments of i·x stay bounded
            let hint = &v.evidence_for(RULE_BRINCK).unwrap().values["hint"];
            pass &= hint == "NotCompact";
        }
    }
    verdict("5", "classification of x, x²/2, i·x", pass, detail.join("; "));
}

#[test]
fn criterion_06_growth_bound() {
    suite("6", "fundamental solutions bounded by 2 on short windows", verify::growth_bound(SEED, 100).unwrap());
}

#[test]
fn criterion_07_partition_identity() {
    suite("7", "partition-of-unity splitting of the form", verify::partition_identity(SEED, 10).unwrap());
}

#[test]
fn criterion_08_miura_semiboundedness() {
    let mut rng = testkit::rng(SEED);
    let mut worst = f64::INFINITY;
    for _ in 0..20 {
        let gamma = testkit::random_miura_gamma(&mut rng, 4.0).unwrap();
        let s = miura(&gamma, 0.0).unwrap();
        let table = localization_scan(&s, 64, 16).unwrap();
        for r in table.rows.iter().filter(|r| r.family == WindowFamily::Unit) {
            worst = worst.min(r.herm_lambda_min);
        }
    }
    verdict("8", "Miura potentials have nonnegative unit windows", worst >= -1e-6, format!("min λ = {worst:.3e}"));
}

#[test]
fn criterion_09a_counterexample_energy() {
    let h = 10.0;
    let alpha = 1.0 - 0.5f64.cbrt();
    let value = VhProfile::new(h).unwrap().m_form(alpha);
    let bound = 2.0 / (3.0 * h) - (2.0 * alpha / 3.0) * h.powi(4) + 1e-3;
    verdict("9a", "gauge-form energy of v_h at h = 10", value <= bound, format!("value {value:.4} ≤ bound {bound:.4}"));
}

/// Not attainable as stated: the profile norm over `[0, 1]` tends to 25/12
/// (each half contributes 25/24), and the `O(1/h)` term is about `3/h`.
#[test]
#[ignore = "known failure: target value and tolerance are inconsistent with the profile, see README"]
fn criterion_09b_profile_norm() {
    let mut detail = Vec::new();
    let mut pass = true;
    for h in [10.0, 40.0, 160.0] {
        let n = VhProfile::new(h).unwrap().norm_sq();
        let gap = (n - 25.0 / 24.0).abs();
        pass &= gap <= 0.5 / h;
        detail.push(format!("h={h}: ‖v‖² = {n:.6}, |‖v‖² − 25/24| = {gap:.4} vs {:.4}", 0.5 / h));
    }
    verdict("9b", "profile norm near 25/24", pass, detail.join("; "));
}

#[test]
fn criterion_10_localization_trend() {
    let s = Antiderivative::real_polynomial(12.0, &[0.0, 0.0, 0.5]).unwrap();
    let table = localization_scan(&s, 256, 64).unwrap();
    let mut pass = true;
    let mut lows = Vec::new();
    for r in table.rows.iter().filter(|r| r.family == WindowFamily::Unit) {
        let k = r.window_hi.round();
        if (2.0..=11.0).contains(&k) {
            let lo = r.infmod_lower;
            pass &= lo >= PI * PI + k - 1.0 - 1e-2 && lo <= PI * PI + k + 1e-2;
            lows.push(lo - PI * PI);
        }
    }
    pass &= lows.len() == 10;
    verdict("10", "unit-window lower bounds climb with k", pass, format!("lower − π² for k = 2..11: {lows:.3?}"));
}

#[test]
fn criterion_11_complex_inf_modulus() {
    let zero = C64::new(0.0, 0.0);
    let s = Antiderivative::polynomial(1.0, [zero, C64::new(0.0, 1.0), zero, zero]).unwrap();
    let (lo, hi) = inf_modulus(&assemble(&s, unit(), 512, None).unwrap()).unwrap();
    let exact = (PI.powi(4) + 1.0).sqrt();
    let pass = lo <= exact && exact <= hi && hi - lo <= 0.05;
    verdict("11", "inf-modulus bracket for i·x", pass, format!("[{lo:.6}, {hi:.6}] around {exact:.6}"));
}

#[test]
fn criterion_12_solver_consistency() {
    suite("12", "Cauchy kernel vs forced propagation, Wronskian", verify::solver_consistency(SEED, 20).unwrap());
}
