use std::f64::consts::PI;

use distpot::criteria::window_deviation;
use distpot::forms::{assemble, form_value, hermitian_lambda_min, Gauge};
use distpot::potential::{io, miura, shifted_spike, gauge_amplitude};
use distpot::regsolve::{propagate, State};
use distpot::{testkit, Antiderivative, Interval, C64};
use proptest::prelude::*;

fn potential(seed: u64, x_end: f64, real: bool) -> Antiderivative {
    testkit::random_potential(&mut testkit::rng(seed), x_end, 2.0, real).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_add_over_a_split(seed in any::<u64>(), a in 0.0..1.0f64, frac in 0.01..0.99f64, len in 0.1..2.0f64) {
        let s = potential(seed, 3.0, false);
        let b = a + len;
        let c = a + frac * len;
        let whole = s.moments(Interval::new(a, b).unwrap()).unwrap();
        let l = s.moments(Interval::new(a, c).unwrap()).unwrap();
        let r = s.moments(Interval::new(c, b).unwrap()).unwrap();
        let scale = whole.q2.max(1.0);
        prop_assert!((whole.m0 - l.m0 - r.m0).norm() <= 1e-10 * scale);
        prop_assert!((whole.q2 - l.q2 - r.q2).abs() <= 1e-10 * scale);
    }

    #[test]
    fn deviation_is_quadratically_homogeneous(seed in any::<u64>(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let s = potential(seed, 3.0, false);
        let k = C64::new(re, im);
        let d1 = window_deviation(&s, 0.5, 1.5).unwrap().dev;
        let d2 = window_deviation(&s.scale(k), 0.5, 1.5).unwrap().dev;
        prop_assert!((d2 - k.norm_sqr() * d1).abs() <= 1e-9 * d2.max(1.0));
    }

    #[test]
    fn constant_shift_leaves_deviation_and_form(seed in any::<u64>(), re in -50.0..50.0f64, im in -50.0..50.0f64) {
        let s = potential(seed, 3.0, false);
        let c = C64::new(re, im);
        let t = s.add_constant(c);
        let (d1, d2) = (window_deviation(&s, 0.3, 2.0).unwrap(), window_deviation(&t, 0.3, 2.0).unwrap());
        prop_assert!((d1.dev - d2.dev).abs() <= 1e-9 * d1.dev.max(1.0));

        let iv = Interval::new(1.0, 2.0).unwrap();
        let (w1, w2) = (assemble(&s, iv, 32, None).unwrap(), assemble(&t, iv, 32, None).unwrap());
        let y = w1.interpolate(|x| C64::new((x - 1.0) * (2.0 - x), (3.0 * x).sin() * (x - 1.0) * (2.0 - x)));
        let (f1, f2) = (form_value(&w1, &y).unwrap(), form_value(&w2, &y).unwrap());
        prop_assert!((f1 - f2).norm() <= 1e-10 * f1.norm().max(1.0));
    }

    #[test]
    fn shifted_potential_shifts_quasi_derivative(seed in any::<u64>(), c in -5.0..5.0f64, y0 in -1.0..1.0f64, y10 in -1.0..1.0f64) {
        // y is unchanged; y^[1] = y' − s y moves by −c y
        let s = potential(seed, 1.5, true);
        let t = s.add_constant(C64::new(c, 0.0));
        let iv = Interval::new(0.0, 1.5).unwrap();
        let p = propagate(&s, iv, State::real(y0, y10), None, 300).unwrap();
        let q = propagate(&t, iv, State::real(y0, y10 - c * y0), None, 300).unwrap();
        for (u, v) in p.states.iter().zip(&q.states) {
            let scale = u.y.norm().max(1.0);
            prop_assert!((u.y - v.y).norm() <= 1e-9 * scale);
            prop_assert!((u.y1 - c * u.y - v.y1).norm() <= 1e-9 * scale.max(u.y1.norm()));
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), x_end in 1.0..6.0f64, real in any::<bool>()) {
        let s = potential(seed, x_end, real);
        let back = io::from_json_str(&io::to_json_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn miura_windows_are_nonnegative(seed in any::<u64>()) {
        let gamma = testkit::random_miura_gamma(&mut testkit::rng(seed), 2.0).unwrap();
        let s = miura(&gamma, 0.0).unwrap();
        let w = assemble(&s, Interval::new(0.5, 1.5).unwrap(), 48, None).unwrap();
        prop_assert!(hermitian_lambda_min(&w).unwrap() >= -1e-6);
    }
}

/// With `s = S + g + ∫g²` and `κ₁ = 1 + ε`, the form of `(1 + ε)s` splits into
/// `(1 + ε)` times the `S` part plus the gauge form with `κ₂ = κ₁² − κ₁`.
#[test]
fn gauge_form_reproduces_scaled_potential() {
    let amp = gauge_amplitude(0.5).unwrap();
    let kappa1 = 1.0 / amp;
    let x_end = 8.0;
    let g = shifted_spike(6.0, amp, 5.0, x_end).unwrap();
    let big_s = Antiderivative::real_polynomial(x_end, &[0.0, 0.0, 0.5]).unwrap();
    let s = miura(&g, 0.0).unwrap().add(&big_s).unwrap();
    let gauge = Gauge { g: &g, kappa1, kappa2: kappa1 * kappa1 - kappa1 };
    for (lo, hi) in [(4.5, 5.5), (5.0, 6.0), (5.5, 6.5)] {
        let iv = Interval::new(lo, hi).unwrap();
        let plain = assemble(&s.scale_real(kappa1), iv, 400, None).unwrap();
        let split = assemble(&big_s.scale_real(kappa1), iv, 400, Some(gauge)).unwrap();
        assert_eq!(plain.nodes, split.nodes);
        let mut r = testkit::rng(9);
        for _ in 0..5 {
            use rand::Rng;
            let c: Vec<C64> = (0..plain.dim()).map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
            let (a, b) = (form_value(&plain, &c).unwrap(), form_value(&split, &c).unwrap());
            assert!((a - b).norm() <= 1e-6 * a.norm().max(1.0), "[{lo}, {hi}]: {a} vs {b}");
        }
    }
}

#[test]
fn free_ground_state_converges_at_second_order() {
    let s = Antiderivative::zero(1.0).unwrap();
    let iv = Interval::new(0.0, 1.0).unwrap();
    let errs: Vec<f64> = [32, 64, 128, 256]
        .iter()
        .map(|&n| hermitian_lambda_min(&assemble(&s, iv, n, None).unwrap()).unwrap() - PI * PI)
        .collect();
    for w in errs.windows(2) {
        let rate = (w[0] / w[1]).log2();
        assert!((rate - 2.0).abs() < 0.05, "{errs:?}");
    }
}
