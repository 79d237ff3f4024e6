mod common;

use common::{c, rel};
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;
use szego_core::oracle::quadrature::composite_legendre;
use szego_core::specfun::{alpha, asymptotic_sum, e_c, f_c, f_c_integer, zeros_e_c, zeros_e_c_jittered, FcEvaluator, Rect};

/// `f_c` from its Hankel-loop integral: the two edges of the negative axis
/// plus a circle of radius `ρ < |ζ|` around the origin.
fn f_c_hankel(zeta: Complex64, cc: f64) -> Complex64 {
    let rho = (0.5 * zeta.norm()).min(0.5);
    let mut total = Complex64::new(0.0, 0.0);
    if cc != cc.round() {
        // geometric panels resolve x^{−c} near ρ and the pole near −ζ
        let mut edge = Complex64::new(0.0, 0.0);
        let mut lo = rho;
        while lo < 80.0 {
            let hi = (lo * 1.25).min(lo + 0.5);
            let rule = composite_legendre(lo, hi, 1, 20);
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                edge += w * (-x - cc * x.ln()).exp() / (-(x + zeta));
            }
            lo = hi;
        }
        total += Complex64::new(0.0, 2.0 * (PI * cc).sin()) * edge;
    }
    // the cut of s^c meets the circle at θ = ±π, so integrate θ by Gauss–Legendre
    let rule = composite_legendre(-PI, PI, 16, 20);
    let mut circle = Complex64::new(0.0, 0.0);
    for (&theta, &w) in rule.nodes.iter().zip(&rule.weights) {
        let s = Complex64::from_polar(rho, theta);
        let s_pow = Complex64::from_polar(rho.powf(cc), cc * theta);
        circle += w * s.exp() / (s_pow * (s - zeta)) * Complex64::i() * s;
    }
    total += circle;
    -total / Complex64::new(0.0, 2.0 * PI)
}

#[test]
fn hankel_oracle_reproduces_integer_cases() {
    assert!(rel(f_c_hankel(c(2.0, 0.0), 1.0), c(0.5, 0.0)) < 1e-12);
    assert!(rel(f_c_hankel(c(1.0, 0.0), 2.0), c(2.0, 0.0)) < 1e-12);
}

#[test]
fn integer_examples() {
    assert!((f_c(c(2.0, 0.0), 1.0).unwrap() - 0.5).norm() < 1e-15);
    assert!((f_c(c(1.0, 0.0), 2.0).unwrap() - 2.0).norm() < 1e-15);
}

#[test]
fn half_exponent_at_ten() {
    let z = c(10.0, 0.0);
    let v = f_c(z, 0.5).unwrap();
    assert!(rel(v, f_c_hankel(z, 0.5)) < 1e-10, "{v} {}", f_c_hankel(z, 0.5));
    let series = asymptotic_sum(z, 0.5, 10);
    let first_omitted = alpha(11, 0.5).abs() / 10f64.powi(11);
    assert!((v - series).norm() <= first_omitted, "{} {first_omitted}", (v - series).norm());
}

#[test]
fn alpha_examples() {
    assert!((alpha(1, 0.5) - 0.5641896).abs() < 1e-7);
    assert!((alpha(2, 0.5) - (-0.2820948)).abs() < 1e-7);
    assert_eq!(alpha(4, 3.0), 0.0);
    for cc in [-0.5, 0.5, 1.5, 2.5] {
        assert!((alpha(1, cc) - 1.0 / gamma(cc)).abs() < 1e-12);
    }
}

#[test]
fn entire_function_examples() {
    assert!(e_c(c(0.0, 2.0 * PI), 1.0).norm() < 1e-14);
    let ev = FcEvaluator::new(0.5);
    for x in [5.0, 20.0, 60.0] {
        let z = c(x, 0.0);
        let d = ev.e(z) - ev.exp_over_power(z);
        assert!(d.norm() < 1.0 / x);
    }
    let (up, dn) = ev.one_sided_limits(-3.0).unwrap();
    assert!((up - dn).norm() < 1e-6 * up.norm());
}

#[test]
fn series_consistency_at_radius_twenty() {
    for cc in [-0.5, 0.5, 1.5] {
        let bound = 2.0 * alpha(9, cc).abs() / 20f64.powi(9) * 10.0;
        for k in 0..16 {
            let theta = -0.9 * PI + 1.8 * PI * k as f64 / 15.0;
            let z = Complex64::from_polar(20.0, theta);
            let err = (f_c(z, cc).unwrap() - asymptotic_sum(z, cc, 8)).norm();
            assert!(err <= bound, "c={cc} θ={theta} err={err} bound={bound}");
        }
    }
}

#[test]
fn entirety_across_the_negative_axis() {
    for cc in [-0.5, 0.5, 1.5, 2.3] {
        let ev = FcEvaluator::new(cc);
        for k in 0..50 {
            let x = -10.0 + 10.0 * (k as f64 + 0.5) / 50.0;
            let (up, dn) = ev.one_sided_limits(x).unwrap();
            assert!((up - dn).norm() < 1e-6 * up.norm().max(dn.norm()), "c={cc} x={x}");
        }
    }
}

#[test]
fn integer_collapse() {
    for m in 1..=3u32 {
        let ev = FcEvaluator::new(m as f64);
        for k in 0..100 {
            let z = Complex64::from_polar(0.3 + 0.37 * k as f64, -2.9 + 0.058 * k as f64);
            let exact = f_c_integer(z, m);
            assert!(rel(ev.f_general(z).unwrap(), exact) < 1e-12, "c={m} z={z}");
        }
    }
}

#[test]
fn unit_exponent_zero_in_small_box() {
    let zeros = zeros_e_c_jittered(1.0, Rect::new(0.0, 1.0, 5.0, 8.0), 1e-10).unwrap();
    assert_eq!(zeros.len(), 1);
    assert!((zeros[0] - c(0.0, 2.0 * PI)).norm() < 1e-9);
}

/// Winding number of `E_c` around the boundary of `r`, from dense sampling.
fn winding(cc: f64, r: Rect, per_side: usize) -> i64 {
    let corners = [c(r.re0, r.im0), c(r.re1, r.im0), c(r.re1, r.im1), c(r.re0, r.im1)];
    let mut total = 0.0;
    let mut prev = e_c(corners[0], cc);
    for side in 0..4 {
        let (p, q) = (corners[side], corners[(side + 1) % 4]);
        for s in 1..=per_side {
            let v = e_c(p + (q - p) * (s as f64 / per_side as f64), cc);
            total += (v / prev).arg();
            prev = v;
        }
    }
    (total / (2.0 * PI)).round() as i64
}

#[test]
fn zero_count_matches_winding_number() {
    let r = Rect::new(-10.0, 10.0, -10.0, 10.0);
    let zeros = zeros_e_c(2.0, r, 1e-10).unwrap();
    assert_eq!(zeros.len() as i64, winding(2.0, r, 20000));
    assert!(!zeros.is_empty());
    for z in zeros {
        assert!(e_c(z, 2.0).norm() < 1e-8 * FcEvaluator::new(2.0).local_scale(z));
    }
}

/// Zeros of `E_c` far out sit where `|e^ζ| = |ζ|^{c−1}/|Γ(c)|`, i.e. on
/// `Re ζ = (c − 1) ln|ζ| − ln|Γ(c)|`.
#[test]
fn negative_exponent_zeros_follow_the_log_curve() {
    let cc = -0.5;
    let zeros = zeros_e_c(cc, Rect::new(-10.0, 20.0, 0.5, 60.0), 1e-10).unwrap();
    assert!(zeros.len() >= 4, "{zeros:?}");
    for w in zeros.windows(2) {
        assert!(w[1].re < w[0].re, "{zeros:?}");
    }
    for z in zeros.iter().filter(|z| z.norm() > 10.0) {
        let predicted = (cc - 1.0) * z.norm().ln() - gamma(cc).abs().ln();
        assert!((z.re - predicted).abs() < 0.5, "{z} vs {predicted}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agrees_with_hankel_integral(cc in -0.9f64..3.0, r in 0.2f64..35.0, t in -2.5f64..2.5) {
        prop_assume!((cc - cc.round()).abs() > 1e-3);
        let z = Complex64::from_polar(r, t);
        let v = f_c(z, cc).unwrap();
        let o = f_c_hankel(z, cc);
        prop_assert!(rel(v, o) < 1e-9, "c={} z={} got {} oracle {}", cc, z, v, o);
    }
}
