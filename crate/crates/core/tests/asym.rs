mod common;

use common::{c, chained, rel, single, two_point};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use szego_core::asym::{AsymptoticModel, FormulaRegistry};
use szego_core::branches::BranchContext;
use szego_core::specfun::e_c;
use szego_core::szego::trace_curve;

/// The single-point strong asymptotics in closed form.
fn single_point_formula(z: Complex64, cc: f64, n: usize, big_n: f64, inside: bool) -> Complex64 {
    let a = c(FRAC_1_SQRT_2, 0.0);
    if inside {
        let pre = -a * (1.0 - a.norm_sqr()).powf(cc - 1.0) / (big_n.powf(1.0 - cc) * gamma(cc));
        pre * (big_n * (a.conj() * z + a.ln() - a.norm_sqr())).exp() / (z - a)
    } else {
        z.powu(n as u32) * (cc * (z / (z - a)).ln()).exp()
    }
}

fn sample_region(model: &AsymptoticModel, label: usize, count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let z = c(rng.gen_range(-1.6..1.6), rng.gen_range(-1.6..1.6));
        let (phi, labels) = model.structure.phi(z);
        let gap = (0..=model.nu())
            .filter(|l| !labels.contains(l))
            .map(|l| phi - model.structure.phi_label(z, l))
            .fold(f64::INFINITY, f64::min);
        if model.classify(z) == label && labels.len() == 1 && gap > 1e-3 && z.im.abs() > 1e-3 {
            out.push(z);
        }
    }
    out
}

#[test]
fn single_point_closed_form_in_both_regions() {
    for cc in [1.0, 2.0, 0.5, -0.5] {
        let n = 24;
        let model = AsymptoticModel::build(&single(cc, n)).unwrap();
        for label in [0, 1] {
            for z in sample_region(&model, label, 20, 7) {
                let expect = single_point_formula(z, cc, n, n as f64, label == 1);
                let got = model.eval_region(z).unwrap();
                assert!(rel(got, expect) < 1e-12, "c={cc} z={z} {got} {expect}");
            }
        }
    }
}

#[test]
fn single_point_chain_constant() {
    let model = AsymptoticModel::build(&single(1.0, 40)).unwrap();
    assert!((model.chain_constant(1) - FRAC_1_SQRT_2).norm() < 1e-15);
    for cc in [0.5, 2.0, -0.5] {
        let m = AsymptoticModel::build(&single(cc, 40)).unwrap();
        let a = FRAC_1_SQRT_2;
        let expect = a * (1.0 - a * a).powf(cc - 1.0) * 40f64.powf(cc - 1.0) / gamma(cc);
        assert!(rel(m.chain_constant(1), c(expect, 0.0)) < 1e-13);
    }
}

#[test]
fn zeta_map_examples() {
    let model = AsymptoticModel::build(&chained(0.5, 1.5, 30)).unwrap();
    for j in 1..=2 {
        assert!(model.zeta_map(model.structure.a(j), j).norm() < 1e-12);
    }
    let a1 = model.structure.a(1);
    let h = 1e-6;
    let slope = (model.zeta_map(a1 + h, 1) - model.zeta_map(a1 - h, 1)) / (2.0 * h);
    let expect = 30.0 * (1.0 - a1.norm_sqr()) / a1;
    assert!(rel(slope, expect) < 1e-7);

    let curve = trace_curve(&model.structure, 300, 1e-11).unwrap();
    let arc = curve
        .arcs
        .iter()
        .find(|a| (a.j, a.k) == (2, 1))
        .expect("arc between regions 1 and 2");
    let step = arc.points.len() / 6;
    for i in 1..=5 {
        let zeta = model.zeta_map(arc.points[i * step], 2);
        assert!(zeta.re.abs() < 30.0 * 1e-6, "{zeta}");
    }
}

#[test]
fn outer_region_with_unit_exponent() {
    let n = 20;
    let model = AsymptoticModel::build(&single(1.0, n)).unwrap();
    let a = c(FRAC_1_SQRT_2, 0.0);
    for z in [c(1.5, 0.0), c(-0.8, 0.9), c(0.2, -1.3)] {
        let expect = z.powu(n as u32 + 1) / (z - a);
        assert!(rel(model.eval_region(z).unwrap(), expect) < 1e-13);
    }
    let z = c(0.3, 0.1);
    let expect = -a * (20.0 * (a * z + a.ln() - 0.5)).exp() / (z - a);
    assert!(rel(model.eval_region(z).unwrap(), expect) < 1e-12);
}

#[test]
fn outer_region_is_continuous_on_a_loop() {
    let model = AsymptoticModel::build(&two_point(0.3, -0.45, 16)).unwrap();
    let centre = c(0.0, 0.75);
    let mut prev = model.eval_region(centre + 0.1).unwrap();
    for s in 1..=2000 {
        let z = centre + Complex64::from_polar(0.1, 2.0 * PI * s as f64 / 2000.0);
        assert_eq!(model.classify(z), 0);
        let v = model.eval_region(z).unwrap();
        assert!(rel(v, prev) < 0.05);
        prev = v;
    }
}

#[test]
fn uniform_examples() {
    // the competing terms are e^{−N·gap} smaller, far below 1e−12 only for large N
    let model = AsymptoticModel::build(&two_point(0.3, -0.45, 200)).unwrap();
    for t in 0..12 {
        let z = Complex64::from_polar(1.5, 0.5 + PI * t as f64 / 6.0);
        let r = model.eval_region(z).unwrap();
        assert!(rel(model.eval_uniform(z, 30.0).unwrap(), r) < 1e-12);
    }
    let curve = trace_curve(&model.structure, 200, 1e-10).unwrap();
    for arc in curve.arcs.iter().filter(|a| a.k == 0) {
        let z = arc.points[arc.points.len() / 2];
        let ratio = model.log_modulus(z, arc.j) - model.log_modulus(z, 0);
        assert!(ratio.abs() < 30.0);
    }
}

/// Zeros of `A_0 + A_1` along the single-point curve, counted by the
/// winding of `A_1/A_0` (which has modulus near one on the curve).
fn zeros_along_curve(n: usize) -> f64 {
    let model = AsymptoticModel::build(&single(1.0, n)).unwrap();
    let curve = trace_curve(&model.structure, 300, 1e-10).unwrap();
    let pts = &curve.arcs[0].points;
    let q = |z: Complex64| model.term(z, 1).unwrap() / model.term(z, 0).unwrap();
    let mut turn = 0.0;
    for w in pts.windows(2) {
        turn += (q(w[1]) / q(w[0])).arg();
    }
    turn.abs() / (2.0 * PI)
}

#[test]
fn zero_spacing_halves_when_degree_doubles() {
    let ratio = zeros_along_curve(64) / zeros_along_curve(32);
    assert!((1.8..2.2).contains(&ratio), "{ratio}");
}

#[test]
fn local_reduces_to_single_point_formula() {
    for cc in [0.5, 2.0, -0.5, 1.0] {
        let n = 32;
        let big_n = n as f64;
        let model = AsymptoticModel::build(&single(cc, n)).unwrap();
        let a = c(FRAC_1_SQRT_2, 0.0);
        let r = model.local_radius(1);
        for k in 0..12 {
            let z = a + Complex64::from_polar(0.8 * r, 0.1 + 2.0 * PI * k as f64 / 12.0);
            let zeta = -big_n * (a.conj() * z - z.ln() + a.ln() - a.norm_sqr());
            let expect = z.powu(n as u32) * (cc * (z / (z - a)).ln()).exp() * (cc * zeta.ln() - zeta).exp() * e_c(zeta, cc);
            let got = model.eval_local(z, 1).unwrap();
            assert!(rel(got, expect) < 1e-10, "c={cc} z={z} {got} {expect}");
        }
    }
}

#[test]
fn local_matches_outer_region_far_along_positive_zeta() {
    let model = AsymptoticModel::build(&single(0.5, 32)).unwrap();
    for t in [-0.6, -0.3, 0.0, 0.3, 0.6] {
        let z = model.zeta_inverse(Complex64::from_polar(20.0, t), 1).unwrap();
        let ratio = model.eval_local(z, 1).unwrap() / model.term(z, 0).unwrap();
        assert!((ratio - 1.0).norm() < 1e-5, "{ratio}");
    }
}

#[test]
fn local_is_finite_at_each_point() {
    let model = AsymptoticModel::build(&chained(0.5, 1.5, 30)).unwrap();
    for j in 1..=2 {
        let a = model.structure.a(j);
        let v = model.eval_local(a, j).unwrap();
        assert!(v.is_finite() && v.norm() > 0.0);
        let near = model.eval_local(a + c(1e-7, 2e-7), j).unwrap();
        assert!(rel(near, v) < 1e-4);
    }
}

#[test]
fn registry_dispatches_by_name() {
    let model = AsymptoticModel::build(&single(1.0, 16)).unwrap();
    let reg = FormulaRegistry::default();
    let z = c(1.2, 0.3);
    assert_eq!(reg.get("region").unwrap().eval(&model, z).unwrap(), model.eval_region(z).unwrap());
    assert_eq!(
        reg.get("uniform").unwrap().eval(&model, z).unwrap(),
        model.eval_uniform(z, 40.0).unwrap()
    );
    assert!(reg.get("bogus").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chain_constant_scales_with_n(seed in any::<u64>()) {
        let (cfg, s) = common::random_generic(seed, 4, false);
        let m1 = AsymptoticModel::build(&cfg).unwrap();
        let m2 = AsymptoticModel::build(&cfg.with_degree(cfg.n, 2.0 * cfg.big_n)).unwrap();
        for j in 1..=cfg.nu() {
            let mu: f64 = s.chains[j - 1].iter().map(|&k| cfg.c[k - 1] - 1.0).sum();
            let (c1, c2) = (m1.chain_constant(j), m2.chain_constant(j));
            prop_assert!(c1.is_finite() && c1.norm() > 0.0);
            prop_assert!(rel(c2, c1 * 2f64.powf(mu)) < 1e-12);
        }
    }

    #[test]
    fn region_modulus_is_branch_independent(seed in any::<u64>(), shift_seed in any::<u64>()) {
        let (cfg, _) = common::random_generic(seed, 4, false);
        let base = AsymptoticModel::build(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(shift_seed);
        let shifts: Vec<i64> = (0..cfg.nu()).map(|_| rng.gen_range(-2..=2)).collect();
        let moved = AsymptoticModel::with_branch(&cfg, BranchContext::with_shifts(&cfg, &shifts)).unwrap();
        for _ in 0..20 {
            let z = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if let (Ok(p), Ok(q)) = (base.eval_region(z), moved.eval_region(z)) {
                prop_assert!((p.norm() - q.norm()).abs() <= 1e-10 * p.norm());
            }
        }
    }
}
