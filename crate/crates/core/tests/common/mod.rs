#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use szego_core::szego::SzegoStructure;
use szego_core::Configuration;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(c1: f64, n: usize) -> Configuration {
    Configuration::new(vec![c(FRAC_1_SQRT_2, 0.0)], vec![c1], n, None).unwrap()
}

pub fn two_point(c1: f64, c2: f64, n: usize) -> Configuration {
    Configuration::new(vec![c(0.5, -0.5), c(-0.25, -0.5)], vec![c1, c2], n, None).unwrap()
}

/// A configuration with the chain `2 → 1 → 0`.
pub fn chained(c1: f64, c2: f64, n: usize) -> Configuration {
    Configuration::new(vec![c(0.8, 0.0), c(0.45, 0.12)], vec![c1, c2], n, None).unwrap()
}

/// Random valid configuration with `ν ≤ max_nu` points spread over the disk.
pub fn random_config(seed: u64, max_nu: usize, integer_c: bool) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let nu = rng.gen_range(1..=max_nu);
        let a: Vec<Complex64> = (0..nu)
            .map(|_| Complex64::from_polar(rng.gen_range(0.2..0.9), rng.gen_range(-3.1..3.1)))
            .collect();
        let spread = a.iter().enumerate().all(|(i, &p)| a[..i].iter().all(|&q| (p - q).norm() > 0.12));
        if !spread {
            continue;
        }
        let cs: Vec<f64> = (0..nu)
            .map(|_| {
                if integer_c {
                    rng.gen_range(1..=3) as f64
                } else {
                    rng.gen_range(-0.9..2.5)
                }
            })
            .map(|x: f64| if x.abs() < 0.05 { 0.5 } else { x })
            .collect();
        if let Ok(cfg) = Configuration::new(a, cs, 12, None) {
            return cfg;
        }
    }
}

/// Random configuration whose Szegő structure is generic.
pub fn random_generic(seed: u64, max_nu: usize, integer_c: bool) -> (Configuration, SzegoStructure) {
    let mut s = seed;
    loop {
        let cfg = random_config(s, max_nu, integer_c);
        let st = SzegoStructure::solve(&cfg);
        if st.is_generic() {
            return (cfg, st);
        }
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    }
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Exact `p_n` for one point with `c = 1`, written with truncated exponentials.
pub fn closed_form_unit_exponent(a: Complex64, n: usize, big_n: f64, z: Complex64) -> Complex64 {
    let e_n = |w: Complex64| {
        let mut t = Complex64::new(1.0, 0.0);
        let mut s = t;
        for k in 1..=n {
            t = t * w / k as f64;
            s += t;
        }
        s
    };
    let ratio = e_n(big_n * a.conj() * z) / e_n(Complex64::new(big_n * a.norm_sqr(), 0.0));
    (z.powu(n as u32 + 1) - a.powu(n as u32 + 1) * ratio) / (z - a)
}
