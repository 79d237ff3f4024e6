//! Reference configurations shared by the acceptance suite.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use szego_core::szego::SzegoStructure;
use szego_core::Configuration;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// One point at `1/√2` with exponent `c1`.
pub fn single(c1: f64, n: usize) -> Configuration {
    Configuration::new(vec![c(FRAC_1_SQRT_2, 0.0)], vec![c1], n, None).unwrap()
}

/// The two points `0.5 − 0.5i` and `−0.25 − 0.5i`.
pub fn two_point(c1: f64, c2: f64, n: usize) -> Configuration {
    Configuration::new(vec![c(0.5, -0.5), c(-0.25, -0.5)], vec![c1, c2], n, None).unwrap()
}

/// A configuration with the chain `2 → 1 → 0`.
pub fn chained(c1: f64, c2: f64, n: usize) -> Configuration {
    Configuration::new(vec![c(0.8, 0.0), c(0.45, 0.12)], vec![c1, c2], n, None).unwrap()
}

/// Random configuration with `ν ≤ max_nu` well separated points whose Szegő
/// structure is generic.
pub fn random_generic(seed: u64, max_nu: usize) -> (Configuration, SzegoStructure) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let nu = rng.gen_range(1..=max_nu);
        let a: Vec<Complex64> = (0..nu)
            .map(|_| Complex64::from_polar(rng.gen_range(0.2..0.9), rng.gen_range(-3.1..3.1)))
            .collect();
        if !a.iter().enumerate().all(|(i, &p)| a[..i].iter().all(|&q| (p - q).norm() > 0.12)) {
            continue;
        }
        let cs: Vec<f64> = (0..nu).map(|_| rng.gen_range(0.1..2.5)).collect();
        if let Ok(cfg) = Configuration::new(a, cs, 12, None) {
            let s = SzegoStructure::solve(&cfg);
            if s.is_generic() {
                return (cfg, s);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_generic() {
        for cfg in [single(1.0, 4), two_point(1.0, 1.0, 4), chained(1.0, 1.0, 4)] {
            assert!(SzegoStructure::solve(&cfg).is_generic());
        }
        for seed in 0..5 {
            let (cfg, _) = random_generic(seed, 4);
            assert!((1..=4).contains(&cfg.nu()));
        }
    }
}
