//! Moment matrices `M[j][k] = ∫ z^j z̄^k e^{−N|z|²} ∏|z − a_i|^{2c_i} dA`.
//!
//! Two interchangeable methods sit behind [`MomentMethod`]: an exact
//! expansion for positive integer exponents and a polar quadrature that
//! handles any `c > −1`. A [`MomentRegistry`] selects them by name.

use super::quadrature::{composite_legendre, radial_power_rule, Rule};
use super::{gaussian_moment_dd, MomentMatrix};
use crate::config::{is_integer, Configuration};
use crate::dd::{Dd, DdComplex};
use crate::error::OracleError;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

pub trait MomentMethod: Send + Sync {
    fn name(&self) -> &'static str;
    /// Moments `M[j][k]` for `0 ≤ j, k < size`.
    fn compute(&self, cfg: &Configuration, size: usize) -> Result<MomentMatrix, OracleError>;
}

pub struct MomentRegistry {
    methods: Vec<Box<dyn MomentMethod>>,
}

impl Default for MomentRegistry {
    fn default() -> Self {
        let mut r = MomentRegistry { methods: Vec::new() };
        r.register(Box::new(ExactMoments));
        r.register(Box::new(QuadratureMoments::default()));
        r
    }
}

impl MomentRegistry {
    /// Adds a method, replacing any previous one with the same name.
    pub fn register(&mut self, method: Box<dyn MomentMethod>) {
        self.methods.retain(|m| m.name() != method.name());
        self.methods.push(method);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MomentMethod, OracleError> {
        self.methods
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| OracleError::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.iter().map(|m| m.name()).collect()
    }

    /// Exact moments when every exponent is a positive integer, quadrature otherwise.
    pub fn auto(&self, cfg: &Configuration) -> &dyn MomentMethod {
        let name = if cfg.c.iter().all(|&c| is_integer(c) && c > 0.0) {
            "exact"
        } else {
            "quad"
        };
        self.get(name).expect("default methods are registered")
    }
}

/// Closed-form moments for positive integer exponents.
pub struct ExactMoments;

impl ExactMoments {
    /// Coefficients of `∏ (z − a_i)^{c_i}`, constant term first.
    pub fn weight_polynomial(cfg: &Configuration) -> Result<Vec<DdComplex>, OracleError> {
        let mut u = vec![DdComplex::ONE];
        for (index, (&a, &c)) in cfg.a.iter().zip(&cfg.c).enumerate() {
            if !(is_integer(c) && c > 0.0) {
                return Err(OracleError::NonIntegerExponent { index, value: c });
            }
            let root = DdComplex::from_c64(a);
            for _ in 0..c as usize {
                let mut next = vec![DdComplex::ZERO; u.len() + 1];
                for (p, &up) in u.iter().enumerate() {
                    next[p + 1] += up;
                    next[p] = next[p] - up * root;
                }
                u = next;
            }
        }
        Ok(u)
    }
}

impl MomentMethod for ExactMoments {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn compute(&self, cfg: &Configuration, size: usize) -> Result<MomentMatrix, OracleError> {
        let u = Self::weight_polynomial(cfg)?;
        let deg = u.len() - 1;
        let g: Vec<Dd> = gaussian_moment_dd(size + deg, cfg.big_n);
        let mut m = MomentMatrix::zeros(size, self.name());
        for j in 0..size {
            for k in 0..=j {
                let mut s = DdComplex::ZERO;
                // z^{j+p} z̄^{k+q} survives only when j + p = k + q
                for (p, &up) in u.iter().enumerate() {
                    let jp = j + p;
                    if jp < k || jp - k > deg {
                        continue;
                    }
                    let q = jp - k;
                    s += (up * u[q].conj()).scale(g[jp]);
                }
                m.set(j, k, s);
                m.set(k, j, s.conj());
            }
        }
        Ok(m)
    }
}

/// Polar tensor quadrature with smooth cut-off patches around the singular points.
#[derive(Debug, Clone)]
pub struct QuadratureMoments {
    pub tol: f64,
    pub max_doublings: usize,
    /// Multiplies the truncation radius `sqrt((2n + 40)/N)`.
    pub radius_scale: f64,
    pub radial_panels: usize,
    pub radial_order: usize,
    pub angular: usize,
    pub patch_order: usize,
    pub patch_angular: usize,
}

impl Default for QuadratureMoments {
    fn default() -> Self {
        QuadratureMoments {
            tol: 1e-10,
            max_doublings: 4,
            radius_scale: 1.0,
            radial_panels: 24,
            radial_order: 16,
            angular: 128,
            patch_order: 24,
            patch_angular: 64,
        }
    }
}

/// `C^∞` step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

const PATCH_RADIUS: f64 = 0.3;

struct Patch {
    centre: Complex64,
    index: usize,
    radius: f64,
}

impl Patch {
    /// Cut-off equal to one at the centre, zero outside the disk.
    fn bump(&self, z: Complex64) -> f64 {
        let rho = (z - self.centre).norm();
        smooth_step(1.0 - rho / self.radius)
    }
}

struct Level {
    radial: Rule,
    angular: usize,
    patch_inner: Rule,
    patch_angular: usize,
}

impl QuadratureMoments {
    fn patches(cfg: &Configuration) -> Vec<Patch> {
        (0..cfg.nu())
            .filter(|&i| !is_integer(cfg.c[i]))
            .map(|i| {
                let sep = (0..cfg.nu())
                    .filter(|&k| k != i)
                    .map(|k| (cfg.a[k] - cfg.a[i]).norm())
                    .fold(f64::INFINITY, f64::min);
                Patch {
                    centre: cfg.a[i],
                    index: i,
                    radius: PATCH_RADIUS.min(0.45 * sep),
                }
            })
            .collect()
    }

    fn level(&self, cfg: &Configuration, size: usize, doubling: usize, patch: Option<(f64, f64)>) -> Level {
        let f = 1usize << doubling;
        let n = size.saturating_sub(1);
        let r_max = self.radius_scale * ((2 * n + 40) as f64 / cfg.big_n).sqrt();
        let deg = 2 * n + 2 * cfg.c.iter().map(|c| c.abs().ceil() as usize).sum::<usize>();
        let angular = self.angular.max(deg + 16) * f;
        let (gamma, radius) = patch.unwrap_or((0.0, 1.0));
        Level {
            radial: composite_legendre(0.0, r_max, self.radial_panels * f, self.radial_order),
            angular,
            patch_inner: radial_power_rule(self.patch_order * f, gamma, radius),
            patch_angular: self.patch_angular.max(deg + 16) * f,
        }
    }

    fn weight(cfg: &Configuration, z: Complex64, skip: Option<usize>) -> f64 {
        let mut w = (-cfg.big_n * z.norm_sqr()).exp();
        for (i, (&a, &c)) in cfg.a.iter().zip(&cfg.c).enumerate() {
            if Some(i) != skip {
                w *= (z - a).norm_sqr().powf(c);
            }
        }
        w
    }

    /// Adds `ω z^j z̄^k` to the lower triangle of `acc`.
    fn accumulate(acc: &mut [Complex64], size: usize, z: Complex64, omega: f64, powers: &mut [Complex64]) {
        let mut p = Complex64::new(omega, 0.0);
        for pw in powers.iter_mut() {
            *pw = p;
            p *= z;
        }
        let mut zp = Complex64::new(1.0, 0.0);
        for j in 0..size {
            for k in 0..=j {
                acc[j * size + k] += zp * powers[k].conj();
            }
            zp *= z;
        }
    }

    fn integrate(&self, cfg: &Configuration, size: usize, doubling: usize) -> MomentMatrix {
        let patches = Self::patches(cfg);
        let global = self.level(cfg, size, doubling, None);
        let dtheta = 2.0 * PI / global.angular as f64;
        let cut = |z: Complex64| 1.0 - patches.iter().map(|p| p.bump(z)).sum::<f64>();

        let panel_sums: Vec<Vec<Complex64>> = global
            .radial
            .nodes
            .par_chunks(self.radial_order)
            .zip(global.radial.weights.par_chunks(self.radial_order))
            .map(|(rs, ws)| {
                let mut acc = vec![Complex64::new(0.0, 0.0); size * size];
                let mut powers = vec![Complex64::new(0.0, 0.0); size];
                for (&r, &wr) in rs.iter().zip(ws) {
                    for t in 0..global.angular {
                        let z = Complex64::from_polar(r, dtheta * t as f64);
                        let keep = cut(z);
                        if keep == 0.0 {
                            continue;
                        }
                        let omega = wr * r * dtheta * Self::weight(cfg, z, None) * keep;
                        Self::accumulate(&mut acc, size, z, omega, &mut powers);
                    }
                }
                acc
            })
            .collect();

        let patch_sums: Vec<Vec<Complex64>> = patches
            .par_iter()
            .map(|p| {
                let lv = self.level(cfg, size, doubling, Some((2.0 * cfg.c[p.index] + 1.0, p.radius)));
                let dphi = 2.0 * PI / lv.patch_angular as f64;
                let mut acc = vec![Complex64::new(0.0, 0.0); size * size];
                let mut powers = vec![Complex64::new(0.0, 0.0); size];
                // the radial rule carries ρ^{2c+1}
                for (&rho, &wr) in lv.patch_inner.nodes.iter().zip(&lv.patch_inner.weights) {
                    for t in 0..lv.patch_angular {
                        let z = p.centre + Complex64::from_polar(rho, dphi * t as f64);
                        let omega = wr * dphi * Self::weight(cfg, z, Some(p.index)) * p.bump(z);
                        if omega != 0.0 {
                            Self::accumulate(&mut acc, size, z, omega, &mut powers);
                        }
                    }
                }
                acc
            })
            .collect();

        let mut m = MomentMatrix::zeros(size, "quad");
        for j in 0..size {
            for k in 0..=j {
                let mut s = DdComplex::ZERO;
                for part in panel_sums.iter().chain(&patch_sums) {
                    s += DdComplex::from_c64(part[j * size + k]);
                }
                m.set(j, k, s);
                m.set(k, j, s.conj());
            }
        }
        m
    }

    /// Moments together with the mesh-doubling error estimate.
    pub fn compute_with_estimate(&self, cfg: &Configuration, size: usize) -> Result<(MomentMatrix, f64), OracleError> {
        let mut coarse = self.integrate(cfg, size, 0);
        let mut estimate = f64::INFINITY;
        for d in 1..=self.max_doublings {
            let fine = self.integrate(cfg, size, d);
            estimate = fine.max_relative_difference(&coarse);
            if estimate <= self.tol {
                return Ok((fine, estimate));
            }
            coarse = fine;
        }
        Err(OracleError::QuadratureNotConverged { estimate })
    }
}

impl MomentMethod for QuadratureMoments {
    fn name(&self) -> &'static str {
        "quad"
    }

    fn compute(&self, cfg: &Configuration, size: usize) -> Result<MomentMatrix, OracleError> {
        self.compute_with_estimate(cfg, size).map(|(m, _)| m)
    }
}
