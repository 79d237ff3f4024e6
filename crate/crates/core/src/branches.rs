//! Branches of the multivalued powers `(z − a_j)^{c_j}`, `z^{c_j}` and
//! `[(z − a_j)^{c_j}]_{B[k]}`, and the phase constants built from them.
//!
//! Every power is `exp(c (ln|w| + i θ))` where `θ` is an argument of `w`
//! that is continuous off one ray leaving the branch point. Crossing that
//! ray counter-clockwise (from its right side to its left side) multiplies
//! the value by `e^{−2πic}`.

use crate::config::{is_integer, Configuration};
use crate::error::BranchError;
use crate::szego::segment_distance;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const CUT_TOL: f64 = 1e-12;
pub const SIDE_OFFSET: f64 = 1e-8;

/// Argument of `w` continuous away from the ray `{t·dir : t > 0}`, with
/// values in `(arg(−dir) − π, arg(−dir) + π]`.
#[inline]
pub fn cont_arg(w: Complex64, dir: Complex64) -> f64 {
    let back = -dir;
    back.arg() + (w / back).arg()
}

/// Distance from `z` to the ray `{p + t·dir : t ≥ 0}` with `|dir| = 1`.
#[inline]
pub fn ray_distance(z: Complex64, p: Complex64, dir: Complex64) -> f64 {
    let w = (z - p) / dir;
    if w.re <= 0.0 {
        (z - p).norm()
    } else {
        w.im.abs()
    }
}

#[derive(Debug, Clone)]
pub struct BranchContext {
    a: Vec<Complex64>,
    c: Vec<f64>,
    /// Unit direction of `a_j`; `B_j` leaves `a_j` along it.
    u: Vec<Complex64>,
    /// Free sheet index for `(z − a_j)^{c_j}` and `z^{c_j}`.
    shift: Vec<i64>,
    eta: Vec<Complex64>,
    /// `bk_sheet[k-1][j-1]` aligns `[(z − a_j)^{c_j}]_{B[k]}` with `(z − a_j)^{c_j}` on `B_k ∪ B̂_k`.
    bk_sheet: Vec<Vec<i64>>,
}

impl BranchContext {
    pub fn new(cfg: &Configuration) -> Self {
        Self::with_shifts(cfg, &vec![0; cfg.nu()])
    }

    /// Same cuts with a different choice of sheet for each `(z − a_j)^{c_j}`.
    pub fn with_shifts(cfg: &Configuration, shifts: &[i64]) -> Self {
        let nu = cfg.nu();
        let u: Vec<Complex64> = cfg.a.iter().map(|z| z / z.norm()).collect();
        let eta = cfg
            .c
            .iter()
            .map(|&c| {
                if is_integer(c) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, -2.0 * PI * c)
                }
            })
            .collect();
        let mut ctx = BranchContext {
            a: cfg.a.clone(),
            c: cfg.c.clone(),
            u,
            shift: shifts.to_vec(),
            eta,
            bk_sheet: vec![vec![0; nu]; nu],
        };
        for k in 1..=nu {
            let anchor = ctx.a[k - 1] * 0.5;
            for j in 1..=nu {
                if j == k {
                    continue;
                }
                let target = ctx.arg_a(anchor, j);
                let here = cont_arg(anchor - ctx.a[j - 1], ctx.bk_dir(j, k));
                ctx.bk_sheet[k - 1][j - 1] = ((target - here) / (2.0 * PI)).round() as i64;
            }
        }
        ctx
    }

    pub fn nu(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, j: usize) -> Complex64 {
        self.a[j - 1]
    }

    pub fn c(&self, j: usize) -> f64 {
        self.c[j - 1]
    }

    /// `η_j = e^{−2πic_j}`, exactly one for integer `c_j`.
    pub fn eta(&self, j: usize) -> Complex64 {
        self.eta[j - 1]
    }

    /// Direction of the cut `B_{jk}`, pointing away from `a_k`.
    pub fn bk_dir(&self, j: usize, k: usize) -> Complex64 {
        let d = self.a(j) - self.a(k);
        d / d.norm()
    }

    fn single_valued(&self, j: usize) -> bool {
        is_integer(self.c(j))
    }

    fn power(&self, w: Complex64, theta: f64, c: f64) -> Complex64 {
        Complex64::from_polar((c * w.norm().ln()).exp(), c * theta)
    }

    fn arg_a(&self, z: Complex64, j: usize) -> f64 {
        cont_arg(z - self.a(j), self.u[j - 1]) + 2.0 * PI * self.shift[j - 1] as f64
    }

    /// `(z − a_j)^{c_j}` with cut `B_j`.
    pub fn pow_a(&self, z: Complex64, j: usize) -> Result<Complex64, BranchError> {
        let aj = self.a(j);
        if !self.single_valued(j) && ray_distance(z, aj, self.u[j - 1]) < CUT_TOL {
            return Err(BranchError::OnCut { cut: format!("B_{j}") });
        }
        Ok(self.power(z - aj, self.arg_a(z, j), self.c(j)))
    }

    /// `z^{c_j}` with its cut on the ray through `a_j`, normalised so that
    /// `(z − a_j)^{c_j} / z^{c_j} → 1` along `B_j`.
    pub fn pow_z(&self, z: Complex64, j: usize) -> Result<Complex64, BranchError> {
        let zero = Complex64::new(0.0, 0.0);
        if !self.single_valued(j) && ray_distance(z, zero, self.u[j - 1]) < CUT_TOL {
            return Err(BranchError::OnCut {
                cut: format!("ray through a_{j}"),
            });
        }
        let theta = cont_arg(z, self.u[j - 1]) + 2.0 * PI * self.shift[j - 1] as f64;
        Ok(self.power(z, theta, self.c(j)))
    }

    /// `z^{c_j} / (z − a_j)^{c_j}`, which is continuous across `B_j` and
    /// jumps only across `B̂_j`; the free sheet cancels in the quotient.
    pub fn z_over_a(&self, z: Complex64, j: usize) -> Result<Complex64, BranchError> {
        let aj = self.a(j);
        if !self.single_valued(j) && (segment_distance(z, Complex64::new(0.0, 0.0), aj) < CUT_TOL) {
            return Err(BranchError::OnCut { cut: format!("B̂_{j}") });
        }
        let q = z / (z - aj);
        Ok(self.power(q, q.arg(), self.c(j)))
    }

    /// `[(z − a_j)^{c_j}]_{B[k]}`: equal to `(z − a_j)^{c_j}` on `B_k ∪ B̂_k`,
    /// with its cut moved to `B_{jk}`.
    pub fn pow_a_bk(&self, z: Complex64, j: usize, k: usize) -> Result<Complex64, BranchError> {
        if j == k {
            return self.pow_a(z, j);
        }
        let aj = self.a(j);
        let dir = self.bk_dir(j, k);
        if !self.single_valued(j) && ray_distance(z, aj, dir) < CUT_TOL {
            return Err(BranchError::OnCut { cut: format!("B_{j}{k}") });
        }
        let theta = cont_arg(z - aj, dir) + 2.0 * PI * self.bk_sheet[k - 1][j - 1] as f64;
        Ok(self.power(z - aj, theta, self.c(j)))
    }

    /// `W(z) = ∏_j (z − a_j)^{c_j}`.
    pub fn w(&self, z: Complex64) -> Result<Complex64, BranchError> {
        (1..=self.nu()).try_fold(Complex64::new(1.0, 0.0), |acc, j| Ok(acc * self.pow_a(z, j)?))
    }

    /// `W_k(z) = ∏_j [(z − a_j)^{c_j}]_{B[k]}`.
    pub fn w_k(&self, z: Complex64, k: usize) -> Result<Complex64, BranchError> {
        (1..=self.nu()).try_fold(Complex64::new(1.0, 0.0), |acc, j| Ok(acc * self.pow_a_bk(z, j, k)?))
    }

    /// `W_k(z) / [(z − a_k)^{c_k}]`, skipping the factor that vanishes at `a_k`.
    pub fn w_k_without(&self, z: Complex64, k: usize) -> Result<Complex64, BranchError> {
        (1..=self.nu())
            .filter(|&j| j != k)
            .try_fold(Complex64::new(1.0, 0.0), |acc, j| Ok(acc * self.pow_a_bk(z, j, k)?))
    }

    /// A point on `B_{jk}` halfway out to `|z| = 2`, nudged to the left (+) side.
    pub fn bk_sample(&self, j: usize, k: usize, t_frac: f64) -> Complex64 {
        let aj = self.a(j);
        let d = self.bk_dir(j, k);
        // |a_j + t d| = 2
        let b = (aj * d.conj()).re;
        let t_max = -b + (b * b - aj.norm_sqr() + 4.0).sqrt();
        aj + d * (t_frac * t_max) + Complex64::i() * d * SIDE_OFFSET
    }

    /// `η̃_{kj}` sampled at the given fraction along `B_{jk}` (inside `|z| ≤ 2`).
    pub fn eta_tilde_at(&self, k: usize, j: usize, t_frac: f64) -> Result<Complex64, BranchError> {
        let z = self.bk_sample(j, k, t_frac);
        Ok(self.pow_a_bk(z, j, k)? / self.pow_a(z, j)? * self.w_k(z, j)? / self.w_k(z, k)?)
    }

    pub fn eta_tilde(&self, k: usize, j: usize) -> Result<Complex64, BranchError> {
        self.eta_tilde_at(k, j, 0.5)
    }

    /// `η_{kj} = W_j / W_{k,+}` on `B_{jk}`.
    pub fn eta_kj(&self, k: usize, j: usize) -> Result<Complex64, BranchError> {
        let z = self.bk_sample(j, k, 0.5);
        Ok(self.w_k(z, j)? / self.w_k(z, k)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(a: &[(f64, f64)], c: &[f64]) -> Configuration {
        Configuration::new(a.iter().map(|&(x, y)| Complex64::new(x, y)).collect(), c.to_vec(), 8, None).unwrap()
    }

    #[test]
    fn integer_power_is_plain_multiplication() {
        let ctx = BranchContext::new(&cfg(&[(0.3, 0.4), (-0.5, 0.1)], &[2.0, 3.0]));
        for z in [Complex64::new(0.9, 0.2), Complex64::new(-1.3, -0.7), Complex64::new(0.6, 0.8)] {
            let w = z - ctx.a(2);
            assert!((ctx.pow_a(z, 2).unwrap() - w * w * w).norm() < 1e-13);
            assert!((ctx.pow_a_bk(z, 2, 1).unwrap() - w * w * w).norm() < 1e-13);
            assert!((ctx.w_k(z, 1).unwrap() - ctx.w(z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn jump_across_b_is_eta() {
        let ctx = BranchContext::new(&cfg(&[(0.3, 0.4)], &[0.37]));
        let a = ctx.a(1);
        let u = a / a.norm();
        let on = a + u * 0.5;
        let plus = on + Complex64::i() * u * 1e-8;
        let minus = on - Complex64::i() * u * 1e-8;
        let ratio = ctx.pow_a(plus, 1).unwrap() / ctx.pow_a(minus, 1).unwrap();
        assert!((ratio - ctx.eta(1)).norm() < 1e-6);
        assert!(ctx.pow_a(on, 1).is_err());
    }

    #[test]
    fn modulus_is_branch_free() {
        let ctx = BranchContext::new(&cfg(&[(0.3, 0.4)], &[0.37]));
        let z = Complex64::new(-40.0, 25.0);
        let m = ctx.pow_a(z, 1).unwrap().norm();
        assert!((m - (z - ctx.a(1)).norm().powf(0.37)).abs() < 1e-12 * m);
    }

    #[test]
    fn power_of_z_normalisation_far_out() {
        let ctx = BranchContext::new(&cfg(&[(0.3, 0.4)], &[-0.6]));
        let u = ctx.a(1) / ctx.a(1).norm();
        let z = u * 50.0 + Complex64::i() * u * 1e-6;
        let r = ctx.pow_a(z, 1).unwrap() / ctx.pow_z(z, 1).unwrap();
        assert!((r - 1.0).norm() < 0.05);
    }

    #[test]
    fn bk_power_agrees_on_the_ray_through_ak() {
        let ctx = BranchContext::new(&cfg(&[(0.5, -0.5), (-0.25, -0.5)], &[0.3, -0.45]));
        for (j, k) in [(1, 2), (2, 1)] {
            for t in [0.1, 0.5, 0.9, 1.5, 3.0] {
                let z = ctx.a(k) * t;
                let p = ctx.pow_a(z, j).unwrap();
                let q = ctx.pow_a_bk(z, j, k).unwrap();
                assert!((p - q).norm() < 1e-14 * p.norm());
            }
        }
    }
}
