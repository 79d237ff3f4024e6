//! Brute-force orthogonal polynomials from the moment (Gram) matrix.

pub mod moments;
pub mod quadrature;
mod roots;

pub use moments::{ExactMoments, MomentMethod, MomentRegistry, QuadratureMoments};
pub use roots::{aberth_roots, RootReport};

use crate::dd::{Dd, DdComplex};
use crate::error::OracleError;
use crate::szego::CurveSet;
use num_complex::Complex64;
use serde::Serialize;

const PI_DD: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};
const MAX_CONDITION: f64 = 1e28;

/// `∫ z^p z̄^q e^{−N|z|²} dA = δ_{pq} π p! / N^{p+1}`.
pub fn gaussian_moment(p: usize, q: usize, big_n: f64) -> f64 {
    if p != q {
        return 0.0;
    }
    gaussian_moment_dd(p + 1, big_n)[p].to_f64()
}

/// `π m! / N^{m+1}` for `m < count`, in double-double.
pub fn gaussian_moment_dd(count: usize, big_n: f64) -> Vec<Dd> {
    let n = Dd::from_f64(big_n);
    let mut g = Vec::with_capacity(count);
    let mut cur = PI_DD / n;
    for m in 0..count {
        if m > 0 {
            cur = cur.mul_f64(m as f64) / n;
        }
        g.push(cur);
    }
    g
}

/// Square Hermitian matrix of moments, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    size: usize,
    entries: Vec<DdComplex>,
    pub method: &'static str,
}

impl MomentMatrix {
    pub fn zeros(size: usize, method: &'static str) -> Self {
        MomentMatrix {
            size,
            entries: vec![DdComplex::ZERO; size * size],
            method,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, j: usize, k: usize) -> DdComplex {
        self.entries[j * self.size + k]
    }

    pub fn set(&mut self, j: usize, k: usize, v: DdComplex) {
        self.entries[j * self.size + k] = v;
    }

    /// `max |A_jk − B_jk| / sqrt(A_jj A_kk)` over the common block.
    pub fn max_relative_difference(&self, other: &MomentMatrix) -> f64 {
        let s = self.size.min(other.size);
        let mut worst: f64 = 0.0;
        for j in 0..s {
            for k in 0..s {
                let scale = (self.get(j, j).re.to_f64() * self.get(k, k).re.to_f64()).sqrt();
                let d = (self.get(j, k) - other.get(j, k)).norm();
                worst = worst.max(d / scale);
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.size).all(|j| (0..self.size).all(|k| self.get(j, k) == self.get(k, j).conj()))
    }

    /// Row-major `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.size)
            .map(|j| {
                (0..self.size)
                    .map(|k| {
                        let z = self.get(j, k).to_c64();
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    /// Cholesky factor of the diagonally scaled leading `m × m` block.
    fn scaled_cholesky(&self, m: usize) -> Result<(Vec<Dd>, Vec<DdComplex>, f64), OracleError> {
        let d: Vec<Dd> = (0..m).map(|i| self.get(i, i).re.sqrt().recip()).collect();
        let mut l = vec![DdComplex::ZERO; m * m];
        let mut diag_min = f64::INFINITY;
        let mut diag_max: f64 = 0.0;
        for i in 0..m {
            for j in 0..=i {
                let mut s = self.get(i, j).scale(d[i] * d[j]);
                for k in 0..j {
                    s = s - l[i * m + k] * l[j * m + k].conj();
                }
                if i == j {
                    let p = s.re;
                    if p.hi <= 0.0 {
                        return Err(OracleError::IllConditioned { condition: f64::INFINITY });
                    }
                    let r = p.sqrt();
                    diag_min = diag_min.min(r.to_f64());
                    diag_max = diag_max.max(r.to_f64());
                    l[i * m + i] = DdComplex::new(r, Dd::ZERO);
                } else {
                    l[i * m + j] = s.scale(l[j * m + j].re.recip());
                }
            }
        }
        let condition = if m == 0 { 1.0 } else { (diag_max / diag_min).powi(2) };
        Ok((d, l, condition))
    }

    /// Whether the leading `m × m` block admits a Cholesky factorisation.
    pub fn is_positive_definite(&self, m: usize) -> bool {
        self.scaled_cholesky(m).is_ok()
    }
}

/// Monic `p_n(z) = z^n + Σ_{k<n} b_k z^k` with `h_n = ∫ |p_n|² dμ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonicPolynomial {
    pub degree: usize,
    /// `b_0, …, b_{n−1}, 1`.
    #[serde(skip)]
    pub coeffs: Vec<DdComplex>,
    pub h_n: f64,
    /// Lower bound for the condition number of the scaled Gram block.
    pub condition: f64,
}

/// Solves `Σ_{k<n} b_k M[k][m] = −M[n][m]` for `m < n` in double-double.
pub fn monic_op(moments: &MomentMatrix, n: usize) -> Result<MonicPolynomial, OracleError> {
    if n >= moments.size() {
        return Err(OracleError::DegreeOutOfRange {
            size: moments.size(),
            degree: n,
        });
    }
    let (d, l, condition) = moments.scaled_cholesky(n)?;
    if condition > MAX_CONDITION {
        return Err(OracleError::IllConditioned { condition });
    }
    // M_sub conj(b) = −M[·][n], solved as (D M D)(D^{-1} conj b) = −D M[·][n]
    let mut y = vec![DdComplex::ZERO; n];
    for i in 0..n {
        let mut s = -moments.get(i, n).scale(d[i]);
        for k in 0..i {
            s = s - l[i * n + k] * y[k];
        }
        y[i] = s.scale(l[i * n + i].re.recip());
    }
    let mut x = vec![DdComplex::ZERO; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s = s - l[k * n + i].conj() * x[k];
        }
        x[i] = s.scale(l[i * n + i].re.recip());
    }
    let mut coeffs: Vec<DdComplex> = x.iter().zip(&d).map(|(xi, di)| xi.scale(*di).conj()).collect();
    coeffs.push(DdComplex::ONE);
    let mut h = moments.get(n, n);
    for (k, b) in coeffs.iter().take(n).enumerate() {
        h += *b * moments.get(k, n);
    }
    Ok(MonicPolynomial {
        degree: n,
        coeffs,
        h_n: h.re.to_f64(),
        condition,
    })
}

impl MonicPolynomial {
    pub fn coeffs_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.to_c64()).collect()
    }

    pub fn eval_dd(&self, z: Complex64) -> DdComplex {
        let zd = DdComplex::from_c64(z);
        self.coeffs.iter().rev().fold(DdComplex::ZERO, |acc, &c| acc * zd + c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_dd(z).to_c64()
    }

    /// `⟨p_n, z^m⟩ = Σ_k b_k M[k][m]` for every `m < n`, in double-double.
    pub fn inner_products(&self, moments: &MomentMatrix) -> Vec<Complex64> {
        (0..self.degree)
            .map(|m| {
                let mut s = DdComplex::ZERO;
                for (k, &b) in self.coeffs.iter().enumerate() {
                    s += b * moments.get(k, m);
                }
                s.to_c64()
            })
            .collect()
    }

    /// `max_m |⟨p_n, z^m⟩| / h_n`.
    pub fn orthogonality_residual(&self, moments: &MomentMatrix) -> f64 {
        self.inner_products(moments).iter().map(|v| v.norm() / self.h_n).fold(0.0, f64::max)
    }

    /// `max_m |⟨p_n, z^m⟩| / sqrt(h_n M[m][m])`, the cosine between `p_n` and `z^m`.
    pub fn orthogonality_cosine(&self, moments: &MomentMatrix) -> f64 {
        self.inner_products(moments)
            .iter()
            .enumerate()
            .map(|(m, v)| v.norm() / (self.h_n * moments.get(m, m).re.to_f64()).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn roots(&self) -> Result<Vec<RootReport>, OracleError> {
        aberth_roots(&self.coeffs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceSummary {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

/// Distance from each root outside the exclusion disks to the traced curve.
pub fn root_curve_distance(roots: &[Complex64], curve: &CurveSet, centres: &[Complex64], exclusion: f64) -> Option<DistanceSummary> {
    let disks: Vec<(Complex64, f64)> = centres.iter().map(|&a| (a, exclusion)).collect();
    root_curve_distance_disks(roots, curve, &disks)
}

/// [`root_curve_distance`] with its own radius for every `(centre, radius)` disk.
pub fn root_curve_distance_disks(roots: &[Complex64], curve: &CurveSet, disks: &[(Complex64, f64)]) -> Option<DistanceSummary> {
    let kept: Vec<f64> = roots
        .iter()
        .filter(|z| disks.iter().all(|&(a, r)| (*z - a).norm() > r))
        .map(|&z| curve.distance(z))
        .collect();
    if kept.is_empty() {
        return None;
    }
    Some(DistanceSummary {
        max: kept.iter().copied().fold(0.0, f64::max),
        mean: kept.iter().sum::<f64>() / kept.len() as f64,
        count: kept.len(),
    })
}
