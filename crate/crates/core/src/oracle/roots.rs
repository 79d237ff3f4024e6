//! Aberth–Ehrlich simultaneous root iteration.

use crate::dd::DdComplex;
use crate::error::OracleError;
use num_complex::Complex64;
use serde::Serialize;

pub const MAX_SWEEPS: usize = 500;
const ACCEPT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootReport {
    pub z: Complex64,
    /// Backward error `|p(z)| / Σ |b_k| |z|^k`.
    pub residual: f64,
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn horner_dd(c: &[DdComplex], z: Complex64) -> DdComplex {
    let zd = DdComplex::from_c64(z);
    c.iter().rev().fold(DdComplex::ZERO, |acc, &ck| acc * zd + ck)
}

/// All roots of `Σ c_k z^k` (constant term first, nonzero leading term).
pub fn aberth_roots(coeffs: &[DdComplex]) -> Result<Vec<RootReport>, OracleError> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let monic: Vec<DdComplex> = coeffs.iter().map(|&c| c / lead).collect();
    let c: Vec<Complex64> = monic.iter().map(|v| v.to_c64()).collect();
    let abs: Vec<f64> = c.iter().map(|v| v.norm()).collect();

    let r0 = if abs[0] > 0.0 { abs[0].powf(1.0 / n as f64) } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && done.iter().any(|d| !d) {
        sweeps += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }

    let mut out = Vec::with_capacity(n);
    for zi in z {
        let mut zi = zi;
        // Newton polish with a double-double residual
        for _ in 0..3 {
            let p = horner_dd(&monic, zi).to_c64();
            let (_, dp) = horner(&c, zi);
            if p.norm() == 0.0 || dp.norm() == 0.0 {
                break;
            }
            let cand = zi - p / dp;
            if horner_dd(&monic, cand).norm() < p.norm() {
                zi = cand;
            } else {
                break;
            }
        }
        let p = horner_dd(&monic, zi).norm();
        let (_, dp) = horner(&c, zi);
        let scale: f64 = abs.iter().rev().fold(0.0, |acc, &a| acc * zi.norm() + a);
        let step = if dp.norm() > 0.0 {
            p / (dp.norm() * zi.norm().max(1.0))
        } else {
            f64::INFINITY
        };
        if !(step <= ACCEPT || p <= ACCEPT) {
            return Err(OracleError::NoConvergence { sweeps });
        }
        out.push(RootReport {
            z: zi,
            residual: if scale > 0.0 { p / scale } else { 0.0 },
        });
    }
    out.sort_by(|p, q| p.z.re.total_cmp(&q.z.re).then(p.z.im.total_cmp(&q.z.im)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(f64, f64)]) -> Vec<DdComplex> {
        c.iter().map(|&(re, im)| DdComplex::from_c64(Complex64::new(re, im))).collect()
    }

    #[test]
    fn square_roots_of_one() {
        let r = aberth_roots(&poly(&[(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!((r[0].z - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1].z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn triple_root_at_origin() {
        let r = aberth_roots(&poly(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])).unwrap();
        assert_eq!(r.len(), 3);
        for root in r {
            assert!(root.z.norm() < 1e-4);
        }
    }

    #[test]
    fn vieta_reconstruction() {
        let roots = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.7, 0.2),
            Complex64::new(0.1, -0.9),
            Complex64::new(0.5, 0.5),
        ];
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &v) in c.iter().enumerate() {
                next[k + 1] += v;
                next[k] -= v * r;
            }
            c = next;
        }
        let found = aberth_roots(&c.iter().map(|&v| DdComplex::from_c64(v)).collect::<Vec<_>>()).unwrap();
        for r in roots {
            assert!(found.iter().any(|f| (f.z - r).norm() < 1e-12));
        }
    }
}
