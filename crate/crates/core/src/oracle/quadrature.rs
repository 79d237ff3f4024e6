//! Gauss rules from the Golub–Welsch eigenproblem.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

/// Nodes and weights of a Gauss rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Jacobi rule on `[-1, 1]` for the weight `(1 − x)^α (1 + x)^β`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Rule {
    assert!(n >= 1 && alpha > -1.0 && beta > -1.0);
    let ab = alpha + beta;
    let mut t = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        t[(k, k)] = diag;
        if k + 1 < n {
            let m = kf + 1.0;
            let off = if k == 0 {
                (4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
            } else {
                let s = 2.0 * m + ab;
                (4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
            };
            t[(k, k + 1)] = off;
            t[(k + 1, k)] = off;
        }
    }
    let mu0 = ((ab + 1.0) * 2f64.ln() + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(ab + 2.0)).exp();
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

pub fn gauss_legendre(n: usize) -> Rule {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Rule for `∫_0^h x^γ g(x) dx` with `γ > −1`.
pub fn radial_power_rule(n: usize, gamma: f64, h: f64) -> Rule {
    let base = gauss_jacobi(n, 0.0, gamma);
    // x = h (1 + t) / 2, x^γ dx = (h/2)^{γ+1} (1+t)^γ dt
    let scale = (0.5 * h).powf(gamma + 1.0);
    Rule {
        nodes: base.nodes.iter().map(|t| 0.5 * h * (1.0 + t)).collect(),
        weights: base.weights.iter().map(|w| w * scale).collect(),
    }
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels.
pub fn composite_legendre(a: f64, b: f64, panels: usize, order: usize) -> Rule {
    let base = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (t, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(lo + 0.5 * h * (1.0 + t));
            weights.push(0.5 * h * w);
        }
    }
    Rule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(8);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn power_rule_matches_beta_integral() {
        // ∫_0^1 x^{-0.3} x^3 dx = 1/3.7
        let r = radial_power_rule(10, -0.3, 1.0);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(3)).sum();
        assert!((s - 1.0 / 3.7).abs() < 1e-14);
    }
}
