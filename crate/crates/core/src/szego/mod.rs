//! Levels, region classification, chains and the complex constants `ℓ_j`.
//!
//! Labels are 1-based for the singular points (`1..=ν`) and `0` stands for
//! the origin / outer region, matching the usual indexing of `Ω_0 … Ω_ν`.

mod trace;

pub use trace::{segment_distance, trace_curve, Arc, CurveSet, TriplePoint};

use crate::config::Configuration;
use crate::error::SzegoError;
use num_complex::Complex64;
use serde::Serialize;

pub const TIE_TOL: f64 = 1e-12;
pub const BOUNDARY_TOL: f64 = 1e-9;
const GENERIC_RADIUS: f64 = 1e-4;
const GENERIC_SAMPLES: usize = 64;

/// Value of the competing function with the given label.
#[inline]
pub fn phi_label(z: Complex64, a: &[Complex64], lambda: &[f64], label: usize) -> f64 {
    if label == 0 {
        z.norm().ln()
    } else {
        (a[label - 1].conj() * z).re + lambda[label - 1]
    }
}

/// `Φ^Λ(z)` together with every label attaining the maximum within the tie tolerance.
pub fn phi_l(z: Complex64, a: &[Complex64], lambda: &[f64]) -> (f64, Vec<usize>) {
    phi_l_with_tol(z, a, lambda, TIE_TOL)
}

pub fn phi_l_with_tol(z: Complex64, a: &[Complex64], lambda: &[f64], tol: f64) -> (f64, Vec<usize>) {
    let vals: Vec<f64> = (0..=a.len()).map(|l| phi_label(z, a, lambda, l)).collect();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = tol * (max.abs() + 1.0);
    let labels = (0..=a.len()).filter(|&l| vals[l] >= max - slack).collect();
    (max, labels)
}

/// One pass of the level iteration: `λ̃_j = Φ^Λ(a_j) − |a_j|²`.
pub fn level_step(a: &[Complex64], lambda: &[f64]) -> Vec<f64> {
    a.iter().map(|&aj| phi_l(aj, a, lambda).0 - aj.norm_sqr()).collect()
}

/// Runs the level iteration exactly `ν` times and returns every iterate,
/// starting with the initial `λ_j = log|a_j| − |a_j|²`.
pub fn level_iterates(a: &[Complex64]) -> Vec<Vec<f64>> {
    let mut lambda: Vec<f64> = a.iter().map(|z| z.norm().ln() - z.norm_sqr()).collect();
    let mut out = vec![lambda.clone()];
    for _ in 0..a.len() {
        lambda = level_step(a, &lambda);
        out.push(lambda.clone());
    }
    out
}

pub fn solve_levels(a: &[Complex64]) -> Vec<f64> {
    level_iterates(a).pop().expect("at least the initial iterate")
}

/// Argmax label of `Φ^L` at `z`; ties go to the smallest label and the
/// closed exterior of the unit disk is always `0`.
pub fn classify_with(z: Complex64, a: &[Complex64], l: &[f64]) -> usize {
    if z.norm() >= 1.0 {
        return 0;
    }
    let mut best = 0;
    let mut best_val = phi_label(z, a, l, 0);
    for label in 1..=a.len() {
        let v = phi_label(z, a, l, label);
        if v > best_val {
            best = label;
            best_val = v;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    /// Labels tying at `a_j` within the boundary tolerance.
    pub boundary_labels: Vec<usize>,
    /// Labels seen on a small circle around `a_j`.
    pub neighbour_labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SzegoStructure {
    pub a: Vec<Complex64>,
    pub l: Vec<f64>,
    pub genericity: Vec<GenericityReport>,
    /// `arrows[j-1] = k` records `j → k`; empty when the configuration is not generic.
    pub arrows: Vec<usize>,
    /// For each `j`, the labels `(j, …, k_1)` visited before reaching 0.
    pub chains: Vec<Vec<usize>>,
    pub levels: Vec<usize>,
    pub ell: Vec<Complex64>,
}

impl SzegoStructure {
    /// Solves the levels and, when every point is generic, the chains and `ℓ`.
    pub fn solve(cfg: &Configuration) -> Self {
        let a = cfg.a.clone();
        let l = solve_levels(&a);
        let genericity: Vec<GenericityReport> = (1..=a.len()).map(|j| genericity_at(&a, &l, j)).collect();
        let mut s = SzegoStructure {
            a,
            l,
            genericity,
            arrows: Vec::new(),
            chains: Vec::new(),
            levels: Vec::new(),
            ell: Vec::new(),
        };
        if let Ok((arrows, chains)) = compute_chains(&s) {
            s.levels = chains.iter().map(Vec::len).collect();
            s.ell = compute_ell(&s.a, &arrows);
            s.arrows = arrows;
            s.chains = chains;
        }
        s
    }

    /// Like [`SzegoStructure::solve`] but fails on non-generic configurations.
    pub fn solve_generic(cfg: &Configuration) -> Result<Self, SzegoError> {
        let s = SzegoStructure::solve(cfg);
        s.require_generic()?;
        Ok(s)
    }

    pub fn nu(&self) -> usize {
        self.a.len()
    }

    pub fn is_generic(&self) -> bool {
        !self.chains.is_empty()
    }

    pub fn require_generic(&self) -> Result<(), SzegoError> {
        if self.is_generic() {
            return Ok(());
        }
        compute_chains(self).map(|_| ())
    }

    pub fn a(&self, label: usize) -> Complex64 {
        self.a[label - 1]
    }

    pub fn phi(&self, z: Complex64) -> (f64, Vec<usize>) {
        phi_l(z, &self.a, &self.l)
    }

    pub fn classify(&self, z: Complex64) -> usize {
        classify_with(z, &self.a, &self.l)
    }

    /// Target of the arrow leaving `j`.
    pub fn arrow(&self, j: usize) -> usize {
        self.arrows[j - 1]
    }

    /// `log|z|` for label 0, `Re(ā_j z) + l_j` otherwise.
    pub fn phi_label(&self, z: Complex64, label: usize) -> f64 {
        phi_label(z, &self.a, &self.l, label)
    }

    /// Distance from `a_j` to the nearest other singular point, the origin or the unit circle.
    pub fn clearance(&self, j: usize) -> f64 {
        let aj = self.a(j);
        let mut d = aj.norm().min(1.0 - aj.norm());
        for (i, &ai) in self.a.iter().enumerate() {
            if i + 1 != j {
                d = d.min((ai - aj).norm());
            }
        }
        d
    }
}

fn genericity_at(a: &[Complex64], l: &[f64], j: usize) -> GenericityReport {
    let aj = a[j - 1];
    let (_, boundary_labels) = phi_l_with_tol(aj, a, l, BOUNDARY_TOL);
    let mut seen = Vec::new();
    for s in 0..GENERIC_SAMPLES {
        let t = 2.0 * std::f64::consts::PI * (s as f64 + 0.5) / GENERIC_SAMPLES as f64;
        let z = aj + Complex64::from_polar(GENERIC_RADIUS, t);
        let label = classify_with(z, a, l);
        if !seen.contains(&label) {
            seen.push(label);
        }
    }
    seen.sort_unstable();
    let generic = boundary_labels.len() == 2 && boundary_labels.contains(&j) && seen == boundary_labels;
    GenericityReport {
        generic,
        boundary_labels,
        neighbour_labels: seen,
    }
}

/// Arrows `j → k` and the chain of every point.
pub fn compute_chains(s: &SzegoStructure) -> Result<(Vec<usize>, Vec<Vec<usize>>), SzegoError> {
    let nu = s.nu();
    let mut arrows = Vec::with_capacity(nu);
    for j in 1..=nu {
        let rep = &s.genericity[j - 1];
        if !rep.generic {
            let reason = if !rep.boundary_labels.contains(&j) {
                format!("a_{j} is not on the boundary of its own region")
            } else if rep.boundary_labels.len() != 2 {
                format!("labels {:?} tie at a_{j}", rep.boundary_labels)
            } else {
                format!("labels {:?} meet near a_{j}", rep.neighbour_labels)
            };
            return Err(SzegoError::NonGeneric { index: j, reason });
        }
        let k = rep.boundary_labels.iter().copied().find(|&k| k != j).expect("two labels");
        arrows.push(k);
    }
    let mut chains = Vec::with_capacity(nu);
    for j in 1..=nu {
        let mut chain = vec![j];
        let mut cur = j;
        while arrows[cur - 1] != 0 {
            cur = arrows[cur - 1];
            if chain.contains(&cur) || chain.len() >= nu {
                return Err(SzegoError::NonGeneric {
                    index: j,
                    reason: "arrow chain does not reach the origin".into(),
                });
            }
            chain.push(cur);
        }
        chains.push(chain);
    }
    Ok((arrows, chains))
}

/// `ℓ_j` from the arrows: `ℓ_j = Log a_j − |a_j|²` when `j → 0`, otherwise
/// `ℓ_j = −|a_j|² + ā_k a_j + ℓ_k` for `j → k`.
pub fn compute_ell(a: &[Complex64], arrows: &[usize]) -> Vec<Complex64> {
    fn ell(j: usize, a: &[Complex64], arrows: &[usize], memo: &mut [Option<Complex64>]) -> Complex64 {
        if let Some(v) = memo[j - 1] {
            return v;
        }
        let aj = a[j - 1];
        let k = arrows[j - 1];
        let v = if k == 0 {
            aj.ln() - aj.norm_sqr()
        } else {
            -aj.norm_sqr() + a[k - 1].conj() * aj + ell(k, a, arrows, memo)
        };
        memo[j - 1] = Some(v);
        v
    }
    let mut memo = vec![None; a.len()];
    (1..=a.len()).map(|j| ell(j, a, arrows, &mut memo)).collect()
}
