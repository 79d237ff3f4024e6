//! Strong asymptotics of `p_n`: regional formulas, their uniform sum near
//! the curve, and the local formula around each singular point.
//!
//! The three evaluators implement [`AsymptoticFormula`] and are selected by
//! name through a [`FormulaRegistry`].

use crate::branches::{BranchContext, SIDE_OFFSET};
use crate::config::Configuration;
use crate::error::{BranchError, Error};
use crate::specfun::FcEvaluator;
use crate::szego::SzegoStructure;
use num_complex::Complex64;
use statrs::function::gamma::gamma;

pub const DEFAULT_TAU: f64 = 40.0;
/// Radius of the local disk as a fraction of the clearance of `a_j`.
pub const LOCAL_DISK_FRACTION: f64 = 0.3;

#[derive(Debug, Clone)]
pub struct AsymptoticModel {
    pub config: Configuration,
    pub structure: SzegoStructure,
    pub branch: BranchContext,
    fc: Vec<FcEvaluator>,
    chain_const: Vec<Complex64>,
}

impl AsymptoticModel {
    pub fn build(cfg: &Configuration) -> Result<Self, Error> {
        Self::with_branch(cfg, BranchContext::new(cfg))
    }

    /// Model using a caller-supplied branch system (e.g. with shifted sheets).
    pub fn with_branch(cfg: &Configuration, branch: BranchContext) -> Result<Self, Error> {
        let structure = SzegoStructure::solve_generic(cfg)?;
        let mut model = AsymptoticModel {
            config: cfg.clone(),
            structure,
            branch,
            fc: cfg.c.iter().map(|&c| FcEvaluator::new(c)).collect(),
            chain_const: Vec::new(),
        };
        let mut consts = vec![None; cfg.nu()];
        for j in 1..=cfg.nu() {
            model.chain_rec(j, &mut consts)?;
        }
        model.chain_const = consts.into_iter().map(|c| c.expect("filled")).collect();
        Ok(model)
    }

    fn chain_rec(&self, j: usize, memo: &mut [Option<Complex64>]) -> Result<Complex64, Error> {
        if let Some(v) = memo[j - 1] {
            return Ok(v);
        }
        let b = &self.branch;
        let big_n = self.config.big_n;
        let cj = b.c(j);
        let aj = b.a(j);
        let k = self.structure.arrow(j);
        let v = if k == 0 {
            // a_j^{1 + Σ_{i≠j} c_i} on the sheets fixed by z^{Σc}
            let mut lead = aj;
            for i in 1..=self.nu() {
                if i != j {
                    lead *= b.pow_z(aj, i)?;
                }
            }
            lead * (big_n * (1.0 - aj.norm_sqr())).powf(cj - 1.0) / gamma(cj)
        } else {
            let ak = b.a(k);
            let prev = self.chain_rec(k, memo)?;
            prev * big_n.powf(cj - 1.0) * b.eta_tilde(k, j)? * b.pow_a(aj, k)? * (ak - aj).norm().powf(2.0 * (cj - 1.0))
                / (gamma(cj) * b.pow_a(ak, j)?)
        };
        memo[j - 1] = Some(v);
        Ok(v)
    }

    pub fn nu(&self) -> usize {
        self.config.nu()
    }

    pub fn chain_constant(&self, j: usize) -> Complex64 {
        self.chain_const[j - 1]
    }

    /// `E_j(z) = exp(N(ā_j z + ℓ_j))` in logarithmic form.
    fn log_e(&self, z: Complex64, j: usize) -> Complex64 {
        self.config.big_n * (self.branch.a(j).conj() * z + self.structure.ell[j - 1])
    }

    pub fn e_factor(&self, z: Complex64, j: usize) -> Complex64 {
        self.log_e(z, j).exp()
    }

    /// Radius of the local disk `D_{a_j}`.
    pub fn local_radius(&self, j: usize) -> f64 {
        LOCAL_DISK_FRACTION * self.structure.clearance(j)
    }

    /// Label `j` whose local disk contains `z`, if any.
    pub fn local_disk(&self, z: Complex64) -> Option<usize> {
        (1..=self.nu()).find(|&j| (z - self.branch.a(j)).norm() < self.local_radius(j))
    }

    /// `log |term_label(z)|`, which needs no branch choice.
    pub fn log_modulus(&self, z: Complex64, label: usize) -> f64 {
        let b = &self.branch;
        if label == 0 {
            let mut s = self.config.n as f64 * z.norm().ln();
            for i in 1..=self.nu() {
                s += b.c(i) * (z.norm().ln() - (z - b.a(i)).norm().ln());
            }
            s
        } else {
            let mut s = self.log_e(z, label).re + self.chain_constant(label).norm().ln() - (z - b.a(label)).norm().ln();
            for i in 1..=self.nu() {
                if i != label {
                    s -= b.c(i) * (z - b.a(i)).norm().ln();
                }
            }
            s
        }
    }

    /// The regional formula attached to `label`, evaluated at `z` whether or not `z` lies in that region.
    ///
    /// Label 0: `z^{n+Σc} / W(z)`.
    /// Label `j`: `−E_j(z) (z − a_j)^{c_j} chain(j) / ((z − a_j) W_j(z))`.
    pub fn term(&self, z: Complex64, label: usize) -> Result<Complex64, BranchError> {
        let b = &self.branch;
        if label == 0 {
            let mut v = z.powu(self.config.n as u32);
            for i in 1..=self.nu() {
                v *= b.z_over_a(z, i)?;
            }
            Ok(v)
        } else {
            let mut den = z - b.a(label);
            for i in 1..=self.nu() {
                if i != label {
                    den *= b.pow_a_bk(z, i, label)?;
                }
            }
            Ok(-self.e_factor(z, label) * self.chain_constant(label) / den)
        }
    }

    /// `term`, or the mean of its one-sided limits when `z` lies on one of its cuts.
    pub fn term_two_sided(&self, z: Complex64, label: usize) -> Result<Complex64, BranchError> {
        match self.term(z, label) {
            Err(BranchError::OnCut { cut }) => {
                let h = SIDE_OFFSET * z.norm().max(1.0);
                for dir in [Complex64::new(0.0, h), Complex64::new(h, 0.0)] {
                    if let (Ok(p), Ok(q)) = (self.term(z + dir, label), self.term(z - dir, label)) {
                        return Ok(0.5 * (p + q));
                    }
                }
                Err(BranchError::OnCut { cut })
            }
            other => other,
        }
    }

    pub fn classify(&self, z: Complex64) -> usize {
        self.structure.classify(z)
    }

    pub fn eval_region(&self, z: Complex64) -> Result<Complex64, Error> {
        Ok(self.term(z, self.classify(z))?)
    }

    /// Sum of every regional term within `e^{−τ}` of the largest one.
    pub fn eval_uniform(&self, z: Complex64, tau: f64) -> Result<Complex64, Error> {
        let logs: Vec<f64> = (0..=self.nu()).map(|l| self.log_modulus(z, l)).collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = Complex64::new(0.0, 0.0);
        for (label, &lm) in logs.iter().enumerate() {
            if lm >= max - tau {
                sum += self.term_two_sided(z, label)?;
            }
        }
        Ok(sum)
    }

    /// `ζ_j(z) / (z − a_j)`, which is analytic and nonzero on `D_{a_j}`.
    pub fn zeta_slope(&self, z: Complex64, j: usize) -> Complex64 {
        let aj = self.branch.a(j);
        let big_n = self.config.big_n;
        match self.structure.arrow(j) {
            0 => {
                let w = (z - aj) / aj;
                -big_n * (aj.norm_sqr() - log1p_over(w)) / aj
            }
            k => -big_n * (aj.conj() - self.branch.a(k).conj()),
        }
    }

    /// The local zooming coordinate around `a_j`.
    pub fn zeta_map(&self, z: Complex64, j: usize) -> Complex64 {
        self.zeta_slope(z, j) * (z - self.branch.a(j))
    }

    /// Solves `zeta_map(z, j) = zeta` by Newton's method from the linearisation at `a_j`.
    pub fn zeta_inverse(&self, zeta: Complex64, j: usize) -> Option<Complex64> {
        let aj = self.branch.a(j);
        let mut z = aj + zeta / self.zeta_slope(aj, j);
        for _ in 0..60 {
            let h = 1e-7 * (1.0 + z.norm());
            let f = self.zeta_map(z, j) - zeta;
            let d = (self.zeta_map(z + h, j) - self.zeta_map(z - h, j)) / (2.0 * h);
            let step = f / d;
            z -= step;
            if !z.is_finite() {
                return None;
            }
            if step.norm() <= 1e-14 * (1.0 + z.norm()) {
                break;
            }
        }
        ((self.zeta_map(z, j) - zeta).norm() <= 1e-9 * (1.0 + zeta.norm())).then_some(z)
    }

    /// `A_k` with the factor that is singular at `a_j` removed, where `j → k`.
    fn regular_part(&self, z: Complex64, j: usize) -> Result<Complex64, BranchError> {
        let b = &self.branch;
        match self.structure.arrow(j) {
            0 => {
                let mut v = z.powu(self.config.n as u32);
                for i in (1..=self.nu()).filter(|&i| i != j) {
                    v *= b.z_over_a(z, i)?;
                }
                Ok(v)
            }
            k => {
                let mut den = z - b.a(k);
                for i in (1..=self.nu()).filter(|&i| i != k && i != j) {
                    den *= b.pow_a_bk(z, i, k)?;
                }
                Ok(-self.e_factor(z, k) * self.chain_constant(k) / den)
            }
        }
    }

    /// The factor of `A_k` removed by `regular_part`, times `ζ^{c_j}`, has the form
    /// `phase · q(z)^{c_j}` with `q` nonvanishing on the disk.
    fn local_q(&self, z: Complex64, j: usize) -> Complex64 {
        match self.structure.arrow(j) {
            0 => z * self.zeta_slope(z, j),
            _ => self.zeta_slope(z, j),
        }
    }

    fn local_phase(&self, j: usize) -> Result<Complex64, BranchError> {
        let b = &self.branch;
        let aj = b.a(j);
        let k = self.structure.arrow(j);
        let cut = if k == 0 { -aj / aj.norm() } else { b.bk_dir(j, k) };
        let z = aj + 0.5 * self.local_radius(j) * Complex64::i() * cut;
        let cj = b.c(j);
        let singular = if k == 0 { b.z_over_a(z, j)? } else { b.pow_a_bk(z, j, k)?.inv() };
        let zc = (cj * self.zeta_map(z, j).ln()).exp();
        let qc = (cj * self.local_q(z, j).ln()).exp();
        Ok(singular * zc / qc)
    }

    /// `A_k(z) ζ^{c_j} e^{−ζ} E_{c_j}(ζ)` with `j → k`, evaluated so that it
    /// stays regular at `a_j` and across the cut through it.
    pub fn eval_local(&self, z: Complex64, j: usize) -> Result<Complex64, Error> {
        let cj = self.branch.c(j);
        let zeta = self.zeta_map(z, j);
        let ec = self.fc[j - 1].e(zeta);
        if ec.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let log = cj * self.local_q(z, j).ln() - zeta + ec.ln();
        Ok(self.regular_part(z, j)? * self.local_phase(j)? * log.exp())
    }

    /// Local formula around the nearest singular point.
    pub fn eval_local_nearest(&self, z: Complex64) -> Result<Complex64, Error> {
        let j = (1..=self.nu())
            .min_by(|&p, &q| (z - self.branch.a(p)).norm().total_cmp(&(z - self.branch.a(q)).norm()))
            .expect("at least one point");
        self.eval_local(z, j)
    }
}

/// `Log(1 + w) / w`, accurate near `w = 0`.
fn log1p_over(w: Complex64) -> Complex64 {
    if w.norm() < 1e-2 {
        let mut sum = Complex64::new(0.0, 0.0);
        for m in (0..12).rev() {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum = sum * w + sign / (m as f64 + 1.0);
        }
        sum
    } else {
        (Complex64::new(1.0, 0.0) + w).ln() / w
    }
}

pub trait AsymptoticFormula: Send + Sync {
    fn name(&self) -> &'static str;
    fn eval(&self, model: &AsymptoticModel, z: Complex64) -> Result<Complex64, Error>;
}

pub struct RegionFormula;

impl AsymptoticFormula for RegionFormula {
    fn name(&self) -> &'static str {
        "region"
    }
    /// The regional term, averaged over both sides when `z` lies on a cut.
    fn eval(&self, model: &AsymptoticModel, z: Complex64) -> Result<Complex64, Error> {
        Ok(model.term_two_sided(z, model.classify(z))?)
    }
}

pub struct UniformFormula {
    pub tau: f64,
}

impl AsymptoticFormula for UniformFormula {
    fn name(&self) -> &'static str {
        "uniform"
    }
    fn eval(&self, model: &AsymptoticModel, z: Complex64) -> Result<Complex64, Error> {
        model.eval_uniform(z, self.tau)
    }
}

pub struct LocalFormula;

impl AsymptoticFormula for LocalFormula {
    fn name(&self) -> &'static str {
        "local"
    }
    fn eval(&self, model: &AsymptoticModel, z: Complex64) -> Result<Complex64, Error> {
        model.eval_local_nearest(z)
    }
}

pub struct FormulaRegistry {
    formulas: Vec<Box<dyn AsymptoticFormula>>,
}

impl FormulaRegistry {
    pub fn with_tau(tau: f64) -> Self {
        let mut r = FormulaRegistry { formulas: Vec::new() };
        r.register(Box::new(RegionFormula));
        r.register(Box::new(UniformFormula { tau }));
        r.register(Box::new(LocalFormula));
        r
    }

    /// Adds a formula, replacing any previous one with the same name.
    pub fn register(&mut self, f: Box<dyn AsymptoticFormula>) {
        self.formulas.retain(|g| g.name() != f.name());
        self.formulas.push(f);
    }

    pub fn get(&self, name: &str) -> Result<&dyn AsymptoticFormula, Error> {
        self.formulas
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::UnknownFormula(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.formulas.iter().map(|f| f.name()).collect()
    }
}

impl Default for FormulaRegistry {
    fn default() -> Self {
        Self::with_tau(DEFAULT_TAU)
    }
}
