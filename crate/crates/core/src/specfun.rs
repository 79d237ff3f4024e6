//! The incomplete-exponential functions `f_c` and `E_c`.
//!
//! `f_c(ζ) = e^ζ ζ^{−c} Q(c, ζ)` is the function that vanishes at infinity and
//! makes `E_c(ζ) = e^ζ/ζ^c − f_c(ζ)` entire; `E_c(ζ) = Σ_k ζ^k / Γ(c + k + 1)`.

use crate::config::is_integer;
use crate::dd::{Dd, DdComplex};
use crate::error::SpecFunError;
use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Below this modulus `E_c` is summed from its power series in double-double.
pub const SERIES_RADIUS: f64 = 40.0;
/// Continued fraction domain: `|arg ζ| ≤ CF_SECTOR` and `|ζ| ≥ CF_MIN_RADIUS`.
pub const CF_SECTOR: f64 = 0.75 * PI;
pub const CF_MIN_RADIUS: f64 = 2.0;
pub const ASYMPTOTIC_TERMS: usize = 30;
const CF_MAX_ITER: usize = 5000;
const AXIS_OFFSET: f64 = 1e-8;

/// `α_i(c) = sin(cπ) Γ(i − c) / (π (−1)^{i−1})`, the coefficients of
/// `f_c(ζ) ~ Σ α_i(c) ζ^{−i}`.
pub fn alpha(i: usize, c: f64) -> f64 {
    assert!(i >= 1);
    if is_integer(c) {
        let c = c as i64;
        let i = i as i64;
        if i > c {
            return 0.0;
        }
        return 1.0 / factorial((c - i) as u32);
    }
    let sign = if (i - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    (c * PI).sin() * gamma(i as f64 - c) / (PI * sign)
}

fn factorial(m: u32) -> f64 {
    (1..=m).fold(1.0, |acc, k| acc * k as f64)
}

/// Truncated asymptotic sum `Σ_{i=1}^{m} α_i(c) ζ^{−i}`.
pub fn asymptotic_sum(zeta: Complex64, c: f64, m: usize) -> Complex64 {
    let inv = zeta.inv();
    let mut p = inv;
    let mut s = Complex64::new(0.0, 0.0);
    for i in 1..=m {
        s += p * alpha(i, c);
        p *= inv;
    }
    s
}

/// Optimally truncated asymptotic series, at most [`ASYMPTOTIC_TERMS`] terms.
fn asymptotic_optimal(zeta: Complex64, c: f64) -> Complex64 {
    let inv = zeta.inv();
    let mut p = inv;
    let mut s = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for i in 1..=ASYMPTOTIC_TERMS {
        let t = p * alpha(i, c);
        let m = t.norm();
        if m > last {
            break;
        }
        s += t;
        if m <= 1e-17 * s.norm() {
            break;
        }
        last = m;
        p *= inv;
    }
    s
}

/// Exact closed form for positive integer `c`: `(Σ_{k<c} ζ^k / k!) / ζ^c`.
pub fn f_c_integer(zeta: Complex64, c: u32) -> Complex64 {
    let inv = zeta.inv();
    // Σ_{i=1}^{c} ζ^{−i} / (c − i)!
    let mut s = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for i in 1..=c {
        s += p / factorial(c - i);
        p *= inv;
    }
    s
}

/// `Γ(c) e^ζ ζ^{−c} Q(c, ζ)` by the Legendre continued fraction, modified Lentz.
fn upper_gamma_cf(zeta: Complex64, c: f64) -> Option<Complex64> {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut b = zeta + 1.0 - c;
    let mut f = if b.norm() == 0.0 { tiny } else { b };
    let mut cc = f;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..=CF_MAX_ITER {
        let an = -(n as f64) * (n as f64 - c);
        b += 2.0;
        d = b + d * an;
        if d.norm() == 0.0 {
            d = tiny;
        }
        cc = b + an / cc;
        if cc.norm() == 0.0 {
            cc = tiny;
        }
        d = d.inv();
        let delta = cc * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Some(f.inv());
        }
    }
    None
}

/// `Σ_k ζ^k / Γ(c + k + 1)` in double-double, with the value of its derivative.
pub fn e_c_series(zeta: Complex64, c: f64) -> (Complex64, Complex64) {
    let z = DdComplex::from_c64(zeta);
    let mut term = DdComplex::ONE;
    let mut sum = DdComplex::ONE;
    // u_k = ζ^{k−1} / ((c+1)…(c+k)), derivative = Σ k u_k
    let mut u = DdComplex::ONE.scale(Dd::ONE / Dd::from_f64(c + 1.0));
    let mut dsum = u;
    let mut max_term = 1.0f64;
    let r = zeta.norm();
    for k in 1..4000usize {
        term = term * z;
        term = term.scale(Dd::ONE / (Dd::from_f64(c) + Dd::from_f64(k as f64)));
        sum += term;
        if k >= 2 {
            u = u * z;
            u = u.scale(Dd::ONE / (Dd::from_f64(c) + Dd::from_f64(k as f64)));
            dsum += u.scale(Dd::from_f64(k as f64));
        }
        let m = term.norm();
        max_term = max_term.max(m);
        if k as f64 > r && m < 1e-34 * max_term.max(sum.norm()) {
            break;
        }
    }
    let g = 1.0 / gamma(c + 1.0);
    (sum.to_c64() * g, dsum.to_c64() * g)
}

fn on_negative_axis(zeta: Complex64) -> bool {
    zeta.re <= 0.0 && zeta.im.abs() <= 1e-14 * zeta.norm().max(1e-300)
}

/// Evaluator for `f_c` and `E_c` at one fixed exponent.
#[derive(Debug, Clone, Copy)]
pub struct FcEvaluator {
    pub c: f64,
    inv_gamma_c: f64,
}

impl FcEvaluator {
    pub fn new(c: f64) -> Self {
        FcEvaluator {
            c,
            inv_gamma_c: 1.0 / gamma(c),
        }
    }

    fn integer_c(&self) -> Option<u32> {
        (is_integer(self.c) && self.c >= 1.0).then_some(self.c as u32)
    }

    /// `f_c(ζ)`, exact for positive integer `c`.
    pub fn f(&self, zeta: Complex64) -> Result<Complex64, SpecFunError> {
        match self.integer_c() {
            Some(m) => {
                if zeta.norm() == 0.0 {
                    return Err(SpecFunError::OnNegativeAxis);
                }
                Ok(f_c_integer(zeta, m))
            }
            None => self.f_general(zeta),
        }
    }

    /// `f_c(ζ)` through the incomplete-gamma route regardless of `c`.
    pub fn f_general(&self, zeta: Complex64) -> Result<Complex64, SpecFunError> {
        if on_negative_axis(zeta) {
            return Err(SpecFunError::OnNegativeAxis);
        }
        let r = zeta.norm();
        if zeta.arg().abs() <= CF_SECTOR && r >= CF_MIN_RADIUS {
            if let Some(v) = upper_gamma_cf(zeta, self.c) {
                return Ok(v * self.inv_gamma_c);
            }
        }
        if r < SERIES_RADIUS {
            let (e, _) = e_c_series(zeta, self.c);
            return Ok(self.exp_over_power(zeta) - e);
        }
        Ok(asymptotic_optimal(zeta, self.c))
    }

    /// `e^ζ ζ^{−c}` with the principal power.
    pub fn exp_over_power(&self, zeta: Complex64) -> Complex64 {
        (zeta - self.c * zeta.ln()).exp()
    }

    /// The entire function `E_c(ζ) = e^ζ/ζ^c − f_c(ζ)`.
    pub fn e(&self, zeta: Complex64) -> Complex64 {
        self.e_and_derivative(zeta).0
    }

    pub fn e_and_derivative(&self, zeta: Complex64) -> (Complex64, Complex64) {
        if zeta.norm() < SERIES_RADIUS {
            return e_c_series(zeta, self.c);
        }
        let e = if on_negative_axis(zeta) {
            let up = Complex64::new(zeta.re, AXIS_OFFSET);
            let dn = Complex64::new(zeta.re, -AXIS_OFFSET);
            (self.e_off_axis(up) + self.e_off_axis(dn)) * 0.5
        } else {
            self.e_off_axis(zeta)
        };
        let d = e * (1.0 - self.c / zeta) + self.inv_gamma_c / zeta;
        (e, d)
    }

    fn e_off_axis(&self, zeta: Complex64) -> Complex64 {
        let f = self.f(zeta).expect("point is off the negative axis");
        self.exp_over_power(zeta) - f
    }

    /// One-sided values `E_c(x ± i0)` built from `e^ζ/ζ^c − f_c` on either side of the cut.
    pub fn one_sided_limits(&self, x: f64) -> Result<(Complex64, Complex64), SpecFunError> {
        let up = Complex64::new(x, AXIS_OFFSET);
        let dn = Complex64::new(x, -AXIS_OFFSET);
        Ok((
            self.exp_over_power(up) - self.f_general(up)?,
            self.exp_over_power(dn) - self.f_general(dn)?,
        ))
    }

    /// Rough size of the two competing pieces of `E_c` near `ζ`.
    pub fn local_scale(&self, zeta: Complex64) -> f64 {
        let r = zeta.norm();
        if r <= 1.0 {
            e_c_series(Complex64::new(r, 0.0), self.c).0.re
        } else {
            (zeta.re - self.c * r.ln()).exp() + self.inv_gamma_c.abs() / r
        }
    }
}

/// Convenience wrapper for [`FcEvaluator::f`].
pub fn f_c(zeta: Complex64, c: f64) -> Result<Complex64, SpecFunError> {
    FcEvaluator::new(c).f(zeta)
}

/// Convenience wrapper for [`FcEvaluator::e`].
pub fn e_c(zeta: Complex64, c: f64) -> Complex64 {
    FcEvaluator::new(c).e(zeta)
}

/// Axis-aligned rectangle `[re0, re1] × [im0, im1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl Rect {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> Self {
        Rect { re0, re1, im0, im1 }
    }

    pub fn contains(&self, z: Complex64, margin: f64) -> bool {
        z.re >= self.re0 - margin && z.re <= self.re1 + margin && z.im >= self.im0 - margin && z.im <= self.im1 + margin
    }

    fn centre(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re0 + self.re1), 0.5 * (self.im0 + self.im1))
    }

    fn size(&self) -> f64 {
        (self.re1 - self.re0).max(self.im1 - self.im0)
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re0, self.im0),
            Complex64::new(self.re1, self.im0),
            Complex64::new(self.re1, self.im1),
            Complex64::new(self.re0, self.im1),
        ]
    }

    fn grow(&self, d: f64) -> Rect {
        Rect::new(self.re0 - d, self.re1 + d, self.im0 - d, self.im1 + d)
    }
}

struct ZeroFinder {
    ev: FcEvaluator,
    tol: f64,
}

impl ZeroFinder {
    fn check(&self, z: Complex64, v: Complex64) -> Result<(), SpecFunError> {
        if v.norm() < self.tol * self.ev.local_scale(z) {
            Err(SpecFunError::ContourThroughZero { re: z.re, im: z.im })
        } else {
            Ok(())
        }
    }

    fn edge_turn(&self, p: Complex64, q: Complex64, vp: Complex64, vq: Complex64, depth: u32) -> Result<f64, SpecFunError> {
        let d = (vq / vp).arg();
        if d.abs() <= 0.5 {
            return Ok(d);
        }
        if depth == 0 {
            let m = (p + q) * 0.5;
            return Err(SpecFunError::ContourThroughZero { re: m.re, im: m.im });
        }
        let m = (p + q) * 0.5;
        let vm = self.ev.e(m);
        self.check(m, vm)?;
        Ok(self.edge_turn(p, m, vp, vm, depth - 1)? + self.edge_turn(m, q, vm, vq, depth - 1)?)
    }

    fn winding(&self, rect: &Rect) -> Result<i64, SpecFunError> {
        let cs = rect.corners();
        let mut total = 0.0;
        for e in 0..4 {
            let (p, q) = (cs[e], cs[(e + 1) % 4]);
            let steps = 32;
            let mut prev = p;
            let mut vprev = self.ev.e(p);
            self.check(p, vprev)?;
            for s in 1..=steps {
                let z = p + (q - p) * (s as f64 / steps as f64);
                let v = self.ev.e(z);
                self.check(z, v)?;
                total += self.edge_turn(prev, z, vprev, v, 40)?;
                prev = z;
                vprev = v;
            }
        }
        let w = total / (2.0 * PI);
        let rounded = w.round();
        if (w - rounded).abs() > 0.1 {
            let c = rect.centre();
            return Err(SpecFunError::ContourThroughZero { re: c.re, im: c.im });
        }
        Ok(rounded as i64)
    }

    fn newton(&self, start: Complex64) -> Option<Complex64> {
        let mut z = start;
        for _ in 0..100 {
            let (v, d) = self.ev.e_and_derivative(z);
            if v.norm() <= self.tol * self.ev.local_scale(z) {
                return Some(z);
            }
            if d.norm() == 0.0 {
                return None;
            }
            let step = v / d;
            z -= step;
            if step.norm() <= 1e-15 * z.norm().max(1.0) {
                let v = self.ev.e(z);
                return (v.norm() <= self.tol * self.ev.local_scale(z) * 1e3).then_some(z);
            }
        }
        None
    }

    fn solve(&self, rect: &Rect, count: i64, depth: u32, out: &mut Vec<Complex64>) -> Result<(), SpecFunError> {
        if count == 0 {
            return Ok(());
        }
        if count == 1 {
            if let Some(z) = self.newton(rect.centre()) {
                if rect.contains(z, 1e-12 * rect.size().max(1.0)) {
                    out.push(z);
                    return Ok(());
                }
            }
        }
        if depth == 0 {
            return Err(SpecFunError::NotConverged(format!("box {rect:?} still holds {count} zeros")));
        }
        // split slightly off-centre so split lines rarely hit a zero
        let mut found = 0;
        let mut split = 0.5 + 1.0 / 64.0;
        for _ in 0..8 {
            let xm = rect.re0 + split * (rect.re1 - rect.re0);
            let ym = rect.im0 + (1.0 - split) * (rect.im1 - rect.im0);
            let quads = [
                Rect::new(rect.re0, xm, rect.im0, ym),
                Rect::new(xm, rect.re1, rect.im0, ym),
                Rect::new(xm, rect.re1, ym, rect.im1),
                Rect::new(rect.re0, xm, ym, rect.im1),
            ];
            let counts: Result<Vec<i64>, _> = quads.iter().map(|q| self.winding(q)).collect();
            match counts {
                Ok(counts) => {
                    for (q, &n) in quads.iter().zip(&counts) {
                        self.solve(q, n, depth - 1, out)?;
                        found += n;
                    }
                    break;
                }
                Err(SpecFunError::ContourThroughZero { .. }) => split += 1.0 / 37.0,
                Err(e) => return Err(e),
            }
        }
        if found != count {
            return Err(SpecFunError::NotConverged(format!(
                "box {rect:?}: {found} of {count} zeros located"
            )));
        }
        Ok(())
    }
}

/// Zeros of `E_c` inside `rect`, located by the argument principle on a
/// subdivided box and polished by Newton's method. Fails with
/// `ContourThroughZero` when the box boundary passes within `tol` of a zero.
pub fn zeros_e_c(c: f64, rect: Rect, tol: f64) -> Result<Vec<Complex64>, SpecFunError> {
    let finder = ZeroFinder {
        ev: FcEvaluator::new(c),
        tol,
    };
    let total = finder.winding(&rect)?;
    let mut out = Vec::new();
    finder.solve(&rect, total, 24, &mut out)?;
    if out.len() as i64 != total {
        return Err(SpecFunError::NotConverged(format!(
            "{} zeros for winding number {total}",
            out.len()
        )));
    }
    out.sort_by(|p, q| p.im.total_cmp(&q.im).then(p.re.total_cmp(&q.re)));
    Ok(out)
}

/// [`zeros_e_c`], growing the box a little whenever its boundary hits a zero,
/// so zeros lying on the boundary are counted as inside.
pub fn zeros_e_c_jittered(c: f64, rect: Rect, tol: f64) -> Result<Vec<Complex64>, SpecFunError> {
    let mut r = rect;
    let mut last = None;
    for attempt in 0..4 {
        match zeros_e_c(c, r, tol) {
            Err(e @ SpecFunError::ContourThroughZero { .. }) => {
                last = Some(e);
                r = rect.grow(1e-3 * rect.size() * (attempt + 1) as f64);
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}
