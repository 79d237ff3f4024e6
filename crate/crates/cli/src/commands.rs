use crate::format::{num, Csv};
use crate::manifest::RunManifest;
use crate::{svg, ConfigArg, Method, Mode};
use num_complex::Complex64;
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::time::Instant;
use szego_core::asym::{AsymptoticModel, FormulaRegistry};
use szego_core::error::{ConfigError, OracleError, SpecFunError, SzegoError};
use szego_core::oracle::{monic_op, root_curve_distance_disks, MomentMatrix, MomentMethod, MomentRegistry, MonicPolynomial};
use szego_core::specfun::{zeros_e_c_jittered, FcEvaluator, Rect};
use szego_core::szego::{trace_curve, SzegoStructure};
use szego_core::{Configuration, Error, RawConfig};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    NonGeneric(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::NonGeneric(_) => 3,
            Failure::Numerical(_) => 4,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "invalid configuration: {m}"),
            Failure::NonGeneric(m) => write!(f, "non-generic configuration: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Config(e.to_string()),
            _ if e.is_non_generic() => Failure::NonGeneric(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

macro_rules! via_core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}

via_core_error!(ConfigError, SzegoError, SpecFunError, OracleError);

type Outcome = Result<(), Failure>;

fn load(arg: &ConfigArg, degree: Option<usize>) -> Result<Configuration, Failure> {
    let text = std::fs::read_to_string(&arg.config).map_err(|e| Failure::Config(format!("cannot read {}: {e}", arg.config.display())))?;
    let mut raw = RawConfig::from_json(&text)?;
    if let Some(n) = degree {
        raw.n = n;
    }
    Ok(szego_core::validate_config(raw)?)
}

/// Writes outputs and, beside the first, the run manifest.
struct Run {
    manifest: RunManifest,
    start: Instant,
}

impl Run {
    fn new(command: &str, config: Option<&Path>) -> Self {
        Run {
            manifest: RunManifest::new(command, config),
            start: Instant::now(),
        }
    }

    fn write(&mut self, path: &Path, text: &str) -> Outcome {
        std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        self.manifest.outputs.push(path.display().to_string());
        Ok(())
    }

    fn finish(mut self) -> Outcome {
        self.manifest.wall_time_seconds = self.start.elapsed().as_secs_f64();
        let first = self.manifest.outputs.first().cloned().expect("every command writes an output");
        let path = RunManifest::path_for(Path::new(&first));
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serialises") + "\n";
        std::fs::write(&path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json serialises") + "\n"
}

pub fn validate(arg: &ConfigArg, out: &Path) -> Outcome {
    let mut run = Run::new("validate", Some(&arg.config));
    let cfg = load(arg, None)?;
    println!("valid: {} point(s), n = {}, N = {}", cfg.nu(), cfg.n, num(cfg.big_n));
    let text = serde_json::to_string_pretty(&cfg.to_raw()).expect("config serialises") + "\n";
    run.write(out, &text)?;
    run.finish()
}

pub fn levels(arg: &ConfigArg, out: &Path) -> Outcome {
    let mut run = Run::new("levels", Some(&arg.config));
    let cfg = load(arg, None)?;
    let s = SzegoStructure::solve(&cfg);
    let chain_constants = if s.is_generic() {
        let model = AsymptoticModel::build(&cfg)?;
        Some((1..=cfg.nu()).map(|j| pair(model.chain_constant(j))).collect::<Vec<_>>())
    } else {
        None
    };
    let doc = json!({
        "L": s.l,
        "ell": s.ell.iter().map(|&z| pair(z)).collect::<Vec<_>>(),
        "arrows": s.arrows,
        "chains": s.chains,
        "levels": s.levels,
        "chain_constants": chain_constants,
        "generic": s.is_generic(),
        "genericity": s.genericity,
    });
    let text = pretty(&doc);
    print!("{text}");
    run.write(out, &text)?;
    run.finish()
}

pub fn curve(arg: &ConfigArg, grid: usize, tol: f64, out: &Path, svg_out: Option<&Path>) -> Outcome {
    let mut run = Run::new("curve", Some(&arg.config));
    run.manifest.param("grid", grid);
    run.manifest.param("tol", tol);
    let cfg = load(arg, None)?;
    let s = SzegoStructure::solve(&cfg);
    let curve = trace_curve(&s, grid, tol)?;
    let mut csv = Csv::new(&["arc_id", "j", "k", "re", "im"]);
    for (id, arc) in curve.arcs.iter().enumerate() {
        for z in &arc.points {
            csv.row(&[id.to_string(), arc.j.to_string(), arc.k.to_string(), num(z.re), num(z.im)]);
        }
    }
    run.write(out, &csv.into_string())?;
    if let Some(path) = svg_out {
        run.write(path, &svg::render(&curve, &cfg.a, &[]))?;
    }
    println!("{} arc(s), {} triple point(s)", curve.arcs.len(), curve.triple_points.len());
    run.finish()
}

fn evaluate(model: &AsymptoticModel, registry: &FormulaRegistry, mode: Mode, z: Complex64) -> Result<(Complex64, &'static str), Failure> {
    let name = match mode {
        Mode::Region => "region",
        Mode::Uniform => "uniform",
        Mode::Local if model.local_disk(z).is_some() => "local",
        Mode::Local => "uniform",
    };
    Ok((registry.get(name)?.eval(model, z)?, name))
}

fn read_points(path: &Path) -> Result<Vec<Complex64>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        match (cells.first().map(|c| c.parse::<f64>()), cells.get(1).map(|c| c.parse::<f64>())) {
            (Some(Ok(re)), Some(Ok(im))) => out.push(Complex64::new(re, im)),
            _ if i == 0 => continue,
            _ => return Err(Failure::Io(format!("{}:{}: expected `re,im`", path.display(), i + 1))),
        }
    }
    Ok(out)
}

/// `count` evenly spaced values covering `[-half, half]`.
fn axis(count: usize, half: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| -half + 2.0 * half * i as f64 / (count - 1) as f64).collect(),
    }
}

fn lattice(count: usize, half: f64) -> Vec<Complex64> {
    let ax = axis(count, half);
    ax.iter().flat_map(|&im| ax.iter().map(move |&re| Complex64::new(re, im))).collect()
}

pub fn asymp(arg: &ConfigArg, points: Option<&Path>, grid: Option<usize>, extent: f64, mode: Mode, tau: f64, out: &Path) -> Outcome {
    let mut run = Run::new("asymp", Some(&arg.config));
    run.manifest.param("mode", format!("{mode:?}").to_lowercase());
    run.manifest.param("tau", tau);
    let zs = match (points, grid) {
        (Some(p), _) => {
            run.manifest.param("points", p.display().to_string());
            read_points(p)?
        }
        (None, Some(g)) => {
            run.manifest.param("grid", g);
            run.manifest.param("extent", extent);
            lattice(g, extent)
        }
        (None, None) => unreachable!("clap requires one of --points and --grid"),
    };
    let cfg = load(arg, None)?;
    let model = AsymptoticModel::build(&cfg)?;
    let registry = FormulaRegistry::with_tau(tau);
    let mut csv = Csv::new(&["re", "im", "value_re", "value_im", "label", "formula_used"]);
    for z in zs {
        let (v, name) = evaluate(&model, &registry, mode, z)?;
        csv.row(&[
            num(z.re),
            num(z.im),
            num(v.re),
            num(v.im),
            model.classify(z).to_string(),
            name.to_string(),
        ]);
    }
    run.write(out, &csv.into_string())?;
    run.finish()
}

fn check_exponent(c: f64) -> Outcome {
    if c.is_finite() && c > -1.0 && c != 0.0 {
        Ok(())
    } else {
        Err(Failure::Config(format!("exponent c = {c} must be > -1 and nonzero")))
    }
}

pub fn fc(c: f64, grid: usize, radius: f64, out: &Path) -> Outcome {
    let mut run = Run::new("fc", None);
    run.manifest.param("c", c);
    run.manifest.param("grid", grid);
    run.manifest.param("radius", radius);
    check_exponent(c)?;
    let ev = FcEvaluator::new(c);
    let mut csv = Csv::new(&["re", "im", "f_re", "f_im", "abs_e"]);
    for zeta in lattice(grid, radius) {
        let e = ev.e(zeta);
        // on the cut f_c is reported from the upper side
        let f = match ev.f(zeta) {
            Ok(f) => f,
            Err(SpecFunError::OnNegativeAxis) => ev.exp_over_power(Complex64::new(zeta.re, 0.0)) - e,
            Err(other) => return Err(other.into()),
        };
        csv.row(&[num(zeta.re), num(zeta.im), num(f.re), num(f.im), num(e.norm())]);
    }
    run.write(out, &csv.into_string())?;
    run.finish()
}

fn parse_rect(text: &str) -> Result<Rect, Failure> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Config(format!("bad --box {text:?}: {e}")))?;
    match v[..] {
        [re0, re1, im0, im1] if re0 < re1 && im0 < im1 => Ok(Rect::new(re0, re1, im0, im1)),
        _ => Err(Failure::Config(format!(
            "--box needs re0,re1,im0,im1 with re0 < re1 and im0 < im1, got {text:?}"
        ))),
    }
}

pub fn fc_zeros(c: f64, rect: &str, tol: f64, out: &Path) -> Outcome {
    let mut run = Run::new("fc-zeros", None);
    run.manifest.param("c", c);
    run.manifest.param("box", rect);
    run.manifest.param("tol", tol);
    check_exponent(c)?;
    let r = parse_rect(rect)?;
    let ev = FcEvaluator::new(c);
    let zeros = zeros_e_c_jittered(c, r, tol)?;
    let mut csv = Csv::new(&["re", "im", "abs_e"]);
    for z in &zeros {
        csv.row(&[num(z.re), num(z.im), num(ev.e(*z).norm())]);
    }
    run.write(out, &csv.into_string())?;
    println!("{} zero(s)", zeros.len());
    run.finish()
}

fn solve_oracle(cfg: &Configuration, method: Method) -> Result<(MomentMatrix, MonicPolynomial, &'static str), Failure> {
    let registry = MomentRegistry::default();
    let m: &dyn MomentMethod = match method {
        Method::Auto => registry.auto(cfg),
        Method::Exact => registry.get("exact")?,
        Method::Quad => registry.get("quad")?,
    };
    let moments = m.compute(cfg, cfg.n + 1)?;
    let p = monic_op(&moments, cfg.n)?;
    Ok((moments, p, m.name()))
}

pub fn oracle(arg: &ConfigArg, degree: usize, method: Method, out: &Path, moments_out: Option<&Path>) -> Outcome {
    let mut run = Run::new("oracle", Some(&arg.config));
    run.manifest.param("degree", degree);
    let cfg = load(arg, Some(degree))?;
    let (moments, p, name) = solve_oracle(&cfg, method)?;
    run.manifest.param("method", name);
    let roots = p.roots()?;
    let mut csv = Csv::new(&["re", "im", "residual"]);
    for r in &roots {
        csv.row(&[num(r.z.re), num(r.z.im), num(r.residual)]);
    }
    run.write(out, &csv.into_string())?;
    if let Some(path) = moments_out {
        let doc = json!({ "method": name, "size": moments.size(), "entries": moments.to_pairs() });
        run.write(path, &pretty(&doc))?;
    }
    let summary = json!({
        "degree": degree,
        "N": cfg.big_n,
        "method": name,
        "h_n": p.h_n,
        "condition": p.condition,
        "orthogonality_residual": p.orthogonality_residual(&moments),
    });
    print!("{}", pretty(&summary));
    run.finish()
}

/// Sixteen points on `|z| = 1.5` followed by `a_j / 2` for every `j`.
fn compare_points(cfg: &Configuration) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = (0..16)
        .map(|k| Complex64::from_polar(1.5, 2.0 * std::f64::consts::PI * k as f64 / 16.0))
        .collect();
    out.extend(cfg.a.iter().map(|a| a / 2.0));
    out
}

#[allow(clippy::too_many_arguments)]
pub fn compare(
    arg: &ConfigArg,
    degree: usize,
    method: Method,
    mode: Mode,
    grid: usize,
    tol: f64,
    out: &Path,
    summary_out: &Path,
    svg_out: Option<&Path>,
) -> Outcome {
    let mut run = Run::new("compare", Some(&arg.config));
    run.manifest.param("degree", degree);
    run.manifest.param("mode", format!("{mode:?}").to_lowercase());
    run.manifest.param("grid", grid);
    run.manifest.param("tol", tol);
    let cfg = load(arg, Some(degree))?;
    let model = AsymptoticModel::build(&cfg)?;
    let (_, p, name) = solve_oracle(&cfg, method)?;
    run.manifest.param("method", name);
    let registry = FormulaRegistry::default();

    let mut csv = Csv::new(&[
        "re",
        "im",
        "label",
        "formula_used",
        "asym_re",
        "asym_im",
        "oracle_re",
        "oracle_im",
        "rel_error",
    ]);
    let mut worst: BTreeMap<usize, f64> = BTreeMap::new();
    for z in compare_points(&cfg) {
        let (v, formula) = evaluate(&model, &registry, mode, z)?;
        let exact = p.eval(z);
        let err = (v - exact).norm() / exact.norm();
        let label = model.classify(z);
        let entry = worst.entry(label).or_insert(0.0);
        *entry = entry.max(err);
        csv.row(&[
            num(z.re),
            num(z.im),
            label.to_string(),
            formula.to_string(),
            num(v.re),
            num(v.im),
            num(exact.re),
            num(exact.im),
            num(err),
        ]);
    }
    run.write(out, &csv.into_string())?;

    let curve = trace_curve(&model.structure, grid, tol)?;
    let roots: Vec<Complex64> = p.roots()?.into_iter().map(|r| r.z).collect();
    let disks: Vec<(Complex64, f64)> = (1..=cfg.nu()).map(|j| (cfg.a[j - 1], model.local_radius(j))).collect();
    let distance = root_curve_distance_disks(&roots, &curve, &disks);
    let summary = json!({
        "degree": degree,
        "N": cfg.big_n,
        "method": name,
        "max_rel_error_by_label": worst,
        "root_curve_distance": distance,
        "exclusion_radii": disks.iter().map(|d| d.1).collect::<Vec<_>>(),
    });
    let text = pretty(&summary);
    print!("{text}");
    run.write(summary_out, &text)?;
    if let Some(path) = svg_out {
        run.write(path, &svg::render(&curve, &cfg.a, &roots))?;
    }
    run.finish()
}
