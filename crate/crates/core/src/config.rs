//! Problem data: singular points `a_j`, exponents `c_j`, degree `n`, scale `N`.

use crate::error::ConfigError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ORIGIN_TOL: f64 = 1e-14;
const DUPLICATE_TOL: f64 = 1e-12;
const COLLINEAR_TOL: f64 = 1e-10;

/// JSON form of a configuration, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawConfig {
    pub a: Vec<[f64; 2]>,
    pub c: Vec<f64>,
    pub n: usize,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub big_n: Option<f64>,
}

impl RawConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }
}

/// A validated configuration. Construct through [`validate_config`].
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub a: Vec<Complex64>,
    pub c: Vec<f64>,
    pub n: usize,
    pub big_n: f64,
}

impl Configuration {
    pub fn new(a: Vec<Complex64>, c: Vec<f64>, n: usize, big_n: Option<f64>) -> Result<Self, ConfigError> {
        validate_config(RawConfig {
            a: a.iter().map(|z| [z.re, z.im]).collect(),
            c,
            n,
            big_n,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        validate_config(RawConfig::from_json(text)?)
    }

    pub fn nu(&self) -> usize {
        self.a.len()
    }

    pub fn to_raw(&self) -> RawConfig {
        RawConfig {
            a: self.a.iter().map(|z| [z.re, z.im]).collect(),
            c: self.c.clone(),
            n: self.n,
            big_n: Some(self.big_n),
        }
    }

    /// Same points and exponents at a different degree and scale.
    pub fn with_degree(&self, n: usize, big_n: f64) -> Self {
        Configuration {
            a: self.a.clone(),
            c: self.c.clone(),
            n,
            big_n,
        }
    }

    pub fn total_exponent(&self) -> f64 {
        self.c.iter().sum()
    }

    pub fn integer_exponents(&self) -> bool {
        self.c.iter().all(|&c| is_integer(c))
    }
}

pub(crate) fn is_integer(c: f64) -> bool {
    c == c.round()
}

pub fn validate_config(raw: RawConfig) -> Result<Configuration, ConfigError> {
    if raw.a.is_empty() {
        return Err(ConfigError::Empty);
    }
    if raw.a.len() != raw.c.len() {
        return Err(ConfigError::LengthMismatch {
            a: raw.a.len(),
            c: raw.c.len(),
        });
    }
    if raw.a.iter().flatten().any(|x| !x.is_finite()) {
        return Err(ConfigError::NonFinite { field: "a" });
    }
    if raw.c.iter().any(|x| !x.is_finite()) {
        return Err(ConfigError::NonFinite { field: "c" });
    }
    let big_n = raw.big_n.unwrap_or(raw.n as f64);
    if !(big_n.is_finite() && big_n > 0.0) {
        return Err(ConfigError::BadScale(big_n));
    }
    for (index, &value) in raw.c.iter().enumerate() {
        if value <= -1.0 || value == 0.0 {
            return Err(ConfigError::BadExponent { index, value });
        }
    }
    let a: Vec<Complex64> = raw.a.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    for (index, z) in a.iter().enumerate() {
        let modulus = z.norm();
        if modulus < ORIGIN_TOL {
            return Err(ConfigError::OriginSingularity { index });
        }
        if modulus >= 1.0 {
            return Err(ConfigError::OutsideDisk { index, modulus });
        }
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] - a[j]).norm() < DUPLICATE_TOL {
                return Err(ConfigError::DuplicatePoint { i, j });
            }
        }
    }
    // index 0 is the origin, index j >= 1 is a_j
    let pts: Vec<Complex64> = std::iter::once(Complex64::new(0.0, 0.0)).chain(a.iter().copied()).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if collinear(pts[i], pts[j], pts[k]) {
                    return Err(ConfigError::CollinearTriple { points: [i, j, k] });
                }
            }
        }
    }
    Ok(Configuration {
        a,
        c: raw.c,
        n: raw.n,
        big_n,
    })
}

fn collinear(p: Complex64, q: Complex64, r: Complex64) -> bool {
    let u = q - p;
    let v = r - p;
    let area = 0.5 * (u.re * v.im - u.im * v.re).abs();
    let d = (q - p).norm().max((r - p).norm()).max((r - q).norm());
    area < COLLINEAR_TOL * d * d
}

#[cfg(test)]
mod tests {
    use super::*;

    type Check = fn(&ConfigError) -> bool;

    fn raw(a: &[[f64; 2]], c: &[f64]) -> RawConfig {
        RawConfig {
            a: a.to_vec(),
            c: c.to_vec(),
            n: 10,
            big_n: None,
        }
    }

    #[test]
    fn single_point_is_valid_and_defaults_scale() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let cfg = validate_config(RawConfig {
            a: vec![[s, 0.0]],
            c: vec![1.0],
            n: 80,
            big_n: None,
        })
        .unwrap();
        assert_eq!(cfg.big_n, 80.0);
        assert_eq!(cfg.nu(), 1);
    }

    #[test]
    fn two_point_figure_config_is_valid() {
        let cfg = validate_config(RawConfig {
            a: vec![[0.5, -0.5], [-0.25, -0.5]],
            c: vec![1.0, 1.0],
            n: 200,
            big_n: None,
        });
        assert!(cfg.is_ok());
    }

    #[test]
    fn real_points_are_collinear() {
        let err = validate_config(raw(&[[0.5, 0.0], [0.25, 0.0], [0.75, 0.0]], &[1.0, 1.0, 1.0])).unwrap_err();
        assert!(matches!(err, ConfigError::CollinearTriple { .. }));
    }

    #[test]
    fn each_rejection_is_reachable() {
        let cases: Vec<(RawConfig, Check)> = vec![
            (raw(&[[0.0, 0.0]], &[1.0]), |e| matches!(e, ConfigError::OriginSingularity { .. })),
            (raw(&[[1.2, 0.0]], &[1.0]), |e| matches!(e, ConfigError::OutsideDisk { .. })),
            (raw(&[[0.3, 0.2], [0.3, 0.2]], &[1.0, 1.0]), |e| {
                matches!(e, ConfigError::DuplicatePoint { .. })
            }),
            (raw(&[[0.3, 0.3], [0.6, 0.6]], &[1.0, 1.0]), |e| {
                matches!(e, ConfigError::CollinearTriple { .. })
            }),
            (raw(&[[0.3, 0.2]], &[-1.0]), |e| matches!(e, ConfigError::BadExponent { .. })),
            (raw(&[[0.3, 0.2]], &[0.0]), |e| matches!(e, ConfigError::BadExponent { .. })),
        ];
        for (r, check) in cases {
            let e = validate_config(r).unwrap_err();
            assert!(check(&e), "unexpected {e:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let cfg = Configuration::from_json(r#"{"a": [[0.5, -0.5], [-0.25, -0.5]], "c": [1, 1], "n": 16, "N": 8}"#).unwrap();
        assert_eq!(cfg.big_n, 8.0);
        let again = validate_config(cfg.to_raw()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn missing_field_is_a_parse_error() {
        assert!(matches!(
            Configuration::from_json(r#"{"a": [[0.5, 0.1]], "n": 3}"#),
            Err(ConfigError::Parse(_))
        ));
    }
}
