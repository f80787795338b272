//! Flat `key = value` run configuration with repeatable `[mode]` sections.
//!
//! ```text
//! # comment
//! m = 1
//! v = 0.5
//! [mode]
//! amp = 1
//! phase = 0
//! p = 0.75
//! ```
//!
//! Top-level keys must come before the first `[mode]` section. Momenta
//! (`p`, `p0`, `sigma_p`) are in units of `m c`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;

use crate::kinematics::SuperpositionState;
use crate::units::UnitSystem;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Io { path: PathBuf, reason: String },
    #[error("line {line}: expected `key = value` or `[mode]`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` may only appear before the first [mode] section")]
    MisplacedKey { line: usize, key: String },
    #[error("line {line}: key `{key}` has unparsable value `{value}`")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("key `{key}` = {value} is out of range: {reason}")]
    OutOfRange {
        key: String,
        value: String,
        reason: &'static str,
    },
    #[error("[mode] section {index} is missing key `{key}`")]
    MissingModeKey { index: usize, key: &'static str },
}

/// One plane-wave mode: amplitude modulus, phase (radians), momentum in `m c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub amp: f64,
    pub phase: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub m: f64,
    pub c: f64,
    pub hbar: f64,
    pub n_points: usize,
    pub length: f64,
    pub v: f64,
    /// Time step; derived from `E_max dt / hbar = 1e-3` when absent.
    pub dt: Option<f64>,
    pub t_final: f64,
    pub time_steps: usize,
    pub p0: f64,
    pub sigma_p: f64,
    pub x0: f64,
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub modes: Vec<ModeSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 1.0,
            c: 1.0,
            hbar: 1.0,
            n_points: 256,
            length: 200.0,
            v: 0.5,
            dt: None,
            t_final: 10.0,
            time_steps: 10,
            p0: 0.3,
            sigma_p: 0.05,
            x0: 0.0,
            tolerance: None,
            seed: 42,
            out: None,
            modes: Vec::new(),
        }
    }
}

const TOP_KEYS: &[&str] = &[
    "m",
    "c",
    "hbar",
    "n_points",
    "length",
    "v",
    "dt",
    "t_final",
    "time_steps",
    "p0",
    "sigma_p",
    "x0",
    "tolerance",
    "seed",
    "out",
];

impl RunConfig {
    pub fn units(&self) -> UnitSystem {
        UnitSystem::new(self.m, self.c, self.hbar).expect("validated in RunConfig::validate")
    }

    /// Modes as a superposition (momenta converted from `m c` units), or
    /// `None` when no `[mode]` sections were given.
    pub fn superposition(&self) -> Option<SuperpositionState> {
        if self.modes.is_empty() {
            return None;
        }
        let units = self.units();
        let scale = units.momentum_scale();
        SuperpositionState::new(
            self.modes
                .iter()
                .map(|m| (Complex64::from_polar(m.amp, m.phase), m.p * scale)),
            units,
        )
        .ok()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(out_of_range(key, v, "must be finite and positive"))
            }
        };
        positive("m", self.m)?;
        positive("c", self.c)?;
        positive("hbar", self.hbar)?;
        positive("length", self.length)?;
        positive("sigma_p", self.sigma_p)?;
        if let Some(dt) = self.dt {
            positive("dt", dt)?;
        }
        if let Some(tol) = self.tolerance {
            positive("tolerance", tol)?;
        }
        if self.n_points < 2 || !self.n_points.is_multiple_of(2) {
            return Err(out_of_range(
                "n_points",
                self.n_points,
                "must be a positive even integer",
            ));
        }
        if self.time_steps == 0 {
            return Err(out_of_range("time_steps", 0, "must be at least 1"));
        }
        if !(self.v.is_finite() && self.v.abs() < self.c) {
            return Err(out_of_range(
                "v",
                self.v,
                "boost velocity must satisfy |v| < c",
            ));
        }
        for (name, x) in [("t_final", self.t_final), ("p0", self.p0), ("x0", self.x0)] {
            if !x.is_finite() {
                return Err(out_of_range(name, x, "must be finite"));
            }
        }
        for m in &self.modes {
            if !(m.amp.is_finite() && m.amp >= 0.0) {
                return Err(out_of_range(
                    "amp",
                    m.amp,
                    "must be finite and non-negative",
                ));
            }
            if !m.phase.is_finite() {
                return Err(out_of_range("phase", m.phase, "must be finite"));
            }
            if !m.p.is_finite() {
                return Err(out_of_range("p", m.p, "must be finite"));
            }
        }
        Ok(())
    }

    /// Serialises to the config format; parsing the result gives back `self`.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "m = {}", self.m);
        let _ = writeln!(s, "c = {}", self.c);
        let _ = writeln!(s, "hbar = {}", self.hbar);
        let _ = writeln!(s, "n_points = {}", self.n_points);
        let _ = writeln!(s, "length = {}", self.length);
        let _ = writeln!(s, "v = {}", self.v);
        if let Some(dt) = self.dt {
            let _ = writeln!(s, "dt = {dt}");
        }
        let _ = writeln!(s, "t_final = {}", self.t_final);
        let _ = writeln!(s, "time_steps = {}", self.time_steps);
        let _ = writeln!(s, "p0 = {}", self.p0);
        let _ = writeln!(s, "sigma_p = {}", self.sigma_p);
        let _ = writeln!(s, "x0 = {}", self.x0);
        if let Some(t) = self.tolerance {
            let _ = writeln!(s, "tolerance = {t}");
        }
        let _ = writeln!(s, "seed = {}", self.seed);
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {}", out.display());
        }
        for m in &self.modes {
            let _ = writeln!(
                s,
                "[mode]\namp = {}\nphase = {}\np = {}",
                m.amp, m.phase, m.p
            );
        }
        s
    }
}

fn out_of_range(key: &str, value: impl ToString, reason: &'static str) -> ConfigError {
    ConfigError::OutOfRange {
        key: key.to_string(),
        value: value.to_string(),
        reason,
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    parse_config(&text)
}

#[derive(Default)]
struct PartialMode {
    amp: Option<f64>,
    phase: Option<f64>,
    p: Option<f64>,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut modes: Vec<PartialMode> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "[mode]" {
            modes.push(PartialMode::default());
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        }
        let float = || {
            value.parse::<f64>().map_err(|_| ConfigError::InvalidValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            })
        };
        let int = || {
            value.parse::<u64>().map_err(|_| ConfigError::InvalidValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            })
        };

        if let Some(mode) = modes.last_mut() {
            match key {
                "amp" => mode.amp = Some(float()?),
                "phase" => mode.phase = Some(float()?),
                "p" => mode.p = Some(float()?),
                k if TOP_KEYS.contains(&k) => {
                    return Err(ConfigError::MisplacedKey {
                        line,
                        key: key.to_string(),
                    })
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
            continue;
        }

        match key {
            "m" => cfg.m = float()?,
            "c" => cfg.c = float()?,
            "hbar" => cfg.hbar = float()?,
            "n_points" => cfg.n_points = int()? as usize,
            "length" => cfg.length = float()?,
            "v" => cfg.v = float()?,
            "dt" => cfg.dt = Some(float()?),
            "t_final" => cfg.t_final = float()?,
            "time_steps" => cfg.time_steps = int()? as usize,
            "p0" => cfg.p0 = float()?,
            "sigma_p" => cfg.sigma_p = float()?,
            "x0" => cfg.x0 = float()?,
            "tolerance" => cfg.tolerance = Some(float()?),
            "seed" => cfg.seed = int()?,
            "out" => cfg.out = Some(PathBuf::from(value)),
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }

    for (i, m) in modes.into_iter().enumerate() {
        let index = i + 1;
        cfg.modes.push(ModeSpec {
            amp: m
                .amp
                .ok_or(ConfigError::MissingModeKey { index, key: "amp" })?,
            phase: m.phase.unwrap_or(0.0),
            p: m.p.ok_or(ConfigError::MissingModeKey { index, key: "p" })?,
        });
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_uses_defaults() {
        let cfg = parse_config("v = 0.5\n").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn velocity_out_of_range_names_key() {
        let err = parse_config("v = 1.2").unwrap_err();
        assert!(matches!(&err, ConfigError::OutOfRange { key, .. } if key == "v"));
        assert!(err.to_string().contains("`v`"));
    }

    #[test]
    fn modes_round_trip() {
        let text = "seed = 7\n[mode]\namp = 1\nphase = 0.25\np = 0.75\n[mode] # second\namp = 0.5\np = -0.75\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.modes.len(), 2);
        assert_eq!(
            cfg.modes[1],
            ModeSpec {
                amp: 0.5,
                phase: 0.0,
                p: -0.75
            }
        );
        let again = parse_config(&cfg.to_config_string()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn distinct_error_messages() {
        assert!(matches!(
            parse_config("bogus = 1"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            parse_config("m 1"),
            Err(ConfigError::Syntax { .. })
        ));
        assert!(matches!(
            parse_config("m = abc"),
            Err(ConfigError::InvalidValue { .. })
        ));
        assert!(matches!(
            parse_config("[mode]\namp = 1\np = 0\nv = 0.1"),
            Err(ConfigError::MisplacedKey { .. })
        ));
        assert!(matches!(
            parse_config("[mode]\namp = 1"),
            Err(ConfigError::MissingModeKey { key: "p", .. })
        ));
        assert!(matches!(
            parse_config("n_points = 7"),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            load_config(Path::new("/nonexistent/cfg.toml")),
            Err(ConfigError::Io { .. })
        ));
    }

    #[test]
    fn superposition_uses_mc_units() {
        let cfg = parse_config("m = 2\nc = 3\n[mode]\namp = 1\np = 0.5\n").unwrap();
        let s = cfg.superposition().unwrap();
        assert_eq!(s.modes()[0].momentum(), 3.0);
    }
}
