//! INI-style run configuration: `[section]` headers, `key = value` lines and
//! `#` comments. Unknown sections and keys are rejected.

use std::fmt::Write as _;
use std::path::PathBuf;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::experiments::SweepModel;
use crate::models::BhForm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key '{key}' in [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: '{key}' expects {expected}, got '{value}'")]
    TypeMismatch {
        line: usize,
        key: String,
        expected: &'static str,
        value: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    CurieWeiss,
    BoseHubbard,
    DoubleWell,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::CurieWeiss => "curie_weiss",
            ModelKind::BoseHubbard => "bose_hubbard",
            ModelKind::DoubleWell => "double_well",
        }
    }

    fn parse(s: &str) -> Option<ModelKind> {
        [ModelKind::CurieWeiss, ModelKind::BoseHubbard, ModelKind::DoubleWell]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub j: f64,
    pub b: f64,
    pub form: BhForm,
    pub grid_points: usize,
    /// Size for `solve` on the spin models.
    pub n: usize,
    /// `ħ` for `solve` on the double well.
    pub hbar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub n: Vec<usize>,
    pub hbar: Vec<f64>,
    /// `None` selects the model's default observables.
    pub observables: Option<Vec<String>>,
    pub diagnose_n: Vec<usize>,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSection {
    pub epsilon: Vec<f64>,
    pub n: Vec<usize>,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    pub hbar: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub dir: PathBuf,
    /// Stamp reports with the wall-clock time. Off by default so identical
    /// configs give identical files.
    pub timestamp: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSection,
    pub sweep: SweepSection,
    pub perturbation: PerturbationSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelSection {
                kind: ModelKind::CurieWeiss,
                j: 1.0,
                b: 0.5,
                form: BhForm::Spin,
                grid_points: 2048,
                n: 100,
                hbar: 0.05,
            },
            sweep: SweepSection {
                n: vec![50, 100, 200, 500, 1000],
                hbar: vec![0.5, 0.2, 0.1, 0.05, 0.02],
                observables: None,
                diagnose_n: vec![8, 16, 32, 64],
                parallel: true,
            },
            perturbation: PerturbationSection {
                epsilon: vec![-1e-3, -1e-6, 1e-6, 1e-3],
                n: vec![100, 2000],
                amplitude: 0.1,
                center: 1.0,
                width: 0.2,
                hbar: vec![0.5, 0.2, 0.1, 0.05, 0.02],
            },
            output: OutputSection {
                dir: PathBuf::from("results"),
                timestamp: false,
            },
        }
    }
}

impl RunConfig {
    pub fn sweep_model(&self) -> SweepModel {
        match self.model.kind {
            ModelKind::CurieWeiss => SweepModel::CurieWeiss {
                j: self.model.j,
                b: self.model.b,
            },
            ModelKind::BoseHubbard => SweepModel::BoseHubbard { form: self.model.form },
            ModelKind::DoubleWell => SweepModel::DoubleWell {
                grid_points: self.model.grid_points,
            },
        }
    }

    pub fn observables(&self) -> Vec<String> {
        if let Some(o) = &self.sweep.observables {
            return o.clone();
        }
        let names: &[&str] = match self.model.kind {
            ModelKind::DoubleWell => &["q", "q2", "p2", "energy"],
            _ => &["x", "z", "z2", "energy"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Every key with its effective value, in a fixed order.
    pub fn canonical(&self) -> String {
        fn list<T: ToString>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
        }
        let m = &self.model;
        let s = &self.sweep;
        let p = &self.perturbation;
        let mut out = String::new();
        let _ = writeln!(out, "[model]");
        let _ = writeln!(out, "kind = {}", m.kind.name());
        let _ = writeln!(out, "J = {}", m.j);
        let _ = writeln!(out, "B = {}", m.b);
        let _ = writeln!(out, "form = {}", m.form.name());
        let _ = writeln!(out, "grid_points = {}", m.grid_points);
        let _ = writeln!(out, "N = {}", m.n);
        let _ = writeln!(out, "hbar = {}", m.hbar);
        let _ = writeln!(out, "\n[sweep]");
        let _ = writeln!(out, "N = {}", list(&s.n));
        let _ = writeln!(out, "hbar = {}", list(&s.hbar));
        let _ = writeln!(out, "observables = {}", self.observables().join(", "));
        let _ = writeln!(out, "diagnose_N = {}", list(&s.diagnose_n));
        let _ = writeln!(out, "parallel = {}", s.parallel);
        let _ = writeln!(out, "\n[perturbation]");
        let _ = writeln!(out, "epsilon = {}", list(&p.epsilon));
        let _ = writeln!(out, "N = {}", list(&p.n));
        let _ = writeln!(out, "amplitude = {}", p.amplitude);
        let _ = writeln!(out, "center = {}", p.center);
        let _ = writeln!(out, "width = {}", p.width);
        let _ = writeln!(out, "hbar = {}", list(&p.hbar));
        let _ = writeln!(out, "\n[output]");
        let _ = writeln!(out, "dir = {}", self.output.dir.display());
        let _ = writeln!(out, "timestamp = {}", self.output.timestamp);
        out
    }

    /// Hex SHA-256 of [`RunConfig::canonical`].
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

struct Value<'a> {
    line: usize,
    key: &'a str,
    raw: &'a str,
}

impl Value<'_> {
    fn mismatch(&self, expected: &'static str) -> ConfigError {
        ConfigError::TypeMismatch {
            line: self.line,
            key: self.key.to_string(),
            expected,
            value: self.raw.to_string(),
        }
    }

    fn float(&self) -> Result<f64, ConfigError> {
        parse_float(self.raw).ok_or_else(|| self.mismatch("a finite number"))
    }

    fn count(&self) -> Result<usize, ConfigError> {
        self.raw.parse().map_err(|_| self.mismatch("a non-negative integer"))
    }

    fn floats(&self) -> Result<Vec<f64>, ConfigError> {
        split_list(self.raw)
            .map(|v| parse_float(v).ok_or_else(|| self.mismatch("a comma-separated list of numbers")))
            .collect()
    }

    fn counts(&self) -> Result<Vec<usize>, ConfigError> {
        split_list(self.raw)
            .map(|v| v.parse().map_err(|_| self.mismatch("a comma-separated list of integers")))
            .collect()
    }

    fn names(&self) -> Result<Vec<String>, ConfigError> {
        let v: Vec<String> = split_list(self.raw).map(str::to_string).collect();
        if v.iter().any(|s| s.is_empty()) {
            return Err(self.mismatch("a comma-separated list of names"));
        }
        Ok(v)
    }

    fn flag(&self) -> Result<bool, ConfigError> {
        match self.raw {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(self.mismatch("true or false")),
        }
    }
}

fn parse_float(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim)
}

const SECTIONS: [&str; 4] = ["model", "sweep", "perturbation", "output"];

/// Parses configuration text; missing keys keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section: Option<&str> = None;
    let mut seen: Vec<(String, String)> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parse_err = |message: String| ConfigError::Parse { line, message };
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_err("unterminated section header".into()))?
                .trim();
            section = Some(
                SECTIONS
                    .iter()
                    .find(|s| **s == name)
                    .ok_or_else(|| parse_err(format!("unknown section [{name}]")))?,
            );
            continue;
        }
        let (key, raw) = content
            .split_once('=')
            .ok_or_else(|| parse_err("expected 'key = value'".into()))?;
        let (key, raw) = (key.trim(), raw.trim());
        let sec = section.ok_or_else(|| parse_err(format!("'{key}' appears before any section")))?;
        if key.is_empty() {
            return Err(parse_err("empty key".into()));
        }
        if seen.iter().any(|(s, k)| s == sec && k == key) {
            return Err(parse_err(format!("duplicate key '{key}' in [{sec}]")));
        }
        seen.push((sec.to_string(), key.to_string()));
        let v = Value { line, key, raw };
        let m = &mut cfg.model;
        let s = &mut cfg.sweep;
        let p = &mut cfg.perturbation;
        let o = &mut cfg.output;
        match (sec, key) {
            ("model", "kind") => m.kind = ModelKind::parse(raw).ok_or_else(|| v.mismatch("a model kind"))?,
            ("model", "J") => m.j = v.float()?,
            ("model", "B") => m.b = v.float()?,
            ("model", "form") => m.form = BhForm::parse(raw).ok_or_else(|| v.mismatch("spin, occupation or printed"))?,
            ("model", "grid_points") => m.grid_points = v.count()?,
            ("model", "N") => m.n = v.count()?,
            ("model", "hbar") => m.hbar = v.float()?,
            ("sweep", "N") => s.n = v.counts()?,
            ("sweep", "hbar") => s.hbar = v.floats()?,
            ("sweep", "observables") => s.observables = Some(v.names()?),
            ("sweep", "diagnose_N") => s.diagnose_n = v.counts()?,
            ("sweep", "parallel") => s.parallel = v.flag()?,
            ("perturbation", "epsilon") => p.epsilon = v.floats()?,
            ("perturbation", "N") => p.n = v.counts()?,
            ("perturbation", "amplitude") => p.amplitude = v.float()?,
            ("perturbation", "center") => p.center = v.float()?,
            ("perturbation", "width") => p.width = v.float()?,
            ("perturbation", "hbar") => p.hbar = v.floats()?,
            ("output", "dir") => {
                if raw.is_empty() {
                    return Err(v.mismatch("a directory path"));
                }
                o.dir = PathBuf::from(raw)
            }
            ("output", "timestamp") => o.timestamp = v.flag()?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    section: sec.to_string(),
                    key: key.to_string(),
                })
            }
        }
    }
    Ok(cfg)
}
