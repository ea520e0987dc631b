//! Flat key = value run configuration. Lines are `key = value`; `#` starts
//! a comment; keys are case-sensitive. Every benchmark-table parameter
//! (case, Re or nu, lambda, Cr, t0, te, grid, projection pre-passes) is
//! settable; defaults reproduce the high-Re box setup at reduced resolution.

use crate::cases::{Case, CaseKind};
use crate::error::{GepupError, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseKind,
    /// Reynolds number; ignored when nu is given explicitly.
    pub re: f64,
    /// Explicit viscosity override (the single vortex sets its own default).
    pub nu: Option<f64>,
    pub lambda: f64,
    pub cr: f64,
    pub t0: f64,
    pub te: f64,
    pub grid: usize,
    pub pre_projection_passes: Option<usize>,
    /// Relative residual tolerance for elliptic solves.
    pub solver_tol: f64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            case: CaseKind::ViscousBox,
            re: 1e4,
            nu: None,
            lambda: 1.0,
            cr: 0.5,
            t0: 0.0,
            te: 0.5,
            grid: 64,
            pre_projection_passes: None,
            solver_tol: 1e-11,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut kv = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(GepupError::Config(format!(
                    "line {}: expected `key = value`, got `{}`",
                    lineno + 1,
                    line
                )));
            };
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut cfg = RunConfig::default();
        for (k, v) in kv {
            cfg.set(&k, &v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| GepupError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        RunConfig::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |k: &str, v: &str| GepupError::Config(format!("invalid value `{v}` for `{k}`"));
        match key {
            "case" => {
                self.case = match value {
                    "single_vortex" => CaseKind::SingleVortex,
                    "viscous_box" => CaseKind::ViscousBox,
                    "manufactured" => CaseKind::Manufactured,
                    _ => return Err(bad(key, value)),
                }
            }
            "re" | "Re" => self.re = value.parse().map_err(|_| bad(key, value))?,
            "nu" => self.nu = Some(value.parse().map_err(|_| bad(key, value))?),
            "lambda" => self.lambda = value.parse().map_err(|_| bad(key, value))?,
            "cr" | "Cr" => self.cr = value.parse().map_err(|_| bad(key, value))?,
            "t0" => self.t0 = value.parse().map_err(|_| bad(key, value))?,
            "te" => self.te = value.parse().map_err(|_| bad(key, value))?,
            "grid" => self.grid = value.parse().map_err(|_| bad(key, value))?,
            "pre_projection_passes" => {
                self.pre_projection_passes = Some(value.parse().map_err(|_| bad(key, value))?)
            }
            "solver_tol" => self.solver_tol = value.parse().map_err(|_| bad(key, value))?,
            _ => return Err(GepupError::Config(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.te < self.t0 {
            return Err(GepupError::Config(format!(
                "te = {} must be >= t0 = {}",
                self.te, self.t0
            )));
        }
        if self.lambda < 0.0 {
            return Err(GepupError::Config(format!(
                "lambda = {} must be nonnegative",
                self.lambda
            )));
        }
        if self.grid < 8 {
            return Err(GepupError::Config(format!(
                "grid = {} is below the minimum of 8",
                self.grid
            )));
        }
        let c = self.build_case();
        if c.nu <= 0.0 {
            return Err(GepupError::Config(format!("nu = {} must be positive", c.nu)));
        }
        Ok(())
    }

    /// The resolved case with nu/pre-pass overrides applied.
    pub fn build_case(&self) -> Case {
        let mut c = match self.case {
            CaseKind::SingleVortex => Case::single_vortex(),
            CaseKind::ViscousBox => Case::viscous_box(self.re),
            CaseKind::Manufactured => Case::manufactured(self.re),
        };
        if let Some(nu) = self.nu {
            c.nu = nu;
        }
        if let Some(p) = self.pre_projection_passes {
            c.pre_projection_passes = p;
        }
        c
    }
}
