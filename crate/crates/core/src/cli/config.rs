//! Flat TOML run configuration.
//!
//! ```toml
//! mode = "levinson"        # levinson | curves | resonance_scan | flow_suite | bk_check
//! dimension = 3
//! family = "well"          # bump | well | table | free
//! depth = 4.0
//! radius = 1.0
//! # table = "profile.txt"  # two columns r, T(r); V = depth·T, relative to this file
//! ```
//!
//! Every other key is optional and listed in [`RunConfig`].

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{BoxGrid, BumpFunction};
use crate::potential::{Potential, Table};
use crate::radial::Channel;
use crate::scattering::AssembleOptions;

use super::levinson::LevinsonOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Levinson,
    Curves,
    ResonanceScan,
    FlowSuite,
    BkCheck,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Levinson => "levinson",
            Mode::Curves => "curves",
            Mode::ResonanceScan => "resonance_scan",
            Mode::FlowSuite => "flow_suite",
            Mode::BkCheck => "bk_check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Bump,
    Well,
    Table,
    Free,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,

    pub dimension: usize,
    pub family: FamilyName,
    #[serde(default)]
    pub depth: f64,
    #[serde(default = "one")]
    pub radius: f64,
    pub table: Option<PathBuf>,

    /// Defaults to `400·(max|V| + a⁻²)`.
    pub lambda_max: Option<f64>,
    /// Defaults to `1e-4·(max|V| + a⁻²)`.
    pub lambda_min: Option<f64>,
    pub l_max: Option<usize>,
    pub points_per_decade: Option<usize>,
    pub truncation_tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub step_tol: Option<f64>,
    /// Phase jump (rad) that triggers grid refinement.
    pub refine_jump: Option<f64>,
    pub tail_decades: Option<f64>,
    pub residual_tol: Option<f64>,

    /// Resonance scan: channel `ℓ` and depth interval.
    pub scan_l: Option<usize>,
    pub scan_lo: Option<f64>,
    pub scan_hi: Option<f64>,
    pub scan_samples: Option<usize>,

    /// Flow suite.
    pub seed: Option<u64>,
    pub paths: Option<usize>,
    pub dim_min: Option<usize>,
    pub dim_max: Option<usize>,
    pub s_values: Option<Vec<f64>>,
    pub formula_tol: Option<f64>,
    /// Shift of the Hamiltonian path; defaults to `-2ν + 2`.
    pub alpha: Option<f64>,

    /// Box used by the Hamiltonian flows and the trace check.
    pub box_length: Option<f64>,
    pub box_points: Option<usize>,

    /// Trace check test function support and tolerance.
    pub bk_lo: Option<f64>,
    pub bk_hi: Option<f64>,
    pub bk_tol: Option<f64>,

    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn one() -> f64 {
    1.0
}

fn positive(name: &str, v: Option<f64>) -> Result<()> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => {
            Err(Error::Configuration(format!("{name} must be positive, got {x}")))
        }
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Configuration(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, &dir)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.dimension) {
            return Err(Error::Configuration(format!(
                "dimension {} not in 1..=4",
                self.dimension
            )));
        }
        positive("radius", Some(self.radius))?;
        for (name, v) in [
            ("lambda_max", self.lambda_max),
            ("lambda_min", self.lambda_min),
            ("truncation_tol", self.truncation_tol),
            ("quad_tol", self.quad_tol),
            ("step_tol", self.step_tol),
            ("refine_jump", self.refine_jump),
            ("tail_decades", self.tail_decades),
            ("residual_tol", self.residual_tol),
            ("formula_tol", self.formula_tol),
            ("box_length", self.box_length),
            ("bk_tol", self.bk_tol),
        ] {
            positive(name, v)?;
        }
        if let (Some(lo), Some(hi)) = (self.lambda_min, self.lambda_max) {
            if lo >= hi {
                return Err(Error::Configuration(format!("lambda_min {lo} >= lambda_max {hi}")));
            }
        }
        if self.points_per_decade == Some(0) {
            return Err(Error::Configuration("points_per_decade must be positive".into()));
        }
        if (self.family == FamilyName::Table) != self.table.is_some() {
            return Err(Error::Configuration(
                "`table` is required exactly when family = \"table\"".into(),
            ));
        }
        if !self.depth.is_finite() {
            return Err(Error::Configuration("depth must be finite".into()));
        }
        if let Some(s) = &self.s_values {
            if s.is_empty() || s.iter().any(|&x| !(x > 0.5)) {
                return Err(Error::Configuration("s_values must be non-empty and all > 1/2".into()));
            }
        }
        Ok(())
    }

    /// Checks that a `mode` key, if present, agrees with the subcommand.
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        match self.mode {
            Some(m) if m != mode => Err(Error::Configuration(format!(
                "config mode {} does not match subcommand {}",
                m.name(),
                mode.name()
            ))),
            _ => Ok(()),
        }
    }

    pub fn potential(&self) -> Result<Potential> {
        let pot = match self.family {
            FamilyName::Bump => Potential::bump(self.dimension, self.depth, self.radius),
            FamilyName::Well => Potential::well(self.dimension, self.depth, self.radius),
            FamilyName::Free => Potential::free(self.dimension),
            FamilyName::Table => {
                let rel = self.table.as_ref().expect("validated");
                let path = if rel.is_absolute() {
                    rel.clone()
                } else {
                    self.base_dir.join(rel)
                };
                Potential::table(self.dimension, Table::from_file(&path)?, self.depth)
            }
        };
        pot.map_err(|e| match e {
            Error::Domain(m) => Error::Configuration(m),
            other => other,
        })
    }

    pub fn assemble_options(&self, pot: &Potential) -> AssembleOptions {
        let mut o = AssembleOptions::for_potential(pot);
        if let Some(v) = self.lambda_max {
            o.lambda_max = v;
        }
        if let Some(v) = self.lambda_min {
            o.lambda_min = v;
        }
        if let Some(v) = self.l_max {
            o.l_max = v;
        }
        if let Some(v) = self.points_per_decade {
            o.points_per_decade = v;
        }
        if let Some(v) = self.truncation_tol {
            o.truncation_tol = v;
        }
        if let Some(v) = self.step_tol {
            o.step_tol = v;
        }
        if let Some(v) = self.refine_jump {
            o.refine_jump = v;
        }
        o
    }

    pub fn levinson_options(&self, pot: &Potential) -> LevinsonOptions {
        let mut o = LevinsonOptions::for_potential(pot);
        o.assemble = self.assemble_options(pot);
        if let Some(v) = self.quad_tol {
            o.quad_tol = v;
        }
        if let Some(v) = self.tail_decades {
            o.tail_decades = v;
        }
        if let Some(v) = self.residual_tol {
            o.residual_tol = v;
        }
        o
    }

    pub fn scan_channel(&self) -> Result<Channel> {
        Channel::new(self.dimension, self.scan_l.unwrap_or(0)).map_err(|e| Error::Configuration(e.to_string()))
    }

    pub fn box_grid(&self) -> BoxGrid {
        let length = self.box_length.unwrap_or(20.0 * self.radius);
        BoxGrid {
            length,
            points: self.box_points.unwrap_or(4000),
        }
    }

    pub fn bump_function(&self) -> BumpFunction {
        BumpFunction {
            lo: self.bk_lo.unwrap_or(-3.0),
            hi: self.bk_hi.unwrap_or(9.0),
            height: 1.0,
        }
    }
}
