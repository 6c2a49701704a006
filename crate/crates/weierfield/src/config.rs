//! Experiment configuration: strict-schema JSON with unknown-key rejection.
//!
//! Loading re-validates every module-level constraint by constructing the
//! underlying objects eagerly, so a config that loads is a config that runs.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::WeierstrassField;
use crate::lattice::NadicCube;
use crate::stopping::CantorParams;
use crate::trig::TrigPolynomial;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub phi: serde_json::Value,
    pub b: f64,
    pub tail_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub n: u32,
    pub root_corner: Vec<f64>,
    pub root_side: f64,
    pub j_max: u32,
    #[serde(default = "default_quad_nodes")]
    pub quad_nodes: usize,
}

fn default_quad_nodes() -> usize {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoppingSpec {
    /// Ray-boundedness radius R; M = R cos θ. Exactly one of `radius`,
    /// `m_threshold` must be set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_threshold: Option<f64>,
    #[serde(default = "default_theta")]
    pub theta: f64,
    pub k_generations: u32,
}

fn default_theta() -> f64 {
    PI / 3.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QrSpec {
    pub n: u32,
    pub sweep_depth: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSpec {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_y_min")]
    pub y_min: f64,
    #[serde(default = "default_y_max")]
    pub y_max: f64,
    #[serde(default = "default_ppd")]
    pub points_per_decade: usize,
    #[serde(default = "default_h_min")]
    pub h_min: f64,
    #[serde(default = "default_h_max")]
    pub h_max: f64,
    #[serde(default = "default_directions")]
    pub directions: usize,
    /// Decreasing y floors for the divergence survey; default 2^−5 … 2^−20.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_floors: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
    /// Survey direction (unit vector in ℝ^d); default e₁.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survey_direction: Option<Vec<f64>>,
    #[serde(default = "default_t_window")]
    pub t_window: f64,
    #[serde(default = "default_grid_step")]
    pub grid_step: f64,
}

fn default_seed() -> u64 {
    42
}
fn default_count() -> usize {
    1000
}
fn default_y_min() -> f64 {
    1e-6
}
fn default_y_max() -> f64 {
    1.0
}
fn default_ppd() -> usize {
    16
}
fn default_h_min() -> f64 {
    1e-6
}
fn default_h_max() -> f64 {
    1.0
}
fn default_directions() -> usize {
    8
}
fn default_t_window() -> f64 {
    0.5
}
fn default_grid_step() -> f64 {
    1e-3
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            seed: default_seed(),
            count: default_count(),
            y_min: default_y_min(),
            y_max: default_y_max(),
            points_per_decade: default_ppd(),
            h_min: default_h_min(),
            h_max: default_h_max(),
            directions: default_directions(),
            y_floors: None,
            thresholds: None,
            survey_direction: None,
            t_window: default_t_window(),
            grid_step: default_grid_step(),
        }
    }
}

/// The full experiment configuration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub field: FieldSpec,
    pub lattice: LatticeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopping: Option<StoppingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qr: Option<QrSpec>,
    #[serde(default)]
    pub sampling: SamplingSpec,
    /// Worker threads; None means all available cores. Results are
    /// independent of this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
}

fn default_output_dir() -> String {
    "out".to_string()
}

impl ExperimentConfig {
    pub fn from_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    /// Re-runs every module-level constraint by constructing the objects.
    fn validate(&self) -> Result<()> {
        self.build_field().map_err(to_config)?;
        self.root_cube().map_err(to_config)?;
        if self.lattice.quad_nodes < 2 {
            return Err(Error::config("lattice.quad_nodes must be at least 2"));
        }
        if let Some(stopping) = &self.stopping {
            match (stopping.radius, stopping.m_threshold) {
                (Some(_), Some(_)) => {
                    return Err(Error::config(
                        "stopping: set exactly one of radius / m_threshold, not both",
                    ))
                }
                (None, None) => {
                    return Err(Error::config(
                        "stopping: one of radius / m_threshold is required",
                    ))
                }
                _ => {}
            }
            self.cantor_params().map_err(to_config)?;
        }
        if let Some(qr) = &self.qr {
            if qr.n < 2 {
                return Err(Error::config("qr.n must be at least 2"));
            }
        }
        let s = &self.sampling;
        if !(s.y_min > 0.0 && s.y_min < s.y_max && s.y_max <= 1.0) {
            return Err(Error::config("sampling: need 0 < y_min < y_max ≤ 1"));
        }
        if !(s.h_min > 0.0 && s.h_min < s.h_max && s.h_max <= 1.0) {
            return Err(Error::config("sampling: need 0 < h_min < h_max ≤ 1"));
        }
        if let Some(floors) = &s.y_floors {
            if floors.is_empty() || floors.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::config("sampling.y_floors must be strictly decreasing"));
            }
        }
        if let Some(dir) = &s.survey_direction {
            if dir.len() != self.dim() {
                return Err(Error::config("sampling.survey_direction has wrong dimension"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lattice.root_corner.len()
    }

    pub fn build_phi(&self) -> Result<TrigPolynomial> {
        let phi = TrigPolynomial::from_json(&self.field.phi)?;
        if phi.dim() != self.dim() {
            return Err(Error::config(format!(
                "phi dimension {} does not match lattice dimension {}",
                phi.dim(),
                self.dim()
            )));
        }
        Ok(phi)
    }

    pub fn build_field(&self) -> Result<WeierstrassField> {
        WeierstrassField::new(self.build_phi()?, self.field.b, self.field.tail_tol)
    }

    pub fn root_cube(&self) -> Result<NadicCube> {
        NadicCube::root(
            self.lattice.root_corner.clone(),
            self.lattice.root_side,
            self.lattice.n,
        )
    }

    /// Stopping parameters, with M derived from R when given as a radius.
    pub fn cantor_params(&self) -> Result<CantorParams> {
        let stopping = self
            .stopping
            .as_ref()
            .ok_or_else(|| Error::config("stopping section required for this command"))?;
        let m_threshold = match (stopping.radius, stopping.m_threshold) {
            (Some(r), None) => r * stopping.theta.cos(),
            (None, Some(m)) => m,
            _ => return Err(Error::config("stopping: exactly one of radius / m_threshold")),
        };
        if !(m_threshold > 0.0) {
            return Err(Error::config("stopping threshold must be positive"));
        }
        Ok(CantorParams {
            m_threshold,
            theta: stopping.theta,
            k_generations: stopping.k_generations,
            j_max: self.lattice.j_max,
            quad_m: self.lattice.quad_nodes,
        })
    }

    /// The radius R driving the ray certificate (M / cos θ when M given).
    pub fn stopping_radius(&self) -> Result<f64> {
        let stopping = self
            .stopping
            .as_ref()
            .ok_or_else(|| Error::config("stopping section required for this command"))?;
        Ok(match (stopping.radius, stopping.m_threshold) {
            (Some(r), None) => r,
            (None, Some(m)) => m / stopping.theta.cos(),
            _ => return Err(Error::config("stopping: exactly one of radius / m_threshold")),
        })
    }

    pub fn survey_floors(&self) -> Vec<f64> {
        self.sampling
            .y_floors
            .clone()
            .unwrap_or_else(|| (5..=20).map(|j| 2.0f64.powi(-j)).collect())
    }

    /// Canonical JSON (sorted keys) of the effective config with fields that
    /// cannot affect results (location, parallelism) removed; input to the
    /// config hash.
    pub fn canonical_for_hash(&self) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self)?;
        if let Some(map) = v.as_object_mut() {
            map.remove("output_dir");
            map.remove("threads");
        }
        Ok(v)
    }
}

fn to_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}
