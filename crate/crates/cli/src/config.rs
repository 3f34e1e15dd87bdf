//! Run configuration: one TOML document drives `synth`, `assess`, and
//! `plotdata`.
//!
//! Relative paths inside the config resolve against the config file's
//! directory, so a config and its data travel together. Every default is
//! materialized at load time; the manifest echoes the fully resolved
//! document, including derived noise seeds.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use locdiag_core::faults::FaultSpec;
use locdiag_core::histogram::{DomainConfig, HistogramSpec};
use locdiag_core::trajectory::TrajectoryKind;
use locdiag_core::window::AssessorParams;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Run-level seed; noise faults without an explicit seed derive theirs
    /// from it.
    #[serde(default)]
    pub seed: u64,
    /// Common assessment rate in Hz.
    #[serde(default = "defaults::rate_hz")]
    pub rate_hz: f64,
    /// Where `assess` writes pair series and the manifest.
    #[serde(default = "defaults::output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub domain: DomainSection,
    #[serde(default)]
    pub assessor: AssessorSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthSection>,
    #[serde(rename = "system")]
    pub systems: Vec<SystemSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    #[serde(default = "defaults::axis_min")]
    pub x_min: f64,
    #[serde(default = "defaults::axis_max")]
    pub x_max: f64,
    #[serde(default = "defaults::axis_bins")]
    pub x_bins: usize,
    #[serde(default = "defaults::axis_min")]
    pub y_min: f64,
    #[serde(default = "defaults::axis_max")]
    pub y_max: f64,
    #[serde(default = "defaults::axis_bins")]
    pub y_bins: usize,
    /// Per-axis base rates; uniform when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_rate_x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_rate_y: Option<Vec<f64>>,
}

impl Default for DomainSection {
    fn default() -> Self {
        Self {
            x_min: defaults::axis_min(),
            x_max: defaults::axis_max(),
            x_bins: defaults::axis_bins(),
            y_min: defaults::axis_min(),
            y_max: defaults::axis_max(),
            y_bins: defaults::axis_bins(),
            base_rate_x: None,
            base_rate_y: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessorSection {
    #[serde(default = "defaults::st_length")]
    pub st_length: usize,
    #[serde(default = "defaults::trust_discount")]
    pub trust_discount: f64,
    #[serde(default = "defaults::gate_threshold")]
    pub gate_threshold: f64,
    #[serde(default = "defaults::event_threshold")]
    pub event_threshold: f64,
}

impl Default for AssessorSection {
    fn default() -> Self {
        Self {
            st_length: defaults::st_length(),
            trust_discount: defaults::trust_discount(),
            gate_threshold: defaults::gate_threshold(),
            event_threshold: defaults::event_threshold(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSection {
    pub duration_s: f64,
    #[serde(default)]
    pub shape: PathShape,
    #[serde(default = "defaults::speed_mps")]
    pub speed_mps: f64,
    #[serde(default)]
    pub heading_deg: f64,
    #[serde(default = "defaults::radius_m")]
    pub radius_m: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathShape {
    #[default]
    Line,
    Arc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Absolute,
    Relative,
}

impl From<SystemKind> for TrajectoryKind {
    fn from(kind: SystemKind) -> Self {
        match kind {
            SystemKind::Absolute => TrajectoryKind::Absolute,
            SystemKind::Relative => TrajectoryKind::Relative,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub id: String,
    /// Input file for `assess`, output file for `synth`.
    pub path: PathBuf,
    pub kind: SystemKind,
    #[serde(default, rename = "fault", skip_serializing_if = "Vec::is_empty")]
    pub faults: Vec<FaultSection>,
}

/// Which pipeline stage applies a fault. Exactly one stage applies each
/// fault: `synth` bakes it into the written file, `assess` (the default)
/// injects it after loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultStage {
    Synth,
    #[default]
    Assess,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FaultSection {
    Freeze {
        t_from: f64,
        t_to: f64,
        #[serde(default)]
        stage: FaultStage,
    },
    Jump {
        t_at: f64,
        dx: f64,
        dy: f64,
        #[serde(default)]
        stage: FaultStage,
    },
    Drift {
        t_from: f64,
        t_to: f64,
        rate_dx: f64,
        rate_dy: f64,
        #[serde(default)]
        stage: FaultStage,
    },
    Noise {
        t_from: f64,
        t_to: f64,
        sigma_x: f64,
        sigma_y: f64,
        /// Derived from the run seed when omitted.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default)]
        stage: FaultStage,
    },
}

impl FaultSection {
    pub fn stage(&self) -> FaultStage {
        match *self {
            FaultSection::Freeze { stage, .. }
            | FaultSection::Jump { stage, .. }
            | FaultSection::Drift { stage, .. }
            | FaultSection::Noise { stage, .. } => stage,
        }
    }

    fn to_spec(&self) -> FaultSpec {
        match *self {
            FaultSection::Freeze { t_from, t_to, .. } => FaultSpec::Freeze { t_from, t_to },
            FaultSection::Jump { t_at, dx, dy, .. } => FaultSpec::Jump { t_at, dx, dy },
            FaultSection::Drift {
                t_from,
                t_to,
                rate_dx,
                rate_dy,
                ..
            } => FaultSpec::Drift {
                t_from,
                t_to,
                rate_dx,
                rate_dy,
            },
            FaultSection::Noise {
                t_from,
                t_to,
                sigma_x,
                sigma_y,
                seed,
                ..
            } => FaultSpec::Noise {
                t_from,
                t_to,
                sigma_x,
                sigma_y,
                seed: seed.expect("noise seeds resolved at load time"),
            },
        }
    }
}

mod defaults {
    use std::path::PathBuf;

    pub fn rate_hz() -> f64 {
        10.0
    }
    pub fn output_dir() -> PathBuf {
        PathBuf::from("out")
    }
    pub fn axis_min() -> f64 {
        -5.0
    }
    pub fn axis_max() -> f64 {
        5.0
    }
    pub fn axis_bins() -> usize {
        10
    }
    pub fn st_length() -> usize {
        10
    }
    pub fn trust_discount() -> f64 {
        0.99
    }
    pub fn gate_threshold() -> f64 {
        0.5
    }
    pub fn event_threshold() -> f64 {
        0.5
    }
    pub fn speed_mps() -> f64 {
        10.0
    }
    pub fn radius_m() -> f64 {
        100.0
    }
}

/// A loaded, validated config with every default and derived value
/// materialized.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub raw: RunConfig,
    pub config_path: PathBuf,
    config_dir: PathBuf,
    output_dir: PathBuf,
}

impl ResolvedConfig {
    pub fn load(
        path: &Path,
        seed_override: Option<u64>,
        out_override: Option<&Path>,
    ) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let mut raw: RunConfig = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;

        if let Some(seed) = seed_override {
            raw.seed = seed;
        }
        resolve_noise_seeds(&mut raw);
        validate(&raw)?;

        let config_dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        let output_dir = match out_override {
            Some(dir) => dir.to_path_buf(),
            None => resolve_against(&config_dir, &raw.output_dir),
        };
        Ok(Self {
            raw,
            config_path: path.to_path_buf(),
            config_dir,
            output_dir,
        })
    }

    pub fn output_dir(&self) -> &Path {
        &self.output_dir
    }

    /// A system's data path, resolved against the config directory.
    pub fn system_path(&self, system: &SystemSection) -> PathBuf {
        resolve_against(&self.config_dir, &system.path)
    }

    pub fn domain(&self) -> Result<DomainConfig<f64>, CliError> {
        let d = &self.raw.domain;
        let x = HistogramSpec::new(d.x_min, d.x_max, d.x_bins)
            .map_err(|e| CliError::config(format!("domain x axis: {e}")))?;
        let y = HistogramSpec::new(d.y_min, d.y_max, d.y_bins)
            .map_err(|e| CliError::config(format!("domain y axis: {e}")))?;
        match (&d.base_rate_x, &d.base_rate_y) {
            (None, None) => Ok(DomainConfig::uniform(x, y)),
            (bx, by) => {
                let uniform = |n: usize| vec![1.0 / n as f64; n];
                let bx = bx.clone().unwrap_or_else(|| uniform(d.x_bins));
                let by = by.clone().unwrap_or_else(|| uniform(d.y_bins));
                DomainConfig::with_base_rates(x, y, bx, by)
                    .map_err(|e| CliError::config(format!("domain base rates: {e}")))
            }
        }
    }

    pub fn assessor_params(&self) -> Result<AssessorParams<f64>, CliError> {
        let a = &self.raw.assessor;
        AssessorParams::new(
            a.st_length,
            a.trust_discount,
            a.gate_threshold,
            a.event_threshold,
        )
        .map_err(|e| CliError::config(format!("assessor: {e}")))
    }

    /// Fault specs for one system, filtered to the given stage, in config
    /// order.
    pub fn faults_for(&self, system: &SystemSection, stage: FaultStage) -> Vec<FaultSpec> {
        system
            .faults
            .iter()
            .filter(|f| f.stage() == stage)
            .map(FaultSection::to_spec)
            .collect()
    }

    pub fn system_ids(&self) -> Vec<String> {
        self.raw.systems.iter().map(|s| s.id.clone()).collect()
    }
}

fn resolve_against(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

/// Deterministic per-fault seed for noise entries without an explicit one:
/// splitmix64 over the run seed and the (system, fault) position.
fn derive_seed(run_seed: u64, system_idx: usize, fault_idx: usize) -> u64 {
    let key = ((system_idx as u64 + 1) << 16) | (fault_idx as u64 + 1);
    let mut z = run_seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(key));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn resolve_noise_seeds(raw: &mut RunConfig) {
    let run_seed = raw.seed;
    for (si, system) in raw.systems.iter_mut().enumerate() {
        for (fi, fault) in system.faults.iter_mut().enumerate() {
            if let FaultSection::Noise { seed, .. } = fault {
                if seed.is_none() {
                    *seed = Some(derive_seed(run_seed, si, fi));
                }
            }
        }
    }
}

fn validate(raw: &RunConfig) -> Result<(), CliError> {
    if raw.systems.len() < 2 {
        return Err(CliError::config(format!(
            "need at least 2 systems, got {}",
            raw.systems.len()
        )));
    }
    if !raw.rate_hz.is_finite() || raw.rate_hz <= 0.0 {
        return Err(CliError::config(format!(
            "rate_hz = {} must be positive",
            raw.rate_hz
        )));
    }
    for system in &raw.systems {
        if system.id.is_empty()
            || !system
                .id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(CliError::config(format!(
                "system id `{}` must be non-empty [A-Za-z0-9_-]",
                system.id
            )));
        }
    }
    for (i, a) in raw.systems.iter().enumerate() {
        for b in &raw.systems[i + 1..] {
            if a.id == b.id {
                return Err(CliError::config(format!("duplicate system id `{}`", a.id)));
            }
        }
    }
    if let Some(synth) = &raw.synth {
        if !synth.duration_s.is_finite() || synth.duration_s <= 0.0 {
            return Err(CliError::config(format!(
                "synth duration_s = {} must be positive",
                synth.duration_s
            )));
        }
        if synth.shape == PathShape::Arc
            && (!synth.radius_m.is_finite() || synth.radius_m == 0.0)
        {
            return Err(CliError::config("arc radius_m must be nonzero"));
        }
    }
    Ok(())
}
