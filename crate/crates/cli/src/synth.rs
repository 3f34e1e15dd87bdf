//! Scenario synthesis: a shared ground-truth path, per-system faults, and
//! one trajectory file per system.

use std::f64::consts::PI;

use locdiag_core::trajectory::{Trajectory, TrajectoryKind, TrajectorySample};

use crate::config::{FaultStage, PathShape, ResolvedConfig, SynthSection, SystemKind};
use crate::error::CliError;
use crate::report::atomic_write;

/// Ground-truth path sampled on the run grid: `duration * rate + 1` samples
/// starting at t = 0.
pub fn ground_truth(synth: &SynthSection, rate_hz: f64) -> Result<Trajectory, CliError> {
    let steps = (synth.duration_s * rate_hz + 1e-9).floor() as usize;
    if steps < 1 {
        return Err(CliError::config(
            "synth duration shorter than one grid step",
        ));
    }
    let heading = synth.heading_deg * PI / 180.0;
    let samples = (0..=steps)
        .map(|i| {
            let t = i as f64 / rate_hz;
            let (x, y) = match synth.shape {
                PathShape::Line => (
                    synth.x0 + synth.speed_mps * t * heading.cos(),
                    synth.y0 + synth.speed_mps * t * heading.sin(),
                ),
                PathShape::Arc => {
                    let angle = synth.speed_mps * t / synth.radius_m;
                    (
                        synth.x0 + synth.radius_m * angle.sin(),
                        synth.y0 + synth.radius_m * (1.0 - angle.cos()),
                    )
                }
            };
            TrajectorySample { t, x, y }
        })
        .collect();
    Trajectory::new("truth", TrajectoryKind::Absolute, samples).map_err(CliError::from)
}

/// Writes one CSV per configured system: the shared ground truth with that
/// system's synth-stage faults applied, serialized per the system's kind.
pub fn run_synth(cfg: &ResolvedConfig) -> Result<(), CliError> {
    let synth = cfg
        .raw
        .synth
        .as_ref()
        .ok_or_else(|| CliError::config("synth requires a [synth] section"))?;
    let truth = ground_truth(synth, cfg.raw.rate_hz)?;

    for system in &cfg.raw.systems {
        let mut traj = Trajectory::new(
            system.id.clone(),
            TrajectoryKind::Absolute,
            truth.samples().to_vec(),
        )?;
        for fault in cfg.faults_for(system, FaultStage::Synth) {
            traj = fault.apply(&traj)?;
        }
        let out = match system.kind {
            SystemKind::Absolute => traj,
            SystemKind::Relative => {
                let deltas = traj.to_deltas()?;
                Trajectory::new(
                    system.id.clone(),
                    TrajectoryKind::Relative,
                    deltas
                        .into_iter()
                        .map(|d| TrajectorySample {
                            t: d.t,
                            x: d.dx,
                            y: d.dy,
                        })
                        .collect(),
                )?
            }
        };
        let path = cfg.system_path(system);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::data(format!("{}: {e}", parent.display())))?;
        }
        let mut text = String::new();
        let header = match out.kind() {
            TrajectoryKind::Absolute => "t,x,y",
            TrajectoryKind::Relative => "t,dx,dy",
        };
        text.push_str(header);
        text.push('\n');
        for s in out.samples() {
            text.push_str(&format!("{},{},{}\n", s.t, s.x, s.y));
        }
        atomic_write(&path, &text)?;
    }
    Ok(())
}
