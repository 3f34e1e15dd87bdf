//! The assess pipeline: load, inject, resample, generate opinions, run the
//! window assessor, collect per-pair series.

use std::collections::HashMap;

use locdiag_core::trajectory::{common_window, Trajectory, TrajectoryError};
use locdiag_core::window::Assessor;
use locdiag_core::Opinion64;

use crate::config::{FaultStage, ResolvedConfig};
use crate::error::CliError;
use crate::report::{PairSeries, RunReport};

pub fn run_assess(cfg: &ResolvedConfig) -> Result<RunReport, CliError> {
    let domain = cfg.domain()?;
    let params = cfg.assessor_params()?;
    let rate = cfg.raw.rate_hz;

    let mut trajectories = Vec::with_capacity(cfg.raw.systems.len());
    for system in &cfg.raw.systems {
        let path = cfg.system_path(system);
        let mut traj = Trajectory::load(&path, system.id.clone(), system.kind.into())?;
        for fault in cfg.faults_for(system, FaultStage::Assess) {
            traj = fault.apply(&traj)?;
        }
        trajectories.push(traj);
    }

    let refs: Vec<&Trajectory> = trajectories.iter().collect();
    let (t_start, t_end) = common_window(&refs, rate).map_err(|e| match e {
        TrajectoryError::NoOverlap => {
            CliError::data("systems share no common time span at the configured rate")
        }
        other => CliError::from(other),
    })?;

    let mut delta_streams = Vec::with_capacity(trajectories.len());
    for traj in &trajectories {
        delta_streams.push(traj.resample_deltas(rate, t_start, t_end)?);
    }
    let steps = delta_streams[0].len();
    for (traj, stream) in trajectories.iter().zip(&delta_streams) {
        if stream.len() != steps {
            return Err(CliError::data(format!(
                "stream `{}` produced {} steps, expected {steps}",
                traj.system_id(),
                stream.len()
            )));
        }
    }

    let ids = cfg.system_ids();
    let mut assessor = Assessor::new(params, &ids, domain.joint_base_rate())?;
    let mut pairs: Vec<PairSeries> = Vec::new();
    for system in &ids {
        for reference in &ids {
            if system != reference {
                pairs.push(PairSeries {
                    system: system.clone(),
                    reference: reference.clone(),
                    records: Vec::with_capacity(steps),
                });
            }
        }
    }

    let mut inputs: HashMap<String, Opinion64> = HashMap::with_capacity(ids.len());
    for step in 0..steps {
        inputs.clear();
        for (id, stream) in ids.iter().zip(&delta_streams) {
            let d = stream[step];
            inputs.insert(id.clone(), domain.input_opinion(d.dx, d.dy)?);
        }
        let records = assessor.step_all(&inputs)?;
        debug_assert_eq!(records.len(), pairs.len());
        for (slot, record) in pairs.iter_mut().zip(records) {
            slot.records.push(record);
        }
    }

    Ok(RunReport {
        pairs,
        t_start,
        t_end,
        rate_hz: rate,
    })
}
