//! Deterministic error injection for trajectory streams.
//!
//! Four injectors cover the canonical localization failures: holding a
//! position constant (freeze, with a snap back to the true series when the
//! span ends), an instantaneous offset (jump), a linearly accumulating
//! offset that persists after its span (drift), and seeded Gaussian
//! position noise. All injectors preserve sample count and timestamps and
//! are pure; composing them is deterministic, with application order taken
//! from the run configuration.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::trajectory::{Trajectory, TrajectoryError, TrajectoryKind};

#[derive(Debug, Error)]
pub enum FaultError {
    #[error("fault span [{from}, {to}] invalid for trajectory `{id}`")]
    OutOfRange { id: String, from: f64, to: f64 },
    #[error("fault parameter {name} = {value} must be finite")]
    NonFiniteParam { name: &'static str, value: f64 },
    #[error("{kind} fault needs an absolute trajectory, `{id}` is relative")]
    RequiresAbsolute { kind: &'static str, id: String },
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

/// One fault to inject. `t_from`/`t_to` spans are half-open `[t_from, t_to)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FaultSpec {
    /// Hold the position at `t_from` throughout the span; the original
    /// series resumes at `t_to`, producing a snap-back discontinuity.
    Freeze { t_from: f64, t_to: f64 },
    /// Offset every sample at `t >= t_at` by `(dx, dy)`.
    Jump { t_at: f64, dx: f64, dy: f64 },
    /// Offset growing at `(rate_dx, rate_dy)` meters per second over the
    /// span; the accumulated offset persists afterwards.
    Drift {
        t_from: f64,
        t_to: f64,
        rate_dx: f64,
        rate_dy: f64,
    },
    /// Independent zero-mean Gaussian offsets per in-span sample, from a
    /// ChaCha12 generator seeded with `seed`.
    Noise {
        t_from: f64,
        t_to: f64,
        sigma_x: f64,
        sigma_y: f64,
        seed: u64,
    },
}

impl FaultSpec {
    pub fn apply(&self, traj: &Trajectory) -> Result<Trajectory, FaultError> {
        match *self {
            FaultSpec::Freeze { t_from, t_to } => inject_freeze(traj, t_from, t_to),
            FaultSpec::Jump { t_at, dx, dy } => inject_jump(traj, t_at, dx, dy),
            FaultSpec::Drift {
                t_from,
                t_to,
                rate_dx,
                rate_dy,
            } => inject_drift(traj, t_from, t_to, rate_dx, rate_dy),
            FaultSpec::Noise {
                t_from,
                t_to,
                sigma_x,
                sigma_y,
                seed,
            } => inject_noise(traj, t_from, t_to, sigma_x, sigma_y, seed),
        }
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<(), FaultError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(FaultError::NonFiniteParam { name, value })
    }
}

fn require_absolute(kind: &'static str, traj: &Trajectory) -> Result<(), FaultError> {
    if traj.kind() == TrajectoryKind::Absolute {
        Ok(())
    } else {
        Err(FaultError::RequiresAbsolute {
            kind,
            id: traj.system_id().to_string(),
        })
    }
}

/// Replaces positions in `[t_from, t_to)` by the (interpolated) position at
/// `t_from`. `t_to` past the end of the trajectory freezes the whole tail.
pub fn inject_freeze(traj: &Trajectory, t_from: f64, t_to: f64) -> Result<Trajectory, FaultError> {
    require_absolute("freeze", traj)?;
    check_finite("t_from", t_from)?;
    check_finite("t_to", t_to)?;
    let (lo, hi) = traj.span();
    if t_from > t_to || t_from < lo || t_from > hi {
        return Err(FaultError::OutOfRange {
            id: traj.system_id().to_string(),
            from: t_from,
            to: t_to,
        });
    }
    let (fx, fy) = traj.position_at(t_from)?;
    let samples = traj
        .samples()
        .iter()
        .map(|&s| {
            if s.t >= t_from && s.t < t_to {
                crate::trajectory::TrajectorySample { t: s.t, x: fx, y: fy }
            } else {
                s
            }
        })
        .collect();
    Ok(traj.with_samples(samples))
}

/// Offsets all samples at `t >= t_at` by `(dx, dy)`. A jump past the last
/// sample is the identity.
pub fn inject_jump(traj: &Trajectory, t_at: f64, dx: f64, dy: f64) -> Result<Trajectory, FaultError> {
    require_absolute("jump", traj)?;
    check_finite("t_at", t_at)?;
    check_finite("dx", dx)?;
    check_finite("dy", dy)?;
    let samples = traj
        .samples()
        .iter()
        .map(|&s| {
            if s.t >= t_at {
                crate::trajectory::TrajectorySample {
                    t: s.t,
                    x: s.x + dx,
                    y: s.y + dy,
                }
            } else {
                s
            }
        })
        .collect();
    Ok(traj.with_samples(samples))
}

/// Adds an offset of `(t - t_from) * rate` within the span; samples after
/// `t_to` keep the fully accumulated offset.
pub fn inject_drift(
    traj: &Trajectory,
    t_from: f64,
    t_to: f64,
    rate_dx: f64,
    rate_dy: f64,
) -> Result<Trajectory, FaultError> {
    require_absolute("drift", traj)?;
    check_finite("t_from", t_from)?;
    check_finite("t_to", t_to)?;
    check_finite("rate_dx", rate_dx)?;
    check_finite("rate_dy", rate_dy)?;
    if t_from > t_to {
        return Err(FaultError::OutOfRange {
            id: traj.system_id().to_string(),
            from: t_from,
            to: t_to,
        });
    }
    let samples = traj
        .samples()
        .iter()
        .map(|&s| {
            if s.t < t_from {
                s
            } else {
                let dt = s.t.min(t_to) - t_from;
                crate::trajectory::TrajectorySample {
                    t: s.t,
                    x: s.x + dt * rate_dx,
                    y: s.y + dt * rate_dy,
                }
            }
        })
        .collect();
    Ok(traj.with_samples(samples))
}

/// Adds independent `N(0, sigma)` offsets per axis to every sample in
/// `[t_from, t_to)`. The generator is ChaCha12 seeded with `seed`, so equal
/// seeds give bit-identical outputs. Works for absolute and relative kinds.
pub fn inject_noise(
    traj: &Trajectory,
    t_from: f64,
    t_to: f64,
    sigma_x: f64,
    sigma_y: f64,
    seed: u64,
) -> Result<Trajectory, FaultError> {
    check_finite("t_from", t_from)?;
    check_finite("t_to", t_to)?;
    check_finite("sigma_x", sigma_x)?;
    check_finite("sigma_y", sigma_y)?;
    if t_from > t_to || sigma_x < 0.0 || sigma_y < 0.0 {
        return Err(FaultError::OutOfRange {
            id: traj.system_id().to_string(),
            from: t_from,
            to: t_to,
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let nx = Normal::new(0.0, sigma_x).expect("validated sigma");
    let ny = Normal::new(0.0, sigma_y).expect("validated sigma");
    let samples = traj
        .samples()
        .iter()
        .map(|&s| {
            if s.t >= t_from && s.t < t_to {
                let ex: f64 = nx.sample(&mut rng);
                let ey: f64 = ny.sample(&mut rng);
                crate::trajectory::TrajectorySample {
                    t: s.t,
                    x: s.x + ex,
                    y: s.y + ey,
                }
            } else {
                s
            }
        })
        .collect();
    Ok(traj.with_samples(samples))
}
