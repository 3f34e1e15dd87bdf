//! Trajectory ingestion, resampling, and per-step displacement extraction.
//!
//! Input files are UTF-8 CSV with a `.` decimal separator and `#` comment
//! lines. Absolute trajectories carry the header `t,x,y` (seconds, meters);
//! relative trajectories carry `t,dx,dy`, where each row is the displacement
//! over the interval ending at `t`. Whether a file is absolute or relative
//! is declared by the caller (run configuration), not inside the file.
//!
//! All streams of a run are brought onto one time grid: multiples of
//! `1/rate_hz` anchored at t = 0, clipped inward to the intersection of the
//! streams' spans. Absolute trajectories are resampled by linear
//! interpolation and then differenced; relative trajectories are re-binned
//! by summing source displacements per output interval (a passthrough when
//! the rates already match).

use std::fmt;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error("{path}:{row}: {msg}")]
    ParseError {
        path: String,
        row: u64,
        msg: String,
    },
    #[error("{path}:{row}: timestamp {t} does not increase")]
    NonMonotonicTime { path: String, row: u64, t: f64 },
    #[error("trajectory `{id}` has {got} samples, need at least {need}")]
    TooFewSamples { id: String, got: usize, need: usize },
    #[error("requested span [{lo}, {hi}] outside trajectory `{id}`")]
    OutOfRange { id: String, lo: f64, hi: f64 },
    #[error("trajectory `{id}` is relative; resample deltas instead of positions")]
    RelativeKindUnsupported { id: String },
    #[error("streams share no common time span")]
    NoOverlap,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Whether samples are absolute positions or per-interval displacements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    Absolute,
    Relative,
}

impl fmt::Display for TrajectoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryKind::Absolute => f.write_str("absolute"),
            TrajectoryKind::Relative => f.write_str("relative"),
        }
    }
}

impl TrajectoryKind {
    fn header(self) -> &'static str {
        match self {
            TrajectoryKind::Absolute => "t,x,y",
            TrajectoryKind::Relative => "t,dx,dy",
        }
    }
}

/// One timestamped sample; meaning of `x`/`y` depends on the kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// One per-step displacement, reported at the end of its interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSample {
    pub t: f64,
    pub dx: f64,
    pub dy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    system_id: String,
    kind: TrajectoryKind,
    samples: Vec<TrajectorySample>,
}

impl Trajectory {
    /// Builds a trajectory from samples, validating monotonic timestamps
    /// and finite values.
    pub fn new(
        system_id: impl Into<String>,
        kind: TrajectoryKind,
        samples: Vec<TrajectorySample>,
    ) -> Result<Self, TrajectoryError> {
        let system_id = system_id.into();
        if samples.len() < 2 {
            return Err(TrajectoryError::TooFewSamples {
                id: system_id,
                got: samples.len(),
                need: 2,
            });
        }
        for (i, s) in samples.iter().enumerate() {
            if !(s.t.is_finite() && s.x.is_finite() && s.y.is_finite()) {
                return Err(TrajectoryError::ParseError {
                    path: system_id,
                    row: i as u64 + 1,
                    msg: "non-finite sample".into(),
                });
            }
            if i > 0 && s.t <= samples[i - 1].t {
                return Err(TrajectoryError::NonMonotonicTime {
                    path: system_id,
                    row: i as u64 + 1,
                    t: s.t,
                });
            }
        }
        Ok(Self {
            system_id,
            kind,
            samples,
        })
    }

    /// Loads a trajectory from a CSV file per the contract above.
    pub fn load(
        path: &Path,
        system_id: impl Into<String>,
        kind: TrajectoryKind,
    ) -> Result<Self, TrajectoryError> {
        let display = path.display().to_string();
        let io_err = |source| TrajectoryError::Io {
            path: display.clone(),
            source,
        };
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(io) => io_err(io),
                other => TrajectoryError::ParseError {
                    path: display.clone(),
                    row: 0,
                    msg: format!("{other:?}"),
                },
            })?;

        let headers = reader
            .headers()
            .map_err(|e| TrajectoryError::ParseError {
                path: display.clone(),
                row: 1,
                msg: e.to_string(),
            })?
            .clone();
        let got = headers.iter().collect::<Vec<_>>().join(",");
        if got != kind.header() {
            return Err(TrajectoryError::ParseError {
                path: display,
                row: 1,
                msg: format!("header `{got}`, expected `{}`", kind.header()),
            });
        }

        let system_id = system_id.into();
        let mut samples = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| TrajectoryError::ParseError {
                path: display.clone(),
                row: e.position().map_or(0, |p| p.line()),
                msg: e.to_string(),
            })?;
            let row = record.position().map_or(0, |p| p.line());
            let parse = |idx: usize, name: &str| -> Result<f64, TrajectoryError> {
                let field = record.get(idx).ok_or_else(|| TrajectoryError::ParseError {
                    path: display.clone(),
                    row,
                    msg: format!("missing column `{name}`"),
                })?;
                field.parse::<f64>().map_err(|_| TrajectoryError::ParseError {
                    path: display.clone(),
                    row,
                    msg: format!("bad {name} value `{field}`"),
                })
            };
            if record.len() != 3 {
                return Err(TrajectoryError::ParseError {
                    path: display,
                    row,
                    msg: format!("expected 3 columns, got {}", record.len()),
                });
            }
            let t = parse(0, "t")?;
            let x = parse(1, "x")?;
            let y = parse(2, "y")?;
            if !(t.is_finite() && x.is_finite() && y.is_finite()) {
                return Err(TrajectoryError::ParseError {
                    path: display,
                    row,
                    msg: "non-finite value".into(),
                });
            }
            if let Some(prev) = samples.last() {
                let prev: &TrajectorySample = prev;
                if t <= prev.t {
                    return Err(TrajectoryError::NonMonotonicTime {
                        path: display,
                        row,
                        t,
                    });
                }
            }
            samples.push(TrajectorySample { t, x, y });
        }
        if samples.len() < 2 {
            return Err(TrajectoryError::TooFewSamples {
                id: system_id,
                got: samples.len(),
                need: 2,
            });
        }
        Ok(Self {
            system_id,
            kind,
            samples,
        })
    }

    /// Writes the trajectory back out per the CSV contract. Floats use
    /// Rust's shortest round-trip formatting, so load(save(t)) == t.
    pub fn save(&self, path: &Path) -> Result<(), TrajectoryError> {
        let mut out = String::new();
        out.push_str(self.kind.header());
        out.push('\n');
        for s in &self.samples {
            out.push_str(&format!("{},{},{}\n", s.t, s.x, s.y));
        }
        std::fs::write(path, out).map_err(|source| TrajectoryError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn system_id(&self) -> &str {
        &self.system_id
    }

    pub fn kind(&self) -> TrajectoryKind {
        self.kind
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    /// Covered time span. A relative sample at `t` describes the interval
    /// *ending* at `t`, so a relative trajectory's coverage starts one
    /// source interval before its first sample (inferred from the spacing
    /// of the first two samples).
    pub fn span(&self) -> (f64, f64) {
        let first = self.samples.first().map(|s| s.t).unwrap_or(0.0);
        let last = self.samples.last().map(|s| s.t).unwrap_or(0.0);
        match self.kind {
            TrajectoryKind::Absolute => (first, last),
            TrajectoryKind::Relative => {
                let lead = if self.samples.len() >= 2 {
                    self.samples[1].t - self.samples[0].t
                } else {
                    0.0
                };
                (first - lead, last)
            }
        }
    }

    pub(crate) fn with_samples(&self, samples: Vec<TrajectorySample>) -> Self {
        Self {
            system_id: self.system_id.clone(),
            kind: self.kind,
            samples,
        }
    }

    /// Linearly interpolated position at time `t` (absolute kind only).
    pub fn position_at(&self, t: f64) -> Result<(f64, f64), TrajectoryError> {
        if self.kind != TrajectoryKind::Absolute {
            return Err(TrajectoryError::RelativeKindUnsupported {
                id: self.system_id.clone(),
            });
        }
        let (lo, hi) = self.span();
        if t < lo || t > hi {
            return Err(TrajectoryError::OutOfRange {
                id: self.system_id.clone(),
                lo: t,
                hi: t,
            });
        }
        let idx = self.samples.partition_point(|s| s.t <= t);
        if idx == 0 {
            let s = self.samples[0];
            return Ok((s.x, s.y));
        }
        let left = self.samples[idx - 1];
        if left.t == t || idx == self.samples.len() {
            return Ok((left.x, left.y));
        }
        let right = self.samples[idx];
        let w = (t - left.t) / (right.t - left.t);
        Ok((left.x + w * (right.x - left.x), left.y + w * (right.y - left.y)))
    }

    /// Resamples an absolute trajectory onto `t_start + i / rate_hz`
    /// within `[t_start, t_end]`, interpolating linearly. Interpolation at
    /// source knots reproduces the source samples exactly.
    pub fn resample(
        &self,
        rate_hz: f64,
        t_start: f64,
        t_end: f64,
    ) -> Result<Trajectory, TrajectoryError> {
        if self.kind != TrajectoryKind::Absolute {
            return Err(TrajectoryError::RelativeKindUnsupported {
                id: self.system_id.clone(),
            });
        }
        let (lo, hi) = self.span();
        if t_start < lo - 1e-9 || t_end > hi + 1e-9 || t_start >= t_end {
            return Err(TrajectoryError::OutOfRange {
                id: self.system_id.clone(),
                lo: t_start,
                hi: t_end,
            });
        }
        let steps = grid_steps(t_start, t_end, rate_hz);
        let mut samples = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let t = (t_start + i as f64 / rate_hz).min(hi).max(lo);
            let (x, y) = self.position_at(t)?;
            samples.push(TrajectorySample { t, x, y });
        }
        Trajectory::new(self.system_id.clone(), TrajectoryKind::Absolute, samples)
    }

    /// Per-step displacements. Absolute: successive differences, reported
    /// at the later timestamp. Relative: the samples as they are.
    pub fn to_deltas(&self) -> Result<Vec<DeltaSample>, TrajectoryError> {
        if self.samples.len() < 2 {
            return Err(TrajectoryError::TooFewSamples {
                id: self.system_id.clone(),
                got: self.samples.len(),
                need: 2,
            });
        }
        match self.kind {
            TrajectoryKind::Absolute => Ok(self
                .samples
                .windows(2)
                .map(|w| DeltaSample {
                    t: w[1].t,
                    dx: w[1].x - w[0].x,
                    dy: w[1].y - w[0].y,
                })
                .collect()),
            TrajectoryKind::Relative => Ok(self
                .samples
                .iter()
                .map(|s| DeltaSample {
                    t: s.t,
                    dx: s.x,
                    dy: s.y,
                })
                .collect()),
        }
    }

    /// Displacements on the common grid over `[t_start, t_end]`.
    ///
    /// Absolute trajectories are resampled and differenced. Relative
    /// trajectories sum their source displacements per output interval
    /// `(t_{i-1}, t_i]`; with matching, aligned rates this is a
    /// passthrough. Either way the result has one entry per grid step.
    pub fn resample_deltas(
        &self,
        rate_hz: f64,
        t_start: f64,
        t_end: f64,
    ) -> Result<Vec<DeltaSample>, TrajectoryError> {
        match self.kind {
            TrajectoryKind::Absolute => self.resample(rate_hz, t_start, t_end)?.to_deltas(),
            TrajectoryKind::Relative => {
                let steps = grid_steps(t_start, t_end, rate_hz);
                if steps == 0 {
                    return Err(TrajectoryError::OutOfRange {
                        id: self.system_id.clone(),
                        lo: t_start,
                        hi: t_end,
                    });
                }
                let boundary_eps = 1e-6 / rate_hz;
                let mut out = Vec::with_capacity(steps);
                let mut cursor = self
                    .samples
                    .partition_point(|s| s.t <= t_start + boundary_eps);
                for i in 1..=steps {
                    let t_hi = t_start + i as f64 / rate_hz;
                    let mut dx = 0.0;
                    let mut dy = 0.0;
                    while cursor < self.samples.len()
                        && self.samples[cursor].t <= t_hi + boundary_eps
                    {
                        dx += self.samples[cursor].x;
                        dy += self.samples[cursor].y;
                        cursor += 1;
                    }
                    out.push(DeltaSample { t: t_hi, dx, dy });
                }
                Ok(out)
            }
        }
    }
}

/// Number of whole grid steps between `t_start` and `t_end` at `rate_hz`.
fn grid_steps(t_start: f64, t_end: f64, rate_hz: f64) -> usize {
    (((t_end - t_start) * rate_hz) + 1e-9).floor() as usize
}

/// Common assessment window for a set of streams: the intersection of all
/// spans, rounded inward onto the grid of multiples of `1/rate_hz`.
pub fn common_window(
    trajectories: &[&Trajectory],
    rate_hz: f64,
) -> Result<(f64, f64), TrajectoryError> {
    if trajectories.is_empty() {
        return Err(TrajectoryError::NoOverlap);
    }
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for t in trajectories {
        let (a, b) = t.span();
        lo = lo.max(a);
        hi = hi.min(b);
    }
    let t_start = (lo * rate_hz - 1e-9).ceil() / rate_hz;
    let t_end = (hi * rate_hz + 1e-9).floor() / rate_hz;
    if !(t_start.is_finite() && t_end.is_finite()) || t_end - t_start < 1.0 / rate_hz - 1e-9 {
        return Err(TrajectoryError::NoOverlap);
    }
    Ok((t_start, t_end))
}
