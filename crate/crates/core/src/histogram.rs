//! Histogram evidence for per-step position deltas.
//!
//! Each localization stream reports one `(dx, dy)` displacement per step.
//! A displacement is turned into evidence by dropping it into a one-hot
//! histogram per axis and reading the histogram as a Dirichlet evidence
//! vector with prior weight equal to the bin count. The two axis opinions
//! are then multiplied into a single joint opinion over `x_bins * y_bins`
//! states (x-major order).
//!
//! Bin layout: `bins` evenly spaced bins over `[min, max]` whose outer bins
//! are open-ended. Interior borders sit at `min + i * width` for
//! `i in 1..bins`, so any finite value maps to a bin and the histogram
//! length is always `bins`.

use thiserror::Error;

use crate::opinion::{EvidenceView, Opinion, OpinionError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HistogramError {
    /// Deltas fed to the binner must be finite.
    #[error("non-finite value {0}")]
    NonFiniteValue(f64),
    /// min/max/bins do not describe a usable layout.
    #[error("invalid histogram spec: {0}")]
    BadSpec(String),
    /// Base rate length or normalization is off.
    #[error("invalid base rate: {0}")]
    BadBaseRate(String),
    #[error(transparent)]
    Opinion(#[from] OpinionError),
}

/// Evenly spaced binning scheme with open-ended outer bins.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSpec<S> {
    min: S,
    max: S,
    bins: usize,
}

impl<S: Scalar> HistogramSpec<S> {
    pub fn new(min: S, max: S, bins: usize) -> Result<Self, HistogramError> {
        if !min.is_finite() || !max.is_finite() {
            return Err(HistogramError::BadSpec(format!(
                "range [{min}, {max}] must be finite"
            )));
        }
        if min >= max {
            return Err(HistogramError::BadSpec(format!(
                "min {min} must be below max {max}"
            )));
        }
        if bins < 2 {
            return Err(HistogramError::BadSpec(format!(
                "need at least 2 bins, got {bins}"
            )));
        }
        Ok(Self { min, max, bins })
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn min(&self) -> S {
        self.min
    }

    pub fn max(&self) -> S {
        self.max
    }

    /// Width of one interior bin.
    pub fn width(&self) -> S {
        (self.max - self.min) / S::from_count(self.bins)
    }

    /// Maps a finite value to its bin in `0..bins`. Values below the first
    /// interior border land in bin 0, values at or above the last interior
    /// border in bin `bins - 1`.
    pub fn bin_index(&self, value: S) -> Result<usize, HistogramError> {
        if !value.is_finite() {
            return Err(HistogramError::NonFiniteValue(value.as_f64()));
        }
        let scaled = ((value - self.min) / self.width()).floor();
        if scaled < S::zero() {
            return Ok(0);
        }
        let last = self.bins - 1;
        match scaled.to_usize() {
            Some(i) if i < last => Ok(i),
            _ => Ok(last),
        }
    }

    /// One-hot per-step histogram for a displacement. A fresh histogram is
    /// produced for every call; counts never accumulate across steps.
    pub fn one_hot(&self, delta: S) -> Result<InputHistogram<S>, HistogramError> {
        let hot = self.bin_index(delta)?;
        let mut counts = vec![S::zero(); self.bins];
        counts[hot] = S::one();
        Ok(InputHistogram { counts, hot })
    }
}

/// Single-sample histogram: exactly one bin holds a count of 1.
#[derive(Debug, Clone, PartialEq)]
pub struct InputHistogram<S> {
    counts: Vec<S>,
    hot: usize,
}

impl<S: Scalar> InputHistogram<S> {
    pub fn counts(&self) -> &[S] {
        &self.counts
    }

    /// Index of the occupied bin.
    pub fn hot_bin(&self) -> usize {
        self.hot
    }
}

/// Shared binning and base rates for one assessment run. All streams must
/// use the same domain so their joint opinions are comparable.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainConfig<S> {
    x_spec: HistogramSpec<S>,
    y_spec: HistogramSpec<S>,
    base_rate_x: Vec<S>,
    base_rate_y: Vec<S>,
}

impl<S: Scalar> DomainConfig<S> {
    /// Domain with uniform base rates on both axes.
    pub fn uniform(x_spec: HistogramSpec<S>, y_spec: HistogramSpec<S>) -> Self {
        let ax = vec![S::one() / S::from_count(x_spec.bins()); x_spec.bins()];
        let ay = vec![S::one() / S::from_count(y_spec.bins()); y_spec.bins()];
        Self {
            x_spec,
            y_spec,
            base_rate_x: ax,
            base_rate_y: ay,
        }
    }

    /// Domain with explicit per-axis base rates.
    pub fn with_base_rates(
        x_spec: HistogramSpec<S>,
        y_spec: HistogramSpec<S>,
        base_rate_x: Vec<S>,
        base_rate_y: Vec<S>,
    ) -> Result<Self, HistogramError> {
        for (name, spec, rate) in [
            ("x", &x_spec, &base_rate_x),
            ("y", &y_spec, &base_rate_y),
        ] {
            if rate.len() != spec.bins() {
                return Err(HistogramError::BadBaseRate(format!(
                    "{name} base rate has {} entries for {} bins",
                    rate.len(),
                    spec.bins()
                )));
            }
            let sum: S = rate.iter().copied().sum();
            if (sum - S::one()).abs() > S::UNIT_TOL {
                return Err(HistogramError::BadBaseRate(format!(
                    "{name} base rate sums to {sum}"
                )));
            }
        }
        Ok(Self {
            x_spec,
            y_spec,
            base_rate_x,
            base_rate_y,
        })
    }

    pub fn x_spec(&self) -> &HistogramSpec<S> {
        &self.x_spec
    }

    pub fn y_spec(&self) -> &HistogramSpec<S> {
        &self.y_spec
    }

    /// Cardinality of the joint domain.
    pub fn joint_len(&self) -> usize {
        self.x_spec.bins() * self.y_spec.bins()
    }

    /// Outer product of the axis base rates, x-major.
    pub fn joint_base_rate(&self) -> Vec<S> {
        let mut joint = Vec::with_capacity(self.joint_len());
        for &ax in &self.base_rate_x {
            for &ay in &self.base_rate_y {
                joint.push(ax * ay);
            }
        }
        joint
    }

    /// Joint input opinion for one step's displacement.
    ///
    /// Each axis histogram becomes evidence with prior weight equal to its
    /// bin count; the axis opinions are multiplied into the joint domain.
    /// The result always has `0 < u < 1` for finite inputs.
    pub fn input_opinion(&self, dx: S, dy: S) -> Result<Opinion<S>, HistogramError> {
        let hx = self.x_spec.one_hot(dx)?;
        let hy = self.y_spec.one_hot(dy)?;
        let wx = S::from_count(self.x_spec.bins());
        let wy = S::from_count(self.y_spec.bins());
        let ox = Opinion::from_evidence(&EvidenceView::new(
            hx.counts().to_vec(),
            self.base_rate_x.clone(),
            wx,
        )?);
        let oy = Opinion::from_evidence(&EvidenceView::new(
            hy.counts().to_vec(),
            self.base_rate_y.clone(),
            wy,
        )?);
        Ok(ox.multiply(&oy))
    }
}
