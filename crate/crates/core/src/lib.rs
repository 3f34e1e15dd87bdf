//! Cross-validation of multiple vehicle localization streams with
//! subjective-logic opinions.
//!
//! The crate models every per-step position update of a localization system
//! (GNSS, SLAM, odometry, ...) as an evidential opinion over a histogram
//! domain and tracks each stream with a short-term/long-term window pair.
//! Per step, every ordered pair of streams is compared by degree of
//! conflict, yielding difference and uncertainty time series that expose
//! jumps, freezes, and drifts without any ground truth.
//!
//! Module map:
//!
//! - [`opinion`] / [`ops`]: multinomial opinions, the Dirichlet evidence
//!   mapping, and the operator suite (fusion, unfusion, trust discount,
//!   multiplication, degree of conflict).
//! - [`histogram`]: displacement binning and joint input-opinion generation.
//! - [`window`]: the two-window behavior model and pairwise assessment.
//! - [`trajectory`]: CSV ingestion, resampling to a common rate, deltas.
//! - [`faults`]: deterministic freeze / jump / drift / noise injection.
//!
//! The opinion algebra is generic over the scalar type ([`scalar::Scalar`],
//! implemented for `f32` and `f64`); trajectory I/O is `f64`. The aliases
//! below pin the common instantiations.

pub mod faults;
pub mod histogram;
pub mod opinion;
pub mod ops;
pub mod scalar;
pub mod trajectory;
pub mod window;

pub use opinion::{EvidenceView, Opinion, OpinionError};
pub use scalar::Scalar;

/// `f64` opinion, the default instantiation used by the pipeline.
pub type Opinion64 = opinion::Opinion<f64>;
/// `f32` opinion.
pub type Opinion32 = opinion::Opinion<f32>;
/// `f64` evidence view.
pub type EvidenceView64 = opinion::EvidenceView<f64>;
/// `f32` evidence view.
pub type EvidenceView32 = opinion::EvidenceView<f32>;
/// `f64` domain configuration.
pub type DomainConfig64 = histogram::DomainConfig<f64>;
/// `f64` assessor parameters.
pub type AssessorParams64 = window::AssessorParams<f64>;
