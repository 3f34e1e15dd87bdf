//! Multinomial subjective opinions and their Dirichlet evidence view.
//!
//! An [`Opinion`] distributes one unit of mass over `k` domain states plus an
//! explicit uncertainty slot: `sum(belief) + uncertainty = 1`. The base rate
//! is a prior probability distribution over the same states and carries the
//! mass of the uncertainty slot when an opinion is projected to a classical
//! probability.
//!
//! Every non-dogmatic opinion is equivalent to a Dirichlet density described
//! by an evidence vector `r` and a non-informative prior weight `W`
//! ([`EvidenceView`]). The two directions of that mapping are
//! [`Opinion::from_evidence`] and [`Opinion::to_evidence`]:
//!
//! ```text
//! b(x) = r(x) / (W + sum(r))      u = W / (W + sum(r))
//! r(x) = W * b(x) / u             (undefined for u = 0)
//! ```
//!
//! Dogmatic opinions (`u = 0`) correspond to infinite evidence and are
//! refused by `to_evidence` rather than approximated.

use thiserror::Error;

use crate::scalar::Scalar;

/// Errors raised by opinion construction and the operator suite.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpinionError {
    /// Vector lengths disagree (belief vs base rate, or operand vs operand).
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    /// Domains need at least two states.
    #[error("domain has {len} states, need at least 2")]
    DomainTooSmall { len: usize },
    /// `sum(belief) + uncertainty` is not 1 within tolerance.
    #[error("belief plus uncertainty sums to {sum}, expected 1")]
    AdditivityViolation { sum: f64 },
    /// Base rate does not sum to 1 within tolerance.
    #[error("base rate sums to {sum}, expected 1")]
    BaseRateViolation { sum: f64 },
    /// A mass component lies outside `[0, 1]`.
    #[error("component {value} outside [0, 1]")]
    RangeViolation { value: f64 },
    /// Operation undefined for dogmatic opinions (infinite evidence).
    #[error("dogmatic opinion: evidence is unbounded")]
    DogmaticOpinion,
    /// Binary operators require operands sharing one base rate.
    #[error("operands carry different base rates")]
    BaseRateMismatch,
    /// Evidence subtraction went negative beyond tolerance.
    #[error("negative evidence component {value}")]
    NegativeEvidence { value: f64 },
    /// Evidence counts and prior weights must be finite.
    #[error("non-finite component {value}")]
    NonFinite { value: f64 },
    /// Prior weight must be strictly positive.
    #[error("prior weight {value} must be > 0")]
    InvalidPriorWeight { value: f64 },
}

/// A multinomial subjective opinion: belief mass per state, an explicit
/// uncertainty mass, and a base rate prior.
///
/// Construction validates the invariants (component ranges, additivity,
/// base-rate normalization) and then renormalizes exactly, so downstream
/// operators can rely on them holding to within a few ulps.
#[derive(Debug, Clone, PartialEq)]
pub struct Opinion<S> {
    belief: Vec<S>,
    uncertainty: S,
    base_rate: Vec<S>,
}

impl<S: Scalar> Opinion<S> {
    /// Validating constructor.
    pub fn new(belief: Vec<S>, uncertainty: S, base_rate: Vec<S>) -> Result<Self, OpinionError> {
        if belief.len() != base_rate.len() {
            return Err(OpinionError::DimensionMismatch {
                left: belief.len(),
                right: base_rate.len(),
            });
        }
        if belief.len() < 2 {
            return Err(OpinionError::DomainTooSmall { len: belief.len() });
        }
        for &v in belief.iter().chain(base_rate.iter()).chain([&uncertainty]) {
            if !(v >= S::zero() && v <= S::one()) {
                return Err(OpinionError::RangeViolation { value: v.as_f64() });
            }
        }
        let mass: S = belief.iter().copied().sum::<S>() + uncertainty;
        if (mass - S::one()).abs() > S::UNIT_TOL {
            return Err(OpinionError::AdditivityViolation { sum: mass.as_f64() });
        }
        let prior: S = base_rate.iter().copied().sum();
        if (prior - S::one()).abs() > S::UNIT_TOL {
            return Err(OpinionError::BaseRateViolation { sum: prior.as_f64() });
        }
        let belief = belief.into_iter().map(|b| b / mass).collect();
        let base_rate = base_rate.into_iter().map(|a| a / prior).collect();
        Ok(Self {
            belief,
            uncertainty: uncertainty / mass,
            base_rate,
        })
    }

    /// The vacuous opinion (`u = 1`): zero evidence, all mass on uncertainty.
    pub fn vacuous(base_rate: Vec<S>) -> Result<Self, OpinionError> {
        let belief = vec![S::zero(); base_rate.len()];
        Self::new(belief, S::one(), base_rate)
    }

    /// Internal constructor for operator outputs. Clamps float dust and
    /// renormalizes; assumes the shape checks already happened.
    pub(crate) fn from_parts(belief: Vec<S>, uncertainty: S, base_rate: Vec<S>) -> Self {
        debug_assert_eq!(belief.len(), base_rate.len());
        let clamp = |v: S| v.max(S::zero()).min(S::one());
        let mut belief: Vec<S> = belief.into_iter().map(clamp).collect();
        let uncertainty = clamp(uncertainty);
        let mass: S = belief.iter().copied().sum::<S>() + uncertainty;
        debug_assert!(
            (mass - S::one()).abs() <= S::UNIT_TOL,
            "operator output lost additivity: mass = {mass}"
        );
        for b in &mut belief {
            *b = *b / mass;
        }
        Self {
            belief,
            uncertainty: uncertainty / mass,
            base_rate,
        }
    }

    /// Number of domain states.
    pub fn len(&self) -> usize {
        self.belief.len()
    }

    /// True when the domain is empty (never, for validated opinions).
    pub fn is_empty(&self) -> bool {
        self.belief.is_empty()
    }

    pub fn belief(&self) -> &[S] {
        &self.belief
    }

    pub fn uncertainty(&self) -> S {
        self.uncertainty
    }

    pub fn base_rate(&self) -> &[S] {
        &self.base_rate
    }

    /// `u = 0`: total certainty, infinite evidence.
    pub fn is_dogmatic(&self) -> bool {
        self.uncertainty < S::DIV_EPS
    }

    /// `u = 1`: zero evidence.
    pub fn is_vacuous(&self) -> bool {
        self.uncertainty > S::one() - S::DIV_EPS
    }

    /// Projected probability `P(x) = b(x) + a(x) * u`.
    pub fn project(&self) -> Vec<S> {
        self.belief
            .iter()
            .zip(&self.base_rate)
            .map(|(&b, &a)| b + a * self.uncertainty)
            .collect()
    }

    /// Per-state variance of the underlying Dirichlet density:
    /// `Var(x) = P(x) (1 - P(x)) u / (W + u)`.
    pub fn variance(&self, prior_weight: S) -> Vec<S> {
        let u = self.uncertainty;
        self.project()
            .into_iter()
            .map(|p| p * (S::one() - p) * u / (prior_weight + u))
            .collect()
    }

    /// Maps a Dirichlet evidence view onto the opinion simplex.
    pub fn from_evidence(ev: &EvidenceView<S>) -> Self {
        let total: S = ev.evidence.iter().copied().sum::<S>() + ev.prior_weight;
        let belief = ev.evidence.iter().map(|&r| r / total).collect();
        Self::from_parts(belief, ev.prior_weight / total, ev.base_rate.clone())
    }

    /// Recovers the evidence vector for a non-dogmatic opinion.
    ///
    /// Fails with [`OpinionError::DogmaticOpinion`] when `u = 0`: the
    /// evidence would be infinite and is refused rather than approximated.
    pub fn to_evidence(&self, prior_weight: S) -> Result<EvidenceView<S>, OpinionError> {
        if !prior_weight.is_finite() || prior_weight <= S::zero() {
            return Err(OpinionError::InvalidPriorWeight {
                value: prior_weight.as_f64(),
            });
        }
        if self.is_dogmatic() {
            return Err(OpinionError::DogmaticOpinion);
        }
        let evidence = self
            .belief
            .iter()
            .map(|&b| prior_weight * b / self.uncertainty)
            .collect();
        Ok(EvidenceView {
            evidence,
            base_rate: self.base_rate.clone(),
            prior_weight,
        })
    }

    pub(crate) fn check_same_domain(&self, other: &Self) -> Result<(), OpinionError> {
        if self.len() != other.len() {
            return Err(OpinionError::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_base_rate(&self, other: &Self) -> Result<(), OpinionError> {
        self.check_same_domain(other)?;
        let same = self
            .base_rate
            .iter()
            .zip(&other.base_rate)
            .all(|(&a, &b)| (a - b).abs() <= S::UNIT_TOL);
        if same {
            Ok(())
        } else {
            Err(OpinionError::BaseRateMismatch)
        }
    }
}

/// Dirichlet evidence description of an opinion: accumulated observation
/// counts per state, the shared base rate, and the prior weight `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceView<S> {
    evidence: Vec<S>,
    base_rate: Vec<S>,
    prior_weight: S,
}

impl<S: Scalar> EvidenceView<S> {
    /// Validating constructor. Evidence must be finite and non-negative,
    /// the prior weight strictly positive.
    pub fn new(evidence: Vec<S>, base_rate: Vec<S>, prior_weight: S) -> Result<Self, OpinionError> {
        if evidence.len() != base_rate.len() {
            return Err(OpinionError::DimensionMismatch {
                left: evidence.len(),
                right: base_rate.len(),
            });
        }
        if evidence.len() < 2 {
            return Err(OpinionError::DomainTooSmall {
                len: evidence.len(),
            });
        }
        for &r in &evidence {
            if !r.is_finite() {
                return Err(OpinionError::NonFinite { value: r.as_f64() });
            }
            if r < S::zero() {
                return Err(OpinionError::NegativeEvidence { value: r.as_f64() });
            }
        }
        if !prior_weight.is_finite() {
            return Err(OpinionError::NonFinite {
                value: prior_weight.as_f64(),
            });
        }
        if prior_weight <= S::zero() {
            return Err(OpinionError::InvalidPriorWeight {
                value: prior_weight.as_f64(),
            });
        }
        let prior: S = base_rate.iter().copied().sum();
        if (prior - S::one()).abs() > S::UNIT_TOL {
            return Err(OpinionError::BaseRateViolation { sum: prior.as_f64() });
        }
        for &a in &base_rate {
            if !(a >= S::zero() && a <= S::one()) {
                return Err(OpinionError::RangeViolation { value: a.as_f64() });
            }
        }
        Ok(Self {
            evidence,
            base_rate,
            prior_weight,
        })
    }

    pub fn evidence(&self) -> &[S] {
        &self.evidence
    }

    pub fn base_rate(&self) -> &[S] {
        &self.base_rate
    }

    pub fn prior_weight(&self) -> S {
        self.prior_weight
    }

    /// Total evidence count.
    pub fn total(&self) -> S {
        self.evidence.iter().copied().sum()
    }
}
