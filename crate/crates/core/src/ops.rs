//! Operators on multinomial opinions.
//!
//! Five operators cover the assessment pipeline: aleatory cumulative fusion
//! and its inverse (unfusion), trust discount, normal multiplication onto a
//! joint domain, and the degree-of-conflict measure.
//!
//! Fusion and unfusion are computed in evidence space: convert both operands
//! with a shared prior weight, add or subtract the evidence vectors
//! component-wise, and map back. This makes `unfuse(fuse(a, b), b) = a` an
//! identity up to rounding and pins down the dogmatic limits explicitly. The
//! direct belief-space closed forms serve as an independent cross-check in
//! the test suite.

use crate::opinion::{Opinion, OpinionError};
use crate::scalar::Scalar;

impl<S: Scalar> Opinion<S> {
    /// Aleatory cumulative fusion: combines two bodies of evidence over the
    /// same domain and base rate.
    ///
    /// Vacuous operands are identities; a dogmatic operand dominates a
    /// non-dogmatic one; two dogmatic operands blend with equal weight.
    pub fn cumulative_fuse(&self, other: &Self) -> Result<Self, OpinionError> {
        self.check_same_base_rate(other)?;
        match (self.is_dogmatic(), other.is_dogmatic()) {
            (true, true) => {
                let two = S::from_count(2);
                let belief = self
                    .belief()
                    .iter()
                    .zip(other.belief())
                    .map(|(&x, &y)| (x + y) / two)
                    .collect();
                return Ok(Self::from_parts(belief, S::zero(), self.base_rate().to_vec()));
            }
            (true, false) => return Ok(self.clone()),
            (false, true) => return Ok(other.clone()),
            (false, false) => {}
        }
        if self.is_vacuous() {
            return Ok(other.clone());
        }
        if other.is_vacuous() {
            return Ok(self.clone());
        }
        let w = S::from_count(self.len());
        let ua = self.uncertainty();
        let ub = other.uncertainty();
        let evidence: Vec<S> = self
            .belief()
            .iter()
            .zip(other.belief())
            .map(|(&ba, &bb)| w * ba / ua + w * bb / ub)
            .collect();
        let total = evidence.iter().copied().sum::<S>() + w;
        let belief = evidence.into_iter().map(|r| r / total).collect();
        Ok(Self::from_parts(belief, w / total, self.base_rate().to_vec()))
    }

    /// Cumulative unfusion: removes a known constituent from a fused
    /// opinion, the exact inverse of [`Self::cumulative_fuse`].
    ///
    /// The known operand's evidence must be contained in the fused evidence;
    /// components that go negative within tolerance are clamped to zero,
    /// anything beyond is [`OpinionError::NegativeEvidence`].
    pub fn cumulative_unfuse(&self, known: &Self) -> Result<Self, OpinionError> {
        self.check_same_base_rate(known)?;
        if self.is_dogmatic() || known.is_dogmatic() {
            return Err(OpinionError::DogmaticOpinion);
        }
        if known.is_vacuous() {
            return Ok(self.clone());
        }
        let w = S::from_count(self.len());
        let uf = self.uncertainty();
        let uk = known.uncertainty();
        let mut evidence = Vec::with_capacity(self.len());
        for (&bf, &bk) in self.belief().iter().zip(known.belief()) {
            let r = w * bf / uf - w * bk / uk;
            if r < -S::UNIT_TOL {
                return Err(OpinionError::NegativeEvidence { value: r.as_f64() });
            }
            evidence.push(r.max(S::zero()));
        }
        let total = evidence.iter().copied().sum::<S>() + w;
        let belief = evidence.into_iter().map(|r| r / total).collect();
        Ok(Self::from_parts(belief, w / total, self.base_rate().to_vec()))
    }

    /// Trust discount: scales belief mass by `p` and moves the difference
    /// into uncertainty, modeling information decay.
    pub fn trust_discount(&self, p: S) -> Result<Self, OpinionError> {
        if !(p >= S::zero() && p <= S::one()) {
            return Err(OpinionError::RangeViolation { value: p.as_f64() });
        }
        let belief: Vec<S> = self.belief().iter().map(|&b| p * b).collect();
        let scaled: S = self.belief().iter().copied().sum();
        let uncertainty = S::one() - p * scaled;
        Ok(Self::from_parts(belief, uncertainty, self.base_rate().to_vec()))
    }

    /// Normal multiplication: the joint opinion over the product domain of
    /// two independent variables, in row-major order (`self` is the major
    /// index).
    ///
    /// The joint base rate and projected probability are the outer products
    /// of the operands'; the joint uncertainty is the largest value that
    /// keeps every belief component non-negative
    /// (`u = min over states of P / a`, capped at 1).
    pub fn multiply(&self, other: &Self) -> Self {
        let px = self.project();
        let py = other.project();
        let joint = self.len() * other.len();
        let mut base_rate = Vec::with_capacity(joint);
        let mut projected = Vec::with_capacity(joint);
        for (&ax, &pxi) in self.base_rate().iter().zip(&px) {
            for (&ay, &pyj) in other.base_rate().iter().zip(&py) {
                base_rate.push(ax * ay);
                projected.push(pxi * pyj);
            }
        }
        let mut u = S::one();
        for (&p, &a) in projected.iter().zip(&base_rate) {
            if a > S::DIV_EPS {
                u = u.min(p / a);
            }
        }
        let belief = projected
            .into_iter()
            .zip(&base_rate)
            .map(|(p, &a)| (p - a * u).max(S::zero()))
            .collect();
        Self::from_parts(belief, u, base_rate)
    }

    /// Degree of conflict between two opinions on the same domain:
    /// the product of projected distance and conjunctive certainty,
    /// `DC = (1/2) sum |P_a - P_b| * (1 - u_a)(1 - u_b)`, in `[0, 1]`.
    ///
    /// A vacuous operand yields 0: total uncertainty cannot conflict.
    pub fn degree_of_conflict(&self, other: &Self) -> Result<S, OpinionError> {
        self.check_same_domain(other)?;
        let two = S::from_count(2);
        let distance = self
            .project()
            .iter()
            .zip(other.project().iter())
            .map(|(&pa, &pb)| (pa - pb).abs())
            .sum::<S>()
            / two;
        let certainty = (S::one() - self.uncertainty()) * (S::one() - other.uncertainty());
        Ok((distance * certainty).max(S::zero()).min(S::one()))
    }
}
