//! Two-window behavior tracking and pairwise cross-validation.
//!
//! Each localization stream owns a [`WindowState`]: a short-term (ST) window
//! holding the last `st_length` input opinions as one fused opinion, and a
//! long-term (LT) window that accumulates opinions evicted from the ST side
//! under a per-step trust discount. An opinion evicted `x` steps ago thus
//! contributes belief scaled by `p_td^x`.
//!
//! Per step, the ST update is
//!
//! ```text
//! st' = st (+) input                     while the window is filling
//! st' = (st (+) input) (-) oldest        once it holds st_length entries
//! ```
//!
//! and on eviction `lt' = TD(lt, p_td) (+) oldest`. The emitted behavior
//! opinion is the ST window alone when ST and LT conflict beyond the gate
//! threshold (a sudden change should not be smoothed away), otherwise the
//! fusion of both.
//!
//! [`Assessor`] runs one window per stream and, per step, compares every
//! ordered pair of behavior opinions via degree of conflict.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::opinion::{Opinion, OpinionError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssessError {
    /// Input opinion does not live on the state's joint domain.
    #[error("opinion domain mismatch: {detail}")]
    DomainMismatch { detail: String },
    /// A configured system has no input this step.
    #[error("no input opinion for system `{0}` this step")]
    MissingSystem(String),
    /// Parameter outside its documented range.
    #[error("invalid assessor parameter: {0}")]
    InvalidParams(String),
    /// Window bookkeeping failed; NegativeEvidence here means the
    /// fuse/unfuse ledger was corrupted and the run must not continue.
    #[error("window bookkeeping error: {0}")]
    Window(#[from] OpinionError),
}

/// Tuning for the two-window scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssessorParams<S> {
    st_length: usize,
    trust_discount_p: S,
    gate_threshold: S,
    event_threshold: S,
}

impl<S: Scalar> AssessorParams<S> {
    pub fn new(
        st_length: usize,
        trust_discount_p: S,
        gate_threshold: S,
        event_threshold: S,
    ) -> Result<Self, AssessError> {
        if st_length < 1 {
            return Err(AssessError::InvalidParams("st_length must be >= 1".into()));
        }
        let unit = |name: &str, v: S| {
            if v >= S::zero() && v <= S::one() {
                Ok(())
            } else {
                Err(AssessError::InvalidParams(format!(
                    "{name} = {v} outside [0, 1]"
                )))
            }
        };
        unit("trust_discount_p", trust_discount_p)?;
        unit("gate_threshold", gate_threshold)?;
        unit("event_threshold", event_threshold)?;
        Ok(Self {
            st_length,
            trust_discount_p,
            gate_threshold,
            event_threshold,
        })
    }

    pub fn st_length(&self) -> usize {
        self.st_length
    }

    pub fn trust_discount_p(&self) -> S {
        self.trust_discount_p
    }

    pub fn gate_threshold(&self) -> S {
        self.gate_threshold
    }

    pub fn event_threshold(&self) -> S {
        self.event_threshold
    }
}

/// ST/LT window pair for a single stream. Updates must arrive in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowState<S> {
    st_opinion: Opinion<S>,
    st_queue: VecDeque<Opinion<S>>,
    lt_opinion: Opinion<S>,
}

impl<S: Scalar> WindowState<S> {
    /// Fresh state on a joint domain: both windows vacuous.
    pub fn new(joint_base_rate: Vec<S>) -> Result<Self, OpinionError> {
        let vacuous = Opinion::vacuous(joint_base_rate)?;
        Ok(Self {
            st_opinion: vacuous.clone(),
            st_queue: VecDeque::new(),
            lt_opinion: vacuous,
        })
    }

    pub fn st_opinion(&self) -> &Opinion<S> {
        &self.st_opinion
    }

    pub fn lt_opinion(&self) -> &Opinion<S> {
        &self.lt_opinion
    }

    /// Number of input opinions currently fused into the ST window.
    pub fn st_count(&self) -> usize {
        self.st_queue.len()
    }

    /// The raw inputs inside the ST window, oldest first.
    pub fn st_queue(&self) -> impl Iterator<Item = &Opinion<S>> {
        self.st_queue.iter()
    }

    /// Feeds one input opinion and returns the behavior opinion for this
    /// step. The LT window only changes on steps that evict an element.
    pub fn update(
        &mut self,
        input: &Opinion<S>,
        params: &AssessorParams<S>,
    ) -> Result<Opinion<S>, AssessError> {
        if input.len() != self.st_opinion.len() {
            return Err(AssessError::DomainMismatch {
                detail: format!(
                    "input has {} states, window domain has {}",
                    input.len(),
                    self.st_opinion.len()
                ),
            });
        }
        if input.check_same_base_rate(&self.st_opinion).is_err() {
            return Err(AssessError::DomainMismatch {
                detail: "input base rate differs from window domain".into(),
            });
        }

        if self.st_queue.len() < params.st_length {
            self.st_opinion = self.st_opinion.cumulative_fuse(input)?;
            self.st_queue.push_back(input.clone());
        } else {
            let oldest = self.st_queue.pop_front().expect("full queue");
            let fused = self.st_opinion.cumulative_fuse(input)?;
            self.st_opinion = fused.cumulative_unfuse(&oldest)?;
            self.st_queue.push_back(input.clone());
            let decayed = self.lt_opinion.trust_discount(params.trust_discount_p)?;
            self.lt_opinion = decayed.cumulative_fuse(&oldest)?;
        }

        let dc = self.st_opinion.degree_of_conflict(&self.lt_opinion)?;
        let behavior = if dc > params.gate_threshold {
            self.st_opinion.clone()
        } else {
            self.st_opinion.cumulative_fuse(&self.lt_opinion)?
        };
        Ok(behavior)
    }
}

/// Pairwise comparison of two behavior opinions: the degree of conflict and
/// the assessed system's own uncertainty. The conflict value is symmetric;
/// the attached uncertainty (and hence the directed record) is not.
pub fn compare<S: Scalar>(
    behavior: &Opinion<S>,
    reference: &Opinion<S>,
) -> Result<(S, S), AssessError> {
    let delta = behavior
        .degree_of_conflict(reference)
        .map_err(|e| match e {
            OpinionError::DimensionMismatch { left, right } => AssessError::DomainMismatch {
                detail: format!("behavior has {left} states, reference has {right}"),
            },
            other => AssessError::Window(other),
        })?;
    Ok((delta, behavior.uncertainty()))
}

/// One cross-validation data point: system `system` assessed against
/// `reference` at step `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentRecord<S> {
    pub t: u64,
    pub system: String,
    pub reference: String,
    pub delta: S,
    pub uncertainty: S,
    pub flagged: bool,
}

/// Runs the window scheme for several streams and cross-validates every
/// ordered pair each step. Systems keep their configured order, so record
/// sequences are deterministic.
#[derive(Debug, Clone)]
pub struct Assessor<S> {
    params: AssessorParams<S>,
    systems: Vec<(String, WindowState<S>)>,
    step: u64,
}

impl<S: Scalar> Assessor<S> {
    pub fn new(
        params: AssessorParams<S>,
        system_ids: &[String],
        joint_base_rate: Vec<S>,
    ) -> Result<Self, AssessError> {
        if system_ids.len() < 2 {
            return Err(AssessError::InvalidParams(
                "cross-validation needs at least 2 systems".into(),
            ));
        }
        let mut systems = Vec::with_capacity(system_ids.len());
        for id in system_ids {
            if systems.iter().any(|(other, _)| other == id) {
                return Err(AssessError::InvalidParams(format!(
                    "duplicate system id `{id}`"
                )));
            }
            systems.push((id.clone(), WindowState::new(joint_base_rate.clone())?));
        }
        Ok(Self {
            params,
            systems,
            step: 1,
        })
    }

    pub fn params(&self) -> &AssessorParams<S> {
        &self.params
    }

    pub fn system_ids(&self) -> impl Iterator<Item = &str> {
        self.systems.iter().map(|(id, _)| id.as_str())
    }

    /// Number of ordered pairs emitted per step.
    pub fn pair_count(&self) -> usize {
        self.systems.len() * (self.systems.len() - 1)
    }

    pub fn window(&self, id: &str) -> Option<&WindowState<S>> {
        self.systems
            .iter()
            .find(|(sid, _)| sid == id)
            .map(|(_, w)| w)
    }

    /// Advances every window by one step and emits one record per ordered
    /// pair `(system, reference)`.
    pub fn step_all(
        &mut self,
        inputs: &HashMap<String, Opinion<S>>,
    ) -> Result<Vec<AssessmentRecord<S>>, AssessError> {
        let mut behaviors = Vec::with_capacity(self.systems.len());
        for (id, state) in &mut self.systems {
            let input = inputs
                .get(id.as_str())
                .ok_or_else(|| AssessError::MissingSystem(id.clone()))?;
            behaviors.push(state.update(input, &self.params)?);
        }

        let mut records = Vec::with_capacity(self.pair_count());
        for (i, (sys, _)) in self.systems.iter().enumerate() {
            for (j, (reference, _)) in self.systems.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (delta, uncertainty) = compare(&behaviors[i], &behaviors[j])?;
                records.push(AssessmentRecord {
                    t: self.step,
                    system: sys.clone(),
                    reference: reference.clone(),
                    delta,
                    uncertainty,
                    flagged: delta > self.params.event_threshold,
                });
            }
        }
        self.step += 1;
        Ok(records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opinion::EvidenceView;

    type Op = Opinion<f64>;

    fn params(st_length: usize, p: f64, gate: f64, event: f64) -> AssessorParams<f64> {
        AssessorParams::new(st_length, p, gate, event).unwrap()
    }

    fn uniform(k: usize) -> Vec<f64> {
        vec![1.0 / k as f64; k]
    }

    fn op_from(r: &[f64]) -> Op {
        let w = r.len() as f64;
        Op::from_evidence(&EvidenceView::new(r.to_vec(), uniform(r.len()), w).unwrap())
    }

    #[test]
    fn params_validation() {
        assert!(AssessorParams::new(0, 0.5, 0.5, 0.5).is_err());
        assert!(AssessorParams::new(1, 1.5, 0.5, 0.5).is_err());
        assert!(AssessorParams::new(1, 0.5, -0.1, 0.5).is_err());
        assert!(AssessorParams::new(1, 0.5, 0.5, 2.0).is_err());
    }

    #[test]
    fn first_update_passes_input_through() {
        let p = params(10, 0.99, 0.5, 0.5);
        let mut state = WindowState::new(uniform(4)).unwrap();
        let input = op_from(&[1.0, 0.0, 0.0, 0.0]);
        let behavior = state.update(&input, &p).unwrap();
        // LT untouched, gate closed (DC with vacuous LT = 0), so the
        // behavior is st (+) vacuous = input.
        assert!(state.lt_opinion().is_vacuous());
        assert_eq!(state.st_count(), 1);
        assert_eq!(behavior, input);
        assert_eq!(state.st_opinion(), &input);
    }

    #[test]
    fn eviction_moves_oldest_into_lt() {
        // st_length = 1: the second update evicts A into LT and leaves B in ST.
        let p = params(1, 0.9, 1.0, 0.5);
        let mut state = WindowState::new(uniform(4)).unwrap();
        let a = op_from(&[1.0, 0.0, 0.0, 0.0]);
        let b = op_from(&[0.0, 1.0, 0.0, 0.0]);
        state.update(&a, &p).unwrap();
        state.update(&b, &p).unwrap();

        for (got, want) in state.st_opinion().belief().iter().zip(b.belief()) {
            assert!((got - want).abs() < 1e-12);
        }
        // lt = TD(vacuous, p) (+) a = a
        for (got, want) in state.lt_opinion().belief().iter().zip(a.belief()) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(state.st_count(), 1);
    }

    #[test]
    fn st_window_never_exceeds_length() {
        let p = params(3, 0.99, 0.5, 0.5);
        let mut state = WindowState::new(uniform(4)).unwrap();
        let input = op_from(&[0.0, 0.0, 1.0, 0.0]);
        for _ in 0..10 {
            state.update(&input, &p).unwrap();
            assert!(state.st_count() <= 3);
        }
        assert_eq!(state.st_count(), 3);
    }

    #[test]
    fn constant_stream_matches_evidence_accumulation() {
        // Feeding one fixed opinion: after t steps the ST window holds
        // min(t, l_st) copies, i.e. evidence min(t, l_st) * r. The LT side
        // follows lt' = TD(lt, p) (+) oldest. Replaying that recursion in
        // evidence space predicts both windows.
        let l_st = 5;
        let p_td = 0.9;
        let p = params(l_st, p_td, 1.0, 0.5);
        let k = 4;
        let w = k as f64;
        let r = [2.0, 1.0, 0.0, 0.0];
        let input = op_from(&r);
        let mut state = WindowState::new(uniform(k)).unwrap();

        let mut lt_ev = vec![0.0; k];
        for step in 1..=40usize {
            let behavior = state.update(&input, &p).unwrap();

            let in_st = step.min(l_st) as f64;
            let st_ev: Vec<f64> = r.iter().map(|ri| ri * in_st).collect();
            if step > l_st {
                // discount in evidence space, then add the evicted element
                let total: f64 = lt_ev.iter().sum();
                let scale = w * p_td / (w + (1.0 - p_td) * total);
                for (ev, ri) in lt_ev.iter_mut().zip(&r) {
                    *ev = *ev * scale + ri;
                }
            }

            let st_expect = op_from(&st_ev);
            for (got, want) in state.st_opinion().belief().iter().zip(st_expect.belief()) {
                assert!((got - want).abs() < 1e-6);
            }
            let lt_expect = op_from(&lt_ev);
            for (got, want) in state.lt_opinion().belief().iter().zip(lt_expect.belief()) {
                assert!((got - want).abs() < 1e-6);
            }

            // ST and LT stay compatible on a constant stream (the conflict
            // peaks right after the first eviction while LT is still thin),
            // so the default gate keeps fusing them.
            let dc = state
                .st_opinion()
                .degree_of_conflict(state.lt_opinion())
                .unwrap();
            assert!(dc < 0.15, "constant stream should not self-conflict: {dc}");
            let beh_ev: Vec<f64> = st_ev.iter().zip(&lt_ev).map(|(s, l)| s + l).collect();
            let beh_expect = op_from(&beh_ev);
            for (got, want) in behavior.belief().iter().zip(beh_expect.belief()) {
                assert!((got - want).abs() < 1e-6);
            }
            // projected mode agrees with the input's
            let pb = behavior.project();
            let pi = input.project();
            let argmax = |v: &[f64]| {
                v.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .unwrap()
                    .0
            };
            assert_eq!(argmax(&pb), argmax(&pi));
        }
    }

    #[test]
    fn open_gate_returns_exact_st_opinion() {
        // Fill LT with one pattern, then switch the stream to a disjoint
        // pattern so ST and LT conflict. With gate 0 any conflict opens the
        // gate and the behavior must be bit-identical to the ST window.
        let p = params(2, 0.99, 0.0, 0.5);
        let mut state = WindowState::new(uniform(4)).unwrap();
        let a = op_from(&[3.0, 0.0, 0.0, 0.0]);
        let b = op_from(&[0.0, 0.0, 3.0, 0.0]);
        for _ in 0..6 {
            state.update(&a, &p).unwrap();
        }
        let mut last = None;
        for _ in 0..2 {
            last = Some(state.update(&b, &p).unwrap());
        }
        let behavior = last.unwrap();
        let dc = state
            .st_opinion()
            .degree_of_conflict(state.lt_opinion())
            .unwrap();
        assert!(dc > 0.0);
        assert_eq!(&behavior, state.st_opinion());
    }

    #[test]
    fn compare_self_and_vacuous() {
        let x = op_from(&[2.0, 1.0, 0.0, 0.0]);
        let (delta, unc) = compare(&x, &x).unwrap();
        assert_eq!(delta, 0.0);
        assert_eq!(unc, x.uncertainty());

        let vac = Op::vacuous(uniform(4)).unwrap();
        let (delta, _) = compare(&x, &vac).unwrap();
        assert_eq!(delta, 0.0);

        let other = Op::vacuous(uniform(6)).unwrap();
        assert!(matches!(
            compare(&x, &other).unwrap_err(),
            AssessError::DomainMismatch { .. }
        ));
    }

    #[test]
    fn step_all_emits_ordered_pairs() {
        let p = params(3, 0.99, 0.5, 0.5);
        let ids: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let mut assessor = Assessor::new(p, &ids, uniform(4)).unwrap();
        let input = op_from(&[1.0, 0.0, 0.0, 0.0]);
        let inputs: HashMap<String, Op> =
            ids.iter().map(|id| (id.clone(), input.clone())).collect();

        let records = assessor.step_all(&inputs).unwrap();
        assert_eq!(records.len(), 6);
        assert_eq!(records[0].t, 1);
        let pairs: Vec<(String, String)> = records
            .iter()
            .map(|r| (r.system.clone(), r.reference.clone()))
            .collect();
        assert_eq!(pairs[0], ("a".into(), "b".into()));
        assert_eq!(pairs[1], ("a".into(), "c".into()));
        assert_eq!(pairs[2], ("b".into(), "a".into()));
        // identical input streams: all deltas exactly zero
        for r in &records {
            assert_eq!(r.delta, 0.0);
            assert!(!r.flagged);
        }

        let records = assessor.step_all(&inputs).unwrap();
        assert_eq!(records[0].t, 2);
    }

    #[test]
    fn step_all_requires_every_system() {
        let p = params(3, 0.99, 0.5, 0.5);
        let ids: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let mut assessor = Assessor::new(p, &ids, uniform(4)).unwrap();
        let mut inputs = HashMap::new();
        inputs.insert("a".to_string(), op_from(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(
            assessor.step_all(&inputs).unwrap_err(),
            AssessError::MissingSystem("b".into())
        );
    }

    #[test]
    fn assessor_rejects_duplicate_ids() {
        let p = params(3, 0.99, 0.5, 0.5);
        let ids: Vec<String> = ["a", "a"].iter().map(|s| s.to_string()).collect();
        assert!(Assessor::new(p, &ids, uniform(4)).is_err());
    }

    #[test]
    fn states_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<Opinion<f64>>();
        check::<WindowState<f64>>();
        check::<Assessor<f64>>();
        check::<AssessmentRecord<f32>>();
    }
}
