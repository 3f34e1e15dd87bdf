//! Stream-level behavior of the two-window scheme: bookkeeping stays exact
//! over long runs, the long-term window decays geometrically, and whole
//! record sequences are deterministic.

mod common;

use std::collections::HashMap;

use common::opinion_from_evidence;
use locdiag_core::window::{Assessor, AssessorParams, WindowState};
use locdiag_core::Opinion64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn uniform(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

/// Random single-observation opinions like the histogram pipeline produces.
fn random_stream(k: usize, len: usize, seed: u64) -> Vec<Opinion64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| {
            let mut evidence = vec![0.0; k];
            let hot = rng.random_range(0..k);
            evidence[hot] = 1.0 + rng.random_range(0.0..3.0);
            opinion_from_evidence(&evidence)
        })
        .collect()
}

/// Refuses the ST queue from scratch; the independent check for window
/// conservation.
fn refuse_queue(state: &WindowState<f64>, base_rate: Vec<f64>) -> Opinion64 {
    let mut acc = Opinion64::vacuous(base_rate).unwrap();
    for op in state.st_queue() {
        acc = acc.cumulative_fuse(op).unwrap();
    }
    acc
}

#[test]
fn window_conservation_over_random_stream() {
    let k = 9;
    let params = AssessorParams::new(10, 0.99, 0.5, 0.5).unwrap();
    let mut state = WindowState::new(uniform(k)).unwrap();
    for input in random_stream(k, 800, 11) {
        state.update(&input, &params).unwrap();
        let refused = refuse_queue(&state, uniform(k));
        for (got, want) in state.st_opinion().belief().iter().zip(refused.belief()) {
            assert!((got - want).abs() < 1e-6);
        }
        assert!((state.st_opinion().uncertainty() - refused.uncertainty()).abs() < 1e-6);
    }
}

#[test]
fn lt_window_decays_geometrically() {
    // One distinctive opinion is evicted into LT, followed by vacuous
    // traffic: after x further evictions the LT belief must be p^x times
    // the original.
    let k = 6;
    let p_td = 0.99;
    let params = AssessorParams::new(1, p_td, 1.0, 0.5).unwrap();
    let mut state = WindowState::new(uniform(k)).unwrap();

    let mut evidence = vec![0.0; k];
    evidence[2] = 4.0;
    let distinctive = opinion_from_evidence(&evidence);
    let vacuous = Opinion64::vacuous(uniform(k)).unwrap();

    state.update(&distinctive, &params).unwrap();
    state.update(&vacuous, &params).unwrap(); // evicts the distinctive opinion
    let original = state.lt_opinion().belief()[2];
    assert!(original > 0.0);

    for x in 1..=200u32 {
        state.update(&vacuous, &params).unwrap();
        let expected = p_td.powi(x as i32) * original;
        let got = state.lt_opinion().belief()[2];
        assert!(
            (got - expected).abs() < 1e-6,
            "step {x}: lt belief {got}, expected {expected}"
        );
    }
}

#[test]
fn record_sequences_are_bit_identical() {
    let k = 9;
    let ids: Vec<String> = ["gnss", "slam", "odom"].iter().map(|s| s.to_string()).collect();
    let streams: Vec<Vec<Opinion64>> = (0..3).map(|i| random_stream(k, 200, 40 + i)).collect();

    let run = || {
        let params = AssessorParams::new(10, 0.95, 0.5, 0.3).unwrap();
        let mut assessor = Assessor::new(params, &ids, uniform(k)).unwrap();
        let mut all = Vec::new();
        for step in 0..200 {
            let inputs: HashMap<String, Opinion64> = ids
                .iter()
                .zip(&streams)
                .map(|(id, stream)| (id.clone(), stream[step].clone()))
                .collect();
            all.extend(assessor.step_all(&inputs).unwrap());
        }
        all
    };

    let first = run();
    let second = run();
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a, b);
        assert!(a.delta.to_bits() == b.delta.to_bits());
        assert!(a.uncertainty.to_bits() == b.uncertainty.to_bits());
    }
}

#[test]
fn deltas_and_uncertainties_stay_in_unit_interval() {
    let k = 9;
    let ids: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
    let params = AssessorParams::new(5, 0.9, 0.2, 0.1).unwrap();
    let mut assessor = Assessor::new(params, &ids, uniform(k)).unwrap();
    let sa = random_stream(k, 300, 1);
    let sb = random_stream(k, 300, 2);
    for step in 0..300 {
        let mut inputs = HashMap::new();
        inputs.insert("a".to_string(), sa[step].clone());
        inputs.insert("b".to_string(), sb[step].clone());
        for r in assessor.step_all(&inputs).unwrap() {
            assert!((0.0..=1.0).contains(&r.delta));
            assert!((0.0..=1.0).contains(&r.uncertainty));
            assert_eq!(r.flagged, r.delta > 0.1);
        }
    }
}
