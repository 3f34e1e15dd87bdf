//! Property tests for the operator algebra.
//!
//! Random opinions are generated from raw evidence vectors, so every
//! expected value can be cross-checked against arithmetic on the evidence
//! itself or against the direct belief-space closed forms in `common`.

mod common;

use common::{assert_opinion_close, fuse_by_evidence_sum, fuse_direct, opinion_from_evidence_with_base};
use locdiag_core::Opinion64;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
struct EvidencePair {
    ra: Vec<f64>,
    rb: Vec<f64>,
    base_rate: Vec<f64>,
}

fn evidence_pair() -> impl Strategy<Value = EvidencePair> {
    (2usize..=12).prop_flat_map(|k| {
        (
            prop::collection::vec(0.0f64..50.0, k),
            prop::collection::vec(0.0f64..50.0, k),
            prop::collection::vec(0.05f64..1.0, k),
        )
            .prop_map(|(ra, rb, weights)| {
                let total: f64 = weights.iter().sum();
                let base_rate = weights.iter().map(|w| w / total).collect();
                EvidencePair { ra, rb, base_rate }
            })
    })
}

fn opinions(pair: &EvidencePair) -> (Opinion64, Opinion64) {
    (
        opinion_from_evidence_with_base(&pair.ra, &pair.base_rate),
        opinion_from_evidence_with_base(&pair.rb, &pair.base_rate),
    )
}

fn additivity(op: &Opinion64) -> f64 {
    op.belief().iter().sum::<f64>() + op.uncertainty()
}

proptest! {
    #[test]
    fn fusion_matches_evidence_sum_and_direct_form(pair in evidence_pair()) {
        let (a, b) = opinions(&pair);
        let fused = a.cumulative_fuse(&b).unwrap();

        let (eb, eu) = fuse_by_evidence_sum(&pair.ra, &pair.rb, &pair.base_rate);
        assert_opinion_close(&fused, &eb, eu, TOL);

        let (db, du) = fuse_direct(&a, &b);
        assert_opinion_close(&fused, &db, du, TOL);
    }

    #[test]
    fn fusion_commutes(pair in evidence_pair()) {
        let (a, b) = opinions(&pair);
        let ab = a.cumulative_fuse(&b).unwrap();
        let ba = b.cumulative_fuse(&a).unwrap();
        assert_opinion_close(&ab, ba.belief(), ba.uncertainty(), TOL);
    }

    #[test]
    fn fusion_associates(pair in evidence_pair(), rc_seed in prop::collection::vec(0.0f64..50.0, 12)) {
        let (a, b) = opinions(&pair);
        let rc: Vec<f64> = rc_seed.iter().take(pair.ra.len()).copied().collect();
        let c = opinion_from_evidence_with_base(&rc, &pair.base_rate);
        let left = a.cumulative_fuse(&b).unwrap().cumulative_fuse(&c).unwrap();
        let right = a.cumulative_fuse(&b.cumulative_fuse(&c).unwrap()).unwrap();
        assert_opinion_close(&left, right.belief(), right.uncertainty(), TOL);
    }

    #[test]
    fn unfusion_inverts_fusion(pair in evidence_pair()) {
        let (a, b) = opinions(&pair);
        let fused = a.cumulative_fuse(&b).unwrap();
        let back = fused.cumulative_unfuse(&b).unwrap();
        assert_opinion_close(&back, a.belief(), a.uncertainty(), TOL);
    }

    #[test]
    fn evidence_round_trip(pair in evidence_pair(), w in 0.5f64..20.0) {
        let (a, _) = opinions(&pair);
        prop_assume!(a.uncertainty() > 1e-6);
        let ev = a.to_evidence(w).unwrap();
        let back = Opinion64::from_evidence(&ev);
        assert_opinion_close(&back, a.belief(), a.uncertainty(), TOL);
    }

    #[test]
    fn operators_preserve_additivity(pair in evidence_pair(), p in 0.0f64..=1.0) {
        let (a, b) = opinions(&pair);
        for op in [
            a.cumulative_fuse(&b).unwrap(),
            a.cumulative_fuse(&b).unwrap().cumulative_unfuse(&b).unwrap(),
            a.trust_discount(p).unwrap(),
            a.multiply(&b),
        ] {
            prop_assert!((additivity(&op) - 1.0).abs() <= TOL);
        }
    }

    #[test]
    fn conflict_bounds_symmetry_and_identities(pair in evidence_pair()) {
        let (a, b) = opinions(&pair);
        let dc_ab = a.degree_of_conflict(&b).unwrap();
        let dc_ba = b.degree_of_conflict(&a).unwrap();
        prop_assert!((0.0..=1.0).contains(&dc_ab));
        prop_assert!((dc_ab - dc_ba).abs() <= TOL);
        prop_assert_eq!(a.degree_of_conflict(&a).unwrap(), 0.0);

        let vacuous = Opinion64::vacuous(pair.base_rate.clone()).unwrap();
        prop_assert_eq!(a.degree_of_conflict(&vacuous).unwrap(), 0.0);
        prop_assert_eq!(vacuous.degree_of_conflict(&b).unwrap(), 0.0);
    }

    #[test]
    fn trust_discount_composes(pair in evidence_pair(), p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        let (a, _) = opinions(&pair);
        let twice = a.trust_discount(p).unwrap().trust_discount(q).unwrap();
        let once = a.trust_discount(p * q).unwrap();
        assert_opinion_close(&twice, once.belief(), once.uncertainty(), TOL);
    }

    #[test]
    fn multiplication_contract(pair in evidence_pair()) {
        let (a, b) = opinions(&pair);
        let joint = a.multiply(&b);
        prop_assert_eq!(joint.len(), a.len() * b.len());

        let pa = a.project();
        let pb = b.project();
        let pj = joint.project();
        let aj = joint.base_rate();
        let mut idx = 0;
        for (&pai, &arow) in pa.iter().zip(a.base_rate()) {
            for (&pbj, &acol) in pb.iter().zip(b.base_rate()) {
                prop_assert!((pj[idx] - pai * pbj).abs() <= TOL);
                prop_assert!((aj[idx] - arow * acol).abs() <= TOL);
                prop_assert!(joint.belief()[idx] >= 0.0);
                idx += 1;
            }
        }
        prop_assert!((additivity(&joint) - 1.0).abs() <= TOL);
        prop_assert!((0.0..=1.0).contains(&joint.uncertainty()));
    }

    #[test]
    fn input_opinions_stay_strictly_uncertain(
        dx in -1e6f64..1e6,
        dy in -1e6f64..1e6,
        bins_x in 2usize..=12,
        bins_y in 2usize..=12,
    ) {
        use locdiag_core::histogram::{DomainConfig, HistogramSpec};
        let cfg = DomainConfig::uniform(
            HistogramSpec::new(-5.0, 5.0, bins_x).unwrap(),
            HistogramSpec::new(-5.0, 5.0, bins_y).unwrap(),
        );
        let op = cfg.input_opinion(dx, dy).unwrap();
        prop_assert_eq!(op.len(), bins_x * bins_y);
        prop_assert!(op.uncertainty() > 0.0 && op.uncertainty() < 1.0);
        prop_assert!((additivity(&op) - 1.0).abs() <= TOL);

        // any delta landing in the same bins gives the identical opinion
        let again = cfg.input_opinion(dx, dy).unwrap();
        prop_assert_eq!(op, again);
    }

    #[test]
    fn projection_normalizes_and_variance_nonnegative(pair in evidence_pair()) {
        let (a, _) = opinions(&pair);
        let p = a.project();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= TOL);
        for v in &p {
            prop_assert!((-TOL..=1.0 + TOL).contains(v));
        }
        for v in a.variance(a.len() as f64) {
            prop_assert!(v >= 0.0);
        }
    }
}

#[test]
fn dogmatic_variance_is_zero() {
    let mut belief = vec![0.0; 5];
    belief[2] = 1.0;
    let dogmatic = Opinion64::new(belief, 0.0, vec![0.2; 5]).unwrap();
    assert_eq!(dogmatic.variance(5.0), vec![0.0; 5]);
}

#[test]
fn multiplication_differs_from_evidence_outer_product() {
    // Alternative construction kept as a fixture: treating the joint of two
    // single-observation opinions as the outer product of their evidence
    // vectors (W = 4) would give u = 4/5. The uncertainty-maximizing
    // construction gives u = 4/9 for the same operands, and that is the
    // contractual behavior.
    let op = Opinion64::new(vec![1.0 / 3.0, 0.0], 2.0 / 3.0, vec![0.5, 0.5]).unwrap();
    let joint = op.multiply(&op);
    assert!((joint.uncertainty() - 4.0 / 9.0).abs() < 1e-12);

    let outer_evidence = [1.0, 0.0, 0.0, 0.0];
    let alternative = common::opinion_from_evidence(&outer_evidence);
    assert!((alternative.uncertainty() - 4.0 / 5.0).abs() < 1e-12);
    assert!((joint.uncertainty() - alternative.uncertainty()).abs() > 0.3);
}
