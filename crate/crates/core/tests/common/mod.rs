//! Shared generators and reference formulas for the integration suites.
//!
//! The reference implementations here deliberately avoid the library's
//! evidence-space code path: fusion and unfusion use the direct belief-space
//! closed forms, so they can serve as an independent cross-check.

// each test binary uses a different subset of these helpers
#![allow(dead_code)]

use locdiag_core::{EvidenceView64, Opinion64};

/// Opinion from raw evidence with uniform base rate and `W = k`.
pub fn opinion_from_evidence(evidence: &[f64]) -> Opinion64 {
    let k = evidence.len();
    let base = vec![1.0 / k as f64; k];
    opinion_from_evidence_with_base(evidence, &base)
}

pub fn opinion_from_evidence_with_base(evidence: &[f64], base_rate: &[f64]) -> Opinion64 {
    let w = evidence.len() as f64;
    Opinion64::from_evidence(
        &EvidenceView64::new(evidence.to_vec(), base_rate.to_vec(), w).unwrap(),
    )
}

/// Direct belief-space cumulative fusion (non-dogmatic operands):
/// `b = (b_a u_b + b_b u_a) / (u_a + u_b - u_a u_b)`, same denominator for
/// the uncertainty product.
pub fn fuse_direct(a: &Opinion64, b: &Opinion64) -> (Vec<f64>, f64) {
    let ua = a.uncertainty();
    let ub = b.uncertainty();
    let denom = ua + ub - ua * ub;
    let belief = a
        .belief()
        .iter()
        .zip(b.belief())
        .map(|(&x, &y)| (x * ub + y * ua) / denom)
        .collect();
    (belief, ua * ub / denom)
}

/// Expected opinion from summed evidence, computed without the library's
/// conversion helpers.
pub fn fuse_by_evidence_sum(ra: &[f64], rb: &[f64], base_rate: &[f64]) -> (Vec<f64>, f64) {
    let w = ra.len() as f64;
    let sum: Vec<f64> = ra.iter().zip(rb).map(|(a, b)| a + b).collect();
    let total: f64 = sum.iter().sum::<f64>() + w;
    let _ = base_rate;
    (sum.into_iter().map(|r| r / total).collect(), w / total)
}

pub fn assert_opinion_close(got: &Opinion64, belief: &[f64], uncertainty: f64, tol: f64) {
    for (i, (g, w)) in got.belief().iter().zip(belief).enumerate() {
        assert!(
            (g - w).abs() <= tol,
            "belief[{i}] = {g}, expected {w} (tol {tol})"
        );
    }
    assert!(
        (got.uncertainty() - uncertainty).abs() <= tol,
        "u = {}, expected {uncertainty} (tol {tol})",
        got.uncertainty()
    );
}
