//! Ambiguity-set statistics: the concentration radius, the scale constant
//! estimated from empirical exponential moments, dual norms for the robust
//! constraint reformulation, and an exact one-dimensional transport
//! distance used to sanity-check the radius scale.

use crate::types::PvSampleSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WassersteinError {
    #[error("confidence level must be in (0, 1), got {0}")]
    BadBeta(f64),
    #[error("risk level must be in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("scale constant must be non-negative, got {0}")]
    BadConstant(f64),
    #[error("need at least one sample")]
    NoSamples,
    #[error("search grid must be non-empty with positive entries")]
    BadGrid,
    #[error("sample counts differ: {0} vs {1}")]
    CountMismatch(usize, usize),
}

/// Norm on the sample space of PV trajectories. The constraint-side
/// reformulation uses the corresponding dual norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    One,
    Two,
    Inf,
}

impl NormKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::One => "one",
            NormKind::Two => "two",
            NormKind::Inf => "inf",
        }
    }

    /// Evaluate this norm on a vector.
    pub fn eval(self, v: &[f64]) -> f64 {
        match self {
            NormKind::One => v.iter().map(|x| x.abs()).sum(),
            NormKind::Two => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Inf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

impl std::str::FromStr for NormKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one" | "1" => Ok(NormKind::One),
            "two" | "2" => Ok(NormKind::Two),
            "inf" => Ok(NormKind::Inf),
            other => Err(format!("unknown norm '{other}', expected one|two|inf")),
        }
    }
}

/// Dual-norm value of a vector: the 1- and inf-norms are each other's
/// duals, the 2-norm is self-dual.
pub fn dual_norm(v: &[f64], kind: NormKind) -> f64 {
    match kind {
        NormKind::One => NormKind::Inf.eval(v),
        NormKind::Two => NormKind::Two.eval(v),
        NormKind::Inf => NormKind::One.eval(v),
    }
}

/// Ball radius that shrinks with the sample count at the given confidence:
/// `c * sqrt(ln(1 / (1 - beta)) / n)`.
pub fn radius(c: f64, n: usize, beta: f64) -> Result<f64, WassersteinError> {
    if !(0.0 < beta && beta < 1.0) {
        return Err(WassersteinError::BadBeta(beta));
    }
    if c < 0.0 {
        return Err(WassersteinError::BadConstant(c));
    }
    if n == 0 {
        return Err(WassersteinError::NoSamples);
    }
    Ok(c * ((1.0 / (1.0 - beta)).ln() / n as f64).sqrt())
}

/// Ambiguity-ball description shared by the robust model builder.
///
/// `constant_c`, `radius` and `effective_radius` are all expressed in the
/// same power unit as the samples the constant was estimated on; the
/// pipeline estimates on MW-normalized samples and converts to kW before
/// building constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbiguitySpec {
    pub constant_c: f64,
    pub confidence_beta: f64,
    pub risk_alpha: f64,
    pub norm_kind: NormKind,
    pub n_samples: usize,
    /// Ball radius at the configured confidence.
    pub radius: f64,
    /// Conservative constraint buffer: radius / risk_alpha.
    pub effective_radius: f64,
}

impl AmbiguitySpec {
    pub fn new(
        constant_c: f64,
        n_samples: usize,
        confidence_beta: f64,
        risk_alpha: f64,
        norm_kind: NormKind,
    ) -> Result<Self, WassersteinError> {
        if !(0.0 < risk_alpha && risk_alpha < 1.0) {
            return Err(WassersteinError::BadAlpha(risk_alpha));
        }
        let r = radius(constant_c, n_samples, confidence_beta)?;
        Ok(Self {
            constant_c,
            confidence_beta,
            risk_alpha,
            norm_kind,
            n_samples,
            radius: r,
            effective_radius: r / risk_alpha,
        })
    }
}

/// Scale-constant estimate together with the evaluated search curve.
#[derive(Clone, Debug)]
pub struct CEstimate {
    pub c: f64,
    pub eta_star: f64,
    /// `(eta, c(eta))` pairs over the search grid, for plotting or export.
    pub curve: Vec<(f64, f64)>,
}

/// Default logarithmic search grid for the exponential-moment parameter.
pub fn default_eta_grid() -> Vec<f64> {
    log_grid(1e-4, 10.0, 400)
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (llo + (lhi - llo) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Objective of the scale-constant search at one grid point:
/// `2 * sqrt((1 + ln mean_k exp(eta * ||x_k - mean||^2)) / (2 eta))`,
/// evaluated through log-sum-exp so large deviations cannot overflow.
fn c_value(eta: f64, sq_deviations: &[f64]) -> f64 {
    let n = sq_deviations.len() as f64;
    let max_z = sq_deviations.iter().fold(f64::NEG_INFINITY, |m, d| m.max(eta * d));
    let sum: f64 = sq_deviations.iter().map(|d| (eta * d - max_z).exp()).sum();
    let log_mean = max_z + (sum / n).ln();
    2.0 * ((1.0 + log_mean) / (2.0 * eta)).sqrt()
}

/// Estimate the scale constant from samples by minimizing the empirical
/// exponential-moment bound over the given grid, then refining the best
/// bracket by golden-section search. Deviations are measured from the
/// per-period empirical mean of the samples, in the given norm.
pub fn estimate_c(
    samples: &[Vec<f64>],
    eta_grid: &[f64],
    norm: NormKind,
) -> Result<CEstimate, WassersteinError> {
    if samples.is_empty() {
        return Err(WassersteinError::NoSamples);
    }
    if eta_grid.is_empty() || eta_grid.iter().any(|&e| e <= 0.0) {
        return Err(WassersteinError::BadGrid);
    }
    let mean = crate::types::per_period_mean(samples);
    let sq_deviations: Vec<f64> = samples
        .iter()
        .map(|s| {
            let diff: Vec<f64> = s.iter().zip(&mean).map(|(x, m)| x - m).collect();
            let d = norm.eval(&diff);
            d * d
        })
        .collect();

    let curve: Vec<(f64, f64)> =
        eta_grid.iter().map(|&eta| (eta, c_value(eta, &sq_deviations))).collect();
    let (argmin, _) = curve
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.1.partial_cmp(&b.1).unwrap())
        .map(|(i, p)| (i, p.1))
        .unwrap();

    // Golden-section refinement inside the bracket around the grid argmin.
    let lo = curve[argmin.saturating_sub(1)].0;
    let hi = curve[(argmin + 1).min(curve.len() - 1)].0;
    let (eta_star, c) = golden_section(lo, hi, |eta| c_value(eta, &sq_deviations));
    Ok(CEstimate { c, eta_star, curve })
}

fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    if hi - lo < 1e-12 {
        return (lo, f(lo));
    }
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if hi - lo <= 1e-9 * (1.0 + hi.abs()) {
            break;
        }
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Estimate the scale constant on MW-normalized copies of a sample set,
/// with the default grid. The returned estimate is in MW units.
pub fn estimate_c_normalized(
    set: &PvSampleSet,
    norm: NormKind,
) -> Result<CEstimate, WassersteinError> {
    let mw: Vec<Vec<f64>> =
        set.samples.iter().map(|s| s.iter().map(|x| x / 1000.0).collect()).collect();
    estimate_c(&mw, &default_eta_grid(), norm)
}

/// Exact 1-Wasserstein distance between two equal-count empirical
/// distributions: the mean absolute difference of the sorted samples.
pub fn wasserstein_1d(p_samples: &[f64], q_samples: &[f64]) -> Result<f64, WassersteinError> {
    if p_samples.len() != q_samples.len() {
        return Err(WassersteinError::CountMismatch(p_samples.len(), q_samples.len()));
    }
    if p_samples.is_empty() {
        return Err(WassersteinError::NoSamples);
    }
    let mut p = p_samples.to_vec();
    let mut q = q_samples.to_vec();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    q.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = p.len() as f64;
    Ok(p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>() / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn radius_matches_hand_arithmetic() {
        // 1.36 * sqrt(ln(1/0.95) / 365)
        let r = radius(1.36, 365, 0.05).unwrap();
        assert_abs_diff_eq!(r, 0.016123, epsilon = 1e-6);
    }

    #[test]
    fn radius_edge_cases() {
        assert_abs_diff_eq!(radius(2.0, 100, 1e-12).unwrap(), 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(radius(0.0, 100, 0.5).unwrap(), 0.0);
        assert!(radius(1.0, 100, 0.0).is_err());
        assert!(radius(1.0, 100, 1.0).is_err());
        assert!(radius(-1.0, 100, 0.5).is_err());
    }

    #[test]
    fn ambiguity_spec_derives_radii() {
        let spec = AmbiguitySpec::new(1.36, 365, 0.05, 0.05, NormKind::Inf).unwrap();
        assert_abs_diff_eq!(spec.radius, radius(1.36, 365, 0.05).unwrap());
        assert_abs_diff_eq!(spec.effective_radius, spec.radius / 0.05, epsilon = 1e-15);
        assert!(AmbiguitySpec::new(1.36, 365, 0.05, 0.0, NormKind::Inf).is_err());
    }

    #[test]
    fn dual_norm_examples() {
        assert_abs_diff_eq!(dual_norm(&[3.0, -4.0], NormKind::Two), 5.0);
        assert_abs_diff_eq!(dual_norm(&[3.0, -4.0], NormKind::Inf), 7.0);
        assert_abs_diff_eq!(dual_norm(&[3.0, -4.0], NormKind::One), 4.0);
        for kind in [NormKind::One, NormKind::Two, NormKind::Inf] {
            assert_abs_diff_eq!(dual_norm(&[0.0, 0.0, 0.0], kind), 0.0);
        }
    }

    #[test]
    fn identical_samples_give_closed_form_curve() {
        // All deviations zero: c(eta) = 2 * sqrt(1 / (2 eta)), minimized at
        // the largest grid eta.
        let samples = vec![vec![5.0, 5.0]; 4];
        let grid = default_eta_grid();
        let est = estimate_c(&samples, &grid, NormKind::Inf).unwrap();
        for &(eta, c) in est.curve.iter().step_by(57) {
            assert_abs_diff_eq!(c, 2.0 * (1.0 / (2.0 * eta)).sqrt(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(est.eta_star, 10.0, epsilon = 1e-6);
        assert_abs_diff_eq!(est.c, 2.0 * (1.0 / 20.0f64).sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn two_sample_curve_value_by_hand() {
        // Samples {0, 2}, mean 1: both squared deviations are 1, so the
        // curve at eta = 0.5 is 2 * sqrt((1 + ln(e^0.5)) / 1) = 2 * sqrt(1.5).
        let samples = vec![vec![0.0], vec![2.0]];
        let est = estimate_c(&samples, &[0.5], NormKind::Inf).unwrap();
        assert_abs_diff_eq!(est.curve[0].1, 2.0 * 1.5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn estimate_is_order_invariant() {
        let a = vec![vec![1.0, 2.0], vec![3.0, 1.0], vec![0.5, 4.0]];
        let mut b = a.clone();
        b.reverse();
        let grid = default_eta_grid();
        let ca = estimate_c(&a, &grid, NormKind::Inf).unwrap();
        let cb = estimate_c(&b, &grid, NormKind::Inf).unwrap();
        assert_abs_diff_eq!(ca.c, cb.c, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_grid() {
        let samples = vec![vec![1.0]];
        assert!(estimate_c(&samples, &[], NormKind::Inf).is_err());
        assert!(estimate_c(&samples, &[0.0], NormKind::Inf).is_err());
    }

    #[test]
    fn wasserstein_1d_examples() {
        assert_abs_diff_eq!(wasserstein_1d(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(wasserstein_1d(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(wasserstein_1d(&[0.0, 2.0], &[1.0, 3.0]).unwrap(), 1.0);
        assert!(wasserstein_1d(&[0.0], &[1.0, 2.0]).is_err());
    }

    proptest! {
        #[test]
        fn radius_monotonicity(
            c in 0.01..5.0f64,
            n in 1usize..2000,
            beta in 0.01..0.99f64,
        ) {
            let r = radius(c, n, beta).unwrap();
            prop_assert!(radius(c, n + 50, beta).unwrap() < r);
            prop_assert!(radius(c, n, (beta + 1.0) / 2.0).unwrap() > r);
            prop_assert!(radius(c * 2.0, n, beta).unwrap() > r);
        }

        #[test]
        fn scaling_samples_does_not_decrease_c(
            seedvals in proptest::collection::vec(0.0..10.0f64, 4..24),
            s in 1.0..20.0f64,
        ) {
            let samples: Vec<Vec<f64>> = seedvals.chunks(2).map(|c| c.to_vec()).collect();
            let samples: Vec<Vec<f64>> =
                samples.into_iter().filter(|c| c.len() == 2).collect();
            prop_assume!(samples.len() >= 2);
            let grid = log_grid(1e-3, 5.0, 60);
            let base = estimate_c(&samples, &grid, NormKind::Inf).unwrap();
            let scaled: Vec<Vec<f64>> = samples
                .iter()
                .map(|row| row.iter().map(|x| x * s).collect())
                .collect();
            let big = estimate_c(&scaled, &grid, NormKind::Inf).unwrap();
            prop_assert!(big.c >= base.c - 1e-9);
        }

        #[test]
        fn hoelder_inequality_holds(
            v in proptest::collection::vec(-5.0..5.0f64, 1..8),
            w in proptest::collection::vec(-5.0..5.0f64, 1..8),
        ) {
            let n = v.len().min(w.len());
            let (v, w) = (&v[..n], &w[..n]);
            let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            for kind in [NormKind::One, NormKind::Two, NormKind::Inf] {
                prop_assert!(dual_norm(v, kind) * kind.eval(w) >= dot - 1e-9);
            }
        }

        #[test]
        fn wasserstein_1d_is_a_metric(
            p in proptest::collection::vec(-10.0..10.0f64, 1..12),
            q in proptest::collection::vec(-10.0..10.0f64, 1..12),
            r in proptest::collection::vec(-10.0..10.0f64, 1..12),
        ) {
            let n = p.len().min(q.len()).min(r.len());
            let (p, q, r) = (&p[..n], &q[..n], &r[..n]);
            let pq = wasserstein_1d(p, q).unwrap();
            let qp = wasserstein_1d(q, p).unwrap();
            prop_assert_eq!(pq, qp);
            prop_assert!(wasserstein_1d(p, p).unwrap() == 0.0);
            let qr = wasserstein_1d(q, r).unwrap();
            let pr = wasserstein_1d(p, r).unwrap();
            prop_assert!(pr <= pq + qr + 1e-9);
        }
    }
}
