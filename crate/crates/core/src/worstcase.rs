//! Worst-case optimal ratios and their threshold schedules.

use crate::error::{invalid, Result};
use crate::model::{PriceBounds, ProblemKind, ThresholdSchedule};

const BISECT_ITERS: usize = 200;

/// Optimal ratio and the schedule attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseSolution {
    pub kind: ProblemKind,
    pub cr: f64,
    pub schedule: ThresholdSchedule,
}

/// Bisection for a strictly decreasing `f` with a sign change on `(lo, hi)`.
fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(invalid("budget k must be positive"));
    }
    Ok(())
}

/// Residual of the max-search equation `(θ−1)/(α−1) − (1+α/k)^k`.
pub fn alpha_residual(alpha: f64, theta: f64, k: usize) -> f64 {
    (theta - 1.0) / (alpha - 1.0) - (1.0 + alpha / k as f64).powi(k as i32)
}

/// Residual of the min-search equation `(1−1/θ)/(1−1/φ) − (1+1/(kφ))^k`.
pub fn phi_residual(phi: f64, theta: f64, k: usize) -> f64 {
    (1.0 - 1.0 / theta) / (1.0 - 1.0 / phi) - (1.0 + 1.0 / (k as f64 * phi)).powi(k as i32)
}

/// Optimal competitive ratio of k-max search.
pub fn solve_alpha_star(bounds: &PriceBounds, k: usize) -> Result<f64> {
    check_k(k)?;
    let theta = bounds.theta();
    if theta == 1.0 {
        return Ok(1.0);
    }
    Ok(bisect_decreasing(|a| alpha_residual(a, theta, k), 1.0 + 1e-12, theta))
}

/// Optimal competitive ratio of k-min search.
pub fn solve_phi_star(bounds: &PriceBounds, k: usize) -> Result<f64> {
    check_k(k)?;
    let theta = bounds.theta();
    if theta == 1.0 {
        return Ok(1.0);
    }
    Ok(bisect_decreasing(|p| phi_residual(p, theta, k), 1.0 + 1e-12, theta))
}

pub fn solve_cr_star(bounds: &PriceBounds, k: usize, kind: ProblemKind) -> Result<f64> {
    match kind {
        ProblemKind::MaxSearch => solve_alpha_star(bounds, k),
        ProblemKind::MinSearch => solve_phi_star(bounds, k),
    }
}

/// `p_min + p_min(c−1)(1+c/k)^(i−1)`: the rising curve shared by the
/// worst-case schedule and the prediction-driven segments.
#[inline]
pub(crate) fn rising_threshold(p_min: f64, c: f64, k: usize, i: usize) -> f64 {
    p_min + p_min * (c - 1.0) * (1.0 + c / k as f64).powi(i as i32 - 1)
}

/// `p_max − p_max(1−1/c)(1+1/(ck))^(i−1)`: the min-search mirror.
#[inline]
pub(crate) fn falling_threshold(p_max: f64, c: f64, k: usize, i: usize) -> f64 {
    p_max - p_max * (1.0 - 1.0 / c) * (1.0 + 1.0 / (c * k as f64)).powi(i as i32 - 1)
}

pub(crate) fn worst_case_values(bounds: &PriceBounds, k: usize, kind: ProblemKind, cr: f64) -> Vec<f64> {
    (1..=k)
        .map(|i| match kind {
            ProblemKind::MaxSearch => rising_threshold(bounds.p_min(), cr, k, i),
            ProblemKind::MinSearch => falling_threshold(bounds.p_max(), cr, k, i),
        })
        .collect()
}

/// The schedule attaining the optimal ratio for `kind`.
pub fn worst_case_thresholds(bounds: &PriceBounds, k: usize, kind: ProblemKind) -> Result<WorstCaseSolution> {
    let cr = solve_cr_star(bounds, k, kind)?;
    let values = worst_case_values(bounds, k, kind, cr);
    let schedule = ThresholdSchedule::from_raw(kind, values, *bounds)?;
    Ok(WorstCaseSolution { kind, cr, schedule })
}
