//! Per-interval ratios of a threshold schedule.
//!
//! Interval `i` covers realized extremes between thresholds `i−1` and `i`.
//! An adversary whose extreme sits just below threshold `i` gets the first
//! `i−1` thresholds plus `k−i+1` worst prices, giving the interval's ratio.

use crate::error::{domain, invalid, Result};
use crate::model::{ProblemKind, ThresholdSchedule};

/// All k+1 interval ratios of `values` (alpha for max search, beta for min).
pub(crate) fn interval_ratios_raw(kind: ProblemKind, values: &[f64], p_min: f64, p_max: f64) -> Vec<f64> {
    let k = values.len();
    let kf = k as f64;
    let mut out = Vec::with_capacity(k + 1);
    match kind {
        ProblemKind::MaxSearch => {
            let mut denom = kf * p_min;
            for &v in values {
                out.push(kf * v / denom);
                denom += v - p_min;
            }
            out.push(kf * p_max / denom);
        }
        ProblemKind::MinSearch => {
            let mut numer = kf * p_max;
            for &v in values {
                out.push(numer / (kf * v));
                numer += v - p_max;
            }
            out.push(numer / (kf * p_min));
        }
    }
    out
}

/// Interval ratios of a schedule, indexed 0..=k for intervals 1..=k+1.
pub fn interval_ratios(schedule: &ThresholdSchedule) -> Vec<f64> {
    let b = schedule.bounds();
    interval_ratios_raw(schedule.kind(), schedule.values(), b.p_min(), b.p_max())
}

pub fn max_interval_ratio(schedule: &ThresholdSchedule) -> f64 {
    interval_ratios(schedule).into_iter().fold(1.0, f64::max)
}

fn single(schedule: &ThresholdSchedule, i: usize, want: ProblemKind) -> Result<f64> {
    if schedule.kind() != want {
        return Err(invalid(format!("expected a {want}-search schedule")));
    }
    let k = schedule.k();
    if i == 0 || i > k + 1 {
        return Err(domain(format!("interval index {i} outside 1..={}", k + 1)));
    }
    let b = schedule.bounds();
    let head = &schedule.values()[..i - 1];
    let kf = k as f64;
    let rest = (k + 1 - i) as f64;
    let cur = schedule.threshold(i)?;
    Ok(match want {
        ProblemKind::MaxSearch => kf * cur / (head.iter().sum::<f64>() + rest * b.p_min()),
        ProblemKind::MinSearch => (head.iter().sum::<f64>() + rest * b.p_max()) / (kf * cur),
    })
}

/// Max-search ratio of interval `i` (1-based, up to k+1).
pub fn ratio_alpha(schedule: &ThresholdSchedule, i: usize) -> Result<f64> {
    single(schedule, i, ProblemKind::MaxSearch)
}

/// Min-search ratio of interval `i` (1-based, up to k+1).
pub fn ratio_beta(schedule: &ThresholdSchedule, i: usize) -> Result<f64> {
    single(schedule, i, ProblemKind::MinSearch)
}

/// Exact ratio when the realized extreme equals `prediction`: OTA keeps the
/// thresholds the prediction passes and fills the rest with worst prices.
pub fn prediction_ratio(schedule: &ThresholdSchedule, prediction: f64) -> f64 {
    let kind = schedule.kind();
    let b = schedule.bounds();
    let k = schedule.k() as f64;
    let (sum, count) = schedule
        .values()
        .iter()
        .filter(|&&v| kind.accepts(prediction, v))
        .fold((0.0, 0usize), |(s, n), &v| (s + v, n + 1));
    let fill = (schedule.k() - count) as f64 * b.worst_price(kind);
    match kind {
        ProblemKind::MaxSearch => k * prediction / (sum + fill),
        ProblemKind::MinSearch => (sum + fill) / (k * prediction),
    }
}
