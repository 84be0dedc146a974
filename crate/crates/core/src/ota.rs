//! The online threshold-based algorithm (OTA), the offline optimum and
//! per-instance competitive ratios.

use crate::error::{invalid, Result};
use crate::model::{Decision, ProblemKind, RunTrace, SearchInstance, ThresholdSchedule};

/// Runs OTA with `schedule` over `instance`.
///
/// With `m` items already selected, the item at step `t` is taken iff its
/// price passes threshold `m + 1`. Once the remaining horizon equals the
/// remaining budget, every remaining item is taken; those that would have
/// failed their threshold are flagged compulsory.
pub fn run_ota(schedule: &ThresholdSchedule, instance: &SearchInstance) -> Result<RunTrace> {
    if schedule.bounds() != instance.bounds() {
        return Err(invalid("schedule and instance use different price bounds"));
    }
    if schedule.k() != instance.k() {
        return Err(invalid(format!(
            "schedule has {} thresholds but instance budget is {}",
            schedule.k(),
            instance.k()
        )));
    }
    let kind = schedule.kind();
    let thresholds = schedule.values();
    let k = instance.k();
    let horizon = instance.horizon();

    let mut selected = 0usize;
    let mut decisions = Vec::with_capacity(horizon);
    for (t, &price) in instance.prices().iter().enumerate() {
        let remaining = horizon - t;
        let passes = selected < k && kind.accepts(price, thresholds[selected]);
        let forced = selected < k && remaining == k - selected;
        let take = passes || forced;
        decisions.push(Decision {
            selected: take,
            price,
            compulsory: take && !passes,
        });
        if take {
            selected += 1;
        }
    }
    Ok(RunTrace::new(decisions))
}

/// Offline optimum: the sum of the k best prices in hindsight.
pub fn offline_opt(instance: &SearchInstance, kind: ProblemKind) -> f64 {
    let mut prices = instance.prices().to_vec();
    match kind {
        ProblemKind::MaxSearch => prices.sort_unstable_by(|a, b| b.total_cmp(a)),
        ProblemKind::MinSearch => prices.sort_unstable_by(|a, b| a.total_cmp(b)),
    }
    prices[..instance.k()].iter().sum()
}

/// OPT/ALG for max search, ALG/OPT for min search.
pub fn empirical_ratio(trace: &RunTrace, opt: f64, kind: ProblemKind) -> Result<f64> {
    let alg = trace.total_value();
    if !(opt > 0.0) || !(alg > 0.0) {
        return Err(invalid(format!(
            "ratio needs positive totals, got opt={opt}, alg={alg}"
        )));
    }
    Ok(match kind {
        ProblemKind::MaxSearch => opt / alg,
        ProblemKind::MinSearch => alg / opt,
    })
}

/// Convenience: run OTA and return its ratio against the offline optimum.
pub fn ota_ratio(schedule: &ThresholdSchedule, instance: &SearchInstance) -> Result<f64> {
    let trace = run_ota(schedule, instance)?;
    let opt = offline_opt(instance, schedule.kind());
    empirical_ratio(&trace, opt, schedule.kind())
}
