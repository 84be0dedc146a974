//! Adversarial instances: the ramp-and-drop family used by the lower
//! bounds, the sequence that realizes a schedule's interval ratio, and the
//! randomized worst-case tail.

use rand::Rng;

use crate::error::{domain, invalid, Result};
use crate::model::{PriceBounds, ProblemKind, SearchInstance, ThresholdSchedule};
use crate::rng::rng_from;

/// A ramp from the near bound to `p`, each level held `k` steps, followed by
/// `k` steps at the worst price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PInstanceSpec {
    pub kind: ProblemKind,
    /// Extreme reached by the ramp (the maximum for max search, the minimum
    /// for min search).
    pub p: f64,
    pub bounds: PriceBounds,
    pub k: usize,
    /// Gap between consecutive ramp levels.
    pub step: f64,
}

impl PInstanceSpec {
    /// Spec with the default resolution of 1/1000 of the price range.
    pub fn new(kind: ProblemKind, p: f64, bounds: PriceBounds, k: usize) -> Self {
        let span = bounds.p_max() - bounds.p_min();
        let step = if span > 0.0 { span / 1000.0 } else { 1.0 };
        Self {
            kind,
            p,
            bounds,
            k,
            step,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    /// Ramp levels from the near bound to `p`, always ending exactly at `p`.
    pub fn levels(&self) -> Vec<f64> {
        let (start, dir) = match self.kind {
            ProblemKind::MaxSearch => (self.bounds.p_min(), 1.0),
            ProblemKind::MinSearch => (self.bounds.p_max(), -1.0),
        };
        let gap = (self.p - start).abs();
        let mut levels = Vec::new();
        let mut j = 0usize;
        loop {
            let offset = j as f64 * self.step;
            if offset >= gap * (1.0 - 1e-12) {
                break;
            }
            levels.push(start + dir * offset);
            j += 1;
        }
        levels.push(self.p);
        levels
    }
}

pub fn gen_p_instance(spec: &PInstanceSpec) -> Result<SearchInstance> {
    if !spec.bounds.contains(spec.p) {
        return Err(invalid(format!("p={} outside the price bounds", spec.p)));
    }
    if !(spec.step > 0.0 && spec.step.is_finite()) {
        return Err(invalid(format!("step must be positive, got {}", spec.step)));
    }
    if spec.k == 0 {
        return Err(invalid("budget k must be positive"));
    }
    let levels = spec.levels();
    let mut prices = Vec::with_capacity((levels.len() + 1) * spec.k);
    for &l in &levels {
        prices.extend(std::iter::repeat_n(l, spec.k));
    }
    prices.extend(std::iter::repeat_n(spec.bounds.worst_price(spec.kind), spec.k));
    SearchInstance::new(prices, spec.k, spec.bounds)
}

/// The sequence on which OTA selects exactly the first `i` thresholds and then
/// faces an extreme just short of threshold `i+1`: thresholds 1..=i, `k`
/// copies of threshold `i+1` shifted by `epsilon` away from acceptance, then
/// `k` worst prices. Its ratio tends to the ratio of interval `i+1`.
pub fn gen_worst_case_sequence(schedule: &ThresholdSchedule, i: usize, epsilon: f64) -> Result<SearchInstance> {
    let k = schedule.k();
    if i > k {
        return Err(domain(format!("interval index {i} outside 0..={k}")));
    }
    if !(epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let kind = schedule.kind();
    let bounds = *schedule.bounds();
    let next = schedule.threshold(i + 1)?;
    let near_miss = bounds.clamp(match kind {
        ProblemKind::MaxSearch => next - epsilon,
        ProblemKind::MinSearch => next + epsilon,
    });
    let mut prices = Vec::with_capacity(i + 2 * k);
    prices.extend_from_slice(&schedule.values()[..i]);
    prices.extend(std::iter::repeat_n(near_miss, k));
    prices.extend(std::iter::repeat_n(bounds.worst_price(kind), k));
    SearchInstance::new(prices, k, bounds)
}

/// Default epsilon for [`gen_worst_case_sequence`].
pub fn default_epsilon(bounds: &PriceBounds) -> f64 {
    1e-6 * bounds.p_min()
}

/// With probability `rho` (drawn from `seed`), replaces the last `k` prices
/// by the worst price for `kind`.
pub fn apply_rho_hard(instance: &SearchInstance, kind: ProblemKind, rho: f64, seed: u64) -> Result<SearchInstance> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(domain(format!("rho {rho} outside [0, 1]")));
    }
    let u: f64 = rng_from(seed).random();
    if u >= rho {
        return Ok(instance.clone());
    }
    let mut prices = instance.prices().to_vec();
    let t = prices.len();
    let worst = instance.bounds().worst_price(kind);
    prices[t - instance.k()..].fill(worst);
    SearchInstance::new(prices, instance.k(), *instance.bounds())
}
