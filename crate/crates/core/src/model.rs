//! Domain types shared across the crate.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, invalid, Error, Result};

/// Tolerance used when comparing competitive ratios.
pub const RATIO_TOL: f64 = 1e-9;

/// Which side of the market the decision maker is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    /// Sell k units: select the k highest prices.
    MaxSearch,
    /// Buy k units: select the k lowest prices.
    MinSearch,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 2] = [ProblemKind::MaxSearch, ProblemKind::MinSearch];

    pub fn label(self) -> &'static str {
        match self {
            ProblemKind::MaxSearch => "max",
            ProblemKind::MinSearch => "min",
        }
    }

    /// Whether `price` passes `threshold` (equality selects).
    #[inline]
    pub fn accepts(self, price: f64, threshold: f64) -> bool {
        match self {
            ProblemKind::MaxSearch => price >= threshold,
            ProblemKind::MinSearch => price <= threshold,
        }
    }

    /// The extreme of a non-empty price slice that matters for this kind.
    pub fn extreme(self, prices: &[f64]) -> f64 {
        match self {
            ProblemKind::MaxSearch => prices.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ProblemKind::MinSearch => prices.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" | "k-max" | "MaxSearch" => Ok(ProblemKind::MaxSearch),
            "min" | "k-min" | "MinSearch" => Ok(ProblemKind::MinSearch),
            other => Err(invalid(format!("unknown problem kind '{other}'"))),
        }
    }
}

/// Known price range `[p_min, p_max]` and its fluctuation ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceBounds {
    p_min: f64,
    p_max: f64,
    theta: f64,
}

impl PriceBounds {
    pub fn new(p_min: f64, p_max: f64) -> Result<Self> {
        if !(p_min.is_finite() && p_max.is_finite()) {
            return Err(invalid("price bounds must be finite"));
        }
        if p_min <= 0.0 {
            return Err(invalid(format!("p_min must be positive, got {p_min}")));
        }
        if p_max < p_min {
            return Err(invalid(format!("p_max ({p_max}) < p_min ({p_min})")));
        }
        Ok(Self {
            p_min,
            p_max,
            theta: p_max / p_min,
        })
    }

    /// Bounds with `p_min` and fluctuation ratio `theta`.
    pub fn from_theta(p_min: f64, theta: f64) -> Result<Self> {
        if !(theta >= 1.0) {
            return Err(invalid(format!("theta must be >= 1, got {theta}")));
        }
        Self::new(p_min, p_min * theta)
    }

    #[inline]
    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    #[inline]
    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn contains(&self, price: f64) -> bool {
        price >= self.p_min && price <= self.p_max
    }

    #[inline]
    pub fn clamp(&self, price: f64) -> f64 {
        price.clamp(self.p_min, self.p_max)
    }

    /// The price an adversary drops to after the peak (p_min for k-max, p_max for k-min).
    #[inline]
    pub fn worst_price(&self, kind: ProblemKind) -> f64 {
        match kind {
            ProblemKind::MaxSearch => self.p_min,
            ProblemKind::MinSearch => self.p_max,
        }
    }
}

/// A finite price sequence with a selection budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchInstance {
    prices: Vec<f64>,
    k: usize,
    bounds: PriceBounds,
}

impl SearchInstance {
    pub fn new(prices: Vec<f64>, k: usize, bounds: PriceBounds) -> Result<Self> {
        if k == 0 {
            return Err(invalid("budget k must be positive"));
        }
        if prices.len() < k {
            return Err(invalid(format!(
                "horizon T={} is shorter than budget k={k}",
                prices.len()
            )));
        }
        if let Some((t, p)) = prices.iter().enumerate().find(|(_, p)| !bounds.contains(**p)) {
            return Err(invalid(format!(
                "price {p} at t={} outside [{}, {}]",
                t + 1,
                bounds.p_min(),
                bounds.p_max()
            )));
        }
        Ok(Self { prices, k, bounds })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn horizon(&self) -> usize {
        self.prices.len()
    }

    pub fn bounds(&self) -> &PriceBounds {
        &self.bounds
    }

    pub fn into_prices(self) -> Vec<f64> {
        self.prices
    }
}

/// The k thresholds driving an OTA run.
///
/// Max-search schedules are non-decreasing, min-search schedules non-increasing.
/// Index 0 and k+1 are sentinels: `p_min`/`p_max` for max search, `p_max`/`p_min`
/// for min search.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSchedule {
    kind: ProblemKind,
    values: Vec<f64>,
    bounds: PriceBounds,
}

impl ThresholdSchedule {
    pub fn new(kind: ProblemKind, values: Vec<f64>, bounds: PriceBounds) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("threshold schedule must have k >= 1 values"));
        }
        if let Some(v) = values.iter().find(|v| !bounds.contains(**v)) {
            return Err(invalid(format!(
                "threshold {v} outside [{}, {}]",
                bounds.p_min(),
                bounds.p_max()
            )));
        }
        let monotone = values.windows(2).all(|w| match kind {
            ProblemKind::MaxSearch => w[0] <= w[1],
            ProblemKind::MinSearch => w[0] >= w[1],
        });
        if !monotone {
            return Err(invalid(format!(
                "{kind}-search thresholds must be {}",
                match kind {
                    ProblemKind::MaxSearch => "non-decreasing",
                    ProblemKind::MinSearch => "non-increasing",
                }
            )));
        }
        Ok(Self {
            kind,
            values,
            bounds,
        })
    }

    /// Clips `values` into the bounds and enforces monotonicity with a running
    /// max/min before validating. Only absorbs floating-point drift.
    pub(crate) fn from_raw(kind: ProblemKind, mut values: Vec<f64>, bounds: PriceBounds) -> Result<Self> {
        let mut prev = match kind {
            ProblemKind::MaxSearch => bounds.p_min(),
            ProblemKind::MinSearch => bounds.p_max(),
        };
        for v in values.iter_mut() {
            let c = bounds.clamp(*v);
            *v = match kind {
                ProblemKind::MaxSearch => c.max(prev),
                ProblemKind::MinSearch => c.min(prev),
            };
            prev = *v;
        }
        Self::new(kind, values, bounds)
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bounds(&self) -> &PriceBounds {
        &self.bounds
    }

    pub fn k(&self) -> usize {
        self.values.len()
    }

    /// Threshold `i` in `0..=k+1`, with sentinels at both ends.
    pub fn threshold(&self, i: usize) -> Result<f64> {
        let k = self.k();
        match (i, self.kind) {
            (0, ProblemKind::MaxSearch) => Ok(self.bounds.p_min()),
            (0, ProblemKind::MinSearch) => Ok(self.bounds.p_max()),
            (i, ProblemKind::MaxSearch) if i == k + 1 => Ok(self.bounds.p_max()),
            (i, ProblemKind::MinSearch) if i == k + 1 => Ok(self.bounds.p_min()),
            (i, _) if i <= k => Ok(self.values[i - 1]),
            (i, _) => Err(domain(format!("threshold index {i} outside 0..={}", k + 1))),
        }
    }
}

/// One step of an OTA run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub selected: bool,
    pub price: f64,
    /// Selected only because the remaining horizon equals the remaining budget.
    pub compulsory: bool,
}

/// Per-step decisions and totals of one OTA execution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    decisions: Vec<Decision>,
    total_value: f64,
    num_selected: usize,
}

impl RunTrace {
    pub(crate) fn new(decisions: Vec<Decision>) -> Self {
        let (total_value, num_selected) = decisions
            .iter()
            .filter(|d| d.selected)
            .fold((0.0, 0), |(sum, n), d| (sum + d.price, n + 1));
        Self {
            decisions,
            total_value,
            num_selected,
        }
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    pub fn total_value(&self) -> f64 {
        self.total_value
    }

    pub fn num_selected(&self) -> usize {
        self.num_selected
    }

    /// Number of items selected voluntarily (price passed the threshold).
    pub fn voluntary_count(&self) -> usize {
        self.decisions
            .iter()
            .filter(|d| d.selected && !d.compulsory)
            .count()
    }

    pub fn compulsory_count(&self) -> usize {
        self.decisions.iter().filter(|d| d.compulsory).count()
    }
}

/// A (lambda, eta, gamma) triple: confidence, consistency, robustness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoPoint {
    lambda: Option<f64>,
    eta: f64,
    gamma: f64,
}

impl ParetoPoint {
    /// Builds a target; requires `1 <= eta <= gamma` up to [`RATIO_TOL`].
    pub fn new(lambda: f64, eta: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(domain(format!("lambda {lambda} outside [0, 1]")));
        }
        if !(eta.is_finite() && gamma.is_finite()) {
            return Err(domain("eta and gamma must be finite"));
        }
        if eta < 1.0 - RATIO_TOL || gamma < eta - RATIO_TOL {
            return Err(domain(format!(
                "need 1 <= eta <= gamma, got eta={eta}, gamma={gamma}"
            )));
        }
        Ok(Self {
            lambda: Some(lambda),
            eta: eta.max(1.0),
            gamma: gamma.max(eta.max(1.0)),
        })
    }

    /// Target given directly by its ratios, with no confidence factor attached.
    pub fn from_ratios(eta: f64, gamma: f64) -> Result<Self> {
        let mut p = Self::new(0.0, eta, gamma)?;
        p.lambda = None;
        Ok(p)
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Checks `gamma <= theta` for the owning bounds.
    pub fn check_bounds(&self, bounds: &PriceBounds) -> Result<()> {
        if self.gamma > bounds.theta() + RATIO_TOL {
            return Err(domain(format!(
                "robustness {} exceeds theta {}",
                self.gamma,
                bounds.theta()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_derive_theta() {
        let b = PriceBounds::new(5.0, 50.0).unwrap();
        assert_eq!(b.theta(), 10.0);
        assert!(PriceBounds::new(0.0, 1.0).is_err());
        assert!(PriceBounds::new(2.0, 1.0).is_err());
        assert_eq!(PriceBounds::from_theta(5.0, 10.0).unwrap(), b);
    }

    #[test]
    fn instance_rejects_out_of_range_and_short_horizon() {
        let b = PriceBounds::new(5.0, 50.0).unwrap();
        assert!(SearchInstance::new(vec![5.0, 51.0], 1, b).is_err());
        assert!(SearchInstance::new(vec![5.0], 2, b).is_err());
        assert!(SearchInstance::new(vec![5.0], 0, b).is_err());
        assert!(SearchInstance::new(vec![5.0, 50.0], 2, b).is_ok());
    }

    #[test]
    fn schedule_sentinels_and_monotonicity() {
        let b = PriceBounds::new(5.0, 50.0).unwrap();
        let s = ThresholdSchedule::new(ProblemKind::MaxSearch, vec![10.0, 20.0], b).unwrap();
        assert_eq!(s.threshold(0).unwrap(), 5.0);
        assert_eq!(s.threshold(2).unwrap(), 20.0);
        assert_eq!(s.threshold(3).unwrap(), 50.0);
        assert!(s.threshold(4).is_err());
        assert!(ThresholdSchedule::new(ProblemKind::MaxSearch, vec![20.0, 10.0], b).is_err());

        let m = ThresholdSchedule::new(ProblemKind::MinSearch, vec![20.0, 10.0], b).unwrap();
        assert_eq!(m.threshold(0).unwrap(), 50.0);
        assert_eq!(m.threshold(3).unwrap(), 5.0);
        assert!(ThresholdSchedule::new(ProblemKind::MinSearch, vec![10.0, 20.0], b).is_err());
    }

    #[test]
    fn from_raw_absorbs_drift() {
        let b = PriceBounds::new(5.0, 50.0).unwrap();
        let s = ThresholdSchedule::from_raw(
            ProblemKind::MaxSearch,
            vec![4.999999, 10.0, 9.9999999999, 50.0000001],
            b,
        )
        .unwrap();
        assert_eq!(s.values(), &[5.0, 10.0, 10.0, 50.0]);
    }

    #[test]
    fn pareto_point_ordering() {
        assert!(ParetoPoint::new(0.5, 1.5, 2.0).is_ok());
        assert!(ParetoPoint::new(0.5, 2.5, 2.0).is_err());
        assert!(ParetoPoint::new(1.5, 1.0, 2.0).is_err());
        assert!(ParetoPoint::new(0.5, 0.5, 2.0).is_err());
        let b = PriceBounds::new(1.0, 2.0).unwrap();
        assert!(ParetoPoint::new(0.0, 1.0, 3.0).unwrap().check_bounds(&b).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("max".parse::<ProblemKind>().unwrap(), ProblemKind::MaxSearch);
        assert_eq!("min".parse::<ProblemKind>().unwrap(), ProblemKind::MinSearch);
        assert!("both".parse::<ProblemKind>().is_err());
    }
}
