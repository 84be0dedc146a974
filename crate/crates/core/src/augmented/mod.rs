//! Learning-augmented threshold schedules.
//!
//! Given a prediction `P` of the extreme price and a confidence factor, the
//! constructions here return a schedule that is `eta`-consistent (ratio at
//! most `eta` when the realized extreme is `P`) and `gamma`-robust (ratio at
//! most `gamma` on every instance), with `(eta, gamma)` on the frontier of
//! [`crate::pareto`].
//!
//! The schedule is assembled from up to three segments: a robust prefix
//! that follows the `gamma` curve (`z`), a prediction block made of a flat
//! run at `P` followed by an `eta`-balanced continuation (`c`), and a robust
//! tail that climbs to the far bound (`r`).

mod checks;
mod kmax;
mod kmin;
mod ratios;

use std::fmt;

pub use checks::{check_prop_beg_max, check_prop_beg_min, check_prop_end_max, check_prop_end_min};
pub use kmax::{design_max, design_max_target, sigma_star_max};
pub use kmin::{design_min, design_min_target, sigma_star_min};
pub use ratios::{
    interval_ratios, max_interval_ratio, prediction_ratio, ratio_alpha, ratio_beta,
};

use crate::error::{Error, Result};
use crate::model::{ParetoPoint, PriceBounds, ProblemKind, ThresholdSchedule, RATIO_TOL};
use crate::worstcase::worst_case_thresholds;

/// Which branch of the construction produced a design.
///
/// I-III are the max-search cases (prediction low, middle, high), IV-VI the
/// min-search cases (prediction high, middle, low).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DesignCase {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl DesignCase {
    pub fn label(self) -> &'static str {
        match self {
            DesignCase::I => "I",
            DesignCase::II => "II",
            DesignCase::III => "III",
            DesignCase::IV => "IV",
            DesignCase::V => "V",
            DesignCase::VI => "VI",
        }
    }
}

impl fmt::Display for DesignCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Origin of one threshold in a design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Segment {
    /// Robust prefix.
    Prefix,
    /// Prediction block (flat run plus balanced continuation).
    Prediction,
    /// Robust tail.
    Tail,
}

impl Segment {
    pub fn label(self) -> &'static str {
        match self {
            Segment::Prefix => "z",
            Segment::Prediction => "c",
            Segment::Tail => "r",
        }
    }
}

/// A designed schedule plus the construction's bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedDesign {
    pub schedule: ThresholdSchedule,
    pub case: DesignCase,
    /// Segment of each threshold, same length as the schedule.
    pub segments: Vec<Segment>,
    /// Length of the robust prefix.
    pub j_star: usize,
    /// Last index of the flat block at the prediction (0 in Cases I and IV).
    pub m_star: usize,
    /// Last index before the robust tail.
    pub i_star: usize,
    pub sigma_star: usize,
    pub p_tilde_1: f64,
    pub p_tilde_2: f64,
    pub target: ParetoPoint,
    pub prediction: f64,
}

impl AugmentedDesign {
    pub fn kind(&self) -> ProblemKind {
        self.schedule.kind()
    }

    /// Largest interval ratio over all k+1 intervals.
    pub fn max_ratio(&self) -> f64 {
        max_interval_ratio(&self.schedule)
    }

    /// Ratio when the realized extreme equals the prediction.
    pub fn consistency_ratio(&self) -> f64 {
        prediction_ratio(&self.schedule, self.prediction)
    }

    /// Re-checks robustness and consistency against the target.
    pub fn verify(&self) -> Result<()> {
        let gamma = self.target.gamma();
        let eta = self.target.eta();
        let ratios = interval_ratios(&self.schedule);
        if let Some((i, r)) = ratios
            .iter()
            .enumerate()
            .find(|(_, &r)| r > gamma * (1.0 + RATIO_TOL))
        {
            return Err(Error::Construction(format!(
                "case {} at P={}: interval {} ratio {r} exceeds robustness {gamma}",
                self.case,
                self.prediction,
                i + 1
            )));
        }
        let at_p = self.consistency_ratio();
        if at_p > eta * (1.0 + RATIO_TOL) {
            return Err(Error::Construction(format!(
                "case {} at P={}: ratio {at_p} at the prediction exceeds consistency {eta}",
                self.case, self.prediction
            )));
        }
        // intervals covered by the balanced continuation
        for i in self.m_star + 1..=self.i_star {
            if ratios[i - 1] > eta * (1.0 + RATIO_TOL) {
                return Err(Error::Construction(format!(
                    "case {} at P={}: interval {i} ratio {} exceeds consistency {eta}",
                    self.case,
                    self.prediction,
                    ratios[i - 1]
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn segments(k: usize, j_star: usize, i_star: usize) -> Vec<Segment> {
    (1..=k)
        .map(|i| {
            if i <= j_star {
                Segment::Prefix
            } else if i <= i_star {
                Segment::Prediction
            } else {
                Segment::Tail
            }
        })
        .collect()
}

/// Design for `kind` from a confidence factor.
pub fn design(kind: ProblemKind, prediction: f64, lambda: f64, bounds: &PriceBounds, k: usize) -> Result<AugmentedDesign> {
    match kind {
        ProblemKind::MaxSearch => design_max(prediction, lambda, bounds, k),
        ProblemKind::MinSearch => design_min(prediction, lambda, bounds, k),
    }
}

/// Design for `kind` from an explicit (eta, gamma) target.
pub fn design_target(
    kind: ProblemKind,
    prediction: f64,
    target: ParetoPoint,
    bounds: &PriceBounds,
    k: usize,
) -> Result<AugmentedDesign> {
    match kind {
        ProblemKind::MaxSearch => design_max_target(prediction, target, bounds, k),
        ProblemKind::MinSearch => design_min_target(prediction, target, bounds, k),
    }
}

/// Schedule used by OTA for confidence `lambda`. Full distrust (`lambda = 1`)
/// returns the worst-case optimal schedule itself.
pub fn lambda_schedule(
    kind: ProblemKind,
    prediction: f64,
    lambda: f64,
    bounds: &PriceBounds,
    k: usize,
) -> Result<ThresholdSchedule> {
    if lambda == 1.0 {
        return Ok(worst_case_thresholds(bounds, k, kind)?.schedule);
    }
    Ok(design(kind, prediction, lambda, bounds, k)?.schedule)
}
