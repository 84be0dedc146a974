//! Predicates for the two robustness lemmas behind the constructions: a
//! robust tail keeps every later interval within `gamma` once the hand-over
//! interval is, and a robust prefix keeps its own intervals within `gamma`
//! once the first one is.

use super::ratios::interval_ratios;
use crate::model::{ProblemKind, ThresholdSchedule, RATIO_TOL};

fn within(ratios: &[f64], range: std::ops::RangeInclusive<usize>, gamma: f64) -> bool {
    range
        .filter_map(|i| ratios.get(i - 1))
        .all(|&r| r <= gamma * (1.0 + RATIO_TOL))
}

fn end(schedule: &ThresholdSchedule, i_star: usize, gamma: f64, kind: ProblemKind) -> bool {
    if schedule.kind() != kind {
        return false;
    }
    let k = schedule.k();
    within(&interval_ratios(schedule), i_star + 2..=k + 1, gamma)
}

fn beg(schedule: &ThresholdSchedule, j_star: usize, gamma: f64, kind: ProblemKind) -> bool {
    if schedule.kind() != kind {
        return false;
    }
    within(&interval_ratios(schedule), 1..=j_star.max(1), gamma)
}

/// Intervals `i*+2 ..= k+1` of a max-search schedule are within `gamma`.
pub fn check_prop_end_max(schedule: &ThresholdSchedule, i_star: usize, gamma: f64) -> bool {
    end(schedule, i_star, gamma, ProblemKind::MaxSearch)
}

/// Intervals `1 ..= j*` of a max-search schedule are within `gamma`.
pub fn check_prop_beg_max(schedule: &ThresholdSchedule, j_star: usize, gamma: f64) -> bool {
    beg(schedule, j_star, gamma, ProblemKind::MaxSearch)
}

pub fn check_prop_end_min(schedule: &ThresholdSchedule, i_star: usize, gamma: f64) -> bool {
    end(schedule, i_star, gamma, ProblemKind::MinSearch)
}

pub fn check_prop_beg_min(schedule: &ThresholdSchedule, j_star: usize, gamma: f64) -> bool {
    beg(schedule, j_star, gamma, ProblemKind::MinSearch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::{design_max_target, design_min, DesignCase};
    use crate::model::{ParetoPoint, PriceBounds};
    use crate::worstcase::worst_case_thresholds;

    fn b() -> PriceBounds {
        PriceBounds::new(5.0, 50.0).unwrap()
    }

    fn bumped(s: &ThresholdSchedule, idx: usize, factor: f64) -> ThresholdSchedule {
        let mut v = s.values().to_vec();
        v[idx] = b().clamp(v[idx] * factor);
        ThresholdSchedule::from_raw(s.kind(), v, b()).unwrap()
    }

    #[test]
    fn worst_case_schedule_passes() {
        let wc = worst_case_thresholds(&b(), 20, ProblemKind::MaxSearch).unwrap();
        assert!(check_prop_end_max(&wc.schedule, 0, wc.cr));
        assert!(check_prop_beg_max(&wc.schedule, 20, wc.cr));
        assert!(!check_prop_end_min(&wc.schedule, 0, wc.cr));
    }

    #[test]
    fn designs_pass_and_mutations_fail() {
        let target = ParetoPoint::from_ratios(1.52, 2.63).unwrap();
        let d = design_max_target(8.0, target, &b(), 20).unwrap();
        assert_eq!((d.case, d.i_star), (DesignCase::I, 9));
        assert!(check_prop_end_max(&d.schedule, d.i_star, 2.63));
        let m = bumped(&d.schedule, d.i_star + 1, 1.2);
        assert!(!check_prop_end_max(&m, d.i_star, 2.63));

        let d = design_max_target(25.0, target, &b(), 20).unwrap();
        assert_eq!((d.case, d.j_star), (DesignCase::III, 8));
        assert!(check_prop_end_max(&d.schedule, d.i_star, 2.63));
        assert!(check_prop_beg_max(&d.schedule, d.j_star, 2.63));
        let m = bumped(&d.schedule, 1, 1.05);
        assert!(!check_prop_beg_max(&m, d.j_star, 2.63));

        let d = design_min(9.0, 0.9, &b(), 20).unwrap();
        assert_eq!(d.case, DesignCase::VI);
        assert!(d.j_star >= 2);
        let g = d.target.gamma();
        assert!(check_prop_end_min(&d.schedule, d.i_star, g));
        assert!(check_prop_beg_min(&d.schedule, d.j_star, g));
        let m = bumped(&d.schedule, 1, 0.95);
        assert!(!check_prop_beg_min(&m, d.j_star, g));
    }
}
