//! Max-search designs (Cases I-III).

use super::{segments, AugmentedDesign, DesignCase};
use crate::error::{domain, invalid, Error, Result};
use crate::model::{ParetoPoint, PriceBounds, ProblemKind, ThresholdSchedule, RATIO_TOL};
use crate::pareto::{ceil_clamped, target_point, FrontierSpec};
use crate::worstcase::rising_threshold;

/// Largest `sigma` in `1..=k` for which the prediction curve can hand over
/// to the robust tail at `sigma` without breaking `gamma`.
pub fn sigma_star_max(target: &ParetoPoint, bounds: &PriceBounds, k: usize) -> Result<usize> {
    let (eta, gamma) = (target.eta(), target.gamma());
    let theta = bounds.theta();
    let kf = k as f64;
    (1..=k)
        .rev()
        .find(|&s| {
            let up = 1.0 + (theta - 1.0) / (1.0 + gamma / kf).powi((k - s) as i32);
            let down = 1.0 + (eta - 1.0) * (1.0 + eta / kf).powi(s as i32);
            up / down <= gamma / eta * (1.0 + RATIO_TOL)
        })
        .ok_or_else(|| {
            Error::Construction(format!(
                "no hand-over index for eta={eta}, gamma={gamma}; target below the frontier"
            ))
        })
}

/// Robust tail threshold `i`.
fn tail(bounds: &PriceBounds, gamma: f64, k: usize, i: usize) -> f64 {
    let span = bounds.p_max() - bounds.p_min();
    bounds.p_min() + span / (1.0 + gamma / k as f64).powi((k + 1 - i) as i32)
}

pub(super) fn check_inputs(prediction: f64, target: &ParetoPoint, bounds: &PriceBounds, k: usize) -> Result<()> {
    if k == 0 {
        return Err(invalid("budget k must be positive"));
    }
    if !bounds.contains(prediction) {
        return Err(domain(format!(
            "prediction {prediction} outside [{}, {}]",
            bounds.p_min(),
            bounds.p_max()
        )));
    }
    target.check_bounds(bounds)
}

/// Max-search design for confidence `lambda`.
pub fn design_max(prediction: f64, lambda: f64, bounds: &PriceBounds, k: usize) -> Result<AugmentedDesign> {
    let spec = FrontierSpec::new(*bounds, k, ProblemKind::MaxSearch)?;
    let target = target_point(lambda, &spec)?;
    design_max_target(prediction, target, bounds, k)
}

/// Max-search design for an explicit target.
pub fn design_max_target(
    prediction: f64,
    target: ParetoPoint,
    bounds: &PriceBounds,
    k: usize,
) -> Result<AugmentedDesign> {
    check_inputs(prediction, &target, bounds, k)?;
    let (eta, gamma) = (target.eta(), target.gamma());
    let (p_min, p_max) = (bounds.p_min(), bounds.p_max());
    let kf = k as f64;
    let p = prediction;

    let sigma = sigma_star_max(&target, bounds, k)?;
    let p_tilde_1 = rising_threshold(p_min, eta, k, sigma);
    let p_tilde_2 = p_tilde_1.max(gamma * p_min);

    let (case, head, j_star, m_star, i_star) = if p <= p_tilde_1 {
        let head: Vec<f64> = (1..=sigma).map(|i| rising_threshold(p_min, eta, k, i)).collect();
        (DesignCase::I, head, 0, 0, sigma)
    } else {
        let (case, j_star) = if p <= p_tilde_2 {
            (DesignCase::II, 0)
        } else {
            let x = ((p / p_min - 1.0) / (gamma - 1.0)).ln() / (1.0 + gamma / kf).ln();
            (DesignCase::III, ceil_clamped(x, k))
        };
        let mut head: Vec<f64> = (1..=j_star).map(|i| rising_threshold(p_min, gamma, k, i)).collect();
        let base = head.iter().sum::<f64>() + (k - j_star) as f64 * p_min;
        let flat = ((kf * p / eta - base) / (p - p_min)).ceil().max(0.0);
        let m_star = (j_star + flat as usize).min(k);
        head.resize(m_star, p);
        if m_star < k {
            let pivot = eta * (base + (m_star - j_star) as f64 * (p - p_min)) / kf;
            head.extend(
                (m_star + 1..=k).map(|i| p_min + (pivot - p_min) * (1.0 + eta / kf).powi((i - m_star - 1) as i32)),
            );
        }

        // largest i* whose next interval, read off the robust tail, stays within gamma
        let mut denom = Vec::with_capacity(k + 1);
        denom.push(kf * p_min);
        for &v in &head {
            denom.push(denom.last().unwrap() + (v - p_min));
        }
        let i_star = (j_star..=k)
            .rev()
            .find(|&i| {
                let next = if i < k { tail(bounds, gamma, k, i + 1) } else { p_max };
                kf * next / denom[i] <= gamma * (1.0 + RATIO_TOL)
            })
            .ok_or_else(|| Error::Construction(format!("no tail hand-over for P={p}, gamma={gamma}")))?;
        head.truncate(i_star);
        (case, head, j_star, m_star, i_star)
    };

    let mut values = head;
    values.extend((i_star + 1..=k).map(|i| tail(bounds, gamma, k, i)));
    let schedule = ThresholdSchedule::from_raw(ProblemKind::MaxSearch, values, *bounds)?;
    let design = AugmentedDesign {
        schedule,
        case,
        segments: segments(k, j_star, i_star),
        j_star,
        m_star,
        i_star,
        sigma_star: sigma,
        p_tilde_1,
        p_tilde_2,
        target,
        prediction,
    };
    design.verify()?;
    Ok(design)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::{interval_ratios, ratio_alpha};
    use crate::worstcase::solve_alpha_star;

    fn fig_bounds() -> PriceBounds {
        PriceBounds::new(5.0, 50.0).unwrap()
    }

    fn fig_target() -> ParetoPoint {
        ParetoPoint::from_ratios(1.52, 2.63).unwrap()
    }

    #[test]
    fn reference_case_classification() {
        let b = fig_bounds();
        let cases: Vec<DesignCase> = [8.0, 12.0, 15.0, 25.0]
            .iter()
            .map(|&p| design_max_target(p, fig_target(), &b, 20).unwrap().case)
            .collect();
        assert_eq!(cases, vec![DesignCase::I, DesignCase::II, DesignCase::III, DesignCase::III]);
        let d = design_max_target(8.0, fig_target(), &b, 20).unwrap();
        assert_eq!(d.sigma_star, 9);
        assert!(d.p_tilde_1 > 8.0 && d.p_tilde_1 < 12.0);
        assert!((d.p_tilde_2 - 13.15).abs() < 1e-12);
    }

    #[test]
    fn sigma_scan_matches_exhaustive() {
        let b = PriceBounds::new(1.0, 10.0).unwrap();
        for k in 1..=50 {
            let spec = FrontierSpec::new(b, k, ProblemKind::MaxSearch).unwrap();
            for &lam in &[0.0, 0.3, 0.7, 1.0] {
                let t = target_point(lam, &spec).unwrap();
                let (eta, gamma) = (t.eta(), t.gamma());
                let kf = k as f64;
                let best = (1..=k)
                    .filter(|&s| {
                        let up = 1.0 + 9.0 / (1.0 + gamma / kf).powi((k - s) as i32);
                        let down = 1.0 + (eta - 1.0) * (1.0 + eta / kf).powi(s as i32);
                        up / down <= gamma / eta * (1.0 + RATIO_TOL)
                    })
                    .max();
                assert_eq!(best, Some(sigma_star_max(&t, &b, k).unwrap()));
            }
        }
        // fully trusting the prediction hands over at the last index
        let spec = FrontierSpec::new(b, 20, ProblemKind::MaxSearch).unwrap();
        assert_eq!(sigma_star_max(&target_point(0.0, &spec).unwrap(), &b, 20).unwrap(), 20);
    }

    #[test]
    fn pivot_hits_consistency_exactly() {
        let b = fig_bounds();
        for &p in &[12.0, 15.0, 25.0] {
            let d = design_max_target(p, fig_target(), &b, 20).unwrap();
            if d.m_star < d.i_star {
                let r = ratio_alpha(&d.schedule, d.m_star + 1).unwrap();
                assert!((r - 1.52).abs() < 1e-9, "P={p}: {r}");
            }
        }
    }

    #[test]
    fn full_distrust_keeps_worst_case_ratio() {
        let b = fig_bounds();
        let a = solve_alpha_star(&b, 20).unwrap();
        for j in 0..=10 {
            let p = 5.0 + 4.5 * j as f64;
            let d = design_max(p, 1.0, &b, 20).unwrap();
            assert!(d.max_ratio() <= a + 1e-9);
        }
    }

    #[test]
    fn full_trust_at_lower_bound() {
        let b = fig_bounds();
        let d = design_max(5.0, 0.0, &b, 20).unwrap();
        assert_eq!(d.consistency_ratio(), 1.0);
        assert_eq!(d.schedule.values()[0], 5.0);
    }

    #[test]
    fn robust_and_consistent_on_grid() {
        let b = fig_bounds();
        for li in 0..=20 {
            let lam = li as f64 / 20.0;
            for pi in 0..=20 {
                let p = 5.0 + 45.0 * pi as f64 / 20.0;
                let d = design_max(p, lam, &b, 20).unwrap();
                let g = d.target.gamma();
                assert!(interval_ratios(&d.schedule).iter().all(|&r| r <= g + 1e-9));
                assert!(d.consistency_ratio() <= d.target.eta() + 1e-9);
                assert!(d.j_star <= d.m_star.max(d.j_star) && d.m_star <= d.i_star && d.i_star <= 20);
            }
        }
    }

    #[test]
    fn rejects_out_of_range_prediction() {
        let b = fig_bounds();
        assert!(design_max(4.0, 0.5, &b, 20).is_err());
        assert!(design_max(10.0, 1.5, &b, 20).is_err());
    }
}
