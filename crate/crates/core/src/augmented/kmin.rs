//! Min-search designs (Cases IV-VI).

use super::kmax::check_inputs;
use super::{segments, AugmentedDesign, DesignCase};
use crate::error::{Error, Result};
use crate::model::{ParetoPoint, PriceBounds, ProblemKind, ThresholdSchedule, RATIO_TOL};
use crate::pareto::{ceil_clamped, target_point, FrontierSpec};
use crate::worstcase::falling_threshold;

/// Largest `sigma` in `1..=k` for which the prediction curve can hand over
/// to the robust tail at `sigma` without breaking `gamma`.
pub fn sigma_star_min(target: &ParetoPoint, bounds: &PriceBounds, k: usize) -> Result<usize> {
    let (eta, gamma) = (target.eta(), target.gamma());
    let theta = bounds.theta();
    let kf = k as f64;
    (1..=k)
        .rev()
        .find(|&s| {
            let up = 1.0 - (1.0 - 1.0 / eta) * (1.0 + 1.0 / (eta * kf)).powi(s as i32);
            let down = 1.0 - (1.0 - 1.0 / theta) / (1.0 + 1.0 / (gamma * kf)).powi((k - s) as i32);
            up / down <= gamma / eta * (1.0 + RATIO_TOL)
        })
        .ok_or_else(|| {
            Error::Construction(format!(
                "no hand-over index for eta={eta}, gamma={gamma}; target below the frontier"
            ))
        })
}

fn tail(bounds: &PriceBounds, gamma: f64, k: usize, i: usize) -> f64 {
    let span = bounds.p_max() - bounds.p_min();
    bounds.p_max() - span / (1.0 + 1.0 / (gamma * k as f64)).powi((k + 1 - i) as i32)
}

/// Min-search design for confidence `lambda`.
pub fn design_min(prediction: f64, lambda: f64, bounds: &PriceBounds, k: usize) -> Result<AugmentedDesign> {
    let spec = FrontierSpec::new(*bounds, k, ProblemKind::MinSearch)?;
    let target = target_point(lambda, &spec)?;
    design_min_target(prediction, target, bounds, k)
}

/// Min-search design for an explicit target.
pub fn design_min_target(
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

    let sigma = sigma_star_min(&target, bounds, k)?;
    let p_tilde_1 = falling_threshold(p_max, eta, k, sigma);
    let p_tilde_2 = p_tilde_1.min(p_max / gamma);

    let (case, head, j_star, m_star, i_star) = if p > p_tilde_1 {
        let head: Vec<f64> = (1..=sigma).map(|i| falling_threshold(p_max, eta, k, i)).collect();
        (DesignCase::IV, head, 0, 0, sigma)
    } else {
        let (case, j_star) = if p > p_tilde_2 {
            (DesignCase::V, 0)
        } else {
            let x = ((1.0 - p / p_max) / (1.0 - 1.0 / gamma)).ln() / (1.0 + 1.0 / (gamma * kf)).ln();
            (DesignCase::VI, ceil_clamped(x, k))
        };
        let mut head: Vec<f64> = (1..=j_star).map(|i| falling_threshold(p_max, gamma, k, i)).collect();
        let base = head.iter().sum::<f64>() + (k - j_star) as f64 * p_max;
        // smallest flat block after which the pivot ratio is within eta
        let m_star = (j_star..=k)
            .find(|&m| base + (m - j_star) as f64 * (p - p_max) <= kf * eta * p)
            .unwrap_or(k);
        head.resize(m_star, p);
        if m_star < k {
            let pivot = (base + (m_star - j_star) as f64 * (p - p_max)) / (eta * kf);
            head.extend(
                (m_star + 1..=k)
                    .map(|i| p_max - (p_max - pivot) * (1.0 + 1.0 / (eta * kf)).powi((i - m_star - 1) as i32)),
            );
        }

        let mut numer = Vec::with_capacity(k + 1);
        numer.push(kf * p_max);
        for &v in &head {
            numer.push(numer.last().unwrap() + (v - p_max));
        }
        let i_star = (j_star..=k)
            .rev()
            .find(|&i| {
                let next = if i < k { tail(bounds, gamma, k, i + 1) } else { p_min };
                numer[i] / (kf * next) <= gamma * (1.0 + RATIO_TOL)
            })
            .ok_or_else(|| Error::Construction(format!("no tail hand-over for P={p}, gamma={gamma}")))?;
        head.truncate(i_star);
        (case, head, j_star, m_star, i_star)
    };

    let mut values = head;
    values.extend((i_star + 1..=k).map(|i| tail(bounds, gamma, k, i)));
    let schedule = ThresholdSchedule::from_raw(ProblemKind::MinSearch, values, *bounds)?;
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
    use crate::augmented::{interval_ratios, ratio_beta};
    use crate::worstcase::solve_phi_star;

    fn b() -> PriceBounds {
        PriceBounds::new(5.0, 50.0).unwrap()
    }

    #[test]
    fn sigma_scan_matches_exhaustive() {
        let b = PriceBounds::new(1.0, 10.0).unwrap();
        for k in 1..=50 {
            let spec = FrontierSpec::new(b, k, ProblemKind::MinSearch).unwrap();
            for &lam in &[0.0, 0.3, 0.7, 1.0] {
                let t = target_point(lam, &spec).unwrap();
                let (eta, gamma) = (t.eta(), t.gamma());
                let kf = k as f64;
                let best = (1..=k)
                    .filter(|&s| {
                        let up = 1.0 - (1.0 - 1.0 / eta) * (1.0 + 1.0 / (eta * kf)).powi(s as i32);
                        let down = 1.0 - 0.9 / (1.0 + 1.0 / (gamma * kf)).powi((k - s) as i32);
                        up / down <= gamma / eta * (1.0 + RATIO_TOL)
                    })
                    .max();
                assert_eq!(best, Some(sigma_star_min(&t, &b, k).unwrap()));
            }
        }
        let spec = FrontierSpec::new(b, 20, ProblemKind::MinSearch).unwrap();
        assert_eq!(sigma_star_min(&target_point(0.0, &spec).unwrap(), &b, 20).unwrap(), 20);
    }

    #[test]
    fn mid_lambda_thresholds_in_range() {
        let d = design_min(25.0, 0.5, &b(), 20).unwrap();
        assert!(d.sigma_star >= 1 && d.sigma_star <= 20);
        assert!(d.p_tilde_1 > 5.0 && d.p_tilde_1 < 50.0);
    }

    #[test]
    fn case_order_follows_prediction() {
        let rank = |c: DesignCase| match c {
            DesignCase::VI => 0,
            DesignCase::V => 1,
            DesignCase::IV => 2,
            other => panic!("max case {other} in a min design"),
        };
        let mut seen = Vec::new();
        for j in 0..=200 {
            let p = 5.0 + 45.0 * j as f64 / 200.0;
            seen.push(rank(design_min(p, 0.5, &b(), 20).unwrap().case));
        }
        assert!(seen.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(seen[0], 0);
        assert_eq!(*seen.last().unwrap(), 2);
    }

    #[test]
    fn full_distrust_keeps_worst_case_ratio() {
        let phi = solve_phi_star(&b(), 20).unwrap();
        for j in 0..=10 {
            let p = 5.0 + 4.5 * j as f64;
            assert!(design_min(p, 1.0, &b(), 20).unwrap().max_ratio() <= phi + 1e-9);
        }
    }

    #[test]
    fn full_trust_at_upper_bound() {
        let d = design_min(50.0, 0.0, &b(), 20).unwrap();
        assert_eq!(d.consistency_ratio(), 1.0);
    }

    #[test]
    fn pivot_hits_consistency() {
        let spec = FrontierSpec::new(b(), 20, ProblemKind::MinSearch).unwrap();
        let t = target_point(0.5, &spec).unwrap();
        for &p in &[8.0, 12.0, 20.0] {
            let d = design_min_target(p, t, &b(), 20).unwrap();
            if d.case != DesignCase::IV && d.m_star < d.i_star {
                let r = ratio_beta(&d.schedule, d.m_star + 1).unwrap();
                assert!(r <= t.eta() + 1e-9, "P={p}: {r}");
            }
        }
    }

    #[test]
    fn robust_and_consistent_on_grid() {
        for li in 0..=20 {
            let lam = li as f64 / 20.0;
            for pi in 0..=20 {
                let p = 5.0 + 45.0 * pi as f64 / 20.0;
                let d = design_min(p, lam, &b(), 20).unwrap();
                let g = d.target.gamma();
                assert!(interval_ratios(&d.schedule).iter().all(|&r| r <= g + 1e-9));
                assert!(d.consistency_ratio() <= d.target.eta() + 1e-9);
                assert!(d.m_star <= d.i_star);
            }
        }
    }
}
