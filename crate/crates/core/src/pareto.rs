//! Consistency lower bounds as a function of robustness, and the mapping from
//! a confidence factor to a target (consistency, robustness) pair.

use crate::error::{domain, invalid, Result};
use crate::model::{ParetoPoint, PriceBounds, ProblemKind, RATIO_TOL};
use crate::worstcase::solve_cr_star;

/// Parameters of one frontier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierSpec {
    pub bounds: PriceBounds,
    pub k: usize,
    pub kind: ProblemKind,
    /// Worst-case optimal ratio for these parameters.
    pub cr_star: f64,
}

impl FrontierSpec {
    pub fn new(bounds: PriceBounds, k: usize, kind: ProblemKind) -> Result<Self> {
        let cr_star = solve_cr_star(&bounds, k, kind)?;
        Ok(Self {
            bounds,
            k,
            kind,
            cr_star,
        })
    }

    pub fn theta(&self) -> f64 {
        self.bounds.theta()
    }

    /// Robustness level for confidence `lambda`.
    pub fn gamma_for(&self, lambda: f64) -> f64 {
        self.cr_star + (1.0 - lambda) * (self.theta() - self.cr_star)
    }

    fn check(&self, gamma: f64, want: ProblemKind) -> Result<()> {
        if self.kind != want {
            return Err(invalid(format!(
                "{want}-search bound requested for a {}-search frontier",
                self.kind
            )));
        }
        let lo = self.cr_star - RATIO_TOL;
        let hi = self.theta() + RATIO_TOL;
        if !(gamma >= lo && gamma <= hi) {
            return Err(domain(format!(
                "robustness {gamma} outside [{}, {}]",
                self.cr_star,
                self.theta()
            )));
        }
        Ok(())
    }
}

/// Rounds `x` to the nearest integer when it is within 1e-9 of it, so that
/// exact identities survive floating-point noise before a ceiling.
pub(crate) fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x
    }
}

pub(crate) fn ceil_clamped(x: f64, k: usize) -> usize {
    let c = snap(x).ceil();
    if c <= 0.0 {
        0
    } else {
        (c as usize).min(k)
    }
}

/// Number of intervals the max-search adversary needs to climb from `p_min`
/// to `p_max` along the `gamma`-robust curve.
pub fn xi_star(gamma: f64, spec: &FrontierSpec) -> Result<usize> {
    spec.check(gamma, ProblemKind::MaxSearch)?;
    let theta = spec.theta();
    if gamma >= theta {
        return Ok(0);
    }
    let k = spec.k as f64;
    let x = ((theta - 1.0) / (gamma - 1.0)).ln() / (1.0 + gamma / k).ln();
    Ok(ceil_clamped(x, spec.k))
}

/// Smallest consistency attainable by a `gamma`-robust k-max algorithm.
pub fn lower_bound_max(gamma: f64, spec: &FrontierSpec) -> Result<f64> {
    let xi = xi_star(gamma, spec)?;
    let theta = spec.theta();
    if xi == 0 {
        return Ok(1.0);
    }
    let k = spec.k as f64;
    let climb = (1.0 + (gamma - 1.0) * (1.0 + gamma / k).powi(xi as i32)) / gamma;
    Ok(theta / (climb + (theta - 1.0) * (1.0 - xi as f64 / k)))
}

/// Min-search mirror of [`xi_star`].
pub fn zeta_star(gamma: f64, spec: &FrontierSpec) -> Result<usize> {
    spec.check(gamma, ProblemKind::MinSearch)?;
    let theta = spec.theta();
    if gamma >= theta {
        return Ok(0);
    }
    let k = spec.k as f64;
    let x = ((theta - 1.0) / (theta - theta / gamma)).ln() / (1.0 + 1.0 / (gamma * k)).ln();
    Ok(ceil_clamped(x, spec.k))
}

/// Smallest consistency attainable by a `gamma`-robust k-min algorithm.
pub fn lower_bound_min(gamma: f64, spec: &FrontierSpec) -> Result<f64> {
    let zeta = zeta_star(gamma, spec)?;
    let theta = spec.theta();
    if zeta == 0 {
        return Ok(1.0);
    }
    let k = spec.k as f64;
    let fall = gamma - (gamma - 1.0) * (1.0 + 1.0 / (gamma * k)).powi(zeta as i32);
    Ok(theta * fall - (theta - 1.0) * (1.0 - zeta as f64 / k))
}

pub fn lower_bound(gamma: f64, spec: &FrontierSpec) -> Result<f64> {
    match spec.kind {
        ProblemKind::MaxSearch => lower_bound_max(gamma, spec),
        ProblemKind::MinSearch => lower_bound_min(gamma, spec),
    }
}

/// Target (eta, gamma) for confidence `lambda`; 1 ignores the prediction,
/// 0 trusts it fully.
pub fn target_point(lambda: f64, spec: &FrontierSpec) -> Result<ParetoPoint> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(domain(format!("lambda {lambda} outside [0, 1]")));
    }
    let gamma = if lambda == 1.0 {
        spec.cr_star
    } else {
        spec.gamma_for(lambda).min(spec.theta())
    };
    let eta = lower_bound(gamma, spec)?.clamp(1.0, gamma);
    ParetoPoint::new(lambda, eta, gamma)
}

/// Frontier sampled on a uniform lambda grid, from lambda = 1 (the
/// worst-case optimum) down to lambda = 0 (eta = 1, gamma = theta).
pub fn frontier_curve(spec: &FrontierSpec, num_points: usize) -> Result<Vec<ParetoPoint>> {
    if num_points < 2 {
        return Err(invalid("a frontier needs at least 2 points"));
    }
    let last = (num_points - 1) as f64;
    (0..num_points)
        .map(|j| {
            let lambda = if j + 1 == num_points { 0.0 } else { 1.0 - j as f64 / last };
            target_point(lambda, spec)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(theta: f64, k: usize, kind: ProblemKind) -> FrontierSpec {
        FrontierSpec::new(PriceBounds::from_theta(5.0, theta).unwrap(), k, kind).unwrap()
    }

    #[test]
    fn reference_anchor() {
        let s = spec(10.0, 20, ProblemKind::MaxSearch);
        let eta = lower_bound_max(2.63, &s).unwrap();
        assert!((1.51..=1.53).contains(&eta));
        assert_relative_eq!(eta, 1.520_96, epsilon = 1e-5);
        assert_eq!(xi_star(2.63, &s).unwrap(), 14);
    }

    #[test]
    fn xi_matches_scan() {
        let s = spec(10.0, 20, ProblemKind::MaxSearch);
        for &g in &[2.2f64, 2.63, 4.0, 7.5, 9.9] {
            let scan = (0..=20i32)
                .find(|&x| 5.0 * (1.0 + (g - 1.0) * (1.0 + g / 20.0).powi(x)) >= 50.0)
                .unwrap_or(20) as usize;
            assert_eq!(xi_star(g, &s).unwrap(), scan, "gamma {g}");
        }
    }

    #[test]
    fn zeta_matches_scan() {
        let s = spec(10.0, 20, ProblemKind::MinSearch);
        for &g in &[3.0f64, 5.0, 7.5, 9.9] {
            let scan = (0..=20i32)
                .find(|&z| 50.0 * (1.0 - (1.0 - 1.0 / g) * (1.0 + 1.0 / (g * 20.0)).powi(z)) <= 5.0)
                .unwrap_or(20) as usize;
            assert_eq!(zeta_star(g, &s).unwrap(), scan, "gamma {g}");
        }
        let eta = lower_bound_min(5.0, &s).unwrap();
        assert!(eta > 1.0 && eta < s.cr_star);
    }

    #[test]
    fn endpoints() {
        for &theta in &[2.0, 10.0, 83.092] {
            for &k in &[1usize, 5, 20, 100] {
                let mx = spec(theta, k, ProblemKind::MaxSearch);
                assert_eq!(xi_star(mx.cr_star, &mx).unwrap(), k);
                assert_eq!(xi_star(theta, &mx).unwrap(), 0);
                assert!((lower_bound_max(mx.cr_star, &mx).unwrap() - mx.cr_star).abs() < 1e-8);
                assert_eq!(lower_bound_max(theta, &mx).unwrap(), 1.0);

                let mn = spec(theta, k, ProblemKind::MinSearch);
                assert_eq!(zeta_star(mn.cr_star, &mn).unwrap(), k);
                assert!((lower_bound_min(mn.cr_star, &mn).unwrap() - mn.cr_star).abs() < 1e-8);
                assert_eq!(lower_bound_min(theta, &mn).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn out_of_domain() {
        let s = spec(10.0, 20, ProblemKind::MaxSearch);
        assert!(lower_bound_max(1.5, &s).is_err());
        assert!(lower_bound_max(10.5, &s).is_err());
        assert!(lower_bound_min(5.0, &s).is_err());
        assert!(target_point(1.2, &s).is_err());
        assert!(frontier_curve(&s, 1).is_err());
    }

    #[test]
    fn single_unit_budget_climbs_in_one_step() {
        let s = spec(10.0, 1, ProblemKind::MaxSearch);
        for j in 1..50 {
            let g = s.cr_star + (10.0 - s.cr_star) * j as f64 / 50.0;
            assert_eq!(xi_star(g, &s).unwrap(), 1);
        }
    }

    #[test]
    fn curve_endpoints_and_trade_off() {
        for kind in ProblemKind::ALL {
            let s = spec(10.0, 20, kind);
            let c = frontier_curve(&s, 2).unwrap();
            assert_eq!((c[0].eta(), c[0].gamma()), (s.cr_star, s.cr_star));
            assert_eq!((c[1].eta(), c[1].gamma()), (1.0, 10.0));

            let c = frontier_curve(&s, 101).unwrap();
            // lambda decreasing along the curve: gamma rises, eta falls
            for w in c.windows(2) {
                assert!(w[1].gamma() > w[0].gamma());
                assert!(w[1].eta() <= w[0].eta() + 1e-12);
            }
        }
    }

    #[test]
    fn larger_budget_improves_frontier() {
        let ks = [1usize, 5, 20, 100];
        let specs: Vec<_> = ks.iter().map(|&k| spec(10.0, k, ProblemKind::MaxSearch)).collect();
        let lo = specs[0].cr_star;
        for j in 0..=20 {
            let g = lo + (10.0 - lo) * j as f64 / 20.0;
            let etas: Vec<f64> = specs.iter().map(|s| lower_bound_max(g, s).unwrap()).collect();
            assert!(etas.windows(2).all(|w| w[1] <= w[0] + 1e-12), "gamma {g}: {etas:?}");
        }
    }
}
