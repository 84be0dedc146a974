use proptest::prelude::*;

use ksearch::augmented::{design, max_interval_ratio};
use ksearch::instances::{apply_rho_hard, scale_theta, PriceSeries};
use ksearch::learner::{uniform_grid, LambdaLearner};
use ksearch::pareto::{lower_bound, FrontierSpec};
use ksearch::{offline_opt, ota_ratio, run_ota, worst_case_thresholds, PriceBounds, ProblemKind, SearchInstance};

fn kind() -> impl Strategy<Value = ProblemKind> {
    prop_oneof![Just(ProblemKind::MaxSearch), Just(ProblemKind::MinSearch)]
}

/// Bounds with p_min = 5 and theta in [1.5, 60], a budget, and prices.
fn instance() -> impl Strategy<Value = SearchInstance> {
    (1.5f64..60.0, 1usize..8).prop_flat_map(|(theta, k)| {
        let b = PriceBounds::from_theta(5.0, theta).unwrap();
        prop::collection::vec(b.p_min()..=b.p_max(), k..k + 40)
            .prop_map(move |prices| SearchInstance::new(prices, k, b).unwrap())
    })
}

fn brute_force(prices: &[f64], k: usize, kind: ProblemKind) -> f64 {
    let n = prices.len();
    let sums = (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).map(|i| prices[i]).sum::<f64>());
    match kind {
        ProblemKind::MaxSearch => sums.fold(f64::NEG_INFINITY, f64::max),
        ProblemKind::MinSearch => sums.fold(f64::INFINITY, f64::min),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ota_selects_exactly_k(inst in instance(), kind in kind()) {
        let wc = worst_case_thresholds(inst.bounds(), inst.k(), kind).unwrap();
        let trace = run_ota(&wc.schedule, &inst).unwrap();
        prop_assert_eq!(trace.num_selected(), inst.k());
        prop_assert_eq!(trace.voluntary_count() + trace.compulsory_count(), inst.k());
    }

    #[test]
    fn worst_case_ratio_is_bounded(inst in instance(), kind in kind()) {
        let wc = worst_case_thresholds(inst.bounds(), inst.k(), kind).unwrap();
        let r = ota_ratio(&wc.schedule, &inst).unwrap();
        prop_assert!(r >= 1.0 - 1e-12);
        prop_assert!(r <= wc.cr * (1.0 + 1e-9), "ratio {} above {}", r, wc.cr);
    }

    #[test]
    fn offline_opt_matches_enumeration(
        prices in prop::collection::vec(1.0f64..20.0, 1..11),
        k in 1usize..4,
        kind in kind(),
    ) {
        prop_assume!(k <= prices.len());
        let b = PriceBounds::new(1.0, 20.0).unwrap();
        let inst = SearchInstance::new(prices.clone(), k, b).unwrap();
        let opt = offline_opt(&inst, kind);
        prop_assert!((opt - brute_force(&prices, k, kind)).abs() <= 1e-12 * opt);
    }

    #[test]
    fn designs_are_monotone_and_robust(
        inst in instance(),
        kind in kind(),
        lambda in 0.0f64..=1.0,
        frac in 0.0f64..=1.0,
    ) {
        let b = *inst.bounds();
        let p = b.p_min() + frac * (b.p_max() - b.p_min());
        let d = design(kind, p, lambda, &b, inst.k()).unwrap();
        let v = d.schedule.values();
        prop_assert!(v.iter().all(|x| b.contains(*x)));
        let ordered = match kind {
            ProblemKind::MaxSearch => v.windows(2).all(|w| w[0] <= w[1]),
            ProblemKind::MinSearch => v.windows(2).all(|w| w[0] >= w[1]),
        };
        prop_assert!(ordered, "{:?}", v);
        let gamma = d.target.gamma();
        prop_assert!(max_interval_ratio(&d.schedule) <= gamma * (1.0 + 1e-9));
        let r = ota_ratio(&d.schedule, &inst).unwrap();
        prop_assert!(r <= gamma * (1.0 + 1e-9), "ratio {} above gamma {}", r, gamma);
    }

    #[test]
    fn frontier_stays_between_one_and_gamma(theta in 1.5f64..60.0, k in 1usize..50, kind in kind(), t in 0.0f64..=1.0) {
        let spec = FrontierSpec::new(PriceBounds::from_theta(5.0, theta).unwrap(), k, kind).unwrap();
        let g = spec.cr_star + t * (theta - spec.cr_star);
        let eta = lower_bound(g, &spec).unwrap();
        prop_assert!(eta >= 1.0 - 1e-12 && eta <= g + 1e-9, "eta {} gamma {}", eta, g);
        let g2 = (g + 0.1).min(theta);
        prop_assert!(lower_bound(g2, &spec).unwrap() <= eta + 1e-9);
    }

    #[test]
    fn rho_extremes(inst in instance(), kind in kind(), seed in any::<u64>()) {
        prop_assert_eq!(&apply_rho_hard(&inst, kind, 0.0, seed).unwrap(), &inst);
        let hard = apply_rho_hard(&inst, kind, 1.0, seed).unwrap();
        let worst = inst.bounds().worst_price(kind);
        let n = inst.horizon();
        prop_assert!(hard.prices()[n - inst.k()..].iter().all(|&p| p == worst));
        prop_assert_eq!(&hard.prices()[..n - inst.k()], &inst.prices()[..n - inst.k()]);
    }

    #[test]
    fn scaling_multiplies_theta(
        prices in prop::collection::vec(10.0f64..100.0, 2..50),
        mult in 1.0f64..8.0,
    ) {
        let s = PriceSeries::new(prices, None).unwrap();
        prop_assume!(s.max() > s.mean() && s.min() <= s.mean());
        let scaled = scale_theta(&s, mult).unwrap();
        let ratio = scaled.bounds().unwrap().theta() / s.bounds().unwrap().theta();
        prop_assert!((ratio / mult - 1.0).abs() < 1e-9);
    }

    #[test]
    fn learner_weights_stay_positive(
        rows in prop::collection::vec(prop::collection::vec(1.0f64..40.0, 9), 1..60),
        rate in 0.01f64..5.0,
    ) {
        let mut l = LambdaLearner::new(uniform_grid(9).unwrap(), rate).unwrap();
        for r in &rows {
            l.observe_ratios(r).unwrap();
        }
        prop_assert!(l.weights().iter().all(|w| *w > 0.0 && w.is_finite()));
        let total: f64 = l.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(l.grid().contains(&l.select_lambda(7)));
    }
}
