//! Online k-max and k-min search with threshold policies.
//!
//! The crate covers the worst-case optimal threshold schedules, the
//! consistency/robustness frontier for predictions of the extreme price,
//! the learning-augmented schedules that sit on that frontier, adversarial
//! and data-driven instances, a backtest harness and an online learner for
//! the confidence factor.
//!
//! ```
//! use ksearch::{run_ota, offline_opt, worst_case_thresholds, PriceBounds, ProblemKind, SearchInstance};
//!
//! let bounds = PriceBounds::new(5.0, 50.0).unwrap();
//! let wc = worst_case_thresholds(&bounds, 20, ProblemKind::MaxSearch).unwrap();
//! assert!((wc.cr - 2.16).abs() < 0.01);
//!
//! let prices: Vec<f64> = (0..40).map(|t| 5.0 + (t % 9) as f64 * 5.0).collect();
//! let instance = SearchInstance::new(prices, 20, bounds).unwrap();
//! let trace = run_ota(&wc.schedule, &instance).unwrap();
//! assert!(offline_opt(&instance, ProblemKind::MaxSearch) / trace.total_value() <= wc.cr + 1e-9);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augmented;
pub mod error;
pub mod experiment;
pub mod instances;
pub mod learner;
pub mod model;
pub mod ota;
pub mod pareto;
pub mod rng;
pub mod worstcase;

pub use augmented::{
    design, design_max, design_min, lambda_schedule, ratio_alpha, ratio_beta, AugmentedDesign,
    DesignCase, Segment,
};
pub use error::{Error, Result};
pub use instances::{
    adjust_error, apply_rho_hard, gen_p_instance, gen_worst_case_sequence, p_instance_stream, ingest_csv,
    scale_theta, sliding_windows, ExperimentWindow, PInstanceSpec, PriceSeries,
};
pub use learner::{regret_curve, LambdaLearner, RegretRecord};
pub use model::{
    Decision, ParetoPoint, PriceBounds, ProblemKind, RunTrace, SearchInstance, ThresholdSchedule,
    RATIO_TOL,
};
pub use ota::{empirical_ratio, offline_opt, ota_ratio, run_ota};
pub use pareto::{frontier_curve, target_point, FrontierSpec};
pub use worstcase::{solve_alpha_star, solve_phi_star, worst_case_thresholds, WorstCaseSolution};
