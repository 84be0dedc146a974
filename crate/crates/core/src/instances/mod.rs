//! Instance generation, market data plumbing and experiment transformations.

mod adversarial;
mod series;
mod windows;

pub use adversarial::{
    apply_rho_hard, default_epsilon, gen_p_instance, gen_worst_case_sequence, PInstanceSpec,
};
pub use series::{
    ingest_csv, ingest_price_csv, read_series, scale_theta, synthetic_gbm, write_series, PriceSeries, SAMPLE_SECONDS,
    SYNTHETIC_START,
};
pub use windows::{adjust_error, p_instance_stream, sliding_windows, window_count, ExperimentWindow};
