//! Sweep hardness and budget on synthetic data and print the mean ratios.

use ksearch::experiment::{run_sweep, write_sweep, ExperimentConfig, SweepPlan};
use ksearch::instances::synthetic_gbm;
use ksearch::ProblemKind;

fn main() -> ksearch::Result<()> {
    let series = synthetic_gbm(30 * 144, 1000.0, 0.0, 0.004, 3)?;
    let plan = SweepPlan {
        kinds: ProblemKind::ALL.to_vec(),
        rhos: vec![0.0, 0.2],
        error_levels: vec![0.5],
        ks: vec![5, 25],
        theta_mults: vec![1.0, 4.0],
        base: ExperimentConfig {
            window_len: 1008,
            stride: 288,
            seed: 3,
            ..Default::default()
        },
    };
    let rows = run_sweep(&series, &plan, 0)?;
    write_sweep(&rows, std::io::stdout().lock())
}
