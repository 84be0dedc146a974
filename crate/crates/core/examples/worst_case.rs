//! Worst-case optimal thresholds for k-max and k-min search.

use ksearch::{worst_case_thresholds, PriceBounds, ProblemKind};

fn main() -> ksearch::Result<()> {
    let bounds = PriceBounds::new(5.0, 50.0)?;
    let k = 20;
    for kind in ProblemKind::ALL {
        let wc = worst_case_thresholds(&bounds, k, kind)?;
        println!("{kind}-search, theta={}, k={k}: ratio {:.5}", bounds.theta(), wc.cr);
        for (i, v) in wc.schedule.values().iter().enumerate().step_by(4) {
            println!("  threshold {:>2}: {v:.4}", i + 1);
        }
    }
    Ok(())
}
