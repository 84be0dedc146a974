//! Consistency/robustness frontier for both problems, with budget effect.

use ksearch::pareto::{lower_bound, FrontierSpec};
use ksearch::{frontier_curve, PriceBounds, ProblemKind};

fn main() -> ksearch::Result<()> {
    let bounds = PriceBounds::new(5.0, 50.0)?;
    for kind in ProblemKind::ALL {
        let spec = FrontierSpec::new(bounds, 20, kind)?;
        println!("{kind}-search (cr* = {:.4})", spec.cr_star);
        println!("  lambda   gamma    eta");
        for p in frontier_curve(&spec, 11)? {
            println!("  {:>6.2} {:>7.4} {:>6.4}", p.lambda().unwrap_or(f64::NAN), p.gamma(), p.eta());
        }
    }

    println!("max-search consistency at gamma = 4 by budget:");
    for k in [1, 5, 20, 100, 1000] {
        let spec = FrontierSpec::new(bounds, k, ProblemKind::MaxSearch)?;
        println!("  k={k:<5} eta={:.4}", lower_bound(4.0, &spec)?);
    }
    Ok(())
}
