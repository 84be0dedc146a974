//! Learn the confidence factor online over a stream of ramp instances whose
//! predictions are right half of the time.

use ksearch::instances::p_instance_stream;
use ksearch::learner::{counterfactual_ratios, regret_curve, run_learner, uniform_grid, LambdaLearner};
use ksearch::{PriceBounds, ProblemKind};

fn main() -> ksearch::Result<()> {
    let bounds = PriceBounds::new(10.0, 100.0)?;
    let kind = ProblemKind::MaxSearch;
    let rounds = 600;
    let stream = p_instance_stream(rounds, kind, bounds, 10, 2.25, 0.5, 1)?;

    let mut learner = LambdaLearner::with_default_rate(17, Some(rounds), bounds.theta())?;
    let history = run_learner(&mut learner, &stream, kind, 2)?;
    for (round, avg) in regret_curve(&history)?.into_iter().filter(|(r, _)| r % 100 == 0) {
        println!("round {round:>4}: average regret {avg:.4}");
    }
    println!("leader after {} rounds: lambda = {}", learner.rounds_seen(), learner.leader());

    let grid = uniform_grid(17)?;
    let mut totals = vec![0.0; grid.len()];
    for w in &stream {
        for (t, r) in totals.iter_mut().zip(counterfactual_ratios(&grid, w, kind)?) {
            *t += r / rounds as f64;
        }
    }
    for (l, (m, p)) in grid.iter().zip(totals.iter().zip(learner.probabilities())) {
        println!("  lambda {l:.4}: mean ratio {m:.4}  weight {p:.3}");
    }
    Ok(())
}
