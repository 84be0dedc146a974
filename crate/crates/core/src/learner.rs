//! Online choice of the confidence factor across repeated rounds.
//!
//! Every round reveals one window. Because OTA can be replayed for any
//! confidence factor, the ratio of every grid point is known after the
//! round (full information), and the learner runs exponential weights
//! (Hedge) over the grid with loss `ratio - 1`.

use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rayon::prelude::*;

use crate::augmented::lambda_schedule;
use crate::error::{invalid, Error, Result};
use crate::instances::ExperimentWindow;
use crate::model::ProblemKind;
use crate::ota::ota_ratio;
use crate::rng::{derive_seed, rng_from};

/// Grid size used by the experiments.
pub const DEFAULT_GRID_POINTS: usize = 33;

/// `points` evenly spaced values covering [0, 1].
pub fn uniform_grid(points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(invalid("grid needs at least one point")),
        1 => Ok(vec![0.0]),
        n => Ok((0..n)
            .map(|j| if j + 1 == n { 1.0 } else { j as f64 / (n - 1) as f64 })
            .collect()),
    }
}

/// Ratio of OTA with each grid confidence on one window, in grid order.
pub fn counterfactual_ratios(grid: &[f64], window: &ExperimentWindow, kind: ProblemKind) -> Result<Vec<f64>> {
    let bounds = window.bounds();
    let k = window.instance.k();
    grid.par_iter()
        .map(|&lambda| {
            let schedule = lambda_schedule(kind, window.prediction, lambda, bounds, k)?;
            ota_ratio(&schedule, &window.instance)
        })
        .collect()
}

/// Exponential weights over a grid of confidence factors.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaLearner {
    grid: Vec<f64>,
    weights: Vec<f64>,
    learning_rate: f64,
    rounds_seen: usize,
}

impl LambdaLearner {
    /// Learner over `grid` with uniform initial weights.
    pub fn new(grid: Vec<f64>, learning_rate: f64) -> Result<Self> {
        if grid.is_empty() {
            return Err(invalid("grid needs at least one point"));
        }
        if grid.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(invalid("grid values must lie in [0, 1]"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("grid must be strictly increasing"));
        }
        if grid.len() > 1 && (grid[0] != 0.0 || grid[grid.len() - 1] != 1.0) {
            return Err(invalid("grid must include both 0 and 1"));
        }
        if !(learning_rate > 0.0 && learning_rate.is_finite()) {
            return Err(invalid(format!("learning rate must be positive, got {learning_rate}")));
        }
        let weights = vec![1.0; grid.len()];
        Ok(Self {
            grid,
            weights,
            learning_rate,
            rounds_seen: 0,
        })
    }

    /// Uniform grid with the classical rate `sqrt(8 ln n / horizon)`, or
    /// `0.1 / theta` when the horizon is unknown.
    pub fn with_default_rate(points: usize, horizon: Option<usize>, theta: f64) -> Result<Self> {
        let n = points.max(2) as f64;
        let rate = match horizon {
            Some(h) if h > 0 => (8.0 * n.ln() / h as f64).sqrt(),
            _ => 0.1 / theta.max(1.0),
        };
        Self::new(uniform_grid(points)?, rate)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn rounds_seen(&self) -> usize {
        self.rounds_seen
    }

    /// Weights normalized to sum to one.
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }

    /// Grid point with the largest weight (first on ties).
    pub fn leader(&self) -> f64 {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        self.grid[best]
    }

    /// Samples a grid point proportionally to its weight.
    pub fn select_lambda(&self, seed: u64) -> f64 {
        self.grid[self.select_index(seed)]
    }

    fn select_index(&self, seed: u64) -> usize {
        if self.grid.len() == 1 {
            return 0;
        }
        let dist = WeightedIndex::new(&self.weights).expect("weights stay positive and finite");
        dist.sample(&mut rng_from(seed))
    }

    /// Hedge update from the ratio of every grid point in one round.
    pub fn observe_ratios(&mut self, ratios: &[f64]) -> Result<()> {
        if ratios.len() != self.grid.len() {
            return Err(invalid(format!(
                "{} ratios for a grid of {}",
                ratios.len(),
                self.grid.len()
            )));
        }
        for (w, &r) in self.weights.iter_mut().zip(ratios) {
            *w *= (-self.learning_rate * (r - 1.0)).exp();
        }
        let top = self.weights.iter().copied().fold(0.0, f64::max);
        for w in &mut self.weights {
            *w = (*w / top).max(f64::MIN_POSITIVE);
        }
        self.rounds_seen += 1;
        Ok(())
    }

    /// Replays every grid point on `window` and updates the weights. Returns
    /// the per-point ratios.
    pub fn observe_round(&mut self, window: &ExperimentWindow, kind: ProblemKind) -> Result<Vec<f64>> {
        let ratios = counterfactual_ratios(&self.grid, window, kind)?;
        self.observe_ratios(&ratios)?;
        Ok(ratios)
    }
}

/// One learning round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretRecord {
    /// 1-based round number.
    pub round: usize,
    pub chosen_lambda: f64,
    pub chosen_ratio: f64,
    /// This round's ratio of the grid point that is best in hindsight over
    /// rounds 1..=round.
    pub best_fixed_ratio: f64,
    /// Sum of chosen ratios minus the smallest per-point sum, rounds 1..=round.
    pub cumulative_regret: f64,
}

/// Tracks per-point cumulative ratios to report regret against the best
/// fixed grid point in hindsight.
#[derive(Debug, Clone)]
pub struct RegretTracker {
    totals: Vec<f64>,
    chosen_total: f64,
    rounds: usize,
}

impl RegretTracker {
    pub fn new(points: usize) -> Self {
        Self {
            totals: vec![0.0; points],
            chosen_total: 0.0,
            rounds: 0,
        }
    }

    pub fn record(&mut self, chosen_lambda: f64, chosen: usize, ratios: &[f64]) -> RegretRecord {
        for (t, r) in self.totals.iter_mut().zip(ratios) {
            *t += r;
        }
        self.chosen_total += ratios[chosen];
        self.rounds += 1;
        let best = (0..self.totals.len())
            .min_by(|&a, &b| self.totals[a].total_cmp(&self.totals[b]))
            .unwrap_or(0);
        RegretRecord {
            round: self.rounds,
            chosen_lambda,
            chosen_ratio: ratios[chosen],
            best_fixed_ratio: ratios[best],
            cumulative_regret: self.chosen_total - self.totals[best],
        }
    }

    pub fn totals(&self) -> &[f64] {
        &self.totals
    }
}

/// Runs the learner over `windows` in order. Round `n` samples its choice
/// with a seed derived from `(seed, n)`.
pub fn run_learner(
    learner: &mut LambdaLearner,
    windows: &[ExperimentWindow],
    kind: ProblemKind,
    seed: u64,
) -> Result<Vec<RegretRecord>> {
    let mut tracker = RegretTracker::new(learner.grid.len());
    let mut history = Vec::with_capacity(windows.len());
    for (n, window) in windows.iter().enumerate() {
        let chosen = learner.select_index(derive_seed(seed, n as u64));
        let ratios = counterfactual_ratios(&learner.grid, window, kind)?;
        history.push(tracker.record(learner.grid[chosen], chosen, &ratios));
        learner.observe_ratios(&ratios)?;
    }
    Ok(history)
}

/// Same as [`run_learner`] on precomputed per-round ratio rows.
pub fn run_learner_on_ratios(learner: &mut LambdaLearner, rows: &[Vec<f64>], seed: u64) -> Result<Vec<RegretRecord>> {
    let mut tracker = RegretTracker::new(learner.grid.len());
    let mut history = Vec::with_capacity(rows.len());
    for (n, ratios) in rows.iter().enumerate() {
        if ratios.len() != learner.grid.len() {
            return Err(invalid("ratio row length differs from the grid"));
        }
        let chosen = learner.select_index(derive_seed(seed, n as u64));
        history.push(tracker.record(learner.grid[chosen], chosen, ratios));
        learner.observe_ratios(ratios)?;
    }
    Ok(history)
}

/// `(round, cumulative regret / round)` for each record.
pub fn regret_curve(history: &[RegretRecord]) -> Result<Vec<(usize, f64)>> {
    if history.is_empty() {
        return Err(invalid("empty learning history"));
    }
    Ok(history
        .iter()
        .map(|r| (r.round, r.cumulative_regret / r.round as f64))
        .collect())
}

/// History as CSV: `round,chosen_lambda,chosen_ratio,best_fixed_ratio,cum_regret`.
pub fn write_history<W: Write>(history: &[RegretRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["round", "chosen_lambda", "chosen_ratio", "best_fixed_ratio", "cum_regret"])?;
    for r in history {
        w.write_record([
            r.round.to_string(),
            r.chosen_lambda.to_string(),
            r.chosen_ratio.to_string(),
            r.best_fixed_ratio.to_string(),
            r.cumulative_regret.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
