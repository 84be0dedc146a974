//! Backtest harness: per-window comparison of the worst-case schedule, the
//! best confidence factor in hindsight and the learned one, plus sweeps over
//! hardness, prediction error, budget and fluctuation ratio.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::instances::{adjust_error, apply_rho_hard, scale_theta, sliding_windows, ExperimentWindow, PriceSeries};
use crate::learner::{counterfactual_ratios, run_learner_on_ratios, uniform_grid, LambdaLearner, DEFAULT_GRID_POINTS};
use crate::model::ProblemKind;
use crate::rng::derive_seed;
use crate::worstcase::solve_cr_star;

/// Three weeks of ten-minute samples.
pub const DEFAULT_WINDOW: usize = 3024;
/// Three days of ten-minute samples.
pub const DEFAULT_STRIDE: usize = 432;
pub const DEFAULT_K: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Worst-case optimal schedule, prediction ignored.
    OtaOn,
    /// Best grid confidence per window in hindsight.
    OtaBest,
    /// Confidence chosen online by the learner.
    OtaLearned,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::OtaOn, Algorithm::OtaBest, Algorithm::OtaLearned];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::OtaOn => "ota_on",
            Algorithm::OtaBest => "ota_best",
            Algorithm::OtaLearned => "ota_learned",
        }
    }
}

/// One experiment configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ProblemKind,
    pub window_len: usize,
    pub stride: usize,
    pub k: usize,
    pub rho: f64,
    pub error_level: f64,
    pub theta_mult: f64,
    pub grid_points: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ProblemKind::MaxSearch,
            window_len: DEFAULT_WINDOW,
            stride: DEFAULT_STRIDE,
            k: DEFAULT_K,
            rho: 0.0,
            error_level: 1.0,
            theta_mult: 1.0,
            grid_points: DEFAULT_GRID_POINTS,
            seed: 0,
        }
    }
}

/// Results on one window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowResult {
    pub index: usize,
    pub prediction: f64,
    pub actual_extreme: f64,
    /// Whether the worst-case tail was injected.
    pub hard: bool,
    pub ota_on: f64,
    pub ota_best: f64,
    pub best_lambda: f64,
    pub ota_learned: f64,
    pub learned_lambda: f64,
}

impl WindowResult {
    pub fn ratio(&self, alg: Algorithm) -> f64 {
        match alg {
            Algorithm::OtaOn => self.ota_on,
            Algorithm::OtaBest => self.ota_best,
            Algorithm::OtaLearned => self.ota_learned,
        }
    }
}

/// Five-number summary plus the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Summary with linearly interpolated quartiles.
pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(invalid("nothing to summarize"));
    }
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(Summary {
        count: s.len(),
        mean: s.iter().sum::<f64>() / s.len() as f64,
        min: s[0],
        q1: quantile(&s, 0.25),
        median: quantile(&s, 0.5),
        q3: quantile(&s, 0.75),
        max: s[s.len() - 1],
    })
}

/// All windows of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub config: ExperimentConfig,
    /// Worst-case optimal ratio for the (possibly rescaled) bounds.
    pub cr_star: f64,
    pub windows: Vec<WindowResult>,
}

impl SimulationResult {
    pub fn ratios(&self, alg: Algorithm) -> Vec<f64> {
        self.windows.iter().map(|w| w.ratio(alg)).collect()
    }

    pub fn summary(&self, alg: Algorithm) -> Result<Summary> {
        summarize(&self.ratios(alg))
    }
}

/// Windows after rescaling, hardness injection and error adjustment. The
/// hardness draw of window `w` uses a seed derived from `(seed, w)` so the
/// hard windows for a larger `rho` include those for a smaller one.
pub fn prepare_windows(series: &PriceSeries, cfg: &ExperimentConfig) -> Result<Vec<(ExperimentWindow, bool)>> {
    let scaled = scale_theta(series, cfg.theta_mult)?;
    let raw = sliding_windows(&scaled, cfg.window_len, cfg.stride, cfg.k, cfg.kind)?;
    raw.into_iter()
        .enumerate()
        .map(|(w, win)| {
            let hardened = apply_rho_hard(&win.instance, cfg.kind, cfg.rho, derive_seed(cfg.seed, w as u64))?;
            let hard = hardened != win.instance;
            let win = ExperimentWindow::new(hardened, win.prediction, cfg.kind)?;
            Ok((adjust_error(&win, cfg.error_level)?, hard))
        })
        .collect()
}

/// Runs the three algorithms on every window of `series`.
pub fn simulate(series: &PriceSeries, cfg: &ExperimentConfig) -> Result<SimulationResult> {
    let windows = prepare_windows(series, cfg)?;
    if windows.is_empty() {
        return Err(invalid("no windows"));
    }
    let bounds = *windows[0].0.bounds();
    let cr_star = solve_cr_star(&bounds, cfg.k, cfg.kind)?;
    let grid = uniform_grid(cfg.grid_points)?;
    let rows: Vec<Vec<f64>> = windows
        .par_iter()
        .map(|(w, _)| counterfactual_ratios(&grid, w, cfg.kind))
        .collect::<Result<_>>()?;

    let mut learner = LambdaLearner::with_default_rate(cfg.grid_points, Some(rows.len()), bounds.theta())?;
    let history = run_learner_on_ratios(&mut learner, &rows, derive_seed(cfg.seed, u64::MAX))?;

    let on_idx = grid.len() - 1;
    let mut out = Vec::with_capacity(rows.len());
    for (index, (((win, hard), row), rec)) in windows.iter().zip(&rows).zip(&history).enumerate() {
        let (best_idx, &best) = row
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is not empty");
        let ota_on = row[on_idx];
        if ota_on > cr_star + 1e-6 {
            return Err(Error::Construction(format!(
                "worst-case schedule reached ratio {ota_on} above {cr_star} on window {index}"
            )));
        }
        out.push(WindowResult {
            index,
            prediction: win.prediction,
            actual_extreme: win.actual_extreme,
            hard: *hard,
            ota_on,
            ota_best: best,
            best_lambda: grid[best_idx],
            ota_learned: rec.chosen_ratio,
            learned_lambda: rec.chosen_lambda,
        });
    }
    Ok(SimulationResult {
        config: *cfg,
        cr_star,
        windows: out,
    })
}

/// Cross product of sweep values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub kinds: Vec<ProblemKind>,
    pub rhos: Vec<f64>,
    pub error_levels: Vec<f64>,
    pub ks: Vec<usize>,
    pub theta_mults: Vec<f64>,
    pub base: ExperimentConfig,
}

impl SweepPlan {
    /// Configurations in output order: kind, rho, error level, k, multiplier.
    pub fn cells(&self) -> Vec<ExperimentConfig> {
        let mut cells = Vec::new();
        for &kind in &self.kinds {
            for &rho in &self.rhos {
                for &error_level in &self.error_levels {
                    for &k in &self.ks {
                        for &theta_mult in &self.theta_mults {
                            cells.push(ExperimentConfig {
                                kind,
                                rho,
                                error_level,
                                k,
                                theta_mult,
                                ..self.base
                            });
                        }
                    }
                }
            }
        }
        cells
    }
}

/// One aggregate row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: ExperimentConfig,
    pub algorithm: Algorithm,
    pub cr_star: f64,
    pub summary: Summary,
}

/// Runs every cell on a pool of `workers` threads (0 = rayon default).
/// Output order follows [`SweepPlan::cells`] regardless of scheduling.
pub fn run_sweep(series: &PriceSeries, plan: &SweepPlan, workers: usize) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    let cells = plan.cells();
    let results: Vec<SimulationResult> =
        pool.install(|| cells.par_iter().map(|c| simulate(series, c)).collect::<Result<_>>())?;
    let mut rows = Vec::with_capacity(results.len() * 3);
    for r in results {
        for alg in Algorithm::ALL {
            rows.push(SweepRow {
                config: r.config,
                algorithm: alg,
                cr_star: r.cr_star,
                summary: r.summary(alg)?,
            });
        }
    }
    Ok(rows)
}

fn flush<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::Csv(e.into()))
}

/// Per-window CSV.
pub fn write_windows<W: Write>(results: &[SimulationResult], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "kind",
        "window",
        "prediction",
        "actual_extreme",
        "hard",
        "ota_on",
        "ota_best",
        "best_lambda",
        "ota_learned",
        "learned_lambda",
    ])?;
    for r in results {
        for win in &r.windows {
            w.write_record([
                r.config.kind.label().to_string(),
                win.index.to_string(),
                win.prediction.to_string(),
                win.actual_extreme.to_string(),
                win.hard.to_string(),
                win.ota_on.to_string(),
                win.ota_best.to_string(),
                win.best_lambda.to_string(),
                win.ota_learned.to_string(),
                win.learned_lambda.to_string(),
            ])?;
        }
    }
    flush(w)
}

const SUMMARY_HEADER: [&str; 8] = ["count", "mean", "min", "q1", "median", "q3", "max", "cr_star"];

fn summary_fields(s: &Summary, cr_star: f64) -> [String; 8] {
    [
        s.count.to_string(),
        s.mean.to_string(),
        s.min.to_string(),
        s.q1.to_string(),
        s.median.to_string(),
        s.q3.to_string(),
        s.max.to_string(),
        cr_star.to_string(),
    ]
}

/// Per-algorithm aggregates of simulation results.
pub fn write_summaries<W: Write>(results: &[SimulationResult], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["kind", "algorithm"];
    header.extend(SUMMARY_HEADER);
    w.write_record(&header)?;
    for r in results {
        for alg in Algorithm::ALL {
            let mut rec = vec![r.config.kind.label().to_string(), alg.label().to_string()];
            rec.extend(summary_fields(&r.summary(alg)?, r.cr_star));
            w.write_record(&rec)?;
        }
    }
    flush(w)
}

/// Sweep rows as CSV.
pub fn write_sweep<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["kind", "rho", "error_level", "k", "theta_mult", "algorithm"];
    header.extend(SUMMARY_HEADER);
    w.write_record(&header)?;
    for row in rows {
        let c = &row.config;
        let mut rec = vec![
            c.kind.label().to_string(),
            c.rho.to_string(),
            c.error_level.to_string(),
            c.k.to_string(),
            c.theta_mult.to_string(),
            row.algorithm.label().to_string(),
        ];
        rec.extend(summary_fields(&row.summary, row.cr_star));
        w.write_record(&rec)?;
    }
    flush(w)
}
