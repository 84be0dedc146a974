//! Backtest windows over a price series.

use rand::Rng;

use super::adversarial::{gen_p_instance, PInstanceSpec};
use super::series::PriceSeries;
use crate::error::{domain, invalid, Result};
use crate::model::{PriceBounds, ProblemKind, SearchInstance};
use crate::rng::{derive_seed, rng_from};

/// One backtest round: an instance plus a prediction of its extreme.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentWindow {
    pub instance: SearchInstance,
    pub prediction: f64,
    /// Realized maximum (max search) or minimum (min search) of the instance.
    pub actual_extreme: f64,
}

impl ExperimentWindow {
    pub fn new(instance: SearchInstance, prediction: f64, kind: ProblemKind) -> Result<Self> {
        if !instance.bounds().contains(prediction) {
            return Err(invalid(format!("prediction {prediction} outside the price bounds")));
        }
        let actual_extreme = kind.extreme(instance.prices());
        Ok(Self {
            instance,
            prediction,
            actual_extreme,
        })
    }

    pub fn bounds(&self) -> &PriceBounds {
        self.instance.bounds()
    }

    /// Absolute prediction error.
    pub fn error(&self) -> f64 {
        (self.prediction - self.actual_extreme).abs()
    }
}

/// Number of windows [`sliding_windows`] yields for a series of length `n`.
pub fn window_count(n: usize, window_len: usize, stride: usize) -> usize {
    if window_len == 0 || stride == 0 || n < 2 * window_len {
        0
    } else {
        (n - 2 * window_len) / stride + 1
    }
}

/// Windows of `window_len` steps every `stride` steps, starting after one
/// full window so that each has a predecessor. Each prediction is the extreme
/// of the immediately preceding `window_len` steps. Bounds span the series.
pub fn sliding_windows(
    series: &PriceSeries,
    window_len: usize,
    stride: usize,
    k: usize,
    kind: ProblemKind,
) -> Result<Vec<ExperimentWindow>> {
    if window_len == 0 || stride == 0 {
        return Err(invalid("window length and stride must be positive"));
    }
    if series.len() < 2 * window_len {
        return Err(invalid(format!(
            "series of length {} is shorter than two windows of {window_len}",
            series.len()
        )));
    }
    let bounds = series.bounds()?;
    let prices = series.prices();
    (0..window_count(series.len(), window_len, stride))
        .map(|w| {
            let start = window_len + w * stride;
            let prev = &prices[start - window_len..start];
            let instance = SearchInstance::new(prices[start..start + window_len].to_vec(), k, bounds)?;
            ExperimentWindow::new(instance, kind.extreme(prev), kind)
        })
        .collect()
}

/// Scales the prediction error by `level`: 0 gives a perfect prediction,
/// 1 leaves it unchanged.
pub fn adjust_error(window: &ExperimentWindow, level: f64) -> Result<ExperimentWindow> {
    if !(0.0..=1.0).contains(&level) {
        return Err(domain(format!("error level {level} outside [0, 1]")));
    }
    let actual = window.actual_extreme;
    let prediction = window.bounds().clamp(actual + level * (window.prediction - actual));
    Ok(ExperimentWindow {
        prediction,
        ..window.clone()
    })
}

fn log_uniform<R: Rng>(rng: &mut R, bounds: &PriceBounds) -> f64 {
    bounds.clamp(bounds.p_min() * (rng.random::<f64>() * bounds.theta().ln()).exp())
}

/// Stationary stream of p-instances for learning experiments.
///
/// Window `i` draws `p` log-uniformly in `bounds` and ramps to it in steps of
/// `step` (see [`PInstanceSpec`]). Its prediction is `p` itself, except with
/// probability `miss_rate` an independent log-uniform draw. Window `i` only
/// depends on `(seed, i)`.
pub fn p_instance_stream(
    count: usize,
    kind: ProblemKind,
    bounds: PriceBounds,
    k: usize,
    step: f64,
    miss_rate: f64,
    seed: u64,
) -> Result<Vec<ExperimentWindow>> {
    if !(0.0..=1.0).contains(&miss_rate) {
        return Err(domain(format!("miss rate {miss_rate} outside [0, 1]")));
    }
    (0..count)
        .map(|i| {
            let mut rng = rng_from(derive_seed(seed, i as u64));
            let p = log_uniform(&mut rng, &bounds);
            let instance = gen_p_instance(&PInstanceSpec::new(kind, p, bounds, k).with_step(step))?;
            let prediction = if rng.random::<f64>() < miss_rate {
                log_uniform(&mut rng, &bounds)
            } else {
                p
            };
            ExperimentWindow::new(instance, prediction, kind)
        })
        .collect()
}
