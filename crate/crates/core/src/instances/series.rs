//! Price series: CSV ingestion and export, synthetic generation and the
//! fluctuation-ratio rescaling used by the experiments.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand_distr::{Distribution, Normal};

use crate::error::{domain, invalid, Error, Result};
use crate::model::PriceBounds;
use crate::rng::rng_from;

/// Epoch seconds of 2016-01-01T00:00:00Z.
pub const SYNTHETIC_START: i64 = 1_451_606_400;
/// Ten-minute sampling.
pub const SAMPLE_SECONDS: i64 = 600;

/// Ordered prices with optional epoch-second timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    timestamps: Option<Vec<i64>>,
    prices: Vec<f64>,
}

impl PriceSeries {
    pub fn new(prices: Vec<f64>, timestamps: Option<Vec<i64>>) -> Result<Self> {
        if let Some((t, p)) = prices.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p > 0.0)) {
            return Err(invalid(format!("price {p} at index {t} is not positive")));
        }
        if let Some(ts) = &timestamps {
            if ts.len() != prices.len() {
                return Err(invalid(format!(
                    "{} timestamps for {} prices",
                    ts.len(),
                    prices.len()
                )));
            }
            if let Some(w) = ts.windows(2).position(|w| w[1] <= w[0]) {
                return Err(invalid(format!("timestamps not increasing at index {}", w + 1)));
            }
        }
        Ok(Self { timestamps, prices })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn timestamps(&self) -> Option<&[i64]> {
        self.timestamps.as_deref()
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.prices.iter().sum::<f64>() / self.prices.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.prices.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.prices.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bounds spanning the whole series.
    pub fn bounds(&self) -> Result<PriceBounds> {
        if self.is_empty() {
            return Err(invalid("empty series has no bounds"));
        }
        PriceBounds::new(self.min(), self.max())
    }
}

/// Multiplies prices above the mean by `sqrt(x)` and the rest by `1/sqrt(x)`,
/// which multiplies the max/min ratio by `x` when the mean separates them.
pub fn scale_theta(series: &PriceSeries, multiplier: f64) -> Result<PriceSeries> {
    if !(multiplier >= 1.0 && multiplier.is_finite()) {
        return Err(domain(format!("theta multiplier must be >= 1, got {multiplier}")));
    }
    if multiplier == 1.0 {
        return Ok(series.clone());
    }
    let mean = series.mean();
    let up = multiplier.sqrt();
    let prices = series
        .prices
        .iter()
        .map(|&p| if p > mean { p * up } else { p / up })
        .collect();
    PriceSeries::new(prices, series.timestamps.clone())
}

fn parse_err(row: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        message: message.into(),
    }
}

/// Reads a series from CSV text. Rows are numbered by file line, header = 1.
pub fn read_series<R: Read>(reader: R, price_column: &str, timestamp_column: Option<&str>) -> Result<PriceSeries> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| invalid(format!("missing column '{name}'")))
    };
    let price_idx = find(price_column)?;
    let ts_idx = timestamp_column.map(find).transpose()?;

    let mut prices = Vec::new();
    let mut stamps = ts_idx.map(|_| Vec::new());
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        let raw = record.get(price_idx).unwrap_or("");
        let price: f64 = raw
            .parse()
            .map_err(|_| parse_err(row, format!("price '{raw}' is not a number")))?;
        if !(price.is_finite() && price > 0.0) {
            return Err(parse_err(row, format!("price {price} is not positive")));
        }
        if let (Some(idx), Some(ts)) = (ts_idx, stamps.as_mut()) {
            let raw = record.get(idx).unwrap_or("");
            let t: i64 = raw
                .parse()
                .map_err(|_| parse_err(row, format!("timestamp '{raw}' is not an integer")))?;
            if ts.last().is_some_and(|&prev| t <= prev) {
                return Err(parse_err(row, format!("timestamp {t} is not increasing")));
            }
            ts.push(t);
        }
        prices.push(price);
    }
    if prices.is_empty() {
        return Err(invalid("no price rows"));
    }
    PriceSeries::new(prices, stamps)
}

/// Reads `path`; the timestamp column is used when present.
pub fn ingest_csv(path: &Path, price_column: &str, timestamp_column: Option<&str>) -> Result<PriceSeries> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_series(file, price_column, timestamp_column)
}

/// Reads the `price` column of `path`, plus `timestamp` when the header has one.
pub fn ingest_price_csv(path: &Path) -> Result<PriceSeries> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let has_ts = text
        .lines()
        .next()
        .is_some_and(|h| h.split(',').any(|c| c.trim() == "timestamp"));
    read_series(text.as_bytes(), "price", has_ts.then_some("timestamp"))
}

/// Writes `timestamp,price` (or just `price`) with shortest round-trip floats.
pub fn write_series<W: Write>(series: &PriceSeries, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    match series.timestamps() {
        Some(ts) => {
            w.write_record(["timestamp", "price"])?;
            for (t, p) in ts.iter().zip(&series.prices) {
                w.write_record([t.to_string(), p.to_string()])?;
            }
        }
        None => {
            w.write_record(["price"])?;
            for p in &series.prices {
                w.write_record([p.to_string()])?;
            }
        }
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// Geometric Brownian motion sampled every ten minutes from 2016-01-01.
///
/// `drift` and `volatility` are per step, in log space.
pub fn synthetic_gbm(len: usize, start: f64, drift: f64, volatility: f64, seed: u64) -> Result<PriceSeries> {
    if !(start > 0.0) {
        return Err(invalid("start price must be positive"));
    }
    let noise = Normal::new(drift, volatility).map_err(|e| invalid(format!("bad volatility: {e}")))?;
    let mut rng = rng_from(seed);
    let mut log_p = start.ln();
    let mut prices = Vec::with_capacity(len);
    for _ in 0..len {
        prices.push(log_p.exp());
        log_p += noise.sample(&mut rng);
    }
    let stamps = (0..len as i64).map(|i| SYNTHETIC_START + i * SAMPLE_SECONDS).collect();
    PriceSeries::new(prices, Some(stamps))
}
