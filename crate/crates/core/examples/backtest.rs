//! Round-trip a price series through CSV and backtest the three policies
//! on sliding windows.

use ksearch::experiment::{simulate, Algorithm, ExperimentConfig};
use ksearch::instances::{ingest_price_csv, synthetic_gbm, write_series};

fn main() -> ksearch::Result<()> {
    let series = synthetic_gbm(60 * 144, 1000.0, 0.0, 0.004, 7)?;
    let path = std::env::temp_dir().join("ksearch_backtest_example.csv");
    write_series(&series, std::fs::File::create(&path).map_err(|source| ksearch::Error::Io {
        path: path.clone(),
        source,
    })?)?;
    let series = ingest_price_csv(&path)?;
    println!("{} prices in [{:.2}, {:.2}]", series.len(), series.min(), series.max());

    for kind in ksearch::ProblemKind::ALL {
        let cfg = ExperimentConfig {
            kind,
            window_len: 1008,
            stride: 144,
            k: 25,
            rho: 0.1,
            error_level: 0.5,
            seed: 7,
            ..Default::default()
        };
        let r = simulate(&series, &cfg)?;
        println!("{kind}-search over {} windows (cr* = {:.4}):", r.windows.len(), r.cr_star);
        for alg in Algorithm::ALL {
            let s = r.summary(alg)?;
            println!("  {:<12} mean {:.4} median {:.4} max {:.4}", alg.label(), s.mean, s.median, s.max);
        }
    }
    Ok(())
}
