use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ksearch::augmented::{design_target, interval_ratios, max_interval_ratio};
use ksearch::experiment::{
    prepare_windows, run_sweep, simulate, write_summaries, write_sweep, write_windows, ExperimentConfig,
    SweepPlan, DEFAULT_K, DEFAULT_STRIDE, DEFAULT_WINDOW,
};
use ksearch::instances::{ingest_price_csv, synthetic_gbm, PriceSeries};
use ksearch::learner::{regret_curve, run_learner, uniform_grid, LambdaLearner, DEFAULT_GRID_POINTS};
use ksearch::pareto::{frontier_curve, FrontierSpec};
use ksearch::{design, worst_case_thresholds, Error, ParetoPoint, PriceBounds, ProblemKind};

#[derive(Parser)]
#[command(name = "ksearch", version, about = "Threshold policies for online k-max and k-min search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Consistency/robustness frontier as (lambda, gamma, eta) rows.
    Pareto(ParetoArgs),
    /// One threshold schedule with its construction metadata.
    Thresholds(ThresholdArgs),
    /// Per-window ratios of the worst-case, hindsight and learned policies.
    Simulate(RunArgs),
    /// Aggregate ratios over a sweep of hardness, error level, k and theta.
    Experiment(RunArgs),
    /// Confidence learning over the window stream, with regret.
    Learn(LearnArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Max,
    Min,
    Both,
}

impl Kind {
    fn single(self) -> Result<ProblemKind, Error> {
        match self {
            Kind::Max => Ok(ProblemKind::MaxSearch),
            Kind::Min => Ok(ProblemKind::MinSearch),
            Kind::Both => Err(Error::InvalidInput("this command needs --kind max or --kind min".into())),
        }
    }

    fn all(self) -> Vec<ProblemKind> {
        match self {
            Kind::Max => vec![ProblemKind::MaxSearch],
            Kind::Min => vec![ProblemKind::MinSearch],
            Kind::Both => ProblemKind::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 5.0)]
    pmin: f64,
    #[arg(long, default_value_t = 50.0)]
    pmax: f64,
    #[arg(long, default_value_t = 20)]
    k: usize,
}

#[derive(Args)]
struct ParetoArgs {
    #[arg(long, value_enum, default_value = "max")]
    kind: Kind,
    #[command(flatten)]
    bounds: BoundsArgs,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, value_enum, default_value = "max")]
    kind: Kind,
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Predicted extreme price; omit for the worst-case schedule.
    #[arg(long)]
    prediction: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Explicit consistency target (requires --gamma; overrides --lambda).
    #[arg(long, requires = "gamma")]
    eta: Option<f64>,
    #[arg(long, requires = "eta")]
    gamma: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    /// CSV with a `price` column (and optional `timestamp`); synthetic if omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Days of synthetic ten-minute data.
    #[arg(long, default_value_t = 1771)]
    synthetic_days: usize,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = DEFAULT_STRIDE)]
    stride: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid_points: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "both")]
    kind: Kind,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [DEFAULT_K])]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0])]
    rho: Vec<f64>,
    #[arg(long = "error-level", value_delimiter = ',', default_values_t = [1.0])]
    error_level: Vec<f64>,
    #[arg(long = "theta-mult", value_delimiter = ',', default_values_t = [1.0])]
    theta_mult: Vec<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Aggregates per algorithm (simulate only).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct LearnArgs {
    #[arg(long, value_enum, default_value = "both")]
    kind: Kind,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    #[arg(long = "error-level", default_value_t = 1.0)]
    error_level: f64,
    #[arg(long = "theta-mult", default_value_t = 1.0)]
    theta_mult: f64,
    /// Learning rate; defaults to sqrt(8 ln n / rounds).
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(e: io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<output>"),
        source: e,
    }
}

/// Leading comment line recording the tool version, command line and seed.
fn banner(out: &mut dyn Write, seed: u64, extra: &str) -> Result<(), Error> {
    let cmd: Vec<String> = std::env::args().skip(1).collect();
    writeln!(
        out,
        "# ksearch {} command={} seed={seed}{extra}",
        env!("CARGO_PKG_VERSION"),
        cmd.join(" ")
    )
    .map_err(io_err)
}

fn bounds_of(a: &BoundsArgs) -> Result<PriceBounds, Error> {
    PriceBounds::new(a.pmin, a.pmax)
}

fn load_series(d: &DataArgs) -> Result<PriceSeries, Error> {
    match &d.input {
        Some(path) => ingest_price_csv(path),
        None => synthetic_gbm(d.synthetic_days * 144, 1000.0, 0.0, 0.004, d.seed),
    }
}

fn base_config(d: &DataArgs) -> ExperimentConfig {
    ExperimentConfig {
        window_len: d.window,
        stride: d.stride,
        grid_points: d.grid_points,
        seed: d.seed,
        ..Default::default()
    }
}

fn init_pool(workers: usize) {
    if workers > 0 {
        // only fails if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
}

fn cmd_pareto(a: &ParetoArgs) -> Result<(), Error> {
    let kind = a.kind.single()?;
    let spec = FrontierSpec::new(bounds_of(&a.bounds)?, a.bounds.k, kind)?;
    let curve = frontier_curve(&spec, a.points)?;
    let mut out = open_output(&a.output)?;
    banner(&mut *out, 0, &format!(" kind={kind} cr_star={}", spec.cr_star))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", "gamma", "eta"])?;
    for p in &curve {
        let lambda = p.lambda().map(|l| l.to_string()).unwrap_or_default();
        w.write_record([lambda, p.gamma().to_string(), p.eta().to_string()])?;
    }
    w.flush().map_err(io_err)
}

fn cmd_thresholds(a: &ThresholdArgs) -> Result<(), Error> {
    let kind = a.kind.single()?;
    let bounds = bounds_of(&a.bounds)?;
    let k = a.bounds.k;
    let wc = worst_case_thresholds(&bounds, k, kind)?;
    let mut out = open_output(&a.output)?;

    let Some(prediction) = a.prediction else {
        banner(&mut *out, 0, &format!(" kind={kind} case=worst-case cr_star={}", wc.cr))?;
        let ratios = interval_ratios(&wc.schedule);
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "threshold", "segment", "interval_ratio"])?;
        for (i, v) in wc.schedule.values().iter().enumerate() {
            w.write_record([(i + 1).to_string(), v.to_string(), "r".into(), ratios[i].to_string()])?;
        }
        return w.flush().map_err(io_err);
    };

    let d = match (a.eta, a.gamma) {
        (Some(eta), Some(gamma)) => design_target(kind, prediction, ParetoPoint::from_ratios(eta, gamma)?, &bounds, k)?,
        _ => design(kind, prediction, a.lambda, &bounds, k)?,
    };
    let max_ratio = max_interval_ratio(&d.schedule);
    let lambda = d.target.lambda().map(|l| format!(" lambda={l}")).unwrap_or_default();
    let meta = format!(
        " kind={kind}{lambda} prediction={prediction} eta={} gamma={} case={} sigma_star={} j_star={} m_star={} i_star={} p_tilde_1={} p_tilde_2={} max_ratio={max_ratio} consistency_ratio={} worst_case_equivalent={}",
        d.target.eta(),
        d.target.gamma(),
        d.case,
        d.sigma_star,
        d.j_star,
        d.m_star,
        d.i_star,
        d.p_tilde_1,
        d.p_tilde_2,
        d.consistency_ratio(),
        max_ratio <= wc.cr + 1e-9,
    );
    banner(&mut *out, 0, &meta)?;
    let ratios = interval_ratios(&d.schedule);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "threshold", "segment", "interval_ratio"])?;
    for (i, v) in d.schedule.values().iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            v.to_string(),
            d.segments[i].label().to_string(),
            ratios[i].to_string(),
        ])?;
    }
    w.flush().map_err(io_err)
}

fn cmd_simulate(a: &RunArgs) -> Result<(), Error> {
    init_pool(a.data.workers);
    let series = load_series(&a.data)?;
    let base = base_config(&a.data);
    let first = |v: &[f64], name: &str| -> Result<f64, Error> {
        match v {
            [x] => Ok(*x),
            _ => Err(Error::InvalidInput(format!("simulate takes a single --{name}; use experiment to sweep"))),
        }
    };
    let k = match a.k.as_slice() {
        [k] => *k,
        _ => return Err(Error::InvalidInput("simulate takes a single --k".into())),
    };
    let cfg = ExperimentConfig {
        k,
        rho: first(&a.rho, "rho")?,
        error_level: first(&a.error_level, "error-level")?,
        theta_mult: first(&a.theta_mult, "theta-mult")?,
        ..base
    };
    let results = a
        .kind
        .all()
        .into_iter()
        .map(|kind| simulate(&series, &ExperimentConfig { kind, ..cfg }))
        .collect::<Result<Vec<_>, _>>()?;

    let extra = format!(" windows={} grid_points={}", results[0].windows.len(), cfg.grid_points);
    let mut out = open_output(&a.output)?;
    banner(&mut *out, cfg.seed, &extra)?;
    write_windows(&results, out)?;

    let mut sum = open_output(&a.summary)?;
    if a.summary.is_some() {
        banner(&mut *sum, cfg.seed, &extra)?;
        write_summaries(&results, sum)?;
    } else {
        drop(sum);
        let mut buf = Vec::new();
        write_summaries(&results, &mut buf)?;
        eprint!("{}", String::from_utf8_lossy(&buf));
    }
    Ok(())
}

fn cmd_experiment(a: &RunArgs) -> Result<(), Error> {
    let series = load_series(&a.data)?;
    let plan = SweepPlan {
        kinds: a.kind.all(),
        rhos: a.rho.clone(),
        error_levels: a.error_level.clone(),
        ks: a.k.clone(),
        theta_mults: a.theta_mult.clone(),
        base: base_config(&a.data),
    };
    let rows = run_sweep(&series, &plan, a.data.workers)?;
    let windows = prepare_windows(&series, &plan.cells()[0])?.len();
    let mut out = open_output(&a.output)?;
    banner(
        &mut *out,
        a.data.seed,
        &format!(" windows={windows} grid_points={} best_lambda=hindsight_grid", a.data.grid_points),
    )?;
    write_sweep(&rows, out)
}

fn cmd_learn(a: &LearnArgs) -> Result<(), Error> {
    init_pool(a.data.workers);
    let series = load_series(&a.data)?;
    let mut out = open_output(&a.output)?;
    banner(&mut *out, a.data.seed, " regret_baseline=best_fixed_lambda_in_hindsight")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "kind",
        "round",
        "chosen_lambda",
        "chosen_ratio",
        "best_fixed_ratio",
        "cum_regret",
        "avg_regret",
    ])?;
    let mut finals = Vec::new();
    for kind in a.kind.all() {
        let cfg = ExperimentConfig {
            kind,
            k: a.k,
            rho: a.rho,
            error_level: a.error_level,
            theta_mult: a.theta_mult,
            ..base_config(&a.data)
        };
        let windows: Vec<_> = prepare_windows(&series, &cfg)?.into_iter().map(|(w, _)| w).collect();
        let theta = windows.first().map_or(1.0, |w| w.bounds().theta());
        let mut learner = match a.rate {
            Some(rate) => LambdaLearner::new(uniform_grid(a.data.grid_points)?, rate)?,
            None => LambdaLearner::with_default_rate(a.data.grid_points, Some(windows.len()), theta)?,
        };
        let history = run_learner(&mut learner, &windows, kind, a.data.seed)?;
        let curve = regret_curve(&history)?;
        for (r, (_, avg)) in history.iter().zip(curve) {
            w.write_record([
                kind.label().to_string(),
                r.round.to_string(),
                r.chosen_lambda.to_string(),
                r.chosen_ratio.to_string(),
                r.best_fixed_ratio.to_string(),
                r.cumulative_regret.to_string(),
                avg.to_string(),
            ])?;
        }
        finals.push((kind, learner));
    }
    let mut out = w.into_inner().map_err(|e| io_err(e.into_error()))?;
    for (kind, learner) in finals {
        let pairs: Vec<String> = learner
            .grid()
            .iter()
            .zip(learner.probabilities())
            .map(|(l, p)| format!("{l}:{p}"))
            .collect();
        writeln!(out, "# final_weights kind={kind} {}", pairs.join(";")).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Domain(_) => 2,
        Error::Parse { .. } | Error::Io { .. } | Error::Csv(_) => 3,
        Error::Construction(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pareto(a) => cmd_pareto(a),
        Command::Thresholds(a) => cmd_thresholds(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Learn(a) => cmd_learn(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ksearch: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
