use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use gmo_survival::experiment::{
    config_hash, fetch_data, run_judges, run_simulation, run_tau_study, run_uefa, Dataset, ExperimentConfig,
    GridOverride, ModelSpec, OutputFormat, OutputSink, OUTPUT_DIR_ENV,
};
use gmo_survival::metrics::GridSpec;
use gmo_survival::{GmoError, QuadratureConfig, Result};

#[derive(Parser)]
#[command(name = "gmo", version, about = "Generalized Marshall-Olkin dependent censoring toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output directory
    #[arg(long, env = OUTPUT_DIR_ENV, default_value = "gmo-output")]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo study of the joint survival and tau estimators
    Simulate {
        /// `a`, `b` or three shock laws such as `exp(1);weibull(2,1);beta(2,3)`
        #[arg(long, default_value = "a")]
        model: ModelSpec,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points per axis of the ISE/KL grid
        #[arg(long, default_value_t = 100)]
        grid: usize,
        /// Evaluation point `t,s` (repeatable)
        #[arg(long, value_parser = parse_pair)]
        eval: Vec<(f64, f64)>,
        #[command(flatten)]
        common: Common,
    },
    /// Kendall's tau of a model, optionally with a bias/MSE study of its estimator
    Tau {
        #[arg(long, default_value = "a")]
        model: ModelSpec,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// Evaluates the survival copula at `u,v` points or on a grid
    CopulaEval {
        #[arg(long, default_value = "a")]
        model: ModelSpec,
        /// Point `u,v` (repeatable)
        #[arg(long, value_parser = parse_pair)]
        eval: Vec<(f64, f64)>,
        /// Also evaluate on a `grid × grid` midpoint lattice of the unit square
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// Compares estimators on paired soccer goal times
    Uefa {
        #[arg(long, default_value = "data/uefa.csv")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Competing-risk analysis of status-coded tenure data
    Judges {
        #[arg(long, default_value = "data/justices.csv")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Downloads a public dataset
    FetchData {
        #[arg(long, default_value = "judges")]
        dataset: Dataset,
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
    Ok((parse(a)?, parse(b)?))
}

fn emit<R: Serialize>(rows: &[R], format: OutputFormat) -> Result<()> {
    let stdout = std::io::stdout();
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(stdout.lock());
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut lock = stdout.lock();
            serde_json::to_writer_pretty(&mut lock, rows)?;
            writeln!(lock)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TauSummary {
    model: String,
    tau: f64,
    p_simultaneous: f64,
}

#[derive(Serialize)]
struct CopulaRow {
    u: f64,
    v: f64,
    value: f64,
}

#[derive(Serialize)]
struct UefaRow {
    n: usize,
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
    tau_n: f64,
    ise_gmo: f64,
    ise_ml: f64,
    kl_gmo: f64,
    kl_ml: f64,
}

#[derive(Serialize)]
struct JudgesRow {
    n: usize,
    tau_n: f64,
    alpha1_central_range: f64,
    alpha2_central_range: f64,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { model, n, reps, seed, grid, eval, common } => {
            let mut cfg = ExperimentConfig::new(model, n, reps, seed);
            cfg.grid = GridOverride { points: grid, bounds: None };
            cfg.eval_points = eval;
            cfg.output_dir = Some(common.out.clone());
            cfg.format = common.format;
            let report = run_simulation(&cfg)?;
            emit(&report.accuracy_rows(), common.format)?;
            emit(&report.tau_rows(), common.format)?;
            eprintln!("results written to {}", common.out.display());
        }
        Command::Tau { model, n, reps, seed, format } => {
            let m = model.build()?;
            let quad = QuadratureConfig::default();
            let summary = TauSummary {
                model: model.to_string(),
                tau: m.kendall_tau(&quad)?,
                p_simultaneous: m.simultaneous_probability(&quad)?,
            };
            emit(&[summary], format)?;
            if !n.is_empty() {
                if reps == 0 {
                    return Err(GmoError::Config("reps must be at least 1".into()));
                }
                emit(&run_tau_study(&m, &n, reps, seed)?, format)?;
            }
        }
        Command::CopulaEval { model, eval, grid, format } => {
            let m = model.build()?;
            let mut points = eval;
            if let Some(k) = grid {
                let g = GridSpec::new(0.0, 1.0, k).map_err(|e| GmoError::Config(e.to_string()))?;
                let mids = g.midpoints();
                points.extend(mids.iter().flat_map(|&u| mids.iter().map(move |&v| (u, v))));
            }
            if let Some((u, v)) = points.iter().find(|(u, v)| !((0.0..=1.0).contains(u) && (0.0..=1.0).contains(v))) {
                return Err(GmoError::Config(format!("copula arguments must lie in [0, 1], got ({u}, {v})")));
            }
            if points.is_empty() {
                return Err(GmoError::Config("give at least one --eval point or a --grid size".into()));
            }
            let rows = points
                .into_iter()
                .map(|(u, v)| Ok(CopulaRow { u, v, value: m.survival_copula(u, v)? }))
                .collect::<Result<Vec<_>>>()?;
            emit(&rows, format)?;
        }
        Command::Uefa { input, grid, common } => {
            let report = run_uefa(&input, grid)?;
            let hash = config_hash(&(input.display().to_string(), grid))?;
            let mut sink = OutputSink::new(&common.out, None, hash, common.format)?;
            report.write(&mut sink)?;
            for w in &report.mle.warnings {
                eprintln!("warning: {w}");
            }
            emit(
                &[UefaRow {
                    n: report.n,
                    lambda1: report.mle.lambda1,
                    lambda2: report.mle.lambda2,
                    lambda3: report.mle.lambda3,
                    tau_n: report.tau_n,
                    ise_gmo: report.ise_gmo,
                    ise_ml: report.ise_ml,
                    kl_gmo: report.kl_gmo,
                    kl_ml: report.kl_ml,
                }],
                common.format,
            )?;
        }
        Command::Judges { input, common } => {
            let report = run_judges(&input)?;
            let hash = config_hash(&input.display().to_string())?;
            let mut sink = OutputSink::new(&common.out, None, hash, common.format)?;
            report.write(&mut sink)?;
            emit(
                &[JudgesRow {
                    n: report.n,
                    tau_n: report.tau_n,
                    alpha1_central_range: report.alpha1_central_range,
                    alpha2_central_range: report.alpha2_central_range,
                }],
                common.format,
            )?;
        }
        Command::FetchData { dataset, out } => {
            let path = fetch_data(dataset, &out)?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
