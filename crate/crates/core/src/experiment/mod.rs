//! Simulation campaigns, real-data pipelines and result emission.

mod fetch;
mod mle;
mod output;
mod realdata;
mod simulation;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::ShockDistribution;
use crate::error::{GmoError, Result};
use crate::model::GmoModel;

pub use fetch::{fetch_data, Dataset, JUDGES_URL};
pub use mle::{fit_mo_exponential, MoMleFit};
pub use output::{config_hash, Metadata, OutputFormat, OutputSink};
pub use realdata::{read_pairs_csv, read_status_csv, run_judges, run_uefa, CurvePoint, JudgesReport, UefaReport};
pub use simulation::{
    replication_rng, run_simulation, run_tau_study, AccuracyRow, CurveRow, EvalSummary, SimulationReport, SizeSummary, TauRow,
};
pub use svg::line_plot;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "GMO_OUTPUT_DIR";

/// A named benchmark model or three shock laws such as
/// `weibull(2,1);exp(2);beta(2,3)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ModelSpec {
    A,
    B,
    Custom([ShockDistribution; 3]),
}

impl ModelSpec {
    pub fn build(&self) -> Result<GmoModel> {
        match self {
            ModelSpec::A => Ok(GmoModel::model_a()),
            ModelSpec::B => Ok(GmoModel::model_b()),
            ModelSpec::Custom([x1, x2, x3]) => GmoModel::new(*x1, *x2, *x3),
        }
    }
}

fn parse_shock(token: &str) -> Result<ShockDistribution> {
    let token = token.trim();
    if token.eq_ignore_ascii_case("never") {
        return Ok(ShockDistribution::point_mass_at_infinity());
    }
    let bad = || GmoError::Config(format!("cannot parse shock law `{token}`"));
    let (name, rest) = token.split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let args: Vec<f64> = args
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let law = match (name.trim().to_ascii_lowercase().as_str(), args.as_slice()) {
        ("exp", [rate]) => ShockDistribution::exponential(*rate),
        ("weibull", [shape, scale]) => ShockDistribution::weibull(*shape, *scale),
        ("beta", [a, b]) => ShockDistribution::beta(*a, *b),
        ("pareto", [index, scale]) => ShockDistribution::pareto(*index, *scale),
        _ => return Err(bad()),
    };
    law.map_err(|e| GmoError::Config(e.to_string()))
}

fn format_shock(x: &ShockDistribution) -> String {
    use crate::distributions::Family;
    match x.family() {
        Family::Exponential { rate } => format!("exp({rate})"),
        Family::Weibull { shape, scale } => format!("weibull({shape},{scale})"),
        Family::Beta { a, b } => format!("beta({a},{b})"),
        Family::Pareto { index, scale } => format!("pareto({index},{scale})"),
        Family::PointMassAtInfinity => "never".into(),
    }
}

impl FromStr for ModelSpec {
    type Err = GmoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => return Ok(ModelSpec::A),
            "b" => return Ok(ModelSpec::B),
            _ => {}
        }
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(GmoError::Config(format!(
                "model must be `a`, `b` or three `;`-separated shock laws, got `{s}`"
            )));
        }
        let laws = [parse_shock(parts[0])?, parse_shock(parts[1])?, parse_shock(parts[2])?];
        let spec = ModelSpec::Custom(laws);
        spec.build().map_err(|e| GmoError::Config(e.to_string()))?;
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::A => write!(f, "a"),
            ModelSpec::B => write!(f, "b"),
            ModelSpec::Custom(x) => write!(f, "{};{};{}", format_shock(&x[0]), format_shock(&x[1]), format_shock(&x[2])),
        }
    }
}

impl From<ModelSpec> for String {
    fn from(m: ModelSpec) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for ModelSpec {
    type Error = GmoError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Grid override for ISE/KL; `None` bounds mean `[min Y, max Y]` per sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOverride {
    pub points: usize,
    pub bounds: Option<(f64, f64)>,
}

impl Default for GridOverride {
    fn default() -> Self {
        Self { points: crate::metrics::DEFAULT_GRID_POINTS, bounds: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub grid: GridOverride,
    pub eval_points: Vec<(f64, f64)>,
    /// Where tables are written; `None` keeps results in memory only.
    pub output_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(model: ModelSpec, n_list: Vec<usize>, reps: usize, seed: u64) -> Self {
        Self {
            model,
            n_list,
            reps,
            seed,
            grid: GridOverride::default(),
            eval_points: Vec::new(),
            output_dir: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(GmoError::Config("reps must be at least 1".into()));
        }
        if self.n_list.is_empty() {
            return Err(GmoError::Config("the list of sample sizes is empty".into()));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(GmoError::Config(format!("sample sizes must be at least 2, got {n}")));
        }
        if self.grid.points < 16 {
            return Err(GmoError::Config(format!("grid needs at least 16 points, got {}", self.grid.points)));
        }
        if let Some((lo, hi)) = self.grid.bounds {
            if !(lo < hi) {
                return Err(GmoError::Config(format!("grid bounds must satisfy lower < upper, got ({lo}, {hi})")));
            }
        }
        if let Some(&(t, s)) = self.eval_points.iter().find(|(t, s)| !(*t >= 0.0 && *s >= 0.0)) {
            return Err(GmoError::Config(format!("evaluation points must be nonnegative, got ({t}, {s})")));
        }
        self.model.build().map_err(|e| GmoError::Config(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_spec_round_trip() {
        for text in ["a", "b", "weibull(2,1);exp(2);beta(2,3)", "exp(1);never;pareto(2,1)"] {
            let spec: ModelSpec = text.parse().unwrap();
            assert_eq!(spec.to_string().parse::<ModelSpec>().unwrap(), spec);
        }
        assert!("c".parse::<ModelSpec>().is_err());
        assert!("exp(-1);exp(1);exp(1)".parse::<ModelSpec>().is_err());
        assert!("never;never;never".parse::<ModelSpec>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(ModelSpec::A, vec![50], 1, 0);
        assert!(cfg.validate().is_ok());
        cfg.reps = 0;
        assert!(matches!(cfg.validate(), Err(GmoError::Config(_))));
        cfg.reps = 1;
        cfg.n_list.clear();
        assert!(cfg.validate().is_err());
    }
}
