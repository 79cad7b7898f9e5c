use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{config_hash, OutputSink};
use super::svg::line_plot;
use super::ExperimentConfig;
use crate::error::Result;
use crate::estimators::{kendall_tau_hat, JointSurvivalEstimate};
use crate::metrics::{bias_mse, ise, kl, GridSpec};
use crate::model::{generalized_inverse, GmoModel, Margin};
use crate::quadrature::QuadratureConfig;
use crate::sampling::draw_sample;

const CURVE_POINTS: usize = 50;

/// Generator of replication `rep` at sample size `n`; independent of the
/// order in which replications run.
pub fn replication_rng(seed: u64, n: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | rep as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    pub n: usize,
    pub reps: usize,
    pub truth: f64,
    pub mean: f64,
    pub bias: f64,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub n: usize,
    pub reps: usize,
    pub ise_mean: f64,
    pub ise_sd: f64,
    pub kl_mean: f64,
    pub kl_sd: f64,
}

/// Replication means of the marginal and α estimators on a fixed grid.
/// α means skip replications where α̂ is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: usize,
    pub t: f64,
    pub km_t_mean: f64,
    pub km_t_true: f64,
    pub km_c_mean: f64,
    pub km_c_true: f64,
    pub alpha1_mean: f64,
    pub alpha1_true: f64,
    pub alpha2_mean: f64,
    pub alpha2_true: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub n: usize,
    pub t: f64,
    pub s: f64,
    pub mean: f64,
    pub truth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeSummary {
    pub accuracy: AccuracyRow,
    pub tau: TauRow,
    pub curves: Vec<CurveRow>,
    pub eval: Vec<EvalSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub true_tau: f64,
    pub sizes: Vec<SizeSummary>,
}

impl SimulationReport {
    pub fn accuracy_rows(&self) -> Vec<AccuracyRow> {
        self.sizes.iter().map(|s| s.accuracy.clone()).collect()
    }

    pub fn tau_rows(&self) -> Vec<TauRow> {
        self.sizes.iter().map(|s| s.tau.clone()).collect()
    }
}

struct Replication {
    ise: f64,
    kl: f64,
    tau: f64,
    curves: Vec<[f64; 4]>,
    eval: Vec<f64>,
}

fn replicate(m: &GmoModel, cfg: &ExperimentConfig, n: usize, rep: usize, t_grid: &[f64]) -> Result<Replication> {
    let mut rng = replication_rng(cfg.seed, n, rep);
    let sample = draw_sample(m, n, &mut rng)?;
    let est = JointSurvivalEstimate::new(&sample)?;
    let grid = match cfg.grid.bounds {
        Some((lo, hi)) => GridSpec::new(lo, hi, cfg.grid.points)?,
        None => GridSpec::from_observations(sample.y(), cfg.grid.points)?,
    };
    let estimate = |t, s| est.eval(t, s);
    let truth = |t, s| m.joint_survival(t, s);
    let curves = t_grid
        .iter()
        .map(|&t| {
            let nan = f64::NAN;
            [
                est.km_t().eval(t),
                est.km_c().eval(t),
                est.alpha(Margin::T, t).unwrap_or(nan),
                est.alpha(Margin::C, t).unwrap_or(nan),
            ]
        })
        .collect();
    Ok(Replication {
        ise: ise(estimate, truth, &grid),
        kl: kl(estimate, truth, &grid),
        tau: kendall_tau_hat(&sample)?,
        curves,
        eval: cfg.eval_points.iter().map(|&(t, s)| est.eval(t, s)).collect(),
    })
}

fn mean_sd(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = xs.filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn curve_grid(m: &GmoModel) -> Result<Vec<f64>> {
    let hi = generalized_inverse(|t| m.survival_y(t), 0.05)?;
    Ok((0..CURVE_POINTS).map(|i| hi * i as f64 / (CURVE_POINTS - 1) as f64).collect())
}

/// Monte Carlo study of `P̃ₙ` and `τₙ` for each sample size in the config.
pub fn run_simulation(cfg: &ExperimentConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let m = cfg.model.build()?;
    let true_tau = m.kendall_tau(&QuadratureConfig::default())?;
    let t_grid = curve_grid(&m)?;
    let portable = ExperimentConfig { output_dir: None, ..cfg.clone() };
    let hash = config_hash(&portable)?;

    let mut sizes = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let reps: Vec<Replication> =
            (0..cfg.reps).into_par_iter().map(|r| replicate(&m, cfg, n, r, &t_grid)).collect::<Result<_>>()?;
        let (ise_mean, ise_sd) = mean_sd(reps.iter().map(|r| r.ise));
        let (kl_mean, kl_sd) = mean_sd(reps.iter().map(|r| r.kl));
        let taus: Vec<f64> = reps.iter().map(|r| r.tau).collect();
        let (bias, mse) = bias_mse(&taus, true_tau)?;
        let curves = t_grid
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let col = |j: usize| mean_sd(reps.iter().map(|r| r.curves[i][j])).0;
                let alpha_true = |mg| m.alpha(mg, t).unwrap_or(f64::NAN);
                CurveRow {
                    n,
                    t,
                    km_t_mean: col(0),
                    km_t_true: m.marginal_survival_t(t),
                    km_c_mean: col(1),
                    km_c_true: m.marginal_survival_c(t),
                    alpha1_mean: col(2),
                    alpha1_true: alpha_true(Margin::T),
                    alpha2_mean: col(3),
                    alpha2_true: alpha_true(Margin::C),
                }
            })
            .collect();
        let eval = cfg
            .eval_points
            .iter()
            .enumerate()
            .map(|(j, &(t, s))| EvalSummary {
                n,
                t,
                s,
                mean: mean_sd(reps.iter().map(|r| r.eval[j])).0,
                truth: m.joint_survival(t, s),
            })
            .collect();
        sizes.push(SizeSummary {
            accuracy: AccuracyRow { n, reps: cfg.reps, ise_mean, ise_sd, kl_mean, kl_sd },
            tau: TauRow { n, reps: cfg.reps, truth: true_tau, mean: true_tau + bias, bias, mse },
            curves,
            eval,
        });
    }

    let report = SimulationReport { config: portable, config_hash: hash, true_tau, sizes };
    if let Some(dir) = &cfg.output_dir {
        write_report(&report, dir)?;
    }
    Ok(report)
}

fn write_report(report: &SimulationReport, dir: &std::path::Path) -> Result<()> {
    let cfg = &report.config;
    let mut sink = OutputSink::new(dir, Some(cfg.seed), report.config_hash.clone(), cfg.format)?;
    sink.write_table("joint_accuracy", &report.accuracy_rows())?;
    sink.write_table("tau", &report.tau_rows())?;
    let curves: Vec<CurveRow> = report.sizes.iter().flat_map(|s| s.curves.clone()).collect();
    sink.write_table("curves", &curves)?;
    if !cfg.eval_points.is_empty() {
        let eval: Vec<EvalSummary> = report.sizes.iter().flat_map(|s| s.eval.clone()).collect();
        sink.write_table("eval", &eval)?;
    }
    sink.write_json("summary", report)?;
    for size in &report.sizes {
        let n = size.accuracy.n;
        let pts = |f: fn(&CurveRow) -> f64| size.curves.iter().map(|c| (c.t, f(c))).collect::<Vec<_>>();
        let survival = line_plot(
            &format!("Marginal survival, n = {n}"),
            &[
                ("KM T (mean)", pts(|c| c.km_t_mean)),
                ("true T", pts(|c| c.km_t_true)),
                ("KM C (mean)", pts(|c| c.km_c_mean)),
                ("true C", pts(|c| c.km_c_true)),
            ],
        );
        sink.write_svg(&format!("survival_n{n}"), &survival)?;
        let alpha = line_plot(
            &format!("Alpha functions, n = {n}"),
            &[
                ("alpha1 (mean)", pts(|c| c.alpha1_mean)),
                ("alpha1 true", pts(|c| c.alpha1_true)),
                ("alpha2 (mean)", pts(|c| c.alpha2_mean)),
                ("alpha2 true", pts(|c| c.alpha2_true)),
            ],
        );
        sink.write_svg(&format!("alpha_n{n}"), &alpha)?;
    }
    Ok(())
}

/// Bias and MSE of `τₙ` only; much cheaper than [`run_simulation`].
pub fn run_tau_study(m: &GmoModel, n_list: &[usize], reps: usize, seed: u64) -> Result<Vec<TauRow>> {
    let truth = m.kendall_tau(&QuadratureConfig::default())?;
    n_list
        .iter()
        .map(|&n| {
            let taus: Vec<f64> = (0..reps)
                .into_par_iter()
                .map(|r| kendall_tau_hat(&draw_sample(m, n, &mut replication_rng(seed, n, r))?))
                .collect::<Result<_>>()?;
            let (bias, mse) = bias_mse(&taus, truth)?;
            Ok(TauRow { n, reps, truth, mean: truth + bias, bias, mse })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::ModelSpec;

    #[test]
    fn single_replication_is_deterministic() {
        let cfg = ExperimentConfig::new(ModelSpec::A, vec![40], 1, 99);
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.sizes[0].curves.len(), CURVE_POINTS);
    }

    #[test]
    fn streams_differ_across_replications() {
        use rand::Rng;
        let x: u64 = replication_rng(1, 50, 0).random();
        let y: u64 = replication_rng(1, 50, 1).random();
        let z: u64 = replication_rng(1, 51, 0).random();
        assert!(x != y && x != z);
    }
}
