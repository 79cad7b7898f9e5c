//! Asymptotic covariances of the Nelson–Aalen processes and confidence
//! intervals for the joint survival estimator and Kendall's tau.
//!
//! Plug-in sums use the left-limit convention `H̄ₙ(Yᵢ⁻) = (n − rankᵢ + 1)/n`,
//! where tied observations share the rank of the first member of their group.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{GmoError, Result};
use crate::estimators::{kendall_tau_hat, EventKind, JointSurvivalEstimate};
use crate::model::{GmoModel, Margin};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::sampling::ObservedSample;

/// Entry `σₖ,ₗ(t, s)` of the limiting covariance of `√n(Λₖ,ₙ(t) − Λₖ(t))`
/// and `√n(Λₗ,ₙ(s) − Λₗ(s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceQuery {
    pub k: EventKind,
    pub l: EventKind,
    pub t: f64,
    pub s: f64,
}

impl CovarianceQuery {
    pub fn new(k: EventKind, l: EventKind, t: f64, s: f64) -> Result<Self> {
        for x in [t, s] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(GmoError::domain(format!("evaluation point must be finite and >= 0, got {x}")));
            }
        }
        Ok(Self { k, l, t, s })
    }

    /// Event types numbered 1..=5.
    pub fn from_indices(k: usize, l: usize, t: f64, s: f64) -> Result<Self> {
        Self::new(EventKind::from_index(k)?, EventKind::from_index(l)?, t, s)
    }

    pub fn transposed(&self) -> Self {
        Self { k: self.l, l: self.k, t: self.s, s: self.t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub point_estimate: f64,
    pub variance: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
    /// The interval came from the simulated min-of-Gaussians law.
    pub boundary_case: bool,
    /// The estimated variance is zero and the interval collapses to the point.
    pub degenerate: bool,
}

impl VarianceReport {
    pub fn covers(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

/// Which of the shocks X1, X2, X3 make up each event type.
fn shock_mask(kind: EventKind) -> [bool; 3] {
    match kind {
        EventKind::X1 => [true, false, false],
        EventKind::X2 => [false, true, false],
        EventKind::X3 => [false, false, true],
        EventKind::T => [true, false, true],
        EventKind::C => [false, true, true],
    }
}

fn both(k: EventKind, l: EventKind) -> [bool; 3] {
    let (a, b) = (shock_mask(k), shock_mask(l));
    [a[0] && b[0], a[1] && b[1], a[2] && b[2]]
}

fn shocks(m: &GmoModel) -> [&crate::distributions::ShockDistribution; 3] {
    [m.x1(), m.x2(), m.x3()]
}

fn sub_hazard(m: &GmoModel, mask: [bool; 3], u: f64) -> f64 {
    shocks(m).iter().zip(mask).filter(|(_, on)| *on).map(|(x, _)| x.hazard(u)).sum()
}

fn sub_cumhaz(m: &GmoModel, mask: [bool; 3], u: f64) -> f64 {
    shocks(m).iter().zip(mask).filter(|(_, on)| *on).map(|(x, _)| x.cumhaz(u)).sum()
}

fn quad_value<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, quad: &QuadratureConfig) -> Result<f64> {
    Ok(integrate(f, a, b, quad)?.value)
}

/// `σₖ,ₗ(t, s)` for a known model, by quadrature.
pub fn sigma_analytic(m: &GmoModel, q: &CovarianceQuery, quad: &QuadratureConfig) -> Result<f64> {
    let (t, s) = (q.t, q.s);
    if m.survival_y(t.max(s)) <= 0.0 {
        return Err(GmoError::domain(format!("P(Y > {}) = 0: covariance undefined", t.max(s))));
    }
    let lo = t.min(s);
    let (mk, ml) = (shock_mask(q.k), shock_mask(q.l));
    let g = |mask: [bool; 3], x: f64| -> Result<f64> {
        quad_value(|u| sub_hazard(m, mask, u) / m.survival_y(u), 0.0, x, quad)
    };
    if q.k == q.l {
        return g(mk, lo);
    }

    let lam_l_s = sub_cumhaz(m, ml, s);
    let lam_k_t = sub_cumhaz(m, mk, t);
    // ∫∫ H̄(u∨v)/(H̄(u)H̄(v)) dΛₖ(u) dΛₗ(v), inner integral split at v = u.
    let double = quad_value(
        |u| {
            let w = u.min(s);
            let inner = g(ml, w).unwrap_or(f64::NAN);
            let later = (lam_l_s - sub_cumhaz(m, ml, w)) / m.survival_y(u);
            sub_hazard(m, mk, u) * (inner + later)
        },
        0.0,
        t,
        quad,
    )?;
    let cross_kl =
        quad_value(|u| (lam_k_t - sub_cumhaz(m, mk, u)) * sub_hazard(m, ml, u) / m.survival_y(u), 0.0, lo, quad)?;
    let cross_lk =
        quad_value(|u| (lam_l_s - sub_cumhaz(m, ml, u)) * sub_hazard(m, mk, u) / m.survival_y(u), 0.0, lo, quad)?;
    let joint = g(both(q.k, q.l), lo)?;
    Ok(double - cross_kl - cross_lk + joint)
}

/// Per-tie-group tables shared by every plug-in covariance of one sample.
#[derive(Debug, Clone)]
pub struct PluginCovariance {
    n: f64,
    times: Vec<f64>,
    at_risk: Vec<f64>,
    /// Nelson–Aalen increments per event type and group.
    jumps: [Vec<f64>; 5],
    /// Per observation (sorted order): group index.
    group_of: Vec<usize>,
    delta: [Vec<bool>; 5],
    y: Vec<f64>,
}

impl PluginCovariance {
    pub fn new(s: &ObservedSample) -> Result<Self> {
        if s.is_empty() {
            return Err(GmoError::EmptySample);
        }
        let n = s.len();
        let groups = s.tie_groups();
        let mut group_of = vec![0; n];
        for (gi, g) in groups.iter().enumerate() {
            group_of[g.first..g.first + g.len].fill(gi);
        }
        let at_risk: Vec<f64> = groups.iter().map(|g| g.at_risk(n) as f64).collect();
        let jumps = EventKind::ALL.map(|kind| {
            groups.iter().zip(&at_risk).map(|(g, r)| g.events_of(kind) as f64 / r).collect()
        });
        Ok(Self {
            n: n as f64,
            times: groups.iter().map(|g| g.time).collect(),
            at_risk,
            jumps,
            group_of,
            delta: EventKind::ALL.map(|kind| s.indicator(kind).to_vec()),
            y: s.y().to_vec(),
        })
    }

    /// Number of groups with time `≤ x`.
    fn upto(&self, x: f64) -> usize {
        self.times.partition_point(|&u| u <= x)
    }

    fn na(&self, kind: EventKind, x: f64) -> f64 {
        self.jumps[kind.index() - 1][..self.upto(x)].iter().sum()
    }

    /// Plug-in `σₖ,ₗ(t, s)`. Off the diagonal this equals the empirical
    /// covariance of the estimated influence functions of `Λₖ,ₙ(t)` and
    /// `Λₗ,ₙ(s)`.
    pub fn sigma(&self, q: &CovarianceQuery) -> Result<f64> {
        let (t, s) = (q.t, q.s);
        let last = *self.times.last().expect("non-empty");
        if t.max(s) > last {
            return Err(GmoError::domain(format!(
                "empty risk set before {}: largest observation is {last}",
                t.max(s)
            )));
        }
        let n = self.n;
        let lo = t.min(s);
        let (jk, jl) = (&self.jumps[q.k.index() - 1], &self.jumps[q.l.index() - 1]);
        let (gt, gs, glo) = (self.upto(t), self.upto(s), self.upto(lo));
        if q.k == q.l {
            return Ok((0..glo).map(|g| n * jk[g] / self.at_risk[g]).sum());
        }

        let lam_k_t: f64 = jk[..gt].iter().sum();
        let lam_l_s: f64 = jl[..gs].iter().sum();

        // Double sum over (g, h), weight n / r of the earlier group.
        let mut double = 0.0;
        let mut earlier_l = 0.0; // Σ_{h ≤ g, h < gs} n·jl_h / r_h
        let mut cum_l = 0.0; // Σ_{h ≤ g} jl_h
        for g in 0..gt {
            if g < gs {
                earlier_l += n * jl[g] / self.at_risk[g];
                cum_l += jl[g];
            }
            let later_l = if g < gs { lam_l_s - cum_l } else { 0.0 };
            double += jk[g] * earlier_l + n * jk[g] / self.at_risk[g] * later_l;
        }

        let mut cross_kl = 0.0;
        let mut cross_lk = 0.0;
        let (mut before_k, mut before_l) = (0.0, 0.0);
        for h in 0..glo {
            let w = n / self.at_risk[h];
            cross_kl += (lam_k_t - before_k) * w * jl[h];
            cross_lk += (lam_l_s - before_l) * w * jk[h];
            before_k += jk[h];
            before_l += jl[h];
        }

        let (dk, dl) = (&self.delta[q.k.index() - 1], &self.delta[q.l.index() - 1]);
        let mut joint = 0.0;
        for i in 0..self.y.len() {
            if self.y[i] <= lo && dk[i] && dl[i] {
                let r = self.at_risk[self.group_of[i]];
                joint += n / (r * r);
            }
        }
        Ok(double - cross_kl - cross_lk + joint)
    }

    /// Cumulative hazard estimate `Λₖ,ₙ(x)`.
    pub fn nelson_aalen(&self, kind: EventKind, x: f64) -> f64 {
        self.na(kind, x)
    }
}

/// Plug-in `σₖ,ₗ(t, s)` from a sample.
pub fn sigma_plugin(s: &ObservedSample, q: &CovarianceQuery) -> Result<f64> {
    PluginCovariance::new(s)?.sigma(q)
}

fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(p)
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(GmoError::invalid(format!("confidence level must lie in (0, 1), got {level}")))
    }
}

/// Settings for [`joint_survival_variance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointCiOptions {
    pub level: f64,
    /// Relative gap between the two branch quantities below which the
    /// min-of-Gaussians limit is used.
    pub tie_tolerance: f64,
    pub draws: usize,
    pub seed: u64,
}

impl Default for JointCiOptions {
    fn default() -> Self {
        Self { level: 0.95, tie_tolerance: 1e-3, draws: 100_000, seed: 0x6d6f_6369 }
    }
}

/// Confidence interval for `P(T > t, C > s)` from the limit law of
/// `√n(P̃ₙ/P̃ − 1)`, rescaled by the point estimate.
pub fn joint_survival_variance(
    sample: &ObservedSample,
    t: f64,
    s: f64,
    opts: &JointCiOptions,
) -> Result<VarianceReport> {
    check_level(opts.level)?;
    if opts.draws < 100 {
        return Err(GmoError::invalid("at least 100 simulation draws are required"));
    }
    let est = JointSurvivalEstimate::new(sample)?;
    let last = sample.y()[sample.len() - 1];
    if !(t >= 0.0 && s >= 0.0 && t.max(s) < last) {
        return Err(GmoError::domain(format!("(t, s) = ({t}, {s}) outside the observed range [0, {last})")));
    }
    let point = est.eval(t, s);
    let cov = PluginCovariance::new(sample)?;
    let sig = |k, l, a, b| cov.sigma(&CovarianceQuery { k, l, t: a, s: b });
    use EventKind::{C, T, X3};

    let q1 = est.km_t().eval(t).powf(est.alpha(Margin::T, t).unwrap_or(0.0));
    let q2 = est.km_c().eval(s).powf(est.alpha(Margin::C, s).unwrap_or(0.0));
    let tied = (q1 - q2).abs() <= opts.tie_tolerance * q1.max(q2);

    let common = sig(T, T, t, t)? + sig(C, C, s, s)? + 2.0 * sig(T, C, t, s)?;
    let sigma = if q1 < q2 {
        common + sig(X3, X3, s, s)? - 2.0 * (sig(T, X3, t, s)? + sig(C, X3, s, s)?)
    } else {
        common + sig(X3, X3, t, t)? - 2.0 * (sig(T, X3, t, t)? + sig(C, X3, s, t)?)
    };
    let root_n = (sample.len() as f64).sqrt();

    if !tied && sigma > 0.0 {
        let half = normal_quantile(0.5 + opts.level / 2.0) * (sigma / sample.len() as f64).sqrt();
        return Ok(VarianceReport {
            point_estimate: point,
            variance: sigma,
            ci_low: point * (1.0 - half),
            ci_high: point * (1.0 + half),
            level: opts.level,
            boundary_case: false,
            degenerate: false,
        });
    }

    // (N₃(t), N₃(s), N₄(t), N₅(s)); the limit is min(N₃(t), N₃(s)) − N₄(t) − N₅(s).
    let pts = [(X3, t), (X3, s), (T, t), (C, s)];
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let v = sig(pts[i].0, pts[j].0, pts[i].1, pts[j].1)?;
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    let l = cholesky_psd(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut z: Vec<f64> = (0..opts.draws)
        .map(|_| {
            let e: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let x: [f64; 4] = std::array::from_fn(|i| (0..=i).map(|j| l[i][j] * e[j]).sum());
            x[0].min(x[1]) - x[2] - x[3]
        })
        .collect();
    z.sort_by(f64::total_cmp);
    let mean = z.iter().sum::<f64>() / z.len() as f64;
    let variance = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / z.len() as f64;
    let tail = (1.0 - opts.level) / 2.0;
    let q_lo = empirical_quantile(&z, tail);
    let q_hi = empirical_quantile(&z, 1.0 - tail);
    Ok(VarianceReport {
        point_estimate: point,
        variance,
        ci_low: point * (1.0 - q_hi / root_n),
        ci_high: point * (1.0 - q_lo / root_n),
        level: opts.level,
        boundary_case: true,
        degenerate: variance == 0.0,
    })
}

fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let idx = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[idx]
}

/// Lower-triangular factor of a positive semi-definite matrix; pivots that
/// vanish (or go slightly negative from rounding) zero out their column.
fn cholesky_psd(a: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut l = [[0.0; 4]; 4];
    let scale = (0..4).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    for j in 0..4 {
        let d = a[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if d <= 1e-12 * scale {
            continue;
        }
        let root = d.sqrt();
        l[j][j] = root;
        for i in (j + 1)..4 {
            l[i][j] = (a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>()) / root;
        }
    }
    l
}

/// Per-observation influence values `ηᵢ` of `τₙ` in sorted order; their
/// empirical variance is the plug-in `σ²`.
fn tau_influence(s: &ObservedSample) -> Vec<f64> {
    let n = s.len();
    let nf = n as f64;
    let mut eta = vec![0.0; n];
    let mut simultaneous_before = 0usize;
    for g in s.tie_groups() {
        let d3 = &s.indicator(EventKind::X3)[g.first..g.first + g.len];
        for (i, &d) in d3.iter().enumerate() {
            let later = if d { g.at_risk(n) as f64 } else { 0.0 };
            eta[g.first + i] = 2.0 * (simultaneous_before as f64 + later) / nf;
        }
        simultaneous_before += g.events_of(EventKind::X3);
    }
    eta
}

/// Plug-in `σ² = I₁ + I₂ + I₃` of `√n(τₙ − τ)`.
pub fn kendall_tau_sigma2(s: &ObservedSample) -> Result<f64> {
    if s.is_empty() {
        return Err(GmoError::EmptySample);
    }
    let eta = tau_influence(s);
    let n = eta.len() as f64;
    let mean = eta.iter().sum::<f64>() / n;
    Ok(eta.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n)
}

/// `τₙ ± z·√(σ²ₙ/n)`.
pub fn kendall_tau_variance(s: &ObservedSample, level: f64) -> Result<VarianceReport> {
    check_level(level)?;
    if s.len() < 10 {
        return Err(GmoError::invalid(format!("need at least 10 observations, got {}", s.len())));
    }
    let tau = kendall_tau_hat(s)?;
    let variance = kendall_tau_sigma2(s)?;
    let half = normal_quantile(0.5 + level / 2.0) * (variance / s.len() as f64).sqrt();
    Ok(VarianceReport {
        point_estimate: tau,
        variance,
        ci_low: tau - half,
        ci_high: tau + half,
        level,
        boundary_case: false,
        degenerate: variance == 0.0,
    })
}
