//! Nonparametric estimators built from an [`ObservedSample`].
//!
//! Ties in `Y` are aggregated: each distinct time contributes its event
//! count over the size of the risk set at that time. With continuous data
//! this is the per-order-statistic sum.

use crate::error::{GmoError, Result};
use crate::model::Margin;
pub use crate::sampling::EventKind;
use crate::sampling::ObservedSample;

/// Right-continuous step function.
#[derive(Debug, Clone, PartialEq)]
pub struct StepEstimate {
    times: Vec<f64>,
    values: Vec<f64>,
    value_before_first: f64,
}

impl StepEstimate {
    pub fn new(times: Vec<f64>, values: Vec<f64>, value_before_first: f64) -> Result<Self> {
        if times.len() != values.len() {
            return Err(GmoError::invalid("times and values must have the same length"));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(GmoError::invalid("jump times must be strictly increasing"));
        }
        Ok(Self { times, values, value_before_first })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_before_first(&self) -> f64 {
        self.value_before_first
    }

    /// Value at `t`, including a jump located exactly at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&x| x <= t);
        if idx == 0 {
            self.value_before_first
        } else {
            self.values[idx - 1]
        }
    }

    /// Left limit at `t`.
    pub fn left_limit(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&x| x < t);
        if idx == 0 {
            self.value_before_first
        } else {
            self.values[idx - 1]
        }
    }

    /// `(time, size of jump)` pairs.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mut prev = self.value_before_first;
        self.times.iter().zip(&self.values).map(move |(&t, &v)| {
            let d = v - prev;
            prev = v;
            (t, d)
        })
    }
}

fn require_nonempty(s: &ObservedSample) -> Result<()> {
    if s.is_empty() {
        Err(GmoError::EmptySample)
    } else {
        Ok(())
    }
}

/// Nelson–Aalen estimator of the cumulative hazard for event type `kind`.
pub fn nelson_aalen(s: &ObservedSample, kind: EventKind) -> Result<StepEstimate> {
    require_nonempty(s)?;
    let n = s.len();
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut cum = 0.0;
    for g in s.tie_groups() {
        let d = g.events_of(kind);
        if d > 0 {
            cum += d as f64 / g.at_risk(n) as f64;
            times.push(g.time);
            values.push(cum);
        }
    }
    Ok(StepEstimate { times, values, value_before_first: 0.0 })
}

/// Kaplan–Meier estimator of the survival for event type `kind`, forced to
/// zero from the largest observation onwards.
pub fn kaplan_meier(s: &ObservedSample, kind: EventKind) -> Result<StepEstimate> {
    require_nonempty(s)?;
    let n = s.len();
    let last = s.y()[n - 1];
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut surv = 1.0;
    for g in s.tie_groups() {
        if g.time >= last {
            break;
        }
        let d = g.events_of(kind);
        if d > 0 {
            surv *= 1.0 - d as f64 / g.at_risk(n) as f64;
            times.push(g.time);
            values.push(surv);
        }
    }
    times.push(last);
    values.push(0.0);
    Ok(StepEstimate { times, values, value_before_first: 1.0 })
}

/// Empirical survival `#{x > t}/n` of a fully observed vector.
pub fn empirical_survival(xs: &[f64]) -> Result<StepEstimate> {
    if xs.is_empty() {
        return Err(GmoError::EmptySample);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        times.push(sorted[i]);
        values.push((sorted.len() - j) as f64 / n);
        i = j;
    }
    Ok(StepEstimate { times, values, value_before_first: 1.0 })
}

/// `Λ₃,ₙ(t)/Λ₄,ₙ(t)` (margin `T`) or `Λ₃,ₙ(t)/Λ₅,ₙ(t)` (margin `C`).
pub fn alpha_hat(s: &ObservedSample, margin: Margin, t: f64) -> Result<f64> {
    let est = JointSurvivalEstimate::new(s)?;
    est.alpha(margin, t)
        .ok_or_else(|| GmoError::domain(format!("alpha estimate undefined at t = {t}: no events yet")))
}

/// Plug-in estimate of `P(T > t, C > s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSurvivalEstimate {
    km4: StepEstimate,
    km5: StepEstimate,
    na3: StepEstimate,
    na4: StepEstimate,
    na5: StepEstimate,
}

impl JointSurvivalEstimate {
    pub fn new(s: &ObservedSample) -> Result<Self> {
        Ok(Self {
            km4: kaplan_meier(s, EventKind::T)?,
            km5: kaplan_meier(s, EventKind::C)?,
            na3: nelson_aalen(s, EventKind::X3)?,
            na4: nelson_aalen(s, EventKind::T)?,
            na5: nelson_aalen(s, EventKind::C)?,
        })
    }

    pub fn km_t(&self) -> &StepEstimate {
        &self.km4
    }
    pub fn km_c(&self) -> &StepEstimate {
        &self.km5
    }
    pub fn na_simultaneous(&self) -> &StepEstimate {
        &self.na3
    }
    pub fn na_t(&self) -> &StepEstimate {
        &self.na4
    }
    pub fn na_c(&self) -> &StepEstimate {
        &self.na5
    }

    /// `None` before the first event of the margin.
    pub fn alpha(&self, margin: Margin, t: f64) -> Option<f64> {
        let denom = match margin {
            Margin::T => self.na4.eval(t),
            Margin::C => self.na5.eval(t),
        };
        (denom > 0.0).then(|| self.na3.eval(t) / denom)
    }

    /// `min(F̄5(s)·F̄4(t)^{1−α1(t)}, F̄4(t)·F̄5(s)^{1−α2(s)})`. An undefined α
    /// is replaced by 0, its limit where `Λ₃,ₙ` is still zero.
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        let f4 = self.km4.eval(t);
        let f5 = self.km5.eval(s);
        let a1 = self.alpha(Margin::T, t).unwrap_or(0.0);
        let a2 = self.alpha(Margin::C, s).unwrap_or(0.0);
        (f5 * pow_zero(f4, 1.0 - a1)).min(f4 * pow_zero(f5, 1.0 - a2))
    }
}

/// `x^e` with `0^0 = 0`.
fn pow_zero(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(e)
    }
}

/// Kendall's tau estimator `(2/n)·Σ δ⁽⁴⁾₍ᵢ₎δ⁽⁵⁾₍ᵢ₎·(n−i+1)/n`. Tied
/// observations share the risk set of their group.
pub fn kendall_tau_hat(s: &ObservedSample) -> Result<f64> {
    require_nonempty(s)?;
    let n = s.len();
    let nf = n as f64;
    let total: f64 = s
        .tie_groups()
        .iter()
        .map(|g| g.events_of(EventKind::X3) as f64 * g.at_risk(n) as f64)
        .sum();
    Ok(2.0 * total / (nf * nf))
}

/// `(1/n)·#{Tᵢ > t, Cᵢ > s}` for fully observed pairs.
pub fn empirical_joint_survival(pairs: &[(f64, f64)], t: f64, s: f64) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    let hits = pairs.iter().filter(|(a, b)| *a > t && *b > s).count();
    hits as f64 / pairs.len() as f64
}

/// Sample Kendall's tau-a of paired data, in `O(n log n)`.
///
/// Pairs tied in either coordinate count as neither concordant nor discordant.
pub fn pairwise_kendall_tau(pairs: &[(f64, f64)]) -> Result<f64> {
    let n = pairs.len();
    if n < 2 {
        return Err(GmoError::invalid("need at least two pairs"));
    }
    let mut v = pairs.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let n0 = (n * (n - 1) / 2) as i64;

    let tied_pairs = |lens: &mut dyn Iterator<Item = usize>| lens.map(|k| (k * (k - 1) / 2) as i64).sum::<i64>();
    let ties_x = tied_pairs(&mut run_lengths(&v, |a, b| a.0 == b.0));
    let ties_xy = tied_pairs(&mut run_lengths(&v, |a, b| a == b));

    let mut ys: Vec<f64> = v.iter().map(|p| p.1).collect();
    let discordant = merge_count(&mut ys) as i64;
    let ties_y = tied_pairs(&mut run_lengths(&ys, |a, b| a == b));

    let concordant = n0 - ties_x - ties_y + ties_xy - discordant;
    Ok((concordant - discordant) as f64 / n0 as f64)
}

fn run_lengths<T, F: Fn(&T, &T) -> bool>(v: &[T], same: F) -> impl Iterator<Item = usize> {
    let mut lens = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && same(&v[i], &v[j]) {
            j += 1;
        }
        lens.push(j - i);
        i = j;
    }
    lens.into_iter()
}

/// Sorts `xs` and returns the number of strict inversions.
fn merge_count(xs: &mut [f64]) -> u64 {
    let n = xs.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = merge_count(&mut xs[..mid]) + merge_count(&mut xs[mid..]);
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if xs[j] < xs[i] {
            count += (mid - i) as u64;
            merged.push(xs[j]);
            j += 1;
        } else {
            merged.push(xs[i]);
            i += 1;
        }
    }
    merged.extend_from_slice(&xs[i..mid]);
    merged.extend_from_slice(&xs[j..n]);
    xs.copy_from_slice(&merged);
    count
}
