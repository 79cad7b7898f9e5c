//! Observed censored samples `(Y, δ⁽¹⁾, …, δ⁽⁵⁾)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GmoError, Result};
use crate::model::GmoModel;

/// Event types carried by each observation.
///
/// `X1`, `X2`, `X3` flag which latent shock was the overall minimum;
/// `T` is `T ≤ C` (the lifetime is observed) and `C` is `T ≥ C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    X1,
    X2,
    /// Simultaneous event `T = C`.
    X3,
    T,
    C,
}

impl EventKind {
    pub const ALL: [EventKind; 5] = [EventKind::X1, EventKind::X2, EventKind::X3, EventKind::T, EventKind::C];

    /// 1-based index used in the literature (`δ⁽¹⁾ … δ⁽⁵⁾`).
    pub fn index(self) -> usize {
        match self {
            EventKind::X1 => 1,
            EventKind::X2 => 2,
            EventKind::X3 => 3,
            EventKind::T => 4,
            EventKind::C => 5,
        }
    }

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            1 => Ok(EventKind::X1),
            2 => Ok(EventKind::X2),
            3 => Ok(EventKind::X3),
            4 => Ok(EventKind::T),
            5 => Ok(EventKind::C),
            _ => Err(GmoError::invalid(format!("event index must be in 1..=5, got {k}"))),
        }
    }

    fn slot(self) -> usize {
        self.index() - 1
    }
}

/// Observations sorted by `Y`, with indicator rows permuted alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedSample {
    y: Vec<f64>,
    delta: [Vec<bool>; 5],
    order: Vec<usize>,
    raw_pairs: Option<Vec<(f64, f64)>>,
}

/// Observations sharing one distinct value of `Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TieGroup {
    pub time: f64,
    /// 0-based sorted index of the first member.
    pub first: usize,
    pub len: usize,
    /// Number of members with each indicator set, indexed like [`EventKind::ALL`].
    pub events: [usize; 5],
}

impl TieGroup {
    pub fn events_of(&self, kind: EventKind) -> usize {
        self.events[kind.slot()]
    }

    /// Size of the risk set `#{Y ≥ time}` for a sample of size `n`.
    pub fn at_risk(&self, n: usize) -> usize {
        n - self.first
    }
}

impl ObservedSample {
    /// Sorts observations stably by `y`. Each row is `[δ1, …, δ5]` in the
    /// original order.
    pub fn from_rows(y: Vec<f64>, rows: Vec<[bool; 5]>, raw_pairs: Option<Vec<(f64, f64)>>) -> Result<Self> {
        if y.len() != rows.len() {
            return Err(GmoError::data(format!("{} times but {} indicator rows", y.len(), rows.len())));
        }
        if y.is_empty() {
            return Err(GmoError::EmptySample);
        }
        if let Some(bad) = y.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(GmoError::data(format!("observed times must be finite and nonnegative, got {bad}")));
        }
        let mut order: Vec<usize> = (0..y.len()).collect();
        order.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
        let sorted_y = order.iter().map(|&i| y[i]).collect();
        let delta = std::array::from_fn(|k| order.iter().map(|&i| rows[i][k]).collect());
        Ok(Self { y: sorted_y, delta, order, raw_pairs })
    }

    /// Builds the sample from `(Y, δ⁽⁴⁾, δ⁽⁵⁾)`; the first three indicators
    /// follow from `δ⁽³⁾ = δ⁽⁴⁾δ⁽⁵⁾`, `δ⁽¹⁾ = δ⁽⁴⁾ − δ⁽³⁾`, `δ⁽²⁾ = δ⁽⁵⁾ − δ⁽³⁾`.
    pub fn from_censoring_indicators(y: Vec<f64>, d4: &[bool], d5: &[bool]) -> Result<Self> {
        if d4.len() != y.len() || d5.len() != y.len() {
            return Err(GmoError::data("indicator vectors must match the number of times"));
        }
        let mut rows = Vec::with_capacity(y.len());
        for (i, (&a, &b)) in d4.iter().zip(d5).enumerate() {
            if !(a || b) {
                return Err(GmoError::data(format!("observation {i} is neither T nor C")));
            }
            rows.push(rows_from_tc(a, b));
        }
        Self::from_rows(y, rows, None)
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Sorted observed times `Y₍₁₎ ≤ … ≤ Y₍ₙ₎`.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn indicator(&self, kind: EventKind) -> &[bool] {
        &self.delta[kind.slot()]
    }

    /// `order()[i]` is the original position of the `i`-th sorted observation.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Fully observed `(T, C)` pairs in input order, when available.
    pub fn raw_pairs(&self) -> Option<&[(f64, f64)]> {
        self.raw_pairs.as_deref()
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.indicator(kind).iter().filter(|&&d| d).count()
    }

    /// Groups of equal `Y` values in increasing order.
    pub fn tie_groups(&self) -> Vec<TieGroup> {
        let mut groups = Vec::new();
        let mut i = 0;
        while i < self.y.len() {
            let time = self.y[i];
            let mut j = i;
            let mut events = [0usize; 5];
            while j < self.y.len() && self.y[j] == time {
                for (k, e) in events.iter_mut().enumerate() {
                    *e += self.delta[k][j] as usize;
                }
                j += 1;
            }
            groups.push(TieGroup { time, first: i, len: j - i, events });
            i = j;
        }
        groups
    }
}

fn rows_from_tc(d4: bool, d5: bool) -> [bool; 5] {
    let d3 = d4 && d5;
    [d4 && !d3, d5 && !d3, d3, d4, d5]
}

/// Draws `n` observations from the model. `n ≥ 2`.
pub fn draw_sample<R: Rng + ?Sized>(m: &GmoModel, n: usize, rng: &mut R) -> Result<ObservedSample> {
    if n < 2 {
        return Err(GmoError::invalid("sample size must be at least 2"));
    }
    let mut y = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let [x1, x2, x3] = m.draw_shocks(rng);
        let t = x1.min(x3);
        let c = x2.min(x3);
        y.push(t.min(c));
        rows.push([x1 <= x2 && x1 <= x3, x2 <= x1 && x2 <= x3, x3 <= x1 && x3 <= x2, t <= c, t >= c]);
    }
    ObservedSample::from_rows(y, rows, None)
}

/// Builds a sample from fully observed `(T, C)` pairs, keeping the pairs for
/// the empirical joint survival.
pub fn from_bivariate(t: &[f64], c: &[f64]) -> Result<ObservedSample> {
    if t.len() != c.len() {
        return Err(GmoError::data(format!("length mismatch: {} vs {}", t.len(), c.len())));
    }
    if let Some(bad) = t.iter().chain(c).find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(GmoError::data(format!("times must be finite and nonnegative, got {bad}")));
    }
    let y = t.iter().zip(c).map(|(a, b)| a.min(*b)).collect();
    let rows = t.iter().zip(c).map(|(a, b)| rows_from_tc(a <= b, a >= b)).collect();
    let pairs = t.iter().copied().zip(c.iter().copied()).collect();
    ObservedSample::from_rows(y, rows, Some(pairs))
}

/// Competing-risks coding: 1 → `T` observed, 2 → `C` observed,
/// 0 → both, i.e. a simultaneous event.
///
/// Code 0 conventionally means "still under observation"; it is mapped to
/// `T = C`, which treats end of follow-up as a shared terminating event.
pub fn from_status_coded(times: &[f64], status: &[u8]) -> Result<ObservedSample> {
    if times.len() != status.len() {
        return Err(GmoError::data(format!("length mismatch: {} vs {}", times.len(), status.len())));
    }
    let rows = status
        .iter()
        .map(|&s| match s {
            0 => Ok(rows_from_tc(true, true)),
            1 => Ok(rows_from_tc(true, false)),
            2 => Ok(rows_from_tc(false, true)),
            other => Err(GmoError::data(format!("unknown status code {other}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    ObservedSample::from_rows(times.to_vec(), rows, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ShockDistribution;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bivariate_indicators() {
        let s = from_bivariate(&[1.0, 3.0], &[2.0, 3.0]).unwrap();
        assert_eq!(s.indicator(EventKind::T), &[true, true]);
        assert_eq!(s.indicator(EventKind::C), &[false, true]);
        assert_eq!(s.indicator(EventKind::X3), &[false, true]);
        assert_eq!(s.y(), &[1.0, 3.0]);

        let s = from_bivariate(&[4.0, 1.0, 2.5], &[4.0, 1.0, 2.5]).unwrap();
        assert!(s.indicator(EventKind::X3).iter().all(|&d| d));
    }

    #[test]
    fn bivariate_errors() {
        assert!(matches!(from_bivariate(&[1.0], &[1.0, 2.0]), Err(GmoError::Data(_))));
        assert!(matches!(from_bivariate(&[-1.0], &[1.0]), Err(GmoError::Data(_))));
    }

    #[test]
    fn status_coding() {
        let s = from_status_coded(&[5.0], &[1]).unwrap();
        assert_eq!(s.indicator(EventKind::T), &[true]);
        assert_eq!(s.indicator(EventKind::C), &[false]);
        let s = from_status_coded(&[5.0], &[0]).unwrap();
        assert_eq!(s.indicator(EventKind::X3), &[true]);
        let s = from_status_coded(&[5.0], &[2]).unwrap();
        assert_eq!(s.indicator(EventKind::X2), &[true]);
        assert!(matches!(from_status_coded(&[5.0], &[3]), Err(GmoError::Data(_))));
    }

    #[test]
    fn stable_sort_keeps_permutation() {
        let s = from_bivariate(&[3.0, 1.0, 2.0, 1.0], &[5.0, 4.0, 1.5, 4.0]).unwrap();
        assert_eq!(s.y(), &[1.0, 1.0, 1.5, 3.0]);
        assert_eq!(s.order(), &[1, 3, 2, 0]);
        let groups = s.tie_groups();
        assert_eq!(groups.len(), 3);
        assert_eq!(groups[0].len, 2);
        assert_eq!(groups[0].events_of(EventKind::T), 2);
        assert_eq!(groups[1].events_of(EventKind::C), 1);
        assert_eq!(groups[2].at_risk(4), 1);
    }

    #[test]
    fn simultaneous_fraction_model_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = draw_sample(&GmoModel::model_a(), 100_000, &mut rng).unwrap();
        let frac = s.count(EventKind::X3) as f64 / s.len() as f64;
        assert!((frac - 0.5).abs() < 0.01, "fraction {frac}");
    }

    #[test]
    fn no_common_shock_means_no_ties() {
        let m = GmoModel::new(
            ShockDistribution::exponential(1.0).unwrap(),
            ShockDistribution::exponential(2.0).unwrap(),
            ShockDistribution::point_mass_at_infinity(),
        )
        .unwrap();
        let s = draw_sample(&m, 500, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(s.count(EventKind::X3), 0);
    }

    #[test]
    fn no_censoring_reduces_to_x1() {
        let x1 = ShockDistribution::weibull(1.5, 2.0).unwrap();
        let m = GmoModel::new(x1, ShockDistribution::point_mass_at_infinity(), ShockDistribution::point_mass_at_infinity())
            .unwrap();
        let s = draw_sample(&m, 300, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(s.indicator(EventKind::T).iter().all(|&d| d));
        // The sampler consumes three draws per observation in X1, X2, X3 order.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut expected: Vec<f64> = (0..300)
            .map(|_| {
                let v = x1.draw(&mut rng);
                let _ = ShockDistribution::point_mass_at_infinity().draw(&mut rng);
                let _ = ShockDistribution::point_mass_at_infinity().draw(&mut rng);
                v
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        assert_eq!(s.y(), expected.as_slice());
    }

    #[test]
    fn rejects_tiny_samples() {
        assert!(draw_sample(&GmoModel::model_a(), 1, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
