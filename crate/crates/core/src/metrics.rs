//! Discrepancies between joint survival surfaces and simulation summaries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GmoError, Result};

/// Square `[lower, upper]²` split into `points × points` midpoint cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    lower: f64,
    upper: f64,
    points: usize,
}

pub const DEFAULT_GRID_POINTS: usize = 100;
const KL_FLOOR: f64 = 1e-12;

impl GridSpec {
    pub fn new(lower: f64, upper: f64, points: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(GmoError::invalid(format!("grid needs finite lower < upper, got [{lower}, {upper}]")));
        }
        if points < 16 {
            return Err(GmoError::invalid(format!("grid needs at least 16 points per axis, got {points}")));
        }
        Ok(Self { lower, upper, points })
    }

    /// `[min Y, max Y]` of an observed sample.
    pub fn from_observations(y: &[f64], points: usize) -> Result<Self> {
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::new(lo, hi, points)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }
    pub fn upper(&self) -> f64 {
        self.upper
    }
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        (self.upper - self.lower) / self.points as f64
    }

    pub fn midpoints(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|i| self.lower + (i as f64 + 0.5) * h).collect()
    }

    fn integrate<F: Fn(f64, f64) -> f64 + Sync>(&self, cell: F) -> f64 {
        let mids = self.midpoints();
        let h = self.step();
        let total: f64 = mids
            .par_iter()
            .map(|&t| mids.iter().map(|&s| cell(t, s)).sum::<f64>())
            .collect::<Vec<_>>()
            .iter()
            .sum();
        total * h * h
    }
}

/// `∬ (f − g)²` over the grid.
pub fn ise<F, G>(f: F, g: G, grid: &GridSpec) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
    G: Fn(f64, f64) -> f64 + Sync,
{
    grid.integrate(|t, s| (f(t, s) - g(t, s)).powi(2))
}

/// `∬ f·log(f/g)` over the grid, with both surfaces floored at 1e-12 and
/// cells where `f` is below the floor contributing 0.
pub fn kl<F, G>(f: F, g: G, grid: &GridSpec) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
    G: Fn(f64, f64) -> f64 + Sync,
{
    grid.integrate(|t, s| {
        let a = f(t, s);
        if a < KL_FLOOR {
            return 0.0;
        }
        let b = g(t, s).max(KL_FLOOR);
        a * (a / b).ln()
    })
}

/// `(mean − truth, mean squared deviation from truth)`.
pub fn bias_mse(estimates: &[f64], truth: f64) -> Result<(f64, f64)> {
    if estimates.is_empty() {
        return Err(GmoError::EmptySample);
    }
    let n = estimates.len() as f64;
    let bias = estimates.iter().map(|e| e - truth).sum::<f64>() / n;
    let mse = estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / n;
    Ok((bias, mse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, 1.0, 100).is_err());
        assert!(GridSpec::new(0.0, 1.0, 15).is_err());
        let g = GridSpec::from_observations(&[0.3, 0.1, 0.9], 20).unwrap();
        assert_eq!((g.lower(), g.upper()), (0.1, 0.9));
    }

    #[test]
    fn ise_basics() {
        let grid = GridSpec::new(0.0, 1.0, 16).unwrap();
        assert_eq!(ise(|t, s| t * s, |t, s| t * s, &grid), 0.0);
        assert_abs_diff_eq!(ise(|_, _| 1.0, |_, _| 0.0, &grid), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kl_basics() {
        let grid = GridSpec::new(0.0, 1.0, 32).unwrap();
        let f = |t: f64, s: f64| (-t - s).exp();
        assert_eq!(kl(f, f, &grid), 0.0);
        assert_eq!(kl(|_, _| 0.0, f, &grid), 0.0);
        assert!(kl(f, |t, s| (-2.0 * t - s).exp(), &grid) > 0.0);
    }

    #[test]
    fn bias_and_mse() {
        assert_eq!(bias_mse(&[0.5, 0.5], 0.5).unwrap(), (0.0, 0.0));
        let (b, m) = bias_mse(&[0.4, 0.6], 0.5).unwrap();
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m, 0.01, epsilon = 1e-15);
        assert!(bias_mse(&[], 0.0).is_err());
    }
}
