//! Univariate lifetime laws used as shocks in the GMO construction.
//!
//! Every family exposes its survival function, cumulative hazard, density,
//! quantile and a sampler driven by an explicit generator. Values are
//! immutable and cheap to copy.

use rand::Rng;
use rand_distr::{Distribution, Exp, Weibull};
use serde::{Deserialize, Serialize};
use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{GmoError, Result};

const QUANTILE_TOL: f64 = 1e-10;

/// Parametric family of a shock together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Beta { a: f64, b: f64 },
    /// Lomax (Pareto type II) law, survival `(1 + t/scale)^(-index)`.
    /// Its extreme value index is `1/index`.
    Pareto { index: f64, scale: f64 },
    /// Degenerate shock that never fires.
    PointMassAtInfinity,
}

/// A validated univariate lifetime distribution on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockDistribution {
    family: Family,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(GmoError::invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl ShockDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        Ok(Self { family: Family::Exponential { rate: positive("rate", rate)? } })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self {
            family: Family::Weibull { shape: positive("shape", shape)?, scale: positive("scale", scale)? },
        })
    }

    pub fn beta(a: f64, b: f64) -> Result<Self> {
        Ok(Self { family: Family::Beta { a: positive("a", a)?, b: positive("b", b)? } })
    }

    pub fn pareto(index: f64, scale: f64) -> Result<Self> {
        Ok(Self {
            family: Family::Pareto { index: positive("index", index)?, scale: positive("scale", scale)? },
        })
    }

    pub fn point_mass_at_infinity() -> Self {
        Self { family: Family::PointMassAtInfinity }
    }

    pub fn from_family(family: Family) -> Result<Self> {
        match family {
            Family::Exponential { rate } => Self::exponential(rate),
            Family::Weibull { shape, scale } => Self::weibull(shape, scale),
            Family::Beta { a, b } => Self::beta(a, b),
            Family::Pareto { index, scale } => Self::pareto(index, scale),
            Family::PointMassAtInfinity => Ok(Self::point_mass_at_infinity()),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.family, Family::PointMassAtInfinity)
    }

    /// Right end of the support.
    pub fn terminal_point(&self) -> f64 {
        match self.family {
            Family::Beta { .. } => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// Distribution function, rejecting non-finite or negative arguments.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(1.0 - self.survival(t))
    }

    /// `P(X > t)`. Negative times are treated as the origin.
    pub fn survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        match self.family {
            Family::Exponential { rate } => (-rate * t).exp(),
            Family::Weibull { shape, scale } => (-(t / scale).powf(shape)).exp(),
            Family::Beta { a, b } => {
                if t >= 1.0 {
                    0.0
                } else {
                    // I_{1-t}(b, a) keeps precision in the upper tail.
                    beta_reg(b, a, 1.0 - t)
                }
            }
            Family::Pareto { index, scale } => (-index * (t / scale).ln_1p()).exp(),
            Family::PointMassAtInfinity => 1.0,
        }
    }

    /// Cumulative hazard `-ln S(t)`; `+∞` once the survival reaches zero.
    pub fn cumhaz(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self.family {
            Family::Exponential { rate } => rate * t,
            Family::Weibull { shape, scale } => (t / scale).powf(shape),
            Family::Pareto { index, scale } => index * (t / scale).ln_1p(),
            Family::PointMassAtInfinity => 0.0,
            Family::Beta { .. } => {
                let s = self.survival(t);
                if s > 0.0 {
                    -s.ln()
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match self.family {
            Family::Exponential { rate } => rate * (-rate * t).exp(),
            Family::Weibull { shape, scale } => {
                if t == 0.0 {
                    return match shape {
                        k if k < 1.0 => f64::INFINITY,
                        k if k == 1.0 => 1.0 / scale,
                        _ => 0.0,
                    };
                }
                let z = t / scale;
                shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
            }
            Family::Beta { a, b } => {
                if t <= 0.0 || t >= 1.0 {
                    return beta_edge_density(a, b, t);
                }
                ((a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p() - ln_beta(a, b)).exp()
            }
            Family::Pareto { index, scale } => {
                index / scale * (-(index + 1.0) * (t / scale).ln_1p()).exp()
            }
            Family::PointMassAtInfinity => 0.0,
        }
    }

    /// Hazard rate `f(t)/S(t)`.
    pub fn hazard(&self, t: f64) -> f64 {
        match self.family {
            Family::Exponential { rate } => rate,
            Family::Pareto { index, scale } => index / (scale + t.max(0.0)),
            Family::PointMassAtInfinity => 0.0,
            _ => {
                let s = self.survival(t);
                if s > 0.0 {
                    self.pdf(t) / s
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Left-continuous inverse of the distribution function, `inf{t : F(t) ≥ p}`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GmoError::domain(format!("probability {p} outside [0, 1]")));
        }
        if self.is_degenerate() {
            return Ok(f64::INFINITY);
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        if p == 1.0 {
            return Ok(self.terminal_point());
        }
        // -ln(1 - p), accurate for small p.
        let h = -(-p).ln_1p();
        Ok(match self.family {
            Family::Exponential { rate } => h / rate,
            Family::Weibull { shape, scale } => scale * h.powf(1.0 / shape),
            Family::Pareto { index, scale } => scale * (h / index).exp_m1(),
            Family::Beta { .. } => {
                let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
                while hi - lo > QUANTILE_TOL {
                    let mid = 0.5 * (lo + hi);
                    if 1.0 - self.survival(mid) >= p {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            }
            Family::PointMassAtInfinity => unreachable!(),
        })
    }

    /// One draw. Degenerate shocks return `+∞`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.family {
            Family::Exponential { rate } => Exp::new(rate).expect("validated rate").sample(rng),
            Family::Weibull { shape, scale } => {
                Weibull::new(scale, shape).expect("validated parameters").sample(rng)
            }
            Family::Beta { a, b } => {
                rand_distr::Beta::new(a, b).expect("validated parameters").sample(rng)
            }
            Family::Pareto { index, scale } => {
                // 1 - U lies in (0, 1].
                let u: f64 = 1.0 - rng.random::<f64>();
                scale * (-u.ln() / index).exp_m1()
            }
            Family::PointMassAtInfinity => f64::INFINITY,
        }
    }

    /// `n` i.i.d. draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(GmoError::invalid("sample size must be at least 1"));
        }
        Ok((0..n).map(|_| self.draw(rng)).collect())
    }
}

fn beta_edge_density(a: f64, b: f64, t: f64) -> f64 {
    let shape = if t <= 0.0 { a } else { b };
    if shape < 1.0 {
        f64::INFINITY
    } else if shape == 1.0 {
        (-ln_beta(a, b)).exp()
    } else {
        0.0
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(GmoError::domain(format!("time must be finite, got {t}")));
    }
    if t < 0.0 {
        return Err(GmoError::domain(format!("time must be nonnegative, got {t}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exponential_cdf_values() {
        let e1 = ShockDistribution::exponential(1.0).unwrap();
        assert_eq!(e1.cdf(0.0).unwrap(), 0.0);
        let e4 = ShockDistribution::exponential(4.0).unwrap();
        assert_abs_diff_eq!(e4.cdf(0.1).unwrap(), 1.0 - (-0.4f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(e4.cdf(0.1).unwrap(), 0.32968, epsilon = 1e-5);
    }

    #[test]
    fn beta_cdf_matches_polynomial() {
        // Beta(2,3) has cdf 6t^2 - 8t^3 + 3t^4.
        let b = ShockDistribution::beta(2.0, 3.0).unwrap();
        assert_abs_diff_eq!(b.cdf(0.5).unwrap(), 0.6875, epsilon = 1e-12);
        for &t in &[0.05f64, 0.3, 0.77, 0.99] {
            let poly = 6.0 * t * t - 8.0 * t * t * t + 3.0 * t.powi(4);
            assert_abs_diff_eq!(b.cdf(t).unwrap(), poly, epsilon = 1e-12);
        }
    }

    #[test]
    fn cdf_rejects_non_finite_time() {
        let e = ShockDistribution::exponential(1.0).unwrap();
        assert!(matches!(e.cdf(f64::NAN), Err(GmoError::Domain(_))));
        assert!(matches!(e.cdf(f64::INFINITY), Err(GmoError::Domain(_))));
        assert!(e.cdf(-1.0).is_err());
    }

    #[test]
    fn cumhaz_values() {
        assert_eq!(ShockDistribution::exponential(3.0).unwrap().cumhaz(2.0), 6.0);
        assert_eq!(ShockDistribution::beta(2.0, 3.0).unwrap().cumhaz(0.0), 0.0);
        assert_abs_diff_eq!(ShockDistribution::weibull(2.0, 1.0).unwrap().cumhaz(1.0), 1.0);
        assert_eq!(ShockDistribution::beta(2.0, 3.0).unwrap().cumhaz(1.0), f64::INFINITY);
        assert_eq!(ShockDistribution::point_mass_at_infinity().cumhaz(5.0), 0.0);
    }

    #[test]
    fn point_mass_never_fires() {
        let d = ShockDistribution::point_mass_at_infinity();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs = d.sample(&mut rng, 3).unwrap();
        assert_eq!(xs, vec![f64::INFINITY; 3]);
        assert_eq!(d.cdf(1e300).unwrap(), 0.0);
        assert_eq!(d.quantile(0.5).unwrap(), f64::INFINITY);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(ShockDistribution::exponential(0.0).is_err());
        assert!(ShockDistribution::weibull(-1.0, 1.0).is_err());
        assert!(ShockDistribution::beta(1.0, f64::NAN).is_err());
        assert!(ShockDistribution::pareto(1.0, 0.0).is_err());
        let e = ShockDistribution::exponential(1.0).unwrap();
        assert!(e.quantile(1.5).is_err());
        assert!(e.sample(&mut ChaCha8Rng::seed_from_u64(0), 0).is_err());
    }

    #[test]
    fn sample_means_follow_lln() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let xs = ShockDistribution::exponential(1.0).unwrap().sample(&mut rng, n).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 3.0 / (n as f64).sqrt(), "mean {mean}");

        let xs = ShockDistribution::beta(10.0, 10.0).unwrap().sample(&mut rng, n).unwrap();
        let mean = xs.iter().sum::<f64>() / n as f64;
        // sd of Beta(10,10) is sqrt(1/84)
        let se = (1.0f64 / 84.0).sqrt() / (n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn sampler_is_deterministic_given_seed() {
        let d = ShockDistribution::pareto(1.5, 2.0).unwrap();
        let a = d.sample(&mut ChaCha8Rng::seed_from_u64(9), 50).unwrap();
        let b = d.sample(&mut ChaCha8Rng::seed_from_u64(9), 50).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn quantile_edges() {
        let b = ShockDistribution::beta(2.5, 6.0).unwrap();
        assert_eq!(b.quantile(0.0).unwrap(), 0.0);
        assert_eq!(b.quantile(1.0).unwrap(), 1.0);
        let e = ShockDistribution::exponential(2.0).unwrap();
        assert_eq!(e.quantile(1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn hazard_is_density_over_survival() {
        let w = ShockDistribution::weibull(1.7, 0.8).unwrap();
        for &t in &[0.1, 0.5, 1.3] {
            assert_abs_diff_eq!(w.hazard(t), 1.7 / 0.8 * (t / 0.8f64).powf(0.7), epsilon = 1e-12);
        }
        let p = ShockDistribution::pareto(2.0, 3.0).unwrap();
        assert_abs_diff_eq!(p.hazard(1.0), p.pdf(1.0) / p.survival(1.0), epsilon = 1e-14);
    }
}
