//! Analytic side of the generalized Marshall–Olkin (GMO) model.
//!
//! Three independent shocks `X1, X2, X3` drive the pair
//! `T = min(X1, X3)`, `C = min(X2, X3)`. The common shock `X3` is what
//! makes `T` and `C` dependent and gives `P(T = C) > 0`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::ShockDistribution;
use crate::error::{GmoError, Result};
use crate::quadrature::{integrate, QuadratureConfig};

const INVERSE_TOL: f64 = 1e-10;
/// Mass of `H` left beyond the upper integration limit.
const TAIL_MASS: f64 = 1e-10;

/// Which coordinate of the pair: the lifetime `T` or the censoring time `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Margin {
    T,
    C,
}

/// Three independent shocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GmoModel {
    x1: ShockDistribution,
    x2: ShockDistribution,
    x3: ShockDistribution,
}

impl GmoModel {
    /// Fails when every shock is degenerate, since then nothing is ever observed.
    pub fn new(x1: ShockDistribution, x2: ShockDistribution, x3: ShockDistribution) -> Result<Self> {
        if x1.is_degenerate() && x2.is_degenerate() && x3.is_degenerate() {
            return Err(GmoError::invalid("at least one shock must be non-degenerate"));
        }
        Ok(Self { x1, x2, x3 })
    }

    /// Exponential shocks with rates 1, 2 and 3.
    pub fn model_a() -> Self {
        Self {
            x1: ShockDistribution::exponential(1.0).unwrap(),
            x2: ShockDistribution::exponential(2.0).unwrap(),
            x3: ShockDistribution::exponential(3.0).unwrap(),
        }
    }

    /// Beta shocks B(2,3), B(10,10) and B(2.5,6).
    pub fn model_b() -> Self {
        Self {
            x1: ShockDistribution::beta(2.0, 3.0).unwrap(),
            x2: ShockDistribution::beta(10.0, 10.0).unwrap(),
            x3: ShockDistribution::beta(2.5, 6.0).unwrap(),
        }
    }

    pub fn x1(&self) -> &ShockDistribution {
        &self.x1
    }
    pub fn x2(&self) -> &ShockDistribution {
        &self.x2
    }
    pub fn x3(&self) -> &ShockDistribution {
        &self.x3
    }

    fn own_shock(&self, margin: Margin) -> &ShockDistribution {
        match margin {
            Margin::T => &self.x1,
            Margin::C => &self.x2,
        }
    }

    pub fn marginal_survival(&self, margin: Margin, t: f64) -> f64 {
        self.own_shock(margin).survival(t) * self.x3.survival(t)
    }

    pub fn marginal_survival_t(&self, t: f64) -> f64 {
        self.marginal_survival(Margin::T, t)
    }

    pub fn marginal_survival_c(&self, t: f64) -> f64 {
        self.marginal_survival(Margin::C, t)
    }

    pub fn marginal_cumhaz(&self, margin: Margin, t: f64) -> f64 {
        self.own_shock(margin).cumhaz(t) + self.x3.cumhaz(t)
    }

    /// Survival of the observed time `Y = min(T, C)`.
    pub fn survival_y(&self, t: f64) -> f64 {
        self.x1.survival(t) * self.x2.survival(t) * self.x3.survival(t)
    }

    /// `P(T > t, C > s)`.
    pub fn joint_survival(&self, t: f64, s: f64) -> f64 {
        self.x1.survival(t) * self.x2.survival(s) * self.x3.survival(t.max(s))
    }

    /// `Λ̃3 / (Λ̃i + Λ̃3)` at `t`.
    pub fn alpha(&self, margin: Margin, t: f64) -> Result<f64> {
        let own = self.own_shock(margin).cumhaz(t);
        let common = self.x3.cumhaz(t);
        if !(t > 0.0) || own + common == 0.0 {
            return Err(GmoError::domain(format!("alpha undefined at t = {t}: no hazard accumulated yet")));
        }
        match (own.is_finite(), common.is_finite()) {
            (true, true) => Ok(common / (own + common)),
            (true, false) => Ok(1.0),
            (false, true) => Ok(0.0),
            (false, false) => Err(GmoError::domain(format!("t = {t} lies beyond the support"))),
        }
    }

    /// Generalized inverse `inf{t ≥ 0 : F̄(t) ≤ u}` of a marginal survival.
    pub fn inverse_marginal_survival(&self, margin: Margin, u: f64) -> Result<f64> {
        generalized_inverse(|t| self.marginal_survival(margin, t), u)
    }

    /// The survival copula, defined on the attainable range of the margins.
    pub fn survival_copula(&self, u: f64, v: f64) -> Result<f64> {
        check_unit("u", u)?;
        check_unit("v", v)?;
        if u == 0.0 || v == 0.0 {
            return Ok(0.0);
        }
        if u == 1.0 {
            return Ok(v);
        }
        if v == 1.0 {
            return Ok(u);
        }
        let t = self.inverse_marginal_survival(Margin::T, u)?;
        let s = self.inverse_marginal_survival(Margin::C, v)?;
        let a1 = self.alpha(Margin::T, t)?;
        let a2 = self.alpha(Margin::C, s)?;
        Ok(u * v * u.powf(-a1).min(v.powf(-a2)))
    }

    /// Upper integration limit: the point beyond which `H` has mass below 1e-10.
    pub fn integration_horizon(&self) -> Result<f64> {
        generalized_inverse(|t| self.survival_y(t), TAIL_MASS)
    }

    /// Kendall's tau as `2∫ H̄ dH₃¹`, with `dH₃¹ = F̄1·F̄2·f3 du`.
    pub fn kendall_tau(&self, quad: &QuadratureConfig) -> Result<f64> {
        if self.x3.is_degenerate() {
            return Ok(0.0);
        }
        let upper = self.integration_horizon()?;
        let r = integrate(
            |u| 2.0 * self.survival_y(u) * self.x1.survival(u) * self.x2.survival(u) * self.x3.pdf(u),
            0.0,
            upper,
            quad,
        )?;
        Ok(r.value)
    }

    /// `P(T = C) = H₃¹(∞)`.
    pub fn simultaneous_probability(&self, quad: &QuadratureConfig) -> Result<f64> {
        if self.x3.is_degenerate() {
            return Ok(0.0);
        }
        let upper = self.integration_horizon()?;
        let r = integrate(|u| self.x1.survival(u) * self.x2.survival(u) * self.x3.pdf(u), 0.0, upper, quad)?;
        Ok(r.value)
    }

    /// Samples the three shocks.
    pub fn draw_shocks<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        [self.x1.draw(rng), self.x2.draw(rng), self.x3.draw(rng)]
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(GmoError::domain(format!("{name} = {x} outside [0, 1]")))
    }
}

/// `inf{t ≥ 0 : sf(t) ≤ u}` for a nonincreasing `sf` with `sf(0) = 1`,
/// by bracketing then bisection.
pub(crate) fn generalized_inverse<F: Fn(f64) -> f64>(sf: F, u: f64) -> Result<f64> {
    check_unit("u", u)?;
    if sf(0.0) <= u {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while sf(hi) > u {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(GmoError::domain(format!("survival level {u} is not attained")));
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    while hi - lo > INVERSE_TOL * hi.max(1e-3) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sf(mid) <= u {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Marshall–Olkin survival copula with constant parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoCopulaParams {
    alpha1: f64,
    alpha2: f64,
}

impl MoCopulaParams {
    /// Parameters in `[0, 1]`; zero is the independence boundary.
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        check_unit("alpha1", alpha1)?;
        check_unit("alpha2", alpha2)?;
        Ok(Self { alpha1, alpha2 })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// `min(u^{1-α1} v, u v^{1-α2})`.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        (u.powf(1.0 - self.alpha1) * v).min(u * v.powf(1.0 - self.alpha2))
    }

    /// Constant α-functions of an exponential MO model with rates `λ1, λ2, λ3`.
    pub fn from_rates(l1: f64, l2: f64, l3: f64) -> Result<Self> {
        if !(l1 >= 0.0 && l2 >= 0.0 && l3 >= 0.0) {
            return Err(GmoError::invalid("rates must be nonnegative"));
        }
        let ratio = |li: f64| if li + l3 > 0.0 { l3 / (li + l3) } else { 0.0 };
        Self::new(ratio(l1), ratio(l2))
    }
}

/// Closed-form Kendall's tau of the MO copula, `α1α2 / (α1 − α1α2 + α2)`.
///
/// At `α1 = α2 = 0` the ratio is 0/0; the independence value 0 is returned.
pub fn kendall_tau_mo(p: &MoCopulaParams) -> f64 {
    let (a1, a2) = (p.alpha1, p.alpha2);
    if a1 == 0.0 || a2 == 0.0 {
        0.0
    } else {
        // α₁α₂/(α₁ − α₁α₂ + α₂), in the form with the least rounding.
        1.0 / (1.0 / a1 + 1.0 / a2 - 1.0)
    }
}

/// Extreme value copula `min(v u^{1-ξ1}, u v^{1-ξ2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremeLimitCopula {
    pub xi1: f64,
    pub xi2: f64,
}

impl ExtremeLimitCopula {
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        (v * u.powf(1.0 - self.xi1)).min(u * v.powf(1.0 - self.xi2))
    }

    /// Pickands dependence function `A(t) = 1 − min(ξ1(1−t), ξ2 t)`.
    pub fn pickands(&self, t: f64) -> f64 {
        1.0 - (self.xi1 * (1.0 - t)).min(self.xi2 * t)
    }
}

/// Limiting extreme value copula for shocks with extreme value indices
/// `(γ1, γ2, γ3)`, all positive or all negative.
pub fn extreme_limit(gammas: (f64, f64, f64)) -> Result<ExtremeLimitCopula> {
    let (g1, g2, g3) = gammas;
    let all_pos = g1 > 0.0 && g2 > 0.0 && g3 > 0.0;
    let all_neg = g1 < 0.0 && g2 < 0.0 && g3 < 0.0;
    if !(all_pos || all_neg) {
        return Err(GmoError::Unsupported(format!(
            "extreme value indices ({g1}, {g2}, {g3}) must be all > 0 or all < 0"
        )));
    }
    Ok(ExtremeLimitCopula { xi1: g1 / (g1 + g3), xi2: g2 / (g2 + g3) })
}

/// Builds `(T, C)` pairs with a prescribed MO survival copula and marginals
/// from three exponential clocks `E1, E2, E3` with rates `1/α1 − 1`,
/// `1/α2 − 1` and `1`.
///
/// `T = F_T⁻(1 − e^{−min(E1,E3)/α1})` and `C = F_C⁻(1 − e^{−min(E2,E3)/α2})`.
/// When `Λ̃_C = (α1/α2)·Λ̃_T` this is a GMO model and `T = C` whenever `E3`
/// fires first.
#[derive(Debug, Clone, Copy)]
pub struct MoConstruction {
    params: MoCopulaParams,
    marg_t: ShockDistribution,
    marg_c: ShockDistribution,
}

/// Relative gap under which the two quantile transforms of the common clock
/// are treated as the same instant.
const TIE_SNAP: f64 = 1e-9;

impl MoConstruction {
    pub fn new(params: MoCopulaParams, marg_t: ShockDistribution, marg_c: ShockDistribution) -> Result<Self> {
        if params.alpha1 == 0.0 || params.alpha2 == 0.0 {
            return Err(GmoError::domain("alpha = 0 gives a degenerate clock rate"));
        }
        if marg_t.is_degenerate() || marg_c.is_degenerate() {
            return Err(GmoError::invalid("marginals must be non-degenerate"));
        }
        Ok(Self { params, marg_t, marg_c })
    }

    pub fn params(&self) -> &MoCopulaParams {
        &self.params
    }

    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let (a1, a2) = (self.params.alpha1, self.params.alpha2);
        let clock = |rate: f64, rng: &mut R| -> f64 {
            if rate <= 0.0 {
                f64::INFINITY
            } else {
                let u: f64 = 1.0 - rng.random::<f64>();
                -u.ln() / rate
            }
        };
        let e1 = clock(1.0 / a1 - 1.0, rng);
        let e2 = clock(1.0 / a2 - 1.0, rng);
        let e3 = clock(1.0, rng);
        let to_time = |d: &ShockDistribution, h: f64| {
            d.quantile(-(-h).exp_m1()).expect("probability in [0, 1]")
        };
        let t = to_time(&self.marg_t, e1.min(e3) / a1);
        let mut c = to_time(&self.marg_c, e2.min(e3) / a2);
        if e3 < e1 && e3 < e2 && (t - c).abs() <= TIE_SNAP * t.abs().max(c.abs()) {
            c = t;
        }
        (t, c)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|_| self.sample_pair(rng)).collect()
    }
}
