//! Max-stability of the survival copula under Pareto shocks, and the
//! convergence of C(u^{1/n}, v^{1/n})ⁿ when the cumulative hazards are only
//! proportional near the origin.

use gmo_survival::model::{extreme_limit, ExtremeLimitCopula};
use gmo_survival::{GmoModel, Margin, ShockDistribution};

fn max_error(m: &GmoModel, limit: &ExtremeLimitCopula, n: u32) -> gmo_survival::Result<f64> {
    let k = f64::from(n);
    let mut worst: f64 = 0.0;
    for (u, v) in [(0.2f64, 0.7f64), (0.5, 0.5), (0.9, 0.3), (0.05, 0.6)] {
        let c = m.survival_copula(u.powf(1.0 / k), v.powf(1.0 / k))?.powf(k);
        worst = worst.max((c - limit.eval(u, v)).abs());
    }
    Ok(worst)
}

fn main() -> gmo_survival::Result<()> {
    // Unit-scale Pareto shocks with extreme value indices 1, 2, 2: the copula
    // is already the extreme value copula.
    let unit = GmoModel::new(
        ShockDistribution::pareto(1.0, 1.0)?,
        ShockDistribution::pareto(0.5, 1.0)?,
        ShockDistribution::pareto(0.5, 1.0)?,
    )?;
    let limit = extreme_limit((1.0, 2.0, 2.0))?;
    println!("xi = ({:.3}, {:.3}), Pickands A(0.5) = {:.4}", limit.xi1, limit.xi2, limit.pickands(0.5));
    for n in [1, 8, 128] {
        println!("unit scales, n = {n:>3}: max error {:.2e}", max_error(&unit, &limit, n)?);
    }

    // Different scales: the limit is governed by the α-functions at 0+.
    let mixed = GmoModel::new(
        ShockDistribution::pareto(1.0, 1.0)?,
        ShockDistribution::pareto(0.5, 2.0)?,
        ShockDistribution::pareto(0.5, 0.5)?,
    )?;
    let eps = 1e-9;
    let origin = ExtremeLimitCopula { xi1: mixed.alpha(Margin::T, eps)?, xi2: mixed.alpha(Margin::C, eps)? };
    println!("alpha(0+) = ({:.3}, {:.3})", origin.xi1, origin.xi2);
    for n in [1, 4, 16, 64, 256, 1024] {
        println!("mixed scales, n = {n:>4}: max error {:.5}", max_error(&mixed, &origin, n)?);
    }
    Ok(())
}
