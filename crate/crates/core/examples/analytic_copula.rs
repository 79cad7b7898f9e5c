//! Joint survival, α-functions and the survival copula of the two benchmark
//! models, plus a non-proportional Weibull/Beta mixture.

use gmo_survival::{GmoModel, Margin, ShockDistribution};

fn main() -> gmo_survival::Result<()> {
    let mixed = GmoModel::new(
        ShockDistribution::weibull(2.0, 1.0)?,
        ShockDistribution::exponential(0.5)?,
        ShockDistribution::beta(2.0, 3.0)?,
    )?;
    for (name, m) in [("a", GmoModel::model_a()), ("b", GmoModel::model_b()), ("mixed", mixed)] {
        println!("model {name}");
        println!("  P(T > 0.2, C > 0.3) = {:.6}", m.joint_survival(0.2, 0.3));
        for t in [0.05, 0.2, 0.5] {
            println!(
                "  alpha1({t}) = {:.4}   alpha2({t}) = {:.4}",
                m.alpha(Margin::T, t)?,
                m.alpha(Margin::C, t)?
            );
        }
        for (u, v) in [(0.3, 0.5), (0.8, 0.8), (0.1, 0.9)] {
            println!("  C({u}, {v}) = {:.6}", m.survival_copula(u, v)?);
        }
    }
    Ok(())
}
