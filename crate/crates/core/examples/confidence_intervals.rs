//! Plug-in asymptotic confidence intervals for the joint survival and for
//! Kendall's tau, checked against the analytic model values.

use gmo_survival::inference::{joint_survival_variance, kendall_tau_variance, sigma_analytic, sigma_plugin};
use gmo_survival::inference::{CovarianceQuery, JointCiOptions};
use gmo_survival::sampling::draw_sample;
use gmo_survival::{GmoModel, QuadratureConfig};
use rand::SeedableRng;

fn main() -> gmo_survival::Result<()> {
    let model = GmoModel::model_a();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let sample = draw_sample(&model, 2000, &mut rng)?;

    let q = CovarianceQuery::from_indices(4, 5, 0.1, 0.2)?;
    println!(
        "sigma_45(0.1, 0.2): plug-in {:.4}, analytic {:.4}",
        sigma_plugin(&sample, &q)?,
        sigma_analytic(&model, &q, &QuadratureConfig::default())?
    );

    for (t, s) in [(0.1, 0.2), (0.15, 0.15)] {
        let r = joint_survival_variance(&sample, t, s, &JointCiOptions::default())?;
        println!(
            "P({t}, {s}) = {:.4}, 95% CI [{:.4}, {:.4}], truth {:.4}{}",
            r.point_estimate,
            r.ci_low,
            r.ci_high,
            model.joint_survival(t, s),
            if r.boundary_case { " (boundary case)" } else { "" }
        );
    }
    let r = kendall_tau_variance(&sample, 0.95)?;
    println!("tau_n = {:.4}, 95% CI [{:.4}, {:.4}], truth 0.5", r.point_estimate, r.ci_low, r.ci_high);
    Ok(())
}
