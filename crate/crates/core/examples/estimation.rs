//! Nonparametric estimation from one simulated censored sample: Nelson–Aalen,
//! Kaplan–Meier, the α-functions, the joint survival and τₙ.

use gmo_survival::estimators::{kaplan_meier, kendall_tau_hat, nelson_aalen};
use gmo_survival::sampling::draw_sample;
use gmo_survival::{EventKind, GmoModel, JointSurvivalEstimate, Margin};
use rand::SeedableRng;

fn main() -> gmo_survival::Result<()> {
    let model = GmoModel::model_b();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let sample = draw_sample(&model, 1000, &mut rng)?;
    println!(
        "n = {}, simultaneous events = {}",
        sample.len(),
        sample.count(EventKind::X3)
    );

    let na = nelson_aalen(&sample, EventKind::T)?;
    let km = kaplan_meier(&sample, EventKind::T)?;
    let est = JointSurvivalEstimate::new(&sample)?;
    println!("{:>5} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}", "t", "Lambda_n", "Lambda", "KM", "F_T", "alpha_n", "alpha");
    for t in [0.1, 0.2, 0.3, 0.4] {
        println!(
            "{t:>5} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            na.eval(t),
            model.marginal_cumhaz(Margin::T, t),
            km.eval(t),
            model.marginal_survival_t(t),
            est.alpha(Margin::T, t).unwrap_or(f64::NAN),
            model.alpha(Margin::T, t)?,
        );
    }
    for (t, s) in [(0.1, 0.2), (0.3, 0.3), (0.4, 0.1)] {
        println!("P({t}, {s}): estimate {:.4}, truth {:.4}", est.eval(t, s), model.joint_survival(t, s));
    }
    println!("tau_n = {:.4}", kendall_tau_hat(&sample)?);
    Ok(())
}
