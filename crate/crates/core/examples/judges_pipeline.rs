//! The status-coded tenure pipeline (0: still serving, 1: death, 2:
//! retirement). Reads the CSV given as first argument, or a synthetic table.

use std::io::Write;

use gmo_survival::experiment::run_judges;
use gmo_survival::{GmoModel, ShockDistribution};
use rand::SeedableRng;

fn main() -> gmo_survival::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let m = GmoModel::new(
                ShockDistribution::weibull(1.5, 40.0)?,
                ShockDistribution::weibull(1.5, 25.0)?,
                ShockDistribution::weibull(1.5, 30.0)?,
            )?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
            let path = std::env::temp_dir().join("gmo_judges_synthetic.csv");
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "tenure,status")?;
            for _ in 0..113 {
                let [x1, x2, x3] = m.draw_shocks(&mut rng);
                let y = x1.min(x2).min(x3);
                let status = if y == x3 { 0 } else if y == x1 { 1 } else { 2 };
                writeln!(f, "{y:.2},{status}")?;
            }
            path
        }
    };
    let r = run_judges(&path)?;
    println!("n = {}, tau_n = {:.4}", r.n, r.tau_n);
    println!(
        "range of alpha over the central 80% of Y: alpha1 {:.3}, alpha2 {:.3}",
        r.alpha1_central_range, r.alpha2_central_range
    );
    Ok(())
}
