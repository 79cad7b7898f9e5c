//! The paired goal-time pipeline. Reads `data/uefa.csv` when given as the
//! first argument; otherwise writes a synthetic table from exponential shocks
//! (rates per minute) to a temporary file and runs on that.

use std::io::Write;

use gmo_survival::experiment::run_uefa;
use gmo_survival::{GmoModel, ShockDistribution};
use rand::SeedableRng;

fn main() -> gmo_survival::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let m = GmoModel::new(
                ShockDistribution::exponential(0.007)?,
                ShockDistribution::exponential(0.017)?,
                ShockDistribution::exponential(0.017)?,
            )?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            let path = std::env::temp_dir().join("gmo_uefa_synthetic.csv");
            let mut f = std::fs::File::create(&path)?;
            writeln!(f, "kick_goal,home_goal")?;
            for _ in 0..37 {
                let [x1, x2, x3] = m.draw_shocks(&mut rng);
                writeln!(f, "{},{}", x1.min(x3).ceil(), x2.min(x3).ceil())?;
            }
            path
        }
    };
    let r = run_uefa(&path, 100)?;
    println!("n = {}, tau_n = {:.4}", r.n, r.tau_n);
    println!("MLE rates: ({:.4}, {:.4}, {:.4})", r.mle.lambda1, r.mle.lambda2, r.mle.lambda3);
    println!("ISE vs empirical: nonparametric {:.6}, MO-MLE {:.6}", r.ise_gmo, r.ise_ml);
    println!("KL vs empirical:  nonparametric {:.6}, MO-MLE {:.6}", r.kl_gmo, r.kl_ml);
    Ok(())
}
