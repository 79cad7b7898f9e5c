//! Kendall's tau in closed form for constant α and by quadrature for the
//! general model, together with the probability of simultaneous events.

use gmo_survival::model::{kendall_tau_mo, GmoModel};
use gmo_survival::{MoCopulaParams, QuadratureConfig};

fn main() -> gmo_survival::Result<()> {
    let quad = QuadratureConfig::default();
    let closed = kendall_tau_mo(&MoCopulaParams::new(0.75, 0.6)?);
    println!("closed form, alpha = (0.75, 0.6): tau = {closed}");
    for (name, m) in [("a", GmoModel::model_a()), ("b", GmoModel::model_b())] {
        println!(
            "model {name}: tau = {:.6}, P(T = C) = {:.6}",
            m.kendall_tau(&quad)?,
            m.simultaneous_probability(&quad)?
        );
    }
    Ok(())
}
