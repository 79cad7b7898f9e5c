use serde::{Deserialize, Serialize};

use crate::error::{GmoError, Result};
use crate::estimators::EventKind;
use crate::sampling::ObservedSample;

/// Maximum likelihood fit of the exponential Marshall–Olkin model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoMleFit {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub warnings: Vec<String>,
}

impl MoMleFit {
    pub fn survival_t(&self, t: f64) -> f64 {
        (-(self.lambda1 + self.lambda3) * t).exp()
    }

    pub fn survival_c(&self, s: f64) -> f64 {
        (-(self.lambda2 + self.lambda3) * s).exp()
    }

    /// `exp(−λ₁t − λ₂s − λ₃·max(t, s))`.
    pub fn joint_survival(&self, t: f64, s: f64) -> f64 {
        (-self.lambda1 * t - self.lambda2 * s - self.lambda3 * t.max(s)).exp()
    }

    pub fn alphas(&self) -> (f64, f64) {
        let a = |l: f64| if l + self.lambda3 > 0.0 { self.lambda3 / (l + self.lambda3) } else { 0.0 };
        (a(self.lambda1), a(self.lambda2))
    }
}

/// `λ̂ₖ = nₖ / Σ yᵢ`: `Y` is exponential with rate `λ₁+λ₂+λ₃` and the event
/// type is multinomial with probabilities proportional to the rates.
pub fn fit_mo_exponential(s: &ObservedSample) -> Result<MoMleFit> {
    let total: f64 = s.y().iter().sum();
    if !(total > 0.0) {
        return Err(GmoError::data("total observed time is zero"));
    }
    let (d4, d5) = (s.indicator(EventKind::T), s.indicator(EventKind::C));
    let n1 = d4.iter().zip(d5).filter(|(a, b)| **a && !**b).count();
    let n2 = d4.iter().zip(d5).filter(|(a, b)| !**a && **b).count();
    let n3 = d4.iter().zip(d5).filter(|(a, b)| **a && **b).count();
    let mut warnings = Vec::new();
    for (name, count) in [("lambda1", n1), ("lambda2", n2), ("lambda3", n3)] {
        if count == 0 {
            warnings.push(format!("{name} estimated as 0: no event of that type was observed"));
        }
    }
    Ok(MoMleFit {
        lambda1: n1 as f64 / total,
        lambda2: n2 as f64 / total,
        lambda3: n3 as f64 / total,
        warnings,
    })
}
