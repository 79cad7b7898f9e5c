//! Independent brute-force oracles over raw observations. Nothing here uses
//! tie groups, prefix sums or the library's estimator internals.
#![allow(dead_code)]

use gmo_survival::sampling::{from_bivariate, from_status_coded};
use gmo_survival::{EventKind, ObservedSample};

pub struct Raw {
    pub y: Vec<f64>,
    pub d: [Vec<bool>; 5],
}

impl Raw {
    pub fn of(s: &ObservedSample) -> Self {
        Raw { y: s.y().to_vec(), d: EventKind::ALL.map(|k| s.indicator(k).to_vec()) }
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    fn del(&self, k: EventKind) -> &[bool] {
        &self.d[k.index() - 1]
    }

    /// `#{j : Yⱼ ≥ x}`.
    pub fn at_risk(&self, x: f64) -> f64 {
        self.y.iter().filter(|&&v| v >= x).count() as f64
    }

    /// Observation indices in increasing order of `Y`.
    fn by_time(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n()).collect();
        idx.sort_by(|&a, &b| self.y[a].total_cmp(&self.y[b]));
        idx
    }

    /// `Σ_{i: Y₍ᵢ₎ ≤ t} δ₍ᵢ₎ / #{j : Yⱼ ≥ Y₍ᵢ₎}` over order statistics.
    pub fn nelson_aalen(&self, k: EventKind, t: f64) -> f64 {
        let mut total = 0.0;
        for i in self.by_time() {
            if self.y[i] <= t && self.del(k)[i] {
                total += 1.0 / self.at_risk(self.y[i]);
            }
        }
        total
    }

    /// Λ(x⁻).
    pub fn nelson_aalen_left(&self, k: EventKind, x: f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n() {
            if self.y[i] < x && self.del(k)[i] {
                total += 1.0 / self.at_risk(self.y[i]);
            }
        }
        total
    }

    pub fn kaplan_meier(&self, k: EventKind, t: f64) -> f64 {
        let last = self.y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if t >= last {
            return 0.0;
        }
        let mut times: Vec<f64> = self.y.iter().copied().filter(|&v| v <= t).collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        let mut s = 1.0;
        for u in times {
            let d = (0..self.n()).filter(|&i| self.y[i] == u && self.del(k)[i]).count() as f64;
            if d > 0.0 {
                s *= 1.0 - d / self.at_risk(u);
            }
        }
        s
    }

    /// `(2/n²)·Σᵢ δ⁽³⁾ᵢ·#{j : Yⱼ ≥ Yᵢ}` with the double sum counted exactly.
    pub fn tau(&self) -> f64 {
        let mut count = 0usize;
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.del(EventKind::X3)[i] && self.y[j] >= self.y[i] {
                    count += 1;
                }
            }
        }
        let n = self.n() as f64;
        2.0 * count as f64 / (n * n)
    }

    /// Four-term plug-in covariance written as literal double loops over
    /// observations with `H̄ₙ(Y⁻) = #{Y ≥ ·}/n`.
    pub fn sigma(&self, k: EventKind, l: EventKind, t: f64, s: f64) -> f64 {
        let n = self.n() as f64;
        let hbar = |x: f64| self.at_risk(x) / n;
        let lo = t.min(s);
        if k == l {
            let mut v = 0.0;
            for i in 0..self.n() {
                if self.y[i] <= lo && self.del(k)[i] {
                    v += 1.0 / (n * hbar(self.y[i]) * hbar(self.y[i]));
                }
            }
            return v;
        }
        let dlam = |kind: EventKind, i: usize| if self.del(kind)[i] { 1.0 / self.at_risk(self.y[i]) } else { 0.0 };
        let mut double = 0.0;
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.y[i] <= t && self.y[j] <= s {
                    let m = self.y[i].max(self.y[j]);
                    double += dlam(k, i) * dlam(l, j) * hbar(m) / (hbar(self.y[i]) * hbar(self.y[j]));
                }
            }
        }
        let mut cross_kl = 0.0;
        let mut cross_lk = 0.0;
        for j in 0..self.n() {
            if self.y[j] <= lo {
                let yj = self.y[j];
                cross_kl += (self.nelson_aalen(k, t) - self.nelson_aalen_left(k, yj)) * dlam(l, j) / hbar(yj);
                cross_lk += (self.nelson_aalen(l, s) - self.nelson_aalen_left(l, yj)) * dlam(k, j) / hbar(yj);
            }
        }
        let mut joint = 0.0;
        for i in 0..self.n() {
            if self.y[i] <= lo && self.del(k)[i] && self.del(l)[i] {
                joint += 1.0 / (n * hbar(self.y[i]).powi(2));
            }
        }
        double - cross_kl - cross_lk + joint
    }

    /// Estimated influence value of `Λₖ,ₙ(t)` at observation `i`.
    pub fn influence(&self, k: EventKind, t: f64, i: usize) -> f64 {
        let n = self.n() as f64;
        let a = if self.y[i] <= t && self.del(k)[i] { n / self.at_risk(self.y[i]) } else { 0.0 };
        let mut b = 0.0;
        for j in 0..self.n() {
            if self.y[j] <= t.min(self.y[i]) && self.del(k)[j] {
                b += n / self.at_risk(self.y[j]).powi(2);
            }
        }
        a - b
    }

    /// `I₁ + I₂ + I₃` as literal double sums over the empirical measures.
    pub fn tau_sigma2(&self) -> f64 {
        let n = self.n() as f64;
        let d3 = self.del(EventKind::X3);
        let hbar = |x: f64| self.y.iter().filter(|&&v| v > x).count() as f64 / n;
        let h3 = |x: f64| (0..self.n()).filter(|&j| self.y[j] <= x && d3[j]).count() as f64 / n;
        let between = |x: f64, z: f64| (0..self.n()).filter(|&j| x < self.y[j] && self.y[j] <= z && d3[j]).count() as f64 / n;
        let w = 1.0 / (n * n);
        let (mut i1, mut i2, mut i3) = (0.0, 0.0, 0.0);
        for a in 0..self.n() {
            for b in 0..self.n() {
                let (ya, yb) = (self.y[a], self.y[b]);
                if d3[a] && d3[b] {
                    i1 += w * (hbar(ya.max(yb)) - hbar(ya) * hbar(yb));
                }
                i2 += w * (h3(ya.min(yb)) - h3(ya) * h3(yb));
                if d3[a] {
                    i3 += w * (between(ya, yb) - hbar(ya) * h3(yb));
                }
            }
        }
        4.0 * i1 + 4.0 * i2 + 8.0 * i3
    }
}

/// Hand-built samples with n ≤ 8, with and without ties.
pub fn hand_samples() -> Vec<(&'static str, ObservedSample, bool)> {
    vec![
        ("distinct-4", from_bivariate(&[1.0, 2.0, 3.0, 5.0], &[1.5, 2.0, 2.5, 4.0]).unwrap(), false),
        (
            "distinct-8",
            from_bivariate(&[0.3, 1.2, 0.8, 2.5, 1.9, 0.5, 3.1, 2.2], &[0.4, 1.2, 0.6, 2.5, 2.1, 0.5, 2.9, 1.7]).unwrap(),
            false,
        ),
        ("all-simultaneous", from_status_coded(&[0.5, 1.0, 1.5, 2.0, 2.5], &[0, 0, 0, 0, 0]).unwrap(), false),
        ("no-simultaneous", from_bivariate(&[1.0, 4.0, 2.5, 0.7, 3.3, 5.5], &[2.0, 3.0, 3.5, 0.9, 1.1, 6.0]).unwrap(), false),
        ("tied-7", from_status_coded(&[1.0, 2.0, 2.0, 3.0, 3.0, 3.0, 4.0], &[1, 2, 0, 0, 1, 2, 1]).unwrap(), true),
        ("tied-8", from_status_coded(&[0.5, 0.5, 1.5, 1.5, 2.0, 2.5, 2.5, 3.0], &[0, 1, 2, 0, 0, 1, 0, 2]).unwrap(), true),
        ("pair", from_bivariate(&[1.0, 2.0], &[1.0, 1.5]).unwrap(), false),
    ]
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }
}

/// Anderson–Darling statistic of `z` against the standard normal.
pub fn anderson_darling_normal(z: &mut [f64]) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let phi = Normal::new(0.0, 1.0).unwrap();
    z.sort_by(f64::total_cmp);
    let n = z.len();
    let mut s = 0.0;
    for i in 0..n {
        let lo = phi.cdf(z[i]).clamp(1e-300, 1.0 - 1e-16);
        let hi = phi.cdf(z[n - 1 - i]).clamp(1e-300, 1.0 - 1e-16);
        s += (2.0 * i as f64 + 1.0) * (lo.ln() + (1.0 - hi).ln());
    }
    -(n as f64) - s / n as f64
}
