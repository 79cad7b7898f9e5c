//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{GmoError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-11, rel_tol: 1e-10, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Integrates `f` over `[a, b]`, bisecting the segment with the largest
/// error estimate until `error ≤ max(abs_tol, rel_tol·|value|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(GmoError::domain(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult { value: 0.0, error_estimate: 0.0, intervals: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let (value, error) = kronrod15(&f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a: lo, b: hi, value, error });
    let mut total = value;
    let mut total_err = error;

    loop {
        if !total.is_finite() {
            return Err(GmoError::Numerical {
                message: "integrand produced a non-finite value".into(),
                achieved: total_err,
            });
        }
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(GmoError::Numerical {
                message: format!("quadrature did not converge within {} intervals", cfg.max_intervals),
                achieved: total_err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(GmoError::Numerical {
                message: "interval can no longer be bisected".into(),
                achieved: total_err,
            });
        }
        let (v1, e1) = kronrod15(&f, worst.a, mid);
        let (v2, e2) = kronrod15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }

    // Re-sum to shed drift from the incremental updates.
    let intervals = heap.len();
    let (value, error_estimate) =
        heap.into_iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(QuadratureResult { value: sign * value, error_estimate, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, &QuadratureConfig::default()).unwrap();
        assert_abs_diff_eq!(r.value, 64.0 / 6.0 - 8.0, epsilon = 1e-13);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x| (10.0 * x).sin(), 0.0, std::f64::consts::PI, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 * 100.0 * (100.0f64).atan(), epsilon = 1e-8);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x| x.exp(), 1.0, 0.0, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 1.0 - std::f64::consts::E, epsilon = 1e-13);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig { abs_tol: 1e-300, rel_tol: 0.0, max_intervals: 4 };
        let err = integrate(|x| 1.0 / (1e-6 + (x - 0.3) * (x - 0.3)), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, GmoError::Numerical { achieved, .. } if achieved > 0.0));
    }
}
