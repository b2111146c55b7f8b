//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Intervals are kept in a max-heap keyed by their error estimate; the worst
//! one is bisected until the summed error meets the requested tolerance. The
//! error estimate follows the QUADPACK `qk15` heuristic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerances for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections applied to any single initial interval.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 50,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self, QuadratureError> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same depth, both tolerances set to `tol`.
    pub fn with_tolerance(tol: f64) -> Result<Self, QuadratureError> {
        Self::new(tol, tol, Self::default().max_depth)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let ok = |t: f64| t.is_finite() && t > 0.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) || self.max_depth < 1 {
            return Err(QuadratureError::InvalidSpec(*self));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature did not converge: estimate {estimate:e}, residual {residual:e}")]
    NonConvergence { estimate: f64, residual: f64 },
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid quadrature spec {0:?}")]
    InvalidSpec(QuadratureSpec),
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_489_0,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadratureError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite { x })
        }
    };

    let fc = eval(center)?;
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut abs_kronrod = kronrod.abs();
    let mut f1 = [0.0; 7];
    let mut f2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = eval(center - dx)?;
        let hi = eval(center + dx)?;
        f1[j] = lo;
        f2[j] = hi;
        kronrod += WGK[j] * (lo + hi);
        abs_kronrod += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }

    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }

    let value = kronrod * half;
    let abs_value = abs_kronrod * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_value);
    }
    Ok((value, error))
}

/// Integrates `f` over `[a, b]`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    integrate_piecewise(f, &[a, b], spec)
}

/// Integrates `f` over `[points[0], points[last]]`, using every interior
/// point as an initial split. Use it for kinks, peaks and known zeros.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64, QuadratureError> {
    spec.validate()?;
    if points.len() < 2 {
        return Err(QuadratureError::InvalidInterval {
            a: points.first().copied().unwrap_or(f64::NAN),
            b: f64::NAN,
        });
    }
    for w in points.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite() && w[0] < w[1]) {
            return Err(QuadratureError::InvalidInterval { a: w[0], b: w[1] });
        }
    }

    let mut heap = BinaryHeap::with_capacity(points.len() * 4);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (value, error) = kronrod15(&f, w[0], w[1])?;
        total += value;
        total_err += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
            depth: 0,
        });
    }

    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target {
            return Ok(total);
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => return Ok(total),
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_depth || mid <= worst.a || mid >= worst.b {
            return Err(QuadratureError::NonConvergence {
                estimate: total,
                residual: total_err,
            });
        }
        let (lv, le) = kronrod15(&f, worst.a, mid)?;
        let (rv, re) = kronrod15(&f, mid, worst.b)?;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        let depth = worst.depth + 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
            depth,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
            depth,
        });
        // Keep the running error from drifting below zero through cancellation.
        total_err = total_err.max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn polynomial_is_exact() {
        let v = integrate_adaptive(|x| x * x, 0.0, 1.0, &spec()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn second_moment_of_flat_phase() {
        let v = integrate_adaptive(|t| t * t / (2.0 * PI), -PI, PI, &spec()).unwrap();
        assert!((v - PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_moment_matches_closed_form() {
        // 4π(-1)^n / n² at n = 2
        let v = integrate_adaptive(|t| t * t * (2.0 * t).cos(), -PI, PI, &spec()).unwrap();
        assert!((v - PI).abs() < 1e-10);
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let v = integrate_piecewise(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], &spec()).unwrap();
        assert!((v - 2.5).abs() < 1e-14);
    }

    #[test]
    fn reports_non_convergence_with_estimate() {
        let tight = QuadratureSpec::new(1e-14, 1e-14, 2).unwrap();
        let err = integrate_adaptive(|x: f64| x.sqrt(), 0.0, 1.0, &tight).unwrap_err();
        match err {
            QuadratureError::NonConvergence { estimate, residual } => {
                assert!((estimate - 2.0 / 3.0).abs() < 1e-3);
                assert!(residual > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(QuadratureSpec::new(0.0, 1e-8, 10).is_err());
        assert!(QuadratureSpec::new(1e-8, 1e-8, 0).is_err());
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, &spec()).is_err());
        assert!(matches!(
            integrate_adaptive(|x| 1.0 / x, 0.0, 1.0, &spec()),
            Err(QuadratureError::NonFinite { .. }) | Err(QuadratureError::NonConvergence { .. })
        ));
    }
}
