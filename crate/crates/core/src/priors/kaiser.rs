//! The bandlimited prior family `p_{α,L}`: the normalized fourth power of the
//! Fourier transform of a Kaiser window of width `L/4`.
//!
//! With `x = Lφ/(4α)` the unnormalized shape is
//!
//! ```text
//! g(x) = sinc⁴(πα √(x² − 1))            |x| ≥ 1
//!      = (sinh(u)/u)⁴, u = πα √(1 − x²)  |x| < 1
//! ```
//!
//! and `p(φ) = N_α L g(Lφ/4α)`. The core `|x| < 1` is exponentially large in
//! `α` and is evaluated in log-space; the tails decay like `x⁻⁴`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, log_sinhc, sinc, QuadratureSpec};

/// Tail integrals are carried out to this many core half-widths; the rest is
/// replaced by its mean-value estimate.
const TAIL_CUTOFF: f64 = 100.0;

/// Mean of `sin⁴` over a period.
const SIN4_MEAN: f64 = 3.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KaiserPrior {
    alpha: f64,
    bandwidth: f64,
    log_normalization: f64,
}

impl KaiserPrior {
    /// Builds the prior and computes `N_α` by quadrature.
    pub fn new(alpha: f64, bandwidth: f64, spec: &QuadratureSpec) -> Result<Self> {
        check_alpha(alpha)?;
        check_positive("bandwidth L", bandwidth)?;
        let log_normalization = log_kaiser_normalization_at(alpha, bandwidth, spec)?;
        Ok(Self {
            alpha,
            bandwidth,
            log_normalization,
        })
    }

    /// Builds the prior from a previously computed `N_α`.
    pub fn with_normalization(alpha: f64, bandwidth: f64, normalization: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_positive("bandwidth L", bandwidth)?;
        check_positive("normalization", normalization)?;
        Ok(Self {
            alpha,
            bandwidth,
            log_normalization: normalization.ln(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// `N_α`.
    pub fn normalization(&self) -> f64 {
        self.log_normalization.exp()
    }

    pub fn log_normalization(&self) -> f64 {
        self.log_normalization
    }

    /// Half-width `4α/L` of the core, where the sinh form applies.
    pub fn core_half_width(&self) -> f64 {
        4.0 * self.alpha / self.bandwidth
    }

    pub fn density(&self, phi: f64) -> f64 {
        let x = phi / self.core_half_width();
        let log_scale = self.log_normalization + self.bandwidth.ln();
        if x.abs() < 1.0 {
            (log_scale + 4.0 * log_sinhc(core_arg(self.alpha, x))).exp()
        } else {
            log_scale.exp() * sinc(tail_arg(self.alpha, x)).powi(4)
        }
    }

    /// The signed window transform whose fourth power is the density shape:
    /// `sinc(πα√(x²−1))`, continued as `sinh(u)/u` inside the core.
    pub fn window_transform(&self, phi: f64) -> f64 {
        let x = phi / self.core_half_width();
        if x.abs() < 1.0 {
            log_sinhc(core_arg(self.alpha, x)).exp()
        } else {
            sinc(tail_arg(self.alpha, x))
        }
    }

    /// Positive zeros of the density, `φ_k = (4α/L)√(1 + (k/α)²)`.
    pub fn zero(&self, k: u32) -> f64 {
        self.core_half_width() * tail_zero(self.alpha, k)
    }

    /// `∫_t^∞ p(φ) dφ` for `t` at or beyond the core edge.
    pub fn upper_tail_mass(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let x = t / self.core_half_width();
        if x < 1.0 {
            return Err(Error::Domain(format!(
                "tail mass is defined from the core edge outwards; t = {t} lies inside ±{}",
                self.core_half_width()
            )));
        }
        Ok(4.0 * self.alpha * self.normalization() * tail_shape_integral(self.alpha, x, spec)?)
    }

    /// Total mass outside the core `[-4α/L, 4α/L]`.
    pub fn tail_mass(&self, spec: &QuadratureSpec) -> Result<f64> {
        Ok(2.0 * self.upper_tail_mass(self.core_half_width(), spec)?)
    }

    /// Analytic upper bound on [`Self::tail_mass`].
    pub fn tail_mass_bound(&self) -> f64 {
        tail_mass_bound_from(self.alpha, self.normalization())
    }

    /// `∫ p(φ) dφ` evaluated numerically; `1` up to quadrature error.
    pub fn total_mass(&self, spec: &QuadratureSpec) -> Result<f64> {
        let c = self.core_half_width();
        let core = integrate_piecewise(|phi| self.density(phi), &[-c, 0.0, c], spec)?;
        Ok(core + 2.0 * self.upper_tail_mass(c, spec)?)
    }

    /// `∫_{-∞}^{φ} p`.
    pub fn cdf(&self, phi: f64, spec: &QuadratureSpec) -> Result<f64> {
        let c = self.core_half_width();
        if phi <= -c {
            return self.upper_tail_mass(-phi, spec);
        }
        if phi >= c {
            return Ok(1.0 - self.upper_tail_mass(phi, spec)?);
        }
        let left = self.upper_tail_mass(c, spec)?;
        let mut points = vec![-c];
        if phi > 0.0 {
            points.push(0.0);
        }
        points.push(phi);
        Ok(left + integrate_piecewise(|t| self.density(t), &points, spec)?)
    }

    /// Transform `∫ p(φ) e^{−2πiνφ} dφ` at ordinary frequency `ν` (cycles per
    /// radian), in which the support is exactly `[−L/2, L/2]`. Real and even in
    /// `ν` because the density is even.
    pub fn fourier_transform(&self, nu: f64, spec: &QuadratureSpec) -> Result<f64> {
        let c = self.core_half_width();
        let alpha = self.alpha;
        let omega = 2.0 * PI * nu * c;
        let log_scale = self.log_normalization + (8.0 * alpha).ln();

        // In x = φ/c:  F(ν) = 8α N ∫_0^∞ g(x) cos(2πνcx) dx.
        let mut core_points = vec![0.0];
        let core_pieces = ((omega.abs() / PI).ceil() as usize).clamp(1, 4096);
        for i in 1..=core_pieces {
            core_points.push(i as f64 / core_pieces as f64);
        }
        let core = integrate_piecewise(
            |x| (log_scale + 4.0 * log_sinhc(core_arg(alpha, x))).exp() * (omega * x).cos(),
            &core_points,
            spec,
        )?;

        let scale = log_scale.exp();
        let mut tail_points = tail_breakpoints(alpha, 1.0, TAIL_CUTOFF);
        if omega.abs() > 0.0 {
            tail_points = refine_for_oscillation(&tail_points, omega);
        }
        let tail = integrate_piecewise(
            |x| scale * sinc(tail_arg(alpha, x)).powi(4) * (omega * x).cos(),
            &tail_points,
            spec,
        )?;
        Ok(core + tail)
    }
}

/// `N_α`, the normalization of `p_{α,L}` (independent of `L`).
pub fn kaiser_normalization(alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(log_kaiser_normalization_at(alpha, 4.0 * alpha, spec)?.exp())
}

/// `ln N_α`, integrating in `φ` at the given bandwidth.
pub fn log_kaiser_normalization_at(alpha: f64, bandwidth: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("bandwidth L", bandwidth)?;
    let c = 4.0 * alpha / bandwidth;
    // Core scaled by its peak value exp(4 log_sinhc(πα)).
    let peak = 4.0 * log_sinhc(PI * alpha);
    let core = integrate_piecewise(
        |phi| bandwidth * (4.0 * log_sinhc(core_arg(alpha, phi / c)) - peak).exp(),
        &[0.0, 0.5 * c, c],
        spec,
    )?;
    let tail_points: Vec<f64> = tail_breakpoints(alpha, 1.0, TAIL_CUTOFF)
        .into_iter()
        .map(|x| x * c)
        .collect();
    let tail = integrate_piecewise(
        |phi| bandwidth * sinc(tail_arg(alpha, phi / c)).powi(4),
        &tail_points,
        spec,
    )? + bandwidth * c * tail_remainder(alpha, TAIL_CUTOFF);
    let half_mass_log = peak + (core + tail * (-peak).exp()).ln();
    Ok(-(2f64.ln() + half_mass_log))
}

/// Six-term asymptotic series for `N_α`.
pub fn kaiser_normalization_series(alpha: f64) -> f64 {
    let corrections = series_corrections(alpha);
    kaiser_normalization_leading(alpha) * (1.0 - corrections.iter().sum::<f64>())
}

/// The individual (positive) correction magnitudes of the series; each is
/// subtracted from the leading `1`.
pub fn series_corrections(alpha: f64) -> [f64; 6] {
    const COEFFS: [(f64, i32); 6] = [
        (13.0 / 32.0, 1),
        (319.0 / 2048.0, 2),
        (10007.0 / 65536.0, 3),
        (1_793_365.0 / 8_388_608.0, 4),
        (99_317_267.0 / 268_435_456.0, 5),
        (12_817_002_203.0 / 17_179_869_184.0, 6),
    ];
    COEFFS.map(|(c, k)| c / (PI * alpha).powi(k))
}

/// Leading asymptote `4√2 π⁴ α^{7/2} e^{−4πα}`.
pub fn kaiser_normalization_leading(alpha: f64) -> f64 {
    4.0 * 2f64.sqrt() * PI.powi(4) * alpha.powf(3.5) * (-4.0 * PI * alpha).exp()
}

/// Upper bound `N_α · 8α · (1 + (1/3 − ln3/4)/(π⁴α⁴))` on the mass of
/// `p_{α,L}` outside its core.
pub fn kaiser_tail_mass_bound(alpha: f64) -> Result<f64> {
    let n = kaiser_normalization(alpha, &QuadratureSpec::default())?;
    Ok(tail_mass_bound_from(alpha, n))
}

pub(crate) fn tail_mass_bound_from(alpha: f64, normalization: f64) -> f64 {
    normalization * 8.0 * alpha * tail_bound_factor(alpha)
}

pub fn tail_bound_factor(alpha: f64) -> f64 {
    1.0 + (1.0 / 3.0 - 3f64.ln() / 4.0) / (PI.powi(4) * alpha.powi(4))
}

fn core_arg(alpha: f64, x: f64) -> f64 {
    PI * alpha * (1.0 - x * x).max(0.0).sqrt()
}

fn tail_arg(alpha: f64, x: f64) -> f64 {
    PI * alpha * (x * x - 1.0).max(0.0).sqrt()
}

fn tail_zero(alpha: f64, k: u32) -> f64 {
    (1.0 + (k as f64 / alpha).powi(2)).sqrt()
}

/// `[from, zeros in (from, to), to]` in units of the core half-width.
fn tail_breakpoints(alpha: f64, from: f64, to: f64) -> Vec<f64> {
    let mut points = vec![from];
    let first = (alpha * (from * from - 1.0).max(0.0).sqrt()).floor() as u32 + 1;
    let mut k = first;
    loop {
        let z = tail_zero(alpha, k);
        if z >= to {
            break;
        }
        if z > from {
            points.push(z);
        }
        k += 1;
    }
    points.push(to);
    points
}

fn refine_for_oscillation(points: &[f64], omega: f64) -> Vec<f64> {
    let period = 2.0 * PI / omega.abs();
    let mut out = vec![points[0]];
    for w in points.windows(2) {
        let pieces = ((w[1] - w[0]) / period).ceil().max(1.0) as usize;
        for i in 1..=pieces {
            out.push(w[0] + (w[1] - w[0]) * i as f64 / pieces as f64);
        }
    }
    out
}

/// `∫_X^∞ (x²−1)⁻² dx`.
fn inverse_square_tail(x: f64) -> f64 {
    x / (2.0 * (x * x - 1.0)) + 0.25 * ((x - 1.0) / (x + 1.0)).ln()
}

/// Mean-value estimate of `∫_X^∞ sinc⁴(πα√(x²−1)) dx`.
fn tail_remainder(alpha: f64, x: f64) -> f64 {
    SIN4_MEAN * inverse_square_tail(x) / (PI * alpha).powi(4)
}

/// `∫_{from}^∞ sinc⁴(πα√(x²−1)) dx` for `from ≥ 1`.
fn tail_shape_integral(alpha: f64, from: f64, spec: &QuadratureSpec) -> Result<f64> {
    if from >= TAIL_CUTOFF {
        return Ok(tail_remainder(alpha, from));
    }
    let points = tail_breakpoints(alpha, from, TAIL_CUTOFF);
    let body = integrate_piecewise(|x| sinc(tail_arg(alpha, x)).powi(4), &points, spec)?;
    Ok(body + tail_remainder(alpha, TAIL_CUTOFF))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Kaiser tail parameter alpha must be positive and finite, got {alpha}"
        )));
    }
    Ok(())
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}
