use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, sinc, QuadratureSpec};

use super::integrate_fallible;
use super::kaiser::{check_positive, KaiserPrior};

/// A rectangle of width `δ − 8α/L` convolved with `p_{α,L}`: bandlimited, and
/// sticking out of `[-δ/2, δ/2]` only through the sinc tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmearedRectPrior {
    kaiser: KaiserPrior,
    delta: f64,
}

impl SmearedRectPrior {
    pub fn new(kaiser: KaiserPrior, delta: f64) -> Result<Self> {
        check_positive("delta", delta)?;
        let core = delta - 2.0 * kaiser.core_half_width();
        if !(core > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "core width nonpositive: need delta > 8*alpha/L, got delta = {delta} <= {}",
                2.0 * kaiser.core_half_width()
            )));
        }
        Ok(Self { kaiser, delta })
    }

    pub fn kaiser(&self) -> &KaiserPrior {
        &self.kaiser
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Width `δ − 8α/L` of the narrowed rectangle.
    pub fn core_width(&self) -> f64 {
        self.delta - 2.0 * self.kaiser.core_half_width()
    }

    /// `(1/(δ−8α/L)) ∫_{−δ/2+4α/L}^{δ/2−4α/L} p_{α,L}(φ−η) dη`.
    pub fn density(&self, phi: f64, spec: &QuadratureSpec) -> Result<f64> {
        let h = 0.5 * self.core_width();
        let c = self.kaiser.core_half_width();
        let mut points = vec![-h, h];
        for p in [phi - c, phi, phi + c] {
            if p > -h && p < h {
                points.push(p);
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let mass = integrate_piecewise(|eta| self.kaiser.density(phi - eta), &points, spec)?;
        Ok(mass / self.core_width())
    }

    /// Mass outside `[-δ/2, δ/2]`, from the Kaiser tail integral directly.
    pub fn mass_outside(&self, spec: &QuadratureSpec) -> Result<f64> {
        let h = 0.5 * self.core_width();
        let half = 0.5 * self.delta;
        // η ∈ [-h, h] keeps δ/2 − η ≥ 4α/L, so only tail mass is involved.
        let one_side =
            integrate_fallible(|eta| self.kaiser.upper_tail_mass(half - eta, spec), &[-h, h], spec)?;
        Ok(2.0 * one_side / self.core_width())
    }

    /// `∫_{-δ/2}^{δ/2}` of the density, by nested quadrature.
    pub fn mass_inside(&self, spec: &QuadratureSpec) -> Result<f64> {
        let half = 0.5 * self.delta;
        let h = 0.5 * self.core_width();
        integrate_fallible(
            |phi| self.density(phi, spec),
            &[-half, -h, 0.0, h, half],
            spec,
        )
    }

    /// Transform of the convolution: Kaiser transform times that of the
    /// narrowed rectangle.
    pub fn fourier_transform(&self, nu: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(self.kaiser.fourier_transform(nu, spec)? * sinc(PI * nu * self.core_width()))
    }
}
