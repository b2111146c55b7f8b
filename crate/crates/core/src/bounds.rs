//! Lower bounds on the phase-estimation error.
//!
//! Squared-error bounds (`Δ²φ`, radians²) and error bounds (`Δφ`, radians)
//! are kept apart by name: the `*_hl` and `frequency_bound` values are
//! errors, everything else is a squared error.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate_piecewise, QuadratureSpec, SymTridiagonal};

/// Constant multiplying the tail correction of [`bound1`].
pub const TAIL_CONSTANT: f64 = 13460.0;

/// Published cap on `R(ε)/ε²` over `0 < ε ≤ 1/3`.
pub const R_EPSILON_CAP: f64 = 1.52661;

/// Largest `ε` for which the closed form of `R(ε)` holds.
pub const EPSILON_MAX: f64 = 1.0 / 3.0;

/// Extreme eigenvalues of the generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpectrum {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

impl GeneratorSpectrum {
    pub fn new(lambda_minus: f64, lambda_plus: f64) -> Result<Self> {
        if !(lambda_minus.is_finite() && lambda_plus.is_finite() && lambda_plus > lambda_minus) {
            return Err(Error::InvalidParameter(format!(
                "need finite lambda_plus > lambda_minus, got [{lambda_minus}, {lambda_plus}]"
            )));
        }
        Ok(Self { lambda_minus, lambda_plus })
    }

    /// Spectrum `[-span/2, span/2]`.
    pub fn with_span(span: f64) -> Result<Self> {
        if !(span.is_finite() && span > 0.0) {
            return Err(Error::InvalidParameter(format!("spectral span must be positive, got {span}")));
        }
        Self::new(-0.5 * span, 0.5 * span)
    }

    pub fn span(&self) -> f64 {
        self.lambda_plus - self.lambda_minus
    }
}

/// Total resource `N = n(λ₊−λ₋)` and prior cell width `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    #[serde(rename = "N")]
    pub n: f64,
    pub delta: f64,
}

impl BoundInputs {
    pub fn new(n: f64, delta: f64) -> Result<Self> {
        check_positive("N", n)?;
        check_positive("delta", delta)?;
        Ok(Self { n, delta })
    }

    pub fn from_uses(uses: u64, spectrum: &GeneratorSpectrum, delta: f64) -> Result<Self> {
        Self::new(uses as f64 * spectrum.span(), delta)
    }

    /// The dimensionless product `Nδ`.
    pub fn n_delta(&self) -> f64 {
        self.n * self.delta
    }
}

/// Kaiser prior parameters together with the derived `ε = 4α/(δL)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alpha: f64,
    #[serde(rename = "L")]
    pub bandwidth: f64,
    pub epsilon: f64,
}

impl BoundParams {
    pub fn new(alpha: f64, bandwidth: f64, inputs: &BoundInputs) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("bandwidth L", bandwidth)?;
        Ok(Self {
            alpha,
            bandwidth,
            epsilon: 4.0 * alpha / (inputs.delta * bandwidth),
        })
    }
}

/// `(sql, hl)` error scales for `n` probes repeated `k` times.
pub fn conventional_limits(n: u64, k: u64, spectrum: &GeneratorSpectrum) -> Result<(f64, f64)> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!("need n, k >= 1, got n = {n}, k = {k}")));
    }
    let (n, k) = (n as f64, k as f64);
    let span = spectrum.span();
    Ok((1.0 / ((k * n).sqrt() * span), 1.0 / (k.sqrt() * n * span)))
}

pub fn pi_corrected_hl(n: u64, spectrum: &GeneratorSpectrum) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    Ok(PI / (n as f64 * spectrum.span()))
}

/// `π²/(N + L/2)²`, the bound for priors of bandwidth `L`.
pub fn bandlimited_bound(n: f64, bandwidth: f64) -> f64 {
    PI * PI / (n + 0.5 * bandwidth).powi(2)
}

/// Ground state of a particle in a box of width `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct WellGroundState {
    pub energy: f64,
    /// Samples at the `grid_points` nodes including both walls, scaled so
    /// the largest entry is one.
    pub profile: Vec<f64>,
    pub spacing: f64,
}

impl WellGroundState {
    pub fn analytic_energy(width: f64) -> f64 {
        PI * PI / (width * width)
    }
}

/// Lowest eigenpair of `−d²/dμ²` on `[0, W]` with Dirichlet walls, on a
/// uniform grid of `grid_points` nodes counting the walls.
pub fn well_ground_state(width: f64, grid_points: usize) -> Result<WellGroundState> {
    check_positive("width", width)?;
    if grid_points < 10 {
        return Err(Error::InvalidParameter(format!(
            "well needs at least 10 grid points, got {grid_points}"
        )));
    }
    let h = width / (grid_points - 1) as f64;
    let interior = grid_points - 2;
    let tri = SymTridiagonal::new(vec![2.0; interior], vec![-1.0; interior - 1])?;
    let (_, v) = tri.min_eigenpair();

    let mut profile = Vec::with_capacity(grid_points);
    profile.push(0.0);
    profile.extend_from_slice(&v);
    profile.push(0.0);
    // The Rayleigh quotient in difference form avoids the cancellation in
    // 2v_i − v_{i−1} − v_{i+1}.
    let num: f64 = profile.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    let den: f64 = v.iter().map(|x| x * x).sum();
    let energy = num / (den * h * h);

    let peak = profile.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    profile.iter_mut().for_each(|x| *x /= peak);
    Ok(WellGroundState { energy, profile, spacing: h })
}

/// Closed-form tail correction `R(ε)` for `0 ≤ ε ≤ 1/3`.
pub fn r_epsilon(eps: f64) -> Result<f64> {
    check_epsilon(eps)?;
    if eps == 0.0 {
        return Ok(0.0);
    }
    let e2 = eps * eps;
    let log_term = if eps == EPSILON_MAX {
        // (1/(2ε) + 2ε²) log(1 − 2ε) is finite at ε = 1/3
        (0.5 / eps + 2.0 * e2) * (1.0 - 2.0 * eps).ln()
    } else {
        (0.5 / eps + 2.0 * e2) * (-2.0 * eps).ln_1p()
    };
    let bracket = 3.0 + 5.0 * eps + 7.0 * e2 / 6.0 + log_term + 1.5 * 3f64.ln()
        - 2.0 * e2 * (3.0 * eps).ln();
    Ok(e2 / 3.0 * bracket)
}

/// The three integrals whose sum, times 2/3, is `R(ε)`.
pub fn r_epsilon_parts(eps: f64, spec: &QuadratureSpec) -> Result<[f64; 3]> {
    check_epsilon(eps)?;
    if eps == 0.0 {
        return Err(Error::Domain("the integral form needs eps > 0".into()));
    }
    let u = 1.0 - eps;
    let e2 = eps * eps;
    let denom = |t: f64| ((t / eps).powi(2) - 1.0).powi(2);

    let first = integrate_piecewise(|t| (t - eps + 1.0).powi(3) - 1.0, &[eps, 2.0 * eps], spec)?;
    let second = if 2.0 * eps < u {
        integrate_piecewise(|t| ((t - eps + 1.0).powi(3) - 1.0) / denom(t), &[2.0 * eps, u], spec)?
    } else {
        0.0
    };

    // The third integrand decays like (t/ε)⁻⁴ times a quadratic. Beyond T the
    // remainder is integrated term by term with (1 − ε²/t²)⁻² ≈ 1 + 2ε²/t².
    let cutoff = 1.0e3;
    let third_num = |t: f64| (t + u).powi(3) - (t + eps).powi(3);
    let mut points = vec![u];
    let mut edge = 2.0;
    while edge < cutoff {
        if edge > u {
            points.push(edge);
        }
        edge *= 4.0;
    }
    points.push(cutoff);
    let body = integrate_piecewise(|t| third_num(t) / denom(t), &points, spec)?;
    let (a, b, c) = (3.0 * (u - eps), 3.0 * (u * u - e2), u.powi(3) - eps.powi(3));
    let t = cutoff;
    let e4 = eps.powi(4);
    let remainder = e4 * (a / t + b / (2.0 * t * t) + c / (3.0 * t.powi(3)))
        + 2.0 * e4 * e2 * (a / (3.0 * t.powi(3)) + b / (4.0 * t.powi(4)));
    Ok([first, second, body + remainder])
}

/// `R(ε)` by quadrature of its defining integrals.
pub fn r_epsilon_numeric(eps: f64, spec: &QuadratureSpec) -> Result<f64> {
    let parts = r_epsilon_parts(eps, spec)?;
    Ok(2.0 / 3.0 * parts.iter().sum::<f64>())
}

/// Rectangular-prior bound with an explicit tail correction. May be
/// negative; `max(value, 0)` is the usable bound.
pub fn bound1(inputs: &BoundInputs, params: &BoundParams) -> Result<f64> {
    let BoundParams { alpha, bandwidth: l, .. } = *params;
    let eps = 4.0 * alpha / (inputs.delta * l);
    if !(eps <= EPSILON_MAX) {
        return Err(Error::Domain(format!(
            "bound1 needs eps = 4*alpha/(delta*L) <= 1/3, got {eps}"
        )));
    }
    let main = (1.0 - 2.0 * eps) * bandlimited_bound(inputs.n, l);
    let tail = TAIL_CONSTANT * inputs.delta * alpha.powf(5.5) / (l * (4.0 * PI * alpha).exp());
    Ok(main - tail)
}

/// `α = ¼ ln(Nδ)`, `L = √(8αN/δ)`.
pub fn default_params(inputs: &BoundInputs) -> Result<BoundParams> {
    let nd = inputs.n_delta();
    if !(nd > 1.0) {
        return Err(Error::Domain(format!("default parameters need N*delta > 1, got {nd}")));
    }
    let alpha = 0.25 * nd.ln();
    let bandwidth = (8.0 * alpha * inputs.n / inputs.delta).sqrt();
    Ok(BoundParams {
        alpha,
        bandwidth,
        epsilon: (nd.ln() / (2.0 * nd)).sqrt(),
    })
}

/// `(π²/N²)(1 − √(8 ln(Nδ)/(Nδ)))`; negative below the crossover.
pub fn bound2(inputs: &BoundInputs) -> Result<f64> {
    let nd = inputs.n_delta();
    if !(nd > 1.0) {
        return Err(Error::Domain(format!("bound2 needs N*delta > 1, got {nd}")));
    }
    Ok(PI * PI / (inputs.n * inputs.n) * (1.0 - (8.0 * nd.ln() / nd).sqrt()))
}

/// The `Nδ` above which [`bound2`] is positive: the root of `x = 8 ln x`
/// in `[20, 30]`.
pub fn crossover() -> f64 {
    find_root(|x| x - 8.0 * x.ln(), 20.0, 30.0, 1e-13).expect("x - 8 ln x changes sign on [20, 30]")
}

/// `π/(T(λ₊−λ₋))`, the asymptotic bound on `Δω` for total time `T`.
pub fn frequency_bound(time: f64, spectrum: &GeneratorSpectrum) -> Result<f64> {
    check_positive("time T", time)?;
    Ok(PI / (time * spectrum.span()))
}

/// Every bound for one `(N, δ)` with the parameters used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_bandlimited: f64,
    /// `None` when `ε > 1/3`.
    pub bound1_raw: Option<f64>,
    pub bound2: f64,
    pub conventional_hl: f64,
    pub pi_hl: f64,
    pub alpha: f64,
    #[serde(rename = "L")]
    pub bandwidth: f64,
    pub epsilon: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub delta: f64,
}

impl BoundReport {
    /// `params` defaults to [`default_params`]; `k` is the repetition count
    /// entering the conventional limit.
    pub fn compute(inputs: &BoundInputs, params: Option<BoundParams>, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("need k >= 1".into()));
        }
        let params = match params {
            Some(p) => p,
            None => default_params(inputs)?,
        };
        let bound1_raw = match bound1(inputs, &params) {
            Ok(v) => Some(v),
            Err(Error::Domain(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            bound_bandlimited: bandlimited_bound(inputs.n, params.bandwidth),
            bound1_raw,
            bound2: bound2(inputs)?,
            conventional_hl: 1.0 / ((k as f64).sqrt() * inputs.n),
            pi_hl: PI / inputs.n,
            alpha: params.alpha,
            bandwidth: params.bandwidth,
            epsilon: params.epsilon,
            n: inputs.n,
            delta: inputs.delta,
        })
    }

    /// `max(bound1, 0)`, or `None` when bound1 is undefined.
    pub fn bound1_clamped(&self) -> Option<f64> {
        self.bound1_raw.map(|v| v.max(0.0))
    }

    pub fn bound2_clamped(&self) -> f64 {
        self.bound2.max(0.0)
    }

    /// Whether `Nδ` is at or below the crossover, where bound2 is vacuous.
    pub fn is_vacuous(&self) -> bool {
        self.n * self.delta <= crossover()
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(0.0..=EPSILON_MAX).contains(&eps) {
        return Err(Error::Domain(format!("R(eps) needs 0 <= eps <= 1/3, got {eps}")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}
