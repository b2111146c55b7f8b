use std::f64::consts::PI;

/// Below this argument `I₀` is summed from its power series; above it the
/// asymptotic expansion of `e^{-x} I₀(x)` converges to full precision.
const BESSEL_SERIES_LIMIT: f64 = 30.0;

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Exponentially scaled modified Bessel function `e^{-x} I₀(x)`, for `x ≥ 0`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= BESSEL_SERIES_LIMIT {
        i0_series(x) * (-x).exp()
    } else {
        i0_asymptotic_scaled(x)
    }
}

/// Modified Bessel function of the first kind `I₀(x)` for `x ≥ 0`.
///
/// Overflows to `+∞` only where `I₀` itself exceeds `f64::MAX`; use
/// [`bessel_i0_scaled`] or [`ln_bessel_i0`] beyond `x ≈ 700`.
pub fn bessel_i0(x: f64) -> f64 {
    if x <= BESSEL_SERIES_LIMIT {
        i0_series(x)
    } else {
        i0_asymptotic_scaled(x) * x.exp()
    }
}

pub fn ln_bessel_i0(x: f64) -> f64 {
    if x <= BESSEL_SERIES_LIMIT {
        i0_series(x).ln()
    } else {
        x + i0_asymptotic_scaled(x).ln()
    }
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > f64::EPSILON * sum * 0.1 {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

// e^{-x} I₀(x) ~ (2πx)^{-1/2} Σ_k [(2k-1)!!]² / (k! 8^k x^k)
fn i0_asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < f64::EPSILON * sum * 0.1 {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// `log(sinh(u)/u)` for `u ≥ 0`, finite for every finite `u`.
pub fn log_sinhc(u: f64) -> f64 {
    debug_assert!(u >= 0.0);
    let u = u.abs();
    if u < 0.1 {
        // Maclaurin series; the first omitted term is below 2e-17.
        let s = u * u;
        s * (1.0 / 6.0
            + s * (-1.0 / 180.0 + s * (1.0 / 2835.0 + s * (-1.0 / 37800.0 + s / 467_775.0))))
    } else if u < 20.0 {
        (u.sinh() / u).ln()
    } else {
        u + (-(-2.0 * u).exp()).ln_1p() - (2.0 * u).ln()
    }
}
