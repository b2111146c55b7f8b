//! Covariant phase estimation on the integer grid `μ ∈ {0, …, n}`.
//!
//! With a flat prior on `[−π, π)` and a covariant measurement, the Bayesian
//! mean-square error of a probe `Σ c_m |m⟩` is the quadratic form `c†Ac`
//! of the Toeplitz matrix whose entries are the Fourier coefficients of the
//! wrapped cost `θ²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound2, BoundInputs, GeneratorSpectrum};
use crate::error::{Error, Result};
use crate::numerics::{dot, integrate_piecewise, sym_eig_min, QuadratureSpec, SymmetricMatrix};

/// Tolerance on `Σ|c_m|² = 1` accepted by [`ProbeState::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Number of cells in the inverse-CDF table used for sampling.
pub const SAMPLER_GRID: usize = 1 << 16;

/// A normalized probe state `Σ_m c_m |m⟩`, `m = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProbeStateJson", into = "ProbeStateJson")]
pub struct ProbeState {
    amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeStateJson {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<ProbeStateJson> for ProbeState {
    type Error = Error;

    fn try_from(j: ProbeStateJson) -> Result<Self> {
        if j.re.len() != j.n + 1 || j.im.len() != j.n + 1 {
            return Err(Error::Parse(format!(
                "state with n = {} needs {} real and imaginary parts, got {} and {}",
                j.n,
                j.n + 1,
                j.re.len(),
                j.im.len()
            )));
        }
        ProbeState::new(j.re.iter().zip(&j.im).map(|(&re, &im)| Complex64::new(re, im)).collect())
    }
}

impl From<ProbeState> for ProbeStateJson {
    fn from(s: ProbeState) -> Self {
        ProbeStateJson {
            n: s.n(),
            re: s.amplitudes.iter().map(|c| c.re).collect(),
            im: s.amplitudes.iter().map(|c| c.im).collect(),
        }
    }
}

impl ProbeState {
    /// Takes amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a probe needs n >= 1, i.e. at least two amplitudes, got {}",
                amplitudes.len()
            )));
        }
        if let Some(c) = amplitudes.iter().find(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidParameter(format!("amplitude {c} is not finite")));
        }
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "amplitudes must satisfy sum |c|^2 = 1 within {NORM_TOLERANCE}, got {norm}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm first.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter(format!("cannot normalize a state of norm {norm}")));
        }
        Self::new(amplitudes.into_iter().map(|c| c / norm).collect())
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("probe states always serialize")
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `ρ_d = Σ_k c_{k+d} c̄_k` for `d = 0..=n`.
    fn autocorrelation(&self) -> Vec<Complex64> {
        let c = &self.amplitudes;
        (0..c.len())
            .map(|d| c[d..].iter().zip(c).map(|(a, b)| a * b.conj()).sum())
            .collect()
    }

    /// Outcome density of `θ = φ̃ − φ`: `|Σ_m c_m e^{−imθ}|²/(2π)`.
    pub fn outcome_density(&self, theta: f64) -> f64 {
        let f: Complex64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(m, c)| c * Complex64::from_polar(1.0, -(m as f64) * theta))
            .sum();
        f.norm_sqr() / (2.0 * PI)
    }
}

/// Symmetric Toeplitz cost matrix of dimension `n + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    /// `A_m` for `m = 0..=n`.
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j.abs_diff(k)]
    }

    pub fn to_matrix(&self) -> SymmetricMatrix {
        SymmetricMatrix::toeplitz(&self.entries)
    }
}

/// `A_m = (1/2π)∫_{−π}^{π} θ² e^{imθ} dθ`: `π²/3` on the diagonal and
/// `2(−1)^m/m²` off it.
pub fn cost_entry(m: usize) -> f64 {
    if m == 0 {
        PI * PI / 3.0
    } else {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * 2.0 / (m as f64 * m as f64)
    }
}

pub fn cost_matrix(n: usize) -> Result<CostMatrix> {
    check_n(n)?;
    Ok(CostMatrix { entries: (0..=n).map(cost_entry).collect() })
}

/// `c†Ac`.
pub fn covariant_mse(state: &ProbeState) -> f64 {
    let rho = state.autocorrelation();
    rho[0].re * cost_entry(0)
        + 2.0 * rho.iter().enumerate().skip(1).map(|(d, r)| cost_entry(d) * r.re).sum::<f64>()
}

/// `∫θ²·density(θ)dθ` over `[−π, π]` by quadrature; an oracle for
/// [`covariant_mse`].
pub fn covariant_mse_quadrature(state: &ProbeState, spec: &QuadratureSpec) -> Result<f64> {
    let pieces = 4 * (state.n() + 1);
    let points: Vec<f64> = (0..=pieces).map(|i| -PI + 2.0 * PI * i as f64 / pieces as f64).collect();
    Ok(integrate_piecewise(|t| t * t * state.outcome_density(t), &points, spec)?)
}

/// The probe minimizing [`covariant_mse`], with real nonnegative-sum
/// amplitudes, and its cost.
pub fn optimal_probe(n: usize) -> Result<(ProbeState, f64)> {
    let a = cost_matrix(n)?.to_matrix();
    let (_, mut v) = sym_eig_min(&a);
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let mse = a.quadratic_form(&v) / dot(&v, &v);
    Ok((ProbeState::from_real(&v)?, mse))
}

/// `c_m ∝ sin(π(m+1)/(n+2))`.
pub fn sine_state(n: usize) -> Result<ProbeState> {
    check_n(n)?;
    let amps: Vec<f64> = (0..=n).map(|m| (PI * (m + 1) as f64 / (n + 2) as f64).sin()).collect();
    ProbeState::from_real(&amps)
}

/// `(|0⟩ + |n⟩)/√2`.
pub fn noon_state(n: usize) -> Result<ProbeState> {
    check_n(n)?;
    let mut amps = vec![0.0; n + 1];
    amps[0] = 1.0;
    amps[n] = 1.0;
    ProbeState::from_real(&amps)
}

pub fn uniform_state(n: usize) -> Result<ProbeState> {
    check_n(n)?;
    ProbeState::from_real(&vec![1.0; n + 1])
}

/// `π²/3 + 2(−1)ⁿ/n²`, the cost of [`noon_state`].
pub fn noon_mse(n: usize) -> f64 {
    cost_entry(0) + cost_entry(n)
}

/// Factor taking grid MSEs to a generator with the given spectrum:
/// `MSE_physical = MSE_grid / (λ₊−λ₋)²`. Valid while the prior support is
/// shorter than `2π/(λ₊−λ₋)`.
pub fn two_level_embedding(spectrum: &GeneratorSpectrum) -> f64 {
    spectrum.span().powi(-2)
}

/// Inverse-CDF sampler for the outcome `θ = φ̃ − φ` of a covariant
/// measurement.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    /// CDF at `θ_i = −π + 2πi/SAMPLER_GRID`, `i = 0..=SAMPLER_GRID`.
    cdf: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(state: &ProbeState) -> Self {
        let rho = state.autocorrelation();
        let cells = SAMPLER_GRID;
        let step = 2.0 * PI / cells as f64;
        let mut cdf = Vec::with_capacity(cells + 1);
        cdf.push(0.0);
        // F(θ) = (θ+π)/2π + (1/π) Σ_d Re(ρ_d · i(e^{−idθ} − (−1)^d))/d
        for i in 1..cells {
            let theta = -PI + step * i as f64;
            let rot = Complex64::from_polar(1.0, -theta);
            let mut phase = Complex64::new(1.0, 0.0);
            let mut sum = 0.0;
            for (d, r) in rho.iter().enumerate().skip(1) {
                phase *= rot;
                let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                let z = r * Complex64::i() * (phase - sign);
                sum += z.re / d as f64;
            }
            let f = (theta + PI) / (2.0 * PI) + sum / PI;
            let prev = *cdf.last().unwrap();
            cdf.push(f.clamp(prev, 1.0));
        }
        cdf.push(1.0);
        Self { cdf }
    }

    /// The tabulated CDF evaluated by linear interpolation.
    pub fn cdf(&self, theta: f64) -> f64 {
        let x = ((theta + PI) / (2.0 * PI) * SAMPLER_GRID as f64).clamp(0.0, SAMPLER_GRID as f64);
        let i = (x.floor() as usize).min(SAMPLER_GRID - 1);
        let w = x - i as f64;
        self.cdf[i] + w * (self.cdf[i + 1] - self.cdf[i])
    }

    /// An outcome in `[−π, π)`.
    pub fn sample_offset<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let i = self.cdf.partition_point(|&f| f <= u).clamp(1, SAMPLER_GRID) - 1;
        let (lo, hi) = (self.cdf[i], self.cdf[i + 1]);
        let w = if hi > lo { (u - lo) / (hi - lo) } else { 0.5 };
        let step = 2.0 * PI / SAMPLER_GRID as f64;
        (-PI + step * (i as f64 + w)).min(PI - f64::EPSILON * PI)
    }

    /// An estimate `φ̃ ∈ [φ−π, φ+π)`.
    pub fn sample<R: Rng + ?Sized>(&self, phi_true: f64, rng: &mut R) -> f64 {
        phi_true + self.sample_offset(rng)
    }
}

/// One draw, deterministic in `seed`.
pub fn sample_outcome(state: &ProbeState, phi_true: f64, seed: u64) -> f64 {
    sample_outcomes(state, phi_true, seed, 1)[0]
}

/// `count` draws from one seeded stream; the first matches
/// [`sample_outcome`] with the same seed.
pub fn sample_outcomes(state: &ProbeState, phi_true: f64, seed: u64, count: usize) -> Vec<f64> {
    let sampler = OutcomeSampler::new(state);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sampler.sample(phi_true, &mut rng)).collect()
}

/// One row of a scaling sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementReport {
    pub n: usize,
    pub mse: f64,
    pub rmse: f64,
    /// `n·√mse`, which tends to `π`.
    pub n_rmse: f64,
    /// `bound2` at `N = n`, `δ = 1`; undefined for `n = 1`.
    pub bound2_delta1: Option<f64>,
}

impl MeasurementReport {
    pub fn from_mse(n: usize, mse: f64) -> Self {
        let bound = BoundInputs::new(n as f64, 1.0).and_then(|b| bound2(&b)).ok();
        Self {
            n,
            mse,
            rmse: mse.sqrt(),
            n_rmse: n as f64 * mse.sqrt(),
            bound2_delta1: bound,
        }
    }

    /// Whether the lower bound exceeds the achieved cost.
    pub fn sandwich_violation(&self) -> bool {
        self.bound2_delta1.is_some_and(|b| b > self.mse)
    }
}

pub fn scaling_sweep(n_values: &[usize]) -> Result<Vec<MeasurementReport>> {
    if n_values.is_empty() {
        return Err(Error::InvalidParameter("scaling sweep needs at least one n".into()));
    }
    n_values.iter().copied().try_for_each(check_n)?;
    n_values
        .iter()
        .map(|&n| optimal_probe(n).map(|(_, mse)| MeasurementReport::from_mse(n, mse)))
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn state_from(parts: &[(f64, f64)]) -> ProbeState {
        ProbeState::normalized(parts.iter().map(|&(r, i)| Complex64::new(r, i)).collect()).unwrap()
    }

    #[test]
    fn cost_entries_match_quadrature() {
        for m in 0..6 {
            let v = integrate_piecewise(
                |t| t * t * (m as f64 * t).cos() / (2.0 * PI),
                &[-PI, -PI / 2.0, 0.0, PI / 2.0, PI],
                &spec(),
            )
            .unwrap();
            assert!((cost_entry(m) - v).abs() < 1e-12, "m = {m}");
        }
        assert_eq!(cost_entry(1), -2.0);
        assert_eq!(cost_entry(2), 0.5);
        let a = cost_matrix(9).unwrap();
        for m in 1..=9 {
            let s = a.entries()[m] * (m * m) as f64;
            assert!((s.abs() - 2.0).abs() < 1e-14);
            assert_eq!(s > 0.0, m % 2 == 0);
        }
        for (j, k) in [(0, 3), (7, 2), (4, 4), (9, 0), (1, 8)] {
            assert_eq!(a.get(j, k), a.get(k, j));
            assert_eq!(a.get(j, k), a.entries()[j.abs_diff(k)]);
        }
        assert!(cost_matrix(0).is_err());
    }

    #[test]
    fn small_cases() {
        let u = uniform_state(1).unwrap();
        assert!((covariant_mse(&u) - (PI * PI / 3.0 - 2.0)).abs() < 1e-15);
        let peak = ProbeState::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!((covariant_mse(&peak) - PI * PI / 3.0).abs() < 1e-15);

        let (s, mse) = optimal_probe(1).unwrap();
        assert!((mse - (PI * PI / 3.0 - 2.0)).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for c in s.amplitudes() {
            assert!((c.re - h).abs() < 1e-14 && c.im == 0.0);
        }
    }

    #[test]
    fn optimal_reference_values() {
        // Dense symmetric eigensolves of the same matrices in an independent
        // linear-algebra package.
        let reference = [
            (2, 0.700_413_960_796_320_9),
            (10, 0.071_373_391_144_144_39),
            (20, 0.020_844_404_253_156_763),
            (50, 0.003_683_929_335_662_113),
            (100, 0.000_953_115_048_631_940_9),
        ];
        for (n, want) in reference {
            let (_, mse) = optimal_probe(n).unwrap();
            assert!((mse / want - 1.0).abs() < 1e-10, "n = {n}: {mse}");
        }
        let (s, _) = optimal_probe(2).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - a[2].re).abs() < 1e-12 && a[1].re > a[0].re);
    }

    #[test]
    fn optimal_probe_is_positive() {
        for n in [1, 2, 5, 17, 64, 150] {
            let (s, _) = optimal_probe(n).unwrap();
            assert!(s.amplitudes().iter().all(|c| c.re > 0.0 && c.im == 0.0), "n = {n}");
        }
    }

    #[test]
    fn approach_to_pi_squared() {
        let scaled: Vec<f64> = [10, 50, 200]
            .iter()
            .map(|&n| optimal_probe(n).unwrap().1 * (n * n) as f64 / (PI * PI))
            .collect();
        assert!(scaled.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()));
        assert!((scaled[2] - 1.0).abs() < 0.05);
    }

    #[test]
    fn sine_state_is_near_optimal() {
        let s = sine_state(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(s.amplitudes().iter().all(|c| (c.re - h).abs() < 1e-15));

        let (opt, _) = optimal_probe(50).unwrap();
        let overlap: Complex64 = sine_state(50)
            .unwrap()
            .amplitudes()
            .iter()
            .zip(opt.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(overlap.norm() > 0.999);

        let gap = |n| {
            let (_, best) = optimal_probe(n).unwrap();
            covariant_mse(&sine_state(n).unwrap()) / best - 1.0
        };
        let (g20, g100) = (gap(20), gap(100));
        assert!(g20 > 0.0 && g100 > 0.0 && g100 < g20);
        // Reference ratios from the same independent eigensolves.
        assert!((g20 - 4.594e-3).abs() < 1e-5, "{g20}");
        assert!((g100 - 1.0661e-3).abs() < 1e-6, "{g100}");
    }

    #[test]
    fn noon_cost() {
        for n in 1..40 {
            let s = noon_state(n).unwrap();
            let want = PI * PI / 3.0 + 2.0 * if n % 2 == 0 { 1.0 } else { -1.0 } / (n * n) as f64;
            assert!((covariant_mse(&s) - want).abs() < 1e-14);
            assert_eq!(noon_mse(n), cost_entry(0) + cost_entry(n));
        }
        // 1 + cos(nθ) has n maxima on [−π, π).
        let s = noon_state(7).unwrap();
        let grid = 7000;
        let d: Vec<f64> =
            (0..grid).map(|i| s.outcome_density(-PI + 2.0 * PI * i as f64 / grid as f64)).collect();
        let peaks = (0..grid)
            .filter(|&i| d[i] > d[(i + grid - 1) % grid] && d[i] >= d[(i + 1) % grid])
            .count();
        assert_eq!(peaks, 7);
    }

    #[test]
    fn quadrature_agrees_for_structured_states() {
        for s in [noon_state(12).unwrap(), sine_state(9).unwrap(), uniform_state(4).unwrap()] {
            let q = covariant_mse_quadrature(&s, &spec()).unwrap();
            assert!((q - covariant_mse(&s)).abs() < 1e-8);
        }
    }

    #[test]
    fn embedding_scale() {
        let half = GeneratorSpectrum::new(-0.5, 0.5).unwrap();
        assert_eq!(two_level_embedding(&half), 1.0);
        let two = GeneratorSpectrum::with_span(2.0).unwrap();
        assert!((two_level_embedding(&two).sqrt() - 0.5).abs() < 1e-15);
        let three = GeneratorSpectrum::with_span(3.0).unwrap();
        let (_, mse) = optimal_probe(100).unwrap();
        let dphi = (mse * two_level_embedding(&three)).sqrt();
        assert!((dphi * 300.0 - 100.0 * mse.sqrt()).abs() < 1e-12);
        // n·√mse/π is 0.9827 at n = 100 on the unit grid.
        assert!((dphi * 300.0 / PI - 1.0).abs() < 0.02);
    }

    #[test]
    fn json_shape() {
        let s = ProbeState::normalized(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)])
            .unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["n"], 1);
        assert_eq!(v["re"], serde_json::json!([0.6, 0.0]));
        assert_eq!(v["im"], serde_json::json!([0.0, 0.8]));
        assert_eq!(ProbeState::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn json_rejects_bad_states() {
        for text in [
            r#"{"n": 1, "re": [1.0, 1.0], "im": [0.0, 0.0]}"#,
            r#"{"n": 2, "re": [1.0, 0.0], "im": [0.0, 0.0]}"#,
            r#"{"n": 0, "re": [1.0], "im": [0.0]}"#,
            r#"{"n": 1, "re": [1.0, 0.0], "im": [0.0, 0.0], "x": 1}"#,
            r#"{"n": 1, "re": [1.0, 0.0]}"#,
            "[]",
        ] {
            assert!(ProbeState::from_json(text).is_err(), "{text}");
        }
        assert!(ProbeState::normalized(vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn flat_outcomes_are_uniform() {
        let s = ProbeState::from_real(&[1.0, 0.0]).unwrap();
        let xs = sample_outcomes(&s, 0.0, 7, 100_000);
        assert!(xs.iter().all(|x| (-PI..PI).contains(x)));
        let var = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
        assert!((var / (PI * PI / 3.0) - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn sampler_cdf_matches_density() {
        let s = sine_state(6).unwrap();
        let sampler = OutcomeSampler::new(&s);
        for &t in &[-2.5, -1.0, -0.1, 0.0, 0.7, 2.9] {
            let q = integrate_piecewise(|x| s.outcome_density(x), &[-PI, t], &spec()).unwrap();
            assert!((sampler.cdf(t) - q).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let s = sine_state(8).unwrap();
        let a = sample_outcomes(&s, 0.3, 42, 50);
        let b = sample_outcomes(&s, 0.3, 42, 50);
        assert_eq!(a, b);
        assert_eq!(sample_outcome(&s, 0.3, 42), a[0]);
        assert_ne!(sample_outcomes(&s, 0.3, 43, 50), a);
        assert!(a.iter().all(|x| (x - 0.3).abs() <= PI));
    }

    #[test]
    fn sweep_rows() {
        let rows = scaling_sweep(&[1, 30, 100]).unwrap();
        assert!(rows[0].bound2_delta1.is_none());
        for r in &rows {
            assert!(!r.sandwich_violation());
            assert!((r.n_rmse - r.n as f64 * r.mse.sqrt()).abs() < 1e-15);
        }
        assert!(scaling_sweep(&[]).is_err());
        assert!(scaling_sweep(&[3, 0]).is_err());
    }

    fn arb_state(max_n: usize) -> impl Strategy<Value = ProbeState> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..=max_n + 1)
            .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
            .prop_map(|v| state_from(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn quadratic_form_matches_integral(s in arb_state(16)) {
            let q = covariant_mse_quadrature(&s, &spec()).unwrap();
            prop_assert!((q - covariant_mse(&s)).abs() < 1e-8);
        }

        #[test]
        fn global_phase_invariance(s in arb_state(20), phase in 0.0f64..(2.0 * PI)) {
            let u = Complex64::from_polar(1.0, phase);
            let rotated = ProbeState::new(s.amplitudes().iter().map(|c| c * u).collect()).unwrap();
            prop_assert!((covariant_mse(&rotated) - covariant_mse(&s)).abs() < 1e-13);
        }

        #[test]
        fn reflection_invariance(s in arb_state(20)) {
            let mut amps = s.amplitudes().to_vec();
            amps.reverse();
            let r = ProbeState::new(amps).unwrap();
            prop_assert!((covariant_mse(&r) - covariant_mse(&s)).abs() < 1e-13);
        }

        #[test]
        fn optimal_dominates(s in arb_state(12)) {
            let (_, best) = optimal_probe(s.n()).unwrap();
            prop_assert!(best <= covariant_mse(&s) + 1e-12);
        }

        #[test]
        fn json_round_trip(s in arb_state(8)) {
            prop_assert_eq!(ProbeState::from_json(&s.to_json()).unwrap(), s);
        }
    }
}
