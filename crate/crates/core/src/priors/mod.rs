//! Prior distributions over the phase.
//!
//! Four kinds are supported: a single rectangle, a weighted comb of
//! rectangles, the bandlimited Kaiser family `p_{α,L}` and the smeared
//! rectangle `p_{α,L,δ}`. [`PriorSpec`] is the JSON description consumed by the
//! command line; [`Prior`] is the evaluated form.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, QuadratureSpec};

mod flat;
mod kaiser;
mod smeared;

pub use flat::{comb_from_samples, CombPrior, RectPrior};
pub use kaiser::{
    kaiser_normalization, kaiser_normalization_leading, kaiser_normalization_series,
    kaiser_tail_mass_bound, log_kaiser_normalization_at, series_corrections, tail_bound_factor,
    KaiserPrior,
};
pub use smeared::SmearedRectPrior;

/// Serialized form of a prior: `{"kind": ..., parameters...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorSpec {
    Rect {
        delta: f64,
        #[serde(default)]
        center: f64,
    },
    Comb {
        delta: f64,
        /// `[l, p_l]` pairs; rescaled on construction.
        weights: Vec<(i64, f64)>,
    },
    Kaiser {
        alpha: f64,
        #[serde(rename = "L")]
        bandwidth: f64,
    },
    Smeared {
        alpha: f64,
        #[serde(rename = "L")]
        bandwidth: f64,
        delta: f64,
    },
}

impl PriorSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("prior spec serializes")
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PriorSpec::Rect { .. } => "rect",
            PriorSpec::Comb { .. } => "comb",
            PriorSpec::Kaiser { .. } => "kaiser",
            PriorSpec::Smeared { .. } => "smeared",
        }
    }

    /// Checks parameters and, for the Kaiser kinds, computes `N_α`.
    pub fn build(&self, spec: &QuadratureSpec) -> Result<Prior> {
        Ok(match *self {
            PriorSpec::Rect { delta, center } => Prior::Rect(RectPrior::new(delta, center)?),
            PriorSpec::Comb { delta, ref weights } => Prior::Comb(comb_from_samples(delta, weights)?),
            PriorSpec::Kaiser { alpha, bandwidth } => {
                Prior::Kaiser(KaiserPrior::new(alpha, bandwidth, spec)?)
            }
            PriorSpec::Smeared {
                alpha,
                bandwidth,
                delta,
            } => {
                // Reject a degenerate core before paying for the normalization.
                if !(delta > 8.0 * alpha / bandwidth) {
                    return Err(Error::InvalidParameter(format!(
                        "core width nonpositive: need delta > 8*alpha/L, got delta = {delta} <= {}",
                        8.0 * alpha / bandwidth
                    )));
                }
                Prior::Smeared(SmearedRectPrior::new(
                    KaiserPrior::new(alpha, bandwidth, spec)?,
                    delta,
                )?)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    Rect(RectPrior),
    Comb(CombPrior),
    Kaiser(KaiserPrior),
    Smeared(SmearedRectPrior),
}

impl Prior {
    pub fn to_spec(&self) -> PriorSpec {
        match self {
            Prior::Rect(p) => PriorSpec::Rect {
                delta: p.delta(),
                center: p.center(),
            },
            Prior::Comb(p) => PriorSpec::Comb {
                delta: p.delta(),
                weights: p.weights().to_vec(),
            },
            Prior::Kaiser(p) => PriorSpec::Kaiser {
                alpha: p.alpha(),
                bandwidth: p.bandwidth(),
            },
            Prior::Smeared(p) => PriorSpec::Smeared {
                alpha: p.kaiser().alpha(),
                bandwidth: p.kaiser().bandwidth(),
                delta: p.delta(),
            },
        }
    }

    pub fn density(&self, phi: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(match self {
            Prior::Rect(p) => p.density(phi),
            Prior::Comb(p) => p.density(phi),
            Prior::Kaiser(p) => p.density(phi),
            Prior::Smeared(p) => p.density(phi, spec)?,
        })
    }

    /// An interval holding all but the sinc tails of the prior.
    pub fn plot_range(&self) -> (f64, f64) {
        match self {
            Prior::Rect(p) => {
                let (lo, hi) = p.support();
                let pad = 0.25 * p.delta();
                (lo - pad, hi + pad)
            }
            Prior::Comb(p) => {
                let (lo, hi) = p.support();
                (lo - p.delta(), hi + p.delta())
            }
            Prior::Kaiser(p) => {
                let c = p.core_half_width();
                (-3.0 * c, 3.0 * c)
            }
            Prior::Smeared(p) => {
                let reach = 0.5 * p.delta() + 2.0 * p.kaiser().core_half_width();
                (-reach, reach)
            }
        }
    }

    /// `∫ p`, numerically for the continuous kinds and as an exact sum for
    /// the comb.
    pub fn total_mass(&self, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            Prior::Rect(p) => {
                let (lo, hi) = p.support();
                Ok(integrate_piecewise(|phi| p.density(phi), &[lo, hi], spec)?)
            }
            Prior::Comb(p) => Ok(p.total_mass()),
            Prior::Kaiser(p) => p.total_mass(spec),
            Prior::Smeared(p) => Ok(p.mass_inside(spec)? + p.mass_outside(spec)?),
        }
    }

    /// Mass carried by the sinc tails: outside the core for the Kaiser prior,
    /// outside `[-δ/2, δ/2]` for the smeared rectangle, zero for flat priors.
    pub fn tail_mass(&self, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            Prior::Rect(_) | Prior::Comb(_) => Ok(0.0),
            Prior::Kaiser(p) => p.tail_mass(spec),
            Prior::Smeared(p) => p.mass_outside(spec),
        }
    }

    /// Analytic bound on [`Self::tail_mass`], where one exists.
    pub fn tail_mass_bound(&self) -> Option<f64> {
        match self {
            Prior::Rect(_) | Prior::Comb(_) => None,
            Prior::Kaiser(p) => Some(p.tail_mass_bound()),
            Prior::Smeared(p) => Some(p.kaiser().tail_mass_bound()),
        }
    }

    /// Bandwidth `L` for the bandlimited kinds.
    pub fn bandwidth(&self) -> Option<f64> {
        match self {
            Prior::Rect(_) | Prior::Comb(_) => None,
            Prior::Kaiser(p) => Some(p.bandwidth()),
            Prior::Smeared(p) => Some(p.kaiser().bandwidth()),
        }
    }

    pub fn fourier_transform(&self, nu: f64, spec: &QuadratureSpec) -> Result<Option<f64>> {
        Ok(match self {
            Prior::Rect(_) | Prior::Comb(_) => None,
            Prior::Kaiser(p) => Some(p.fourier_transform(nu, spec)?),
            Prior::Smeared(p) => Some(p.fourier_transform(nu, spec)?),
        })
    }

    /// [`bandwidth_excess`] for the bandlimited kinds.
    pub fn bandwidth_excess(&self, tol: f64) -> Result<Option<f64>> {
        let Some(l) = self.bandwidth() else {
            return Ok(None);
        };
        let spec = QuadratureSpec::with_tolerance(tol)?;
        let mut worst = 0.0f64;
        for nu in excess_grid(l) {
            if let Some(v) = self.fourier_transform(nu, &spec)? {
                worst = worst.max(v.abs());
            }
        }
        Ok(Some(worst))
    }
}

/// Number of frequencies probed by [`bandwidth_excess`].
pub const EXCESS_GRID_POINTS: usize = 48;

/// Frequencies `ν ∈ [1.05·L/2, 4L]` outside the nominal band.
pub fn excess_grid(bandwidth: f64) -> Vec<f64> {
    let lo = 1.05 * 0.5 * bandwidth;
    let hi = 4.0 * bandwidth;
    (0..EXCESS_GRID_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (EXCESS_GRID_POINTS - 1) as f64)
        .collect()
}

/// Largest `|∫ p(φ) e^{−2πiνφ} dφ|` over [`excess_grid`], with `tol` as the
/// quadrature tolerance. Zero up to numerical error for a prior of bandwidth `L`.
pub fn bandwidth_excess(prior: &KaiserPrior, tol: f64) -> Result<f64> {
    bandwidth_excess_on(prior, &excess_grid(prior.bandwidth()), tol)
}

pub fn bandwidth_excess_on(prior: &KaiserPrior, grid: &[f64], tol: f64) -> Result<f64> {
    let spec = QuadratureSpec::with_tolerance(tol)?;
    let mut worst = 0.0f64;
    for &nu in grid {
        worst = worst.max(prior.fourier_transform(nu, &spec)?.abs());
    }
    Ok(worst)
}

/// Piecewise integral of a fallible integrand; the first error wins.
pub(crate) fn integrate_fallible<F>(f: F, points: &[f64], spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure = RefCell::new(None);
    let value = integrate_piecewise(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        points,
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(value?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn json_shape() {
        let k = PriorSpec::from_json(r#"{"kind":"kaiser","alpha":2,"L":8}"#).unwrap();
        assert_eq!(
            k,
            PriorSpec::Kaiser {
                alpha: 2.0,
                bandwidth: 8.0
            }
        );
        let text = k.to_json();
        assert!(text.contains(r#""kind":"kaiser""#) && text.contains(r#""L":8.0"#));

        let c = PriorSpec::from_json(r#"{"kind":"comb","delta":0.5,"weights":[[0,1],[1,3]]}"#)
            .unwrap();
        let built = c.build(&spec()).unwrap();
        assert!((built.total_mass(&spec()).unwrap() - 1.0).abs() < 1e-15);

        let r = PriorSpec::from_json(r#"{"kind":"rect","delta":1.5}"#).unwrap();
        assert_eq!(r, PriorSpec::Rect { delta: 1.5, center: 0.0 });
    }

    #[test]
    fn json_rejects_garbage() {
        for bad in [
            "",
            "{}",
            r#"{"kind":"gauss","sigma":1}"#,
            r#"{"kind":"kaiser","alpha":2}"#,
            r#"{"kind":"rect","delta":1,"extra":3}"#,
        ] {
            assert!(PriorSpec::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn build_validates_parameters() {
        let degenerate = PriorSpec::Smeared {
            alpha: 2.0,
            bandwidth: 8.0,
            delta: 2.0,
        };
        let err = degenerate.build(&spec()).unwrap_err();
        assert!(err.to_string().contains("delta > 8*alpha/L"));
        assert!(PriorSpec::Rect { delta: -1.0, center: 0.0 }.build(&spec()).is_err());
        assert!(PriorSpec::Kaiser { alpha: f64::NAN, bandwidth: 1.0 }.build(&spec()).is_err());
    }

    #[test]
    fn every_kind_is_normalized_and_nonnegative() {
        let specs = [
            PriorSpec::Rect { delta: 0.7, center: 0.2 },
            PriorSpec::Comb {
                delta: 0.4,
                weights: vec![(-2, 1.0), (0, 4.0), (3, 0.5)],
            },
            PriorSpec::Kaiser { alpha: 2.0, bandwidth: 8.0 },
            PriorSpec::Smeared { alpha: 1.5, bandwidth: 24.0, delta: 1.0 },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for s in &specs {
            let prior = s.build(&spec()).unwrap();
            let mass = prior.total_mass(&spec()).unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "{} mass {mass}", s.kind());
            let (lo, hi) = prior.plot_range();
            let draws = if matches!(prior, Prior::Smeared(_)) { 500 } else { 10_000 };
            for _ in 0..draws {
                let phi = rng.gen_range(lo..hi);
                assert!(prior.density(phi, &spec()).unwrap() >= 0.0);
            }
            assert_eq!(prior.to_spec().kind(), s.kind());
        }
    }

    #[test]
    fn kaiser_band_is_clean() {
        let p = KaiserPrior::new(2.0, 8.0, &spec()).unwrap();
        let excess = bandwidth_excess(&p, 1e-11).unwrap();
        assert!(excess < 1e-6, "excess {excess:e}");
        // Inside the band the transform is far from zero.
        let inside = p.fourier_transform(2.0, &spec()).unwrap();
        assert!(inside > 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn spec_json_round_trips(alpha in 0.1f64..20.0, l in 0.1f64..100.0, delta in 0.01f64..10.0) {
            for s in [
                PriorSpec::Kaiser { alpha, bandwidth: l },
                PriorSpec::Smeared { alpha, bandwidth: l, delta },
                PriorSpec::Rect { delta, center: alpha - 5.0 },
            ] {
                prop_assert_eq!(PriorSpec::from_json(&s.to_json()).unwrap(), s);
            }
        }
    }
}
