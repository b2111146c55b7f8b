use crate::error::{Error, Result};

use super::kaiser::check_positive;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectPrior {
    delta: f64,
    center: f64,
}

impl RectPrior {
    pub fn new(delta: f64, center: f64) -> Result<Self> {
        check_positive("delta", delta)?;
        if !center.is_finite() {
            return Err(Error::InvalidParameter(format!("center must be finite, got {center}")));
        }
        Ok(Self { delta, center })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - 0.5 * self.delta, self.center + 0.5 * self.delta)
    }

    pub fn density(&self, phi: f64) -> f64 {
        let (lo, hi) = self.support();
        if phi >= lo && phi < hi {
            1.0 / self.delta
        } else {
            0.0
        }
    }
}

/// Weighted sum of flat cells `[lδ − δ/2, lδ + δ/2)` with `δ Σ p_l = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombPrior {
    delta: f64,
    /// Sorted by cell index, no duplicates.
    weights: Vec<(i64, f64)>,
}

impl CombPrior {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn weights(&self) -> &[(i64, f64)] {
        &self.weights
    }

    pub fn cell(&self, phi: f64) -> i64 {
        (phi / self.delta + 0.5).floor() as i64
    }

    pub fn density(&self, phi: f64) -> f64 {
        let l = self.cell(phi);
        self.weights
            .binary_search_by_key(&l, |&(idx, _)| idx)
            .map(|i| self.weights[i].1)
            .unwrap_or(0.0)
    }

    /// `δ Σ p_l`, exactly as stored.
    pub fn total_mass(&self) -> f64 {
        self.delta * self.weights.iter().map(|&(_, p)| p).sum::<f64>()
    }

    pub fn support(&self) -> (f64, f64) {
        let first = self.weights.first().map(|w| w.0).unwrap_or(0) as f64;
        let last = self.weights.last().map(|w| w.0).unwrap_or(0) as f64;
        ((first - 0.5) * self.delta, (last + 0.5) * self.delta)
    }
}

/// Rescales `samples` so the comb integrates to one. Repeated cell indices
/// are summed.
pub fn comb_from_samples(delta: f64, samples: &[(i64, f64)]) -> Result<CombPrior> {
    check_positive("delta", delta)?;
    if let Some(&(l, p)) = samples.iter().find(|(_, p)| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "comb weight for cell {l} must be finite and nonnegative, got {p}"
        )));
    }
    let mut weights: Vec<(i64, f64)> = samples.iter().copied().filter(|&(_, p)| p > 0.0).collect();
    weights.sort_by_key(|&(l, _)| l);
    weights.dedup_by(|next, kept| {
        if next.0 == kept.0 {
            kept.1 += next.1;
            true
        } else {
            false
        }
    });
    let sum: f64 = weights.iter().map(|&(_, p)| p).sum();
    if weights.is_empty() || !(sum.is_finite() && sum > 0.0) {
        return Err(Error::InvalidParameter(
            "comb prior needs at least one positive weight".into(),
        ));
    }
    let scale = 1.0 / (delta * sum);
    for w in &mut weights {
        w.1 *= scale;
    }
    Ok(CombPrior { delta, weights })
}
