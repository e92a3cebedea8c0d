use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Effective density of vacuum modes `μ(k)` seen by the condensate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectralDensity {
    /// `μ(k) = 1`.
    FreeSpace,
    /// `μ(k) = scale / k³`.
    CavityInverseCubic { scale: f64 },
    /// Piecewise-linear interpolation of `(k, μ)` samples.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl SpectralDensity {
    pub fn validate(&self) -> Result<()> {
        match self {
            SpectralDensity::FreeSpace => Ok(()),
            SpectralDensity::CavityInverseCubic { scale } => {
                if *scale > 0.0 && scale.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(format!(
                        "cavity density scale must be positive, got {scale}"
                    )))
                }
            }
            SpectralDensity::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::invalid("tabulated density needs at least two samples"));
                }
                for &(k, mu) in samples {
                    if !(k > 0.0 && k.is_finite()) {
                        return Err(Error::invalid(format!("tabulated k must be positive, got {k}")));
                    }
                    if !(mu >= 0.0 && mu.is_finite()) {
                        return Err(Error::invalid(format!(
                            "tabulated density must be non-negative, got {mu} at k = {k}"
                        )));
                    }
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::invalid("tabulated samples must be strictly ascending in k"));
                }
                Ok(())
            }
        }
    }

    /// Range of `k` on which the density is defined.
    pub fn support(&self) -> (f64, f64) {
        match self {
            SpectralDensity::Tabulated { samples } => (
                samples.first().map_or(0.0, |s| s.0),
                samples.last().map_or(0.0, |s| s.0),
            ),
            _ => (0.0, f64::INFINITY),
        }
    }

    /// True when `∫ μ(k) dk/k²`-type tails converge, i.e. the large-`k` mean of
    /// the decoherence integrand is integrable.
    pub fn has_convergent_tail(&self) -> bool {
        matches!(self, SpectralDensity::CavityInverseCubic { .. })
    }

    pub fn eval(&self, k: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(Error::invalid(format!("spectral density needs k > 0, got {k}")));
        }
        match self {
            SpectralDensity::FreeSpace => Ok(1.0),
            SpectralDensity::CavityInverseCubic { scale } => Ok(scale / (k * k * k)),
            SpectralDensity::Tabulated { samples } => interpolate(samples, k),
        }
    }

    /// `μ(k)·k³`, finite down to `k = 0` for the cavity form.
    pub fn k3_weight(&self, k: f64) -> Result<f64> {
        match self {
            SpectralDensity::CavityInverseCubic { scale } if k >= 0.0 => Ok(*scale),
            SpectralDensity::FreeSpace if k >= 0.0 => Ok(k * k * k),
            _ => Ok(self.eval(k)? * k * k * k),
        }
    }
}

fn interpolate(samples: &[(f64, f64)], k: f64) -> Result<f64> {
    let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
    if k < lo || k > hi {
        return Err(Error::Range(format!("k = {k} outside tabulated range [{lo}, {hi}]")));
    }
    let idx = samples.partition_point(|s| s.0 <= k);
    if idx == samples.len() {
        return Ok(samples[samples.len() - 1].1);
    }
    let (k0, m0) = samples[idx - 1];
    let (k1, m1) = samples[idx];
    Ok(m0 + (m1 - m0) * (k - k0) / (k1 - k0))
}
