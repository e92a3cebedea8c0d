use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{form_factor_eta, local_couplings, PumpConfig, SpectralDensity, TrapGeometry, Units, Vec3};
use crate::error::{Error, Result};
use crate::specfun::gauss_legendre;

/// Resolution of a generated mode grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub k_min: f64,
    pub k_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
}

/// One grid mode. A mode stands for `weight·density` physical modes; the
/// couplings are per ħ, i.e. frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: f64,
    pub direction: Vec3,
    /// Quadrature measure `k² Δk dΩ`.
    pub weight: f64,
    /// `μ(k)` at this mode.
    pub density: f64,
    /// `ω_k = ck − ω₀`.
    pub omega: f64,
    /// Coefficient of `a_k` per atom number: `η_k/ħ` (single well) or
    /// `μ_k/ħ` (double well).
    pub coupling: Complex64,
    /// Coefficient of `a_k` per unit of the tunneling operator, `ζ_k/ħ`; zero
    /// for a single well.
    pub tunneling: Complex64,
}

impl Mode {
    fn scale(&self) -> f64 {
        (self.weight * self.density).sqrt()
    }

    /// Coupling of the single physical mode equivalent to this grid point.
    pub fn effective_coupling(&self) -> Complex64 {
        self.coupling * self.scale()
    }

    pub fn effective_tunneling(&self) -> Complex64 {
        self.tunneling * self.scale()
    }
}

/// A finite set of vacuum modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    modes: Vec<Mode>,
    c: f64,
    omega0: f64,
}

impl ModeGrid {
    pub fn from_modes(modes: Vec<Mode>, c: f64, omega0: f64) -> Result<Self> {
        if !(c > 0.0 && omega0.is_finite()) {
            return Err(Error::invalid("mode grid needs c > 0 and finite pump frequency"));
        }
        for (i, m) in modes.iter().enumerate() {
            if !(m.k > 0.0 && m.weight > 0.0 && m.density >= 0.0) {
                return Err(Error::invalid(format!(
                    "mode {i}: k and weight must be positive, density non-negative"
                )));
            }
            let expected = c * m.k - omega0;
            if (m.omega - expected).abs() > 1e-12 * expected.abs().max(omega0.abs()).max(1.0) {
                return Err(Error::invalid(format!(
                    "mode {i}: omega {} inconsistent with c·k − ω₀ = {expected}",
                    m.omega
                )));
            }
            let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
            if !finite(m.coupling) || !finite(m.tunneling) || !m.omega.is_finite() {
                return Err(Error::invalid(format!("mode {i}: non-finite coupling")));
            }
        }
        Ok(Self { modes, c, omega0 })
    }

    /// Grid of unit-weight modes given directly by `(ω, coupling, tunneling)`,
    /// in units with `c = 1` and the given pump frequency.
    pub fn explicit(omega0: f64, modes: &[(f64, Complex64, Complex64)]) -> Result<Self> {
        let modes = modes
            .iter()
            .map(|&(omega, coupling, tunneling)| Mode {
                k: omega + omega0,
                direction: [1.0, 0.0, 0.0],
                weight: 1.0,
                density: 1.0,
                omega,
                coupling,
                tunneling,
            })
            .collect();
        Self::from_modes(modes, 1.0, omega0)
    }

    /// Single-well grid of unit-weight modes with real couplings.
    pub fn single_well(omega0: f64, modes: &[(f64, f64)]) -> Result<Self> {
        let modes: Vec<_> = modes
            .iter()
            .map(|&(w, g)| (w, Complex64::new(g, 0.0), Complex64::new(0.0, 0.0)))
            .collect();
        Self::explicit(omega0, &modes)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// `Σ weight·density·f(mode)`.
    pub fn weighted_sum(&self, f: impl Fn(&Mode) -> f64) -> f64 {
        let terms: Vec<f64> = self.modes.iter().map(|m| m.weight * m.density * f(m)).collect();
        crate::specfun::pairwise_sum(&terms)
    }
}

/// Discretize the vacuum modes on a `(k, cosθ, φ)` product grid with the
/// polar axis along the pump wave vector (+x).
///
/// Radial nodes use the midpoint rule, `cosθ` a Gauss–Legendre rule and `φ`
/// equally spaced points, so `Σ weight·μ(k)·f(k)` approximates
/// `∫ μ(k) f(k) k² dΩ dk`.
pub fn build_mode_grid(
    pump: &PumpConfig,
    geometry: &TrapGeometry,
    density: &SpectralDensity,
    spec: GridSpec,
    units: Units,
) -> Result<ModeGrid> {
    if !(spec.k_min > 0.0 && spec.k_min < spec.k_max && spec.k_max.is_finite()) {
        return Err(Error::invalid(format!(
            "grid needs 0 < k_min < k_max, got [{}, {}]",
            spec.k_min, spec.k_max
        )));
    }
    if spec.n_radial == 0 || spec.n_angular == 0 {
        return Err(Error::invalid("grid counts must be at least 1"));
    }
    density.validate()?;
    let (lo, hi) = density.support();
    if spec.k_min < lo || spec.k_max > hi {
        return Err(Error::Range(format!(
            "density defined on [{lo}, {hi}] does not cover grid range [{}, {}]",
            spec.k_min, spec.k_max
        )));
    }

    let k0 = pump.pump_wavenumber(units);
    let k0_vec = [k0, 0.0, 0.0];
    let dk = (spec.k_max - spec.k_min) / spec.n_radial as f64;
    let polar = gauss_legendre(spec.n_angular);
    let dphi = 2.0 * PI / spec.n_angular as f64;

    let mut modes = Vec::with_capacity(spec.n_radial * spec.n_angular * spec.n_angular);
    for i in 0..spec.n_radial {
        let k = spec.k_min + (i as f64 + 0.5) * dk;
        let mu = density.eval(k)?;
        for &(cos_theta, w_theta) in &polar {
            let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
            for j in 0..spec.n_angular {
                let phi = j as f64 * dphi;
                let direction = [cos_theta, sin_theta * phi.cos(), sin_theta * phi.sin()];
                let k_vec = [k * direction[0], k * direction[1], k * direction[2]];
                let (coupling, tunneling) = match geometry {
                    TrapGeometry::SingleWell { .. } => (
                        form_factor_eta(geometry, pump, units, k_vec, k0_vec)?,
                        Complex64::new(0.0, 0.0),
                    ),
                    TrapGeometry::DoubleWell { .. } => local_couplings(geometry, pump, units, k_vec, k0_vec)?,
                };
                modes.push(Mode {
                    k,
                    direction,
                    weight: k * k * dk * w_theta * dphi,
                    density: mu,
                    omega: units.c * k - pump.pump_frequency,
                    coupling: coupling / units.hbar,
                    tunneling: tunneling / units.hbar,
                });
            }
        }
    }
    ModeGrid::from_modes(modes, units.c, pump.pump_frequency)
}
