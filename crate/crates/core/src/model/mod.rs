//! Physical parameters, spectral densities, trap geometry and the coupling
//! constants derived from them.
//!
//! Three unrelated constants share one symbol in the usual notation; here
//! they are `g_aa` (contact interaction strength), `ξ_c` (cavity density
//! scale, see [`SpectralDensity::CavityInverseCubic`]) and `ξ_b` (barrier
//! parameter `√(2MV₀)`).

mod density;
mod geometry;
mod grid;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use density::SpectralDensity;
pub use geometry::{mode_function, ModeFunction, TrapGeometry, Vec3};
pub use grid::{build_mode_grid, GridSpec, Mode, ModeGrid};

/// Values of ħ and c. Natural units by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default = "unit")]
    pub hbar: f64,
    #[serde(default = "unit")]
    pub c: f64,
}

fn unit() -> f64 {
    1.0
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }
}

impl Units {
    pub fn validate(&self) -> Result<()> {
        if self.hbar > 0.0 && self.c > 0.0 && self.hbar.is_finite() && self.c.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "units must be positive, got hbar = {}, c = {}",
                self.hbar, self.c
            )))
        }
    }
}

/// Classical pump laser. The decoherence rate is controlled through
/// `rabi_frequency` (∝ √intensity) and `pump_frequency`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub rabi_frequency: f64,
    pub detuning: f64,
    pub pump_frequency: f64,
    #[serde(default = "unit")]
    pub dipole: f64,
    /// Overall scale of `g_k`; see [`continuum_coupling_scale`] for the value
    /// that makes mode sums agree with the continuum decoherence integral.
    #[serde(default = "unit")]
    pub coupling_scale: f64,
}

impl PumpConfig {
    pub fn new(rabi_frequency: f64, detuning: f64, pump_frequency: f64) -> Self {
        Self {
            rabi_frequency,
            detuning,
            pump_frequency,
            dipole: 1.0,
            coupling_scale: 1.0,
        }
    }

    /// Errors on hard violations; returns a warning when the pump is not far
    /// off resonance (`|Δ| < R`).
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.rabi_frequency > 0.0 && self.rabi_frequency.is_finite()) {
            return Err(Error::invalid(format!(
                "rabi_frequency must be positive, got {}",
                self.rabi_frequency
            )));
        }
        if self.detuning == 0.0 || !self.detuning.is_finite() {
            return Err(Error::invalid(format!(
                "detuning must be finite and non-zero, got {}",
                self.detuning
            )));
        }
        if !(self.pump_frequency > 0.0 && self.pump_frequency.is_finite()) {
            return Err(Error::invalid(format!(
                "pump_frequency must be positive, got {}",
                self.pump_frequency
            )));
        }
        if !(self.dipole > 0.0 && self.dipole.is_finite()) {
            return Err(Error::invalid(format!("dipole must be positive, got {}", self.dipole)));
        }
        if !(self.coupling_scale > 0.0 && self.coupling_scale.is_finite()) {
            return Err(Error::invalid(format!(
                "coupling_scale must be positive, got {}",
                self.coupling_scale
            )));
        }
        let mut warnings = Vec::new();
        if self.detuning.abs() < self.rabi_frequency {
            warnings.push(format!(
                "|detuning| = {} is below the Rabi frequency {}; far-off-resonance regime not satisfied",
                self.detuning.abs(),
                self.rabi_frequency
            ));
        }
        Ok(warnings)
    }

    pub fn pump_wavenumber(&self, units: Units) -> f64 {
        self.pump_frequency / units.c
    }

    /// `πR²cd² / (8(2π)³ħΔ²)`, the prefactor of the continuum decoherence
    /// exponent.
    pub fn continuum_prefactor(&self, units: Units) -> f64 {
        PI * self.rabi_frequency.powi(2) * units.c * self.dipole.powi(2)
            / (8.0 * (2.0 * PI).powi(3) * units.hbar * self.detuning.powi(2))
    }
}

/// The `coupling_scale` for which `Σ_k` over a [`ModeGrid`] reproduces the
/// continuum prefactor [`PumpConfig::continuum_prefactor`]:
/// `g₀ = 1/√(128π³ħ)`.
pub fn continuum_coupling_scale(units: Units) -> f64 {
    1.0 / (128.0 * PI.powi(3) * units.hbar).sqrt()
}

/// `g_k = g₀·d·|R|·√(ck) / (2|Δ|)`.
pub fn coupling_g(pump: &PumpConfig, units: Units, k: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!("coupling_g needs k > 0, got {k}")));
    }
    Ok(
        pump.coupling_scale * pump.dipole * pump.rabi_frequency.abs() * (units.c * k).sqrt()
            / (2.0 * pump.detuning.abs()),
    )
}

fn norm(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// `η_k = ħ g_k ∫ |φ₀|² e^{i(k−k₀)·r} d³r = ħ g_k exp(−σ²|k−k₀|²/4)`.
pub fn form_factor_eta(
    geometry: &TrapGeometry,
    pump: &PumpConfig,
    units: Units,
    k_vec: Vec3,
    k0_vec: Vec3,
) -> Result<Complex64> {
    let TrapGeometry::SingleWell { width, .. } = *geometry else {
        return Err(Error::invalid("form_factor_eta needs a single-well geometry"));
    };
    let g = coupling_g(pump, units, norm(k_vec))?;
    let q = norm(sub(k_vec, k0_vec));
    Ok(Complex64::new(
        units.hbar * g * (-0.25 * width * width * q * q).exp(),
        0.0,
    ))
}

/// Number coupling `μ_k` and tunneling coupling `ζ_k` of the double well.
///
/// `μ_k = ħg_k exp(−σ²q²/4) e^{−i q_x a/2}` (left-well density) and
/// `ζ_k = ħg_k exp(−a²/(4σ²)) exp(−σ²q²/4)` with `q = k − k₀`.
pub fn local_couplings(
    geometry: &TrapGeometry,
    pump: &PumpConfig,
    units: Units,
    k_vec: Vec3,
    k0_vec: Vec3,
) -> Result<(Complex64, Complex64)> {
    let TrapGeometry::DoubleWell {
        separation,
        local_width,
        ..
    } = *geometry
    else {
        return Err(Error::invalid("local_couplings needs a double-well geometry"));
    };
    let g = coupling_g(pump, units, norm(k_vec))?;
    let q = sub(k_vec, k0_vec);
    let q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
    let envelope = units.hbar * g * (-0.25 * local_width * local_width * q2).exp();
    let mu = Complex64::from_polar(envelope, -0.5 * q[0] * separation);
    let overlap = (-separation * separation / (4.0 * local_width * local_width)).exp();
    Ok((mu, Complex64::new(envelope * overlap, 0.0)))
}

/// Hartree–Fock energy `ε(n) = n(Ω₀ − κ) + κn²`.
pub fn hartree_fock_energy(n: u32, omega0: f64, kappa: f64) -> f64 {
    let n = n as f64;
    n * (omega0 - kappa) + kappa * n * n
}

/// `κ = g_aa ∫ |φ₀|⁴ d³r = g_aa (2πσ²)^(−3/2)` for the Gaussian ground mode.
pub fn kappa_from_trap(geometry: &TrapGeometry, g_aa: f64) -> Result<f64> {
    let TrapGeometry::SingleWell { width, .. } = *geometry else {
        return Err(Error::invalid("kappa_from_trap needs a single-well geometry"));
    };
    Ok(g_aa * (2.0 * PI * width * width).powf(-1.5))
}

/// Cavity decoherence rate `λ_mn = ξ_c (m−n)² R² d² / (256 π² ħ Δ²)`.
pub fn lambda_mn(pump: &PumpConfig, density_scale: f64, m: u32, n: u32, hbar: f64) -> f64 {
    let diff = m as f64 - n as f64;
    density_scale * diff * diff * pump.rabi_frequency.powi(2) * pump.dipole.powi(2)
        / (256.0 * PI * PI * hbar * pump.detuning.powi(2))
}

/// Tunneling splitting `δ = C_δ e^{−2ξ_b a} / (M ξ_b ħ)`, `ξ_b = √(2MV₀)`.
pub fn splitting_delta(geometry: &TrapGeometry, hbar: f64) -> Result<f64> {
    let TrapGeometry::DoubleWell {
        separation,
        barrier_height,
        mass,
        splitting_scale,
        ..
    } = *geometry
    else {
        return Err(Error::invalid("splitting_delta needs a double-well geometry"));
    };
    let xi_b = (2.0 * mass * barrier_height).sqrt();
    Ok(splitting_scale * (-2.0 * xi_b * separation).exp() / (mass * xi_b * hbar))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pump() -> PumpConfig {
        PumpConfig::new(1.0, 100.0, 1.0)
    }

    #[test]
    fn coupling_g_scaling() {
        let u = Units::default();
        let base = coupling_g(&pump(), u, 1.0).unwrap();
        assert!((base - 0.005).abs() < 1e-16);
        let mut p2 = pump();
        p2.rabi_frequency = 2.0;
        assert!((coupling_g(&p2, u, 1.0).unwrap() - 2.0 * base).abs() < 1e-16);
        assert!((coupling_g(&pump(), u, 4.0).unwrap() - 2.0 * base).abs() < 1e-16);
        assert!(coupling_g(&pump(), u, 0.0).is_err());
        assert!(coupling_g(&pump(), u, -1.0).is_err());
    }

    #[test]
    fn pump_validation() {
        assert!(PumpConfig::new(1.0, 0.0, 1.0).validate().is_err());
        assert!(PumpConfig::new(1.0, 10.0, 0.0).validate().is_err());
        assert_eq!(PumpConfig::new(1.0, 0.5, 1.0).validate().unwrap().len(), 1);
        assert!(pump().validate().unwrap().is_empty());
    }

    #[test]
    fn eta_limits() {
        let g = TrapGeometry::SingleWell {
            width: 0.7,
            trap_frequency: 1.0,
        };
        let u = Units { hbar: 2.0, c: 1.0 };
        let k0 = [1.0, 0.0, 0.0];
        let gk = coupling_g(&pump(), u, 1.0).unwrap();
        let same = form_factor_eta(&g, &pump(), u, k0, k0).unwrap();
        assert_eq!(same, Complex64::new(2.0 * gk, 0.0));
        // σ|k − k₀| = 2
        let k = [0.0, 2.0 / 0.7, 0.0];
        let gk = coupling_g(&pump(), u, 2.0 / 0.7).unwrap();
        let eta = form_factor_eta(&g, &pump(), u, k, [0.0; 3]).unwrap();
        assert!((eta.re - 2.0 * gk * (-1.0f64).exp()).abs() < 1e-15);
        let far = form_factor_eta(&g, &pump(), u, [100.0, 0.0, 0.0], k0).unwrap();
        assert!(far.norm() < 1e-300);
        let dw = TrapGeometry::DoubleWell {
            separation: 4.0,
            local_width: 1.0,
            barrier_height: 1.0,
            mass: 1.0,
            splitting_scale: 1.0,
        };
        assert!(form_factor_eta(&dw, &pump(), u, k0, k0).is_err());
        assert!(local_couplings(&g, &pump(), u, k0, k0).is_err());
    }

    #[test]
    fn local_coupling_limits() {
        let u = Units::default();
        let geometry = |a: f64| TrapGeometry::DoubleWell {
            separation: a,
            local_width: 1.0,
            barrier_height: 1.0,
            mass: 1.0,
            splitting_scale: 1.0,
        };
        let k0 = [1.0, 0.0, 0.0];
        let gk = coupling_g(&pump(), u, 1.0).unwrap();
        let (mu, zeta) = local_couplings(&geometry(3.0), &pump(), u, k0, k0).unwrap();
        assert!((mu - Complex64::new(gk, 0.0)).norm() < 1e-16);
        assert!((zeta.re - gk * (-2.25f64).exp()).abs() < 1e-16);

        let k = [0.3, 1.2, -0.5];
        let (mu, zeta) = local_couplings(&geometry(8.0), &pump(), u, k, k0).unwrap();
        assert!(zeta.norm() / mu.norm() <= (-16.0f64).exp() * (1.0 + 1e-12));

        let (mu, zeta) = local_couplings(&geometry(0.0), &pump(), u, k, k0).unwrap();
        assert!((mu - zeta).norm() < 1e-18);
    }

    #[test]
    fn hartree_fock() {
        assert_eq!(hartree_fock_energy(0, 2.0, 0.1), 0.0);
        assert!((hartree_fock_energy(1, 2.0, 0.1) - 2.0).abs() < 1e-15);
        assert!((hartree_fock_energy(3, 2.0, 0.1) - 6.6).abs() < 1e-12);
        for n in 1..20 {
            let second = hartree_fock_energy(n + 1, 1.3, 0.25) - 2.0 * hartree_fock_energy(n, 1.3, 0.25)
                + hartree_fock_energy(n - 1, 1.3, 0.25);
            assert!((second - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_scaling() {
        let g = |s: f64| TrapGeometry::SingleWell {
            width: s,
            trap_frequency: 1.0,
        };
        assert_eq!(kappa_from_trap(&g(1.0), 0.0).unwrap(), 0.0);
        let k1 = kappa_from_trap(&g(1.0), 1.0).unwrap();
        let k2 = kappa_from_trap(&g(2.0), 1.0).unwrap();
        assert!((k1 / k2 - 8.0).abs() < 1e-12);
        assert!((k1 - (2.0 * PI).powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn lambda_values() {
        let p = PumpConfig::new(1.0, 10.0, 1.0);
        assert_eq!(lambda_mn(&p, 1.0, 3, 3, 1.0), 0.0);
        let l10 = lambda_mn(&p, 1.0, 1, 0, 1.0);
        // independent path: through the continuum prefactor, λ = ξ_c P / (4c)
        let via_prefactor = 1.0 * p.continuum_prefactor(Units::default()) / 4.0;
        assert!((l10 - via_prefactor).abs() < 1e-20);
        assert!((l10 - 1.0 / (25_600.0 * PI * PI)).abs() < 1e-20);
        assert!((lambda_mn(&p, 1.0, 2, 0, 1.0) - 4.0 * l10).abs() < 1e-20);
        assert_eq!(lambda_mn(&p, 1.0, 0, 1, 1.0), l10);
    }

    #[test]
    fn splitting() {
        let g = |a: f64, v0: f64| TrapGeometry::DoubleWell {
            separation: a,
            local_width: 0.5,
            barrier_height: v0,
            mass: 1.0,
            splitting_scale: 1.0,
        };
        let d = splitting_delta(&g(5.0, 0.5), 1.0).unwrap();
        assert!((d - (-10.0f64).exp()).abs() < 1e-18);
        let halved = splitting_delta(&g(5.0 + 2f64.ln() / 2.0, 0.5), 1.0).unwrap();
        assert!((halved - d / 2.0).abs() < 1e-18);
        assert!(splitting_delta(&g(5.0, 0.8), 1.0).unwrap() < d);
        assert!(splitting_delta(&g(6.0, 0.5), 1.0).unwrap() < d);
    }

    #[test]
    fn calibrated_scale() {
        let u = Units::default();
        let g0 = continuum_coupling_scale(u);
        assert!((2.0 * PI * g0 * g0 - 1.0 / (64.0 * PI.powi(3)) * PI).abs() < 1e-18);
    }
}
