//! Continuum limit of the norm of the decoherence factor.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::norm_kernel;
use crate::error::{Error, Result};
use crate::model::{PumpConfig, SpectralDensity, Units};
use crate::specfun::{oscillation_panel_width, sine_integral, Integrator, QuadratureResult};

/// Which form of the cavity closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CavityVariant {
    /// `πt − 2 + 2cos(ω₀t)/ω₀ + 2t Si(ω₀t)`, as usually quoted. Not equal to
    /// zero at `t = 0` unless `ω₀ = 1`.
    Verbatim,
    /// `πt − 2/ω₀ + 2cos(ω₀t)/ω₀ + 2t Si(ω₀t)`, the exact value of the
    /// integral for `μ = ξ/k³`.
    #[default]
    Corrected,
}

/// `|O_mn(t)|` for the cavity density `μ(k) = ξ/k³`, given the rate
/// `λ_mn` (see [`crate::model::lambda_mn`]).
pub fn decoherence_norm_cavity(lambda: f64, omega0: f64, t: f64, variant: CavityVariant) -> Result<f64> {
    Ok((-cavity_exponent(lambda, omega0, t, variant)?).exp())
}

/// `−ln|O_mn(t)|` for the cavity density.
pub fn cavity_exponent(lambda: f64, omega0: f64, t: f64, variant: CavityVariant) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "lambda must be finite and non-negative, got {lambda}"
        )));
    }
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(Error::invalid(format!("omega0 must be positive, got {omega0}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be non-negative, got {t}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let x = omega0 * t;
    let si = sine_integral(x)?;
    let bracket = match variant {
        CavityVariant::Verbatim => PI * t - 2.0 + 2.0 * x.cos() / omega0 + 2.0 * si * t,
        CavityVariant::Corrected => {
            let s = (0.5 * x).sin();
            PI * t + 2.0 * si * t - 4.0 * s * s / omega0
        }
    };
    Ok(lambda * bracket)
}

/// `sin²((t/2)(ck − ω₀)) μ(k) k³ / (ck − ω₀)²`, the integrand of the
/// continuum exponent.
pub fn decoherence_integrand(density: &SpectralDensity, c: f64, omega0: f64, t: f64, k: f64) -> Result<f64> {
    Ok(norm_kernel(c * k - omega0, t) * density.k3_weight(k)?)
}

/// Continuum norm together with the quadrature that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumNorm {
    /// `|O_mn(t)|`; exactly 0 when the integral diverged.
    pub norm: f64,
    /// `−ln|O_mn(t)|`, or the last partial value when diverged.
    pub exponent: f64,
    pub quadrature: QuadratureResult,
    /// For densities without a convergent tail: `(cutoff, exponent)` after
    /// each cutoff of the sequence `k_max·{10⁻², 10⁻¹, 1}`.
    pub cutoff_exponents: Vec<(f64, f64)>,
}

/// `|O_mn(t)| = exp[−(m−n)² P ∫₀^∞ sin²((t/2)(ck−ω₀)) μ(k)k³/(ck−ω₀)² dk]`
/// with `P` from [`PumpConfig::continuum_prefactor`].
///
/// The integral is computed on `[0, k_max]`. For the cavity density the
/// remainder beyond `k_max` is added through its mean value, so `k_max` only
/// needs to be a few orders of magnitude above `ω₀/c`. The free-space density
/// is integrated up to `k_max/100`, `k_max/10`, `k_max` and reported as
/// diverged with `norm = 0` when the increments keep growing. Tabulated
/// densities are integrated over their table and `k_max` must not exceed it.
#[allow(clippy::too_many_arguments)]
pub fn decoherence_norm_integral(
    m: u32,
    n: u32,
    pump: &PumpConfig,
    density: &SpectralDensity,
    units: Units,
    t: f64,
    tol: f64,
    k_max: f64,
) -> Result<ContinuumNorm> {
    density.validate()?;
    units.validate()?;
    let omega0 = pump.pump_frequency;
    let c = units.c;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be non-negative, got {t}")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if !(k_max > omega0 / c && k_max.is_finite()) {
        return Err(Error::invalid(format!(
            "k_max = {k_max} must exceed ω₀/c = {}",
            omega0 / c
        )));
    }
    let dm = m as f64 - n as f64;
    let scale = dm * dm * pump.continuum_prefactor(units);
    let trivial = |cutoffs: Vec<(f64, f64)>| ContinuumNorm {
        norm: 1.0,
        exponent: 0.0,
        quadrature: QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
            diverged: false,
        },
        cutoff_exponents: cutoffs,
    };
    if t == 0.0 || scale == 0.0 {
        return Ok(trivial(Vec::new()));
    }

    let (lower, upper) = density.support();
    if k_max > upper {
        return Err(Error::Range(format!(
            "k_max = {k_max} exceeds the tabulated range ending at {upper}"
        )));
    }
    let a = lower;
    let defaults = Integrator::default();
    let width = oscillation_panel_width(t * c).max((k_max - a) / (defaults.max_initial_panels as f64 / 2.0));
    let integrator = defaults.with_panel_width(width);
    let kernel = |k: f64| decoherence_integrand(density, c, omega0, t, k).unwrap_or(f64::NAN);

    if matches!(density, SpectralDensity::FreeSpace) {
        let cutoffs = [k_max / 100.0, k_max / 10.0, k_max];
        let pieces = integrator.cutoff_increments(kernel, a, &cutoffs, tol)?;
        let quadrature = integrator.combine_increments(&pieces);
        let mut running = 0.0;
        let cutoff_exponents = cutoffs
            .iter()
            .zip(&pieces)
            .map(|(&k, p)| {
                running += p.value;
                (k, scale * running)
            })
            .collect();
        let exponent = scale * quadrature.value;
        let norm = if quadrature.diverged { 0.0 } else { (-exponent).exp() };
        return Ok(ContinuumNorm {
            norm,
            exponent,
            quadrature,
            cutoff_exponents,
        });
    }

    let mut quadrature = integrator.integrate(kernel, a, k_max, tol)?;
    if density.has_convergent_tail() {
        let tail_kernel = |u: f64| {
            if u == 0.0 {
                return 0.5 * density.k3_weight(f64::INFINITY).unwrap_or(f64::NAN) * k_max / (c * k_max).powi(2);
            }
            let k = k_max / u;
            let d = c * k_max - omega0 * u;
            0.5 * density.k3_weight(k).unwrap_or(f64::NAN) * k_max / (d * d)
        };
        let tail = Integrator::default().integrate(tail_kernel, 0.0, 1.0, tol)?;
        let edge = density.k3_weight(k_max)? / (c * k_max - omega0).powi(2);
        quadrature.value += tail.value;
        quadrature.abs_error_estimate += tail.abs_error_estimate + 0.5 * edge / (t * c);
        quadrature.evaluations += tail.evaluations;
    }
    let exponent = scale * quadrature.value;
    Ok(ContinuumNorm {
        norm: (-exponent).exp(),
        exponent,
        quadrature,
        cutoff_exponents: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::lambda_mn;

    fn pump(omega0: f64) -> PumpConfig {
        PumpConfig::new(0.8, 40.0, omega0)
    }

    #[test]
    fn corrected_form_starts_at_one() {
        for omega0 in [0.5, 1.0, 2.0, 7.0] {
            assert_eq!(
                decoherence_norm_cavity(0.3, omega0, 0.0, CavityVariant::Corrected).unwrap(),
                1.0
            );
        }
    }

    #[test]
    fn verbatim_form_misses_one_off_unit_frequency() {
        let at_one = decoherence_norm_cavity(0.3, 1.0, 0.0, CavityVariant::Verbatim).unwrap();
        assert!((at_one - 1.0).abs() < 1e-15);
        let at_two = decoherence_norm_cavity(0.3, 2.0, 0.0, CavityVariant::Verbatim).unwrap();
        assert!((at_two - 0.3f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn zero_rate_is_coherent() {
        for t in [0.0, 1.0, 100.0] {
            assert_eq!(
                decoherence_norm_cavity(0.0, 1.3, t, CavityVariant::Corrected).unwrap(),
                1.0
            );
        }
    }

    #[test]
    fn long_time_rate_is_two_pi_lambda() {
        let lambda = 1e-3;
        let (t1, t2) = (500.0, 1000.0);
        let e1 = cavity_exponent(lambda, 1.0, t1, CavityVariant::Corrected).unwrap();
        let e2 = cavity_exponent(lambda, 1.0, t2, CavityVariant::Corrected).unwrap();
        let slope = (e2 - e1) / (t2 - t1);
        assert!((slope / (2.0 * PI * lambda) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(cavity_exponent(-1.0, 1.0, 1.0, CavityVariant::Corrected).is_err());
        assert!(cavity_exponent(1.0, 0.0, 1.0, CavityVariant::Corrected).is_err());
        assert!(cavity_exponent(1.0, 1.0, -1.0, CavityVariant::Corrected).is_err());
        let p = pump(1.0);
        let d = SpectralDensity::CavityInverseCubic { scale: 1.0 };
        assert!(decoherence_norm_integral(0, 1, &p, &d, Units::default(), 1.0, 1e-10, 0.5).is_err());
        assert!(decoherence_norm_integral(0, 1, &p, &d, Units::default(), 1.0, 0.0, 10.0).is_err());
    }

    #[test]
    fn integral_at_time_zero_is_one() {
        let d = SpectralDensity::CavityInverseCubic { scale: 2.0 };
        let r = decoherence_norm_integral(0, 1, &pump(1.0), &d, Units::default(), 0.0, 1e-10, 1e4).unwrap();
        assert_eq!(r.norm, 1.0);
    }

    #[test]
    fn cavity_quadrature_matches_closed_form() {
        let xi = 3.0;
        let d = SpectralDensity::CavityInverseCubic { scale: xi };
        for (omega0, c) in [(1.0, 1.0), (2.0, 0.5)] {
            let p = pump(omega0);
            let units = Units { hbar: 1.0, c };
            let lambda = lambda_mn(&p, xi, 0, 2, 1.0);
            for t in [1.0, 5.0] {
                let t = t / omega0;
                let q = decoherence_norm_integral(0, 2, &p, &d, units, t, 1e-11, 1e4 * omega0 / c).unwrap();
                let closed = cavity_exponent(lambda, omega0, t, CavityVariant::Corrected).unwrap();
                assert!(
                    (q.exponent / closed - 1.0).abs() < 1e-7,
                    "ω₀ = {omega0}, t = {t}: {} vs {closed}",
                    q.exponent
                );
            }
        }
    }

    #[test]
    fn free_space_diverges() {
        let r = decoherence_norm_integral(
            0,
            1,
            &pump(1.0),
            &SpectralDensity::FreeSpace,
            Units::default(),
            1.0,
            1e-10,
            1e4,
        )
        .unwrap();
        assert!(r.quadrature.diverged);
        assert_eq!(r.norm, 0.0);
        assert_eq!(r.cutoff_exponents.len(), 3);
        assert!(r.cutoff_exponents.windows(2).all(|w| w[1].1 > w[0].1));
    }

    #[test]
    fn tabulated_density_is_bounded_by_its_table() {
        let samples: Vec<(f64, f64)> = (1..=50)
            .map(|i| (0.2 * i as f64, 1.0 / (0.2 * i as f64).powi(3)))
            .collect();
        let d = SpectralDensity::Tabulated { samples };
        let p = pump(1.0);
        assert!(matches!(
            decoherence_norm_integral(0, 1, &p, &d, Units::default(), 1.0, 1e-10, 20.0),
            Err(Error::Range(_))
        ));
        let r = decoherence_norm_integral(0, 1, &p, &d, Units::default(), 1.0, 1e-10, 10.0).unwrap();
        assert!(r.norm > 0.0 && r.norm < 1.0);
    }
}
