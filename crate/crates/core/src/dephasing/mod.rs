//! Single-well pure dephasing: every vacuum mode is driven by a force
//! proportional to the atom number, so each number sector drags the field
//! into its own product of coherent states. Decoherence factors are the
//! overlaps of those field states.

mod continuum;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{hartree_fock_energy, ModeGrid};
use crate::specfun::pairwise_sum;

pub use continuum::{
    cavity_exponent, decoherence_integrand, decoherence_norm_cavity, decoherence_norm_integral, CavityVariant,
    ContinuumNorm,
};

/// Coherent amplitude and accumulated c-number phase of one driven mode:
/// the mode is in `e^{iγ}|α⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeDisplacement {
    pub alpha: Complex64,
    pub gamma: f64,
}

/// `(e^{−iωt} − 1)/ω`, written without cancellation and finite at `ω = 0`.
pub(crate) fn response(omega: f64, t: f64) -> Complex64 {
    let half = 0.5 * omega * t;
    Complex64::new(0.0, -t) * sinc(half) * Complex64::from_polar(1.0, -half)
}

/// `sin²(ωt/2)/ω²`.
pub(crate) fn norm_kernel(omega: f64, t: f64) -> f64 {
    let s = sinc(0.5 * omega * t);
    0.25 * t * t * s * s
}

/// `(ωt − sin ωt)/ω²`, with a Taylor branch where the difference cancels.
pub(crate) fn phase_kernel(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 0.5 {
        let x2 = x * x;
        // (x − sin x)/x² = x/6 − x³/120 + x⁵/5040 − …
        let series = x
            * (1.0 / 6.0
                - x2 * (1.0 / 120.0
                    - x2 * (1.0 / 5040.0 - x2 * (1.0 / 362_880.0 - x2 * (1.0 / 39_916_800.0 - x2 / 6_227_020_800.0)))));
        t * t * series
    } else {
        (x - x.sin()) / (omega * omega)
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Exact state of a mode with Hamiltonian `ω a†a + F a + F* a†` (per ħ)
/// started in the vacuum: `α = F*(e^{−iωt} − 1)/ω`,
/// `γ = |F|²(ωt − sin ωt)/ω²`.
pub fn forced_mode(forcing: Complex64, omega: f64, t: f64) -> ModeDisplacement {
    ModeDisplacement {
        alpha: forcing.conj() * response(omega, t),
        gamma: forcing.norm_sqr() * phase_kernel(omega, t),
    }
}

/// Displacement of a mode with real coupling `g` in the `n`-atom sector:
/// `α = n g (e^{−iωt} − 1)/(iω)` and `γ = n² g² (ωt − sin ωt)/ω²`.
///
/// This sign convention corresponds to the interaction `n(i g a − i g a†)`,
/// i.e. `forced_mode(i·n·g, ω, t)`.
pub fn displacement(n: u32, g: f64, omega: f64, t: f64) -> ModeDisplacement {
    forced_mode(Complex64::new(0.0, n as f64 * g), omega, t)
}

/// `O_mn = ⟨v_m|v_n⟩` for a vacuum field driven by atom-number sectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceFactor {
    pub value: Complex64,
}

impl DecoherenceFactor {
    pub fn norm(&self) -> f64 {
        self.value.norm()
    }
}

/// Log of `O_mn`:
/// `Σ_k |g_k|² [−2(m−n)² sin²(ω_k t/2)/ω_k² + i(n²−m²)(ω_k t − sin ω_k t)/ω_k²]`,
/// with `g_k` the effective coupling of each grid mode.
pub fn decoherence_exponent(m: u32, n: u32, grid: &ModeGrid, t: f64) -> Complex64 {
    if m == n {
        return Complex64::new(0.0, 0.0);
    }
    let dm = m as f64 - n as f64;
    let norm_terms: Vec<f64> = grid
        .modes()
        .iter()
        .map(|mode| mode.effective_coupling().norm_sqr() * norm_kernel(mode.omega, t))
        .collect();
    let phase_terms: Vec<f64> = grid
        .modes()
        .iter()
        .map(|mode| mode.effective_coupling().norm_sqr() * phase_kernel(mode.omega, t))
        .collect();
    let n2m2 = (n as f64).powi(2) - (m as f64).powi(2);
    Complex64::new(
        -2.0 * dm * dm * pairwise_sum(&norm_terms),
        n2m2 * pairwise_sum(&phase_terms),
    )
}

/// Decoherence factor on a discrete grid, exponentiated once from the summed
/// log so large grids do not underflow term by term.
pub fn decoherence_factor_discrete(m: u32, n: u32, grid: &ModeGrid, t: f64) -> DecoherenceFactor {
    if m == n {
        return DecoherenceFactor {
            value: Complex64::new(1.0, 0.0),
        };
    }
    DecoherenceFactor {
        value: decoherence_exponent(m, n, grid, t).exp(),
    }
}

/// One atom-number sector of the exact system ⊗ field state.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub n: u32,
    /// `c_n e^{−iε(n)t} e^{iΣ_k γ_nk}`.
    pub amplitude: Complex64,
    pub displacements: Vec<ModeDisplacement>,
}

/// `|Ψ(t)⟩ = Σ_n amplitude_n |n⟩ ⊗ Π_k |α_k^n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledState {
    pub t: f64,
    pub sectors: Vec<Sector>,
}

impl EntangledState {
    pub fn norm_sqr(&self) -> f64 {
        self.sectors.iter().map(|s| s.amplitude.norm_sqr()).sum()
    }

    /// `Π_k ⟨α_k^{(i)}|α_k^{(j)}⟩` between the field parts of sectors `i`, `j`
    /// (positions in `sectors`), without the kick phases.
    pub fn coherent_overlap(&self, i: usize, j: usize) -> Complex64 {
        coherent_product_overlap(&self.sectors[i].displacements, &self.sectors[j].displacements)
    }
}

/// `Π_k ⟨a_k|b_k⟩` of two coherent-state products, evaluated in log space.
pub fn coherent_product_overlap(a: &[ModeDisplacement], b: &[ModeDisplacement]) -> Complex64 {
    let terms: Vec<Complex64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| -0.5 * x.alpha.norm_sqr() - 0.5 * y.alpha.norm_sqr() + x.alpha.conj() * y.alpha)
        .collect();
    let re: Vec<f64> = terms.iter().map(|z| z.re).collect();
    let im: Vec<f64> = terms.iter().map(|z| z.im).collect();
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im)).exp()
}

/// Evolve `Σ c_n |n⟩ ⊗ |0⟩` to time `t`. Sector `n` runs over the indices of
/// `c`.
pub fn evolve_entangled_state(
    c: &[Complex64],
    grid: &ModeGrid,
    omega0: f64,
    kappa: f64,
    t: f64,
) -> Result<EntangledState> {
    let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "initial amplitudes must be normalized, Σ|c_n|² = {total}"
        )));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be non-negative, got {t}")));
    }
    let sectors = c
        .iter()
        .enumerate()
        .map(|(n, &cn)| {
            let n = n as u32;
            let displacements: Vec<ModeDisplacement> = grid
                .modes()
                .iter()
                .map(|mode| forced_mode(mode.effective_coupling() * n as f64, mode.omega, t))
                .collect();
            let kick: Vec<f64> = displacements.iter().map(|d| d.gamma).collect();
            let phase = pairwise_sum(&kick) - hartree_fock_energy(n, omega0, kappa) * t;
            Sector {
                n,
                amplitude: cn * Complex64::from_polar(1.0, phase),
                displacements,
            }
        })
        .collect();
    Ok(EntangledState { t, sectors })
}

/// Reduced density matrix of the atoms, indexed by sector position:
/// `ρ_mn = amplitude_m · conj(amplitude_n) · Π_k⟨α_k^n|α_k^m⟩`.
pub fn reduced_density_matrix(state: &EntangledState) -> CMatrix {
    let d = state.sectors.len();
    let mut rho = CMatrix::zeros(d, d);
    for i in 0..d {
        rho[(i, i)] = Complex64::new(state.sectors[i].amplitude.norm_sqr(), 0.0);
        for j in 0..i {
            let overlap = state.coherent_overlap(j, i);
            let value = state.sectors[i].amplitude * state.sectors[j].amplitude.conj() * overlap;
            rho[(i, j)] = value;
            rho[(j, i)] = value.conj();
        }
    }
    rho
}
