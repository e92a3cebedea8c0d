//! Observables of the closed-form modules computed the brute-force way.

use num_complex::Complex64;

use super::{
    build_hamiltonian_single, build_sector_double, build_sector_single, evolve_series, partial_trace_field,
    register_overlap, DenseState, EvolveOptions, TruncationSpec,
};
use crate::doublewell::truncated_poisson_weights;
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::model::ModeGrid;

fn one(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `⟨a_k⟩(t)` for every mode of `grid` in the `n`-atom sector started from
/// the vacuum. Indexed `[time][mode]`.
pub fn oracle_displacements(
    grid: &ModeGrid,
    n: u32,
    times: &[f64],
    max_photons: u32,
    options: &EvolveOptions,
) -> Result<Vec<Vec<Complex64>>> {
    let trunc = TruncationSpec::new(n.max(1), max_photons, grid.len());
    let model = build_sector_single(grid, 0.0, 0.0, n, &trunc)?;
    let psi0 = DenseState::with_vacuum(model.basis.clone(), &[one(1.0)])?;
    let states = evolve_series(&model.hamiltonian, &psi0, times, options)?;
    Ok(states
        .iter()
        .map(|psi| (0..grid.len()).map(|k| psi.field_expectation(k)).collect())
        .collect())
}

/// `⟨v_m|v_n⟩` for each `(m, n)` of `pairs` from separately evolved field
/// states. Indexed `[time][pair]`.
pub fn oracle_decoherence_factors(
    grid: &ModeGrid,
    pairs: &[(u32, u32)],
    times: &[f64],
    max_photons: u32,
    options: &EvolveOptions,
) -> Result<Vec<Vec<Complex64>>> {
    let mut sectors: Vec<u32> = pairs.iter().flat_map(|&(m, n)| [m, n]).collect();
    sectors.sort_unstable();
    sectors.dedup();
    let max_atoms = sectors.last().copied().unwrap_or(1).max(1);
    let trunc = TruncationSpec::new(max_atoms, max_photons, grid.len());
    let mut fields = Vec::with_capacity(sectors.len());
    for &n in &sectors {
        let model = build_sector_single(grid, 0.0, 0.0, n, &trunc)?;
        let psi0 = DenseState::with_vacuum(model.basis.clone(), &[one(1.0)])?;
        fields.push(evolve_series(&model.hamiltonian, &psi0, times, options)?);
    }
    let slot = |n: u32| sectors.binary_search(&n).expect("sector was evolved");
    Ok((0..times.len())
        .map(|i| {
            pairs
                .iter()
                .map(|&(m, n)| register_overlap(&fields[slot(m)][i].amplitudes, &fields[slot(n)][i].amplitudes))
                .collect()
        })
        .collect())
}

/// Reduced atom density matrices of `Σ c_n |n⟩ ⊗ |0⟩` evolved in the full
/// single-well space (all sectors at once). `c` must have
/// `trunc.max_atoms + 1` entries.
pub fn oracle_reduced_density(
    c: &[Complex64],
    grid: &ModeGrid,
    omega0: f64,
    kappa: f64,
    times: &[f64],
    trunc: &TruncationSpec,
    options: &EvolveOptions,
) -> Result<Vec<CMatrix>> {
    let model = build_hamiltonian_single(grid, omega0, kappa, trunc)?;
    let psi0 = DenseState::with_vacuum(model.basis.clone(), c)?;
    let states = evolve_series(&model.hamiltonian, &psi0, times, options)?;
    Ok(states.iter().map(partial_trace_field).collect())
}

/// `⟨n_r − n_l⟩(t)` for the left-well coherent state `|α⟩_l` truncated to
/// `n ≤ trunc.max_atoms` and renormalized, one sector at a time.
pub fn oracle_population_difference(
    alpha: f64,
    grid: &ModeGrid,
    delta: f64,
    times: &[f64],
    trunc: &TruncationSpec,
    options: &EvolveOptions,
) -> Result<Vec<f64>> {
    let weights = truncated_poisson_weights(alpha, trunc.max_atoms)?;
    let mut p = vec![0.0; times.len()];
    for (n, w) in weights.iter().enumerate() {
        let n = n as u32;
        if n == 0 {
            continue;
        }
        let model = build_sector_double(grid, 0.0, delta, n, trunc)?;
        let mut atoms = vec![one(0.0); n as usize + 1];
        atoms[0] = one(1.0);
        let psi0 = DenseState::with_vacuum(model.basis.clone(), &atoms)?;
        for (slot, psi) in p
            .iter_mut()
            .zip(evolve_series(&model.hamiltonian, &psi0, times, options)?)
        {
            *slot += w * psi.population_difference();
        }
    }
    Ok(p)
}

/// Result of re-running an oracle observable with twice the photon cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateReport {
    pub max_photons: u32,
    pub max_change: f64,
    pub passed: bool,
}

/// Evaluate `observable` at `max_photons` and `2·max_photons` and require
/// every entry to change by less than `tol`.
pub fn truncation_gate<F>(observable: F, max_photons: u32, tol: f64) -> Result<GateReport>
where
    F: Fn(u32) -> Result<Vec<f64>>,
{
    let coarse = observable(max_photons)?;
    let fine = observable(2 * max_photons)?;
    let max_change = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(GateReport {
        max_photons,
        max_change,
        passed: max_change < tol,
    })
}
