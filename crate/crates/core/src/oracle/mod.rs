//! Brute-force reference: the atom–field Hamiltonians in a truncated Fock
//! space, evolved numerically.
//!
//! States live in `atoms ⊗ photons`, ordered atom-major with the photon
//! occupations of the modes in lexicographic order (mode 0 most
//! significant). Hamiltonians are in units of ħ, so they are frequencies.

mod checks;
mod evolve;
mod sparse;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{hartree_fock_energy, ModeGrid};

pub use checks::{
    oracle_decoherence_factors, oracle_displacements, oracle_population_difference, oracle_reduced_density,
    truncation_gate, GateReport,
};
pub use evolve::{evolve, evolve_series, EvolutionMethod, EvolveOptions};
pub use sparse::CsrMatrix;

/// Default bound on the product-space dimension.
pub const DEFAULT_DIMENSION_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    pub max_atoms: u32,
    pub max_photons_per_mode: u32,
    pub num_modes: usize,
    #[serde(default = "default_cap")]
    pub dimension_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_DIMENSION_CAP
}

impl TruncationSpec {
    pub fn new(max_atoms: u32, max_photons_per_mode: u32, num_modes: usize) -> Self {
        Self {
            max_atoms,
            max_photons_per_mode,
            num_modes,
            dimension_cap: DEFAULT_DIMENSION_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_atoms < 1 || self.max_photons_per_mode < 1 || self.num_modes < 1 {
            return Err(Error::invalid(
                "truncation needs max_atoms, max_photons_per_mode and num_modes ≥ 1",
            ));
        }
        Ok(())
    }

    /// `(max_photons + 1)^num_modes`, or `None` on overflow.
    pub fn photon_dimension(&self) -> Option<usize> {
        (self.max_photons_per_mode as usize + 1).checked_pow(u32::try_from(self.num_modes).ok()?)
    }
}

/// Index map of the product basis. Atom levels are labelled by
/// `(atom number, atoms in the right well)`; the second entry is 0 for a
/// single well.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    pub atoms: Vec<(u32, u32)>,
    pub max_photons: u32,
    pub num_modes: usize,
    photon_dim: usize,
}

impl FockBasis {
    fn new(atoms: Vec<(u32, u32)>, trunc: &TruncationSpec) -> Result<Self> {
        trunc.validate()?;
        let photon_dim = trunc
            .photon_dimension()
            .ok_or_else(|| Error::Resource("photon space dimension overflows".into()))?;
        let dim = photon_dim
            .checked_mul(atoms.len())
            .ok_or_else(|| Error::Resource("state space dimension overflows".into()))?;
        if dim > trunc.dimension_cap {
            return Err(Error::Resource(format!(
                "state space dimension {dim} exceeds the cap {}",
                trunc.dimension_cap
            )));
        }
        Ok(Self {
            atoms,
            max_photons: trunc.max_photons_per_mode,
            num_modes: trunc.num_modes,
            photon_dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.atoms.len() * self.photon_dim
    }

    pub fn photon_dim(&self) -> usize {
        self.photon_dim
    }

    pub fn index(&self, atom: usize, photons: &[u32]) -> usize {
        let base = self.max_photons as usize + 1;
        let p = photons.iter().fold(0usize, |acc, &q| acc * base + q as usize);
        atom * self.photon_dim + p
    }

    /// Inverse of [`FockBasis::index`].
    pub fn decode(&self, index: usize) -> (usize, Vec<u32>) {
        let base = self.max_photons as usize + 1;
        let mut p = index % self.photon_dim;
        let mut photons = vec![0u32; self.num_modes];
        for slot in photons.iter_mut().rev() {
            *slot = (p % base) as u32;
            p /= base;
        }
        (index / self.photon_dim, photons)
    }

    /// Stride between photon index `q` and `q + 1` of `mode`.
    fn stride(&self, mode: usize) -> usize {
        (self.max_photons as usize + 1).pow((self.num_modes - 1 - mode) as u32)
    }
}

/// Amplitudes over a [`FockBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub amplitudes: Vec<Complex64>,
    pub basis: Arc<FockBasis>,
}

impl DenseState {
    /// `Σ_i atoms_i |i⟩ ⊗ |0…0⟩`.
    pub fn with_vacuum(basis: Arc<FockBasis>, atoms: &[Complex64]) -> Result<Self> {
        if atoms.len() != basis.atoms.len() {
            return Err(Error::invalid(format!(
                "{} atom amplitudes for {} atom levels",
                atoms.len(),
                basis.atoms.len()
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.dim()];
        for (i, a) in atoms.iter().enumerate() {
            amplitudes[i * basis.photon_dim()] = *a;
        }
        Ok(Self { amplitudes, basis })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Photon amplitudes attached to one atom level.
    pub fn field_register(&self, atom: usize) -> &[Complex64] {
        let d = self.basis.photon_dim();
        &self.amplitudes[atom * d..(atom + 1) * d]
    }

    /// `⟨a_mode⟩`.
    pub fn field_expectation(&self, mode: usize) -> Complex64 {
        let stride = self.basis.stride(mode);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, z) in self.amplitudes.iter().enumerate() {
            let (_, photons) = self.basis.decode(i);
            let q = photons[mode];
            if q > 0 {
                acc += self.amplitudes[i - stride].conj() * z * (q as f64).sqrt();
            }
        }
        acc
    }

    /// `⟨N_atom⟩`.
    pub fn atom_number(&self) -> f64 {
        self.level_sum(|(n, _)| n as f64)
    }

    /// `⟨n_right − n_left⟩` for double-well levels.
    pub fn population_difference(&self) -> f64 {
        self.level_sum(|(n, r)| 2.0 * r as f64 - n as f64)
    }

    fn level_sum(&self, f: impl Fn((u32, u32)) -> f64) -> f64 {
        self.basis
            .atoms
            .iter()
            .enumerate()
            .map(|(i, &level)| f(level) * self.field_register(i).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, h: &CsrMatrix) -> Complex64 {
        let mut hv = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        h.mul_vec(&self.amplitudes, &mut hv);
        self.amplitudes.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `⟨a|b⟩`.
pub fn overlap(a: &DenseState, b: &DenseState) -> Result<Complex64> {
    if a.basis != b.basis {
        return Err(Error::invalid("states live in different bases"));
    }
    Ok(a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| x.conj() * y).sum())
}

/// `Σ_i conj(a_i) b_i` for two photon registers.
pub fn register_overlap(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Reduced density matrix of the atoms, indexed like `basis.atoms`.
pub fn partial_trace_field(psi: &DenseState) -> CMatrix {
    let d = psi.basis.atoms.len();
    let mut rho = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let v = register_overlap(psi.field_register(j), psi.field_register(i));
            rho[(i, j)] = v;
            rho[(j, i)] = v.conj();
        }
    }
    rho
}

/// A truncated Hamiltonian with its basis.
#[derive(Debug, Clone)]
pub struct OracleModel {
    pub basis: Arc<FockBasis>,
    pub hamiltonian: CsrMatrix,
}

impl OracleModel {
    /// `max |H_ab (N_b − N_a)|`, the size of `[H, N_atom]`.
    pub fn number_commutator(&self) -> f64 {
        let atoms = &self.basis.atoms;
        let d = self.basis.photon_dim();
        let mut worst: f64 = 0.0;
        for r in 0..self.hamiltonian.dim() {
            for (c, v) in self.hamiltonian.row(r) {
                let diff = atoms[r / d].0 as f64 - atoms[c / d].0 as f64;
                worst = worst.max(v.norm() * diff.abs());
            }
        }
        worst
    }
}

/// `H = H_atom ⊗ 1 + Σ ω_k a_k†a_k + Σ_k (C_k ⊗ a_k + C_k† ⊗ a_k†)`.
fn assemble(basis: FockBasis, h_atom: &CMatrix, couplings: &[CMatrix], omegas: &[f64]) -> OracleModel {
    let d = basis.photon_dim();
    let na = basis.atoms.len();
    let mut triplets = Vec::new();
    for p in 0..d {
        let (_, photons) = basis.decode(p);
        let field: f64 = photons.iter().zip(omegas).map(|(&q, w)| q as f64 * w).sum();
        for i in 0..na {
            triplets.push((i * d + p, i * d + p, Complex64::new(field, 0.0)));
            for j in 0..na {
                let v = h_atom[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    triplets.push((i * d + p, j * d + p, v));
                }
            }
        }
        for (mode, c) in couplings.iter().enumerate() {
            let q = photons[mode];
            if q == basis.max_photons {
                continue;
            }
            let raised = p + basis.stride(mode);
            let amp = ((q + 1) as f64).sqrt();
            for i in 0..na {
                for j in 0..na {
                    let v = c[(i, j)] * amp;
                    if v != Complex64::new(0.0, 0.0) {
                        // ⟨i, p| C ⊗ a |j, p + 1_k⟩ and its adjoint
                        triplets.push((i * d + p, j * d + raised, v));
                        triplets.push((j * d + raised, i * d + p, v.conj()));
                    }
                }
            }
        }
    }
    let dim = basis.dim();
    OracleModel {
        basis: Arc::new(basis),
        hamiltonian: CsrMatrix::from_triplets(dim, triplets),
    }
}

fn check_grid(grid: &ModeGrid, trunc: &TruncationSpec) -> Result<()> {
    if grid.len() != trunc.num_modes {
        return Err(Error::invalid(format!(
            "grid has {} modes but the truncation expects {}",
            grid.len(),
            trunc.num_modes
        )));
    }
    Ok(())
}

fn single_well_model(
    grid: &ModeGrid,
    omega0: f64,
    kappa: f64,
    sectors: &[u32],
    trunc: &TruncationSpec,
) -> Result<OracleModel> {
    check_grid(grid, trunc)?;
    let basis = FockBasis::new(sectors.iter().map(|&n| (n, 0)).collect(), trunc)?;
    let na = sectors.len();
    let h_atom = CMatrix::from_fn(na, na, |i, j| {
        if i == j {
            Complex64::new(hartree_fock_energy(sectors[i], omega0, kappa), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let couplings: Vec<CMatrix> = grid
        .modes()
        .iter()
        .map(|mode| {
            let eta = mode.effective_coupling();
            CMatrix::from_fn(na, na, |i, j| {
                if i == j {
                    eta * sectors[i] as f64
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    let omegas: Vec<f64> = grid.modes().iter().map(|m| m.omega).collect();
    Ok(assemble(basis, &h_atom, &couplings, &omegas))
}

/// Single-well Hamiltonian on all sectors `n = 0 … max_atoms`:
/// `Ω₀N + κN(N−1) + Σ ω_k a_k†a_k + N Σ_k (η_k a_k + h.c.)`.
pub fn build_hamiltonian_single(
    grid: &ModeGrid,
    omega0: f64,
    kappa: f64,
    trunc: &TruncationSpec,
) -> Result<OracleModel> {
    let sectors: Vec<u32> = (0..=trunc.max_atoms).collect();
    single_well_model(grid, omega0, kappa, &sectors, trunc)
}

/// The block of [`build_hamiltonian_single`] with `n` atoms.
pub fn build_sector_single(
    grid: &ModeGrid,
    omega0: f64,
    kappa: f64,
    n: u32,
    trunc: &TruncationSpec,
) -> Result<OracleModel> {
    single_well_model(grid, omega0, kappa, &[n], trunc)
}

fn double_well_model(
    grid: &ModeGrid,
    omega: f64,
    delta: f64,
    sectors: &[u32],
    trunc: &TruncationSpec,
) -> Result<OracleModel> {
    check_grid(grid, trunc)?;
    let levels: Vec<(u32, u32)> = sectors.iter().flat_map(|&n| (0..=n).map(move |r| (n, r))).collect();
    let basis = FockBasis::new(levels.clone(), trunc)?;
    let na = levels.len();
    let zero = Complex64::new(0.0, 0.0);
    // N and T = b_l†b_r + b_r†b_l in the |n − r, r⟩ basis
    let number = CMatrix::from_fn(na, na, |i, j| {
        if i == j {
            Complex64::new(levels[i].0 as f64, 0.0)
        } else {
            zero
        }
    });
    let tunnel = CMatrix::from_fn(na, na, |i, j| {
        let ((n1, r1), (n2, r2)) = (levels[i], levels[j]);
        if n1 != n2 {
            return zero;
        }
        if r1 == r2 + 1 {
            // b_r† b_l |n − r, r⟩ = √((n − r)(r + 1)) |n − r − 1, r + 1⟩
            Complex64::new(((n2 - r2) as f64 * (r2 + 1) as f64).sqrt(), 0.0)
        } else if r2 == r1 + 1 {
            Complex64::new(((n1 - r1) as f64 * (r1 + 1) as f64).sqrt(), 0.0)
        } else {
            zero
        }
    });
    let h_atom = &number * Complex64::new(omega, 0.0) + &tunnel * Complex64::new(delta, 0.0);
    let couplings: Vec<CMatrix> = grid
        .modes()
        .iter()
        .map(|mode| &number * mode.effective_coupling() + &tunnel * mode.effective_tunneling())
        .collect();
    let omegas: Vec<f64> = grid.modes().iter().map(|m| m.omega).collect();
    Ok(assemble(basis, &h_atom, &couplings, &omegas))
}

/// Double-well Hamiltonian on all sectors `N = 0 … max_atoms`:
/// `ΩN + δT + Σ ω_k a_k†a_k + Σ_k ((μ_k N + ζ_k T) a_k + h.c.)` with
/// `T = b_l†b_r + b_r†b_l`.
pub fn build_hamiltonian_double(
    grid: &ModeGrid,
    omega: f64,
    delta: f64,
    trunc: &TruncationSpec,
) -> Result<OracleModel> {
    let sectors: Vec<u32> = (0..=trunc.max_atoms).collect();
    double_well_model(grid, omega, delta, &sectors, trunc)
}

/// The block of [`build_hamiltonian_double`] with `n` atoms.
pub fn build_sector_double(
    grid: &ModeGrid,
    omega: f64,
    delta: f64,
    n: u32,
    trunc: &TruncationSpec,
) -> Result<OracleModel> {
    double_well_model(grid, omega, delta, &[n], trunc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, purity, trace};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_index_round_trip() {
        let trunc = TruncationSpec::new(2, 3, 3);
        let basis = FockBasis::new(vec![(0, 0), (1, 0)], &trunc).unwrap();
        for i in 0..basis.dim() {
            let (a, p) = basis.decode(i);
            assert_eq!(basis.index(a, &p), i);
        }
        assert_eq!(basis.index(1, &[0, 0, 1]), 65);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let trunc = TruncationSpec::new(3, 30, 4);
        let grid = ModeGrid::single_well(1.0, &[(1.0, 0.1); 4]).unwrap();
        assert!(matches!(
            build_hamiltonian_single(&grid, 1.0, 0.0, &trunc),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn uncoupled_single_well_is_diagonal() {
        let grid = ModeGrid::single_well(1.0, &[(1.5, 0.0), (0.5, 0.0)]).unwrap();
        let trunc = TruncationSpec::new(2, 2, 2);
        let model = build_hamiltonian_single(&grid, 1.2, 0.3, &trunc).unwrap();
        let h = &model.hamiltonian;
        for r in 0..h.dim() {
            for (col, v) in h.row(r) {
                assert_eq!(col, r);
                let (a, p) = model.basis.decode(r);
                let n = model.basis.atoms[a].0;
                let expected = hartree_fock_energy(n, 1.2, 0.3) + 1.5 * p[0] as f64 + 0.5 * p[1] as f64;
                assert!((v.re - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_well_structure() {
        let grid = ModeGrid::single_well(1.0, &[(1.0, 0.3), (-0.4, 0.2)]).unwrap();
        let trunc = TruncationSpec::new(2, 4, 2);
        let model = build_hamiltonian_single(&grid, 1.0, 0.1, &trunc).unwrap();
        assert!(model.hamiltonian.hermiticity_defect() < 1e-14);
        assert!(model.number_commutator() < 1e-12);
        // the vacuum-sector block carries only the free field
        let d = model.basis.photon_dim();
        for r in 0..d {
            for (col, _) in model.hamiltonian.row(r) {
                assert_eq!(col, r);
            }
        }
    }

    #[test]
    fn double_well_structure() {
        let grid = ModeGrid::explicit(1.0, &[(1.0, c(0.0, 0.0), c(0.0, 0.0))]).unwrap();
        let trunc = TruncationSpec::new(1, 3, 1);
        let sector = build_sector_double(&grid, 0.0, 0.25, 1, &trunc).unwrap();
        assert_eq!(sector.hamiltonian.dim(), 2 * 4);
        let atoms = CMatrix::from_fn(2, 2, |i, j| sector.hamiltonian.get(i * 4, j * 4));
        let eig = hermitian_eigenvalues(&atoms);
        assert!((eig[1] - eig[0] - 0.5).abs() < 1e-14);

        let grid = ModeGrid::explicit(1.0, &[(1.0, c(0.1, 0.05), c(0.2, 0.0))]).unwrap();
        let full = build_hamiltonian_double(&grid, 1.0, 0.3, &TruncationSpec::new(3, 3, 1)).unwrap();
        assert!(full.hamiltonian.hermiticity_defect() < 1e-14);
        assert!(full.number_commutator() < 1e-12);
    }

    #[test]
    fn evolution_basics() {
        let grid = ModeGrid::single_well(1.0, &[(1.0, 0.2)]).unwrap();
        let trunc = TruncationSpec::new(2, 12, 1);
        let model = build_hamiltonian_single(&grid, 0.7, 0.1, &trunc).unwrap();
        let s = c(1.0 / 3f64.sqrt(), 0.0);
        let psi0 = DenseState::with_vacuum(model.basis.clone(), &[s, s, s]).unwrap();
        assert_eq!(evolve(&model.hamiltonian, &psi0, 0.0, 1e-12).unwrap(), psi0);
        let psi = evolve(&model.hamiltonian, &psi0, 3.0, 1e-13).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-9);
        let e0 = psi0.expectation(&model.hamiltonian).re;
        assert!((psi.expectation(&model.hamiltonian).re - e0).abs() < 1e-8 * e0.abs().max(1.0));
        assert!((psi.atom_number() - 1.0).abs() < 1e-10);
        let back = evolve(&model.hamiltonian, &psi, -3.0, 1e-13).unwrap();
        let gap = back
            .amplitudes
            .iter()
            .zip(&psi0.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(gap < 1e-11);
    }

    #[test]
    fn diagonal_hamiltonian_gives_phases() {
        let grid = ModeGrid::single_well(1.0, &[(0.9, 0.0)]).unwrap();
        let trunc = TruncationSpec::new(1, 2, 1);
        let model = build_hamiltonian_single(&grid, 0.4, 0.0, &trunc).unwrap();
        let psi0 = DenseState::with_vacuum(model.basis.clone(), &[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let psi = evolve(&model.hamiltonian, &psi0, 2.0, 1e-13).unwrap();
        assert!((psi.amplitudes[0] - c(0.6, 0.0)).norm() < 1e-12);
        let phase = Complex64::from_polar(1.0, -0.4 * 2.0);
        assert!((psi.amplitudes[3] - c(0.0, 0.8) * phase).norm() < 1e-12);
    }

    #[test]
    fn overlaps_and_traces() {
        let grid = ModeGrid::single_well(1.0, &[(1.0, 0.0)]).unwrap();
        let trunc = TruncationSpec::new(1, 2, 1);
        let model = build_hamiltonian_single(&grid, 1.0, 0.0, &trunc).unwrap();
        let a = DenseState::with_vacuum(model.basis.clone(), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = DenseState::with_vacuum(model.basis.clone(), &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(overlap(&a, &a).unwrap(), c(1.0, 0.0));
        assert_eq!(overlap(&a, &b).unwrap(), c(0.0, 0.0));
        let other = build_hamiltonian_single(&grid, 1.0, 0.0, &TruncationSpec::new(1, 3, 1)).unwrap();
        let x = DenseState::with_vacuum(other.basis.clone(), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(overlap(&a, &x).is_err());

        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let product = DenseState::with_vacuum(model.basis.clone(), &[h, h]).unwrap();
        let rho = partial_trace_field(&product);
        assert!((purity(&rho) - 1.0).abs() < 1e-15);

        // orthogonal field states on the two levels give a diagonal ρ
        let mut amps = vec![c(0.0, 0.0); model.basis.dim()];
        amps[0] = h;
        amps[model.basis.index(1, &[1])] = h;
        let rho = partial_trace_field(&DenseState {
            amplitudes: amps,
            basis: model.basis.clone(),
        });
        assert_eq!(rho[(0, 1)], c(0.0, 0.0));
        assert!((trace(&rho) - 1.0).norm() < 1e-15);
    }
}
