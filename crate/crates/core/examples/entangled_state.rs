//! A superposition of atom numbers entangles with the scattered field; the
//! reduced density matrix loses its off-diagonal elements.
//!
//! ```text
//! cargo run --example entangled_state
//! ```

use num_complex::Complex64;

use decobec::dephasing::{decoherence_factor_discrete, evolve_entangled_state, reduced_density_matrix};
use decobec::linalg::{hermitian_eigenvalues, purity};
use decobec::model::{
    build_mode_grid, continuum_coupling_scale, GridSpec, PumpConfig, SpectralDensity, TrapGeometry, Units,
};

fn main() -> decobec::Result<()> {
    let units = Units::default();
    let mut pump = PumpConfig::new(1.0, 5.0, 1.0);
    pump.coupling_scale = continuum_coupling_scale(units);
    let geometry = TrapGeometry::SingleWell {
        width: 0.5,
        trap_frequency: 1.0,
    };
    let density = SpectralDensity::CavityInverseCubic { scale: 1.0 };
    let spec = GridSpec {
        k_min: 0.05,
        k_max: 6.0,
        n_radial: 40,
        n_angular: 6,
    };
    let grid = build_mode_grid(&pump, &geometry, &density, spec, units)?;
    println!("{} modes", grid.len());

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
    println!("{:>6} {:>14} {:>14} {:>10}", "t", "|O_01|", "|rho_01|", "purity");
    for t in [0.0, 5.0, 20.0, 50.0, 100.0, 200.0] {
        let state = evolve_entangled_state(&c, &grid, 1.0, 0.0, t)?;
        let rho = reduced_density_matrix(&state);
        let o = decoherence_factor_discrete(0, 1, &grid, t).norm();
        println!("{t:>6} {o:>14.8} {:>14.8} {:>10.6}", rho[(0, 1)].norm(), purity(&rho));
        let min = hermitian_eigenvalues(&rho).into_iter().fold(f64::INFINITY, f64::min);
        assert!(min > -1e-10);
    }
    Ok(())
}
