use decobec::dephasing::{decoherence_exponent, decoherence_integrand};
use decobec::model::{
    build_mode_grid, continuum_coupling_scale, GridSpec, PumpConfig, SpectralDensity, TrapGeometry, Units,
};
use decobec::specfun::integrate_adaptive;

// With a point-like condensate and the calibrated coupling scale, the sum
// over a fine grid reproduces the continuum exponent on the same k range.
#[test]
fn grid_sum_matches_continuum_integral() {
    let units = Units::default();
    let mut pump = PumpConfig::new(1.0, 10.0, 1.0);
    pump.coupling_scale = continuum_coupling_scale(units);
    let geometry = TrapGeometry::SingleWell {
        width: 1e-3,
        trap_frequency: 1.0,
    };
    let density = SpectralDensity::CavityInverseCubic { scale: 2.0 };
    let (k_min, k_max) = (0.01, 20.0);
    let grid = build_mode_grid(
        &pump,
        &geometry,
        &density,
        GridSpec {
            k_min,
            k_max,
            n_radial: 4000,
            n_angular: 2,
        },
        units,
    )
    .unwrap();
    for t in [1.0, 3.0, 6.0] {
        let discrete = -decoherence_exponent(0, 1, &grid, t).re;
        let integral = integrate_adaptive(
            |k| decoherence_integrand(&density, units.c, pump.pump_frequency, t, k).unwrap(),
            k_min,
            k_max,
            1e-12,
        )
        .unwrap();
        let continuum = pump.continuum_prefactor(units) * integral.value;
        assert!(
            (discrete / continuum - 1.0).abs() < 1e-3,
            "t = {t}: {discrete} vs {continuum}"
        );
    }
}
