//! Closed-form Gaussian overlaps checked against brute-force 3-D quadrature
//! of their defining integrals, using only `mode_function` values.

use std::f64::consts::PI;

use decobec::model::{
    coupling_g, form_factor_eta, kappa_from_trap, local_couplings, mode_function, ModeFunction, PumpConfig,
    TrapGeometry, Units, Vec3,
};
use decobec::specfun::gauss_legendre;
use num_complex::Complex64;

/// Composite Gauss–Legendre nodes on [lo, hi].
fn axis(lo: f64, hi: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::new();
    for p in 0..panels {
        let a = lo + p as f64 * h;
        for &(x, w) in &rule {
            out.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

fn integrate3<F: Fn(Vec3) -> Complex64>(f: F, x_range: (f64, f64), half_width: f64) -> Complex64 {
    let xs = axis(x_range.0, x_range.1, 6, 24);
    let ys = axis(-half_width, half_width, 4, 24);
    let mut total = Complex64::new(0.0, 0.0);
    for &(x, wx) in &xs {
        for &(y, wy) in &ys {
            for &(z, wz) in &ys {
                total += f([x, y, z]) * (wx * wy * wz);
            }
        }
    }
    total
}

fn phase(q: Vec3, r: Vec3) -> Complex64 {
    Complex64::from_polar(1.0, q[0] * r[0] + q[1] * r[1] + q[2] * r[2])
}

fn double(a: f64, sigma: f64) -> TrapGeometry {
    TrapGeometry::DoubleWell {
        separation: a,
        local_width: sigma,
        barrier_height: 1.0,
        mass: 1.0,
        splitting_scale: 1.0,
    }
}

const SAMPLE_K: [Vec3; 5] = [
    [1.0, 0.0, 0.0],
    [0.4, 0.9, 0.0],
    [-0.5, 0.2, 1.1],
    [2.1, -0.7, 0.3],
    [0.0, 0.0, 2.5],
];

#[test]
fn mode_functions_are_normalized() {
    let sigma = 0.6;
    let geo = double(2.0, sigma);
    let x_range = (-1.0 - 10.0 * sigma, 1.0 + 10.0 * sigma);
    for which in [
        ModeFunction::Ground,
        ModeFunction::Excited,
        ModeFunction::Left,
        ModeFunction::Right,
    ] {
        let norm = integrate3(
            |r| Complex64::new(mode_function(&geo, which, r).unwrap().powi(2), 0.0),
            x_range,
            10.0 * sigma,
        );
        assert!((norm.re - 1.0).abs() < 1e-10, "{which:?}: {}", norm.re);
    }
    // ground and excited are orthogonal
    let cross = integrate3(
        |r| {
            Complex64::new(
                mode_function(&geo, ModeFunction::Ground, r).unwrap()
                    * mode_function(&geo, ModeFunction::Excited, r).unwrap(),
                0.0,
            )
        },
        x_range,
        10.0 * sigma,
    );
    assert!(cross.norm() < 1e-12);
}

#[test]
fn local_overlap_matches_gaussian_formula() {
    let (a, sigma) = (2.5, 0.7);
    let geo = double(a, sigma);
    let numeric = integrate3(
        |r| {
            Complex64::new(
                mode_function(&geo, ModeFunction::Left, r).unwrap()
                    * mode_function(&geo, ModeFunction::Right, r).unwrap(),
                0.0,
            )
        },
        (-a / 2.0 - 10.0 * sigma, a / 2.0 + 10.0 * sigma),
        10.0 * sigma,
    );
    let analytic = (-a * a / (4.0 * sigma * sigma)).exp();
    assert!(((numeric.re - analytic) / analytic).abs() < 1e-10);
    assert_eq!(geo.local_overlap().unwrap(), analytic);
}

#[test]
fn eta_matches_overlap_integral() {
    let sigma = 0.8;
    let geo = TrapGeometry::SingleWell {
        width: sigma,
        trap_frequency: 1.0,
    };
    let pump = PumpConfig::new(1.5, 40.0, 1.0);
    let units = Units { hbar: 1.3, c: 1.0 };
    let k0 = [1.0, 0.0, 0.0];
    for k in SAMPLE_K {
        let q = [k[0] - k0[0], k[1] - k0[1], k[2] - k0[2]];
        let overlap = integrate3(
            |r| phase(q, r) * mode_function(&geo, ModeFunction::Ground, r).unwrap().powi(2),
            (-10.0 * sigma, 10.0 * sigma),
            10.0 * sigma,
        );
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let expected = overlap * units.hbar * coupling_g(&pump, units, kn).unwrap();
        let eta = form_factor_eta(&geo, &pump, units, k, k0).unwrap();
        assert!(
            (eta - expected).norm() / eta.norm() < 1e-8,
            "k = {k:?}: {eta} vs {expected}"
        );
    }
}

#[test]
fn mu_zeta_match_overlap_integrals() {
    let (a, sigma) = (1.8, 0.5);
    let geo = double(a, sigma);
    let pump = PumpConfig::new(1.0, 25.0, 1.0);
    let units = Units::default();
    let k0 = [1.0, 0.0, 0.0];
    let x_range = (-a / 2.0 - 10.0 * sigma, a / 2.0 + 10.0 * sigma);
    for k in SAMPLE_K {
        let q = [k[0] - k0[0], k[1] - k0[1], k[2] - k0[2]];
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let g = coupling_g(&pump, units, kn).unwrap();
        let left = |r| mode_function(&geo, ModeFunction::Left, r).unwrap();
        let right = |r| mode_function(&geo, ModeFunction::Right, r).unwrap();
        let mu_num = integrate3(|r| phase(q, r) * left(r) * left(r), x_range, 10.0 * sigma) * g;
        let zeta_num = integrate3(|r| phase(q, r) * left(r) * right(r), x_range, 10.0 * sigma) * g;
        let (mu, zeta) = local_couplings(&geo, &pump, units, k, k0).unwrap();
        assert!((mu - mu_num).norm() / mu.norm() < 1e-8, "mu at {k:?}: {mu} vs {mu_num}");
        assert!(
            (zeta - zeta_num).norm() / zeta.norm() < 1e-8,
            "zeta at {k:?}: {zeta} vs {zeta_num}"
        );
    }
}

#[test]
fn kappa_matches_quartic_integral() {
    let sigma = 1.0;
    let geo = TrapGeometry::SingleWell {
        width: sigma,
        trap_frequency: 1.0,
    };
    let quartic = integrate3(
        |r| Complex64::new(mode_function(&geo, ModeFunction::Ground, r).unwrap().powi(4), 0.0),
        (-10.0, 10.0),
        10.0,
    );
    let kappa = kappa_from_trap(&geo, 1.0).unwrap();
    assert!(((quartic.re - kappa) / kappa).abs() < 1e-10);
    assert!((kappa - (2.0 * PI).powf(-1.5)).abs() < 1e-15);
}
