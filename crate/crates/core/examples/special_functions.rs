//! Sine integral and adaptive quadrature.
//!
//! ```text
//! cargo run --example special_functions
//! ```

use decobec::specfun::{integrate_adaptive, sine_integral};

fn main() -> decobec::Result<()> {
    println!("{:>8} {:>22} {:>22}", "z", "Si(z)", "quadrature");
    for z in [0.5, 1.0, 2.0, 5.0, 10.0, 100.0] {
        let si = sine_integral(z)?;
        let q = integrate_adaptive(|x: f64| if x == 0.0 { 1.0 } else { x.sin() / x }, 0.0, z, 1e-13)?;
        println!("{z:>8} {si:>22.16} {:>22.16}", q.value);
    }
    let far = sine_integral(1e6)?;
    println!("Si(1e6) - pi/2 = {:e}", far - std::f64::consts::FRAC_PI_2);

    // oscillatory integrand with a removable singularity at k = 1
    let t = 40.0;
    let r = integrate_adaptive(
        |k: f64| {
            let x = k - 1.0;
            if x.abs() < 1e-8 {
                0.25 * t * t
            } else {
                (0.5 * t * x).sin().powi(2) / (x * x)
            }
        },
        0.0,
        20.0,
        1e-12,
    )?;
    println!(
        "sin^2 kernel: {} (+- {:e}, {} evaluations)",
        r.value, r.abs_error_estimate, r.evaluations
    );
    Ok(())
}
