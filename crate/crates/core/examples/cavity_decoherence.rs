//! Cavity decoherence curves: rate sweep at fixed pump frequency, then pump
//! frequency sweep at fixed rate.
//!
//! ```text
//! cargo run --example cavity_decoherence
//! ```

use decobec::dephasing::{cavity_exponent, decoherence_norm_cavity, CavityVariant};

fn main() -> decobec::Result<()> {
    let times = [0.0, 10.0, 50.0, 100.0, 200.0];
    println!("omega0 = 1");
    for lambda in [1e-3, 5e-3, 2e-2] {
        let row: Vec<String> = times
            .iter()
            .map(|&t| decoherence_norm_cavity(lambda, 1.0, t, CavityVariant::Corrected).map(|o| format!("{o:.6}")))
            .collect::<Result<_, _>>()?;
        println!("  lambda {lambda:<6} |O| = {}", row.join("  "));
    }

    let lambda = 1e-3;
    println!(
        "lambda = {lambda}, slope of -ln|O| over t in [500, 1000]/omega0 (2 pi lambda = {:.6e})",
        2.0 * std::f64::consts::PI * lambda
    );
    for omega0 in [0.5, 1.0, 2.0, 4.0] {
        let (t1, t2) = (500.0 / omega0, 1000.0 / omega0);
        let slope = (cavity_exponent(lambda, omega0, t2, CavityVariant::Corrected)?
            - cavity_exponent(lambda, omega0, t1, CavityVariant::Corrected)?)
            / (t2 - t1);
        println!("  omega0 {omega0:<4} slope {slope:.6e}");
    }

    let v = decoherence_norm_cavity(lambda, 2.0, 0.0, CavityVariant::Verbatim)?;
    println!("verbatim bracket at t = 0, omega0 = 2: |O| = {v}");
    Ok(())
}
