//! The continuum integral with a flat mode density grows without bound as the
//! cutoff is raised; the cavity density converges.
//!
//! ```text
//! cargo run --example free_space_divergence
//! ```

use decobec::dephasing::decoherence_norm_integral;
use decobec::model::{PumpConfig, SpectralDensity, Units};

fn main() -> decobec::Result<()> {
    let pump = PumpConfig::new(1.0, 10.0, 1.0);
    let units = Units::default();
    let t = 5.0;

    let free = decoherence_norm_integral(0, 1, &pump, &SpectralDensity::FreeSpace, units, t, 1e-10, 1e4)?;
    for (cutoff, exponent) in &free.cutoff_exponents {
        println!("free space  k_max {cutoff:>8}  -ln|O| = {exponent:.6e}");
    }
    println!("diverged = {}, |O| = {}", free.quadrature.diverged, free.norm);

    let cavity = SpectralDensity::CavityInverseCubic { scale: 1.0 };
    for k_max in [1e2, 1e3, 1e4] {
        let r = decoherence_norm_integral(0, 1, &pump, &cavity, units, t, 1e-10, k_max)?;
        println!("cavity      k_max {k_max:>8}  -ln|O| = {:.12e}", r.exponent);
    }
    Ok(())
}
