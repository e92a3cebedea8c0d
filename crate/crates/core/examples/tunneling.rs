//! Double-well tunneling with and without coupling to the scattered field.
//!
//! ```text
//! cargo run --example tunneling
//! ```

use num_complex::Complex64;

use decobec::doublewell::{tunneling_trace, AtomTruncation, CompactVariant, TunnelingConfig};
use decobec::model::ModeGrid;

fn main() -> decobec::Result<()> {
    let delta = 0.2;
    let period = std::f64::consts::PI / delta;
    let times: Vec<f64> = (0..=24).map(|i| i as f64 * 3.0 * period / 24.0).collect();
    for zeta in [0.0, 0.1, 0.3] {
        let grid = ModeGrid::explicit(1.0, &[(1.0, Complex64::new(0.0, 0.0), Complex64::new(zeta, 0.0))])?;
        let trace = tunneling_trace(&TunnelingConfig {
            alpha: 1.0,
            delta,
            grid,
            times: times.clone(),
            truncation: AtomTruncation::default(),
            n_ref: None,
            variant: CompactVariant::Derived,
        })?;
        println!("zeta = {zeta}");
        for i in (0..times.len()).step_by(4) {
            println!(
                "  t {:>7.3}  p_exact {:>9.5}  p_compact {:>9.5}  J {:.5}",
                trace.times[i], trace.p_exact[i], trace.p_compact[i], trace.j[i]
            );
        }
    }
    Ok(())
}
