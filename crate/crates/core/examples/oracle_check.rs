//! Closed-form decoherence factors against brute-force evolution in a
//! truncated Fock space.
//!
//! ```text
//! cargo run --release --example oracle_check
//! ```

use decobec::dephasing::decoherence_factor_discrete;
use decobec::model::ModeGrid;
use decobec::oracle::{oracle_decoherence_factors, truncation_gate, EvolveOptions};

fn main() -> decobec::Result<()> {
    let grid = ModeGrid::single_well(1.0, &[(1.0, 0.3), (1.7, 0.25)])?;
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let times: Vec<f64> = (0..=8).map(|i| i as f64).collect();
    let options = EvolveOptions::default();
    let oracle = oracle_decoherence_factors(&grid, &pairs, &times, 16, &options)?;
    let mut worst: f64 = 0.0;
    for (t, row) in times.iter().zip(&oracle) {
        for (&(m, n), o) in pairs.iter().zip(row) {
            let closed = decoherence_factor_discrete(m, n, &grid, *t).value;
            worst = worst.max((closed - o).norm());
        }
    }
    println!("max |O_closed - O_oracle| = {worst:e}");

    let gate = truncation_gate(
        |p| {
            let o = oracle_decoherence_factors(&grid, &[(0, 2)], &times, p, &options)?;
            Ok(o.iter().flat_map(|r| [r[0].re, r[0].im]).collect())
        },
        12,
        1e-7,
    )?;
    println!(
        "photon cutoff {} -> {}: change {:e}, passed {}",
        gate.max_photons,
        2 * gate.max_photons,
        gate.max_change,
        gate.passed
    );
    Ok(())
}
