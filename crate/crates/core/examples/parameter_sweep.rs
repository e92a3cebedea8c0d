//! Run a config with a two-axis sweep through the library and write the CSV
//! and manifest to a temporary directory.
//!
//! ```text
//! cargo run --example parameter_sweep
//! ```

use decobec::cli::{run, validate_config, RunOptions};

const CONFIG: &str = r#"
// |O_mn| for two rates and three atom-number differences
{
  "scenario": "fig1a",
  "cavity": { "lambda": 0.001, "omega0": 1.0 },
  "times": { "t_end": 100, "steps": 11 },
  "sweep": [
    { "parameter": "cavity.lambda", "values": [0.001, 0.01] },
    { "parameter": "cavity.n", "values": [1, 2, 3] }
  ]
}
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = validate_config(CONFIG)?;
    let dir = std::env::temp_dir().join("decobec-sweep-example");
    let options = RunOptions {
        out_dir: dir,
        workers: 4,
        format: None,
    };
    let (manifest, output) = run(&config, &options)?;
    println!("hash {}  wall {:.3}s", manifest.config_hash, manifest.wall_time_s);
    for c in &output.table.columns {
        if c.name == "abs_O" {
            println!(
                "{:<40} |O(t_end)| = {:.6}",
                c.header(),
                c.values.last().copied().unwrap_or(1.0)
            );
        }
    }
    for path in &manifest.outputs {
        println!("wrote {}", path.display());
    }
    Ok(())
}
