use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Trap shape. All mode functions are isotropic Gaussians
/// `(πσ²)^(-3/4) exp(-|r - r_c|²/(2σ²))` so every overlap has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrapGeometry {
    SingleWell {
        width: f64,
        trap_frequency: f64,
    },
    /// Local wells at `x = ∓separation/2` (left, right).
    DoubleWell {
        separation: f64,
        local_width: f64,
        barrier_height: f64,
        mass: f64,
        #[serde(default = "one")]
        splitting_scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeFunction {
    Ground,
    Excited,
    Left,
    Right,
}

impl TrapGeometry {
    /// Hard constraints are errors; soft ones (well tightness) come back as
    /// warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            TrapGeometry::SingleWell { width, trap_frequency } => {
                positive("width", width)?;
                positive("trap_frequency", trap_frequency)?;
                Ok(Vec::new())
            }
            TrapGeometry::DoubleWell {
                separation,
                local_width,
                barrier_height,
                mass,
                splitting_scale,
            } => {
                positive("separation", separation)?;
                positive("local_width", local_width)?;
                positive("barrier_height", barrier_height)?;
                positive("mass", mass)?;
                positive("splitting_scale", splitting_scale)?;
                let mut warnings = Vec::new();
                if separation < 4.0 * local_width {
                    warnings.push(format!(
                        "separation {separation} < 4 x local width {local_width}: local modes overlap noticeably"
                    ));
                }
                Ok(warnings)
            }
        }
    }

    /// Overlap `∫ φ_l φ_r d³r` of the two local modes.
    pub fn local_overlap(&self) -> Option<f64> {
        match *self {
            TrapGeometry::DoubleWell {
                separation,
                local_width,
                ..
            } => Some((-separation * separation / (4.0 * local_width * local_width)).exp()),
            TrapGeometry::SingleWell { .. } => None,
        }
    }

    pub fn width(&self) -> f64 {
        match *self {
            TrapGeometry::SingleWell { width, .. } => width,
            TrapGeometry::DoubleWell { local_width, .. } => local_width,
        }
    }
}

fn gaussian(r: Vec3, center: Vec3, sigma: f64) -> f64 {
    let d2: f64 = (0..3).map(|i| (r[i] - center[i]).powi(2)).sum();
    (PI * sigma * sigma).powf(-0.75) * (-d2 / (2.0 * sigma * sigma)).exp()
}

/// Value of a normalized mode function at `r`.
///
/// For the double well, the global modes are rebuilt from the local ones as
/// `φ_{0,1} ∝ φ_r ± φ_l`, normalized with the local overlap included.
pub fn mode_function(geometry: &TrapGeometry, which: ModeFunction, r: Vec3) -> Result<f64> {
    match (*geometry, which) {
        (TrapGeometry::SingleWell { width, .. }, ModeFunction::Ground) => Ok(gaussian(r, [0.0; 3], width)),
        (TrapGeometry::SingleWell { .. }, other) => Err(Error::invalid(format!(
            "single well only has a ground mode, {other:?} requested"
        ))),
        (
            TrapGeometry::DoubleWell {
                separation,
                local_width,
                ..
            },
            which,
        ) => {
            let left = gaussian(r, [-0.5 * separation, 0.0, 0.0], local_width);
            let right = gaussian(r, [0.5 * separation, 0.0, 0.0], local_width);
            let s = geometry.local_overlap().unwrap_or(0.0);
            match which {
                ModeFunction::Left => Ok(left),
                ModeFunction::Right => Ok(right),
                ModeFunction::Ground => Ok((right + left) / (2.0 * (1.0 + s)).sqrt()),
                ModeFunction::Excited => {
                    if 1.0 - s <= f64::EPSILON {
                        Err(Error::invalid("excited mode undefined for coincident wells"))
                    } else {
                        Ok((right - left) / (2.0 * (1.0 - s)).sqrt())
                    }
                }
            }
        }
    }
}
