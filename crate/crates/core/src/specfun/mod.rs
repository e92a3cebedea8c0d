//! Special functions and quadrature primitives.

mod gauss_legendre;
mod quadrature;
pub(crate) use quadrature::pairwise_sum;
mod sine_integral;

pub use gauss_legendre::gauss_legendre;
pub use quadrature::{integrate_adaptive, integrate_to_cutoff, oscillation_panel_width, Integrator, QuadratureResult};
pub use sine_integral::sine_integral;
