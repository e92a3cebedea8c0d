#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod cli;
pub mod dephasing;
pub mod doublewell;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod specfun;

pub use error::{Error, Result};
