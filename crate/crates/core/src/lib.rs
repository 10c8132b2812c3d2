// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod flow;
pub mod higher;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod radial;
pub mod scattering;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
