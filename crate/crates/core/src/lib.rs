//! Exact Shintani cone and Solomon-Hu computations over real quadratic fields.

pub mod adelic;
pub mod arith;
pub mod cli;
pub mod cones;
pub mod error;
pub mod exactfield;
pub mod group_algebra;
pub mod interval;
pub mod solomon_hu;
pub mod suite;
pub mod theta_reg;

pub use error::{Error, Result};
