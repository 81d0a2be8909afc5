//! Exact error sums for periodic continued fractions.

pub mod cfrac;
pub mod cli;
pub mod error;
pub mod errsum;
pub mod eulercf;
pub mod exactnum;
pub mod jpa;
pub mod numeric;
pub mod units;

pub use error::{Error, Result};
