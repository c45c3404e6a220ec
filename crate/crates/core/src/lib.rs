#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod curves;
pub mod derived;
pub mod invariants;
pub mod mult_struct;
pub mod rh;
