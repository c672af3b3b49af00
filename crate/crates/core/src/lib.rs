#![no_std]
#![cfg_attr(test, allow(unused_imports))]
extern crate alloc;

pub mod constraints;
pub mod error;
pub mod math;
pub mod partition;
pub mod problem;
pub mod selection;
pub mod solve;

pub use error::{Error, Result};
