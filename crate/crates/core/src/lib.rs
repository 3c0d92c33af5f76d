#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod abgroup;
pub mod arith;
pub mod chow;
pub mod declared;
pub mod divisor;
pub mod error;
pub mod orders;
pub mod quadfield;

pub use error::{Error, Result};
