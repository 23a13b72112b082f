#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arith;
pub mod audit;
pub mod error;
pub mod graded;
pub mod integrality;
pub mod engine;
pub mod orbit;
pub mod system;

pub use arith::{Int, Rational};
pub use error::{Error, Result};
