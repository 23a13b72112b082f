//! Command-line front end for the dual-radix orbit toolkit: JSON system
//! descriptions, rendering, seeded random corpora and the command bodies.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod input;
pub mod render;

pub use error::CliError;
