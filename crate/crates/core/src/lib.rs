#![allow(clippy::manual_is_multiple_of)]

pub mod classifier;
pub mod cli;
pub mod endgame;
pub mod error;
pub mod frey;
pub mod kernel;
pub mod newform;
pub mod report;
pub mod sieve;

mod json;

pub use error::{Error, Result};
