//! Logical entropy for classical partitions and quantum states.

pub mod channels;
pub mod classical;
pub mod cli;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod postselect;
pub mod quantum;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
