//! Quantum correlations of three-qubit X states: local quantum uncertainty,
//! negativity and quantum discord, with local noise channels and numerical
//! cross-checks for every closed form.

pub mod channels;
pub mod cli;
pub mod discord;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod lqu;
pub mod monogamy;
pub mod negativity;
pub mod optimize;
pub mod oracles;
pub mod output;
pub mod sampling;
pub mod xstate;

pub use error::{Error, Result};
