//! Exactly solvable non-CSS plaquette model on the periodic bitruncated cubic
//! honeycomb.

pub mod code;
pub mod error;
pub mod excitations;
pub mod lattice;
pub mod montecarlo;
pub mod partition;
pub mod pauli;
pub mod verify;

pub use error::{Error, Result};
