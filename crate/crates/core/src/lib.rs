//! Entanglement dynamics of a qubit-qutrit pair under independent
//! spontaneous decay.

pub mod contour;
pub mod dynamics;
pub mod error;
pub mod esd;
pub mod family;
pub mod linalg;
pub mod random;
pub mod schmidt;
pub mod state;

pub use error::{Error, Result};
