pub mod catalog;
pub mod classify;
pub mod cyclo;
pub mod error;
pub mod eta;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use lattice::{EvenLattice, DEFAULT_ENUM_CAP};
pub use rational::{QmodZ, Rational};
