//! Kinematics of rotating reference frames in special relativity: Minkowski
//! vectors and maps, world lines, frames as four-velocity fields, Lie and
//! Fermi-Walker transport, Foucault precession and Thomas rotation.

pub mod acceptance;
pub mod error;
pub mod frames;
pub mod minkowski;
pub mod ode;
pub mod precession;
pub mod report;
pub mod scenario;
pub mod transport;
pub mod worldline;

pub use error::{Error, Result};
pub use minkowski::{LinMap4, Vec4};
