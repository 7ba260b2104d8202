//! Two-dimensional multipath channel simulation with image sources and
//! double Fresnel diffraction, plus the analyses used to compare how sub-6 GHz
//! and mmWave signals respond to blockage.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod fresnel;
pub mod geometry;
pub mod propagation;
pub mod scenario;

pub use error::{Error, Result};
