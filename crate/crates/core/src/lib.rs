pub mod cli;
pub mod derivation;
pub mod error;
pub mod geometry;
pub mod grassmann;
pub mod io;
pub mod lie;
pub mod scalar;

pub use error::{Error, Result};
