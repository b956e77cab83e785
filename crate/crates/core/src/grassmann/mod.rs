//! Grassmann-valued functions on a chart and the substitution engine that
//! applies morphism pullbacks to them.

mod pullback;
mod superfunction;

pub use pullback::PullbackData;
pub use superfunction::{ChartId, OddMultiIndex, Parity, SuperFunction};
