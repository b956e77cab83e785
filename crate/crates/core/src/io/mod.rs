//! Text formats: superfunction literals, manifold and pullback files, reports.

mod expr;
mod files;
mod report;

pub use expr::{parse_superfunction, print_superfunction};
pub use files::{parse_manifold_file, parse_pullback_file, write_manifold_file, write_pullback_file};
pub use report::{
    basis_report, brackets_report, decomposition_report, format_combination, gr_report, hc_report,
    manifold_summary, pullback_report, verdict_report, weights_report, Report,
};
