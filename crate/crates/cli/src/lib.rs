//! Config-driven experiment runner for `qnil-core`.
//!
//! One JSON config describes one experiment; [`runner::run`] writes the
//! config echo, CSV/JSON/SVG data files, a text summary and a manifest into
//! the output directory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod format;
pub mod runner;
pub mod svg;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use runner::{execute, run, Manifest, RunError};
pub use svg::{contour_plot, emit_contour_svg, ContourPlot};
