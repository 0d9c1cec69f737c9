//! Run configuration, CSV output and plot scripts.

pub mod config;
pub mod csv;
pub mod plot;

pub use config::{parse_config, ConfigEntries, RunConfig, SchemeChoice, Snapshots};
pub use csv::{format_errors_csv, format_trajectory_csv, read_errors_csv, write_errors_csv, write_trajectory_csv};
pub use plot::{emit_plot_script, PlotSource};
