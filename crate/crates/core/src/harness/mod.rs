//! Experiment plumbing behind the `hunt` command line tool.

pub mod config;
pub mod lcg;
pub mod svg;
pub mod sweep;

pub use config::{ExperimentConfig, Placement, RadiusSpec, RangeSpec};
pub use lcg::Lcg64;
pub use svg::{render_svg, write_svg, SvgScene};
pub use sweep::{run_sweep, simulate, write_csv, write_csv_file, Hunt, SweepRow, CSV_HEADER};
