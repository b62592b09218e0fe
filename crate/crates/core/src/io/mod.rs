//! File formats: PGM frames, FDAR residual tensors, label ranges, MS-Plot
//! exports, run configuration and reports.

pub mod config;
pub mod fdar;
pub mod frames;
pub mod labels;
pub mod pgm;
pub mod plot;
pub mod report;

pub use config::{DatasetManifest, FrameFormat, ModelConfig, RunConfig, TestVideo};
pub use fdar::{decode_residuals, encode_residuals, read_residuals, write_residuals};
pub use frames::{read_frames, write_frames};
pub use labels::{parse_labels, LabelSpec};
pub use plot::{msplot_csv, msplot_svg, parse_msplot_csv, export_msplot, PlotFormat};
pub use report::{MetricRow, Report, VideoOutcome, VideoRow};
