//! Functional-data anomaly detection on reconstruction residuals.
//!
//! Frames are reconstructed by a baseline model, the per-frame residual
//! matrices are embedded as curves, and the MS-Plot detector (directional
//! outlyingness summarised as mean and variation, scored by a robust
//! Mahalanobis distance under FAST-MCD) flags anomalous frames. Four
//! depth-based detectors serve as comparators.

pub mod detectors;
pub mod error;
pub mod functional;
pub mod io;
pub mod mcd;
pub mod metrics;
pub mod pipeline;
pub mod reconstruct;
pub mod stats;
pub mod synth;

pub use detectors::{detect, DetectionResult, DetectorConfig, Method, MsPoint};
pub use error::{Error, Result};
pub use functional::{FunctionalSample, OutlyingnessMode, OutlyingnessSummary};
pub use mcd::{CutoffConfig, CutoffMethod, McdOptions, RobustEstimate};
pub use metrics::{ConfusionCounts, MetricSet};
pub use reconstruct::{ChannelMode, Embedding, Frame, ModelKind, ReconModel, ResidualTensor};
