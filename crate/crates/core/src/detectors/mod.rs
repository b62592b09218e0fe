//! Frame-level outlier detectors over functional samples.
//!
//! [`msplot_detect`] works on multivariate curves; the four comparators need
//! `p = 1`. Every detector reports a finite score per observation (higher is
//! more anomalous) and a threshold such that `label = score > threshold`.

pub mod depth;
mod msplot;
mod univariate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{Center, FunctionalSample, OutlyingnessMode};
use crate::mcd::{CutoffConfig, McdOptions};

pub use depth::{modified_band_depth, modified_epigraph_index, sorted_pointwise_depths, tvd_mss};
pub use msplot::{ms_coordinates, msplot_detect};
pub use univariate::{
    extremal_depth, extremal_depth_detect, fbplot_detect, outliergram_detect,
    outliergram_parabola, tvdmss_detect,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    #[serde(rename = "msplot")]
    MsPlot,
    #[serde(rename = "fbplot")]
    FbPlot,
    #[serde(rename = "tvdmss")]
    Tvdmss,
    #[serde(rename = "ed")]
    ExtremalDepth,
    #[serde(rename = "og")]
    Outliergram,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::MsPlot,
        Method::FbPlot,
        Method::Tvdmss,
        Method::ExtremalDepth,
        Method::Outliergram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::MsPlot => "msplot",
            Method::FbPlot => "fbplot",
            Method::Tvdmss => "tvdmss",
            Method::ExtremalDepth => "ed",
            Method::Outliergram => "og",
        }
    }

    pub fn is_univariate(self) -> bool {
        self != Method::MsPlot
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))
    }
}

/// Which point cloud the robust distance is fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MsSpace {
    /// `(MO^T, VO)`, dimension `p + 1`.
    #[default]
    Full,
    /// `(|MO|, VO)`, dimension 2.
    NormReduced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorConfig {
    pub method: Method,
    pub mode: OutlyingnessMode,
    pub center: Center,
    pub cutoff: CutoffConfig,
    pub ms_space: MsSpace,
    pub mcd_starts: usize,
    pub mcd_h: Option<usize>,
    pub reweight: bool,
    pub fbplot_factor: f64,
    pub og_quantile: f64,
    pub tvd_factor: f64,
    pub mss_factor: f64,
    pub ed_quantile: f64,
    pub seed: u64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            method: Method::MsPlot,
            mode: OutlyingnessMode::SignedScaled,
            center: Center::Median,
            cutoff: CutoffConfig::default(),
            ms_space: MsSpace::Full,
            mcd_starts: 500,
            mcd_h: None,
            reweight: true,
            fbplot_factor: 1.5,
            og_quantile: 0.95,
            tvd_factor: 1.5,
            mss_factor: 3.0,
            ed_quantile: 0.05,
            seed: 0,
        }
    }
}

impl DetectorConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn mcd_options(&self) -> McdOptions {
        McdOptions {
            h: self.mcd_h,
            n_starts: self.mcd_starts,
            seed: self.seed,
            reweight: self.reweight,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cutoff.validate()?;
        let positive = [
            ("fbplot_factor", self.fbplot_factor),
            ("tvd_factor", self.tvd_factor),
            ("mss_factor", self.mss_factor),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("og_quantile", self.og_quantile), ("ed_quantile", self.ed_quantile)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if self.mcd_starts == 0 {
            return Err(Error::InvalidParameter("mcd_starts must be positive".into()));
        }
        Ok(())
    }
}

/// One point of the MS-Plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsPoint {
    /// 1-based frame number (observation position unless remapped).
    pub frame: u64,
    pub norm_mo: f64,
    pub vo: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub method: Method,
    pub labels: Vec<bool>,
    pub scores: Vec<f64>,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms_points: Option<Vec<MsPoint>>,
    /// Set when the MS-Plot fell back to an exact-fit solution because a
    /// majority of observations coincide.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact_fit: bool,
}

impl DetectionResult {
    pub(crate) fn from_scores(method: Method, scores: Vec<f64>, threshold: f64) -> Self {
        let labels = scores.iter().map(|&s| s > threshold).collect();
        Self {
            method,
            labels,
            scores,
            threshold,
            ms_points: None,
            exact_fit: false,
        }
    }

    pub fn n_flagged(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    pub fn flagged(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| l.then_some(i))
            .collect()
    }
}

/// Run the configured detector.
pub fn detect(sample: &FunctionalSample, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    match cfg.method {
        Method::MsPlot => msplot_detect(sample, cfg),
        Method::FbPlot => fbplot_detect(sample, cfg.fbplot_factor),
        Method::Tvdmss => tvdmss_detect(sample, cfg.tvd_factor, cfg.mss_factor),
        Method::ExtremalDepth => extremal_depth_detect(sample, cfg.ed_quantile),
        Method::Outliergram => outliergram_detect(sample, cfg.og_quantile),
    }
}
