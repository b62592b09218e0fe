//! Evaluation reports: one row per video with metrics as percentages to two
//! decimals, then unweighted and frame-weighted means.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detectors::{DetectionResult, Method};
use crate::error::{Error, Result};
use crate::metrics::{aggregate, evaluate, MetricSet};

fn pct(v: f64) -> f64 {
    (v * 10_000.0).round() / 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub tpr: f64,
    pub fpr: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub f1: f64,
    pub auc: Option<f64>,
}

impl From<&MetricSet> for MetricRow {
    fn from(m: &MetricSet) -> Self {
        Self {
            tpr: pct(m.tpr),
            fpr: pct(m.fpr),
            accuracy: pct(m.accuracy),
            precision: pct(m.precision),
            f1: pct(m.f1),
            auc: m.auc.map(pct),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoRow {
    pub name: String,
    pub frames: usize,
    #[serde(flatten)]
    pub metrics: MetricRow,
    /// Ratios with a zero denominator, reported as 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<String>,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact_fit: bool,
    pub truth: Vec<u8>,
    pub labels: Vec<u8>,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub dataset: String,
    pub method: Method,
    pub videos: Vec<VideoRow>,
    /// Plain mean over videos; AUC over videos where it is defined.
    pub mean_unweighted: MetricRow,
    /// Mean weighted by each video's frame count.
    pub mean_frame_weighted: MetricRow,
}

pub struct VideoOutcome<'a> {
    pub name: String,
    pub result: &'a DetectionResult,
    pub truth: Vec<bool>,
}

fn bits(v: &[bool]) -> Vec<u8> {
    v.iter().map(|&b| b as u8).collect()
}

impl Report {
    pub fn build(dataset: &str, method: Method, videos: &[VideoOutcome]) -> Result<Self> {
        let mut rows = Vec::with_capacity(videos.len());
        let mut sets = Vec::with_capacity(videos.len());
        for v in videos {
            let r = v.result;
            if r.labels.len() != v.truth.len() {
                return Err(Error::ShapeMismatch {
                    expected: format!("{} frames in the labels of video {}", v.truth.len(), v.name),
                    got: format!("{} detections", r.labels.len()),
                });
            }
            let m = evaluate(&r.labels, &r.scores, &v.truth)?;
            rows.push(VideoRow {
                name: v.name.clone(),
                frames: v.truth.len(),
                metrics: MetricRow::from(&m),
                undefined: m.undefined.clone(),
                threshold: r.threshold,
                exact_fit: r.exact_fit,
                truth: bits(&v.truth),
                labels: bits(&r.labels),
                scores: r.scores.clone(),
            });
            sets.push(m);
        }
        let frames: Vec<usize> = rows.iter().map(|r| r.frames).collect();
        let agg = aggregate(&sets, &frames)?;
        Ok(Self {
            dataset: dataset.to_string(),
            method,
            videos: rows,
            mean_unweighted: MetricRow::from(&agg.unweighted),
            mean_frame_weighted: MetricRow::from(&agg.frame_weighted),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Table layout: `video,frames,tpr,fpr,accuracy,precision,f1,auc`, AUC
    /// left empty where undefined.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("video,frames,tpr,fpr,accuracy,precision,f1,auc\n");
        let mut row = |name: &str, frames: String, m: &MetricRow| {
            let auc = m.auc.map(|a| format!("{a:.2}")).unwrap_or_default();
            writeln!(
                s,
                "{name},{frames},{:.2},{:.2},{:.2},{:.2},{:.2},{auc}",
                m.tpr, m.fpr, m.accuracy, m.precision, m.f1
            )
            .expect("writing to a String");
        };
        for v in &self.videos {
            row(&v.name, v.frames.to_string(), &v.metrics);
        }
        let total: usize = self.videos.iter().map(|v| v.frames).sum();
        row("mean_unweighted", total.to_string(), &self.mean_unweighted);
        row("mean_frame_weighted", total.to_string(), &self.mean_frame_weighted);
        s
    }
}
