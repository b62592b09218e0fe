//! End-to-end stages driven by a [`RunConfig`]. Each stage reads what the
//! previous one wrote under the output directory:
//!
//! ```text
//! out/model.json, out/fit_report.json     fit
//! out/residuals/<video>.fdar              residuals
//! out/detections/<video>.json             detect
//! out/report.json, out/report.csv         evaluate
//! out/plots/<video>.csv, <video>.svg      plot
//! ```
//!
//! Videos are processed in parallel and merged in manifest order, so output
//! bytes do not depend on the thread count.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::detectors::{detect, DetectionResult, DetectorConfig};
use crate::error::{Error, Result};
use crate::io::report::VideoOutcome;
use crate::io::{
    export_msplot, parse_labels, read_frames, read_residuals, write_frames, write_residuals, DatasetManifest,
    FrameFormat, ModelConfig, PlotFormat, Report, RunConfig, TestVideo,
};
use crate::reconstruct::{curve_embed, fit, residual_tensor, ChannelMode, Embedding, FitReport, ReconModel, ResidualTensor};
use crate::synth::{contamination, synthetic_video, ContaminationSpec, VideoSpec};

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::json(format!("encoding {}", path.display()), e))?;
    text.push('\n');
    write_text(path, &text)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(format!("parsing {}", path.display()), e))
}

pub fn model_path(out: &Path) -> PathBuf {
    out.join("model.json")
}

pub fn residual_path(out: &Path, video: &TestVideo) -> PathBuf {
    video
        .residuals
        .clone()
        .unwrap_or_else(|| out.join("residuals").join(format!("{}.fdar", video.display_name())))
}

pub fn detection_path(out: &Path, video: &TestVideo) -> PathBuf {
    out.join("detections").join(format!("{}.json", video.display_name()))
}

fn resolution(d: &DatasetManifest) -> Option<(usize, usize)> {
    d.resolution
}

/// Train the reconstruction model on every training video.
pub fn fit_stage(cfg: &RunConfig, out: &Path) -> Result<(ReconModel, FitReport)> {
    let d = &cfg.dataset;
    if d.train_videos.is_empty() {
        return Err(Error::InsufficientData("manifest lists no training videos".into()));
    }
    let per_video: Vec<_> = d
        .train_videos
        .par_iter()
        .map(|dir| {
            read_frames(dir, d.frame_format, resolution(d)).map_err(|e| e.in_video(dir.display().to_string()))
        })
        .collect::<Result<_>>()?;
    let frames: Vec<_> = per_video.into_iter().flatten().collect();
    let (model, report) = fit(&frames, cfg.model.kind, cfg.model.rank)?;
    create_dir(out)?;
    write_json(&model_path(out), &model)?;
    write_json(&out.join("fit_report.json"), &report)?;
    Ok((model, report))
}

/// Residual tensors of every test video that has no precomputed residuals.
pub fn residual_stage(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let d = &cfg.dataset;
    let todo: Vec<&TestVideo> = d.test_videos.iter().filter(|v| v.residuals.is_none()).collect();
    if todo.is_empty() {
        return Ok(Vec::new());
    }
    let model: ReconModel = read_json(&model_path(out))?;
    create_dir(&out.join("residuals"))?;
    todo.par_iter()
        .map(|v| {
            let name = v.display_name();
            let run = || -> Result<PathBuf> {
                let frames = read_frames(&v.path, d.frame_format, resolution(d))?;
                let tensor = residual_tensor(&model, &frames)?;
                let path = residual_path(out, v);
                write_residuals(&path, &tensor)?;
                Ok(path)
            };
            run().map_err(|e| e.in_video(name))
        })
        .collect()
}

/// Embed residuals and run the configured detector.
pub fn detect_residuals(
    residuals: &ResidualTensor,
    embedding: Embedding,
    channels: ChannelMode,
    detector: &DetectorConfig,
) -> Result<DetectionResult> {
    let sample = curve_embed(residuals, embedding, channels)?;
    detect(&sample, detector)
}

pub fn detect_stage(cfg: &RunConfig, out: &Path) -> Result<Vec<DetectionResult>> {
    let detector = cfg.detector_config();
    create_dir(&out.join("detections"))?;
    cfg.dataset
        .test_videos
        .par_iter()
        .map(|v| {
            let run = || -> Result<DetectionResult> {
                let tensor = read_residuals(&residual_path(out, v))?;
                let result = detect_residuals(&tensor, cfg.embedding, cfg.channels, &detector)?;
                write_json(&detection_path(out, v), &result)?;
                Ok(result)
            };
            run().map_err(|e| e.in_video(v.display_name()))
        })
        .collect()
}

fn load_detections(cfg: &RunConfig, out: &Path) -> Result<Vec<DetectionResult>> {
    cfg.dataset
        .test_videos
        .iter()
        .map(|v| read_json(&detection_path(out, v)).map_err(|e| e.in_video(v.display_name())))
        .collect()
}

pub fn evaluate_stage(cfg: &RunConfig, out: &Path) -> Result<Report> {
    let results = load_detections(cfg, out)?;
    let mut outcomes = Vec::with_capacity(results.len());
    for (v, result) in cfg.dataset.test_videos.iter().zip(&results) {
        let name = v.display_name();
        let labels = v
            .labels
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("no label file in the manifest".into()).in_video(&name))?;
        let text = fs::read_to_string(labels)
            .map_err(|e| Error::io(format!("reading labels {}", labels.display()), e).in_video(&name))?;
        let spec = parse_labels(&text).map_err(|e| e.in_video(&name))?;
        outcomes.push(VideoOutcome {
            name,
            result,
            truth: spec.truth(),
        });
    }
    let method = cfg.detector.method;
    let report = Report::build(&cfg.dataset.name, method, &outcomes)?;
    write_text(&out.join("report.json"), &report.to_json())?;
    write_text(&out.join("report.csv"), &report.to_csv())?;
    Ok(report)
}

pub fn plot_stage(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let results = load_detections(cfg, out)?;
    let dir = out.join("plots");
    create_dir(&dir)?;
    let mut written = Vec::new();
    for (v, result) in cfg.dataset.test_videos.iter().zip(&results) {
        let name = v.display_name();
        for (format, ext) in [(PlotFormat::Csv, "csv"), (PlotFormat::Svg, "svg")] {
            let path = dir.join(format!("{name}.{ext}"));
            export_msplot(result, &path, format).map_err(|e| e.in_video(&name))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Every stage in order; the plot stage runs only for MS-Plot detections.
pub fn run_all(cfg: &RunConfig, out: &Path) -> Result<Report> {
    if cfg.dataset.test_videos.iter().any(|v| v.residuals.is_none()) {
        fit_stage(cfg, out)?;
        residual_stage(cfg, out)?;
    }
    detect_stage(cfg, out)?;
    let report = evaluate_stage(cfg, out)?;
    if cfg.detector.method == crate::detectors::Method::MsPlot {
        plot_stage(cfg, out)?;
    }
    Ok(report)
}

/// Write the synthetic video (PGM frames, label file and a ready-to-run
/// config using an 8x8 block grid) plus one contamination sample as CSV.
/// Returns the path of the config.
pub fn write_synthetic_suite(out: &Path, seed: u64) -> Result<PathBuf> {
    let video = synthetic_video(seed, &VideoSpec::default())?;
    let root = out.join("video");
    write_frames(&root.join("train"), &video.train, FrameFormat::Pgm, 4)?;
    write_frames(&root.join("test").join("intruder"), &video.test, FrameFormat::Pgm, 4)?;
    write_text(&root.join("intruder.txt"), &video.labels.render())?;
    let cfg = RunConfig {
        dataset: DatasetManifest {
            name: "synthetic".into(),
            train_videos: vec!["train".into()],
            test_videos: vec![TestVideo {
                path: "test/intruder".into(),
                labels: Some("intruder.txt".into()),
                residuals: None,
                name: None,
            }],
            frame_format: FrameFormat::Pgm,
            resolution: Some((video.test[0].height, video.test[0].width)),
        },
        model: ModelConfig::default(),
        embedding: Embedding::Blocks(8),
        channels: ChannelMode::PerChannel,
        detector: DetectorConfig::default(),
        seed,
    };
    let cfg_path = root.join("config.json");
    write_text(&cfg_path, &(cfg.to_json() + "\n"))?;

    let c = contamination(seed, &ContaminationSpec::default())?;
    let mut csv = String::from("curve,kind");
    for t in 0..c.sample.n_points() {
        csv.push_str(&format!(",t{t}"));
    }
    csv.push('\n');
    for (i, kind) in c.kinds.iter().enumerate() {
        let kind = serde_json::to_value(kind).expect("kind serialises");
        csv.push_str(&format!("{},{}", i + 1, kind.as_str().unwrap_or_default()));
        for v in c.sample.curve(i) {
            csv.push_str(&format!(",{v:?}"));
        }
        csv.push('\n');
    }
    create_dir(&out.join("contamination"))?;
    write_text(&out.join("contamination").join(format!("seed_{seed}.csv")), &csv)?;
    Ok(cfg_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_detections_name_the_video() {
        let dir = tempfile::tempdir().unwrap();
        let cfg: RunConfig =
            serde_json::from_str(r#"{"dataset": {"name": "x", "test_videos": [{"path": "v7"}]}}"#).unwrap();
        let err = evaluate_stage(&cfg, dir.path()).unwrap_err();
        assert!(err.to_string().starts_with("video v7:"));
    }
}
