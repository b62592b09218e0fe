//! Run configuration: one JSON document holding the dataset manifest, the
//! reconstruction and embedding choices, detector settings and the seed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::detectors::DetectorConfig;
use crate::error::{Error, Result};
use crate::reconstruct::{ChannelMode, Embedding, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameFormat {
    /// Binary greymap, maxval up to 255.
    #[default]
    Pgm,
    /// Headerless `H * W` bytes, one per pixel.
    Raw,
}

impl FrameFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FrameFormat::Pgm => "pgm",
            FrameFormat::Raw => "raw",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVideo {
    /// Directory of frames.
    pub path: PathBuf,
    /// Range file with the anomalous frames.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<PathBuf>,
    /// Precomputed FDAR residuals; when set, the residual step is skipped for
    /// this video.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<PathBuf>,
    /// Report name; defaults to the directory name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl TestVideo {
    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| self.path.display().to_string())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    #[serde(default)]
    pub train_videos: Vec<PathBuf>,
    pub test_videos: Vec<TestVideo>,
    #[serde(default)]
    pub frame_format: FrameFormat,
    /// `(H, W)`; required for raw frames, checked for PGM frames.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub kind: ModelKind,
    /// Basis size for the low-rank model.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dataset: DatasetManifest,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub embedding: Embedding,
    #[serde(default)]
    pub channels: ChannelMode,
    #[serde(default)]
    pub detector: DetectorConfig,
    /// Seeds the detector; overrides `detector.seed`.
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    /// Read a config file; relative paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::json(format!("parsing config {}", path.display()), e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.dataset.train_videos.iter_mut().for_each(fix);
        for v in &mut self.dataset.test_videos {
            fix(&mut v.path);
            v.labels.as_mut().map(fix);
            v.residuals.as_mut().map(fix);
        }
    }

    /// The detector settings with the run seed applied.
    pub fn detector_config(&self) -> DetectorConfig {
        DetectorConfig {
            seed: self.seed,
            ..self.detector.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = &self.dataset;
        if d.test_videos.is_empty() {
            return Err(Error::InvalidParameter("manifest lists no test videos".into()));
        }
        if d.train_videos.iter().chain(d.test_videos.iter().map(|v| &v.path)).any(|p| p.as_os_str().is_empty()) {
            return Err(Error::InvalidParameter("manifest contains an empty path".into()));
        }
        if let Some((h, w)) = d.resolution {
            if h == 0 || w == 0 {
                return Err(Error::InvalidParameter(format!("resolution must be positive, got {h}x{w}")));
            }
        }
        if d.frame_format == FrameFormat::Raw && d.resolution.is_none() {
            return Err(Error::InvalidParameter("raw frames need a resolution".into()));
        }
        let mut names: Vec<String> = d.test_videos.iter().map(TestVideo::display_name).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!("duplicate test video name {:?}", w[0])));
        }
        self.detector.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let json = r#"{"dataset": {"name": "toy", "train_videos": ["train"],
            "test_videos": [{"path": "test/v1", "labels": "v1.txt"}]}}"#;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(&path, json).unwrap();
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.embedding, Embedding::Blocks(12));
        assert_eq!(cfg.dataset.train_videos[0], dir.path().join("train"));
        assert_eq!(cfg.dataset.test_videos[0].display_name(), "v1");
        let back: RunConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_duplicates_and_raw_without_resolution() {
        let mut cfg: RunConfig = serde_json::from_str(
            r#"{"dataset": {"name": "x", "test_videos": [{"path": "a/v"}, {"path": "b/v"}]}}"#,
        )
        .unwrap();
        assert!(cfg.validate().is_err());
        cfg.dataset.test_videos.pop();
        assert!(cfg.validate().is_ok());
        cfg.dataset.frame_format = FrameFormat::Raw;
        assert!(cfg.validate().is_err());
    }
}
