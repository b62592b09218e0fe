//! Frame directories: one file per frame, named by its zero-padded index.

use std::fs;
use std::path::{Path, PathBuf};

use super::config::FrameFormat;
use super::pgm::{self, Greymap};
use crate::error::{Error, Result};
use crate::reconstruct::Frame;

fn frame_index(path: &Path, ext: &str) -> Option<u64> {
    if path.extension()?.to_str()? != ext {
        return None;
    }
    let stem = path.file_stem()?.to_str()?;
    if stem.is_empty() || !stem.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    stem.parse().ok()
}

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::CorruptFile {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

/// Load every frame of `dir` in index order. Files whose stem is not a
/// number are ignored; a gap between the smallest and largest index is an
/// error. `resolution` is `(H, W)`; raw files need it, PGM files are checked
/// against it when given.
pub fn read_frames(dir: &Path, format: FrameFormat, resolution: Option<(usize, usize)>) -> Result<Vec<Frame>> {
    let ext = format.extension();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(format!("reading frame directory {}", dir.display()), e))?;
    let mut indexed: Vec<(u64, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(format!("listing {}", dir.display()), e))?;
        let path = entry.path();
        if let Some(i) = frame_index(&path, ext) {
            indexed.push((i, path));
        }
    }
    indexed.sort();
    if indexed.is_empty() {
        return Err(Error::InsufficientData(format!("no .{ext} frames in {}", dir.display())));
    }
    if let Some(w) = indexed.windows(2).find(|w| w[1].0 != w[0].0 + 1) {
        let index = if w[1].0 == w[0].0 { w[0].0 } else { w[0].0 + 1 };
        return Err(Error::MissingFrame {
            dir: dir.to_path_buf(),
            index,
        });
    }
    indexed
        .iter()
        .map(|(i, path)| read_one(path, *i, format, resolution))
        .collect()
}

fn read_one(path: &Path, index: u64, format: FrameFormat, resolution: Option<(usize, usize)>) -> Result<Frame> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading frame {}", path.display()), e))?;
    let (h, w, values) = match format {
        FrameFormat::Pgm => {
            let img = pgm::decode(&bytes).map_err(|r| corrupt(path, r))?;
            if let Some((h, w)) = resolution {
                if (img.height, img.width) != (h, w) {
                    return Err(corrupt(
                        path,
                        format!("image is {}x{}, manifest says {h}x{w}", img.height, img.width),
                    ));
                }
            }
            (img.height, img.width, img.to_unit())
        }
        FrameFormat::Raw => {
            let (h, w) = resolution.ok_or_else(|| {
                Error::InvalidParameter("raw frames need a resolution in the manifest".into())
            })?;
            if bytes.len() != h * w {
                return Err(corrupt(path, format!("{} bytes, expected {h}x{w} = {}", bytes.len(), h * w)));
            }
            (h, w, bytes.iter().map(|&b| b as f64 / 255.0).collect())
        }
    };
    Frame::new(index, h, w, 1, values)
}

/// Write single-channel frames as `{index:0width$}.{ext}`.
pub fn write_frames(dir: &Path, frames: &[Frame], format: FrameFormat, digits: usize) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    for f in frames {
        if f.channels != 1 {
            return Err(Error::InvalidParameter(format!(
                "frame {} has {} channels; only greymaps can be written",
                f.index, f.channels
            )));
        }
        let img = Greymap::from_unit(f.width, f.height, &f.pixels);
        let bytes = match format {
            FrameFormat::Pgm => pgm::encode(&img),
            FrameFormat::Raw => img.data,
        };
        let path = dir.join(format!("{:0digits$}.{}", f.index, format.extension()));
        fs::write(&path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    }
    Ok(())
}
