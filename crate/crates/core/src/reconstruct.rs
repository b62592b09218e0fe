//! Baseline reconstruction models, residual matrices and the embedding of
//! residual matrices as functional observations.
//!
//! Pixels are stored row-major with channels last: `(row * W + col) * C + ch`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::FunctionalSample;
use crate::stats::median_in_place;

/// ITU-R 601 luma weights.
pub const LUMA: [f64; 3] = [0.299, 0.587, 0.114];

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Time position (1-based for frames read from disk).
    pub index: u64,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub pixels: Vec<f64>,
}

impl Frame {
    pub fn new(index: u64, height: usize, width: usize, channels: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::InvalidParameter(format!(
                "frame {index}: dimensions must be positive, got {height}x{width}x{channels}"
            )));
        }
        if pixels.len() != height * width * channels {
            return Err(Error::ShapeMismatch {
                expected: format!("{} pixels", height * width * channels),
                got: format!("{}", pixels.len()),
            });
        }
        if let Some(pos) = pixels.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter(format!(
                "frame {index}: pixel {pos} = {} lies outside [0, 1]",
                pixels[pos]
            )));
        }
        Ok(Self {
            index,
            height,
            width,
            channels,
            pixels,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    TemporalMedian,
    LowRank,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconModel {
    pub kind: ModelKind,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub median_image: Option<Vec<f64>>,
    /// Orthonormal basis vectors, one per entry, each of length `H * W * C`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_vector: Option<Vec<f64>>,
}

/// Training mean squared error per pass. The median model has one pass; the
/// low-rank model reports one entry per basis size `0..=r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub pass_mse: Vec<f64>,
}

fn check_same_dims(frames: &[Frame]) -> Result<(usize, usize, usize)> {
    let dims = frames[0].dims();
    for f in frames {
        if f.dims() != dims {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}x{}", dims.0, dims.1, dims.2),
                got: format!("{}x{}x{} (frame {})", f.height, f.width, f.channels, f.index),
            });
        }
    }
    Ok(dims)
}

/// Train a reconstruction model on anomaly-free frames.
pub fn fit(frames: &[Frame], kind: ModelKind, rank: usize) -> Result<(ReconModel, FitReport)> {
    if frames.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 training frames, got {}",
            frames.len()
        )));
    }
    let (height, width, channels) = check_same_dims(frames)?;
    let len = height * width * channels;
    match kind {
        ModelKind::TemporalMedian => {
            let median: Vec<f64> = (0..len)
                .into_par_iter()
                .map_init(
                    || Vec::with_capacity(frames.len()),
                    |buf, k| {
                        buf.clear();
                        buf.extend(frames.iter().map(|f| f.pixels[k]));
                        median_in_place(buf)
                    },
                )
                .collect();
            let mse = frames
                .iter()
                .map(|f| squared_error(&f.pixels, &median))
                .sum::<f64>()
                / (frames.len() * len) as f64;
            let model = ReconModel {
                kind,
                height,
                width,
                channels,
                median_image: Some(median),
                basis: None,
                mean_vector: None,
            };
            Ok((model, FitReport { pass_mse: vec![mse] }))
        }
        ModelKind::LowRank => fit_low_rank(frames, height, width, channels, rank),
    }
}

fn squared_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn fit_low_rank(
    frames: &[Frame],
    height: usize,
    width: usize,
    channels: usize,
    rank: usize,
) -> Result<(ReconModel, FitReport)> {
    let n = frames.len();
    let len = height * width * channels;
    if rank >= n.min(len) {
        return Err(Error::InsufficientData(format!(
            "rank {rank} needs more than {rank} frames and pixels, got {n} frames of {len} values"
        )));
    }
    let mut mean = vec![0.0; len];
    for f in frames {
        for (m, v) in mean.iter_mut().zip(&f.pixels) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered = DMatrix::from_fn(n, len, |i, k| frames[i].pixels[k] - mean[k]);

    let svd = centered.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));
    let basis: Vec<Vec<f64>> = order[..rank]
        .iter()
        .map(|&j| v_t.row(j).iter().copied().collect())
        .collect();

    // residual energy after projecting onto the first k basis vectors
    let total = centered.norm_squared();
    let mut pass_mse = Vec::with_capacity(rank + 1);
    pass_mse.push(total / (n * len) as f64);
    let mut explained = 0.0;
    for b in &basis {
        let bv = nalgebra::DVector::from_column_slice(b);
        explained += (&centered * bv).norm_squared();
        pass_mse.push((total - explained).max(0.0) / (n * len) as f64);
    }
    let model = ReconModel {
        kind: ModelKind::LowRank,
        height,
        width,
        channels,
        median_image: None,
        basis: Some(basis),
        mean_vector: Some(mean),
    };
    Ok((model, FitReport { pass_mse }))
}

impl ReconModel {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.channels)
    }

    /// Reconstruction of `frame`, clamped to `[0, 1]`.
    pub fn reconstruct(&self, frame: &Frame) -> Result<Vec<f64>> {
        if frame.dims() != self.dims() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}x{}", self.height, self.width, self.channels),
                got: format!(
                    "{}x{}x{} (frame {})",
                    frame.height, frame.width, frame.channels, frame.index
                ),
            });
        }
        let len = frame.pixels.len();
        let recon = match self.kind {
            ModelKind::TemporalMedian => self.median_image.clone().ok_or_else(|| missing("median_image"))?,
            ModelKind::LowRank => {
                let mean = self.mean_vector.as_ref().ok_or_else(|| missing("mean_vector"))?;
                let basis = self.basis.as_ref().ok_or_else(|| missing("basis"))?;
                if mean.len() != len || basis.iter().any(|b| b.len() != len) {
                    return Err(Error::InvalidParameter("low-rank model vectors have the wrong length".into()));
                }
                let centered: Vec<f64> = frame.pixels.iter().zip(mean).map(|(x, m)| x - m).collect();
                let mut out = mean.clone();
                for b in basis {
                    let coef: f64 = b.iter().zip(&centered).map(|(u, c)| u * c).sum();
                    for (o, u) in out.iter_mut().zip(b) {
                        *o += coef * u;
                    }
                }
                out
            }
        };
        if recon.len() != len {
            return Err(Error::InvalidParameter("median image has the wrong length".into()));
        }
        Ok(recon.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
    }
}

fn missing(field: &str) -> Error {
    Error::InvalidParameter(format!("reconstruction model is missing {field}"))
}

/// Elementwise `|frame - reconstruction|`, both clamped to `[0, 1]`.
pub fn residual(model: &ReconModel, frame: &Frame) -> Result<Vec<f64>> {
    let recon = model.reconstruct(frame)?;
    Ok(frame
        .pixels
        .iter()
        .zip(&recon)
        .map(|(x, r)| (x.clamp(0.0, 1.0) - r).abs())
        .collect())
}

/// Per-frame residual matrices, frame-major, row-major, channels last.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTensor {
    pub n_frames: usize,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub data: Vec<f32>,
}

impl ResidualTensor {
    pub fn new(n_frames: usize, height: usize, width: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != n_frames * height * width * channels {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values for {n_frames}x{height}x{width}x{channels}", n_frames * height * width * channels),
                got: format!("{}", data.len()),
            });
        }
        if let Some(pos) = data.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "residual value {} at frame {} is negative or non-finite",
                data[pos],
                pos / (height * width * channels).max(1) + 1
            )));
        }
        Ok(Self {
            n_frames,
            height,
            width,
            channels,
            data,
        })
    }

    pub fn frame_len(&self) -> usize {
        self.height * self.width * self.channels
    }

    pub fn frame(&self, i: usize) -> &[f32] {
        let len = self.frame_len();
        &self.data[i * len..(i + 1) * len]
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().map(|&v| v as f64).sum::<f64>() / self.data.len() as f64
    }
}

/// Residuals of every frame against `model`, computed in parallel.
pub fn residual_tensor(model: &ReconModel, frames: &[Frame]) -> Result<ResidualTensor> {
    let per_frame: Vec<Vec<f64>> = frames.par_iter().map(|f| residual(model, f)).collect::<Result<_>>()?;
    let data = per_frame.into_iter().flatten().map(|v| v as f32).collect();
    ResidualTensor::new(frames.len(), model.height, model.width, model.channels, data)
}

/// How a residual matrix becomes a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    /// `G x G` block means in row-major block order; the last row and column
    /// of blocks absorb the remainder pixels.
    Blocks(usize),
    /// Every pixel in row-major order.
    Flatten,
}

impl Default for Embedding {
    fn default() -> Self {
        Embedding::Blocks(12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelMode {
    /// Each channel is one variate.
    #[default]
    PerChannel,
    /// Collapse 3 channels with luma weights (other channel counts are
    /// averaged) to a single variate.
    Luma,
}

/// Half-open pixel ranges of the blocks along an axis of `len` pixels.
pub fn block_bounds(len: usize, grid: usize) -> Vec<(usize, usize)> {
    let size = len / grid;
    (0..grid)
        .map(|g| {
            let start = g * size;
            let end = if g + 1 == grid { len } else { start + size };
            (start, end)
        })
        .collect()
}

/// Turn each residual frame into one functional observation with uniform
/// domain weights.
pub fn curve_embed(res: &ResidualTensor, embedding: Embedding, channels: ChannelMode) -> Result<FunctionalSample> {
    if res.n_frames == 0 {
        return Err(Error::InsufficientData("residual tensor has no frames".into()));
    }
    let (h, w, c) = (res.height, res.width, res.channels);
    let p = match channels {
        ChannelMode::PerChannel => c,
        ChannelMode::Luma => 1,
    };
    let weights: Vec<f64> = match channels {
        ChannelMode::Luma if c == 3 => LUMA.to_vec(),
        ChannelMode::Luma => vec![1.0 / c as f64; c],
        ChannelMode::PerChannel => Vec::new(),
    };
    let value = |frame: &[f32], pix: usize, var: usize| -> f64 {
        match channels {
            ChannelMode::PerChannel => frame[pix * c + var] as f64,
            ChannelMode::Luma => (0..c).map(|k| weights[k] * frame[pix * c + k] as f64).sum(),
        }
    };
    let (rows, cols) = match embedding {
        Embedding::Blocks(g) => {
            if g == 0 || g > h || g > w {
                return Err(Error::InvalidParameter(format!(
                    "grid {g} must lie in 1..={} for {h}x{w} residuals",
                    h.min(w)
                )));
            }
            (block_bounds(h, g), block_bounds(w, g))
        }
        Embedding::Flatten => ((0..h).map(|r| (r, r + 1)).collect(), (0..w).map(|q| (q, q + 1)).collect()),
    };
    let n_points = rows.len() * cols.len();
    let curves: Vec<Vec<f64>> = (0..res.n_frames)
        .into_par_iter()
        .map(|i| {
            let frame = res.frame(i);
            let mut out = Vec::with_capacity(n_points * p);
            for &(r0, r1) in &rows {
                for &(c0, c1) in &cols {
                    let area = ((r1 - r0) * (c1 - c0)) as f64;
                    for var in 0..p {
                        let mut sum = 0.0;
                        for r in r0..r1 {
                            for q in c0..c1 {
                                sum += value(frame, r * w + q, var);
                            }
                        }
                        out.push(sum / area);
                    }
                }
            }
            out
        })
        .collect();
    FunctionalSample::new(curves.concat(), res.n_frames, n_points, p)
}
