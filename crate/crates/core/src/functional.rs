//! Functional observations and directional outlyingness.
//!
//! A [`FunctionalSample`] holds `n` curves observed on a common grid of `T`
//! domain points, each point carrying `p` variates. Outlyingness is measured
//! coordinatewise against the pointwise center of the sample, then summarised
//! per curve by its weighted mean (MO) and weighted variation (VO) over the
//! domain. FO = |MO|^2 + VO.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::median_in_place;

/// Consistency constant that makes the MAD estimate the standard deviation
/// under normality.
pub const MAD_CONSISTENCY: f64 = 1.4826;

/// `n_obs x T x p` real tensor plus domain weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample {
    values: Vec<f64>,
    weights: Vec<f64>,
    n_obs: usize,
    n_points: usize,
    n_vars: usize,
}

impl FunctionalSample {
    /// Build a sample with uniform domain weights from observation-major,
    /// point-major, variate-last values.
    pub fn new(values: Vec<f64>, n_obs: usize, n_points: usize, n_vars: usize) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::InvalidSample("no domain points".into()));
        }
        let weights = vec![1.0 / n_points as f64; n_points];
        Self::with_weights(values, weights, n_obs, n_vars)
    }

    pub fn with_weights(
        values: Vec<f64>,
        weights: Vec<f64>,
        n_obs: usize,
        n_vars: usize,
    ) -> Result<Self> {
        let n_points = weights.len();
        if n_obs == 0 || n_points == 0 || n_vars == 0 {
            return Err(Error::InvalidSample(format!(
                "dimensions must be positive, got n={n_obs}, T={n_points}, p={n_vars}"
            )));
        }
        if values.len() != n_obs * n_points * n_vars {
            return Err(Error::InvalidSample(format!(
                "expected {} values for n={n_obs}, T={n_points}, p={n_vars}, got {}",
                n_obs * n_points * n_vars,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(format!("non-finite value at flat index {pos}")));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidSample("domain weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSample(format!("domain weights sum to {total}, not 1")));
        }
        Ok(Self {
            values,
            weights,
            n_obs,
            n_points,
            n_vars,
        })
    }

    /// Univariate sample from one row per curve.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_points = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_points) {
            return Err(Error::InvalidSample("curves have different lengths".into()));
        }
        let values = rows.iter().flatten().copied().collect();
        Self::new(values, rows.len(), n_points, 1)
    }

    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, obs: usize, point: usize, var: usize) -> f64 {
        self.values[(obs * self.n_points + point) * self.n_vars + var]
    }

    /// All `T * p` values of one curve.
    pub fn curve(&self, obs: usize) -> &[f64] {
        let len = self.n_points * self.n_vars;
        &self.values[obs * len..(obs + 1) * len]
    }

    /// Values of variate `var` across observations at one domain point.
    pub fn cross_section(&self, point: usize, var: usize) -> Vec<f64> {
        (0..self.n_obs).map(|i| self.get(i, point, var)).collect()
    }

    pub(crate) fn require_univariate(&self) -> Result<()> {
        if self.n_vars != 1 {
            return Err(Error::RequiresUnivariate(self.n_vars));
        }
        Ok(())
    }

    /// Same sample with every value transformed by `f`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Observations reordered (or subset) by `order`.
    pub fn select(&self, order: &[usize]) -> Self {
        let mut values = Vec::with_capacity(order.len() * self.n_points * self.n_vars);
        for &i in order {
            values.extend_from_slice(self.curve(i));
        }
        Self {
            values,
            n_obs: order.len(),
            ..self.clone()
        }
    }
}

/// Pointwise `T x p` summary (center or scale) stored point-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseField {
    pub values: Vec<f64>,
    pub n_points: usize,
    pub n_vars: usize,
}

impl PointwiseField {
    #[inline]
    pub fn get(&self, point: usize, var: usize) -> f64 {
        self.values[point * self.n_vars + var]
    }
}

/// How pointwise outlyingness is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlyingnessMode {
    /// `|x(t) - center(t)|`: the unsigned deviation, literally
    /// `(x - m) * sign(x - m)`.
    PaperAbs,
    /// `(x(t) - center(t)) / mad(t)`: signed, robustly scaled.
    #[default]
    SignedScaled,
}

/// Reference curve against which deviations are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    #[default]
    Median,
    Mean,
}

/// Per-curve outlyingness summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlyingnessSummary {
    pub mo: Vec<f64>,
    pub vo: f64,
    pub fo: f64,
    /// Filled in by the robust distance step; zero until then.
    pub srmd: f64,
}

impl OutlyingnessSummary {
    pub fn mo_norm(&self) -> f64 {
        self.mo.iter().map(|m| m * m).sum::<f64>().sqrt()
    }
}

/// Coordinatewise median across observations at each `(t, variate)`.
pub fn pointwise_center(sample: &FunctionalSample) -> PointwiseField {
    pointwise_center_with(sample, Center::Median)
}

pub fn pointwise_center_with(sample: &FunctionalSample, center: Center) -> PointwiseField {
    let (t_len, p) = (sample.n_points, sample.n_vars);
    let mut values = Vec::with_capacity(t_len * p);
    let mut buf = Vec::with_capacity(sample.n_obs);
    for t in 0..t_len {
        for k in 0..p {
            buf.clear();
            buf.extend((0..sample.n_obs).map(|i| sample.get(i, t, k)));
            values.push(match center {
                Center::Median => median_in_place(&mut buf),
                Center::Mean => buf.iter().sum::<f64>() / buf.len() as f64,
            });
        }
    }
    PointwiseField {
        values,
        n_points: t_len,
        n_vars: p,
    }
}

/// Scaled MAD around the pointwise median. Zero entries are replaced, per
/// variate, by the smallest positive MAD over the domain, or by 1 when the
/// whole variate is flat.
pub fn pointwise_mad(sample: &FunctionalSample) -> PointwiseField {
    let center = pointwise_center(sample);
    let (t_len, p) = (sample.n_points, sample.n_vars);
    let mut values = Vec::with_capacity(t_len * p);
    let mut buf = Vec::with_capacity(sample.n_obs);
    for t in 0..t_len {
        for k in 0..p {
            let m = center.get(t, k);
            buf.clear();
            buf.extend((0..sample.n_obs).map(|i| (sample.get(i, t, k) - m).abs()));
            values.push(MAD_CONSISTENCY * median_in_place(&mut buf));
        }
    }
    for k in 0..p {
        let floor = (0..t_len)
            .map(|t| values[t * p + k])
            .filter(|&v| v > 0.0)
            .fold(f64::INFINITY, f64::min);
        let floor = if floor.is_finite() { floor } else { 1.0 };
        for t in 0..t_len {
            let v = &mut values[t * p + k];
            if *v <= 0.0 {
                *v = floor;
            }
        }
    }
    PointwiseField {
        values,
        n_points: t_len,
        n_vars: p,
    }
}

/// Pointwise outlyingness `O_i(t)` as an `n x T x p` tensor laid out like the
/// sample.
pub fn directional_outlyingness(sample: &FunctionalSample, mode: OutlyingnessMode) -> Vec<f64> {
    directional_outlyingness_with(sample, mode, Center::Median)
}

pub fn directional_outlyingness_with(
    sample: &FunctionalSample,
    mode: OutlyingnessMode,
    center: Center,
) -> Vec<f64> {
    let c = pointwise_center_with(sample, center);
    let scale = match mode {
        OutlyingnessMode::PaperAbs => None,
        OutlyingnessMode::SignedScaled => Some(pointwise_mad(sample)),
    };
    let tp = sample.n_points * sample.n_vars;
    let mut out = Vec::with_capacity(sample.values.len());
    for i in 0..sample.n_obs {
        let curve = sample.curve(i);
        for (j, &x) in curve.iter().enumerate() {
            let dev = x - c.values[j];
            out.push(match &scale {
                None => dev.abs(),
                Some(s) => dev / s.values[j],
            });
        }
    }
    debug_assert_eq!(out.len(), sample.n_obs * tp);
    out
}

/// MO, VO and FO for every observation.
pub fn mo_vo(sample: &FunctionalSample, mode: OutlyingnessMode) -> Vec<OutlyingnessSummary> {
    mo_vo_with(sample, mode, Center::Median)
}

pub fn mo_vo_with(
    sample: &FunctionalSample,
    mode: OutlyingnessMode,
    center: Center,
) -> Vec<OutlyingnessSummary> {
    let o = directional_outlyingness_with(sample, mode, center);
    summarize(&o, sample.weights(), sample.n_vars)
}

/// Reduce an outlyingness tensor to per-curve summaries.
pub(crate) fn summarize(o: &[f64], weights: &[f64], p: usize) -> Vec<OutlyingnessSummary> {
    let stride = weights.len() * p;
    o.chunks_exact(stride)
        .map(|curve| {
            let mut mo = vec![0.0; p];
            for (t, w) in weights.iter().enumerate() {
                for (k, m) in mo.iter_mut().enumerate() {
                    *m += w * curve[t * p + k];
                }
            }
            let vo: f64 = weights
                .iter()
                .enumerate()
                .map(|(t, w)| {
                    let sq: f64 = (0..p).map(|k| (curve[t * p + k] - mo[k]).powi(2)).sum();
                    w * sq
                })
                .sum();
            let fo = mo.iter().map(|m| m * m).sum::<f64>() + vo;
            OutlyingnessSummary {
                mo,
                vo,
                fo,
                srmd: 0.0,
            }
        })
        .collect()
}
