use nalgebra::DMatrix;

use super::{DetectionResult, DetectorConfig, Method, MsPoint, MsSpace};
use crate::error::{Error, Result};
use crate::functional::{mo_vo_with, FunctionalSample, OutlyingnessSummary};
use crate::mcd::{f_cutoff, fast_mcd, srmd};

/// Per-observation summaries and the point cloud the robust distance is
/// fitted on.
pub fn ms_coordinates(
    sample: &FunctionalSample,
    cfg: &DetectorConfig,
) -> (Vec<OutlyingnessSummary>, DMatrix<f64>) {
    let summaries = mo_vo_with(sample, cfg.mode, cfg.center);
    let n = summaries.len();
    let points = match cfg.ms_space {
        MsSpace::Full => {
            let d = sample.n_vars() + 1;
            DMatrix::from_fn(n, d, |i, k| {
                let s = &summaries[i];
                if k < d - 1 {
                    s.mo[k]
                } else {
                    s.vo
                }
            })
        }
        MsSpace::NormReduced => DMatrix::from_fn(n, 2, |i, k| {
            if k == 0 {
                summaries[i].mo_norm()
            } else {
                summaries[i].vo
            }
        }),
    };
    (summaries, points)
}

/// MS-Plot detector: SRMD of `(MO, VO)` under FAST-MCD, thresholded with the
/// configured cutoff.
pub fn msplot_detect(sample: &FunctionalSample, cfg: &DetectorConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let (mut summaries, points) = ms_coordinates(sample, cfg);
    let (n, d) = points.shape();
    if n < d + 2 {
        return Err(Error::InsufficientData(format!(
            "MS-Plot in dimension {d} needs at least {} observations, got {n}",
            d + 2
        )));
    }
    let opts = cfg.mcd_options();
    let (scores, h, exact_fit) = match fast_mcd(&points, &opts) {
        Ok(est) => (srmd(&points, &est)?, est.h(), false),
        Err(Error::DegenerateData(dup, total)) => match exact_fit_scores(&points) {
            Some(s) => (s, dup, true),
            None => return Err(Error::DegenerateData(dup, total)),
        },
        Err(e) => return Err(e),
    };
    let threshold = f_cutoff(n, d, h.max(crate::mcd::default_h(n, d)), &cfg.cutoff);
    for (s, v) in summaries.iter_mut().zip(&scores) {
        s.srmd = *v;
    }
    let mut result = DetectionResult::from_scores(Method::MsPlot, scores, threshold);
    result.exact_fit = exact_fit;
    result.ms_points = Some(
        summaries
            .iter()
            .enumerate()
            .map(|(i, s)| MsPoint {
                frame: i as u64 + 1,
                norm_mo: s.mo_norm(),
                vo: s.vo,
            })
            .collect(),
    );
    Ok(result)
}

/// When at least half the points coincide the MCD is an exact fit at that
/// point with zero scatter. Points on the fit score 0; the rest are measured
/// in squared Euclidean distance relative to a scale far below their own
/// spread. Returns `None` when every point coincides.
fn exact_fit_scores(points: &DMatrix<f64>) -> Option<Vec<f64>> {
    let (n, d) = points.shape();
    let key = |i: usize| -> Vec<u64> { points.row(i).iter().map(|v| v.to_bits()).collect() };
    let mut counts: Vec<(Vec<u64>, usize, usize)> = Vec::new();
    for i in 0..n {
        let k = key(i);
        match counts.iter_mut().find(|(c, _, _)| *c == k) {
            Some(entry) => entry.1 += 1,
            None => counts.push((k, 1, i)),
        }
    }
    let (_, count, first) = counts
        .iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
        .cloned()?;
    if count == n {
        return None;
    }
    let mode = points.row(first).into_owned();
    let sq: Vec<f64> = (0..n)
        .map(|i| (points.row(i) - &mode).norm_squared())
        .collect();
    let off: Vec<f64> = sq.iter().copied().filter(|&v| v > 0.0).collect();
    let spread = off.iter().sum::<f64>() / (off.len() as f64 * d as f64);
    let scale = 1e-9 * spread;
    Some(sq.into_iter().map(|v| v / scale).collect())
}
