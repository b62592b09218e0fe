//! Univariate functional comparators: functional boxplot, TVD/MSS, extremal
//! depth and outliergram.

use std::cmp::Ordering;

use super::depth::{modified_band_depth, modified_epigraph_index, sorted_pointwise_depths, tvd_mss};
use super::{DetectionResult, Method};
use crate::error::{Error, Result};
use crate::functional::FunctionalSample;
use crate::stats::{average_ranks, quantile, quartiles};

/// Weighted fraction of the domain where each of `members` leaves the fences
/// built from the envelope of `central`.
fn envelope_exceedance(
    sample: &FunctionalSample,
    central: &[usize],
    members: &[usize],
    factor: f64,
) -> Vec<f64> {
    let w = sample.weights();
    let mut out = vec![0.0; members.len()];
    for (t, wt) in w.iter().enumerate() {
        let (lo, hi) = central
            .iter()
            .map(|&i| sample.get(i, t, 0))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let height = hi - lo;
        let (fence_lo, fence_hi) = (lo - factor * height, hi + factor * height);
        for (o, &i) in out.iter_mut().zip(members) {
            let x = sample.get(i, t, 0);
            if x < fence_lo || x > fence_hi {
                *o += wt;
            }
        }
    }
    out
}

/// `ceil(len / 2)` members with the largest depth; ties keep index order.
fn deepest_half(members: &[usize], depth: &[f64]) -> Vec<usize> {
    let mut order = members.to_vec();
    order.sort_by(|&a, &b| depth[b].total_cmp(&depth[a]).then(a.cmp(&b)));
    order.truncate(members.len().div_ceil(2));
    order
}

/// Functional boxplot on modified band depth. Scores are the fraction of the
/// domain spent outside the fences; any excursion flags the curve.
pub fn fbplot_detect(sample: &FunctionalSample, factor: f64) -> Result<DetectionResult> {
    sample.require_univariate()?;
    let n = sample.n_obs();
    if n < 4 {
        return Err(Error::InsufficientData(format!(
            "functional boxplot needs at least 4 curves, got {n}"
        )));
    }
    if !(factor > 0.0) {
        return Err(Error::InvalidParameter(format!("fence factor must be positive, got {factor}")));
    }
    let mbd = modified_band_depth(sample)?;
    let all: Vec<usize> = (0..n).collect();
    let central = deepest_half(&all, &mbd);
    let scores = envelope_exceedance(sample, &central, &all, factor);
    Ok(DetectionResult::from_scores(Method::FbPlot, scores, 0.0))
}

/// Shape outliers from a lower boxplot fence on MSS, then magnitude outliers
/// among the rest from a functional boxplot ranked by TVD.
///
/// Scores are normalised ranks of `2 * label + u`, where `u` in `[0, 1]`
/// averages the TVD deficit and the MSS deficit, so flagged curves always
/// rank above the threshold `(n - flagged) / n`.
pub fn tvdmss_detect(
    sample: &FunctionalSample,
    tvd_factor: f64,
    mss_factor: f64,
) -> Result<DetectionResult> {
    sample.require_univariate()?;
    let n = sample.n_obs();
    if n < 4 {
        return Err(Error::InsufficientData(format!("TVD/MSS needs at least 4 curves, got {n}")));
    }
    let (tvd, mss) = tvd_mss(sample)?;
    let (q1, q3) = quartiles(&mss);
    let shape_fence = q1 - mss_factor * (q3 - q1);
    let shape: Vec<bool> = mss.iter().map(|&m| m < shape_fence).collect();

    let rest: Vec<usize> = (0..n).filter(|&i| !shape[i]).collect();
    let mut labels = shape.clone();
    if !rest.is_empty() {
        let central = deepest_half(&rest, &tvd);
        let exceed = envelope_exceedance(sample, &central, &rest, tvd_factor);
        for (&i, e) in rest.iter().zip(exceed) {
            if e > 0.0 {
                labels[i] = true;
            }
        }
    }

    let max_tvd = tvd.iter().copied().fold(0.0, f64::max);
    let combined: Vec<f64> = (0..n)
        .map(|i| {
            let depth_deficit = if max_tvd > 0.0 { 1.0 - tvd[i] / max_tvd } else { 0.0 };
            let u = 0.5 * depth_deficit + 0.5 * (1.0 - mss[i]);
            2.0 * labels[i] as u8 as f64 + u
        })
        .collect();
    let flagged = labels.iter().filter(|&&l| l).count();
    let scores: Vec<f64> = average_ranks(&combined)
        .into_iter()
        .map(|r| r / n as f64)
        .collect();
    let threshold = (n - flagged) as f64 / n as f64;
    let result = DetectionResult::from_scores(Method::Tvdmss, scores, threshold);
    debug_assert_eq!(result.labels, labels);
    Ok(result)
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Extremal depth as a normalised rank in `(0, 1]`: curves whose sorted
/// pointwise depths are lexicographically smaller are more extreme and get
/// smaller values. Curves with identical depth profiles share the average of
/// their ranks.
pub fn extremal_depth(sample: &FunctionalSample) -> Result<Vec<f64>> {
    let profiles = sorted_pointwise_depths(sample)?;
    let n = profiles.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lexicographic(&profiles[a], &profiles[b]).then(a.cmp(&b)));
    let mut ed = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && lexicographic(&profiles[order[j]], &profiles[order[i]]).is_eq() {
            j += 1;
        }
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ed[k] = avg / n as f64;
        }
        i = j;
    }
    Ok(ed)
}

/// Flags curves whose extremal depth falls below `quantile`; scores are
/// `1 - ED`.
pub fn extremal_depth_detect(sample: &FunctionalSample, quantile: f64) -> Result<DetectionResult> {
    if !(quantile > 0.0 && quantile < 1.0) {
        return Err(Error::InvalidParameter(format!("ED quantile must lie in (0, 1), got {quantile}")));
    }
    let ed = extremal_depth(sample)?;
    let scores = ed.iter().map(|e| 1.0 - e).collect();
    Ok(DetectionResult::from_scores(Method::ExtremalDepth, scores, 1.0 - quantile))
}

/// Upper bound of MBD given MEI for `n` curves (bands from pairs).
pub fn outliergram_parabola(mei: f64, n: usize) -> f64 {
    let nf = n as f64;
    let a0 = -2.0 / (nf * (nf - 1.0));
    let a1 = 2.0 * (nf + 1.0) / (nf - 1.0);
    a0 + a1 * mei + a0 * nf * nf * mei * mei
}

const OG_SNAP: f64 = 1e-12;

/// Outliergram: distance below the MEI/MBD parabola, flagged above the upper
/// boxplot fence (or the `quantile` when the IQR vanishes).
pub fn outliergram_detect(sample: &FunctionalSample, quantile_level: f64) -> Result<DetectionResult> {
    sample.require_univariate()?;
    let n = sample.n_obs();
    if n < 3 {
        return Err(Error::InsufficientData(format!("outliergram needs at least 3 curves, got {n}")));
    }
    if !(quantile_level > 0.0 && quantile_level < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "outliergram quantile must lie in (0, 1), got {quantile_level}"
        )));
    }
    let mei = modified_epigraph_index(sample)?;
    let mbd = modified_band_depth(sample)?;
    let dist: Vec<f64> = mei
        .iter()
        .zip(&mbd)
        .map(|(&e, &b)| {
            let d = outliergram_parabola(e, n) - b;
            if d < OG_SNAP {
                0.0
            } else {
                d
            }
        })
        .collect();
    let (q1, q3) = quartiles(&dist);
    let iqr = q3 - q1;
    let threshold = if iqr > 0.0 {
        q3 + 1.5 * iqr
    } else {
        quantile(&dist, quantile_level)
    };
    Ok(DetectionResult::from_scores(Method::Outliergram, dist, threshold))
}
