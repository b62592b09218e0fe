//! Depth and epigraph indices for univariate curves.

use crate::error::Result;
use crate::functional::FunctionalSample;
use crate::stats::average_ranks;

const MSS_RESOLUTION: f64 = 1e12;

/// Per-point counts of curves strictly below and strictly above each value.
struct PointOrder {
    below: Vec<usize>,
    above: Vec<usize>,
}

fn point_order(column: &[f64]) -> PointOrder {
    let n = column.len();
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut below = Vec::with_capacity(n);
    let mut above = Vec::with_capacity(n);
    for &x in column {
        let lo = sorted.partition_point(|&v| v < x);
        let hi = sorted.partition_point(|&v| v <= x);
        below.push(lo);
        above.push(n - hi);
    }
    PointOrder { below, above }
}

fn choose2(k: usize) -> f64 {
    (k * k.saturating_sub(1)) as f64 / 2.0
}

/// Modified band depth with bands from pairs of curves.
///
/// A curve lies inside the band of `(j, l)` at `t` when
/// `min(x_j, x_l) <= x(t) <= max(x_j, x_l)`. Pairs containing the curve itself
/// count, so every depth is positive. With a single curve the depth is 1.
pub fn modified_band_depth(sample: &FunctionalSample) -> Result<Vec<f64>> {
    sample.require_univariate()?;
    let n = sample.n_obs();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let pairs = choose2(n);
    let w = sample.weights();
    let mut depth = vec![0.0; n];
    for (t, wt) in w.iter().enumerate() {
        let col = sample.cross_section(t, 0);
        let ord = point_order(&col);
        for i in 0..n {
            let outside = choose2(ord.below[i]) + choose2(ord.above[i]);
            depth[i] += wt * (pairs - outside) / pairs;
        }
    }
    Ok(depth)
}

/// Modified epigraph index: weighted fraction of `(curve, point)` pairs lying
/// on or above each curve, the curve itself included.
pub fn modified_epigraph_index(sample: &FunctionalSample) -> Result<Vec<f64>> {
    sample.require_univariate()?;
    let n = sample.n_obs();
    let w = sample.weights();
    let mut mei = vec![0.0; n];
    for (t, wt) in w.iter().enumerate() {
        let col = sample.cross_section(t, 0);
        let ord = point_order(&col);
        for i in 0..n {
            // curves >= x_i(t) = n - (strictly below)
            mei[i] += wt * (n - ord.below[i]) as f64 / n as f64;
        }
    }
    Ok(mei)
}

/// Pointwise rank probability `R_i(t)`: fraction of curves at or below
/// `x_i(t)`, row-major `n x T`.
pub(crate) fn rank_probabilities(sample: &FunctionalSample) -> Vec<f64> {
    let (n, t_len) = (sample.n_obs(), sample.n_points());
    let mut r = vec![0.0; n * t_len];
    for t in 0..t_len {
        let col = sample.cross_section(t, 0);
        let ord = point_order(&col);
        for i in 0..n {
            r[i * t_len + t] = (n - ord.above[i]) as f64 / n as f64;
        }
    }
    r
}

/// Total variation depth and modified shape similarity of every curve.
///
/// With `H_i(t) = 1{Y(t) <= x_i(t)}` over the sample `Y`, the pointwise depth is
/// `Var H_i(t) = R(1 - R)`. For consecutive grid points `s < t` it splits into
/// `Var E[H_t | H_s] + E Var[H_t | H_s]`; the first term is the part explained
/// by the curve keeping its neighbours, i.e. shape similarity. MSS is the
/// weighted share of that term over points `t >= 1`, and is 1 where a curve
/// has no variation to explain.
pub fn tvd_mss(sample: &FunctionalSample) -> Result<(Vec<f64>, Vec<f64>)> {
    sample.require_univariate()?;
    let (n, t_len) = (sample.n_obs(), sample.n_points());
    let w = sample.weights();
    let r = rank_probabilities(sample);
    let mut tvd = vec![0.0; n];
    for i in 0..n {
        for t in 0..t_len {
            let p = r[i * t_len + t];
            tvd[i] += w[t] * p * (1.0 - p);
        }
    }
    let mut mss = vec![1.0; n];
    if t_len < 2 {
        return Ok((tvd, mss));
    }
    for i in 0..n {
        let mut shape = 0.0;
        let mut total = 0.0;
        for t in 1..t_len {
            let (xs, xt) = (sample.get(i, t - 1, 0), sample.get(i, t, 0));
            let (mut n1, mut n1_below, mut n0_below) = (0usize, 0usize, 0usize);
            for j in 0..n {
                let below_s = sample.get(j, t - 1, 0) <= xs;
                let below_t = sample.get(j, t, 0) <= xt;
                if below_s {
                    n1 += 1;
                    n1_below += below_t as usize;
                } else {
                    n0_below += below_t as usize;
                }
            }
            let rt = r[i * t_len + t];
            let pi1 = n1 as f64 / n as f64;
            let mut explained = 0.0;
            if n1 > 0 {
                explained += pi1 * (n1_below as f64 / n1 as f64 - rt).powi(2);
            }
            if n1 < n {
                explained += (1.0 - pi1) * (n0_below as f64 / (n - n1) as f64 - rt).powi(2);
            }
            shape += w[t] * explained;
            total += w[t] * rt * (1.0 - rt);
        }
        if total > 0.0 {
            // rounding keeps exactly parallel curves at 1 instead of 1 - ulp
            mss[i] = ((shape / total).clamp(0.0, 1.0) * MSS_RESOLUTION).round() / MSS_RESOLUTION;
        }
    }
    Ok((tvd, mss))
}

/// Pointwise extremal depth `1 - |2 rank - 1 - n| / n` (average ranks),
/// each curve's values sorted ascending: its empirical depth distribution.
pub fn sorted_pointwise_depths(sample: &FunctionalSample) -> Result<Vec<Vec<f64>>> {
    sample.require_univariate()?;
    let (n, t_len) = (sample.n_obs(), sample.n_points());
    let nf = n as f64;
    let mut depths = vec![Vec::with_capacity(t_len); n];
    for t in 0..t_len {
        let ranks = average_ranks(&sample.cross_section(t, 0));
        for (i, rk) in ranks.into_iter().enumerate() {
            depths[i].push(1.0 - (2.0 * rk - 1.0 - nf).abs() / nf);
        }
    }
    for d in &mut depths {
        d.sort_by(f64::total_cmp);
    }
    Ok(depths)
}
