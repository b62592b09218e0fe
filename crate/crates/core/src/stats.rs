//! Small order-statistics and distribution helpers shared by the detectors.

use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor};

/// Median of a slice. Even lengths average the two middle order statistics.
///
/// Panics on an empty slice.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut buf = values.to_vec();
    median_in_place(&mut buf)
}

/// Median that reorders `buf`. Uses selection rather than a full sort.
pub fn median_in_place(buf: &mut [f64]) -> f64 {
    let n = buf.len();
    assert!(n > 0, "median of empty slice");
    let mid = n / 2;
    let (lo, upper, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = lo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

/// Linearly interpolated sample quantile (the R "type 7" rule).
pub fn quantile(values: &[f64], prob: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, prob)
}

pub fn quantile_sorted(sorted: &[f64], prob: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = prob.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// First and third quartiles.
pub fn quartiles(values: &[f64]) -> (f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    (quantile_sorted(&sorted, 0.25), quantile_sorted(&sorted, 0.75))
}

/// 1-based average ranks; tied values share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) -> ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        i = j;
    }
    ranks
}

pub fn chi2_cdf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    ChiSquared::new(dof).expect("positive dof").cdf(x)
}

/// Quantile of the chi-square distribution. `prob = 1` maps to +inf.
pub fn chi2_quantile(prob: f64, dof: f64) -> f64 {
    if prob >= 1.0 {
        return f64::INFINITY;
    }
    if prob <= 0.0 {
        return 0.0;
    }
    ChiSquared::new(dof).expect("positive dof").inverse_cdf(prob)
}

/// Quantile of the F distribution with `(d1, d2)` degrees of freedom.
pub fn f_quantile(prob: f64, d1: f64, d2: f64) -> f64 {
    if prob >= 1.0 {
        return f64::INFINITY;
    }
    if prob <= 0.0 {
        return 0.0;
    }
    FisherSnedecor::new(d1, d2)
        .expect("positive dof")
        .inverse_cdf(prob)
}
