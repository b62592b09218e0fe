//! Minimum Covariance Determinant estimation and robust distances.
//!
//! [`fast_mcd`] follows the FAST-MCD concentration scheme: random elemental
//! starts, each refined by C-steps until the subset determinant stops
//! decreasing, keeping the best subset over all starts.
//!
//! # Reproducibility
//!
//! Start `s` (0-based) draws from its own `ChaCha8Rng` seeded with the
//! caller's seed and switched to stream `s`. It first samples `d + 1`
//! distinct indices with `rand::seq::index::sample(rng, n, d + 1)`; if their
//! covariance is singular, a random permutation of the remaining indices is
//! drawn next and points are appended from it in order until the covariance
//! is nonsingular. Starts are therefore independent of each other, of the
//! thread count, and of the order in which they run. Ties in determinant are
//! resolved towards the lower start index, and ties in distance towards the
//! lower point index.
//!
//! # Cutoffs
//!
//! Distances returned by [`srmd`] are taken under the consistency-corrected
//! scatter. [`f_cutoff`] returns thresholds on that scale.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::seq::index;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{chi2_cdf, chi2_quantile, f_quantile};

const MAX_CSTEPS: usize = 100;
const CONVERGENCE_TOL: f64 = 1e-12;
const RIDGE: f64 = 1e-9;
/// Above this many points only the best few starts are fully concentrated.
const FULL_CONCENTRATION_LIMIT: usize = 600;
const PRELIMINARY_CSTEPS: usize = 2;
const FINALISTS: usize = 10;
const REWEIGHT_QUANTILE: f64 = 0.975;

/// Robust location and scatter of a point cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustEstimate {
    pub location: Vec<f64>,
    /// Row-major `d x d`, consistency corrected (and reweighted if
    /// `reweighted`).
    pub scatter: Vec<f64>,
    /// Sorted indices of the optimal h-subset.
    pub support: Vec<usize>,
    pub reweighted: bool,
    /// Determinant of the raw (unscaled, divisor h) covariance of `support`.
    pub determinant: f64,
    pub raw_location: Vec<f64>,
    pub raw_covariance: Vec<f64>,
    /// Factor applied to the raw covariance for consistency at the normal.
    pub consistency: f64,
    pub n_obs: usize,
    pub dim: usize,
}

impl RobustEstimate {
    pub fn h(&self) -> usize {
        self.support.len()
    }

    pub fn scatter_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.scatter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McdOptions {
    /// Subset size; defaults to `floor((n + d + 1) / 2)`.
    pub h: Option<usize>,
    pub n_starts: usize,
    pub seed: u64,
    pub reweight: bool,
}

impl Default for McdOptions {
    fn default() -> Self {
        Self {
            h: None,
            n_starts: 500,
            seed: 0,
            reweight: true,
        }
    }
}

/// Maximal-breakdown subset size.
pub fn default_h(n: usize, d: usize) -> usize {
    (n + d + 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffMethod {
    #[default]
    HardinRojasF,
    ChiSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffConfig {
    pub tail_prob: f64,
    pub method: CutoffMethod,
}

impl Default for CutoffConfig {
    fn default() -> Self {
        Self {
            tail_prob: 0.993,
            method: CutoffMethod::HardinRojasF,
        }
    }
}

impl CutoffConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_prob > 0.0 && self.tail_prob < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail probability must lie in (0, 1), got {}",
                self.tail_prob
            )));
        }
        Ok(())
    }
}

fn row(points: &DMatrix<f64>, i: usize) -> DVector<f64> {
    points.row(i).transpose()
}

/// Mean and covariance (divisor = subset size) of a subset of rows.
fn moments(points: &DMatrix<f64>, subset: &[usize]) -> (DVector<f64>, DMatrix<f64>) {
    let d = points.ncols();
    let m = subset.len() as f64;
    let mut mean = DVector::zeros(d);
    for &i in subset {
        mean += row(points, i);
    }
    mean /= m;
    let mut cov = DMatrix::zeros(d, d);
    for &i in subset {
        let dx = row(points, i) - &mean;
        cov.ger(1.0, &dx, &dx, 1.0);
    }
    cov /= m;
    (mean, cov)
}

fn ridged(cov: &DMatrix<f64>) -> DMatrix<f64> {
    let d = cov.nrows();
    let lambda = RIDGE * cov.trace() / d as f64;
    cov + DMatrix::identity(d, d) * lambda
}

fn factor(cov: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    let chol = Cholesky::new(cov.clone())?;
    let l = chol.l_dirty();
    if (0..cov.nrows()).all(|i| l[(i, i)] > 0.0 && l[(i, i)].is_finite()) {
        Some(chol)
    } else {
        None
    }
}

fn chol_det(chol: &Cholesky<f64, Dyn>) -> f64 {
    let l = chol.l_dirty();
    (0..l.nrows()).map(|i| l[(i, i)]).product::<f64>().powi(2)
}

/// Squared Mahalanobis distances of every row.
fn distances(points: &DMatrix<f64>, mean: &DVector<f64>, chol: &Cholesky<f64, Dyn>) -> Vec<f64> {
    (0..points.nrows())
        .map(|i| {
            let dx = row(points, i) - mean;
            let y = chol
                .l_dirty()
                .solve_lower_triangular(&dx)
                .expect("nonsingular factor");
            y.norm_squared()
        })
        .collect()
}

fn smallest(dist: &[f64], h: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dist.len()).collect();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
    let mut subset = order[..h].to_vec();
    subset.sort_unstable();
    subset
}

/// One concentration step: the `|subset|` points closest under the subset's
/// own mean and covariance.
pub fn c_step(points: &DMatrix<f64>, subset: &[usize]) -> Result<Vec<usize>> {
    let (mean, cov) = moments(points, subset);
    let chol = factor(&cov).ok_or(Error::SingularScatter)?;
    Ok(smallest(&distances(points, &mean, &chol), subset.len()))
}

/// Determinant of the subset covariance (divisor = subset size).
pub fn subset_determinant(points: &DMatrix<f64>, subset: &[usize]) -> f64 {
    moments(points, subset).1.determinant()
}

/// C-step that falls back to a ridge-regularised covariance when singular.
fn c_step_ridged(points: &DMatrix<f64>, subset: &[usize], h: usize) -> Vec<usize> {
    let (mean, cov) = moments(points, subset);
    let chol = factor(&cov)
        .or_else(|| factor(&ridged(&cov)))
        .expect("ridge restores positive definiteness for non-degenerate data");
    smallest(&distances(points, &mean, &chol), h)
}

fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    rng
}

/// Initial h-subset grown from a random elemental set.
fn initial_subset(points: &DMatrix<f64>, h: usize, seed: u64, start: usize) -> Vec<usize> {
    let (n, d) = points.shape();
    let mut rng = start_rng(seed, start);
    let mut chosen = index::sample(&mut rng, n, d + 1).into_vec();
    let (mut mean, mut cov) = moments(points, &chosen);
    if factor(&cov).is_none() {
        let mut rest: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
        rest.shuffle(&mut rng);
        for i in rest {
            chosen.push(i);
            (mean, cov) = moments(points, &chosen);
            if factor(&cov).is_some() || chosen.len() >= h {
                break;
            }
        }
    }
    let chol = factor(&cov)
        .or_else(|| factor(&ridged(&cov)))
        .expect("ridge restores positive definiteness for non-degenerate data");
    smallest(&distances(points, &mean, &chol), h)
}

/// Runs C-steps from `subset`; returns the final subset, its determinant and
/// the determinant after every step (the first entry is the starting one).
fn concentrate(
    points: &DMatrix<f64>,
    mut subset: Vec<usize>,
    h: usize,
    max_steps: usize,
) -> (Vec<usize>, f64, Vec<f64>) {
    let mut det = subset_det_ridged(points, &subset);
    let mut trace = vec![det];
    for _ in 0..max_steps {
        let next = c_step_ridged(points, &subset, h);
        if next == subset {
            break;
        }
        let new_det = subset_det_ridged(points, &next);
        trace.push(new_det);
        subset = next;
        let done = (det - new_det).abs() <= CONVERGENCE_TOL * det.abs();
        det = new_det;
        if done {
            break;
        }
    }
    (subset, det, trace)
}

fn subset_det_ridged(points: &DMatrix<f64>, subset: &[usize]) -> f64 {
    let cov = moments(points, subset).1;
    match factor(&cov) {
        Some(chol) => chol_det(&chol),
        None => factor(&ridged(&cov)).map_or(0.0, |c| chol_det(&c)),
    }
}

/// Largest number of exactly coincident rows.
fn max_multiplicity(points: &DMatrix<f64>) -> usize {
    let mut rows: Vec<Vec<u64>> = (0..points.nrows())
        .map(|i| points.row(i).iter().map(|v| v.to_bits()).collect())
        .collect();
    rows.sort_unstable();
    let mut best = 0;
    let mut i = 0;
    while i < rows.len() {
        let mut j = i + 1;
        while j < rows.len() && rows[j] == rows[i] {
            j += 1;
        }
        best = best.max(j - i);
        i = j;
    }
    best
}

fn validate(points: &DMatrix<f64>, h: usize) -> Result<()> {
    let (n, d) = points.shape();
    if d == 0 {
        return Err(Error::InvalidParameter("points have zero dimensions".into()));
    }
    if n <= d + 1 {
        return Err(Error::InsufficientData(format!(
            "MCD needs more than d + 1 = {} points, got {n}",
            d + 1
        )));
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("points contain non-finite values".into()));
    }
    let lo = default_h(n, d);
    if h < lo || h > n {
        return Err(Error::InvalidParameter(format!(
            "subset size h = {h} must lie in [{lo}, {n}]"
        )));
    }
    let dup = max_multiplicity(points);
    if dup >= h {
        return Err(Error::DegenerateData(dup, n));
    }
    Ok(())
}

/// Per-start determinant sequences recorded by [`fast_mcd_traced`].
#[derive(Debug, Clone, Default)]
pub struct McdTrace {
    pub starts: Vec<Vec<f64>>,
}

pub fn fast_mcd(points: &DMatrix<f64>, opts: &McdOptions) -> Result<RobustEstimate> {
    fast_mcd_traced(points, opts).map(|(est, _)| est)
}

pub fn fast_mcd_traced(
    points: &DMatrix<f64>,
    opts: &McdOptions,
) -> Result<(RobustEstimate, McdTrace)> {
    let (n, d) = points.shape();
    let h = opts.h.unwrap_or_else(|| default_h(n, d));
    validate(points, h)?;
    if opts.n_starts == 0 {
        return Err(Error::InvalidParameter("n_starts must be positive".into()));
    }

    let steps = if n > FULL_CONCENTRATION_LIMIT {
        PRELIMINARY_CSTEPS
    } else {
        MAX_CSTEPS
    };
    let mut runs: Vec<(usize, Vec<usize>, f64, Vec<f64>)> = (0..opts.n_starts)
        .into_par_iter()
        .map(|s| {
            let init = initial_subset(points, h, opts.seed, s);
            let (subset, det, trace) = concentrate(points, init, h, steps);
            (s, subset, det, trace)
        })
        .collect();

    if n > FULL_CONCENTRATION_LIMIT {
        runs.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
        runs.truncate(FINALISTS);
        runs = runs
            .into_par_iter()
            .map(|(s, subset, _, mut trace)| {
                let (subset, det, more) = concentrate(points, subset, h, MAX_CSTEPS);
                trace.extend(more.into_iter().skip(1));
                (s, subset, det, trace)
            })
            .collect();
    }

    let best = runs
        .iter()
        .min_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)))
        .expect("at least one start");
    let support = best.1.clone();
    let trace = McdTrace {
        starts: runs.iter().map(|r| r.3.clone()).collect(),
    };
    Ok((finish(points, support, opts.reweight)?, trace))
}

/// Consistency and optional reweighting applied to a chosen support.
pub fn estimate_from_support(
    points: &DMatrix<f64>,
    support: Vec<usize>,
    reweight: bool,
) -> Result<RobustEstimate> {
    finish(points, support, reweight)
}

fn finish(points: &DMatrix<f64>, support: Vec<usize>, reweight: bool) -> Result<RobustEstimate> {
    let (n, d) = points.shape();
    let h = support.len();
    let (raw_mean, raw_cov) = moments(points, &support);
    let determinant = raw_cov.determinant();
    let usable = if factor(&raw_cov).is_some() {
        raw_cov.clone()
    } else {
        ridged(&raw_cov)
    };
    let consistency = consistency_factor(h as f64 / n as f64, d);
    let mut location = raw_mean.clone();
    let mut scatter = &usable * consistency;
    let mut reweighted = false;

    if reweight {
        let chol = factor(&scatter).ok_or(Error::SingularScatter)?;
        let dist = distances(points, &location, &chol);
        let cut = chi2_quantile(REWEIGHT_QUANTILE, d as f64);
        let kept: Vec<usize> = (0..n).filter(|&i| dist[i] <= cut).collect();
        if kept.len() > d {
            let (m, c) = moments(points, &kept);
            let scale = REWEIGHT_QUANTILE / chi2_cdf(cut, (d + 2) as f64);
            let c = c * scale;
            if factor(&c).is_some() {
                location = m;
                scatter = c;
                reweighted = true;
            }
        }
    }

    Ok(RobustEstimate {
        location: location.iter().copied().collect(),
        scatter: row_major(&scatter),
        support,
        reweighted,
        determinant,
        raw_location: raw_mean.iter().copied().collect(),
        raw_covariance: row_major(&raw_cov),
        consistency,
        n_obs: n,
        dim: d,
    })
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().iter().copied().collect()
}

/// `(h/n) / P(chi2_{d+2} < chi2_{d; h/n})`; equals 1 when `h = n`.
pub fn consistency_factor(fraction: f64, d: usize) -> f64 {
    if fraction >= 1.0 {
        return 1.0;
    }
    let q = chi2_quantile(fraction, d as f64);
    fraction / chi2_cdf(q, (d + 2) as f64)
}

/// Squared robust Mahalanobis distance of every row under `est`.
pub fn srmd(points: &DMatrix<f64>, est: &RobustEstimate) -> Result<Vec<f64>> {
    if points.ncols() != est.dim {
        return Err(Error::ShapeMismatch {
            expected: format!("{} columns", est.dim),
            got: format!("{} columns", points.ncols()),
        });
    }
    let chol = factor(&est.scatter_matrix()).ok_or(Error::SingularScatter)?;
    let mean = DVector::from_column_slice(&est.location);
    Ok(distances(points, &mean, &chol)
        .into_iter()
        .map(|v| v.max(0.0))
        .collect())
}

/// Asymptotic Wishart degrees of freedom `m` for MCD scatter (Croux and
/// Haesbroeck), with the small-sample adjustment of Hardin and Rojas.
pub fn hardin_rojas_dof(n: usize, d: usize, h: usize) -> f64 {
    let (nf, p) = (n as f64, d as f64);
    let alpha = h as f64 / nf;
    if alpha >= 1.0 {
        return f64::INFINITY;
    }
    let q = chi2_quantile(alpha, p);
    let c_alpha = alpha / chi2_cdf(q, p + 2.0);
    let c2 = -0.5 * chi2_cdf(q, p + 2.0);
    let c3 = -0.5 * chi2_cdf(q, p + 4.0);
    let c4 = 3.0 * c3;
    let b1 = c_alpha * (c3 - c4) / alpha;
    let b2 = 0.5 + c_alpha / alpha * (c3 - q / p * (c2 + (1.0 - alpha) / 2.0));
    let v1 = (1.0 - alpha) * b1.powi(2) * (alpha * (c_alpha * q / p - 1.0).powi(2) - 1.0)
        - 2.0
            * c3
            * c_alpha.powi(2)
            * (3.0 * (b1 - p * b2).powi(2) + (p + 2.0) * b2 * (2.0 * b1 - p * b2));
    let v2 = nf * (b1 * (b1 - p * b2) * (1.0 - alpha)).powi(2) * c_alpha.powi(2);
    let v = v1 / v2;
    let m_asy = 2.0 / (c_alpha.powi(2) * v);
    m_asy * (0.725 - 0.00663 * p - 0.0780 * nf.ln()).exp()
}

/// Outlier threshold on the SRMD scale of [`srmd`].
///
/// For the F approximation, `(m - d + 1) / (d m) * SRMD` follows
/// `F(d, m - d + 1)`, so the threshold is the F quantile times
/// `d m / (m - d + 1)`. As `m` grows this tends to the chi-square quantile.
pub fn f_cutoff(n: usize, d: usize, h: usize, cfg: &CutoffConfig) -> f64 {
    let p = d as f64;
    match cfg.method {
        CutoffMethod::ChiSquare => chi2_quantile(cfg.tail_prob, p),
        CutoffMethod::HardinRojasF => {
            let m = hardin_rojas_dof(n, d, h);
            let df2 = m - p + 1.0;
            if !m.is_finite() || df2 <= 0.0 {
                return chi2_quantile(cfg.tail_prob, p);
            }
            f_quantile(cfg.tail_prob, p, df2) * p * m / df2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn cloud(n: usize, d: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, d, |_, _| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn cstep_fixed_point_keeps_determinant() {
        let pts = cloud(40, 2, 3);
        let est = fast_mcd(&pts, &McdOptions { reweight: false, ..Default::default() }).unwrap();
        let next = c_step(&pts, &est.support).unwrap();
        let (a, b) = (
            subset_determinant(&pts, &est.support),
            subset_determinant(&pts, &next),
        );
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn cstep_never_increases_determinant() {
        let pts = cloud(60, 3, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut subset = index::sample(&mut rng, 60, 32).into_vec();
            subset.sort_unstable();
            let mut det = subset_determinant(&pts, &subset);
            for _ in 0..10 {
                subset = c_step(&pts, &subset).unwrap();
                let nd = subset_determinant(&pts, &subset);
                assert!(nd <= det * (1.0 + 1e-12));
                det = nd;
            }
        }
    }

    #[test]
    fn cstep_reports_singular_subset() {
        let pts = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 5.0, -3.0]);
        assert!(matches!(c_step(&pts, &[0, 1, 2]), Err(Error::SingularScatter)));
    }

    #[test]
    fn tight_cluster_excludes_far_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut rows = Vec::new();
        for _ in 0..10 {
            rows.push(rng.random_range(-0.5..0.5));
            rows.push(rng.random_range(-0.5..0.5));
        }
        rows.extend_from_slice(&[100.0, 100.0, 100.5, 99.5]);
        let pts = DMatrix::from_row_slice(12, 2, &rows);
        let est = fast_mcd(
            &pts,
            &McdOptions {
                h: Some(7),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!est.support.contains(&10) && !est.support.contains(&11));
        assert!(est.location.iter().all(|v| v.abs() < 0.5));
    }

    #[test]
    fn identical_points_are_degenerate() {
        let pts = DMatrix::from_element(10, 2, 1.5);
        assert!(matches!(
            fast_mcd(&pts, &McdOptions::default()),
            Err(Error::DegenerateData(10, 10))
        ));
    }

    #[test]
    fn collinear_points_use_ridge() {
        let rows: Vec<f64> = (0..20).flat_map(|i| [i as f64, 2.0 * i as f64]).collect();
        let pts = DMatrix::from_row_slice(20, 2, &rows);
        let est = fast_mcd(&pts, &McdOptions::default()).unwrap();
        assert_eq!(est.support.len(), 11);
    }

    #[test]
    fn same_seed_is_bit_reproducible() {
        let pts = cloud(80, 3, 21);
        let opts = McdOptions {
            seed: 77,
            ..Default::default()
        };
        let a = fast_mcd(&pts, &opts).unwrap();
        let b = fast_mcd(&pts, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn srmd_euclidean_case() {
        let est = RobustEstimate {
            location: vec![1.0, 1.0],
            scatter: vec![1.0, 0.0, 0.0, 1.0],
            support: vec![0],
            reweighted: false,
            determinant: 1.0,
            raw_location: vec![1.0, 1.0],
            raw_covariance: vec![1.0, 0.0, 0.0, 1.0],
            consistency: 1.0,
            n_obs: 2,
            dim: 2,
        };
        let pts = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 4.0, 5.0]);
        let d = srmd(&pts, &est).unwrap();
        assert_eq!(d[0], 0.0);
        assert!((d[1] - 25.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_cutoff_level() {
        let cfg = CutoffConfig {
            tail_prob: 0.975,
            method: CutoffMethod::ChiSquare,
        };
        assert!((f_cutoff(100, 2, 51, &cfg) - 7.377_758_908_227_871).abs() < 1e-9);
    }

    #[test]
    fn cutoff_grows_without_bound_as_tail_prob_approaches_one() {
        let mut last = 0.0;
        for tail in [0.9, 0.99, 0.999, 0.999_999, 1.0 - 1e-12] {
            for method in [CutoffMethod::ChiSquare, CutoffMethod::HardinRojasF] {
                let v = f_cutoff(100, 2, 51, &CutoffConfig { tail_prob: tail, method });
                assert!(v.is_finite());
                if method == CutoffMethod::ChiSquare {
                    assert!(v > last);
                    last = v;
                }
            }
        }
        assert!(last > 50.0);
        assert!(chi2_quantile(1.0, 2.0).is_infinite());
    }

    #[test]
    fn hardin_rojas_exceeds_chi_square() {
        let f = f_cutoff(100, 2, 51, &CutoffConfig::default());
        let c = f_cutoff(
            100,
            2,
            51,
            &CutoffConfig {
                method: CutoffMethod::ChiSquare,
                ..Default::default()
            },
        );
        assert!(f > c, "F {f} vs chi2 {c}");
        let m = hardin_rojas_dof(100, 2, 51);
        assert!(m > 2.0 && m.is_finite());
    }

    #[test]
    fn consistency_factor_is_one_for_full_sample() {
        assert_eq!(consistency_factor(1.0, 3), 1.0);
        assert!(consistency_factor(0.5, 2) > 1.0);
    }

    #[test]
    fn rejects_bad_h() {
        let pts = cloud(20, 2, 1);
        let opts = McdOptions {
            h: Some(5),
            ..Default::default()
        };
        assert!(matches!(fast_mcd(&pts, &opts), Err(Error::InvalidParameter(_))));
        assert!(fast_mcd(&cloud(3, 2, 1), &McdOptions::default()).is_err());
    }
}
