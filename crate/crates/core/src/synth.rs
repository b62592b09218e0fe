//! Seeded synthetic data: a contaminated functional sample and a short
//! surveillance-style video with an intruding bright object.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functional::FunctionalSample;
use crate::io::LabelSpec;
use crate::reconstruct::Frame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Normal,
    Magnitude,
    Shape,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContaminatedSample {
    pub sample: FunctionalSample,
    pub kinds: Vec<CurveKind>,
}

impl ContaminatedSample {
    pub fn truth(&self) -> Vec<bool> {
        self.kinds.iter().map(|&k| k != CurveKind::Normal).collect()
    }
}

/// Sizes and amplitudes of the contamination study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContaminationSpec {
    pub n_normal: usize,
    pub n_magnitude: usize,
    pub n_shape: usize,
    pub n_points: usize,
    /// Constant shift of magnitude outliers, in units of the noise SD.
    pub magnitude_shift: f64,
    /// Height of the local bump carried by shape outliers, in noise SDs.
    pub shape_amplitude: f64,
    /// Gaussian width of the bump on `[0, 1]`.
    pub shape_width: f64,
    /// Length scale of the squared-exponential noise covariance on `[0, 1]`.
    pub length_scale: f64,
}

impl Default for ContaminationSpec {
    fn default() -> Self {
        Self {
            n_normal: 100,
            n_magnitude: 10,
            n_shape: 10,
            n_points: 50,
            magnitude_shift: 6.0,
            shape_amplitude: 4.5,
            shape_width: 0.08,
            length_scale: 0.3,
        }
    }
}

fn grid(n_points: usize) -> Vec<f64> {
    (0..n_points).map(|k| k as f64 / (n_points - 1) as f64).collect()
}

/// Lower Cholesky factor of a squared-exponential covariance with unit
/// variance (plus a small nugget).
fn gp_factor(ts: &[f64], length_scale: f64) -> DMatrix<f64> {
    let n = ts.len();
    let cov = DMatrix::from_fn(n, n, |i, j| {
        let d = (ts[i] - ts[j]) / length_scale;
        (-0.5 * d * d).exp() + if i == j { 1e-6 } else { 0.0 }
    });
    cov.cholesky().expect("nugget keeps the covariance positive definite").l()
}

fn gp_draw(l: &DMatrix<f64>, rng: &mut impl Rng) -> DVector<f64> {
    let z = DVector::from_fn(l.nrows(), |_, _| StandardNormal.sample(rng));
    l * z
}

/// Smooth curves `mu(t) + e(t)` with `e` a unit-variance Gaussian process.
/// Magnitude outliers are shifted by `±magnitude_shift` noise SDs over the
/// whole domain. Shape outliers carry a narrow bump, the functional analogue
/// of a small object in a residual frame; its height keeps most of them
/// inside a boxplot envelope built from the sample.
pub fn contamination(seed: u64, spec: &ContaminationSpec) -> Result<ContaminatedSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts = grid(spec.n_points);
    let l = gp_factor(&ts, spec.length_scale);
    let mu = |t: f64| 4.0 * t;
    let n = spec.n_normal + spec.n_magnitude + spec.n_shape;
    let mut values = Vec::with_capacity(n * spec.n_points);
    let mut kinds = Vec::with_capacity(n);
    for i in 0..n {
        let kind = if i < spec.n_normal {
            CurveKind::Normal
        } else if i < spec.n_normal + spec.n_magnitude {
            CurveKind::Magnitude
        } else {
            CurveKind::Shape
        };
        let e = gp_draw(&l, &mut rng);
        match kind {
            CurveKind::Normal => values.extend(ts.iter().zip(e.iter()).map(|(&t, &e)| mu(t) + e)),
            CurveKind::Magnitude => {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let shift = sign * spec.magnitude_shift;
                values.extend(ts.iter().zip(e.iter()).map(|(&t, &e)| mu(t) + e + shift));
            }
            CurveKind::Shape => {
                let centre = 0.15 + 0.7 * rng.random::<f64>();
                values.extend(ts.iter().zip(e.iter()).map(|(&t, &e)| {
                    let z = (t - centre) / spec.shape_width;
                    mu(t) + e + spec.shape_amplitude * (-0.5 * z * z).exp()
                }));
            }
        }
        kinds.push(kind);
    }
    Ok(ContaminatedSample {
        sample: FunctionalSample::new(values, n, spec.n_points, 1)?,
        kinds,
    })
}

/// Layout of the synthetic video.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VideoSpec {
    pub n_frames: usize,
    pub height: usize,
    pub width: usize,
    /// Inclusive 1-based frame range containing the intruder.
    pub intruder: (usize, usize),
    pub noise_sd: f64,
}

impl Default for VideoSpec {
    fn default() -> Self {
        Self {
            n_frames: 200,
            height: 64,
            width: 64,
            intruder: (120, 180),
            noise_sd: 0.02,
        }
    }
}

pub struct SyntheticVideo {
    pub train: Vec<Frame>,
    pub test: Vec<Frame>,
    pub labels: LabelSpec,
}

struct Scene {
    background: Vec<f64>,
    h: usize,
    w: usize,
}

impl Scene {
    fn new(h: usize, w: usize, rng: &mut impl Rng) -> Self {
        let background = (0..h * w)
            .map(|k| {
                let (i, j) = ((k / w) as f64, (k % w) as f64);
                let texture = 0.12 * (i / 3.0).sin() * (j / 5.0).cos() + 0.08 * ((i + j) / 7.0).sin();
                0.45 + texture + 0.03 * rng.random::<f64>()
            })
            .collect();
        Self { background, h, w }
    }

    fn paint_square(&self, px: &mut [f64], top: f64, left: f64, size: usize, delta: f64) {
        let (top, left) = (top.round() as isize, left.round() as isize);
        for di in 0..size as isize {
            for dj in 0..size as isize {
                let (i, j) = (top + di, left + dj);
                if (0..self.h as isize).contains(&i) && (0..self.w as isize).contains(&j) {
                    px[i as usize * self.w + j as usize] += delta;
                }
            }
        }
    }

    fn paint_disc(&self, px: &mut [f64], ci: f64, cj: f64, radius: f64, value: f64) {
        for (k, p) in px.iter_mut().enumerate() {
            let (i, j) = ((k / self.w) as f64, (k % self.w) as f64);
            if (i - ci).powi(2) + (j - cj).powi(2) <= radius * radius {
                *p = value;
            }
        }
    }

    /// Frame `t` (1-based): background, a small square drifting on a slow
    /// loop, optionally a bright disc crossing the frame quickly.
    fn frame(&self, t: usize, phase: f64, intruder: Option<(usize, usize)>, noise: f64, rng: &mut impl Rng) -> Frame {
        let mut px = self.background.clone();
        let s = t as f64 / 200.0 * std::f64::consts::TAU + phase;
        let (h, w) = (self.h as f64, self.w as f64);
        self.paint_square(&mut px, (h - 6.0) * (0.5 + 0.4 * s.sin()), (w - 6.0) * (0.5 + 0.4 * (2.0 * s).cos()), 6, 0.3);
        if let Some((start, end)) = intruder {
            if (start..=end).contains(&t) {
                let u = (t - start) as f64 / (end - start).max(1) as f64;
                let ci = h * (0.25 + 0.5 * u);
                let cj = w * (0.1 + 0.8 * ((u * 3.0).fract()));
                self.paint_disc(&mut px, ci, cj, 5.0, 0.97);
            }
        }
        for p in &mut px {
            let z: f64 = StandardNormal.sample(rng);
            *p = (*p + noise * z).clamp(0.0, 1.0);
        }
        Frame::new(t as u64, self.h, self.w, 1, px).expect("pixels are clamped to [0, 1]")
    }
}

/// An anomaly-free training clip and a test clip whose intruder frames are
/// labelled anomalous. Both share the static background.
pub fn synthetic_video(seed: u64, spec: &VideoSpec) -> Result<SyntheticVideo> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scene = Scene::new(spec.height, spec.width, &mut rng);
    let train = (1..=spec.n_frames)
        .map(|t| scene.frame(t, 1.3, None, spec.noise_sd, &mut rng))
        .collect();
    let test = (1..=spec.n_frames)
        .map(|t| scene.frame(t, 0.0, Some(spec.intruder), spec.noise_sd, &mut rng))
        .collect();
    let labels = LabelSpec::new(vec![spec.intruder], spec.n_frames)?;
    Ok(SyntheticVideo { train, test, labels })
}
