use approx::assert_relative_eq;
use fda_anomaly::functional::mo_vo;
use fda_anomaly::io::{decode_residuals, encode_residuals, parse_labels, LabelSpec};
use fda_anomaly::mcd::{fast_mcd, McdOptions};
use fda_anomaly::metrics::auc;
use fda_anomaly::{detect, DetectorConfig, FunctionalSample, Method, OutlyingnessMode, ResidualTensor};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn sample(n: usize, t: usize, p: usize) -> impl Strategy<Value = FunctionalSample> {
    prop::collection::vec(-5.0..5.0f64, n * t * p).prop_map(move |v| FunctionalSample::new(v, n, t, p).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn univariate_detectors_commute_with_reordering(s in sample(15, 12, 1), perm in permutation(15)) {
        let shuffled = s.select(&perm);
        for m in [Method::FbPlot, Method::Tvdmss, Method::ExtremalDepth, Method::Outliergram] {
            let a = detect(&s, &DetectorConfig::with_method(m)).unwrap();
            let b = detect(&shuffled, &DetectorConfig::with_method(m)).unwrap();
            for (k, &i) in perm.iter().enumerate() {
                prop_assert_eq!(a.labels[i], b.labels[k]);
                prop_assert!((a.scores[i] - b.scores[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn signed_outlyingness_is_affine_equivariant(
        s in sample(12, 10, 2),
        scale in prop_oneof![-4.0..-0.25f64, 0.25..4.0f64],
        shift in -3.0..3.0f64,
    ) {
        let base = mo_vo(&s, OutlyingnessMode::SignedScaled);
        let moved = mo_vo(&s.map(|x| scale * x + shift), OutlyingnessMode::SignedScaled);
        for (a, b) in base.iter().zip(&moved) {
            for (ma, mb) in a.mo.iter().zip(&b.mo) {
                assert_relative_eq!(scale.signum() * ma, *mb, epsilon = 1e-9, max_relative = 1e-9);
            }
            assert_relative_eq!(a.vo, b.vo, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn mcd_support_is_affine_invariant(
        pts in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6..11),
        a in (0.5..2.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.5..2.0f64),
        b in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        let n = pts.len();
        let x = DMatrix::from_fn(n, 2, |i, k| if k == 0 { pts[i].0 } else { pts[i].1 });
        let y = DMatrix::from_fn(n, 2, |i, k| {
            let (u, v) = pts[i];
            if k == 0 { a.0 * u + a.1 * v + b.0 } else { a.2 * u + a.3 * v + b.1 }
        });
        prop_assume!((a.0 * a.3 - a.1 * a.2).abs() > 0.1);
        let opts = McdOptions { n_starts: 200, ..McdOptions::default() };
        prop_assert_eq!(fast_mcd(&x, &opts).unwrap().support, fast_mcd(&y, &opts).unwrap().support);
    }

    #[test]
    fn auc_complement_and_monotone_invariance(
        scores in prop::collection::vec(prop_oneof![-3.0..3.0f64, Just(0.0)], 30),
        truth in prop::collection::vec(any::<bool>(), 30),
    ) {
        let mut truth = truth;
        truth[0] = true;
        truth[1] = false;
        let a = auc(&scores, &truth).unwrap();
        let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
        let flipped: Vec<bool> = truth.iter().map(|t| !t).collect();
        let warped: Vec<f64> = scores.iter().map(|s| s.exp() * 3.0 + 1.0).collect();
        prop_assert!((auc(&neg, &truth).unwrap() - (1.0 - a)).abs() < 1e-12);
        prop_assert!((auc(&scores, &flipped).unwrap() - (1.0 - a)).abs() < 1e-12);
        prop_assert_eq!(auc(&warped, &truth).unwrap(), a);
    }

    #[test]
    fn fdar_round_trip(dims in (1..4usize, 1..6usize, 1..6usize, 1..4usize), seed in any::<u64>()) {
        let len = dims.0 * dims.1 * dims.2 * dims.3;
        let data: Vec<f32> = (0..len as u64).map(|k| ((seed ^ k.wrapping_mul(0x9e37_79b9)) % 10_007) as f32 / 7.0).collect();
        let t = ResidualTensor::new(dims.0, dims.1, dims.2, dims.3, data).unwrap();
        prop_assert_eq!(decode_residuals(&encode_residuals(&t)).unwrap(), t);
    }

    #[test]
    fn label_render_round_trip(gaps in prop::collection::vec((0..5usize, 1..8usize), 0..6), tail in 0..10usize) {
        let mut ranges = Vec::new();
        let mut end = 0;
        for (gap, len) in gaps {
            let start = end + gap + 1;
            end = start + len - 1;
            ranges.push((start, end));
        }
        let spec = LabelSpec::new(ranges, end + tail).unwrap();
        prop_assert_eq!(parse_labels(&spec.render()).unwrap(), spec);
    }
}
