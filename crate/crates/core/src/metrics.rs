//! Frame-level detection metrics and ROC AUC.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::average_ranks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Rates in `[0, 1]`. A ratio whose denominator is zero is reported as 0
/// and its name recorded in `undefined`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSet {
    pub tpr: f64,
    pub fpr: f64,
    pub precision: f64,
    pub f1: f64,
    pub accuracy: f64,
    /// `None` when the truth has a single class.
    pub auc: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub undefined: Vec<String>,
}

/// Anomaly is the positive class.
pub fn confusion(labels: &[bool], truth: &[bool]) -> Result<ConfusionCounts> {
    if labels.len() != truth.len() {
        return Err(Error::LengthMismatch(labels.len(), truth.len()));
    }
    let mut c = ConfusionCounts::default();
    for (&l, &t) in labels.iter().zip(truth) {
        match (l, t) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

fn ratio(num: usize, den: usize, name: &str, undefined: &mut Vec<String>) -> f64 {
    if den == 0 {
        undefined.push(name.to_string());
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall, 0 when both vanish.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    let den = precision + recall;
    if den > 0.0 {
        2.0 * precision * recall / den
    } else {
        0.0
    }
}

pub fn metrics(c: &ConfusionCounts) -> MetricSet {
    let mut undefined = Vec::new();
    let tpr = ratio(c.tp, c.tp + c.fn_, "tpr", &mut undefined);
    let fpr = ratio(c.fp, c.fp + c.tn, "fpr", &mut undefined);
    let precision = ratio(c.tp, c.tp + c.fp, "precision", &mut undefined);
    let accuracy = ratio(c.tp + c.tn, c.total(), "accuracy", &mut undefined);
    if precision + tpr == 0.0 {
        undefined.push("f1".into());
    }
    MetricSet {
        tpr,
        fpr,
        precision,
        f1: f1_score(precision, tpr),
        accuracy,
        auc: None,
        undefined,
    }
}

/// `P(score_pos > score_neg) + P(tie) / 2` from the rank-sum statistic.
pub fn auc(scores: &[f64], truth: &[bool]) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(Error::LengthMismatch(scores.len(), truth.len()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidParameter("scores contain NaN".into()));
    }
    let n_pos = truth.iter().filter(|&&t| t).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateTruth);
    }
    let ranks = average_ranks(scores);
    let rank_sum: f64 = ranks.iter().zip(truth).filter(|(_, &t)| t).map(|(r, _)| r).sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Per-video metrics plus AUC when both classes are present.
pub fn evaluate(labels: &[bool], scores: &[f64], truth: &[bool]) -> Result<MetricSet> {
    let mut m = metrics(&confusion(labels, truth)?);
    m.auc = match auc(scores, truth) {
        Ok(a) => Some(a),
        Err(Error::DegenerateTruth) => {
            m.undefined.push("auc".into());
            None
        }
        Err(e) => return Err(e),
    };
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    /// Plain mean over videos.
    pub unweighted: MetricSet,
    /// Mean over videos weighted by frame count.
    pub frame_weighted: MetricSet,
}

fn weighted_mean(sets: &[MetricSet], weights: &[f64]) -> MetricSet {
    let mean = |get: &dyn Fn(&MetricSet) -> f64| -> f64 {
        let total: f64 = weights.iter().sum();
        sets.iter().zip(weights).map(|(m, w)| w * get(m)).sum::<f64>() / total
    };
    // AUC averages only over videos where it is defined
    let (auc_sum, auc_w) = sets
        .iter()
        .zip(weights)
        .filter_map(|(m, w)| m.auc.map(|a| (w * a, *w)))
        .fold((0.0, 0.0), |(s, t), (a, w)| (s + a, t + w));
    MetricSet {
        tpr: mean(&|m| m.tpr),
        fpr: mean(&|m| m.fpr),
        precision: mean(&|m| m.precision),
        f1: mean(&|m| m.f1),
        accuracy: mean(&|m| m.accuracy),
        auc: (auc_w > 0.0).then(|| auc_sum / auc_w),
        undefined: Vec::new(),
    }
}

/// Unweighted and frame-weighted means of per-video metrics. Videos without
/// an AUC are left out of the AUC mean only.
pub fn aggregate(per_video: &[MetricSet], frames: &[usize]) -> Result<Aggregate> {
    if per_video.is_empty() {
        return Err(Error::InsufficientData("no videos to aggregate".into()));
    }
    if per_video.len() != frames.len() {
        return Err(Error::LengthMismatch(per_video.len(), frames.len()));
    }
    if frames.iter().sum::<usize>() == 0 {
        return Err(Error::InvalidParameter("frame counts sum to zero".into()));
    }
    let ones = vec![1.0; per_video.len()];
    let fw: Vec<f64> = frames.iter().map(|&f| f as f64).collect();
    Ok(Aggregate {
        unweighted: weighted_mean(per_video, &ones),
        frame_weighted: weighted_mean(per_video, &fw),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_extremes() {
        let ones = vec![true; 7];
        let c = confusion(&ones, &ones).unwrap();
        assert_eq!((c.tp, c.fp, c.tn, c.fn_), (7, 0, 0, 0));
        let truth = [true, false, true, false];
        let flipped: Vec<bool> = truth.iter().map(|t| !t).collect();
        let c = confusion(&flipped, &truth).unwrap();
        assert_eq!((c.tp, c.tn), (0, 0));
        assert!(matches!(confusion(&[true], &truth), Err(Error::LengthMismatch(1, 4))));
    }

    #[test]
    fn symmetric_counts() {
        let m = metrics(&ConfusionCounts { tp: 25, fp: 25, tn: 25, fn_: 25 });
        for v in [m.accuracy, m.precision, m.tpr, m.f1] {
            assert!((v - 0.5).abs() < 1e-15);
        }
        assert!(m.undefined.is_empty());
    }

    #[test]
    fn no_predicted_positives() {
        let m = metrics(&ConfusionCounts { tp: 0, fp: 0, tn: 10, fn_: 5 });
        assert_eq!(m.precision, 0.0);
        assert_eq!(m.f1, 0.0);
        assert!(m.undefined.contains(&"precision".to_string()));
    }

    #[test]
    fn auc_edge_cases() {
        let truth = [false, false, true, true];
        assert_eq!(auc(&[0.1, 0.2, 0.8, 0.9], &truth).unwrap(), 1.0);
        assert_eq!(auc(&[1.0; 4], &truth).unwrap(), 0.5);
        assert!(matches!(auc(&[0.1, 0.2], &[true, true]), Err(Error::DegenerateTruth)));
    }

    #[test]
    fn aggregate_modes() {
        let a = MetricSet { tpr: 1.0, auc: Some(1.0), ..Default::default() };
        let b = MetricSet { tpr: 0.0, auc: None, ..Default::default() };
        let agg = aggregate(&[a.clone(), b], &[30, 10]).unwrap();
        assert_eq!(agg.unweighted.tpr, 0.5);
        assert_eq!(agg.frame_weighted.tpr, 0.75);
        assert_eq!(agg.unweighted.auc, Some(1.0));
        let single = aggregate(std::slice::from_ref(&a), &[5]).unwrap();
        assert_eq!(single.unweighted, a);
    }
}
