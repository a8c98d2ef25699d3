use super::series::{mean, MetricSeries};
use crate::error::{Error, Result};
use crate::geom::{box_iou, BBox};
use crate::rerank::Track;

/// Per-frame IoU over the frames where ground truth exists (`gt[f - 1]`).
/// A missing prediction on such a frame scores 0.
pub fn track_iou_series(pred: &Track, gt: &[Option<BBox>]) -> Result<MetricSeries> {
    let values: Vec<f64> = gt
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            g.as_ref()
                .map(|g| pred.get(i as u32 + 1).map_or(0.0, |p| box_iou(&p, g)))
        })
        .collect();
    if values.is_empty() {
        return Err(Error::Empty("ground-truth frames"));
    }
    MetricSeries::new(values)
}

pub fn track_miou(pred: &Track, gt: &[Option<BBox>]) -> Result<f64> {
    Ok(mean(track_iou_series(pred, gt)?.values()))
}

/// Success AUC: mean over 21 thresholds `0.00, 0.05, …, 1.00` of the fraction
/// of frames whose IoU is strictly above the threshold.
pub fn auc_success(ious: &MetricSeries) -> Result<f64> {
    let v = ious.values();
    if v.is_empty() {
        return Err(Error::Empty("IoU series"));
    }
    let n = v.len() as f64;
    let total: f64 = (0..=20)
        .map(|k| {
            let tau = k as f64 / 20.0;
            v.iter().filter(|&&x| x > tau).count() as f64 / n
        })
        .sum();
    Ok(total / 21.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(x: f64, w: f64) -> BBox {
        BBox::new(x, 0.0, w, 10.0).unwrap()
    }

    #[test]
    fn perfect_track() {
        let gt = vec![Some(bx(0.0, 10.0)), None, Some(bx(3.0, 4.0))];
        let pred = Track::from_entries("v", "q", gt.clone());
        assert_eq!(track_miou(&pred, &gt).unwrap(), 1.0);
    }

    #[test]
    fn missing_predictions() {
        let gt = vec![Some(bx(0.0, 10.0)), Some(bx(0.0, 10.0))];
        assert_eq!(track_miou(&Track::empty("v", "q", 2), &gt).unwrap(), 0.0);
        // shorter prediction than ground truth
        assert_eq!(track_miou(&Track::empty("v", "q", 0), &gt).unwrap(), 0.0);
    }

    #[test]
    fn two_thirds() {
        let gt = vec![Some(bx(0.0, 10.0)), Some(bx(0.0, 10.0))];
        let pred = Track::from_entries("v", "q", vec![Some(bx(0.0, 10.0)), Some(bx(5.0, 10.0))]);
        assert!((track_miou(&pred, &gt).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_gt_frames() {
        assert!(matches!(
            track_miou(&Track::empty("v", "q", 2), &[None, None]),
            Err(Error::Empty(_))
        ));
    }

    fn auc(v: &[f64]) -> f64 {
        auc_success(&MetricSeries::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn auc_cases() {
        assert_eq!(auc(&[0.0, 0.0]), 0.0);
        assert_eq!(auc(&[1.0; 5]), 20.0 / 21.0);
        assert_eq!(auc(&[0.5; 3]), 10.0 / 21.0);
        assert!(auc_success(&MetricSeries::new(vec![]).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn auc_monotone(pairs in proptest::collection::vec((0.0..=1.0f64, 0.0..=1.0f64), 1..40)) {
            let lo: Vec<f64> = pairs.iter().map(|&(a, b)| a.min(b)).collect();
            let hi: Vec<f64> = pairs.iter().map(|&(a, b)| a.max(b)).collect();
            prop_assert!(auc(&hi) >= auc(&lo));
        }
    }
}
