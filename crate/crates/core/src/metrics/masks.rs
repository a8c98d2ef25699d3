use super::series::{series_stats, MetricSeries, SeriesStats};
use crate::error::{Error, Result};
use crate::geom::{boundary_pixels, dilate_chebyshev, mask_iou, Mask};

/// Metric bundle for one (video, query) mask sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub j: SeriesStats,
    pub f: SeriesStats,
    /// Centroid-aligned frame-to-frame dissimilarity; `None` below two frames.
    pub t_proxy: Option<f64>,
    /// `(j.mean + f.mean) / 2`.
    pub jf: f64,
    pub j_series: MetricSeries,
    pub f_series: MetricSeries,
}

/// `ceil(0.008 · diagonal)`, at least one pixel.
pub fn default_boundary_tolerance(height: usize, width: usize) -> usize {
    let diag = ((height * height + width * width) as f64).sqrt();
    ((0.008 * diag).ceil() as usize).max(1)
}

/// Boundary F-measure with Chebyshev-distance tolerance `tol`.
pub fn boundary_f(pred: &Mask, gt: &Mask, tol: usize) -> Result<f64> {
    pred.same_dims(gt)?;
    let pb = boundary_pixels(pred);
    let gb = boundary_pixels(gt);
    let (np, ng) = (pb.count(), gb.count());
    if np == 0 && ng == 0 {
        return Ok(1.0);
    }
    if np == 0 || ng == 0 {
        return Ok(0.0);
    }
    let precision = pb.and(&dilate_chebyshev(&gb, tol))?.count() as f64 / np as f64;
    let recall = gb.and(&dilate_chebyshev(&pb, tol))?.count() as f64 / ng as f64;
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

fn round_half_up(v: f64) -> i64 {
    (v + 0.5).floor() as i64
}

/// Mean over consecutive frame pairs of `1 - J` after shifting the earlier
/// mask so both centroids coincide (integer shift). A pair with exactly one
/// empty mask counts 1, two empty masks count 0.
pub fn temporal_stability_proxy(pred: &[Mask]) -> Result<f64> {
    if pred.len() < 2 {
        return Err(Error::Invalid(format!(
            "temporal stability needs at least 2 frames, got {}",
            pred.len()
        )));
    }
    let mut total = 0.0;
    for pair in pred.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        a.same_dims(b)?;
        total += match (a.centroid(), b.centroid()) {
            (None, None) => 0.0,
            (None, Some(_)) | (Some(_), None) => 1.0,
            (Some((ar, ac)), Some((br, bc))) => {
                let shifted = a.translate(round_half_up(br - ar), round_half_up(bc - ac));
                1.0 - mask_iou(&shifted, b)?
            }
        };
    }
    Ok(total / (pred.len() - 1) as f64)
}

/// Full J/F/T report. `tol` defaults to [`default_boundary_tolerance`].
pub fn evaluate_masks(pred: &[Mask], gt: &[Mask], tol: Option<usize>) -> Result<EvalReport> {
    if gt.is_empty() {
        return Err(Error::Empty("ground-truth masks"));
    }
    if pred.len() != gt.len() {
        return Err(Error::Invalid(format!(
            "{} predicted frames vs {} ground-truth frames",
            pred.len(),
            gt.len()
        )));
    }
    let mut js = Vec::with_capacity(gt.len());
    let mut fs = Vec::with_capacity(gt.len());
    for (p, g) in pred.iter().zip(gt) {
        let tol = tol.unwrap_or_else(|| default_boundary_tolerance(g.height(), g.width()));
        js.push(mask_iou(p, g)?);
        fs.push(boundary_f(p, g, tol)?);
    }
    let j_series = MetricSeries::new(js)?;
    let f_series = MetricSeries::new(fs)?;
    let j = series_stats(&j_series)?;
    let f = series_stats(&f_series)?;
    let t_proxy = if pred.len() >= 2 {
        Some(temporal_stability_proxy(pred)?)
    } else {
        None
    };
    Ok(EvalReport {
        j,
        f,
        t_proxy,
        jf: (j.mean + f.mean) / 2.0,
        j_series,
        f_series,
    })
}
