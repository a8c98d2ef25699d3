use crate::error::{Error, Result};

/// Per-frame metric values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    values: Vec<f64>,
}

impl MetricSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Invalid(format!(
                "metric values must lie in [0, 1], got {v}"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesStats {
    pub mean: f64,
    /// Fraction of frames strictly above 0.5.
    pub recall: f64,
    /// Mean of the first temporal quartile minus mean of the last.
    pub decay: f64,
}

/// Arithmetic mean, accumulated as offsets from the first value so that a
/// constant input returns that constant exactly.
pub fn mean(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return f64::NAN;
    };
    first + values.iter().map(|v| v - first).sum::<f64>() / values.len() as f64
}

/// Sizes of four contiguous, near-equal bins; remainder frames go to the
/// earliest bins.
fn quartile_sizes(n: usize) -> [usize; 4] {
    let (base, rem) = (n / 4, n % 4);
    std::array::from_fn(|k| base + usize::from(k < rem))
}

pub fn series_stats(s: &MetricSeries) -> Result<SeriesStats> {
    let v = s.values();
    if v.is_empty() {
        return Err(Error::Empty("metric series"));
    }
    let n = v.len();
    let recall = v.iter().filter(|&&x| x > 0.5).count() as f64 / n as f64;
    let decay = if n < 4 {
        // Not enough frames for four bins: compare the first and last frame.
        v[0] - v[n - 1]
    } else {
        let sizes = quartile_sizes(n);
        let first = &v[..sizes[0]];
        let last = &v[n - sizes[3]..];
        mean(first) - mean(last)
    };
    Ok(SeriesStats {
        mean: mean(v),
        recall,
        decay,
    })
}
