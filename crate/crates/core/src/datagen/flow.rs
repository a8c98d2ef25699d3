use crate::error::{Error, Result};
use crate::geom::{AffineTransform, BBox, Mask};

/// Row-major grid of per-pixel values.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// Per-pixel motion `[dx, dy]` in pixels per frame.
pub type FlowField = Grid<[f64; 2]>;
/// Single channel in `[0, 255]`.
pub type GrayImage = Grid<f64>;
pub type RgbImage = Grid<[u8; 3]>;
/// Channels: R, G, B, flow magnitude, box interior.
pub type GuidanceImage = Grid<[f64; 5]>;

impl<T: Clone> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }
}

impl<T> Grid<T> {
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Invalid(format!(
                "grid {width}x{height} needs {} values, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let data = (0..height)
            .flat_map(|r| (0..width).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn at(&self, row: usize, col: usize) -> &T {
        &self.data[row * self.width + col]
    }

    fn check_same<U>(&self, other: &Grid<U>) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                left_height: self.height,
                left_width: self.width,
                right_height: other.height,
                right_width: other.width,
            });
        }
        Ok(())
    }
}

/// Flow induced by moving foreground pixels with `fg` and everything else
/// with `bg`: `flow(p) = T(p) - p`, with `p = (col, row)`.
pub fn synth_flow(fg_mask: &Mask, fg: &AffineTransform, bg: &AffineTransform) -> FlowField {
    Grid::from_fn(fg_mask.width(), fg_mask.height(), |r, c| {
        let t = if fg_mask.get(r, c) { fg } else { bg };
        let (px, py) = (c as f64, r as f64);
        let (qx, qy) = t.apply(px, py);
        [qx - px, qy - py]
    })
}

/// Lower median (element `(n - 1) / 2` of the sorted values).
fn lower_median(mut v: Vec<f64>) -> f64 {
    let k = (v.len() - 1) / 2;
    *v.select_nth_unstable_by(k, f64::total_cmp).1
}

fn median_compensated_magnitude(field: &FlowField) -> Vec<f64> {
    let mx = lower_median(field.data.iter().map(|v| v[0]).collect());
    let my = lower_median(field.data.iter().map(|v| v[1]).collect());
    field
        .data
        .iter()
        .map(|v| (v[0] - mx).hypot(v[1] - my))
        .collect()
}

/// Motion-magnitude image: subtract each field's component-wise median
/// vector, average forward and backward magnitudes, min-max scale to
/// `[0, 255]`. A constant result maps to all zeros.
pub fn flow_magnitude_image(fwd: &FlowField, bwd: &FlowField) -> Result<GrayImage> {
    fwd.check_same(bwd)?;
    if fwd.data.is_empty() {
        return Err(Error::Empty("flow field"));
    }
    let mf = median_compensated_magnitude(fwd);
    let mb = median_compensated_magnitude(bwd);
    let avg: Vec<f64> = mf.iter().zip(&mb).map(|(a, b)| 0.5 * (a + b)).collect();
    let lo = avg.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = avg.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let data = if span > 0.0 {
        avg.iter()
            .map(|v| ((v - lo) / span * 255.0).clamp(0.0, 255.0))
            .collect()
    } else {
        vec![0.0; avg.len()]
    };
    Grid::from_vec(fwd.width, fwd.height, data)
}

/// Stacks RGB, flow magnitude and a box channel (255 where the pixel center
/// lies inside `b`, else 0).
pub fn guidance_channels(rgb: &RgbImage, flowmag: &GrayImage, b: &BBox) -> Result<GuidanceImage> {
    rgb.check_same(flowmag)?;
    Ok(Grid::from_fn(rgb.width, rgb.height, |r, c| {
        let [red, green, blue] = *rgb.at(r, c);
        let inside = b.contains(c as f64 + 0.5, r as f64 + 0.5);
        [
            red as f64,
            green as f64,
            blue as f64,
            *flowmag.at(r, c),
            if inside { 255.0 } else { 0.0 },
        ]
    }))
}
