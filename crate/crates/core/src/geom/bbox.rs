use crate::error::{Error, Result};

/// Axis-aligned box in continuous pixel coordinates.
///
/// `(x, y)` is the top-left corner; the box covers `[x, x + w) × [y, y + h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

impl BBox {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && w.is_finite() && h.is_finite()) {
            return Err(Error::InvalidBox(format!(
                "non-finite coordinates ({x}, {y}, {w}, {h})"
            )));
        }
        if w <= 0.0 || h <= 0.0 {
            return Err(Error::InvalidBox(format!(
                "width and height must be positive, got w={w} h={h}"
            )));
        }
        Ok(Self { x, y, w, h })
    }

    /// Builds a box from its left/top/right/bottom edges.
    pub fn from_edges(left: f64, top: f64, right: f64, bottom: f64) -> Result<Self> {
        Self::new(left, top, right - left, bottom - top)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Whether the point lies inside the half-open box.
    pub fn contains(&self, px: f64, py: f64) -> bool {
        px >= self.x && px < self.right() && py >= self.y && py < self.bottom()
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let iw = self.right().min(other.right()) - self.x.max(other.x);
        let ih = self.bottom().min(other.bottom()) - self.y.max(other.y);
        if iw <= 0.0 || ih <= 0.0 {
            0.0
        } else {
            iw * ih
        }
    }
}

/// Intersection over union of two boxes, computed analytically.
pub fn box_iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter == 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(x: f64, y: f64, w: f64, h: f64) -> BBox {
        BBox::new(x, y, w, h).unwrap()
    }

    /// Counts unit cells covered by each box on an integer grid.
    fn raster_iou(a: &BBox, b: &BBox, grid: usize) -> f64 {
        let (mut inter, mut union) = (0usize, 0usize);
        for r in 0..grid {
            for c in 0..grid {
                let (px, py) = (c as f64 + 0.5, r as f64 + 0.5);
                let (ia, ib) = (a.contains(px, py), b.contains(px, py));
                inter += (ia && ib) as usize;
                union += (ia || ib) as usize;
            }
        }
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }

    #[test]
    fn identical_boxes() {
        let a = bx(0.0, 0.0, 10.0, 10.0);
        assert_eq!(box_iou(&a, &a), 1.0);
    }

    #[test]
    fn disjoint_boxes() {
        assert_eq!(
            box_iou(&bx(0.0, 0.0, 10.0, 10.0), &bx(20.0, 0.0, 10.0, 10.0)),
            0.0
        );
    }

    #[test]
    fn half_shift_is_one_third() {
        let a = bx(0.0, 0.0, 10.0, 10.0);
        let b = bx(5.0, 0.0, 10.0, 10.0);
        let oracle = raster_iou(&a, &b, 30);
        assert!((oracle - 1.0 / 3.0).abs() < 1e-15);
        assert!((box_iou(&a, &b) - oracle).abs() < 1e-12);
    }

    #[test]
    fn touching_edges_do_not_overlap() {
        assert_eq!(
            box_iou(&bx(0.0, 0.0, 5.0, 5.0), &bx(5.0, 0.0, 5.0, 5.0)),
            0.0
        );
    }

    #[test]
    fn rejects_degenerate() {
        assert!(BBox::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(BBox::new(0.0, 0.0, 1.0, -1.0).is_err());
        assert!(BBox::new(f64::NAN, 0.0, 1.0, 1.0).is_err());
    }

    fn int_box(grid: u32) -> impl Strategy<Value = BBox> {
        (0..grid, 0..grid).prop_flat_map(move |(x, y)| {
            (1..=grid - x, 1..=grid - y)
                .prop_map(move |(w, h)| BBox::new(x as f64, y as f64, w as f64, h as f64).unwrap())
        })
    }

    proptest! {
        #[test]
        fn matches_raster_oracle(a in int_box(64), b in int_box(64)) {
            prop_assert!((box_iou(&a, &b) - raster_iou(&a, &b, 64)).abs() < 1e-9);
        }

        #[test]
        fn symmetric(
            ax in -50.0..50.0f64, ay in -50.0..50.0f64, aw in 0.1..40.0f64, ah in 0.1..40.0f64,
            bx_ in -50.0..50.0f64, by in -50.0..50.0f64, bw in 0.1..40.0f64, bh in 0.1..40.0f64,
        ) {
            let a = bx(ax, ay, aw, ah);
            let b = bx(bx_, by, bw, bh);
            let v = box_iou(&a, &b);
            prop_assert_eq!(v, box_iou(&b, &a));
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}
