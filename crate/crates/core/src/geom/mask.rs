use super::{AffineTransform, BBox};
use crate::error::{Error, Result};

/// Binary pixel grid stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    height: usize,
    width: usize,
    bits: Vec<bool>,
}

impl Mask {
    /// All-zero mask.
    pub fn empty(height: usize, width: usize) -> Result<Self> {
        check_dims(height, width)?;
        Ok(Self {
            height,
            width,
            bits: vec![false; height * width],
        })
    }

    pub fn full(height: usize, width: usize) -> Result<Self> {
        check_dims(height, width)?;
        Ok(Self {
            height,
            width,
            bits: vec![true; height * width],
        })
    }

    pub fn from_bits(height: usize, width: usize, bits: Vec<bool>) -> Result<Self> {
        check_dims(height, width)?;
        if bits.len() != height * width {
            return Err(Error::InvalidMask(format!(
                "expected {} bits for {height}x{width}, got {}",
                height * width,
                bits.len()
            )));
        }
        Ok(Self {
            height,
            width,
            bits,
        })
    }

    /// Rasterizes a box: a pixel is set when its center lies inside `b`.
    pub fn from_box(height: usize, width: usize, b: &BBox) -> Result<Self> {
        let mut m = Self::empty(height, width)?;
        let (c0, c1) = center_span(b.x(), b.right(), width);
        let (r0, r1) = center_span(b.y(), b.bottom(), height);
        for r in r0..r1 {
            m.bits[r * width + c0..r * width + c1].fill(true);
        }
        Ok(m)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn same_dims(&self, other: &Mask) -> Result<()> {
        if self.height != other.height || self.width != other.width {
            return Err(Error::DimensionMismatch {
                left_height: self.height,
                left_width: self.width,
                right_height: other.height,
                right_width: other.width,
            });
        }
        Ok(())
    }

    /// Iterator over `(row, col)` of set pixels in row-major order.
    pub fn set_pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / w, i % w))
    }

    /// Mean `(row, col)` of set pixels, `None` for an empty mask.
    pub fn centroid(&self) -> Option<(f64, f64)> {
        let (mut sr, mut sc, mut n) = (0.0, 0.0, 0usize);
        for (r, c) in self.set_pixels() {
            sr += r as f64;
            sc += c as f64;
            n += 1;
        }
        (n > 0).then(|| (sr / n as f64, sc / n as f64))
    }

    /// Integer shift; pixels moved outside the grid are dropped.
    pub fn translate(&self, drow: i64, dcol: i64) -> Mask {
        let mut out = vec![false; self.bits.len()];
        for (r, c) in self.set_pixels() {
            let (nr, nc) = (r as i64 + drow, c as i64 + dcol);
            if nr >= 0 && nc >= 0 && (nr as usize) < self.height && (nc as usize) < self.width {
                out[nr as usize * self.width + nc as usize] = true;
            }
        }
        Mask {
            height: self.height,
            width: self.width,
            bits: out,
        }
    }

    pub fn and(&self, other: &Mask) -> Result<Mask> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn or(&self, other: &Mask) -> Result<Mask> {
        self.zip_with(other, |a, b| a || b)
    }

    fn zip_with(&self, other: &Mask, f: impl Fn(bool, bool) -> bool) -> Result<Mask> {
        self.same_dims(other)?;
        Ok(Mask {
            height: self.height,
            width: self.width,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

fn check_dims(height: usize, width: usize) -> Result<()> {
    if height == 0 || width == 0 {
        return Err(Error::InvalidMask(format!(
            "dimensions must be at least 1x1, got {height}x{width}"
        )));
    }
    Ok(())
}

/// Index range `[lo, hi)` of pixels whose centers fall in `[start, end)`.
fn center_span(start: f64, end: f64, len: usize) -> (usize, usize) {
    let lo = (start - 0.5).ceil().max(0.0);
    let hi = (end - 0.5).ceil().max(0.0);
    let lo = (lo as usize).min(len);
    let hi = (hi as usize).min(len);
    (lo, hi.max(lo))
}

/// Jaccard index. Two empty masks score 1.0.
pub fn mask_iou(a: &Mask, b: &Mask) -> Result<f64> {
    a.same_dims(b)?;
    let (mut inter, mut union) = (0usize, 0usize);
    for (&x, &y) in a.bits.iter().zip(&b.bits) {
        inter += (x && y) as usize;
        union += (x || y) as usize;
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

/// Tight box over set pixels; width is `maxcol - mincol + 1`.
pub fn box_from_mask(m: &Mask) -> Option<BBox> {
    let mut it = m.set_pixels();
    let (r, c) = it.next()?;
    let (mut r0, mut r1, mut c0, mut c1) = (r, r, c, c);
    for (r, c) in it {
        r1 = r1.max(r);
        c0 = c0.min(c);
        c1 = c1.max(c);
        r0 = r0.min(r);
    }
    BBox::new(
        c0 as f64,
        r0 as f64,
        (c1 - c0 + 1) as f64,
        (r1 - r0 + 1) as f64,
    )
    .ok()
}

/// Nearest-neighbour inverse warp. Output pixel `(row, col)` is set when the
/// inverse-mapped location, rounded half-up on both axes, is a set source
/// pixel inside the grid.
pub fn warp_mask(m: &Mask, t: &AffineTransform) -> Result<Mask> {
    let det = t.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(Error::NonInvertible(det));
    }
    if t.is_identity() {
        return Ok(m.clone());
    }
    let inv = t.inverse();
    let (h, w) = (m.height as f64, m.width as f64);
    let mut out = Mask::empty(m.height, m.width)?;
    for r in 0..m.height {
        for c in 0..m.width {
            let (sx, sy) = inv.apply(c as f64, r as f64);
            let sc = (sx + 0.5).floor();
            let sr = (sy + 0.5).floor();
            if sc >= 0.0 && sr >= 0.0 && sc < w && sr < h && m.get(sr as usize, sc as usize) {
                out.set(r, c, true);
            }
        }
    }
    Ok(out)
}

/// Set pixels with an unset 4-neighbour or lying on the image border.
pub fn boundary_pixels(m: &Mask) -> Mask {
    let (h, w) = (m.height, m.width);
    let mut out = vec![false; m.bits.len()];
    for (r, c) in m.set_pixels() {
        let edge = r == 0 || c == 0 || r + 1 == h || c + 1 == w;
        out[r * w + c] =
            edge || !m.get(r - 1, c) || !m.get(r + 1, c) || !m.get(r, c - 1) || !m.get(r, c + 1);
    }
    Mask {
        height: h,
        width: w,
        bits: out,
    }
}

/// Dilation by a `(2·radius + 1)²` square (Chebyshev ball), separable pass.
pub fn dilate_chebyshev(m: &Mask, radius: usize) -> Mask {
    if radius == 0 {
        return m.clone();
    }
    let (h, w) = (m.height, m.width);
    let horizontal = window_any(&m.bits, h, w, radius, true);
    let bits = window_any(&horizontal, h, w, radius, false);
    Mask {
        height: h,
        width: w,
        bits,
    }
}

/// Sliding-window OR along rows (`along_rows`) or columns via prefix counts.
fn window_any(bits: &[bool], h: usize, w: usize, radius: usize, along_rows: bool) -> Vec<bool> {
    let (lines, len) = if along_rows { (h, w) } else { (w, h) };
    let idx = |line: usize, k: usize| {
        if along_rows {
            line * w + k
        } else {
            k * w + line
        }
    };
    let mut out = vec![false; bits.len()];
    let mut prefix = vec![0usize; len + 1];
    for line in 0..lines {
        for k in 0..len {
            prefix[k + 1] = prefix[k] + bits[idx(line, k)] as usize;
        }
        for k in 0..len {
            let lo = k.saturating_sub(radius);
            let hi = (k + radius + 1).min(len);
            out[idx(line, k)] = prefix[hi] > prefix[lo];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mask_from_rows(rows: &[&str]) -> Mask {
        let h = rows.len();
        let w = rows[0].len();
        let bits = rows
            .iter()
            .flat_map(|r| r.chars().map(|ch| ch == '1'))
            .collect();
        Mask::from_bits(h, w, bits).unwrap()
    }

    fn brute_boundary(m: &Mask) -> Mask {
        let (h, w) = (m.height() as i64, m.width() as i64);
        let mut out = Mask::empty(m.height(), m.width()).unwrap();
        for r in 0..h {
            for c in 0..w {
                if !m.get(r as usize, c as usize) {
                    continue;
                }
                let mut hit = false;
                for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= h || nc >= w || !m.get(nr as usize, nc as usize) {
                        hit = true;
                    }
                }
                out.set(r as usize, c as usize, hit);
            }
        }
        out
    }

    #[test]
    fn iou_identity_and_empty() {
        let m = mask_from_rows(&["0110", "0010"]);
        assert_eq!(mask_iou(&m, &m).unwrap(), 1.0);
        let e = Mask::empty(2, 4).unwrap();
        assert_eq!(mask_iou(&e, &e).unwrap(), 1.0);
        assert_eq!(mask_iou(&e, &m).unwrap(), 0.0);
    }

    #[test]
    fn iou_one_seventh() {
        let a = mask_from_rows(&["1100", "1100", "0000", "0000"]);
        let b = mask_from_rows(&["0000", "0110", "0110", "0000"]);
        assert!((mask_iou(&a, &b).unwrap() - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn iou_dimension_mismatch() {
        let a = Mask::empty(2, 3).unwrap();
        let b = Mask::empty(3, 2).unwrap();
        assert!(matches!(
            mask_iou(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn box_from_mask_cases() {
        assert!(box_from_mask(&Mask::empty(4, 4).unwrap()).is_none());
        let mut m = Mask::empty(5, 5).unwrap();
        m.set(2, 3, true);
        assert_eq!(
            box_from_mask(&m),
            Some(BBox::new(3.0, 2.0, 1.0, 1.0).unwrap())
        );
        assert_eq!(
            box_from_mask(&Mask::full(4, 4).unwrap()),
            Some(BBox::new(0.0, 0.0, 4.0, 4.0).unwrap())
        );
    }

    #[test]
    fn warp_identity_and_translation() {
        let m = mask_from_rows(&["1000", "0110"]);
        assert_eq!(warp_mask(&m, &AffineTransform::identity()).unwrap(), m);

        let single = mask_from_rows(&["100"]);
        let t = AffineTransform::translation(1.0, 0.0);
        assert_eq!(warp_mask(&single, &t).unwrap(), mask_from_rows(&["010"]));

        let last = mask_from_rows(&["001"]);
        assert!(warp_mask(&last, &t).unwrap().is_empty());
    }

    #[test]
    fn warp_rejects_singular() {
        let m = Mask::full(2, 2).unwrap();
        // composition underflows to a zero determinant
        let tiny = AffineTransform::scale(1e-100).unwrap();
        let t = tiny.then(&tiny);
        assert!(matches!(warp_mask(&m, &t), Err(Error::NonInvertible(_))));
    }

    #[test]
    fn boundary_cases() {
        assert!(boundary_pixels(&Mask::empty(3, 3).unwrap()).is_empty());
        let full = Mask::full(3, 3).unwrap();
        assert_eq!(
            boundary_pixels(&full),
            mask_from_rows(&["111", "101", "111"])
        );

        let block = mask_from_rows(&["00000", "01110", "01110", "01110", "00000"]);
        let ring = mask_from_rows(&["00000", "01110", "01010", "01110", "00000"]);
        assert_eq!(boundary_pixels(&block), brute_boundary(&block));
        assert_eq!(boundary_pixels(&block), ring);
        assert_eq!(boundary_pixels(&block).count(), 8);
    }

    #[test]
    fn rasterize_box() {
        let m = Mask::from_box(4, 4, &BBox::new(1.0, 1.0, 2.0, 2.0).unwrap()).unwrap();
        assert_eq!(m, mask_from_rows(&["0000", "0110", "0110", "0000"]));
        let outside = Mask::from_box(4, 4, &BBox::new(10.0, 10.0, 2.0, 2.0).unwrap()).unwrap();
        assert!(outside.is_empty());
    }

    fn brute_dilate(m: &Mask, radius: i64) -> Mask {
        let (h, w) = (m.height() as i64, m.width() as i64);
        let mut out = Mask::empty(m.height(), m.width()).unwrap();
        for r in 0..h {
            for c in 0..w {
                let mut hit = false;
                for rr in (r - radius).max(0)..=(r + radius).min(h - 1) {
                    for cc in (c - radius).max(0)..=(c + radius).min(w - 1) {
                        hit |= m.get(rr as usize, cc as usize);
                    }
                }
                out.set(r as usize, c as usize, hit);
            }
        }
        out
    }

    fn arb_mask(max: usize) -> impl Strategy<Value = Mask> {
        (1..=max, 1..=max).prop_flat_map(|(h, w)| {
            proptest::collection::vec(any::<bool>(), h * w)
                .prop_map(move |bits| Mask::from_bits(h, w, bits).unwrap())
        })
    }

    /// Mask made of a few filled rectangles; smoother than pixel noise.
    fn arb_blob_mask() -> impl Strategy<Value = Mask> {
        (8usize..32, 8usize..32).prop_flat_map(|(h, w)| {
            proptest::collection::vec((0..w, 0..h, 1..w, 1..h), 1..4).prop_map(move |rects| {
                let mut m = Mask::empty(h, w).unwrap();
                for (x, y, rw, rh) in rects {
                    let b = BBox::new(x as f64, y as f64, rw as f64, rh as f64).unwrap();
                    m = m.or(&Mask::from_box(h, w, &b).unwrap()).unwrap();
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn iou_symmetric(pair in (1usize..12, 1usize..12).prop_flat_map(|(h, w)| (
            proptest::collection::vec(any::<bool>(), h * w),
            proptest::collection::vec(any::<bool>(), h * w),
        ).prop_map(move |(a, b)| (Mask::from_bits(h, w, a).unwrap(), Mask::from_bits(h, w, b).unwrap())))) {
            let (a, b) = pair;
            prop_assert_eq!(mask_iou(&a, &b).unwrap(), mask_iou(&b, &a).unwrap());
            if !a.is_empty() {
                prop_assert_eq!(mask_iou(&a, &a).unwrap(), 1.0);
            }
        }

        #[test]
        fn boundary_matches_brute_force(m in arb_mask(16)) {
            prop_assert_eq!(boundary_pixels(&m), brute_boundary(&m));
        }

        #[test]
        fn dilation_matches_brute_force(m in arb_mask(16), radius in 0usize..4) {
            prop_assert_eq!(dilate_chebyshev(&m, radius), brute_dilate(&m, radius as i64));
        }

        #[test]
        fn warp_round_trip_stays_near(
            m in arb_blob_mask(),
            theta in -0.5f64..0.5,
            s in 0.9f64..1.1,
            tx in -4.0f64..4.0,
            ty in -4.0f64..4.0,
        ) {
            let t = AffineTransform::rotation_about(theta, 10.0, 10.0)
                .then(&AffineTransform::scale(s).unwrap())
                .then(&AffineTransform::translation(tx, ty));
            let back = warp_mask(&warp_mask(&m, &t).unwrap(), &t.inverse()).unwrap();
            let allowed = dilate_chebyshev(&m, 1);
            for (r, c) in back.set_pixels() {
                prop_assert!(allowed.get(r, c), "pixel ({}, {}) escaped the dilation", r, c);
            }
        }
    }
}
