use super::rng::DrawStream;
use crate::geom::BBox;

const MAX_REDRAWS: usize = 16;

/// Image extent used to clamp generated boxes. Unbounded sides use infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageBounds {
    pub width: f64,
    pub height: f64,
}

impl ImageBounds {
    pub fn new(width: f64, height: f64) -> Self {
        Self { width, height }
    }

    pub fn unbounded() -> Self {
        Self {
            width: f64::INFINITY,
            height: f64::INFINITY,
        }
    }
}

/// Perturbs each edge independently: left/right by `U(-f·w, f·w)`,
/// top/bottom by `U(-f·h, f·h)`, then clamps to the image. Results with a
/// side of 1 px or less are redrawn; after the retry budget the last draw is
/// widened to 1 px.
pub fn jitter_box(b: &BBox, fraction: f64, bounds: ImageBounds, rng: &mut DrawStream) -> BBox {
    if fraction <= 0.0 {
        return *b;
    }
    let (dx, dy) = (fraction * b.w(), fraction * b.h());
    let mut last = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..MAX_REDRAWS {
        let left = (b.x() + rng.uniform(-dx, dx)).clamp(0.0, bounds.width);
        let right = (b.right() + rng.uniform(-dx, dx)).clamp(0.0, bounds.width);
        let top = (b.y() + rng.uniform(-dy, dy)).clamp(0.0, bounds.height);
        let bottom = (b.bottom() + rng.uniform(-dy, dy)).clamp(0.0, bounds.height);
        if right - left > 1.0 && bottom - top > 1.0 {
            return BBox::from_edges(left, top, right, bottom).expect("positive extent");
        }
        last = (left, top, right, bottom);
    }
    let (left, top) = (last.0.min(last.2), last.1.min(last.3));
    let (left, right) = widen(left, bounds.width);
    let (top, bottom) = widen(top, bounds.height);
    BBox::from_edges(left, top, right, bottom).expect("unit extent")
}

/// A unit span starting at `start`, shifted back inside `[0, limit]`.
fn widen(start: f64, limit: f64) -> (f64, f64) {
    let end = (start + 1.0).min(limit.max(1.0));
    (end - 1.0, end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bx(x: f64, y: f64, w: f64, h: f64) -> BBox {
        BBox::new(x, y, w, h).unwrap()
    }

    #[test]
    fn zero_fraction_is_identity() {
        let b = bx(3.5, 4.0, 10.0, 7.0);
        let mut rng = DrawStream::new(1, &[]);
        assert_eq!(
            jitter_box(&b, 0.0, ImageBounds::new(20.0, 20.0), &mut rng),
            b
        );
    }

    #[test]
    fn envelope_holds() {
        let b = bx(10.0, 10.0, 100.0, 50.0);
        let bounds = ImageBounds::new(200.0, 100.0);
        for seed in 0..10_000u64 {
            let mut rng = DrawStream::new(seed, &[]);
            let j = jitter_box(&b, 0.2, bounds, &mut rng);
            assert!((j.x() - b.x()).abs() <= 20.0);
            assert!((j.right() - b.right()).abs() <= 20.0);
            assert!((j.y() - b.y()).abs() <= 10.0);
            assert!((j.bottom() - b.bottom()).abs() <= 10.0);
        }
    }

    #[test]
    fn corner_box_stays_inside() {
        let b = bx(0.0, 0.0, 8.0, 8.0);
        let bounds = ImageBounds::new(10.0, 10.0);
        for seed in 0..2_000u64 {
            let mut rng = DrawStream::new(seed, &[]);
            let j = jitter_box(&b, 3.0, bounds, &mut rng);
            assert!(j.x() >= 0.0 && j.y() >= 0.0);
            assert!(j.right() <= 10.0 && j.bottom() <= 10.0);
            assert!(j.w() >= 1.0 && j.h() >= 1.0);
        }
    }

    #[test]
    fn tiny_box_falls_back_to_unit() {
        let b = bx(0.0, 0.0, 0.5, 0.5);
        let mut rng = DrawStream::new(5, &[]);
        let j = jitter_box(&b, 0.1, ImageBounds::new(4.0, 4.0), &mut rng);
        assert_eq!((j.w(), j.h()), (1.0, 1.0));
        assert!(j.right() <= 4.0);
    }

    #[test]
    fn offsets_are_uniform() {
        let b = bx(100.0, 100.0, 100.0, 50.0);
        let bounds = ImageBounds::unbounded();
        let bins = 10;
        let n = 100_000;
        let mut hist = vec![[0usize; 4]; bins];
        for i in 0..n {
            let mut rng = DrawStream::new(99, &[i as u64]);
            let j = jitter_box(&b, 0.2, bounds, &mut rng);
            let offsets = [
                (j.x() - b.x()) / 20.0,
                (j.right() - b.right()) / 20.0,
                (j.y() - b.y()) / 10.0,
                (j.bottom() - b.bottom()) / 10.0,
            ];
            for (e, o) in offsets.iter().enumerate() {
                let k = (((o + 1.0) / 2.0) * bins as f64)
                    .floor()
                    .min(bins as f64 - 1.0) as usize;
                hist[k][e] += 1;
            }
        }
        let expected = n as f64 / bins as f64;
        for e in 0..4 {
            let worst = hist
                .iter()
                .map(|h| (h[e] as f64 - expected).abs() / expected)
                .fold(0.0, f64::max);
            assert!(worst < 0.05, "edge {e}: max bin deviation {worst}");
        }
    }
}
