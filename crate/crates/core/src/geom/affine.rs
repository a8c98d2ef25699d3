use crate::error::{Error, Result};

/// Invertible 2-D affine map `(px, py) -> (a·px + b·py + tx, c·px + d·py + ty)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTransform {
    a: f64,
    b: f64,
    tx: f64,
    c: f64,
    d: f64,
    ty: f64,
}

impl AffineTransform {
    pub fn new(a: f64, b: f64, tx: f64, c: f64, d: f64, ty: f64) -> Result<Self> {
        let coeffs = [a, b, tx, c, d, ty];
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "affine coefficients must be finite: {coeffs:?}"
            )));
        }
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NonInvertible(det));
        }
        Ok(Self { a, b, tx, c, d, ty })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            tx: 0.0,
            c: 0.0,
            d: 1.0,
            ty: 0.0,
        }
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        Self {
            tx: dx,
            ty: dy,
            ..Self::identity()
        }
    }

    /// Isotropic scale about the origin.
    pub fn scale(s: f64) -> Result<Self> {
        Self::new(s, 0.0, 0.0, 0.0, s, 0.0)
    }

    /// Rotation by `theta` radians about `(cx, cy)`.
    pub fn rotation_about(theta: f64, cx: f64, cy: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            a: c,
            b: -s,
            tx: cx - c * cx + s * cy,
            c: s,
            d: c,
            ty: cy - s * cx - c * cy,
        }
    }

    pub fn coefficients(&self) -> [f64; 6] {
        [self.a, self.b, self.tx, self.c, self.d, self.ty]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, px: f64, py: f64) -> (f64, f64) {
        (
            self.a * px + self.b * py + self.tx,
            self.c * px + self.d * py + self.ty,
        )
    }

    pub fn inverse(&self) -> Self {
        let det = self.determinant();
        let (a, b, c, d) = (self.d / det, -self.b / det, -self.c / det, self.a / det);
        Self {
            a,
            b,
            tx: -(a * self.tx + b * self.ty),
            c,
            d,
            ty: -(c * self.tx + d * self.ty),
        }
    }

    /// Composition that applies `self` first and `next` second.
    pub fn then(&self, next: &AffineTransform) -> Self {
        Self {
            a: next.a * self.a + next.b * self.c,
            b: next.a * self.b + next.b * self.d,
            tx: next.a * self.tx + next.b * self.ty + next.tx,
            c: next.c * self.a + next.d * self.c,
            d: next.c * self.b + next.d * self.d,
            ty: next.c * self.tx + next.d * self.ty + next.ty,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl Default for AffineTransform {
    fn default() -> Self {
        Self::identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_is_rejected() {
        assert!(matches!(
            AffineTransform::new(1.0, 2.0, 0.0, 2.0, 4.0, 0.0),
            Err(Error::NonInvertible(_))
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let t = AffineTransform::new(1.1, 0.2, 3.0, -0.1, 0.9, -2.0).unwrap();
        let id = t.then(&t.inverse());
        for (got, want) in id
            .coefficients()
            .iter()
            .zip(AffineTransform::identity().coefficients())
        {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_order() {
        let s = AffineTransform::scale(2.0).unwrap();
        let t = AffineTransform::translation(1.0, 0.0);
        // scale then translate: 3 -> 6 -> 7
        assert_eq!(s.then(&t).apply(3.0, 0.0), (7.0, 0.0));
        // translate then scale: 3 -> 4 -> 8
        assert_eq!(t.then(&s).apply(3.0, 0.0), (8.0, 0.0));
    }
}
