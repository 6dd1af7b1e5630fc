use num_complex::Complex64;

use super::ExtPoint;
use crate::error::{Error, Result};

/// Fractional linear map `z -> (a z + b) / (c z + d)`, stored with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-300) || det.norm() <= 1e-14 * scale * scale || !det.is_finite() {
            return Err(Error::DegenerateMoebius);
        }
        let s = det.sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self { a: one, b: zero, c: zero, d: one }
    }

    pub fn translation(shift: Complex64) -> Self {
        Self::new(1.0.into(), shift, 0.0.into(), 1.0.into()).expect("translation is invertible")
    }

    pub fn scaling(factor: Complex64) -> Result<Self> {
        Self::new(factor, 0.0.into(), 0.0.into(), 1.0.into())
    }

    pub fn inversion() -> Self {
        Self::new(0.0.into(), 1.0.into(), 1.0.into(), 0.0.into()).expect("1/z is invertible")
    }

    /// `z -> 1 / (z - p)`, the chart sending `p` to infinity.
    pub fn inversion_at(p: Complex64) -> Self {
        Self::new(0.0.into(), 1.0.into(), 1.0.into(), -p).expect("1/(z-p) is invertible")
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply(&self, z: ExtPoint) -> ExtPoint {
        match z {
            ExtPoint::Infinity => {
                if self.c.norm() == 0.0 {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.a / self.c)
                }
            }
            ExtPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::from((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Applies the map to a finite point, returning `None` at the pole.
    pub fn apply_finite(&self, z: Complex64) -> Option<Complex64> {
        self.apply(ExtPoint::Finite(z)).finite()
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        1.0 / (den * den)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// The point sent to infinity.
    pub fn pole(&self) -> ExtPoint {
        if self.c.norm() == 0.0 {
            ExtPoint::Infinity
        } else {
            ExtPoint::from(-self.d / self.c)
        }
    }

    /// Coefficient-wise comparison modulo the sign ambiguity of the det-1 normalization.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let close = |s: f64| {
            (self.a - s * other.a).norm() <= tol
                && (self.b - s * other.b).norm() <= tol
                && (self.c - s * other.c).norm() <= tol
                && (self.d - s * other.d).norm() <= tol
        };
        close(1.0) || close(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_inversion() {
        let phi = MoebiusMap::inversion();
        assert_eq!(phi.apply(ExtPoint::Finite(c(2.0, 0.0))), ExtPoint::Finite(c(0.5, 0.0)));
        assert_eq!(phi.apply(ExtPoint::Finite(c(0.0, 0.0))), ExtPoint::Infinity);
        assert_eq!(phi.apply(ExtPoint::Infinity), ExtPoint::Finite(c(0.0, 0.0)));
    }

    #[test]
    fn compose_translation_and_dilation() {
        let shift = MoebiusMap::translation(c(1.0, 0.0));
        let double = MoebiusMap::scaling(c(2.0, 0.0)).unwrap();
        let w = shift.compose(&double).apply_finite(c(3.0, 0.0)).unwrap();
        assert!((w - c(7.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivative_of_inversion() {
        let phi = MoebiusMap::inversion();
        assert!((phi.derivative(c(2.0, 0.0)) - c(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inverse_is_identity_up_to_sign() {
        let phi = MoebiusMap::new(c(1.0, 2.0), c(0.5, -1.0), c(0.3, 0.1), c(2.0, 0.0)).unwrap();
        assert!(phi.compose(&phi.inverse()).approx_eq(&MoebiusMap::identity(), 1e-12));
        assert!(phi.inverse().compose(&phi).approx_eq(&MoebiusMap::identity(), 1e-12));
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(
            MoebiusMap::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)),
            Err(Error::DegenerateMoebius)
        );
    }
}
