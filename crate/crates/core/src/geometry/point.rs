use num_complex::Complex64;
use std::fmt;

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtPoint {
    Finite(Complex64),
    Infinity,
}

impl ExtPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtPoint::Finite(z) => Some(z),
            ExtPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }

    /// Chordal distance on the unit-diameter-2 sphere; bounded by 2.
    pub fn chordal_distance(self, other: ExtPoint) -> f64 {
        match (self, other) {
            (ExtPoint::Infinity, ExtPoint::Infinity) => 0.0,
            (ExtPoint::Finite(z), ExtPoint::Infinity) | (ExtPoint::Infinity, ExtPoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtPoint::Finite(z), ExtPoint::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }

    pub fn approx_eq(self, other: ExtPoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }
}

impl From<Complex64> for ExtPoint {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtPoint::Finite(z)
        } else {
            ExtPoint::Infinity
        }
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            ExtPoint::Infinity => write!(f, "inf"),
        }
    }
}
