use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ExtPoint, MoebiusMap};
use crate::error::{Error, Result};

/// Coefficient magnitude below which a normalized circline is treated as a line.
pub const LINE_TOL: f64 = 1e-12;
/// Threshold on `| |I| - 1 |` (I the inversive product) for declaring tangency.
pub const TANGENCY_TOL: f64 = 1e-9;

/// Oriented Hermitian form `Q(z) = a|z|^2 + 2 Re(conj(b) z) + c`, normalized to
/// `|b|^2 - a c = 1`. The closed generalized disk it describes is `{Q <= 0}`
/// (infinity included iff `a <= 0`), and `-Q(z)` is the reciprocal Carathéodory
/// density of that disk at `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskForm {
    pub a: f64,
    pub b: Complex64,
    pub c: f64,
}

impl DiskForm {
    pub fn new(a: f64, b: Complex64, c: f64) -> Result<Self> {
        let disc = b.norm_sqr() - a * c;
        if !(disc > 0.0) || !disc.is_finite() {
            return Err(Error::InvalidCircline(format!(
                "non-positive discriminant |b|^2 - ac = {disc:e}"
            )));
        }
        let s = disc.sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s })
    }

    /// Raw (possibly degenerate) form, no normalization.
    pub(crate) fn raw(a: f64, b: Complex64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn value(&self, z: Complex64) -> f64 {
        self.a * z.norm_sqr() + 2.0 * (self.b.conj() * z).re + self.c
    }

    /// Projective value; at infinity only the sign is meaningful.
    pub fn value_ext(&self, z: ExtPoint) -> f64 {
        match z {
            ExtPoint::Finite(z) => self.value(z),
            ExtPoint::Infinity => self.a,
        }
    }

    /// Magnitude scale of the terms of `Q(z)`, used for relative tolerances.
    pub fn scale_at(&self, z: Complex64) -> f64 {
        1.0 + self.a.abs() * z.norm_sqr() + 2.0 * self.b.norm() * z.norm() + self.c.abs()
    }

    /// Euclidean gradient of `Q` written as a complex number.
    pub fn gradient(&self, z: Complex64) -> Complex64 {
        2.0 * (self.a * z + self.b)
    }

    pub fn negated(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c }
    }

    pub fn combine(&self, lambda: f64, other: &DiskForm) -> DiskForm {
        DiskForm::raw(self.a + lambda * other.a, self.b + lambda * other.b, self.c + lambda * other.c)
    }

    /// Polarization of `-det`; equals 1 on the diagonal for normalized forms. For two
    /// normalized circles it is the cosine of their intersection angle.
    pub fn polar(&self, other: &DiskForm) -> f64 {
        (self.b * other.b.conj()).re - 0.5 * (self.a * other.c + other.a * self.c)
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b.norm_sqr()
    }

    /// Image under `phi`: `H' = N^* H N` with `N = phi^{-1}`.
    pub fn transform(&self, phi: &MoebiusMap) -> DiskForm {
        let [n00, n01, n10, n11] = phi.inverse().coefficients();
        let (a, b, c) = (Complex64::from(self.a), self.b, Complex64::from(self.c));
        let hn00 = a * n00 + b * n10;
        let hn01 = a * n01 + b * n11;
        let hn10 = b.conj() * n00 + c * n10;
        let hn11 = b.conj() * n01 + c * n11;
        let a2 = n00.conj() * hn00 + n10.conj() * hn10;
        let b2 = n00.conj() * hn01 + n10.conj() * hn11;
        let c2 = n01.conj() * hn01 + n11.conj() * hn11;
        let out = DiskForm::raw(a2.re, b2, c2.re);
        DiskForm::new(out.a, out.b, out.c).unwrap_or(out)
    }

    /// Zero of a rank-one form (a point circle of a pencil).
    pub fn null_point(&self) -> ExtPoint {
        // Kernel vector (v0, v1) of [[a, b], [conj b, c]]; the point is v0 / v1.
        let row0 = self.a.abs() + self.b.norm();
        let row1 = self.b.norm() + self.c.abs();
        let (v0, v1) = if row0 >= row1 {
            (-self.b, Complex64::from(self.a))
        } else {
            (Complex64::from(self.c), -self.b.conj())
        };
        if v1.norm() <= 1e-14 * v0.norm() {
            ExtPoint::Infinity
        } else {
            ExtPoint::from(v0 / v1)
        }
    }

    pub fn circline(&self) -> Circline {
        Circline::from_coefficients(self.a, self.b, self.c).expect("normalized form is a circline")
    }
}

/// Geometric description of a circline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CirclineShape {
    Circle { center: Complex64, radius: f64 },
    /// Points `point + t * direction`, `direction` of unit length.
    Line { point: Complex64, direction: Complex64 },
}

/// Circle or line `{ a|z|^2 + conj(b) z + b conj(z) + c = 0 }`, stored projectively
/// with `max(|a|,|b|,|c|) = 1` and the first nonzero of `(a, Re b, Im b, c)` positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CirclineJson", into = "CirclineJson")]
pub struct Circline {
    a: f64,
    b: Complex64,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct CirclineJson {
    a: f64,
    b: [f64; 2],
    c: f64,
}

impl TryFrom<CirclineJson> for Circline {
    type Error = Error;
    fn try_from(j: CirclineJson) -> Result<Self> {
        Circline::from_coefficients(j.a, Complex64::new(j.b[0], j.b[1]), j.c)
    }
}

impl From<Circline> for CirclineJson {
    fn from(c: Circline) -> Self {
        CirclineJson { a: c.a, b: [c.b.re, c.b.im], c: c.c }
    }
}

impl Circline {
    pub fn from_coefficients(a: f64, b: Complex64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidCircline("non-finite coefficient".into()));
        }
        let scale = a.abs().max(b.norm()).max(c.abs());
        if scale == 0.0 {
            return Err(Error::InvalidCircline("all coefficients zero".into()));
        }
        let (a, b, c) = (a / scale, b / scale, c / scale);
        if b.norm_sqr() - a * c <= 1e-14 {
            return Err(Error::InvalidCircline("empty or single-point circline".into()));
        }
        let a = if a.abs() <= LINE_TOL { 0.0 } else { a };
        let lead = [a, b.re, b.im, c].into_iter().find(|v| v.abs() > LINE_TOL).unwrap_or(1.0);
        let s = if lead < 0.0 { -1.0 } else { 1.0 };
        Ok(Self { a: s * a, b: s * b, c: s * c })
    }

    pub fn coefficients(&self) -> (f64, Complex64, f64) {
        (self.a, self.b, self.c)
    }

    /// Circle through three distinct points (a line if they are collinear or one is infinity).
    pub fn through(p: ExtPoint, q: ExtPoint, r: ExtPoint) -> Result<Self> {
        let pts: Vec<Complex64> = [p, q, r].iter().filter_map(|z| z.finite()).collect();
        match pts.len() {
            3 => {
                let (z1, z2, z3) = (pts[0], pts[1], pts[2]);
                let w = (z3 - z1) / (z2 - z1);
                if w.im.abs() <= 1e-14 * w.norm().max(1.0) {
                    line_through(z1, z2)
                } else {
                    // Circumcenter.
                    let d = 2.0 * (z1.re * (z2.im - z3.im) + z2.re * (z3.im - z1.im) + z3.re * (z1.im - z2.im));
                    let (a1, a2, a3) = (z1.norm_sqr(), z2.norm_sqr(), z3.norm_sqr());
                    let ux = (a1 * (z2.im - z3.im) + a2 * (z3.im - z1.im) + a3 * (z1.im - z2.im)) / d;
                    let uy = (a1 * (z3.re - z2.re) + a2 * (z1.re - z3.re) + a3 * (z2.re - z1.re)) / d;
                    let center = Complex64::new(ux, uy);
                    let radius = (z1 - center).norm();
                    Ok(circle(center, radius))
                }
            }
            2 => line_through(pts[0], pts[1]),
            _ => Err(Error::InvalidCircline("need at least two finite points".into())),
        }
    }

    /// Det-normalized form with the orientation making `a >= 0` (or the stored sign).
    pub fn form(&self) -> DiskForm {
        DiskForm::new(self.a, self.b, self.c).expect("stored circline is non-degenerate")
    }

    pub fn is_line(&self) -> bool {
        self.a == 0.0
    }

    pub fn shape(&self) -> CirclineShape {
        if self.is_line() {
            let n = self.b / self.b.norm();
            let h = -self.c / (2.0 * self.b.norm());
            CirclineShape::Line { point: n * h, direction: Complex64::i() * n }
        } else {
            let center = -self.b / self.a;
            let radius = (self.b.norm_sqr() - self.a * self.c).sqrt() / self.a.abs();
            CirclineShape::Circle { center, radius }
        }
    }

    pub fn contains_point(&self, z: ExtPoint, tol: f64) -> bool {
        match z {
            ExtPoint::Infinity => self.is_line(),
            ExtPoint::Finite(z) => {
                let f = self.form();
                f.value(z).abs() <= tol * f.scale_at(z)
            }
        }
    }

    pub fn approx_eq(&self, other: &Circline, tol: f64) -> bool {
        (self.a - other.a).abs() <= tol && (self.b - other.b).norm() <= tol && (self.c - other.c).abs() <= tol
    }

    pub fn apply(&self, phi: &MoebiusMap) -> Circline {
        self.form().transform(phi).circline()
    }

    /// Inversive product of the two circlines, up to sign (orientation is not stored).
    pub fn inversive_product(&self, other: &Circline) -> f64 {
        self.form().polar(&other.form())
    }

    /// Intersection points; tangency (one point) is declared when `| |I| - 1 |` is
    /// within [`TANGENCY_TOL`]. Infinity is reported when both are lines.
    pub fn intersect(&self, other: &Circline) -> Result<Vec<ExtPoint>> {
        if self.approx_eq(other, 1e-12) {
            return Err(Error::IdenticalBoundaries);
        }
        let h1 = self.form();
        let h2 = other.form();
        let inv = h1.polar(&h2);
        if inv.abs() > 1.0 + TANGENCY_TOL {
            return Ok(Vec::new());
        }
        if (inv.abs() - 1.0).abs() <= TANGENCY_TOL {
            let k = h1.combine(-inv.signum(), &h2);
            return Ok(vec![k.null_point()]);
        }
        match (self.is_line(), other.is_line()) {
            (true, true) => {
                let p = line_line(self, other).ok_or_else(|| {
                    Error::InvalidCircline("parallel lines reported as crossing".into())
                })?;
                Ok(vec![ExtPoint::Finite(p), ExtPoint::Infinity])
            }
            (true, false) => Ok(line_circle(self.b, self.c, other)),
            (false, true) => Ok(line_circle(other.b, other.c, self)),
            (false, false) => {
                // Radical axis.
                let b = other.a * self.b - self.a * other.b;
                let c = other.a * self.c - self.a * other.c;
                Ok(line_circle(b, c, self))
            }
        }
    }

    /// Position of `z` along the canonical parametrization: polar angle for circles,
    /// signed coordinate along `direction` for lines.
    pub fn coordinate(&self, z: Complex64) -> f64 {
        match self.shape() {
            CirclineShape::Circle { center, .. } => (z - center).arg(),
            CirclineShape::Line { point, direction } => ((z - point) * direction.conj()).re,
        }
    }
}

pub(crate) fn circle(center: Complex64, radius: f64) -> Circline {
    Circline::from_coefficients(1.0, -center, center.norm_sqr() - radius * radius).expect("valid circle")
}

pub(crate) fn line_through(p: Complex64, q: Complex64) -> Result<Circline> {
    let d = q - p;
    if d.norm() == 0.0 {
        return Err(Error::InvalidCircline("coincident points".into()));
    }
    // Normal n = i d / |d|; line: Re(conj(n) z) = Re(conj(n) p).
    let n = Complex64::i() * d / d.norm();
    let h = (n.conj() * p).re;
    Circline::from_coefficients(0.0, n, -2.0 * h)
}

fn line_params(b: Complex64, c: f64) -> (Complex64, f64) {
    let n = b / b.norm();
    (n, -c / (2.0 * b.norm()))
}

fn line_line(l1: &Circline, l2: &Circline) -> Option<Complex64> {
    let (n1, h1) = line_params(l1.b, l1.c);
    let (n2, h2) = line_params(l2.b, l2.c);
    let det = n1.re * n2.im - n1.im * n2.re;
    if det.abs() < 1e-15 {
        return None;
    }
    let x = (h1 * n2.im - h2 * n1.im) / det;
    let y = (n1.re * h2 - n2.re * h1) / det;
    Some(Complex64::new(x, y))
}

fn line_circle(b: Complex64, c: f64, circ: &Circline) -> Vec<ExtPoint> {
    let (n, h) = line_params(b, c);
    let CirclineShape::Circle { center, radius } = circ.shape() else {
        unreachable!("line_circle called with a line")
    };
    let w = n.conj() * center;
    let dx = h - w.re;
    let rad = (radius * radius - dx * dx).max(0.0).sqrt();
    [w.im - rad, w.im + rad]
        .iter()
        .map(|&t| ExtPoint::Finite(n * Complex64::new(h, t)))
        .collect()
}
