use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use super::circline::DiskForm;
use super::{Circline, CirclineShape, ExtPoint, GeneralizedDisk, MoebiusMap};

/// Oriented sub-arc of a circline.
///
/// Circles use the angle parameter `t -> center + r e^{it}`; lines use
/// `t -> point + tan(t) direction`, so infinity sits at `t = ±pi/2`. The arc covers
/// the canonical parameters `[t0, t1]` and is traversed forward when `orient = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedArc {
    carrier: Circline,
    shape: CirclineShape,
    t0: f64,
    t1: f64,
    orient: f64,
}

/// Canonical parameter period of a circline.
pub fn period(carrier: &Circline) -> f64 {
    if carrier.is_line() {
        PI
    } else {
        2.0 * PI
    }
}

/// Canonical parameter of a point of the carrier: `[0, 2pi)` on circles,
/// `[-pi/2, pi/2)` on lines with infinity at `-pi/2`.
pub fn param_of(carrier: &Circline, z: ExtPoint) -> f64 {
    match (carrier.shape(), z) {
        (CirclineShape::Line { .. }, ExtPoint::Infinity) => -FRAC_PI_2,
        (CirclineShape::Line { point, direction }, ExtPoint::Finite(z)) => {
            let t = ((z - point) * direction.conj()).re.atan();
            if t >= FRAC_PI_2 {
                -FRAC_PI_2
            } else {
                t
            }
        }
        (CirclineShape::Circle { center, .. }, ExtPoint::Finite(z)) => (z - center).arg().rem_euclid(2.0 * PI),
        (CirclineShape::Circle { center, .. }, ExtPoint::Infinity) => {
            debug_assert!(false, "infinity on a circle");
            center.arg()
        }
    }
}

/// Orientation sign making the canonical direction the positive boundary of `{form <= 0}`.
pub fn orientation_for(carrier: &Circline, form: &DiskForm) -> f64 {
    let probe = |t: f64| {
        let (z, v) = canonical(&carrier.shape(), t);
        let want = Complex64::i() * form.gradient(z);
        (want.conj() * v).re
    };
    let s = probe(0.3) + probe(0.3 + period(carrier) / 2.0);
    if s >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn canonical(shape: &CirclineShape, t: f64) -> (Complex64, Complex64) {
    match *shape {
        CirclineShape::Circle { center, radius } => {
            let e = Complex64::from_polar(1.0, t);
            (center + radius * e, Complex64::i() * radius * e)
        }
        CirclineShape::Line { point, direction } => {
            let c = t.cos();
            (point + t.tan() * direction, direction / (c * c))
        }
    }
}

impl OrientedArc {
    pub fn new(carrier: Circline, t0: f64, t1: f64, orient: f64) -> Self {
        debug_assert!(t1 >= t0);
        Self { carrier, shape: carrier.shape(), t0, t1, orient: orient.signum() }
    }

    /// The whole circline, traversed in the canonical direction times `orient`.
    pub fn full(carrier: Circline, orient: f64) -> Self {
        if carrier.is_line() {
            Self::new(carrier, -FRAC_PI_2, FRAC_PI_2, orient)
        } else {
            Self::new(carrier, 0.0, 2.0 * PI, orient)
        }
    }

    /// Full boundary of `disk`, oriented so that `(1/i) dσ/ds` is the outward normal.
    pub fn boundary(disk: &GeneralizedDisk) -> Self {
        let form = disk.form();
        let carrier = form.circline();
        Self::full(carrier, orientation_for(&carrier, &form))
    }

    pub fn carrier(&self) -> &Circline {
        &self.carrier
    }

    pub fn params(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn orientation(&self) -> f64 {
        self.orient
    }

    pub fn is_full(&self) -> bool {
        (self.t1 - self.t0 - period(&self.carrier)).abs() <= 1e-12
    }

    /// Point and oriented velocity `orient * dσ/dt` at canonical parameter `t`.
    pub fn sample(&self, t: f64) -> (Complex64, Complex64) {
        let (z, v) = canonical(&self.shape, t);
        (z, self.orient * v)
    }

    pub fn point_at(&self, t: f64) -> ExtPoint {
        if self.carrier.is_line() && ((t - FRAC_PI_2) / PI).fract().abs() < 1e-15 {
            return ExtPoint::Infinity;
        }
        ExtPoint::from(canonical(&self.shape, t).0)
    }

    /// Canonical parameter at fraction `u` of the way along the oriented arc.
    pub fn param_at(&self, u: f64) -> f64 {
        if self.orient > 0.0 {
            self.t0 + u * (self.t1 - self.t0)
        } else {
            self.t1 - u * (self.t1 - self.t0)
        }
    }

    /// Point at fraction `u` in `[0, 1]` of the oriented arc.
    pub fn eval(&self, u: f64) -> ExtPoint {
        self.point_at(self.param_at(u))
    }

    pub fn start(&self) -> ExtPoint {
        self.eval(0.0)
    }

    pub fn end(&self) -> ExtPoint {
        self.eval(1.0)
    }

    pub fn midpoint(&self) -> ExtPoint {
        self.eval(0.5)
    }

    /// Unit tangent `dσ/ds` at canonical parameter `t`.
    pub fn tangent(&self, t: f64) -> Complex64 {
        let (_, v) = self.sample(t);
        v / v.norm()
    }

    /// Euclidean length; infinite when the arc reaches infinity.
    pub fn length(&self) -> f64 {
        match self.shape {
            CirclineShape::Circle { radius, .. } => radius * (self.t1 - self.t0),
            CirclineShape::Line { .. } => {
                if self.passes_infinity() || self.touches_infinity() {
                    f64::INFINITY
                } else {
                    self.t1.tan() - self.t0.tan()
                }
            }
        }
    }

    /// Point and unit tangent at arclength `s` from the start (finite starts only).
    pub fn at_arclength(&self, s: f64) -> Option<(Complex64, Complex64)> {
        let t_start = self.param_at(0.0);
        match self.shape {
            CirclineShape::Circle { radius, .. } => {
                let t = t_start + self.orient * s / radius;
                Some((canonical(&self.shape, t).0, self.tangent(t)))
            }
            CirclineShape::Line { direction, .. } => {
                let start = self.start().finite()?;
                let dir = self.orient * direction;
                Some((start + s * dir, dir))
            }
        }
    }

    fn infinity_params(&self) -> Vec<f64> {
        if !self.carrier.is_line() {
            return Vec::new();
        }
        let first = ((self.t0 - FRAC_PI_2) / PI).ceil();
        let mut out = Vec::new();
        let mut k = first;
        while FRAC_PI_2 + k * PI <= self.t1 + 1e-15 {
            out.push(FRAC_PI_2 + k * PI);
            k += 1.0;
        }
        out
    }

    fn passes_infinity(&self) -> bool {
        self.infinity_params().iter().any(|&t| t > self.t0 + 1e-15 && t < self.t1 - 1e-15)
    }

    fn touches_infinity(&self) -> bool {
        !self.infinity_params().is_empty()
    }

    /// Pieces of the arc with infinity only at endpoints.
    pub fn split_at_infinity(&self) -> Vec<OrientedArc> {
        let mut cuts: Vec<f64> =
            self.infinity_params().into_iter().filter(|&t| t > self.t0 + 1e-15 && t < self.t1 - 1e-15).collect();
        if cuts.is_empty() {
            return vec![*self];
        }
        let mut bounds = vec![self.t0];
        bounds.append(&mut cuts);
        bounds.push(self.t1);
        let mut pieces: Vec<OrientedArc> =
            bounds.windows(2).map(|w| OrientedArc::new(self.carrier, w[0], w[1], self.orient)).collect();
        if self.orient < 0.0 {
            pieces.reverse();
        }
        pieces
    }

    pub fn reversed(&self) -> Self {
        Self { orient: -self.orient, ..*self }
    }

    /// Sub-arc between fractions `u0 < u1` of the oriented arc.
    pub fn sub_arc(&self, u0: f64, u1: f64) -> Self {
        let (a, b) = (self.param_at(u0), self.param_at(u1));
        Self::new(self.carrier, a.min(b), a.max(b), self.orient)
    }

    /// Arc on `carrier` from `start` to `end` passing through `via`.
    pub fn through(carrier: Circline, start: ExtPoint, via: ExtPoint, end: ExtPoint) -> Self {
        let p = period(&carrier);
        let ts = param_of(&carrier, start);
        let tv = param_of(&carrier, via);
        let te = param_of(&carrier, end);
        let dv = (tv - ts).rem_euclid(p);
        let mut de = (te - ts).rem_euclid(p);
        if de <= 1e-14 {
            de = p;
        }
        if dv < de {
            Self::new(carrier, ts, ts + de, 1.0)
        } else {
            let back = (ts - te).rem_euclid(p);
            let back = if back <= 1e-14 { p } else { back };
            Self::new(carrier, te, te + back, -1.0)
        }
    }

    /// Image arc under a Möbius map.
    pub fn image(&self, phi: &MoebiusMap) -> Self {
        let carrier = self.carrier.apply(phi);
        let map = |u: f64| phi.apply(self.eval(u));
        if self.is_full() {
            let p = period(&carrier);
            let t0 = param_of(&carrier, map(0.0));
            let tq = param_of(&carrier, map(0.25));
            let tm = param_of(&carrier, map(0.5));
            let orient = if (tq - t0).rem_euclid(p) < (tm - t0).rem_euclid(p) { 1.0 } else { -1.0 };
            let t_start = if orient > 0.0 { t0 } else { t0 - p };
            return Self::new(carrier, t_start, t_start + p, orient);
        }
        Self::through(carrier, map(0.0), map(0.5), map(1.0))
    }

    /// `n + 1` points along the oriented arc, infinity included where reached.
    pub fn polyline(&self, n: usize) -> Vec<ExtPoint> {
        (0..=n).map(|i| self.eval(i as f64 / n as f64)).collect()
    }

    /// `true` if `z` lies on the arc (within `tol`, chordally).
    pub fn contains(&self, z: ExtPoint, tol: f64) -> bool {
        if !self.carrier.contains_point(z, tol) {
            return false;
        }
        let p = period(&self.carrier);
        let t = param_of(&self.carrier, z);
        let k = ((self.t0 - t) / p).ceil();
        let t = t + k * p;
        if t <= self.t1 {
            return true;
        }
        self.start().approx_eq(z, tol) || self.end().approx_eq(z, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_circle_counterclockwise() {
        let arc = OrientedArc::boundary(&GeneralizedDisk::disk(c(0.0, 0.0), 1.0));
        let (z, v) = arc.sample(0.4);
        assert!((z - Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);
        assert!((v - Complex64::i() * z).norm() < 1e-15);
    }

    #[test]
    fn exterior_clockwise() {
        let arc = OrientedArc::boundary(&GeneralizedDisk::exterior(c(0.0, 0.0), 2.0));
        assert_eq!(arc.orientation(), -1.0);
        // (1/i) dσ/ds points away from the exterior disk, i.e. toward the origin.
        let (z, _) = arc.sample(1.0);
        let n = arc.tangent(1.0) / Complex64::i();
        assert!((n + z / z.norm()).norm() < 1e-14);
    }

    #[test]
    fn half_plane_boundary_points_out() {
        let arc = OrientedArc::boundary(&GeneralizedDisk::half_plane(0.0, c(0.0, 0.0)));
        let n = arc.tangent(0.2) / Complex64::i();
        assert!((n - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(arc.start().is_infinite());
        assert!(arc.end().is_infinite());
    }

    #[test]
    fn line_arc_split_at_infinity() {
        let line = Circline::from_coefficients(0.0, c(0.0, 1.0), 0.0).unwrap();
        let arc = OrientedArc::new(line, 1.0, 2.0, 1.0);
        let pieces = arc.split_at_infinity();
        assert_eq!(pieces.len(), 2);
        assert!(pieces[0].end().is_infinite());
        assert!(pieces[1].start().is_infinite());
    }

    #[test]
    fn through_respects_via() {
        let unit = OrientedArc::boundary(&GeneralizedDisk::disk(c(0.0, 0.0), 1.0));
        let carrier = *unit.carrier();
        let arc = OrientedArc::through(
            carrier,
            ExtPoint::Finite(c(1.0, 0.0)),
            ExtPoint::Finite(c(0.0, -1.0)),
            ExtPoint::Finite(c(-1.0, 0.0)),
        );
        assert_eq!(arc.orientation(), -1.0);
        assert!(arc.midpoint().approx_eq(ExtPoint::Finite(c(0.0, -1.0)), 1e-12));
    }

    #[test]
    fn image_under_inversion() {
        let unit = OrientedArc::boundary(&GeneralizedDisk::disk(c(0.0, 0.0), 2.0));
        let img = unit.image(&MoebiusMap::inversion());
        assert!(img.is_full());
        let z = img.eval(0.1).finite().unwrap();
        assert!((z.norm() - 0.5).abs() < 1e-14);
        assert_eq!(img.orientation(), -1.0);
    }

    #[test]
    fn arclength_on_circle() {
        let arc = OrientedArc::boundary(&GeneralizedDisk::exterior(c(0.0, 0.0), 2.0));
        let (z, t) = arc.at_arclength(PI).unwrap();
        let (z0, _) = arc.at_arclength(0.0).unwrap();
        assert!(((z - z0).norm() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((t.norm() - 1.0).abs() < 1e-15);
    }
}
