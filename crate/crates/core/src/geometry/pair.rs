use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use super::arc::OrientedArc;
use super::circline::DiskForm;
use super::disk::wrap_angle;
use super::{Circline, ExtPoint, GeneralizedDisk, MoebiusMap};
use crate::error::{Error, Result};

/// Mutual position of two generalized disks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairRelation {
    Equal,
    FirstInSecond,
    SecondInFirst,
    /// Interiors do not meet.
    Disjoint,
    /// Boundaries are disjoint and the intersection is a ring.
    Annulus,
    /// Boundaries cross at two points.
    Lens([ExtPoint; 2]),
    /// Boundaries touch at one point and the intersection has interior.
    Tangent(ExtPoint),
}

/// Canonical model of `D1 ∩ D2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairCase {
    /// `{|z| <= R}` and `{|z| >= 1/R}`.
    Annulus { r: f64 },
    /// `{Re(e^{i theta} z) >= 0}` and `{Re(e^{-i theta} z) >= 0}`.
    Sector { theta: f64 },
    /// `{Im z <= 1}` and `{Im z >= -1}`.
    Strip,
}

impl PairCase {
    pub fn disks(&self) -> (GeneralizedDisk, GeneralizedDisk) {
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            PairCase::Annulus { r } => (GeneralizedDisk::disk(zero, r), GeneralizedDisk::exterior(zero, 1.0 / r)),
            PairCase::Sector { theta } => {
                (GeneralizedDisk::half_plane(-theta, zero), GeneralizedDisk::half_plane(theta, zero))
            }
            PairCase::Strip => (
                GeneralizedDisk::half_plane(-FRAC_PI_2, Complex64::new(0.0, 1.0)),
                GeneralizedDisk::half_plane(FRAC_PI_2, Complex64::new(0.0, -1.0)),
            ),
        }
    }
}

/// A normalizing map `phi` with `(phi D1, phi D2)` equal to the canonical pair of `case`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalPairConfig {
    pub case: PairCase,
    pub map: MoebiusMap,
}

impl CanonicalPairConfig {
    /// Canonical pair pulled back through `phi^{-1}`.
    pub fn pulled_back(&self) -> Result<(GeneralizedDisk, GeneralizedDisk)> {
        let inv = self.map.inverse();
        let (a, b) = self.case.disks();
        Ok((a.image(&inv)?, b.image(&inv)?))
    }
}

pub fn boundary_intersection(d1: &GeneralizedDisk, d2: &GeneralizedDisk) -> Result<Vec<ExtPoint>> {
    d1.boundary().intersect(&d2.boundary())
}

/// Point of `∂disk` where `|other|` is largest relative to its scale.
fn far_boundary_value(disk: &GeneralizedDisk, other: &DiskForm) -> f64 {
    let arc = OrientedArc::boundary(disk);
    let mut best = 0.0f64;
    for i in 0..16 {
        let u = (i as f64 + 0.5) / 16.0;
        if let ExtPoint::Finite(z) = arc.eval(u) {
            let v = other.value(z) / other.scale_at(z);
            if v.abs() > best.abs() {
                best = v;
            }
        }
    }
    best
}

pub fn classify_pair(d1: &GeneralizedDisk, d2: &GeneralizedDisk) -> Result<PairRelation> {
    let (h1, h2) = (d1.form(), d2.form());
    let (c1, c2) = (h1.circline(), h2.circline());
    if c1.approx_eq(&c2, 1e-12) {
        return Ok(if h1.polar(&h2) > 0.0 { PairRelation::Equal } else { PairRelation::Disjoint });
    }
    let pts = c1.intersect(&c2)?;
    if pts.len() == 2 {
        return Ok(PairRelation::Lens([pts[0], pts[1]]));
    }
    let one_in_two = far_boundary_value(d1, &h2) <= 0.0;
    let two_in_one = far_boundary_value(d2, &h1) <= 0.0;
    Ok(match (one_in_two, two_in_one) {
        (true, false) => PairRelation::FirstInSecond,
        (false, true) => PairRelation::SecondInFirst,
        (false, false) => PairRelation::Disjoint,
        (true, true) => match pts.first() {
            Some(&p) => PairRelation::Tangent(p),
            None => PairRelation::Annulus,
        },
    })
}

fn require_proper(d1: &GeneralizedDisk, d2: &GeneralizedDisk) -> Result<PairRelation> {
    let rel = classify_pair(d1, d2)?;
    match rel {
        PairRelation::Equal | PairRelation::FirstInSecond | PairRelation::SecondInFirst => {
            Err(Error::NestedDisks(format!("{d1:?} / {d2:?}")))
        }
        PairRelation::Disjoint => Err(Error::EmptyInterior(format!("{d1:?} / {d2:?}"))),
        _ => Ok(rel),
    }
}

/// Form `H_j - H_k`; `{form <= 0}` is the side where `d(., D_j) >= d(., D_k)`.
pub fn median_form(dj: &GeneralizedDisk, dk: &GeneralizedDisk) -> Result<DiskForm> {
    require_proper(dj, dk)?;
    let g = dj.form().combine(-1.0, &dk.form());
    DiskForm::new(g.a, g.b, g.c)
}

/// The circline on which `d(., D_j) = d(., D_k)`.
pub fn median_circline(dj: &GeneralizedDisk, dk: &GeneralizedDisk) -> Result<Circline> {
    Ok(median_form(dj, dk)?.circline())
}

/// `z -> (z - p) / (z - q)`, with the obvious limits when `p` or `q` is infinite.
fn cross_map(p: ExtPoint, q: ExtPoint) -> Result<MoebiusMap> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match (p, q) {
        (ExtPoint::Finite(p), ExtPoint::Finite(q)) => MoebiusMap::new(one, -p, one, -q),
        (ExtPoint::Finite(p), ExtPoint::Infinity) => MoebiusMap::new(one, -p, zero, one),
        (ExtPoint::Infinity, ExtPoint::Finite(q)) => MoebiusMap::new(zero, one, one, -q),
        (ExtPoint::Infinity, ExtPoint::Infinity) => Err(Error::DegenerateMoebius),
    }
}

fn check_pole(map: &MoebiusMap, avoid: &[Complex64]) -> Result<()> {
    if let ExtPoint::Finite(pole) = map.pole() {
        for &z in avoid {
            if (z - pole).norm() <= 1e-12 * (1.0 + pole.norm()) {
                return Err(Error::PoleOnAvoidSet(format!("{pole}")));
            }
        }
    }
    Ok(())
}

/// Möbius normalization of a pair of disks to an annulus, sector or strip.
///
/// `avoid` is a finite set (typically the spectrum) that must not contain the pole; in
/// the strip case it also fixes the real translation by centring its image.
pub fn normalize_pair(d1: &GeneralizedDisk, d2: &GeneralizedDisk, avoid: &[Complex64]) -> Result<CanonicalPairConfig> {
    let rel = require_proper(d1, d2)?;
    let config = match rel {
        PairRelation::Annulus => normalize_annulus(d1, d2)?,
        PairRelation::Lens([p, q]) => normalize_sector(d1, d2, p, q)?,
        PairRelation::Tangent(p) => normalize_strip(d1, d2, p, avoid)?,
        _ => unreachable!("require_proper filters other relations"),
    };
    check_pole(&config.map, avoid)?;
    Ok(config)
}

fn normalize_annulus(d1: &GeneralizedDisk, d2: &GeneralizedDisk) -> Result<CanonicalPairConfig> {
    let (h1, h2) = (d1.form(), d2.form());
    let p = h1.polar(&h2);
    let root = (p * p - 1.0).max(0.0).sqrt();
    let limit = |lambda: f64| h1.combine(lambda, &h2).null_point();
    let (l1, l2) = (limit(-p + root), limit(-p - root));
    let mut phi = cross_map(l1, l2)?;
    if matches!(d1.image(&phi)?, GeneralizedDisk::Exterior { .. }) {
        phi = MoebiusMap::inversion().compose(&phi);
    }
    let (GeneralizedDisk::Interior { radius: r1, .. }, GeneralizedDisk::Exterior { radius: r2, .. }) =
        (d1.image(&phi)?, d2.image(&phi)?)
    else {
        return Err(Error::DegenerateTessellation("annulus normalization failed".into()));
    };
    let scale = MoebiusMap::scaling(Complex64::from(1.0 / (r1 * r2).sqrt()))?;
    Ok(CanonicalPairConfig { case: PairCase::Annulus { r: (r1 / r2).sqrt() }, map: scale.compose(&phi) })
}

fn half_plane_params(d: &GeneralizedDisk) -> Result<(f64, Complex64)> {
    match *d {
        GeneralizedDisk::HalfPlane { theta, anchor } => Ok((theta, anchor)),
        _ => Err(Error::DegenerateTessellation("expected a half-plane image".into())),
    }
}

fn normalize_sector(d1: &GeneralizedDisk, d2: &GeneralizedDisk, p: ExtPoint, q: ExtPoint) -> Result<CanonicalPairConfig> {
    let mut phi = cross_map(p, q)?;
    let (mut t1, _) = half_plane_params(&d1.image(&phi)?)?;
    let (mut t2, _) = half_plane_params(&d2.image(&phi)?)?;
    if wrap_angle(t2 - t1) < 0.0 {
        phi = cross_map(q, p)?;
        t1 = half_plane_params(&d1.image(&phi)?)?.0;
        t2 = half_plane_params(&d2.image(&phi)?)?.0;
    }
    let delta = wrap_angle(t2 - t1);
    let theta = delta / 2.0;
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::DegenerateTessellation(format!("sector half-angle parameter {theta}")));
    }
    let rot = MoebiusMap::scaling(Complex64::from_polar(1.0, -(t1 + theta)))?;
    Ok(CanonicalPairConfig { case: PairCase::Sector { theta }, map: rot.compose(&phi) })
}

fn normalize_strip(
    d1: &GeneralizedDisk,
    d2: &GeneralizedDisk,
    p: ExtPoint,
    avoid: &[Complex64],
) -> Result<CanonicalPairConfig> {
    let phi = match p {
        ExtPoint::Finite(p) => MoebiusMap::inversion_at(p),
        ExtPoint::Infinity => MoebiusMap::identity(),
    };
    let (t1, a1) = half_plane_params(&d1.image(&phi)?)?;
    let (_, a2) = half_plane_params(&d2.image(&phi)?)?;
    let e1 = Complex64::from_polar(1.0, t1);
    let width = (e1.conj() * (a2 - a1)).re;
    if !(width > 0.0) {
        return Err(Error::DegenerateTessellation(format!("strip width {width}")));
    }
    let k = (2.0 / width) * Complex64::from_polar(1.0, -FRAC_PI_2 - t1);
    let pre = MoebiusMap::scaling(k)?.compose(&phi);
    let images: Vec<Complex64> = avoid.iter().filter_map(|&z| pre.apply_finite(z)).collect();
    let shift_re = if images.is_empty() { 0.0 } else { -images.iter().map(|w| w.re).sum::<f64>() / images.len() as f64 };
    let shift = Complex64::new(shift_re, 1.0 - (k * a1).im);
    Ok(CanonicalPairConfig { case: PairCase::Strip, map: MoebiusMap::translation(shift).compose(&pre) })
}

/// Drops disks that contain another disk of the list (they do not change the
/// intersection); rejects pairs with disjoint interiors.
pub fn reduce_disks(disks: &[GeneralizedDisk]) -> Result<Vec<GeneralizedDisk>> {
    let n = disks.len();
    let mut keep = vec![true; n];
    for j in 0..n {
        for k in (j + 1)..n {
            match classify_pair(&disks[j], &disks[k])? {
                PairRelation::Equal | PairRelation::SecondInFirst => keep[j] = false,
                PairRelation::FirstInSecond => keep[k] = false,
                PairRelation::Disjoint => {
                    return Err(Error::EmptyInterior(format!("disks {j} and {k} have disjoint interiors")))
                }
                _ => {}
            }
        }
    }
    // A disk containing a dropped disk may have been kept only through that disk; redo
    // the scan over survivors so chains of inclusions collapse to the smallest disk.
    let survivors: Vec<GeneralizedDisk> = disks.iter().zip(&keep).filter(|(_, &k)| k).map(|(d, _)| *d).collect();
    if survivors.len() < n {
        return reduce_disks(&survivors);
    }
    Ok(survivors)
}
