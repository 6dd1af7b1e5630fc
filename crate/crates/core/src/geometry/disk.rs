use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::circline::{DiskForm, LINE_TOL};
use super::{Circline, ExtPoint, MoebiusMap};
use crate::error::{Error, Result};

/// Closed disk of the Riemann sphere.
///
/// `HalfPlane { theta, anchor }` is `{ z : Re(e^{-i theta}(z - anchor)) >= 0 } ∪ {∞}`,
/// so `e^{i theta}` is its inward normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiskJson", into = "DiskJson")]
pub enum GeneralizedDisk {
    Interior { center: Complex64, radius: f64 },
    Exterior { center: Complex64, radius: f64 },
    HalfPlane { theta: f64, anchor: Complex64 },
}

#[derive(Serialize, Deserialize)]
struct DiskJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    anchor: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

impl TryFrom<DiskJson> for GeneralizedDisk {
    type Error = Error;
    fn try_from(j: DiskJson) -> Result<Self> {
        let missing = |f: &str| Error::Parse(format!("disk of kind {:?} needs field {f:?}", j.kind));
        let disk = match j.kind.as_str() {
            "disk" | "exterior" => {
                let [re, im] = j.center.ok_or_else(|| missing("center"))?;
                let radius = j.radius.ok_or_else(|| missing("radius"))?;
                let center = Complex64::new(re, im);
                if j.kind == "disk" {
                    GeneralizedDisk::Interior { center, radius }
                } else {
                    GeneralizedDisk::Exterior { center, radius }
                }
            }
            "halfplane" => {
                let [re, im] = j.anchor.ok_or_else(|| missing("anchor"))?;
                let theta = j.theta.ok_or_else(|| missing("theta"))?;
                GeneralizedDisk::HalfPlane { theta: wrap_angle(theta), anchor: Complex64::new(re, im) }
            }
            other => return Err(Error::Parse(format!("unknown disk kind {other:?}"))),
        };
        disk.validate()?;
        Ok(disk)
    }
}

impl From<GeneralizedDisk> for DiskJson {
    fn from(d: GeneralizedDisk) -> Self {
        match d {
            GeneralizedDisk::Interior { center, radius } | GeneralizedDisk::Exterior { center, radius } => DiskJson {
                kind: if matches!(d, GeneralizedDisk::Interior { .. }) { "disk" } else { "exterior" }.into(),
                center: Some([center.re, center.im]),
                radius: Some(radius),
                anchor: None,
                theta: None,
            },
            GeneralizedDisk::HalfPlane { theta, anchor } => DiskJson {
                kind: "halfplane".into(),
                center: None,
                radius: None,
                anchor: Some([anchor.re, anchor.im]),
                theta: Some(theta),
            },
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

impl GeneralizedDisk {
    pub fn disk(center: Complex64, radius: f64) -> Self {
        GeneralizedDisk::Interior { center, radius }
    }

    pub fn exterior(center: Complex64, radius: f64) -> Self {
        GeneralizedDisk::Exterior { center, radius }
    }

    pub fn half_plane(theta: f64, anchor: Complex64) -> Self {
        GeneralizedDisk::HalfPlane { theta: wrap_angle(theta), anchor }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneralizedDisk::Interior { center, radius } | GeneralizedDisk::Exterior { center, radius } => {
                if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
                    return Err(Error::InvalidDisk(format!("radius {radius} / center {center}")));
                }
            }
            GeneralizedDisk::HalfPlane { theta, anchor } => {
                if !(theta > -PI && theta <= PI) || !anchor.is_finite() {
                    return Err(Error::InvalidDisk(format!("theta {theta} / anchor {anchor}")));
                }
            }
        }
        Ok(())
    }

    /// Center `omega`; `None` for half-planes (center at infinity).
    pub fn center(&self) -> Option<Complex64> {
        match *self {
            GeneralizedDisk::Interior { center, .. } | GeneralizedDisk::Exterior { center, .. } => Some(center),
            GeneralizedDisk::HalfPlane { .. } => None,
        }
    }

    pub fn contains_infinity(&self) -> bool {
        !matches!(self, GeneralizedDisk::Interior { .. })
    }

    pub fn form(&self) -> DiskForm {
        match *self {
            GeneralizedDisk::Interior { center, radius } => {
                DiskForm::raw(1.0 / radius, -center / radius, (center.norm_sqr() - radius * radius) / radius)
            }
            GeneralizedDisk::Exterior { center, radius } => {
                DiskForm::raw(-1.0 / radius, center / radius, (radius * radius - center.norm_sqr()) / radius)
            }
            GeneralizedDisk::HalfPlane { theta, anchor } => {
                let e = Complex64::from_polar(1.0, theta);
                DiskForm::raw(0.0, -e, 2.0 * (e.conj() * anchor).re)
            }
        }
    }

    pub fn from_form(form: &DiskForm) -> Result<Self> {
        let f = DiskForm::new(form.a, form.b, form.c)?;
        if f.a.abs() <= LINE_TOL * (1.0 + f.c.abs()) {
            let theta = wrap_angle((-f.b).arg());
            let e = Complex64::from_polar(1.0, theta);
            let anchor = e * (f.c / (2.0 * f.b.norm()));
            Ok(GeneralizedDisk::HalfPlane { theta, anchor })
        } else {
            let center = -f.b / f.a;
            let radius = 1.0 / f.a.abs();
            if f.a > 0.0 {
                Ok(GeneralizedDisk::Interior { center, radius })
            } else {
                Ok(GeneralizedDisk::Exterior { center, radius })
            }
        }
    }

    pub fn boundary(&self) -> Circline {
        self.form().circline()
    }

    /// Closed membership with relative slack `tol`.
    pub fn contains_with_tol(&self, z: ExtPoint, tol: f64) -> bool {
        match z {
            ExtPoint::Infinity => self.contains_infinity(),
            ExtPoint::Finite(z) => {
                let f = self.form();
                f.value(z) <= tol * f.scale_at(z)
            }
        }
    }

    pub fn contains(&self, z: ExtPoint) -> bool {
        self.contains_with_tol(z, 1e-12)
    }

    /// Interior membership with margin: `d(z, D) > margin`.
    pub fn contains_interior(&self, z: Complex64, margin: f64) -> bool {
        -self.form().value(z) > margin
    }

    /// Signed reciprocal Carathéodory density `-Q(z)`: positive inside, zero on the
    /// boundary, negative outside.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        -self.form().value(z)
    }

    /// Signed Euclidean distance from `z` to the boundary, positive inside.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match *self {
            GeneralizedDisk::Interior { center, radius } => radius - (z - center).norm(),
            GeneralizedDisk::Exterior { center, radius } => (z - center).norm() - radius,
            GeneralizedDisk::HalfPlane { theta, anchor } => {
                (Complex64::from_polar(1.0, -theta) * (z - anchor)).re
            }
        }
    }

    /// `d(z, D)`, the reciprocal of the infinitesimal Carathéodory pseudodistance of
    /// `D` at `z`.
    pub fn caratheodory_distance(&self, z: ExtPoint) -> Result<f64> {
        let z = z.finite().ok_or(Error::InfinitePoint)?;
        let f = self.form();
        let d = -f.value(z);
        if d < -1e-12 * f.scale_at(z) {
            return Err(Error::PointOutsideDisk(format!("{z}")));
        }
        Ok(d.max(0.0))
    }

    /// `(1/i) dσ/ds` for the positively oriented boundary at a boundary point.
    pub fn outward_normal(&self, z: Complex64) -> Complex64 {
        let g = self.form().gradient(z);
        g / g.norm()
    }

    pub fn image(&self, phi: &MoebiusMap) -> Result<Self> {
        GeneralizedDisk::from_form(&self.form().transform(phi))
    }

    /// Enlarges the closed set by `eps` in the Euclidean sense.
    pub fn enlarged(&self, eps: f64) -> Result<Self> {
        match *self {
            GeneralizedDisk::Interior { center, radius } => Ok(GeneralizedDisk::Interior { center, radius: radius + eps }),
            GeneralizedDisk::Exterior { center, radius } => {
                if radius - eps <= 0.0 {
                    Err(Error::RadiusUnderflow)
                } else {
                    Ok(GeneralizedDisk::Exterior { center, radius: radius - eps })
                }
            }
            GeneralizedDisk::HalfPlane { theta, anchor } => Ok(GeneralizedDisk::HalfPlane {
                theta,
                anchor: anchor - eps * Complex64::from_polar(1.0, theta),
            }),
        }
    }

    /// A characteristic length: radius for disks, 1 plus anchor modulus for half-planes.
    pub fn scale(&self) -> f64 {
        match *self {
            GeneralizedDisk::Interior { center, radius } | GeneralizedDisk::Exterior { center, radius } => {
                radius.max(center.norm())
            }
            GeneralizedDisk::HalfPlane { anchor, .. } => 1.0 + anchor.norm(),
        }
    }
}

/// `true` iff `z` lies in every disk.
pub fn in_all(disks: &[GeneralizedDisk], z: ExtPoint, tol: f64) -> bool {
    disks.iter().all(|d| d.contains_with_tol(z, tol))
}
