use num_complex::Complex64;
use std::f64::consts::PI;

use super::matrix::{eigenvalues, identity, inverse, min_hermitian_eigenvalue, spectral_norm, ComplexMatrix};
use super::rational::RationalMatrixFunction;
use crate::error::{Error, Result};
use crate::geometry::{boundary_pieces, in_all, reduce_disks, ExtPoint, GeneralizedDisk, OrientedArc};

/// Relative slack used in the norm comparisons of [`is_spectral`].
const SPECTRAL_TOL: f64 = 1e-12;
/// Required clearance of eigenvalues from each boundary.
const INTERIOR_MARGIN: f64 = 1e-10;

/// von Neumann criteria: `D` is a spectral set for `A`.
pub fn is_spectral(a: &ComplexMatrix, disk: &GeneralizedDisk) -> Result<bool> {
    let n = a.nrows();
    let scale = spectral_norm(a).max(1.0);
    match *disk {
        GeneralizedDisk::Interior { center, radius } => {
            let b = a - identity(n) * center;
            Ok(spectral_norm(&b) <= radius + SPECTRAL_TOL * scale.max(radius))
        }
        GeneralizedDisk::Exterior { center, radius } => {
            let b = a - identity(n) * center;
            let bi = inverse(&b).map_err(|_| Error::ResolventAtSpectrum(format!("{center}")))?;
            let inv_r = 1.0 / radius;
            Ok(spectral_norm(&bi) <= inv_r + SPECTRAL_TOL * inv_r.max(1.0))
        }
        GeneralizedDisk::HalfPlane { theta, anchor } => {
            let b = (a - identity(n) * anchor) * Complex64::from_polar(1.0, -theta);
            Ok(min_hermitian_eigenvalue(&b) >= -SPECTRAL_TOL * scale)
        }
    }
}

/// Every eigenvalue lies in the interior of every disk with clearance above `1e-10`.
pub fn spectrum_in_interior(a: &ComplexMatrix, disks: &[GeneralizedDisk]) -> bool {
    let ev = eigenvalues(a);
    ev.iter().all(|&z| disks.iter().all(|d| d.boundary_distance(z) > INTERIOR_MARGIN))
}

/// Smallest Euclidean clearance of the spectrum from the boundaries.
pub fn spectrum_clearance(a: &ComplexMatrix, disks: &[GeneralizedDisk]) -> f64 {
    let ev = eigenvalues(a);
    ev.iter()
        .flat_map(|&z| disks.iter().map(move |d| d.boundary_distance(z)))
        .fold(f64::INFINITY, f64::min)
}

pub fn enlarge_disks(disks: &[GeneralizedDisk], eps: f64) -> Result<Vec<GeneralizedDisk>> {
    if !(eps > 0.0) {
        return Err(Error::OutOfRange(format!("enlargement {eps} must be positive")));
    }
    disks.iter().map(|d| d.enlarged(eps)).collect()
}

/// Number of Chebyshev samples per boundary piece before refinement.
const SUP_SAMPLES: usize = 64;
/// Relative change at which local refinement stops.
const SUP_REL_TOL: f64 = 1e-6;

fn norm_at(f: &RationalMatrixFunction, z: ExtPoint) -> Result<f64> {
    let v = f.eval_ext(z).ok_or_else(|| Error::PoleOnX(format!("{z}")))?;
    Ok(if v.len() == 1 { v[(0, 0)].norm() } else { spectral_norm(&v) })
}

/// Trisection search for a local maximum of `g` on `[lo, hi]`; stops once the bracket
/// is short enough that the value is resolved far below `SUP_REL_TOL`.
fn refine_max<G: Fn(f64) -> Result<f64>>(g: &G, mut lo: f64, mut hi: f64, mut best: f64) -> Result<f64> {
    while hi - lo > SUP_REL_TOL * 1e-3 * (1.0 + lo.abs()) {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let (v1, v2) = (g(m1)?, g(m2)?);
        best = best.max(v1).max(v2);
        if v1 < v2 {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    Ok(best)
}

fn sup_on_arc(f: &RationalMatrixFunction, arc: &OrientedArc) -> Result<f64> {
    let (t0, t1) = arc.params();
    let g = |t: f64| norm_at(f, arc.point_at(t));
    let mid = 0.5 * (t0 + t1);
    let half = 0.5 * (t1 - t0);
    let mut ts: Vec<f64> =
        (0..SUP_SAMPLES).map(|k| mid - half * (PI * (k as f64 + 0.5) / SUP_SAMPLES as f64).cos()).collect();
    ts.insert(0, t0);
    ts.push(t1);
    let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect::<Result<_>>()?;
    let mut best = vals.iter().copied().fold(0.0, f64::max);
    for i in 1..vals.len() - 1 {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            best = best.max(refine_max(&g, ts[i - 1], ts[i + 1], vals[i])?);
        }
    }
    Ok(best)
}

/// `sup_{∂X} ||F||` for `X = ∩ disks`.
pub fn sup_norm(f: &RationalMatrixFunction, disks: &[GeneralizedDisk]) -> Result<f64> {
    let disks = reduce_disks(disks)?;
    for p in f.poles() {
        if in_all(&disks, ExtPoint::Finite(p), 1e-10) {
            return Err(Error::PoleOnX(format!("{p}")));
        }
    }
    if in_all(&disks, ExtPoint::Infinity, 0.0) && f.value_at_infinity().is_none() {
        return Err(Error::UnboundedOnX);
    }
    let pieces = boundary_pieces(&disks);
    if pieces.is_empty() {
        return Err(Error::EmptyInterior("no boundary pieces".into()));
    }
    let mut best: f64 = 0.0;
    for (_, arc) in &pieces {
        best = best.max(sup_on_arc(f, arc)?);
    }
    Ok(best)
}
