use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{DiskForm, ExtPoint, GeneralizedDisk};
use crate::operator::{identity, inverse, spectrum_in_interior, ComplexMatrix};

/// Distance from the boundary tolerated for Poisson evaluation points.
pub const ON_BOUNDARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Poisson,
    Residual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelValue {
    pub value: ComplexMatrix,
    pub kind: KernelKind,
    pub point: Complex64,
    pub disk: GeneralizedDisk,
}

/// Operator pieces of `A` reused by every kernel evaluation for one disk.
///
/// With the normalized form `Q(z) = a|z|^2 + 2 Re(conj(b) z) + c` of `D`,
/// `mu(s) = -(1/2pi) (s - A)^-1 Q(A) (s - A)^-*` where `Q(A) = a A A* + conj(b) A + b A* + c`,
/// and `nu(z) = (1/2pi i) (a A* + conj(b)) ((a z + b) A* + conj(b) z + c)^-1`.
#[derive(Clone, Debug)]
pub struct DiskKernel {
    form: DiskForm,
    a: ComplexMatrix,
    a_adj: ComplexMatrix,
    neg_q: ComplexMatrix,
    nu_num: ComplexMatrix,
}

impl DiskKernel {
    pub fn new(a: &ComplexMatrix, disk: &GeneralizedDisk) -> Self {
        let form = disk.form();
        let n = a.nrows();
        let id = identity(n);
        let a_adj = a.adjoint();
        let q = a * &a_adj * Complex64::from(form.a) + a * form.b.conj() + &a_adj * form.b + &id * Complex64::from(form.c);
        let nu_num = &a_adj * Complex64::from(form.a) + &id * form.b.conj();
        Self { form, a: a.clone(), a_adj, neg_q: -q, nu_num }
    }

    pub fn form(&self) -> &DiskForm {
        &self.form
    }

    /// Poisson kernel at a boundary point, with respect to arclength.
    pub fn poisson(&self, sigma: Complex64) -> Result<ComplexMatrix> {
        let n = self.a.nrows();
        let x = identity(n) * sigma - &self.a;
        let xi = inverse(&x).map_err(|_| Error::ResolventAtSpectrum(format!("{sigma}")))?;
        let xi_adj = xi.adjoint();
        Ok(xi * &self.neg_q * xi_adj * Complex64::from(1.0 / (2.0 * PI)))
    }

    /// Residual kernel at a point of the disk.
    pub fn residual(&self, z: Complex64) -> Result<ComplexMatrix> {
        let n = self.a.nrows();
        let f = &self.form;
        let m = &self.a_adj * (f.a * z + f.b) + identity(n) * (f.b.conj() * z + f.c);
        let mi = inverse(&m).map_err(|_| Error::SingularMatrix(format!("residual kernel at {z}")))?;
        Ok(&self.nu_num * mi / Complex64::new(0.0, 2.0 * PI))
    }
}

fn require_interior(a: &ComplexMatrix, disk: &GeneralizedDisk) -> Result<()> {
    disk.validate()?;
    if !spectrum_in_interior(a, std::slice::from_ref(disk)) {
        return Err(Error::SpectrumNotInterior);
    }
    Ok(())
}

/// `mu(sigma, A, D)` for `sigma` on the boundary of `D`.
pub fn poisson_kernel(sigma: Complex64, a: &ComplexMatrix, disk: &GeneralizedDisk) -> Result<KernelValue> {
    require_interior(a, disk)?;
    if disk.boundary_distance(sigma).abs() > ON_BOUNDARY_TOL * sigma.norm().max(1.0) {
        return Err(Error::NotOnBoundary(format!("{sigma}")));
    }
    Ok(KernelValue {
        value: DiskKernel::new(a, disk).poisson(sigma)?,
        kind: KernelKind::Poisson,
        point: sigma,
        disk: *disk,
    })
}

/// `nu(z, A, D)` for `z` in `D`.
pub fn residual_kernel(z: Complex64, a: &ComplexMatrix, disk: &GeneralizedDisk) -> Result<KernelValue> {
    require_interior(a, disk)?;
    if !disk.contains_with_tol(ExtPoint::Finite(z), ON_BOUNDARY_TOL) {
        return Err(Error::PointOutsideDisk(format!("{z}")));
    }
    Ok(KernelValue {
        value: DiskKernel::new(a, disk).residual(z)?,
        kind: KernelKind::Residual,
        point: z,
        disk: *disk,
    })
}
