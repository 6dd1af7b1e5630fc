//! Poisson and residual kernels and the split `f(A) = g_p(f) + g_r(f)`.

mod kernel;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{in_all, reduce_disks, ExtPoint, GeneralizedDisk, MoebiusMap, OrientedArc};
use crate::operator::{
    enlarge_disks, mobius_of_matrix, spectral_norm, spectrum_clearance, sup_norm, ComplexMatrix, ProblemInstance,
    RationalMatrixFunction,
};
use crate::quadrature::{integrate, QuadratureResult, MAX_PANELS};
use crate::tessellation::Tessellation;

pub use kernel::{poisson_kernel, residual_kernel, DiskKernel, KernelKind, KernelValue, ON_BOUNDARY_TOL};

/// Spectral clearance below which the disks are enlarged before decomposing.
pub const CLEARANCE_FLOOR: f64 = 1e-8;
/// Relative enlargement applied when the clearance is below [`CLEARANCE_FLOOR`].
pub const ENLARGE_REL: f64 = 1e-6;
/// Default quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Euclidean arclength `ds`.
    Arclength,
    /// Complex line element `dσ` along the arc orientation.
    Complex,
}

fn block_product(f: &ComplexMatrix, k: &ComplexMatrix) -> ComplexMatrix {
    if f.len() == 1 {
        k * f[(0, 0)]
    } else {
        f.kronecker(k)
    }
}

/// `∫_arc F(σ) ⊗ K(σ) dm` with `dm` the chosen measure.
///
/// Lines are integrated in the `tan` parameter, which keeps the integrand bounded
/// through infinity whenever `F ⊗ K dm` is.
pub fn integrate_kernel<K>(
    f: &RationalMatrixFunction,
    arc: &OrientedArc,
    kernel: K,
    measure: Measure,
    tol: f64,
) -> Result<QuadratureResult>
where
    K: Fn(Complex64) -> Result<ComplexMatrix>,
{
    let pieces = arc.split_at_infinity();
    let piece_tol = tol / pieces.len() as f64;
    let mut total: Option<QuadratureResult> = None;
    for piece in &pieces {
        let integrand = |t: f64| -> Result<ComplexMatrix> {
            let (z, v) = piece.sample(t);
            let fz = f.eval(z).ok_or_else(|| Error::PoleOnX(format!("{z}")))?;
            let w = match measure {
                Measure::Arclength => Complex64::from(v.norm()),
                Measure::Complex => v,
            };
            Ok(block_product(&fz, &kernel(z)?) * w)
        };
        let (t0, t1) = piece.params();
        let r = integrate(integrand, t0, t1, piece_tol, MAX_PANELS)?;
        total = Some(match total {
            None => r,
            Some(acc) => QuadratureResult {
                value: acc.value + r.value,
                error: acc.error + r.error,
                panels: acc.panels + r.panels,
            },
        });
    }
    Ok(total.expect("an arc has at least one piece"))
}

fn zero_block(f: &RationalMatrixFunction, n: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(f.rows() * n, f.cols() * n)
}

fn check_inputs(f: &RationalMatrixFunction, a: &ComplexMatrix, tess: &Tessellation) -> Result<()> {
    if f.rows() != f.cols() {
        return Err(Error::DimensionMismatch(format!("{}x{} function is not square", f.rows(), f.cols())));
    }
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch("operator is not square".into()));
    }
    let disks = tess.disks();
    for p in f.poles() {
        if in_all(disks, ExtPoint::Finite(p), 1e-10) {
            return Err(Error::PoleOnX(format!("{p}")));
        }
    }
    if in_all(disks, ExtPoint::Infinity, 0.0) && f.value_at_infinity().is_none() {
        return Err(Error::UnboundedOnX);
    }
    Ok(())
}

/// `Σ_j ∫_{∂D_j ∩ X} F ⊗ μ_j ds`.
pub fn g_poisson(f: &RationalMatrixFunction, a: &ComplexMatrix, tess: &Tessellation, tol: f64) -> Result<QuadratureResult> {
    check_inputs(f, a, tess)?;
    let kernels: Vec<DiskKernel> = tess.disks().iter().map(|d| DiskKernel::new(a, d)).collect();
    let paths = tess.boundary_arcs();
    let mut out = QuadratureResult { value: zero_block(f, a.nrows()), error: 0.0, panels: 0 };
    for b in paths {
        let k = &kernels[b.j];
        let r = integrate_kernel(f, &b.arc, |s| k.poisson(s), Measure::Arclength, tol / paths.len() as f64)?;
        out.value += r.value;
        out.error += r.error;
        out.panels += r.panels;
    }
    Ok(out)
}

/// `Σ_{j<k} ∫_{C_jk ∩ X_j ∩ X_k} F ⊗ (ν_j - ν_k) dσ` over the oriented median arcs.
pub fn g_residual(f: &RationalMatrixFunction, a: &ComplexMatrix, tess: &Tessellation, tol: f64) -> Result<QuadratureResult> {
    g_residual_in_chart(f, a, tess, &MoebiusMap::identity(), tol)
}

/// [`g_residual`] computed after transporting every median arc, disk, `A` and `F`
/// through the chart `φ`.
pub fn g_residual_in_chart(
    f: &RationalMatrixFunction,
    a: &ComplexMatrix,
    tess: &Tessellation,
    phi: &MoebiusMap,
    tol: f64,
) -> Result<QuadratureResult> {
    check_inputs(f, a, tess)?;
    let n = tess.disks().len();
    let paths = tess.integration_paths();
    let mut out = QuadratureResult { value: zero_block(f, a.nrows()), error: 0.0, panels: 0 };
    if paths.is_empty() {
        if n > 1 {
            return Err(Error::DegenerateTessellation("no median arcs".into()));
        }
        return Ok(out);
    }
    let a_chart = mobius_of_matrix(phi, a)?;
    let f_chart = f.compose_mobius(&phi.inverse());
    let kernels: Vec<DiskKernel> = tess
        .disks()
        .iter()
        .map(|d| Ok(DiskKernel::new(&a_chart, &d.image(phi)?)))
        .collect::<Result<_>>()?;
    for m in paths {
        let arc = m.arc.image(phi);
        let (kj, kk) = (&kernels[m.j], &kernels[m.k]);
        let r = integrate_kernel(
            &f_chart,
            &arc,
            |z| Ok(kj.residual(z)? - kk.residual(z)?),
            Measure::Complex,
            tol / paths.len() as f64,
        )?;
        out.value += r.value;
        out.error += r.error;
        out.panels += r.panels;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub g_p: ComplexMatrix,
    pub g_r: ComplexMatrix,
    pub f_direct: ComplexMatrix,
    /// `||g_p + g_r - F(A)||`.
    pub defect: f64,
    /// Summed quadrature error estimate.
    pub error: f64,
    pub panels: usize,
    /// Enlargement applied to the disks, zero when none was needed.
    pub enlarged_by: f64,
    /// Disks actually used after reduction and enlargement.
    pub disks: Vec<GeneralizedDisk>,
}

/// Splits `F(A)` into its Poisson and residual parts and compares with direct evaluation.
pub fn decompose(
    f: &RationalMatrixFunction,
    a: &ComplexMatrix,
    disks: &[GeneralizedDisk],
    tol: f64,
) -> Result<Decomposition> {
    let mut disks = reduce_disks(disks)?;
    let clearance = spectrum_clearance(a, &disks);
    if clearance <= -CLEARANCE_FLOOR || clearance.is_nan() {
        return Err(Error::SpectrumNotInterior);
    }
    let mut enlarged_by = 0.0;
    if clearance < CLEARANCE_FLOOR {
        let scale = disks.iter().map(|d| d.scale()).fold(1.0, f64::max);
        enlarged_by = ENLARGE_REL * scale;
        disks = enlarge_disks(&disks, enlarged_by)?;
        if spectrum_clearance(a, &disks) < CLEARANCE_FLOOR {
            return Err(Error::SpectrumNotInterior);
        }
    }
    let tess = Tessellation::build(&disks)?;
    let gp = g_poisson(f, a, &tess, 0.5 * tol)?;
    let gr = g_residual(f, a, &tess, 0.5 * tol)?;
    let f_direct = f.eval_matrix(a)?;
    let defect = spectral_norm(&(&gp.value + &gr.value - &f_direct));
    Ok(Decomposition {
        g_p: gp.value,
        g_r: gr.value,
        f_direct,
        defect,
        error: gp.error + gr.error,
        panels: gp.panels + gr.panels,
        enlarged_by,
        disks,
    })
}

/// `||(ν_j - ν_k)(z) - (ν'_j - ν'_k)(φz) φ'(z)||` where primes denote kernels of
/// `φ(A)` and the image disks.
pub fn pullback_check(
    phi: &MoebiusMap,
    z: Complex64,
    a: &ComplexMatrix,
    dj: &GeneralizedDisk,
    dk: &GeneralizedDisk,
) -> Result<f64> {
    let w = phi.apply_finite(z).ok_or(Error::InfinitePoint)?;
    let a_img = mobius_of_matrix(phi, a)?;
    let (ej, ek) = (dj.image(phi)?, dk.image(phi)?);
    let here = DiskKernel::new(a, dj).residual(z)? - DiskKernel::new(a, dk).residual(z)?;
    let there = DiskKernel::new(&a_img, &ej).residual(w)? - DiskKernel::new(&a_img, &ek).residual(w)?;
    Ok(spectral_norm(&(here - there * phi.derivative(z))))
}

/// `||(F_ij(A))|| / sup_{∂X} ||F||`.
pub fn empirical_cb_ratio(f: &RationalMatrixFunction, instance: &ProblemInstance) -> Result<f64> {
    if f.rows() > 4 || f.cols() > 4 {
        return Err(Error::DimensionMismatch(format!("block size {}x{} exceeds 4", f.rows(), f.cols())));
    }
    let lhs = spectral_norm(&f.eval_matrix(&instance.a)?);
    let rhs = sup_norm(f, &instance.disks)?;
    if rhs == 0.0 {
        return Err(Error::OutOfRange("F vanishes on the boundary".into()));
    }
    Ok(lhs / rhs)
}
