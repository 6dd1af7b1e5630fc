use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MoebiusMap;

/// Dense square complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Largest supported dimension.
pub const MAX_DIM: usize = 256;

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * Complex64::from(0.5)
}

/// Smallest eigenvalue of a Hermitian matrix (the input is symmetrized first).
pub fn min_hermitian_eigenvalue(h: &ComplexMatrix) -> f64 {
    SymmetricEigen::new(hermitian_part(h)).eigenvalues.min()
}

/// Eigenvalues via the complex Schur form.
pub fn eigenvalues(m: &ComplexMatrix) -> Vec<Complex64> {
    let schur = m.clone().schur();
    let (_, t) = schur.unpack();
    t.diagonal().iter().copied().collect()
}

/// Inverse through a partially pivoted LU factorization; rejects pivots below
/// `1e-14` times the matrix scale.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let lu = m.clone().lu();
    let u = lu.u();
    let min_pivot = (0..n).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if n > 0 && min_pivot <= 1e-14 * scale {
        return Err(Error::SingularMatrix(format!("pivot {min_pivot:e} at scale {scale:e}")));
    }
    lu.try_inverse().ok_or_else(|| Error::SingularMatrix("LU inverse failed".into()))
}

/// `(sigma I - A)^{-1}`.
pub fn resolvent(a: &ComplexMatrix, sigma: Complex64) -> Result<ComplexMatrix> {
    let n = a.nrows();
    let x = ComplexMatrix::from_diagonal_element(n, n, sigma) - a;
    inverse(&x).map_err(|_| Error::ResolventAtSpectrum(format!("{sigma}")))
}

/// `phi(A) = (aA + b)(cA + d)^{-1}`.
pub fn mobius_of_matrix(phi: &MoebiusMap, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let [pa, pb, pc, pd] = phi.coefficients();
    let n = a.nrows();
    let num = a * pa + identity(n) * pb;
    let den = a * pc + identity(n) * pd;
    Ok(num * inverse(&den)?)
}

pub(crate) fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidMatrix(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    if m.nrows() > MAX_DIM {
        return Err(Error::InvalidMatrix(format!("dimension {} exceeds {MAX_DIM}", m.nrows())));
    }
    if m.iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(())
}

/// JSON form `{"n": k, "re": [[..]], "im": [[..]]}` with row-major nested arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
        MatrixJson { n: m.nrows(), re: rows(|z| z.re), im: rows(|z| z.im) }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        let n = j.n;
        let shape_ok = |v: &Vec<Vec<f64>>| v.len() == n && v.iter().all(|r| r.len() == n);
        if !shape_ok(&j.re) || !shape_ok(&j.im) {
            return Err(Error::InvalidMatrix(format!("expected {n}x{n} re/im arrays")));
        }
        let m = ComplexMatrix::from_fn(n, n, |r, c| Complex64::new(j.re[r][c], j.im[r][c]));
        check_square(&m)?;
        Ok(m)
    }
}

/// `#[serde(with = "...")]` adaptor for [`ComplexMatrix`].
pub mod serde_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}
