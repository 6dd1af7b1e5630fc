use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{eigenvalues, identity, inverse, ComplexMatrix};
use crate::error::{Error, Result};
use crate::geometry::{ExtPoint, MoebiusMap};

type Poly = Vec<Complex64>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Complex64::new(0.0, 0.0));
    }
    p
}

fn is_zero(p: &[Complex64]) -> bool {
    p.iter().all(|c| c.norm() == 0.0)
}

/// Degree, with `None` for the zero polynomial.
fn degree(p: &[Complex64]) -> Option<usize> {
    p.iter().rposition(|c| c.norm() != 0.0)
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_derivative(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
}

fn horner_matrix(p: &[Complex64], a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.nrows();
    p.iter().rev().fold(ComplexMatrix::zeros(n, n), |acc, &c| acc * a + identity(n) * c)
}

fn poly_mul(p: &[Complex64], q: &[Complex64]) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_add(p: &[Complex64], q: &[Complex64]) -> Poly {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| p.get(i).copied().unwrap_or_default() + q.get(i).copied().unwrap_or_default())
        .collect()
}

fn poly_pow(p: &[Complex64], k: usize) -> Poly {
    (0..k).fold(vec![Complex64::new(1.0, 0.0)], |acc, _| poly_mul(&acc, p))
}

/// Roots via eigenvalues of the companion matrix.
fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let Some(d) = degree(p) else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let lead = p[d];
    let mut comp = ComplexMatrix::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -p[i] / lead;
    }
    eigenvalues(&comp)
}

/// Rational function `p / q` with coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RationalJson", into = "RationalJson")]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: Vec<[f64; 2]>,
    den: Vec<[f64; 2]>,
}

impl TryFrom<RationalJson> for RationalFunction {
    type Error = Error;
    fn try_from(j: RationalJson) -> Result<Self> {
        let conv = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        RationalFunction::new(conv(j.num), conv(j.den))
    }
}

impl From<RationalFunction> for RationalJson {
    fn from(f: RationalFunction) -> Self {
        let conv = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
        RationalJson { num: conv(&f.num), den: conv(&f.den) }
    }
}

impl RationalFunction {
    /// Validated constructor: finite coefficients, nonzero denominator, no common roots
    /// within `1e-10`.
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        if num.is_empty() || den.is_empty() || num.iter().chain(&den).any(|c| !c.is_finite()) {
            return Err(Error::InvalidRational("empty or non-finite coefficients".into()));
        }
        if is_zero(&den) {
            return Err(Error::InvalidRational("zero denominator".into()));
        }
        let f = Self::from_parts(num, den);
        if !is_zero(&f.num) {
            let zs = roots(&f.num);
            for p in roots(&f.den) {
                if zs.iter().any(|z| (z - p).norm() <= 1e-10 * (1.0 + p.norm())) {
                    return Err(Error::InvalidRational(format!("common root near {p}")));
                }
            }
        }
        Ok(f)
    }

    /// Unvalidated constructor (trims trailing zeros only).
    pub fn from_parts(num: Vec<Complex64>, den: Vec<Complex64>) -> Self {
        Self { num: trim(num), den: trim(den) }
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::from_parts(coeffs, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c])
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self::polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    pub fn num_degree(&self) -> Option<usize> {
        degree(&self.num)
    }

    pub fn den_degree(&self) -> usize {
        degree(&self.den).unwrap_or(0)
    }

    /// Value at a finite point, `None` at a pole.
    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        let q = horner(&self.den, z);
        if q.norm() == 0.0 {
            return None;
        }
        let v = horner(&self.num, z) / q;
        v.is_finite().then_some(v)
    }

    /// Value at infinity, `None` when `f` has a pole there.
    pub fn value_at_infinity(&self) -> Option<Complex64> {
        let dq = self.den_degree();
        match degree(&self.num) {
            None => Some(Complex64::new(0.0, 0.0)),
            Some(dp) if dp < dq => Some(Complex64::new(0.0, 0.0)),
            Some(dp) if dp == dq => Some(self.num[dp] / self.den[dq]),
            Some(_) => None,
        }
    }

    pub fn eval_ext(&self, z: ExtPoint) -> Option<Complex64> {
        match z {
            ExtPoint::Finite(z) => self.eval(z),
            ExtPoint::Infinity => self.value_at_infinity(),
        }
    }

    /// `f'(z)` by the quotient rule.
    pub fn derivative_at(&self, z: Complex64) -> Option<Complex64> {
        let q = horner(&self.den, z);
        if q.norm() == 0.0 {
            return None;
        }
        let p = horner(&self.num, z);
        Some((horner_derivative(&self.num, z) * q - p * horner_derivative(&self.den, z)) / (q * q))
    }

    /// Finite poles (roots of the denominator).
    pub fn poles(&self) -> Vec<Complex64> {
        roots(&self.den)
    }

    pub fn zeros(&self) -> Vec<Complex64> {
        roots(&self.num)
    }

    /// `f(A) = p(A) q(A)^{-1}`.
    pub fn eval_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let q = horner_matrix(&self.den, a);
        let qi = inverse(&q).map_err(|e| Error::SingularMatrix(format!("q(A): {e}")))?;
        Ok(horner_matrix(&self.num, a) * qi)
    }

    /// `f ∘ phi`.
    pub fn compose_mobius(&self, phi: &MoebiusMap) -> Self {
        let [a, b, c, d] = phi.coefficients();
        let top = [b, a];
        let bottom = [d, c];
        let n = self.num.len().max(self.den.len()) - 1;
        let lift = |p: &[Complex64]| {
            p.iter().enumerate().fold(vec![Complex64::new(0.0, 0.0)], |acc, (k, &coef)| {
                let term = poly_mul(&poly_pow(&top, k), &poly_pow(&bottom, n - k));
                let term: Poly = term.into_iter().map(|t| t * coef).collect();
                poly_add(&acc, &term)
            })
        };
        Self::from_parts(lift(&self.num), lift(&self.den))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts(poly_mul(&self.num, &other.num), poly_mul(&self.den, &other.den))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_parts(
            poly_add(&poly_mul(&self.num, &other.den), &poly_mul(&other.num, &self.den)),
            poly_mul(&self.den, &other.den),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_parts(self.num.iter().map(|z| z * c).collect(), self.den.clone())
    }
}

/// Rectangular array of rational functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrixFunction {
    entries: Vec<Vec<RationalFunction>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FunctionJson {
    Scalar(RationalFunction),
    Block(Vec<Vec<RationalFunction>>),
}

impl Serialize for RationalMatrixFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_scalar() {
            Some(f) => FunctionJson::Scalar(f.clone()).serialize(s),
            None => FunctionJson::Block(self.entries.clone()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for RationalMatrixFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match FunctionJson::deserialize(d)? {
            FunctionJson::Scalar(f) => Ok(f.into()),
            FunctionJson::Block(rows) => RationalMatrixFunction::new(rows).map_err(serde::de::Error::custom),
        }
    }
}

impl From<RationalFunction> for RationalMatrixFunction {
    fn from(f: RationalFunction) -> Self {
        Self { entries: vec![vec![f]] }
    }
}

impl RationalMatrixFunction {
    pub fn new(entries: Vec<Vec<RationalFunction>>) -> Result<Self> {
        let cols = entries.first().map_or(0, |r| r.len());
        if cols == 0 || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidRational("block function must be a nonempty rectangle".into()));
        }
        Ok(Self { entries })
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i][j]
    }

    pub fn as_scalar(&self) -> Option<&RationalFunction> {
        (self.rows() == 1 && self.cols() == 1).then(|| &self.entries[0][0])
    }

    fn map_entries<F: Fn(&RationalFunction) -> Option<Complex64>>(&self, f: F) -> Option<ComplexMatrix> {
        let mut m = ComplexMatrix::zeros(self.rows(), self.cols());
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = f(e)?;
            }
        }
        Some(m)
    }

    pub fn eval(&self, z: Complex64) -> Option<ComplexMatrix> {
        self.map_entries(|e| e.eval(z))
    }

    pub fn eval_ext(&self, z: ExtPoint) -> Option<ComplexMatrix> {
        self.map_entries(|e| e.eval_ext(z))
    }

    pub fn value_at_infinity(&self) -> Option<ComplexMatrix> {
        self.map_entries(|e| e.value_at_infinity())
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.entries.iter().flatten().flat_map(|e| e.poles()).collect()
    }

    /// Block matrix `(F_ij(A))`.
    pub fn eval_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = a.nrows();
        let mut out = ComplexMatrix::zeros(self.rows() * n, self.cols() * n);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                out.view_mut((i * n, j * n), (n, n)).copy_from(&e.eval_matrix(a)?);
            }
        }
        Ok(out)
    }

    pub fn compose_mobius(&self, phi: &MoebiusMap) -> Self {
        Self { entries: self.entries.iter().map(|r| r.iter().map(|e| e.compose_mobius(phi)).collect()).collect() }
    }

    /// Entrywise product with a scalar function.
    pub fn mul_scalar(&self, f: &RationalFunction) -> Self {
        Self { entries: self.entries.iter().map(|r| r.iter().map(|e| e.mul(f)).collect()).collect() }
    }
}
