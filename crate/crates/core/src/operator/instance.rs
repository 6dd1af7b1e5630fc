use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use super::matrix::{identity, serde_matrix, spectral_norm, ComplexMatrix};
use super::rational::{RationalFunction, RationalMatrixFunction};
use super::spectral::{is_spectral, spectrum_in_interior};
use crate::error::{Error, Result};
use crate::geometry::{boundary_pieces, in_all, pair::PairCase, ExtPoint, GeneralizedDisk};

/// Operator, disks and function for one verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    #[serde(with = "serde_matrix")]
    pub a: ComplexMatrix,
    pub disks: Vec<GeneralizedDisk>,
    pub f: RationalMatrixFunction,
    #[serde(default)]
    pub seed: u64,
}

impl ProblemInstance {
    /// Every disk is spectral for `A` and the spectrum is interior to all of them.
    pub fn check(&self) -> Result<()> {
        for (j, d) in self.disks.iter().enumerate() {
            if !is_spectral(&self.a, d)? {
                return Err(Error::OutOfRange(format!("disk {j} is not spectral for A")));
            }
        }
        if !spectrum_in_interior(&self.a, &self.disks) {
            return Err(Error::SpectrumNotInterior);
        }
        Ok(())
    }
}

/// Family of random instances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceKind {
    Annulus { r: f64 },
    Sector { theta: f64 },
    Strip,
    Lens,
    NDisks { k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub kind: InstanceKind,
    pub n_dim: usize,
    pub seed: u64,
    /// Largest numerator/denominator degree of `f`.
    #[serde(default = "default_degree")]
    pub degree: usize,
    /// Block size of `f` (1 for scalar functions).
    #[serde(default = "default_block")]
    pub block: usize,
}

fn default_degree() -> usize {
    3
}

fn default_block() -> usize {
    1
}

impl InstanceConfig {
    pub fn new(kind: InstanceKind, n_dim: usize, seed: u64) -> Self {
        Self { kind, n_dim, seed, degree: default_degree(), block: default_block() }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n).qr().q()
}

/// `V diag(values) V^*` with a random unitary `V`.
fn hermitian_with_spectrum(rng: &mut ChaCha8Rng, values: &[f64]) -> ComplexMatrix {
    let v = random_unitary(rng, values.len());
    let d = ComplexMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&x| x.into())));
    &v * d * v.adjoint()
}

fn uniform_values(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Square root of a Hermitian positive definite matrix.
fn hpd_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    let eig = SymmetricEigen::new(m.clone());
    let d = ComplexMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::from(x.max(0.0).sqrt())));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Contraction of norm `rho` built from a Gaussian matrix.
fn scaled_contraction(rng: &mut ChaCha8Rng, n: usize, rho: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n);
    let s = spectral_norm(&g);
    g * Complex64::from(rho / s)
}

/// Fraction of the admissible spectral range used by the generators, keeping the
/// spectrum strictly interior.
const FILL: f64 = 0.9;

fn operator_and_disks(kind: InstanceKind, n: usize, rng: &mut ChaCha8Rng) -> Result<(ComplexMatrix, Vec<GeneralizedDisk>)> {
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        InstanceKind::Annulus { r } => {
            if !(r > 1.0) {
                return Err(Error::OutOfRange(format!("annulus radius {r} must exceed 1")));
            }
            let disks = PairCase::Annulus { r }.disks();
            let lr = FILL * r.ln();
            let logs = uniform_values(rng, n, -lr, lr);
            let exps: Vec<f64> = logs.iter().map(|x| x.exp()).collect();
            let g = hermitian_with_spectrum(rng, &exps);
            let u = random_unitary(rng, n);
            // A^* = U G.
            Ok(((u * g).adjoint(), vec![disks.0, disks.1]))
        }
        InstanceKind::Sector { theta } => {
            if !(theta > 0.0 && theta < FRAC_PI_2) {
                return Err(Error::OutOfRange(format!("sector parameter {theta} outside (0, pi/2)")));
            }
            let disks = PairCase::Sector { theta }.disks();
            let vals = uniform_values(rng, n, 0.5, 2.0);
            let b = hermitian_with_spectrum(rng, &vals);
            let cmax = FILL / theta.tan();
            let vals = uniform_values(rng, n, -cmax, cmax);
            let c = hermitian_with_spectrum(rng, &vals);
            let s = hpd_sqrt(&b);
            let a = &s * (identity(n) + c * Complex64::i()) * &s;
            Ok((a, vec![disks.0, disks.1]))
        }
        InstanceKind::Strip => {
            let disks = PairCase::Strip.disks();
            let vals = uniform_values(rng, n, -2.0, 2.0);
            let b = hermitian_with_spectrum(rng, &vals);
            let vals = uniform_values(rng, n, -FILL, FILL);
            let c = hermitian_with_spectrum(rng, &vals);
            Ok((b + c * Complex64::i(), vec![disks.0, disks.1]))
        }
        InstanceKind::Lens => {
            let (r1, r2) = (rng.random_range(0.8..1.3), rng.random_range(0.8..1.3));
            let c1 = Complex64::new(-0.5, 0.0);
            let c2 = Complex64::new(0.5, rng.random_range(-0.2..0.2));
            let disks = vec![GeneralizedDisk::disk(c1, r1), GeneralizedDisk::disk(c2, r2)];
            let m = Complex64::new((c2.re - r2 + c1.re + r1) / 2.0, c2.im / 2.0);
            let rho = FILL * disks.iter().map(|d| d.boundary_distance(m)).fold(f64::INFINITY, f64::min);
            if !(rho > 0.0) {
                return Err(Error::EmptyInterior("lens".into()));
            }
            Ok((identity(n) * m + scaled_contraction(rng, n, rho), disks))
        }
        InstanceKind::NDisks { k } => {
            for _ in 0..1000 {
                let disks = random_disks(rng, k);
                if !well_placed(&disks) {
                    continue;
                }
                let rho = FILL * disks.iter().map(|d| d.boundary_distance(zero)).fold(f64::INFINITY, f64::min);
                return Ok((scaled_contraction(rng, n, rho), disks));
            }
            Err(Error::DegenerateTessellation(format!("no admissible {k}-disk layout found")))
        }
    }
}

/// `k` disks, each with boundary at distance in `[0.6, 1]` from the origin in a
/// spread-out direction.
fn random_disks(rng: &mut ChaCha8Rng, k: usize) -> Vec<GeneralizedDisk> {
    (0..k)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / k as f64 + rng.random_range(-0.4..0.4);
            let e = Complex64::from_polar(1.0, phi);
            let delta = rng.random_range(0.6..1.0);
            match rng.random_range(0..3) {
                0 => {
                    let r = rng.random_range(1.0..3.0);
                    GeneralizedDisk::disk(e * (delta - r), r)
                }
                1 => {
                    let r = rng.random_range(0.3..1.5);
                    GeneralizedDisk::exterior(e * (delta + r), r)
                }
                _ => GeneralizedDisk::half_plane(phi + PI, e * delta),
            }
        })
        .collect()
}

/// Pairwise non-nested and every disk contributes to `∂X`.
fn well_placed(disks: &[GeneralizedDisk]) -> bool {
    use crate::geometry::{classify_pair, PairRelation};
    for j in 0..disks.len() {
        for k in (j + 1)..disks.len() {
            match classify_pair(&disks[j], &disks[k]) {
                Ok(PairRelation::Annulus | PairRelation::Lens(_)) => {}
                _ => return false,
            }
        }
    }
    let pieces = boundary_pieces(disks);
    (0..disks.len()).all(|j| pieces.iter().any(|(i, _)| *i == j))
}

/// A point outside `X` at distance at least `margin` from the disk it avoids.
fn pole_outside(rng: &mut ChaCha8Rng, disks: &[GeneralizedDisk], margin: f64) -> Complex64 {
    let d = disks[rng.random_range(0..disks.len())];
    let e = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    match d {
        GeneralizedDisk::Interior { center, radius } => center + e * (radius + margin + rng.random_range(0.0..1.0)),
        GeneralizedDisk::Exterior { center, radius } => {
            center + e * rng.random_range(0.0..1.0) * (radius - margin).max(0.0)
        }
        GeneralizedDisk::HalfPlane { theta, anchor } => {
            let n = Complex64::from_polar(1.0, theta);
            anchor - n * (margin + rng.random_range(0.0..1.0)) + Complex64::i() * n * rng.random_range(-2.0..2.0)
        }
    }
}

/// Random `p/q` with poles off `X`, bounded at infinity when infinity belongs to `X`.
pub fn random_rational(rng: &mut ChaCha8Rng, disks: &[GeneralizedDisk], degree: usize) -> RationalFunction {
    let inf_in_x = in_all(disks, ExtPoint::Infinity, 0.0);
    loop {
        let dq = rng.random_range(0..=degree.min(2));
        let dp = if inf_in_x { rng.random_range(0..=dq) } else { rng.random_range(0..=degree) };
        let mut den = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..dq {
            let p = pole_outside(rng, disks, 0.2);
            den = mul_linear(&den, p);
        }
        let num: Vec<Complex64> = (0..=dp).map(|_| gaussian(rng) * 0.5).collect();
        if let Ok(f) = RationalFunction::new(num, den) {
            return f;
        }
    }
}

fn mul_linear(p: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

/// Deterministic random instance; the spectral hypotheses hold by construction.
pub fn random_instance(config: &InstanceConfig) -> Result<ProblemInstance> {
    if config.n_dim == 0 || config.n_dim > super::matrix::MAX_DIM {
        return Err(Error::OutOfRange(format!("dimension {}", config.n_dim)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (a, disks) = operator_and_disks(config.kind, config.n_dim, &mut rng)?;
    let block = config.block.max(1);
    let rows: Vec<Vec<RationalFunction>> = (0..block)
        .map(|_| (0..block).map(|_| random_rational(&mut rng, &disks, config.degree)).collect())
        .collect();
    let f = RationalMatrixFunction::new(rows)?;
    Ok(ProblemInstance { a, disks, f, seed: config.seed })
}
