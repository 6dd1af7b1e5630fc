//! Closed-form bounds for the annulus, sector and strip, with crossovers and the
//! Jordan-block lower-bound experiment.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::GeneralizedDisk;
use crate::operator::{spectral_norm, sup_norm, ComplexMatrix, RationalFunction};
use crate::quadrature::integrate_scalar;

/// Largest number of factors used by [`gamma`].
pub const GAMMA_MAX_TERMS: usize = 10_000;
/// Largest number of terms used by [`paulsen_psi`].
pub const PAULSEN_MAX_TERMS: usize = 100_000_000;
/// Bisection stops once the bracket is shorter than this.
pub const CROSSOVER_TOL: f64 = 1e-9;

fn require_gt_one(r: f64) -> Result<()> {
    if r > 1.0 && !r.is_nan() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("R = {r} must exceed 1")))
    }
}

fn require_ge_one(r: f64) -> Result<()> {
    if r >= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("R = {r} must be at least 1")))
    }
}

/// `1 - R^{-m}` without cancellation near `R = 1`.
fn one_minus_pow(ln_r: f64, m: f64) -> f64 {
    -(-m * ln_r).exp_m1()
}

/// Shields: `2 + sqrt((R^2 + 1) / (R^2 - 1))`.
pub fn shields_bound(r: f64) -> Result<f64> {
    require_gt_one(r)?;
    Ok(2.0 + ((r * r + 1.0) / ((r - 1.0) * (r + 1.0))).sqrt())
}

/// `(R + 1) / sqrt(R^2 + R + 1)`, the complete bound of the residual part on `X(R)`.
pub fn h_annulus(r: f64) -> Result<f64> {
    require_ge_one(r)?;
    if r.is_infinite() {
        return Ok(1.0);
    }
    Ok((r + 1.0) / (r * r + r + 1.0).sqrt())
}

/// `2 + (R + 1) / sqrt(R^2 + R + 1)`.
pub fn thm1_upper(r: f64) -> Result<f64> {
    Ok(2.0 + h_annulus(r)?)
}

/// `n + n(n - 1)/sqrt(3)`.
pub fn thm0_bound(n: usize) -> f64 {
    let n = n as f64;
    n + n * (n - 1.0) / 3f64.sqrt()
}

/// `psi(t) = 2t(1 + t^2)^2 / ((1 + t)(1 + t^2 + t^4))` for `t >= 1`, with `psi(inf) = 2`.
pub fn psi(t: f64) -> Result<f64> {
    require_ge_one(t)?;
    if t.is_infinite() {
        return Ok(2.0);
    }
    let u = 1.0 / t;
    // Divided through by t^5 to stay finite for large t.
    Ok(2.0 * (1.0 + u * u).powi(2) / ((1.0 + u) * (1.0 + u * u + u.powi(4))))
}

/// `gamma_k(R) = 2/(1 + R^-2) prod_{n=1..k} (1 - R^{-8n})^2 / ((1 - R^{4-8n})(1 - R^{-4-8n}))`.
pub fn gamma_k(r: f64, k: usize) -> Result<f64> {
    require_gt_one(r)?;
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    if r.is_infinite() {
        return Ok(2.0);
    }
    let l = r.ln();
    let mut g = 2.0 / (1.0 + (-2.0 * l).exp());
    for n in 1..=k {
        let m = 8.0 * n as f64;
        let top = one_minus_pow(l, m);
        g *= top * top / (one_minus_pow(l, m - 4.0) * one_minus_pow(l, m + 4.0));
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaEval {
    /// Truncated product, a lower bound for `gamma(R)`.
    pub value: f64,
    /// Upper end of the bracket: `value` when converged, `2` otherwise.
    pub upper: f64,
    pub terms: usize,
    pub converged: bool,
}

/// `gamma(R) = 2(1 - R^-2) prod_{n>=1} ((1 - R^{-8n}) / (1 - R^{4-8n}))^2`, truncated once a
/// factor is within `tol` of 1 or after [`GAMMA_MAX_TERMS`] factors.
pub fn gamma_eval(r: f64, tol: f64) -> Result<GammaEval> {
    require_gt_one(r)?;
    if r.is_infinite() {
        return Ok(GammaEval { value: 2.0, upper: 2.0, terms: 0, converged: true });
    }
    let l = r.ln();
    let mut g = 2.0 * one_minus_pow(l, 2.0);
    for n in 1..=GAMMA_MAX_TERMS {
        let m = 8.0 * n as f64;
        let q = one_minus_pow(l, m) / one_minus_pow(l, m - 4.0);
        let term = q * q;
        g *= term;
        if (term - 1.0).abs() < tol {
            return Ok(GammaEval { value: g, upper: g, terms: n, converged: true });
        }
    }
    Ok(GammaEval { value: g, upper: 2.0, terms: GAMMA_MAX_TERMS, converged: false })
}

pub fn gamma(r: f64, tol: f64) -> Result<f64> {
    Ok(gamma_eval(r, tol)?.value)
}

/// `sum_{n>=1} 4/(1 + R^{2n})`, truncated once a term drops below `1e-16`.
pub fn paulsen_psi(r: f64) -> Result<f64> {
    require_gt_one(r)?;
    if r.is_infinite() {
        return Ok(0.0);
    }
    let l = r.ln();
    let mut sum = 0.0;
    for n in 1..=PAULSEN_MAX_TERMS {
        let term = 4.0 / (1.0 + (2.0 * n as f64 * l).exp());
        sum += term;
        if term < 1e-16 {
            return Ok(sum);
        }
    }
    Err(Error::OutOfRange(format!("Paulsen series too slow at R = {r}")))
}

/// `max(3, 2 + sum_{n>=1} 4/(1 + R^{2n}))`.
pub fn paulsen_bound(r: f64) -> Result<f64> {
    Ok((2.0 + paulsen_psi(r)?).max(3.0))
}

/// Root of `f - g` on `[lo, hi]` by bisection.
pub fn crossover<F, G>(f: F, g: G, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    G: Fn(f64) -> Result<f64>,
{
    let h = |x: f64| -> Result<f64> { Ok(f(x)? - g(x)?) };
    let (mut a, mut b) = (lo, hi);
    let (mut ha, hb) = (h(a)?, h(b)?);
    if ha == 0.0 {
        return Ok(a);
    }
    if hb == 0.0 {
        return Ok(b);
    }
    if ha.signum() == hb.signum() || ha.is_nan() || hb.is_nan() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while b - a > CROSSOVER_TOL {
        let m = 0.5 * (a + b);
        let hm = h(m)?;
        if hm == 0.0 {
            return Ok(m);
        }
        if hm.signum() == ha.signum() {
            a = m;
            ha = hm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    pub name: &'static str,
    pub r: f64,
}

/// The three crossovers of the Paulsen bound with `3`, `thm1_upper` and `shields_bound`.
pub fn paulsen_crossovers() -> Result<Vec<Crossover>> {
    let p = |r: f64| Ok(2.0 + paulsen_psi(r)?);
    Ok(vec![
        Crossover { name: "paulsen_vs_shields", r: crossover(p, shields_bound, 1.5, 3.0)? },
        Crossover { name: "paulsen_vs_thm1_upper", r: crossover(p, thm1_upper, 1.5, 3.0)? },
        Crossover { name: "paulsen_vs_3", r: crossover(p, |_| Ok(3.0), 1.5, 3.0)? },
    ])
}

/// Point where Shields' bound overtakes `thm1_upper`, the real root of `R^3 - 2R^2 - 3R - 2`.
pub fn shields_thm1_crossover() -> Result<f64> {
    crossover(shields_bound, thm1_upper, 1.5, 10.0)
}

/// `(sin 2θ / pi) ∫_0^∞ dx / (x^2 sin^2 θ + 2x cos 2θ + 1)` for `θ ∈ (0, pi/2]`,
/// extended by continuity with `2/sqrt(3)` at `pi/2`.
pub fn h_sector(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside (0, pi/2]")));
    }
    if theta == FRAC_PI_2 {
        return Ok(2.0 / 3f64.sqrt());
    }
    let s = theta.sin();
    let eps = FRAC_PI_2 - theta;
    let sin_2theta = 2.0 * s * eps.sin();
    let beta = (2.0 * theta).cos();
    // sin^2 θ - cos^2 2θ factored as (1 - s)(1 + 2s)(2s - 1)(1 + s), with 1 - s = 2 sin^2(eps/2).
    let one_minus_s = 2.0 * (eps / 2.0).sin().powi(2);
    let delta = one_minus_s * (1.0 + 2.0 * s) * (2.0 * s - 1.0) * (1.0 + s);
    let integral = if beta > 0.0 {
        let u = delta / (beta * beta);
        let g = if u.abs() < 1e-10 {
            1.0 - u / 3.0
        } else if u > 0.0 {
            u.sqrt().atan() / u.sqrt()
        } else {
            (-u).sqrt().atanh() / (-u).sqrt()
        };
        g / beta
    } else {
        let sd = delta.sqrt();
        (FRAC_PI_2 - (beta / sd).atan()) / sd
    };
    Ok(sin_2theta / PI * integral)
}

/// Quadrature evaluation of the same integral after `x = tan u`.
pub fn h_sector_numeric(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside (0, pi/2)")));
    }
    let (alpha, beta) = (theta.sin().powi(2), (2.0 * theta).cos());
    let i = integrate_scalar(
        |u| {
            let (su, cu) = u.sin_cos();
            1.0 / (alpha * su * su + 2.0 * beta * su * cu + cu * cu)
        },
        0.0,
        FRAC_PI_2,
        1e-13,
    )?;
    Ok((2.0 * theta).sin() / PI * i)
}

/// `(R^2 - R^-2)/(2 pi) ∫_0^{2pi} dθ / (R^2 + R^-2 - rho + 1 - (rho + 1) cos θ)` with
/// `rho = (R + 1/R)/2`, by quadrature.
pub fn h_annulus_numeric(r: f64) -> Result<f64> {
    require_gt_one(r)?;
    let rho = 0.5 * (r + 1.0 / r);
    let base = r * r + 1.0 / (r * r) - rho + 1.0;
    let i = integrate_scalar(|t| 1.0 / (base - (rho + 1.0) * t.cos()), 0.0, 2.0 * PI, 1e-13)?;
    Ok((r * r - 1.0 / (r * r)) / (2.0 * PI) * i)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanDemo {
    pub r: f64,
    /// Off-diagonal entry `R - 1/R` of the Jordan block.
    pub t: f64,
    /// `||f(A(t))||`.
    pub norm: f64,
    /// `t |f'(1)|`.
    pub lower: f64,
    /// `sup_{∂X(R)} |f|`.
    pub sup: f64,
    /// `t |f'(1)| / sup |f|`, a certified lower bound for `K(R)`.
    pub ratio: f64,
}

/// `A(t) = [[1, t], [0, 1]]` with `t = R - 1/R`, for which `X(R)` is a spectral set.
pub fn jordan_block(r: f64) -> Result<ComplexMatrix> {
    require_gt_one(r)?;
    let t = r - 1.0 / r;
    let one = Complex64::new(1.0, 0.0);
    Ok(ComplexMatrix::from_row_slice(2, 2, &[one, Complex64::from(t), Complex64::new(0.0, 0.0), one]))
}

/// Annulus `{1/R <= |z| <= R}` as a pair of disks.
pub fn annulus_disks(r: f64) -> Result<[GeneralizedDisk; 2]> {
    require_gt_one(r)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok([GeneralizedDisk::disk(zero, r), GeneralizedDisk::exterior(zero, 1.0 / r)])
}

pub fn jordan_lower_demo(r: f64, f: &RationalFunction) -> Result<JordanDemo> {
    let a = jordan_block(r)?;
    let disks = annulus_disks(r)?;
    let sup = sup_norm(&f.clone().into(), &disks)?;
    let t = r - 1.0 / r;
    let d1 = f.derivative_at(Complex64::new(1.0, 0.0)).ok_or_else(|| Error::PoleOnX("1".into()))?;
    let lower = t * d1.norm();
    let norm = spectral_norm(&f.eval_matrix(&a)?);
    Ok(JordanDemo { r, t, norm, lower, sup, ratio: lower / sup })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurveSample {
    pub r: f64,
    pub shields: f64,
    pub thm1_upper: f64,
    pub gamma_1: f64,
    pub gamma: f64,
    pub paulsen: f64,
}

pub fn curve_sample(r: f64) -> Result<BoundCurveSample> {
    Ok(BoundCurveSample {
        r,
        shields: shields_bound(r)?,
        thm1_upper: thm1_upper(r)?,
        gamma_1: gamma_k(r, 1)?,
        gamma: gamma(r, 1e-15)?,
        paulsen: paulsen_bound(r)?,
    })
}

/// `n` points spaced evenly on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// CSV with header `R,shields,thm1_upper,gamma1,gamma,paulsen` and trailing
/// `# crossover <name> <R>` lines.
pub fn bounds_csv(samples: &[BoundCurveSample], crossovers: &[Crossover]) -> String {
    let mut out = String::from("R,shields,thm1_upper,gamma1,gamma,paulsen\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{:.6},{:.12},{:.12},{:.12},{:.12},{:.12}",
            s.r, s.shields, s.thm1_upper, s.gamma_1, s.gamma, s.paulsen
        );
    }
    for c in crossovers {
        let _ = writeln!(out, "# crossover {} {:.9}", c.name, c.r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_sector_is_continuous_at_right_angle() {
        let near = h_sector(FRAC_PI_2 - 1e-9).unwrap();
        assert!((near - 2.0 / 3f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn h_sector_is_smooth_across_degenerate_discriminant() {
        let at = h_sector(PI / 6.0).unwrap();
        let below = h_sector(PI / 6.0 - 1e-7).unwrap();
        let above = h_sector(PI / 6.0 + 1e-7).unwrap();
        assert!((at - below).abs() < 1e-6 && (at - above).abs() < 1e-6);
        assert!((at - (PI / 3.0).sin() / PI * 2.0).abs() < 1e-12);
    }
}
