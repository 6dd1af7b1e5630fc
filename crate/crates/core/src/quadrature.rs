//! Adaptive Gauss–Kronrod (7/15) quadrature of matrix-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::ComplexMatrix;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Default cap on the number of panels.
pub const MAX_PANELS: usize = 4000;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: ComplexMatrix,
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: ComplexMatrix,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<ComplexMatrix>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let center = f(c)?;
    let mut kronrod: ComplexMatrix = &center * Complex64::from(WGK[7]);
    let mut gauss: ComplexMatrix = &center * Complex64::from(WG[3]);
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x)? + f(c + x)?;
        kronrod += &s * Complex64::from(WGK[i]);
        if i % 2 == 1 {
            gauss += &s * Complex64::from(WG[i / 2]);
        }
    }
    let value = kronrod * Complex64::from(h);
    let error = max_abs(&(&value - gauss * Complex64::from(h)));
    if value.iter().any(|z| !z.is_finite()) {
        return Err(Error::QuadratureNonConvergence { panels: 1, error: f64::INFINITY });
    }
    Ok(Panel { a, b, value, error })
}

/// Integrates `f` over `[a, b]` until the summed 7/15 error estimate drops below `tol`,
/// always bisecting the panel with the largest estimate.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<ComplexMatrix>,
{
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b)?;
    let mut total_err = first.error;
    heap.push(first);
    while total_err > tol {
        if heap.len() >= max_panels {
            return Err(Error::QuadratureNonConvergence { panels: heap.len(), error: total_err });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::QuadratureNonConvergence { panels: heap.len() + 1, error: total_err });
        }
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if total_err <= tol {
            // Re-sum to shed accumulated rounding in the running total.
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let panels = heap.len();
    let mut iter = heap.into_iter();
    let mut value = iter.next().expect("at least one panel").value;
    let mut error = 0.0;
    for p in iter {
        value += p.value;
        error += p.error;
    }
    Ok(QuadratureResult { value, error: error.max(0.0).min(tol), panels })
}

/// Scalar convenience wrapper.
pub fn integrate_scalar<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let r = integrate(|x| Ok(ComplexMatrix::from_element(1, 1, f(x).into())), a, b, tol, MAX_PANELS)?;
    Ok(r.value[(0, 0)].re)
}
