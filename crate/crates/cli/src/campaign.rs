use std::f64::consts::{FRAC_PI_2, PI};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use specset::bounds::{thm0_bound, thm1_upper};
use specset::decomposition::{decompose, integrate_kernel, DiskKernel, Measure};
use specset::geometry::{normalize_pair, reduce_disks, PairCase};
use specset::operator::{
    identity, is_spectral, min_hermitian_eigenvalue, random_instance, spectral_norm, spectrum_in_interior, sup_norm,
    InstanceConfig, InstanceKind, ProblemInstance,
};
use specset::{Error, OrientedArc, RationalFunction, RationalMatrixFunction};

use crate::report::{Check, Skip};

/// Random instance family named on the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomKind(pub InstanceKind);

impl FromStr for RandomKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let kind = match s {
            "annulus" => InstanceKind::Annulus { r: 2.0 },
            "sector" => InstanceKind::Sector { theta: PI / 3.0 },
            "strip" => InstanceKind::Strip,
            "lens" => InstanceKind::Lens,
            "n_disks" => InstanceKind::NDisks { k: 3 },
            _ => match s.strip_prefix("n_disks").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => InstanceKind::NDisks { k },
                _ => return Err(format!("unknown kind '{s}' (annulus, sector, strip, lens, n_disks<k>)")),
            },
        };
        Ok(Self(kind))
    }
}

impl RandomKind {
    /// Overrides the shape parameter of annulus (`R`) and sector (`θ`) families.
    pub fn with_param(self, param: Option<f64>) -> Self {
        match (self.0, param) {
            (InstanceKind::Annulus { .. }, Some(r)) => Self(InstanceKind::Annulus { r }),
            (InstanceKind::Sector { .. }, Some(theta)) => Self(InstanceKind::Sector { theta }),
            _ => self,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Largest accepted `||g_p + g_r - F(A)||`.
    pub defect_threshold: f64,
    /// Slack in the inequality checks.
    pub bound_slack: f64,
}

impl VerifyOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, defect_threshold: 10.0 * tol, bound_slack: 1e-6 }
    }
}

/// Instances `seed, seed + 1, ...` of one family.
pub fn random_batch(
    kind: RandomKind,
    seed: u64,
    count: usize,
    n_dim: usize,
    block: usize,
    degree: usize,
) -> Vec<specset::Result<ProblemInstance>> {
    (0..count as u64)
        .map(|i| {
            let mut cfg = InstanceConfig::new(kind.0, n_dim, seed + i);
            cfg.block = block;
            cfg.degree = degree;
            random_instance(&cfg)
        })
        .collect()
}

/// Sharper constant available when `X` is Möbius-equivalent to an annulus `X(R)`.
fn annulus_radius(inst: &ProblemInstance) -> Option<f64> {
    let disks = reduce_disks(&inst.disks).ok()?;
    if disks.len() != 2 {
        return None;
    }
    match normalize_pair(&disks[0], &disks[1], &[]).ok()?.case {
        PairCase::Annulus { r } => Some(r),
        _ => None,
    }
}

fn skip_reason(e: &Error) -> String {
    match e {
        Error::PoleOnX(_) => format!("pole on X ({e})"),
        _ => e.to_string(),
    }
}

/// Decomposition identity, part bounds and the Theorem-1 inequality for one instance.
pub fn verify_instance(index: usize, inst: &ProblemInstance, opts: &VerifyOptions) -> Result<Vec<Check>, Skip> {
    let skip = |e: Error| Skip { instance: index, reason: skip_reason(&e) };
    inst.check().map_err(skip)?;
    let sup = sup_norm(&inst.f, &inst.disks).map_err(skip)?;
    let d = decompose(&inst.f, &inst.a, &inst.disks, opts.tol).map_err(skip)?;
    let n = d.disks.len();
    let at = Some(index);
    let slack = opts.bound_slack;
    let mut checks = vec![
        Check::at_most(at, "defect", d.defect, opts.defect_threshold),
        Check::at_most(at, "g_p_bound", spectral_norm(&d.g_p), n as f64 * sup + slack),
        Check::at_most(at, "g_r_bound", spectral_norm(&d.g_r), (n * (n - 1)) as f64 / 3f64.sqrt() * sup + slack),
    ];
    let norm_fa = spectral_norm(&d.f_direct);
    checks.push(Check::at_most(at, "ratio", norm_fa / sup, thm0_bound(n) + slack / sup.max(f64::MIN_POSITIVE)));
    checks.push(Check::at_most(at, "theorem1", norm_fa, thm0_bound(n) * sup + slack));
    if let Some(r) = annulus_radius(inst) {
        let cap = thm1_upper(r).expect("R > 1");
        checks.push(Check::at_most(at, "theorem2_annulus", norm_fa, cap * sup + slack));
    }
    Ok(checks)
}

/// Runs [`verify_instance`] over a batch on the rayon pool; output is sorted by index.
pub fn verify_batch(
    instances: &[specset::Result<ProblemInstance>],
    opts: &VerifyOptions,
) -> (Vec<Check>, Vec<Skip>) {
    let outcomes: Vec<(usize, Result<Vec<Check>, Skip>)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let out = match inst {
                Ok(inst) => verify_instance(i, inst, opts),
                Err(e) => Err(Skip { instance: i, reason: skip_reason(e) }),
            };
            (i, out)
        })
        .collect();
    let mut checks = Vec::new();
    let mut skips = Vec::new();
    for (_, o) in outcomes {
        match o {
            Ok(c) => checks.extend(c),
            Err(s) => skips.push(s),
        }
    }
    (checks, skips)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelOptions {
    pub samples: usize,
    pub tol: f64,
    pub psd_floor: f64,
    pub identity_tol: f64,
}

impl KernelOptions {
    pub fn new(samples: usize, tol: f64) -> Self {
        Self { samples, tol, psd_floor: -1e-10, identity_tol: 1e-8 }
    }
}

/// Boundary samples of a disk, spread evenly in the canonical parameter.
fn boundary_samples(arc: &OrientedArc, k: usize) -> Vec<Complex64> {
    let (t0, t1) = arc.params();
    let line = arc.carrier().is_line();
    (0..k)
        .filter_map(|i| {
            let u = (i as f64 + 0.5) / k as f64;
            let t = t0 + u * (t1 - t0);
            if line && ((t - FRAC_PI_2) / PI).fract().abs() < 1e-12 {
                return None;
            }
            arc.point_at(t).finite()
        })
        .collect()
}

/// PSD spot checks and `∮ μ ds = I` for every disk of an instance.
pub fn kernel_checks(index: usize, inst: &ProblemInstance, opts: &KernelOptions) -> Result<Vec<Check>, Skip> {
    let skip = |e: Error| Skip { instance: index, reason: skip_reason(&e) };
    if !spectrum_in_interior(&inst.a, &inst.disks) {
        return Err(skip(Error::SpectrumNotInterior));
    }
    let at = Some(index);
    let n = inst.a.nrows();
    let one: RationalMatrixFunction = RationalFunction::constant(Complex64::new(1.0, 0.0)).into();
    let mut checks = Vec::new();
    for (j, disk) in inst.disks.iter().enumerate() {
        let spectral = is_spectral(&inst.a, disk).map_err(skip)?;
        let kernel = DiskKernel::new(&inst.a, disk);
        let arc = OrientedArc::boundary(disk);
        let mut min_eig = f64::INFINITY;
        for s in boundary_samples(&arc, opts.samples) {
            let mu = kernel.poisson(s).map_err(skip)?;
            min_eig = min_eig.min(min_hermitian_eigenvalue(&mu));
        }
        let psd = Check::at_least(at, &format!("psd_disk{}", j + 1), min_eig, opts.psd_floor);
        checks.push(if spectral { psd } else { psd.expect_fail() });
        let total = integrate_kernel(&one, &arc, |s| kernel.poisson(s), Measure::Arclength, opts.tol).map_err(skip)?;
        let residual = spectral_norm(&(total.value - identity(n)));
        checks.push(Check::at_most(at, &format!("identity_disk{}", j + 1), residual, opts.identity_tol));
    }
    Ok(checks)
}
