use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;
use specset::bounds::{bounds_csv, curve_sample, linear_grid, paulsen_crossovers};
use specset::operator::ProblemInstance;
use specset::tessellation::{export_json, export_svg, Viewport};
use specset::{Error, GeneralizedDisk, Tessellation};

use crate::campaign::{kernel_checks, random_batch, verify_batch, KernelOptions, RandomKind, VerifyOptions};
use crate::report::{digest, Check, RunReport, Skip};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Degenerate = 3,
}

/// Failure that maps to an exit status.
#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { status: Status::Usage, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DegenerateTessellation(_)
            | Error::NestedDisks(_)
            | Error::EmptyInterior(_)
            | Error::IdenticalBoundaries
            | Error::InvalidDisk(_)
            | Error::InvalidCircline(_) => Status::Degenerate,
            _ => Status::Usage,
        };
        Self { status, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Default quadrature tolerance, overridden by `SPECSET_TOL`.
pub fn tolerance_from_env() -> CliResult<f64> {
    match std::env::var("SPECSET_TOL") {
        Err(_) => Ok(specset::decomposition::DEFAULT_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::usage(format!("SPECSET_TOL='{s}' is not a positive number"))),
        },
    }
}

fn write_output(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub struct BoundsArgs {
    pub rmin: f64,
    pub rmax: f64,
    pub steps: usize,
    pub out: Option<PathBuf>,
}

/// Bound curves as CSV with Paulsen crossovers; returns the CSV text.
pub fn cmd_bounds(args: &BoundsArgs) -> CliResult<String> {
    if !(args.rmin > 1.0 && args.rmin < args.rmax && args.rmax.is_finite()) {
        return Err(CliError::usage(format!("need 1 < rmin < rmax, got rmin={} rmax={}", args.rmin, args.rmax)));
    }
    if args.steps < 2 {
        return Err(CliError::usage("steps must be at least 2"));
    }
    let samples = linear_grid(args.rmin, args.rmax, args.steps)
        .into_iter()
        .map(curve_sample)
        .collect::<specset::Result<Vec<_>>>()?;
    let csv = bounds_csv(&samples, &paulsen_crossovers()?);
    if let Some(out) = &args.out {
        write_output(out, &csv)?;
    }
    Ok(csv)
}

pub enum InstanceSource {
    File(PathBuf),
    Random { kind: RandomKind, seed: u64, count: usize, n_dim: usize, block: usize, degree: usize },
}

/// Instances from a file (one instance or an array) or a random family.
pub fn load_instances(source: &InstanceSource) -> CliResult<(Vec<specset::Result<ProblemInstance>>, Option<u64>, String)> {
    match source {
        InstanceSource::File(path) => {
            let text = read_input(path)?;
            #[derive(Deserialize)]
            #[serde(untagged)]
            enum OneOrMany {
                One(Box<ProblemInstance>),
                Many(Vec<ProblemInstance>),
            }
            let parsed: OneOrMany =
                serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            let list = match parsed {
                OneOrMany::One(i) => vec![*i],
                OneOrMany::Many(v) => v,
            };
            let seed = list.first().map(|i| i.seed);
            Ok((list.into_iter().map(Ok).collect(), seed, digest(&[text.as_bytes()])))
        }
        &InstanceSource::Random { kind, seed, count, n_dim, block, degree } => {
            if count == 0 || n_dim == 0 {
                return Err(CliError::usage("count and dim must be positive"));
            }
            let batch = random_batch(kind, seed, count, n_dim, block, degree);
            let desc = format!("{:?}|{seed}|{count}|{n_dim}|{block}|{degree}", kind.0);
            Ok((batch, Some(seed), digest(&[desc.as_bytes()])))
        }
    }
}

fn tagged(command: &str, seed: Option<u64>, key: String, checks: Vec<Check>, skips: Vec<Skip>, tol: f64) -> RunReport {
    let d = digest(&[command.as_bytes(), key.as_bytes(), &tol.to_le_bytes()]);
    RunReport::new(command, seed, d, checks, skips)
}

pub fn cmd_verify(source: &InstanceSource, tol: f64) -> CliResult<RunReport> {
    let (instances, seed, key) = load_instances(source)?;
    let opts = VerifyOptions::new(tol);
    let (checks, skips) = verify_batch(&instances, &opts);
    let count = instances.len();
    let report = tagged("verify", seed, key, checks, skips, tol);
    let max_defect = report.max_value("defect").unwrap_or(0.0);
    let max_ratio = report.max_value("ratio").unwrap_or(0.0);
    Ok(report.with_stat("instances", count).with_stat("max_defect", max_defect).with_stat("max_ratio", max_ratio))
}

pub fn cmd_kernels(source: &InstanceSource, samples: usize, tol: f64) -> CliResult<RunReport> {
    if samples == 0 {
        return Err(CliError::usage("samples must be positive"));
    }
    let (instances, seed, key) = load_instances(source)?;
    let opts = KernelOptions::new(samples, tol);
    let mut checks = Vec::new();
    let mut skips = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        match inst {
            Ok(inst) => match kernel_checks(i, inst, &opts) {
                Ok(c) => checks.extend(c),
                Err(s) => skips.push(s),
            },
            Err(e) => skips.push(Skip { instance: i, reason: e.to_string() }),
        }
    }
    Ok(tagged("kernels", seed, key, checks, skips, tol).with_stat("samples", samples))
}

/// Named disk layouts of the tessellation figures.
pub fn preset(name: &str) -> CliResult<Vec<GeneralizedDisk>> {
    let c = Complex64::new;
    let upper = GeneralizedDisk::half_plane(-FRAC_PI_2, c(0.0, 1.0));
    let lower = GeneralizedDisk::half_plane(FRAC_PI_2, c(0.0, -1.0));
    match name {
        "annulus" => Ok(vec![GeneralizedDisk::disk(c(0.0, 0.0), 2.0), GeneralizedDisk::exterior(c(0.0, 0.0), 0.5)]),
        "figure2" => Ok(vec![
            GeneralizedDisk::disk(c(0.0, 0.0), 3.0),
            GeneralizedDisk::exterior(c(2.0, 0.0), 0.4),
            GeneralizedDisk::exterior(c(0.0, 0.0), 1.0),
        ]),
        "figure3" => Ok(vec![upper, GeneralizedDisk::exterior(c(0.0, 0.2), 0.4), lower]),
        "figure4" => Ok(vec![upper, GeneralizedDisk::exterior(c(0.0, -0.8), 0.5), lower]),
        _ => Err(CliError::usage(format!("unknown preset '{name}' (annulus, figure2, figure3, figure4)"))),
    }
}

/// Disks from a JSON file holding either an array or an object with a `disks` field.
pub fn read_disks(path: &Path) -> CliResult<Vec<GeneralizedDisk>> {
    let text = read_input(path)?;
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum DisksFile {
        List(Vec<GeneralizedDisk>),
        Object { disks: Vec<GeneralizedDisk> },
    }
    let parsed: DisksFile = serde_json::from_str(&text).map_err(|e| {
        let status = if e.is_data() { Status::Degenerate } else { Status::Usage };
        CliError { status, message: format!("{}: {e}", path.display()) }
    })?;
    Ok(match parsed {
        DisksFile::List(d) | DisksFile::Object { disks: d } => d,
    })
}

pub fn parse_viewport(s: &str) -> CliResult<Viewport> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("viewport '{s}' must be x0,y0,x1,y1")))?;
    if v.len() != 4 {
        return Err(CliError::usage(format!("viewport '{s}' must have four numbers")));
    }
    Ok(Viewport::new(v[0], v[1], v[2], v[3])?)
}

pub struct TessellateArgs {
    pub disks: Vec<GeneralizedDisk>,
    pub svg: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub viewport: Option<Viewport>,
}

/// Builds and exports the tessellation; the report lists arc structure.
pub fn cmd_tessellate(args: &TessellateArgs) -> CliResult<RunReport> {
    let t = Tessellation::build(&args.disks)?;
    let json = export_json(&t)?;
    if let Some(p) = &args.json {
        write_output(p, &json)?;
    }
    if let Some(p) = &args.svg {
        write_output(p, &export_svg(&t, args.viewport))?;
    }
    let proper = t.median_arcs().iter().filter(|m| !m.arc.is_full()).count();
    let pairs: Vec<String> = t.median_arcs().iter().map(|m| format!("{}-{}", m.j + 1, m.k + 1)).collect();
    let report = RunReport::new("tessellate", None, digest(&[json.as_bytes()]), Vec::new(), Vec::new());
    Ok(report
        .with_stat("disks", t.disks().len())
        .with_stat("boundary_arcs", t.boundary_arcs().len())
        .with_stat("median_arcs", t.median_arcs().len())
        .with_stat("proper_median_arcs", proper)
        .with_stat("vertices", t.vertices().len())
        .with_stat("median_pairs", pairs))
}
