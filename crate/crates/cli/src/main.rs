use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use specset::operator::{random_instance, InstanceConfig};
use specset_cli::campaign::RandomKind;
use specset_cli::commands::{
    cmd_bounds, cmd_kernels, cmd_tessellate, cmd_verify, parse_viewport, preset, read_disks, tolerance_from_env,
    BoundsArgs, CliError, CliResult, InstanceSource, Status, TessellateArgs,
};
use specset_cli::RunReport;

#[derive(Parser)]
#[command(name = "specset", version, about = "K-spectral sets for intersections of generalized disks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound curves for the annulus as CSV.
    Bounds {
        #[arg(long, default_value_t = 1.01)]
        rmin: f64,
        #[arg(long, default_value_t = 10.0)]
        rmax: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Output CSV path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decomposition identity and Theorem-1 inequality on instances.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Positivity and normalization of the Poisson kernel.
    Kernels {
        #[command(flatten)]
        source: SourceArgs,
        /// Boundary samples per disk.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Median tessellation as SVG and JSON.
    Tessellate {
        /// JSON file with a disk array or an object with a `disks` field.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        disks: Option<PathBuf>,
        /// Built-in layout: annulus, figure2, figure3, figure4.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Plane rectangle `x0,y0,x1,y1` shown in the SVG.
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
    },
    /// Writes a random instance as JSON.
    Instance {
        #[arg(long)]
        random: RandomKind,
        /// Annulus ratio R or sector angle θ.
        #[arg(long)]
        param: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        block: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Instance JSON (a single instance or an array).
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    instance: Option<PathBuf>,
    /// Random family: annulus, sector, strip, lens, n_disks<k>.
    #[arg(long, requires = "seed")]
    random: Option<RandomKind>,
    /// Annulus ratio R or sector angle θ for random families.
    #[arg(long)]
    param: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    block: usize,
    #[arg(long, default_value_t = 3)]
    degree: usize,
}

impl SourceArgs {
    fn source(&self) -> InstanceSource {
        match (&self.instance, self.random) {
            (Some(path), _) => InstanceSource::File(path.clone()),
            (None, Some(kind)) => InstanceSource::Random {
                kind: kind.with_param(self.param),
                seed: self.seed.unwrap_or_default(),
                count: self.count,
                n_dim: self.dim,
                block: self.block,
                degree: self.degree,
            },
            (None, None) => unreachable!("clap requires a source"),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Also write the report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
}

fn emit(report: RunReport, output: &OutputArgs, start: Instant) -> CliResult<Status> {
    let mut report = report;
    if output.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let json = report.to_json();
    write_stdout(&format!("{json}\n"));
    if let Some(p) = &output.out {
        std::fs::write(p, format!("{json}\n"))?;
    }
    Ok(if report.summary.pass { Status::Pass } else { Status::Fail })
}

fn run(cli: Cli) -> CliResult<Status> {
    let start = Instant::now();
    match cli.command {
        Command::Bounds { rmin, rmax, steps, out } => {
            let csv = cmd_bounds(&BoundsArgs { rmin, rmax, steps, out: out.clone() })?;
            if out.is_none() {
                write_stdout(&csv);
            }
            Ok(Status::Pass)
        }
        Command::Verify { source, output } => {
            let report = cmd_verify(&source.source(), tolerance_from_env()?)?;
            emit(report, &output, start)
        }
        Command::Kernels { source, samples, output } => {
            let report = cmd_kernels(&source.source(), samples, tolerance_from_env()?)?;
            emit(report, &output, start)
        }
        Command::Tessellate { disks, preset: name, svg, json, viewport } => {
            let disks = match (disks, name) {
                (Some(path), _) => read_disks(&path)?,
                (None, Some(name)) => preset(&name)?,
                (None, None) => unreachable!("clap requires disks or a preset"),
            };
            let viewport = viewport.as_deref().map(parse_viewport).transpose()?;
            let report = cmd_tessellate(&TessellateArgs { disks, svg, json, viewport })?;
            write_stdout(&format!("{}\n", report.to_json()));
            Ok(Status::Pass)
        }
        Command::Instance { random, param, seed, dim, block, degree, out } => {
            let mut cfg = InstanceConfig::new(random.with_param(param).0, dim, seed);
            cfg.block = block;
            cfg.degree = degree;
            let inst = random_instance(&cfg)?;
            let json = serde_json::to_string_pretty(&inst).map_err(|e| CliError::usage(e.to_string()))?;
            match out {
                Some(p) => std::fs::write(p, format!("{json}\n"))?,
                None => write_stdout(&format!("{json}\n")),
            }
            Ok(Status::Pass)
        }
    }
}

/// Writes to stdout; a closed pipe ends output silently.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.status as u8)
        }
    }
}
