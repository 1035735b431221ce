//! `junction`: count tunnel junctions in 2D lidar scans.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use junction_core::io::{
    load_cloud_with_range, load_environment, render_svg, save_cloud, write_report, ScanFileFormat,
};
use junction_core::{
    builtin_scenario, cast_scan, detect_junctions, detect_on_scenario, DetectorParams, Environment,
    JunctionReport, LidarConfig, Result,
};

#[derive(Debug, Parser)]
#[command(
    name = "junction",
    version,
    about = "Count tunnel junctions in a single 2D lidar revolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect junctions in a scan file.
    Detect(DetectArgs),
    /// Generate a synthetic scan of a built-in scenario or environment file.
    Simulate(SimulateArgs),
    /// Time repeated detections on a built-in scenario.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct DetectorFlags {
    /// RBF decay rate in 1/m^2.
    #[arg(long, default_value_t = 1.5)]
    sigma: f64,
    /// Similarities below this are treated as no edge.
    #[arg(long, default_value_t = 1e-8)]
    floor: f64,
    /// Eigenvalues with |λ| at or below this count as zero.
    #[arg(long = "zero-tol", default_value_t = 1e-8)]
    zero_tol: f64,
    /// Seed for k-means++ (and scan noise where applicable).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of k-means++ restarts.
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Lloyd iteration cap per restart.
    #[arg(long = "max-iter", default_value_t = 100)]
    max_iter: usize,
}

impl DetectorFlags {
    fn params(&self) -> DetectorParams {
        DetectorParams {
            sigma: self.sigma,
            similarity_floor: self.floor,
            zero_eig_tol: self.zero_tol,
            kmeans_max_iter: self.max_iter,
            kmeans_restarts: self.restarts,
            rng_seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long)]
    input: PathBuf,
    /// `xy-csv`: lines `x,y` in meters. `polar-csv`: lines `angle_deg,range_m`,
    /// angles in degrees, `inf` for no return.
    #[arg(long, value_parser = parse_format)]
    format: ScanFileFormat,
    /// polar-csv only: ranges at or beyond this are no-returns.
    #[arg(long = "max-range")]
    max_range: Option<f64>,
    #[command(flatten)]
    detector: DetectorFlags,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write an SVG plot of the clustered scan here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write `runtime_seconds` as 0 so reports are byte-reproducible.
    #[arg(long = "no-timing")]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// One of: straight, L, T, X, five-way, dead-end.
    #[arg(long, required_unless_present = "env", conflicts_with = "env")]
    scenario: Option<String>,
    /// Environment file with `wall x1 y1 x2 y2` lines.
    #[arg(long)]
    env: Option<PathBuf>,
    /// Radial range noise standard deviation, meters.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 360)]
    beams: usize,
    #[arg(long = "max-range", default_value_t = 15.0)]
    max_range: f64,
    /// Output scan, xy-csv.
    #[arg(long)]
    out: PathBuf,
    /// Also detect junctions and plot the clustered scan here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Built-in scenario to scan and detect.
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    scenario: Option<String>,
    /// Benchmark an existing scan file instead of a scenario.
    #[arg(long, requires = "format")]
    input: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<ScanFileFormat>,
    #[arg(long, default_value_t = 10)]
    repeat: usize,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_format(s: &str) -> std::result::Result<ScanFileFormat, String> {
    s.parse()
}

fn print_summary(report: &JunctionReport, points: usize) {
    println!("junctions: {}", report.num_junctions);
    println!("points: {points}");
    println!("runtime: {:.6} s", report.runtime_seconds);
    if report.all_isolated {
        eprintln!(
            "warning: every point is its own cluster; sigma or floor is too aggressive for this scan density"
        );
    }
}

fn detect(args: &DetectArgs) -> Result<()> {
    let cloud = load_cloud_with_range(&args.input, args.format, args.max_range)?;
    let mut report = detect_junctions(&cloud, &args.detector.params())?;
    print_summary(&report, cloud.len());
    if args.no_timing {
        report.runtime_seconds = 0.0;
    }
    if let Some(path) = &args.report {
        write_report(&report, path)?;
    }
    if let Some(path) = &args.svg {
        render_svg(&cloud, &report.labels, path)?;
    }
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let (env, expected): (Environment, Option<usize>) = match (&args.scenario, &args.env) {
        (Some(name), _) => {
            let (env, k) = builtin_scenario(name)?;
            (env, Some(k))
        }
        (None, Some(path)) => (load_environment(path)?, None),
        (None, None) => unreachable!("clap requires one of --scenario/--env"),
    };
    let cfg = LidarConfig {
        num_beams: args.beams,
        max_range: args.max_range,
        noise_stddev: args.noise,
        ..Default::default()
    };
    let cloud = cast_scan(&env, &cfg, args.seed)?;
    save_cloud(&cloud, &args.out)?;
    println!("environment: {}", env.name());
    println!("points: {}", cloud.len());
    if let Some(k) = expected {
        println!("expected junctions: {k}");
    }
    if let Some(path) = &args.svg {
        let params = DetectorParams {
            rng_seed: args.seed,
            ..Default::default()
        };
        let report = detect_junctions(&cloud, &params)?;
        render_svg(&cloud, &report.labels, path)?;
    }
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<()> {
    if args.repeat == 0 {
        return Err(junction_core::Error::InvalidParam {
            field: "repeat",
            reason: "--repeat must be at least 1".into(),
        });
    }
    let file_cloud = match (&args.input, args.format) {
        (Some(path), Some(format)) => Some(load_cloud_with_range(path, format, None)?),
        _ => None,
    };
    let mut times = Vec::with_capacity(args.repeat);
    let mut last = None;
    for _ in 0..args.repeat {
        let (report, expected) = match (&file_cloud, &args.scenario) {
            (Some(cloud), _) => (detect_junctions(cloud, &DetectorParams::default())?, None),
            (None, Some(name)) => {
                let (r, k) =
                    detect_on_scenario(name, &DetectorParams::default(), args.noise, args.seed)?;
                (r, Some(k))
            }
            (None, None) => unreachable!("clap requires --scenario or --input"),
        };
        times.push(report.runtime_seconds);
        last = Some((report, expected));
    }
    let (report, expected) = last.expect("repeat >= 1");
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    let min = times.iter().copied().fold(f64::INFINITY, f64::min);
    let max = times.iter().copied().fold(0.0, f64::max);
    match (&args.scenario, &args.input) {
        (Some(name), _) => println!("scenario: {name}"),
        (None, Some(path)) => println!("input: {}", path.display()),
        (None, None) => {}
    }
    println!("points: {}", report.labels.len());
    match expected {
        Some(k) => println!("junctions: {} (expected {k})", report.num_junctions),
        None => println!("junctions: {}", report.num_junctions),
    }
    println!("runs: {}", times.len());
    println!("mean: {mean:.6} s");
    println!("min: {min:.6} s");
    println!("max: {max:.6} s");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout with status 0; usage errors exit 2.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Detect(args) => detect(args),
        Command::Simulate(args) => simulate(args),
        Command::Bench(args) => bench(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
