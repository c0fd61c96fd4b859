use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyclicpoly::analytic::{density_by_name, AnalyticDensity, MOMENTS};
use cyclicpoly::claims::{self, all_proved_pass, ClaimResult, RunOptions};
use cyclicpoly::polygon::{measure, sample_central_angles, RngStream};
use cyclicpoly::special::QuadratureSpec;

#[derive(Parser)]
#[command(
    name = "cyclicpoly",
    version,
    about = "Random cyclic polygons: sampling, densities and claim checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw uniform random cyclic polygons and write their geometry
    Sample(SampleArgs),
    /// Tabulate an analytic density on a grid
    Density(DensityArgs),
    /// List the closed-form moments and correlations
    Moments(OutputArgs),
    /// Run claims and write a JSON report
    Verify(VerifyArgs),
    /// Run claims and write a one-line-per-claim summary table
    Report(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// number of polygons
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// number of vertices
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(3..=6))]
    order: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DensityArgs {
    /// registered density name, e.g. side, tent, triangle_area
    #[arg(long)]
    density: String,
    /// grid points per axis (default 512 in 1-D, 64 in 2-D, 16 in 3-D)
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    grid: Option<u32>,
    /// also tabulate the cdf (1-D densities only)
    #[arg(long)]
    cdf: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// comma-separated claim ids (all claims when omitted)
    #[arg(long, value_delimiter = ',')]
    claims: Vec<String>,
    /// sample size for every selected claim (registry defaults when omitted)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    workers: Option<u32>,
    /// bins per axis for 2-D and 3-D histograms: `B2[,B3]`
    #[arg(long, value_delimiter = ',', num_args = 1..=2)]
    bins: Vec<usize>,
    /// report elapsed_seconds as 0 so repeated runs are byte-identical
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                Failure::Usage(format!("cannot write {}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes a rectangular table as CSV or as `{"columns": [...], "rows": [[...]]}`.
fn write_table(output: &OutputArgs, header: &[String], rows: &[Vec<f64>]) -> Result<(), Failure> {
    let mut w = open_output(&output.out)?;
    match output.format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(header)?;
            for row in rows {
                csv.write_record(row.iter().map(|v| v.to_string()))?;
            }
            csv.flush()?;
        }
        Format::Json => {
            serde_json::to_writer(&mut w, &json!({ "columns": header, "rows": rows }))?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_sample(args: &SampleArgs) -> Result<(), Failure> {
    let order = usize::from(args.order);
    let names = |prefix: &'static str| (1..=order).map(move |k| format!("{prefix}_{k}"));
    let mut header: Vec<String> = names("theta").chain(names("s")).chain(names("alpha")).collect();
    if order == 4 {
        header.extend(["d_1", "d_2", "omega"].map(String::from));
    }
    header.extend(["perimeter", "area"].map(String::from));

    let mut rng = RngStream::new(args.seed, 0).generator();
    let rows = (0..args.n)
        .map(|_| {
            let poly = sample_central_angles(order, &mut rng).map_err(|e| Failure::Usage(e.to_string()))?;
            let m = measure(&poly);
            let mut row: Vec<f64> = poly.theta().to_vec();
            row.extend(&m.sides);
            row.extend(&m.angles);
            if let (Some(d), Some(w)) = (m.diagonals, m.omega) {
                row.extend(d);
                row.push(w);
            }
            row.extend([m.perimeter, m.area]);
            Ok(row)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    write_table(&args.output, &header, &rows)
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> + Clone {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(move |i| if i + 1 == points { hi } else { lo + step * i as f64 })
}

fn cmd_density(args: &DensityArgs) -> Result<(), Failure> {
    let density = density_by_name(&args.density).map_err(|e| Failure::Usage(e.to_string()))?;
    if args.cdf && !matches!(density, AnalyticDensity::D1(_)) {
        return Err(Failure::Usage("--cdf applies to 1-D densities only".into()));
    }
    let points = |default: usize| args.grid.map_or(default, |g| g as usize);
    let (header, rows): (Vec<&str>, Vec<Vec<f64>>) = match &density {
        AnalyticDensity::D1(d) => {
            // stop just short of the upper end, where several laws are singular
            let (lo, hi) = d.support;
            let hi = hi - 1e-6 * (hi - lo);
            let spec = QuadratureSpec::default();
            let rows = grid(lo, hi, points(512))
                .map(|x| {
                    let mut row = vec![x, d.pdf(x)];
                    if args.cdf {
                        row.push(d.cdf(x, &spec).map_err(|e| Failure::Runtime(e.to_string()))?);
                    }
                    Ok(row)
                })
                .collect::<Result<_, Failure>>()?;
            let header = if args.cdf {
                vec!["x", "pdf", "cdf"]
            } else {
                vec!["x", "pdf"]
            };
            (header, rows)
        }
        AnalyticDensity::D2(d) => {
            let k = points(64);
            let xs = grid(d.lo[0], d.hi[0], k);
            let rows = xs
                .flat_map(|x| grid(d.lo[1], d.hi[1], k).map(move |y| (x, y)))
                .map(|(x, y)| vec![x, y, d.pdf([x, y])])
                .collect();
            (vec!["x", "y", "pdf"], rows)
        }
        AnalyticDensity::D3(d) => {
            let k = points(16);
            let mut rows = Vec::with_capacity(k * k * k);
            for x in grid(d.lo[0], d.hi[0], k) {
                for y in grid(d.lo[1], d.hi[1], k) {
                    for z in grid(d.lo[2], d.hi[2], k) {
                        rows.push(vec![x, y, z, d.pdf([x, y, z])]);
                    }
                }
            }
            (vec!["x", "y", "z", "pdf"], rows)
        }
    };
    let header: Vec<String> = header.into_iter().map(String::from).collect();
    write_table(&args.output, &header, &rows)
}

fn cmd_moments(output: &OutputArgs) -> Result<(), Failure> {
    let mut w = open_output(&output.out)?;
    match output.format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(["id", "expression", "location", "conjecture", "value"])?;
            for m in MOMENTS {
                let conjecture = m.conjecture.to_string();
                let value = m.value().to_string();
                csv.write_record([m.id, m.expression, m.location, &conjecture, &value])?;
            }
            csv.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = MOMENTS
                .iter()
                .map(|m| {
                    json!({
                        "id": m.id,
                        "expression": m.expression,
                        "location": m.location,
                        "conjecture": m.conjecture,
                        "value": m.value(),
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut w, &rows)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_options(args: &VerifyArgs) -> RunOptions {
    let mut opts = RunOptions::default();
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    if let Some(workers) = args.workers {
        opts.workers = workers as usize;
    }
    if let Some(&b) = args.bins.first() {
        opts.bins_2d = b;
    }
    if let Some(&b) = args.bins.get(1) {
        opts.bins_3d = b;
    }
    opts.record_timing = !args.no_timing;
    opts
}

fn run_requested(args: &VerifyArgs) -> Result<Vec<ClaimResult>, Failure> {
    let ids: Vec<String> = args
        .claims
        .iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    if args.bins.iter().any(|&b| b < 2) {
        return Err(Failure::Usage("--bins needs at least 2 bins per axis".into()));
    }
    let n = args.n.map(|n| n as usize);
    claims::run_selected(&ids, n, &run_options(args)).map_err(|e| Failure::Usage(e.to_string()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.6e}"))
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let results = run_requested(args)?;
    for r in &results {
        if let Some(e) = &r.error {
            eprintln!("{}: {e}", r.claim_id);
        }
    }
    let mut w = open_output(&args.output.out)?;
    match args.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &results)?;
            writeln!(w)?;
        }
        Format::Csv => write_results_csv(&mut w, &results)?,
    }
    w.flush()?;
    Ok(all_proved_pass(&results))
}

fn write_results_csv(w: &mut dyn Write, results: &[ClaimResult]) -> Result<(), Failure> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "claim_id",
        "description",
        "paper_location",
        "conjecture",
        "kind",
        "analytic",
        "estimate",
        "stderr",
        "statistic",
        "pass",
        "n_samples",
        "seed",
        "workers",
        "elapsed_seconds",
    ])?;
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    for r in results {
        csv.write_record([
            r.claim_id.clone(),
            r.description.clone(),
            r.paper_location.clone(),
            r.conjecture.to_string(),
            r.kind.as_str().to_string(),
            opt(r.analytic),
            opt(r.estimate),
            opt(r.stderr),
            opt(r.statistic),
            r.pass.to_string(),
            r.n_samples.to_string(),
            r.seed.to_string(),
            r.workers.to_string(),
            r.elapsed_seconds.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

fn cmd_report(args: &VerifyArgs) -> Result<bool, Failure> {
    let results = run_requested(args)?;
    let mut w = open_output(&args.output.out)?;
    if args.output.format == Format::Csv {
        write_results_csv(&mut w, &results)?;
    } else {
        writeln!(
            w,
            "{:<26} {:<11} {:>5} {:>14} {:>14} {:>12} {:>11} {:>9}  location",
            "claim", "kind", "pass", "analytic", "estimate", "stderr", "statistic", "n"
        )?;
        for r in &results {
            let status = match (r.pass, r.conjecture) {
                (true, _) => "ok",
                (false, true) => "adv",
                (false, false) => "FAIL",
            };
            writeln!(
                w,
                "{:<26} {:<11} {:>5} {:>14} {:>14} {:>12} {:>11} {:>9}  {}",
                r.claim_id,
                r.kind.as_str(),
                status,
                fmt_opt(r.analytic),
                fmt_opt(r.estimate),
                fmt_opt(r.stderr),
                r.statistic.map_or_else(|| "-".into(), |s| format!("{s:.4}")),
                r.n_samples,
                r.paper_location,
            )?;
            if let Some(e) = &r.error {
                writeln!(w, "    error: {e}")?;
            }
            if let Some(n) = &r.notes {
                writeln!(w, "    {n}")?;
            }
        }
        let failed: Vec<&str> = results
            .iter()
            .filter(|r| !r.pass && !r.conjecture)
            .map(|r| r.claim_id.as_str())
            .collect();
        let conjectures = results.iter().filter(|r| r.conjecture).count();
        writeln!(
            w,
            "{} claims, {} conjecture (advisory), {} failed{}",
            results.len(),
            conjectures,
            failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(": {}", failed.join(", "))
            }
        )?;
    }
    w.flush()?;
    Ok(all_proved_pass(&results))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sample(a) => cmd_sample(a).map(|_| true),
        Command::Density(a) => cmd_density(a).map(|_| true),
        Command::Moments(a) => cmd_moments(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
