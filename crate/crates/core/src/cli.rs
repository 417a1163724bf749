//! Command-line front end: `compress`, `complete`, `superres`, `bench` and
//! `bounds`.
//!
//! Every run emits [`RunRecord`] rows as CSV on stdout (or an aligned table
//! with `--table`) and appends them to `--csv FILE` when given. Exit codes:
//! 0 success, 1 usage, 2 numerical failure, 3 I/O.

use std::ffi::OsString;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{Side, BLOCK_BUDGET_EXPONENT_NOTE};
use crate::completion::{complete, hidden_relative_error, random_mask, superres_mask, CompletionProblem, Mask};
use crate::error::Error;
use crate::experiment::{run_bench, theoretical_bound, trial_seed, BenchConfig, SpectrumSpec, bounded_sides};
use crate::imgio::{image_to_quat, load_image, psnr, quat_to_image, save_image, zero_order_hold, ColorImage};
use crate::sketch::{low_rank_project, Algorithm, SketchConfig};
use crate::synthetic::{low_rank_image, natural_scene};

pub const OUT_DIR_ENV: &str = "QUATPASS_OUT_DIR";

pub const CSV_HEADER: [&str; 13] = [
    "command",
    "algorithm",
    "k",
    "p",
    "passes",
    "seed",
    "seconds",
    "metric_name",
    "metric_value",
    "bound_value",
    "baseline_value",
    "params",
    "outputs",
];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io(_) | Error::Image(_) => CliError::Io(msg),
            Error::Shape(_)
            | Error::Rank(_)
            | Error::PassBudget(_)
            | Error::Mask(_)
            | Error::BoundPrecondition(_) => CliError::Usage(msg),
            Error::DivisionByZero | Error::InvalidRotor { .. } | Error::NotAdjoint { .. } => {
                CliError::Numeric(msg)
            }
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub command: String,
    pub algorithm: String,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub passes: Option<usize>,
    pub seed: Option<u64>,
    pub seconds: f64,
    pub metric_name: String,
    pub metric_value: f64,
    pub bound_value: Option<f64>,
    pub baseline_value: Option<f64>,
    /// `key=value` pairs joined by `;`.
    pub params: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
}

/// Shortest round-trip form, switching to exponent notation outside
/// `[1e-4, 1e6)`.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e6).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunRecord {
    fn new(command: &str, metric_name: &str, metric_value: f64) -> Self {
        Self {
            command: command.into(),
            algorithm: String::new(),
            k: None,
            p: None,
            passes: None,
            seed: None,
            seconds: 0.0,
            metric_name: metric_name.into(),
            metric_value,
            bound_value: None,
            baseline_value: None,
            params: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn fields(&self) -> [String; 13] {
        [
            self.command.clone(),
            self.algorithm.clone(),
            opt(self.k),
            opt(self.p),
            opt(self.passes),
            opt(self.seed),
            format!("{:.6}", self.seconds),
            self.metric_name.clone(),
            format_number(self.metric_value),
            self.bound_value.map(format_number).unwrap_or_default(),
            self.baseline_value.map(format_number).unwrap_or_default(),
            self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";"),
            self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(";"),
        ]
    }
}

#[derive(Debug, Parser)]
#[command(name = "quatpass", version, about = "Pass-efficient randomized SVD for quaternion matrices and color images")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Low-rank compression of a color image.
    Compress(CompressArgs),
    /// Inpaint an image with missing pixels.
    Complete(CompleteArgs),
    /// Upsample by treating the missing grid as a completion problem.
    Superres(SuperresArgs),
    /// Measure projection errors against the theoretical bounds.
    Bench(BenchArgs),
    /// Evaluate the theoretical bounds without running anything.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Directory for images and traces.
    #[arg(long, env = OUT_DIR_ENV, default_value = "quatpass-out")]
    out: PathBuf,
    /// Append records to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print an aligned table instead of CSV on stdout.
    #[arg(long)]
    table: bool,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Algorithm: 1 subspace iteration, 2 arbitrary pass, 3 block Krylov,
    /// 4 block arbitrary pass.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    alg: Option<u8>,
    /// Target rank.
    #[arg(long, short = 'k')]
    rank: Option<usize>,
    /// Oversampling.
    #[arg(long, short = 'p', default_value_t = 5)]
    oversample: usize,
    /// Pass budget `v`.
    #[arg(long, conflicts_with = "power")]
    passes: Option<usize>,
    /// Power parameter `q`.
    #[arg(long)]
    power: Option<usize>,
    /// Seed for every random draw; printed when generated.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct CompressArgs {
    /// Image path, `synthetic:scene[:SEED]` or `synthetic:lowrank:RANK[:SEED]`.
    #[arg(long)]
    input: String,
    /// Resize to SIZE x SIZE with bilinear interpolation; 0 keeps the size.
    #[arg(long, default_value_t = 256)]
    size: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CompleteArgs {
    #[arg(long)]
    input: String,
    #[arg(long, default_value_t = 256)]
    size: usize,
    /// `random:FRACTION` (fraction missing) or `file:PATH` (bright = observed).
    #[arg(long, default_value = "random:0.7")]
    mask: String,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Gaussian smoothing sigma in pixels; 0 disables.
    #[arg(long, default_value_t = 0.6)]
    smoothing: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SuperresArgs {
    #[arg(long)]
    input: String,
    #[arg(long, default_value_t = 256)]
    size: usize,
    #[arg(long, default_value_t = 4)]
    factor: usize,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    #[arg(long, default_value_t = 0.6)]
    smoothing: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// `power:E`, `geometric:R` or `rank:K`.
    #[arg(long, default_value = "power:2")]
    spectrum: String,
    #[arg(long, default_value_t = 200)]
    rows: usize,
    #[arg(long, default_value_t = 200)]
    cols: usize,
    /// Comma-separated algorithm numbers.
    #[arg(long, default_value = "1,2,3,4")]
    algs: String,
    #[arg(long, short = 'k', default_value_t = 10)]
    rank: usize,
    #[arg(long, short = 'p', default_value_t = 5)]
    oversample: usize,
    /// Pass budgets: `2-6` or `2,4,6`.
    #[arg(long, default_value = "2-6")]
    passes: String,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, default_value = "power:2")]
    spectrum: String,
    /// Number of singular values.
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, default_value = "1,2,3,4")]
    algs: String,
    #[arg(long, short = 'k', default_value_t = 10)]
    rank: usize,
    #[arg(long, short = 'p', default_value_t = 5)]
    oversample: usize,
    #[arg(long, default_value = "2-6")]
    passes: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
        let s = (nanos as u64) ^ (u64::from(std::process::id()) << 32);
        eprintln!("seed: {s}");
        s
    })
}

fn algorithm(n: Option<u8>, default: Algorithm) -> Algorithm {
    n.and_then(Algorithm::from_number).unwrap_or(default)
}

/// Power for algorithms 1 and 3, passes for 2 and 4. A power given to a
/// budget method means the matching budget `2q + 2`.
fn resolve_param(alg: Algorithm, s: &SolverArgs, default_passes: usize) -> CliResult<usize> {
    Ok(match (alg.uses_power(), s.passes, s.power) {
        (true, _, Some(q)) => q,
        (true, Some(v), None) => alg.parameter_for_passes(v)?,
        (false, Some(v), _) => v,
        (false, None, Some(q)) => Algorithm::SubspaceIteration.passes_for_parameter(q),
        (true, None, None) => alg.parameter_for_passes(default_passes)?,
        (false, None, None) => default_passes,
    })
}

fn parse_list(text: &str) -> CliResult<Vec<usize>> {
    let bad = || usage(format!("cannot parse list '{text}'"));
    if let Some((a, b)) = text.split_once('-') {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn parse_algorithms(text: &str) -> CliResult<Vec<Algorithm>> {
    text.split(',')
        .map(|t| t.trim().parse::<Algorithm>().map_err(|_| usage(format!("unknown algorithm '{t}'"))))
        .collect()
}

fn parse_spectrum(text: &str) -> CliResult<SpectrumSpec> {
    text.parse().map_err(|e: Error| usage(e.to_string()))
}

fn load_source(input: &str, size: usize) -> CliResult<ColorImage> {
    let dims = if size == 0 { None } else { Some((size, size)) };
    let synthetic_size = if size == 0 { 256 } else { size };
    if let Some(rest) = input.strip_prefix("synthetic:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let num = |i: usize, default: u64| -> CliResult<u64> {
            parts.get(i).map_or(Ok(default), |t| t.parse().map_err(|_| usage(format!("bad synthetic source '{input}'"))))
        };
        return match parts[0] {
            "scene" => Ok(natural_scene(synthetic_size, synthetic_size, num(1, 0)?)),
            "lowrank" => {
                let rank = num(1, 30)? as usize;
                if rank == 0 {
                    return Err(usage("synthetic low-rank image needs rank >= 1"));
                }
                Ok(low_rank_image(synthetic_size, synthetic_size, rank, num(2, 0)?))
            }
            _ => Err(usage(format!("unknown synthetic source '{input}'"))),
        };
    }
    Ok(load_image(input, dims)?)
}

fn parse_mask(spec: &str, rows: usize, cols: usize, seed: u64) -> CliResult<Mask> {
    if let Some(f) = spec.strip_prefix("random:") {
        let fraction: f64 = f.parse().map_err(|_| usage(format!("bad mask fraction '{f}'")))?;
        return Ok(random_mask(rows, cols, fraction, seed)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let img = image::open(path).map_err(Error::from)?.to_luma8();
        if (img.height() as usize, img.width() as usize) != (rows, cols) {
            return Err(usage(format!(
                "mask is {}x{} but image is {rows}x{cols}",
                img.height(),
                img.width()
            )));
        }
        return Ok(Mask::from_fn(rows, cols, |i, j| img.get_pixel(j as u32, i as u32).0[0] > 127));
    }
    Err(usage(format!("mask must be random:FRACTION or file:PATH, got '{spec}'")))
}

fn prepare_out(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn resize_note(size: usize) -> String {
    if size == 0 {
        "none".into()
    } else {
        format!("bilinear:{size}x{size}")
    }
}

fn cmd_compress(a: &CompressArgs) -> CliResult<Vec<RunRecord>> {
    let alg = algorithm(a.solver.alg, Algorithm::SubspaceIteration);
    let k = a.solver.rank.unwrap_or(30);
    // defaults: q = 1 (four passes) or v = 3
    let param = resolve_param(alg, &a.solver, if alg.uses_power() { 4 } else { 3 })?;
    let seed = resolve_seed(a.solver.seed);
    let reference = load_source(&a.input, a.size)?.quantized();
    let x = image_to_quat(&reference);
    let cfg = SketchConfig::new(k, a.solver.oversample, seed);

    let start = Instant::now();
    let result = alg.run(&x, &cfg, param)?;
    let approx = low_rank_project(&x, &result)?;
    let seconds = start.elapsed().as_secs_f64();

    let recon = quat_to_image(&approx).quantized();
    let value = psnr(&recon, &reference)?;
    let rel = x.sub(&approx)?.frobenius_norm() / x.frobenius_norm().max(f64::MIN_POSITIVE);
    prepare_out(&a.output.out)?;
    let path = a.output.out.join(format!("compress-{alg}-k{k}.png"));
    save_image(&recon, &path)?;

    let mut r = RunRecord::new("compress", "psnr", value)
        .param("input", &a.input)
        .param("resize", resize_note(a.size))
        .param("param", param)
        .param("rel_frobenius_error", format_number(rel));
    r.algorithm = alg.to_string();
    r.k = Some(k);
    r.p = Some(a.solver.oversample);
    r.passes = Some(result.passes_used);
    r.seed = Some(seed);
    r.seconds = seconds;
    r.outputs = vec![path];
    Ok(vec![r])
}

struct CompletionRun {
    record: RunRecord,
    reference: ColorImage,
    mask: Mask,
}

#[allow(clippy::too_many_arguments)]
fn run_completion(
    command: &str,
    input: &str,
    size: usize,
    mask_for: impl FnOnce(usize, usize, u64) -> CliResult<(Mask, String)>,
    default_rank: usize,
    iters: usize,
    tol: f64,
    smoothing: f64,
    solver: &SolverArgs,
    out: &Path,
) -> CliResult<CompletionRun> {
    let alg = algorithm(solver.alg, Algorithm::ArbitraryPass);
    let param = resolve_param(alg, solver, 2)?;
    let rank = solver.rank.unwrap_or(default_rank);
    let seed = resolve_seed(solver.seed);
    if iters == 0 {
        return Err(usage("--iters must be positive"));
    }
    if tol.is_nan() || tol < 0.0 || smoothing.is_nan() || smoothing < 0.0 {
        return Err(usage("--tol and --smoothing must be nonnegative"));
    }
    let reference = load_source(input, size)?.quantized();
    let x = image_to_quat(&reference);
    let (mask, mask_note) = mask_for(reference.height(), reference.width(), seed)?;
    let problem = CompletionProblem::new(&x, mask.clone(), rank)?
        .with_solver(alg, param)
        .with_smoothing(smoothing)
        .with_stopping(iters, tol)
        .with_seed(seed)
        .with_oversample(solver.oversample);

    let start = Instant::now();
    let trace = complete(&problem)?;
    let seconds = start.elapsed().as_secs_f64();

    let recovered = quat_to_image(&trace.estimate).quantized();
    let hidden = hidden_relative_error(&trace.estimate, &x, &mask)?;
    prepare_out(out)?;
    let recovered_path = out.join(format!("{command}-recovered.png"));
    save_image(&recovered, &recovered_path)?;
    let trace_path = out.join(format!("{command}-trace.csv"));
    let mut w = csv::Writer::from_path(&trace_path)?;
    w.write_record(["iteration", "relative_change"])?;
    for (i, c) in trace.changes.iter().enumerate() {
        w.write_record([(i + 1).to_string(), format_number(*c)])?;
    }
    w.flush()?;

    let mut r = RunRecord::new(command, "psnr", psnr(&recovered, &reference)?)
        .param("input", input)
        .param("resize", resize_note(size))
        .param("mask", mask_note)
        .param("param", param)
        .param("iterations", trace.iterations)
        .param("tol", format_number(tol))
        .param("smoothing", format_number(smoothing))
        .param("hidden_rel_error", format_number(hidden));
    r.algorithm = alg.to_string();
    r.k = Some(rank);
    r.p = Some(solver.oversample);
    r.passes = Some(alg.passes_for_parameter(param));
    r.seed = Some(seed);
    r.seconds = seconds;
    r.outputs = vec![recovered_path, trace_path];
    Ok(CompletionRun { record: r, reference, mask })
}

fn cmd_complete(a: &CompleteArgs) -> CliResult<Vec<RunRecord>> {
    let mut run = run_completion(
        "complete",
        &a.input,
        a.size,
        |h, w, seed| Ok((parse_mask(&a.mask, h, w, seed)?, a.mask.clone())),
        30,
        a.iters,
        a.tol,
        a.smoothing,
        &a.solver,
        &a.output.out,
    )?;
    // zero-filled input as the baseline
    let zero_filled = ColorImage::from_fn(run.reference.height(), run.reference.width(), |y, x| {
        if run.mask.is_observed(y, x) {
            run.reference.pixel(y, x)
        } else {
            [0.0; 3]
        }
    });
    let path = a.output.out.join("complete-masked.png");
    save_image(&zero_filled, &path)?;
    run.record.baseline_value = Some(psnr(&zero_filled, &run.reference)?);
    run.record.outputs.insert(0, path);
    Ok(vec![run.record])
}

fn cmd_superres(a: &SuperresArgs) -> CliResult<Vec<RunRecord>> {
    let factor = a.factor;
    let mut run = run_completion(
        "superres",
        &a.input,
        a.size,
        |h, w, _| Ok((superres_mask(h, w, factor)?, format!("superres:{factor}"))),
        2,
        a.iters,
        a.tol,
        a.smoothing,
        &a.solver,
        &a.output.out,
    )?;
    let reference = &run.reference;
    let low = ColorImage::from_fn(reference.height().div_ceil(factor), reference.width().div_ceil(factor), |y, x| {
        reference.pixel(y * factor, x * factor)
    });
    let held = zero_order_hold(reference, factor);
    let low_path = a.output.out.join("superres-lowres.png");
    let held_path = a.output.out.join("superres-zero-order-hold.png");
    save_image(&low, &low_path)?;
    save_image(&held, &held_path)?;
    run.record.baseline_value = Some(psnr(&held, reference)?);
    run.record = run.record.param("baseline", "zero_order_hold");
    run.record.outputs.splice(0..0, [low_path, held_path]);
    Ok(vec![run.record])
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn cmd_bench(a: &BenchArgs) -> CliResult<Vec<RunRecord>> {
    let spectrum = parse_spectrum(&a.spectrum)?;
    let seed = resolve_seed(a.seed);
    if a.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let cfg = BenchConfig {
        spectrum,
        rows: a.rows,
        cols: a.cols,
        algorithms: parse_algorithms(&a.algs)?,
        rank: a.rank,
        oversample: a.oversample,
        passes: parse_list(&a.passes)?,
        trials: a.trials,
        seed,
    };
    let mut records = Vec::new();
    for row in run_bench(&cfg)? {
        let side = side_name(row.side);
        let base = |name: String, value: f64| {
            let mut r = RunRecord::new("bench", &name, value)
                .param("spectrum", spectrum)
                .param("size", format!("{}x{}", a.rows, a.cols))
                .param("param", row.param);
            r.algorithm = row.algorithm.to_string();
            r.k = Some(a.rank);
            r.p = Some(a.oversample);
            r.passes = Some(row.passes);
            r.bound_value = Some(row.bound);
            r
        };
        for (t, &e) in row.errors.iter().enumerate() {
            let mut r = base(format!("{side}_error"), e).param("trial", t);
            r.seed = Some(trial_seed(seed, t));
            r.seconds = row.seconds / a.trials as f64;
            records.push(r);
        }
        let mut r = base(format!("mean_{side}_error"), row.mean)
            .param("trials", a.trials)
            .param("within_bound", row.within_bound());
        r.seed = Some(seed);
        r.seconds = row.seconds;
        records.push(r);
    }
    Ok(records)
}

fn cmd_bounds(a: &BoundsArgs) -> CliResult<Vec<RunRecord>> {
    let spectrum = parse_spectrum(&a.spectrum)?;
    let profile = spectrum.profile(a.n);
    let mut records = Vec::new();
    for alg in parse_algorithms(&a.algs)? {
        for passes in parse_list(&a.passes)? {
            let Ok(param) = alg.parameter_for_passes(passes) else { continue };
            for &side in bounded_sides(alg) {
                let start = Instant::now();
                let bound = theoretical_bound(alg, &profile, a.rank, a.oversample, param, side)?;
                let mut r = RunRecord::new("bounds", &format!("{}_bound", side_name(side)), bound)
                    .param("spectrum", spectrum)
                    .param("n", a.n)
                    .param("param", param);
                if alg == Algorithm::BlockArbitraryPass {
                    r = r.param("note", BLOCK_BUDGET_EXPONENT_NOTE);
                }
                r.algorithm = alg.to_string();
                r.k = Some(a.rank);
                r.p = Some(a.oversample);
                r.passes = Some(passes);
                r.bound_value = Some(bound);
                r.seconds = start.elapsed().as_secs_f64();
                records.push(r);
            }
        }
    }
    Ok(records)
}

fn write_csv(records: &[RunRecord], out: impl Write, header: bool) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    if header {
        w.write_record(CSV_HEADER)?;
    }
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

fn format_metric(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into())
}

fn write_table(records: &[RunRecord], mut out: impl Write) -> io::Result<()> {
    writeln!(
        out,
        "{:<10} {:<5} {:>4} {:>3} {:>6} {:>10} {:<18} {:>13} {:>13} {:>13}",
        "command", "alg", "k", "p", "passes", "seconds", "metric", "value", "bound", "baseline"
    )?;
    for r in records {
        writeln!(
            out,
            "{:<10} {:<5} {:>4} {:>3} {:>6} {:>10.4} {:<18} {:>13} {:>13} {:>13}",
            r.command,
            r.algorithm,
            opt(r.k),
            opt(r.p),
            opt(r.passes),
            r.seconds,
            r.metric_name,
            format_metric(Some(r.metric_value)),
            format_metric(r.bound_value),
            format_metric(r.baseline_value),
        )?;
    }
    Ok(())
}

fn emit(records: &[RunRecord], output: &OutputArgs) -> CliResult<()> {
    if let Some(path) = &output.csv {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let fresh = file.metadata()?.len() == 0;
        write_csv(records, file, fresh)?;
    }
    let stdout = io::stdout().lock();
    if output.table {
        write_table(records, stdout)?;
    } else {
        write_csv(records, stdout, true)?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let (records, output) = match &cli.command {
        Command::Compress(a) => (cmd_compress(a)?, &a.output),
        Command::Complete(a) => (cmd_complete(a)?, &a.output),
        Command::Superres(a) => (cmd_superres(a)?, &a.output),
        Command::Bench(a) => (cmd_bench(a)?, &a.output),
        Command::Bounds(a) => (cmd_bounds(a)?, &a.output),
    };
    emit(&records, output)
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
