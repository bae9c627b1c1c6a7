//! `mandelmat` command-line front end.
//!
//! Exit status: 0 when everything requested succeeded and every check
//! passed, 1 when a check failed or a computation/IO error occurred,
//! 2 on invalid flags.

mod export;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mandelmat::homotopy::{self, DEFAULT_STEPS, DEFAULT_TRACK_TOL};
use mandelmat::io::{self, MatrixMeta};
use mandelmat::matgen::{
    anti_identity, dimension, jordan_wielandt, mandelbrot_inverse, mandelbrot_matrix, s_matrix,
    DigraphEdgeList, SparseIntMatrix,
};
use mandelmat::perronvec::{self, EigvecResult, Normalization};
use mandelmat::plotdata;
use mandelmat::polyeval::{self, NEWTON_MAX_ITER, NEWTON_TOL};
use mandelmat::spectra::{self, DEFAULT_TRIPLE_TOL};
use serde::Serialize;

const SCHEMAS: &str = "\
CSV schemas (header row first, one record per line):
  eigvec    index,component,log2_component
  singvec   index,abs_u,log2_abs_u
  spectrum  re,im
  svals     n,index,log2_index,sigma
  homotopy  stage,path_id,t,abs_lambda,lambda_squared,bound
Indices are 1-based; t = stage + eps; bound is 2.0193 t - 0.7914.";

#[derive(Parser, Debug)]
#[command(name = "mandelmat", version, about = "Mandelbrot matrices: generation, spectra, checks", after_help = SCHEMAS)]
struct Cli {
    /// Directory for outputs when --out is not given.
    #[arg(long, global = true, env = "MANDELMAT_OUT_DIR", value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a matrix (Matrix Market + JSON sidecar, DOT digraph, or JSON).
    Gen(GenArgs),
    /// Perron root of M_n by Newton's method from the asymptotic seed.
    Perron(PerronArgs),
    /// Dominant eigenvector of M_n.
    #[command(after_help = SCHEMAS)]
    Eigvec(EigvecArgs),
    /// Dominant singular triple of M_n by power iteration on S_n.
    #[command(after_help = SCHEMAS)]
    Svd(SvdArgs),
    /// All singular values of M_n for a range of orders.
    #[command(after_help = SCHEMAS)]
    Svals(SvalsArgs),
    /// All eigenvalues of M_n (roots of C_n).
    #[command(after_help = SCHEMAS)]
    Spectrum(SpectrumArgs),
    /// Track eigenvalues of T(eps) from eps = 0 to 1.
    Homotopy(HomotopyArgs),
    /// Run the invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Write plot data as CSV.
    #[command(after_help = SCHEMAS)]
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output file; `-` for stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Mm,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Mandelbrot,
    S,
    AntiIdentity,
    JordanWielandt,
    Inverse,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum NormArg {
    #[value(alias = "last-entry-one")]
    Last,
    #[value(alias = "first-entry-one")]
    First,
}

impl From<NormArg> for Normalization {
    fn from(a: NormArg) -> Self {
        match a {
            NormArg::Last => Normalization::LastEntryOne,
            NormArg::First => Normalization::FirstEntryOne,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Solve,
    Recursive,
    /// Recursion in double-double at a polished root.
    Precise,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "mandelbrot")]
    kind: Kind,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct PerronArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct EigvecArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "last")]
    normalization: NormArg,
    #[arg(long, value_enum, default_value = "solve")]
    method: Method,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SvdArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SvalsArgs {
    /// First order.
    #[arg(long)]
    n: usize,
    /// Last order (defaults to --n).
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    allow_large: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    allow_large: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct HomotopyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    allow_large: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    /// Residual tolerance for the singular-triple rows.
    #[arg(long)]
    tol: Option<f64>,
    /// Permit orders above 14.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long, value_enum)]
    kind: export::PlotKind,
    #[arg(long)]
    n: usize,
    /// Last order for `svals`; largest stage for `homotopy`.
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long, value_enum, default_value = "first")]
    normalization: NormArg,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    allow_large: bool,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    gnuplot: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failures reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

enum Outcome {
    Pass,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    if e.downcast_ref::<Usage>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<mandelmat::Error>(),
        Some(mandelmat::Error::InvalidOrder(_) | mandelmat::Error::SizeLimit { .. } | mandelmat::Error::Domain(_))
    )
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Gen(a) => gen(a, dir),
        Command::Perron(a) => perron(a, dir),
        Command::Eigvec(a) => eigvec(a, dir),
        Command::Svd(a) => svd(a, dir),
        Command::Svals(a) => svals(a, dir),
        Command::Spectrum(a) => spectrum(a, dir),
        Command::Homotopy(a) => homotopy_cmd(a, dir),
        Command::Verify(a) => {
            let tol = positive_tol(a.tol, DEFAULT_TRIPLE_TOL)?;
            if a.max_n == 0 {
                return Err(usage("--max-n must be at least 1"));
            }
            if a.max_n > verify::DEFAULT_CEILING && !a.allow_large {
                return Err(usage(format!(
                    "--max-n {} exceeds {}; pass --allow-large",
                    a.max_n,
                    verify::DEFAULT_CEILING
                )));
            }
            let report = verify::run(a.max_n, tol);
            print!("{}", report.render());
            Ok(if report.all_pass() { Outcome::Pass } else { Outcome::CheckFailed })
        }
        Command::Export(a) => export::run(a, dir),
    }
}

fn positive_tol(tol: Option<f64>, default: f64) -> anyhow::Result<f64> {
    match tol {
        None => Ok(default),
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(usage(format!("--tol must be positive, got {t}"))),
    }
}

fn check_format(given: Option<Format>, allowed: &[Format], default: Format) -> anyhow::Result<Format> {
    let f = given.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage(format!("format {f:?} is not valid here; choose one of {allowed:?}")))
    }
}

/// Where an output goes: an explicit `--out`, else the output directory
/// under `default_name`, else stdout.
fn destination(out: Option<&Path>, dir: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    match out {
        Some(p) if p == Path::new("-") => None,
        Some(p) => Some(p.to_path_buf()),
        None => dir.map(|d| d.join(default_name)),
    }
}

/// Writes `text` to its destination and returns the path written, if any.
fn emit(text: &str, out: Option<&Path>, dir: Option<&Path>, default_name: &str) -> anyhow::Result<Option<PathBuf>> {
    match destination(out, dir, default_name) {
        Some(path) => {
            io::atomic_write(&path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
            Ok(Some(path))
        }
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Mandelbrot => "mandelbrot",
        Kind::S => "s",
        Kind::AntiIdentity => "anti_identity",
        Kind::JordanWielandt => "jordan_wielandt",
        Kind::Inverse => "inverse",
    }
}

fn build(kind: Kind, n: usize) -> mandelmat::Result<SparseIntMatrix> {
    match kind {
        Kind::Mandelbrot => mandelbrot_matrix(n),
        Kind::S => s_matrix(n),
        Kind::AntiIdentity => match n {
            0 => Err(mandelmat::Error::InvalidOrder(0)),
            1..=30 => anti_identity(dimension(n)),
            _ => Err(mandelmat::Error::Domain(format!("order {n} is too large to write out"))),
        },
        Kind::JordanWielandt => jordan_wielandt(n),
        Kind::Inverse => mandelbrot_inverse(n),
    }
}

#[derive(Serialize)]
struct MatrixJson<'a> {
    #[serde(flatten)]
    meta: &'a MatrixMeta,
    /// `[row, col, value]`, 1-based.
    entries: Vec<[i64; 3]>,
}

fn gen(a: &GenArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let format = check_format(a.output.format, &[Format::Mm, Format::Dot, Format::Json], Format::Mm)?;
    let m = build(a.kind, a.n)?;
    let name = kind_name(a.kind);
    let stem = format!("{name}_n{}", a.n);
    let meta = MatrixMeta::of(a.n, name, &m);
    let base = dir.unwrap_or(Path::new("."));
    let path = match &a.output.out {
        Some(p) if p == Path::new("-") => return Err(usage("gen writes files; give a path to --out")),
        Some(p) => p.clone(),
        None => base.join(format!(
            "{stem}.{}",
            match format {
                Format::Mm => "mtx",
                Format::Dot => "dot",
                _ => "json",
            }
        )),
    };
    match format {
        Format::Mm => {
            io::write_matrix_market(&m, &path)?;
            let sidecar = path.with_extension("json");
            io::write_json(&meta, &sidecar)?;
            println!("wrote {} ({} entries) and {}", path.display(), m.nnz(), sidecar.display());
        }
        Format::Dot => {
            let g = DigraphEdgeList::from_pattern(&m);
            io::write_dot(&g, &format!("G{}", a.n), &path)?;
            println!("wrote {} ({} edges)", path.display(), g.edges.len());
        }
        _ => {
            let entries = m.entries().iter().map(|e| [e.row as i64, e.col as i64, e.value]).collect();
            io::atomic_write(&path, json(&MatrixJson { meta: &meta, entries })?.as_bytes())?;
            println!("wrote {} ({} entries)", path.display(), m.nnz());
        }
    }
    Ok(Outcome::Pass)
}

fn perron(a: &PerronArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let format = check_format(a.output.format, &[Format::Csv, Format::Json], Format::Csv)?;
    let tol = positive_tol(a.tol, NEWTON_TOL)?;
    let r = polyeval::perron_root(a.n, tol, NEWTON_MAX_ITER)?;
    if format == Format::Json {
        emit(&json(&r)?, a.output.out.as_deref(), dir, &format!("perron_n{}.json", a.n))?;
        return Ok(Outcome::Pass);
    }
    println!("n           {}", r.n);
    println!("rho         {:.14}", r.rho);
    println!("seed        {:.14}", r.seed);
    println!("iterations  {}", r.iterations);
    println!("residual    {:.3e}", r.residual);
    Ok(Outcome::Pass)
}

fn eigvec(a: &EigvecArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let format = check_format(a.output.format, &[Format::Csv, Format::Json], Format::Csv)?;
    let v: EigvecResult = match a.method {
        Method::Solve => perronvec::dominant_eigenvector(a.n)?,
        Method::Recursive => perronvec::eigenvector_recursive(a.n)?,
        Method::Precise => perronvec::eigenvector_recursive_precise(a.n)?,
    };
    let v = perronvec::renormalize(&v, a.normalization.into());
    let (text, ext) = match format {
        Format::Json => (json(&v)?, "json"),
        _ => (plotdata::eigvec_csv(&v), "csv"),
    };
    if let Some(path) = emit(&text, a.output.out.as_deref(), dir, &format!("eigvec_n{}.{ext}", a.n))? {
        let (argmin, min) = v
            .components
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, &c)| (i + 1, c))
            .unwrap_or((0, f64::NAN));
        println!("wrote {} ({} components)", path.display(), v.dim());
        println!("rho       {:.14}", v.rho);
        println!("residual  {:.3e}", v.residual()?);
        println!("min       {min:.6e} at index {argmin}");
    }
    Ok(Outcome::Pass)
}

fn svd(a: &SvdArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let format = check_format(a.output.format, &[Format::Csv, Format::Json], Format::Csv)?;
    let tol = positive_tol(a.tol, DEFAULT_TRIPLE_TOL)?;
    let t = spectra::dominant_singular_triple(a.n, tol)?;
    println!("sigma       {:.14}", t.sigma);
    println!("iterations  {}", t.iterations);
    println!("residual    {:.3e}", t.residual);
    if a.n >= 2 {
        let b2 = homotopy::squared_bound(a.n as f64);
        let bound = b2.sqrt();
        println!("bound       {bound:.10}");
        println!("slack       {:.4}%", 100.0 * (bound - t.sigma) / t.sigma);
    }
    if a.output.out.is_some() || dir.is_some() {
        let (text, ext) = match format {
            Format::Json => (json(&t)?, "json"),
            _ => (plotdata::singvec_csv(&t), "csv"),
        };
        if let Some(p) = emit(&text, a.output.out.as_deref(), dir, &format!("singvec_n{}.{ext}", a.n))? {
            println!("wrote {}", p.display());
        }
    }
    Ok(Outcome::Pass)
}

fn order_range(n: usize, max_n: Option<usize>) -> anyhow::Result<std::ops::RangeInclusive<usize>> {
    let hi = max_n.unwrap_or(n);
    if hi < n {
        return Err(usage(format!("--max-n {hi} is below --n {n}")));
    }
    Ok(n..=hi)
}

fn svals(a: &SvalsArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let format = check_format(a.output.format, &[Format::Csv, Format::Json], Format::Csv)?;
    let spectra: Vec<_> = order_range(a.n, a.max_n)?
        .map(|n| spectra::all_singular_values(n, a.allow_large))
        .collect::<mandelmat::Result<_>>()?;
    let hi = spectra.last().map_or(a.n, |s| s.n);
    let (text, ext) = match format {
        Format::Json => (json(&spectra)?, "json"),
        _ => (plotdata::svals_csv(&spectra), "csv"),
    };
    emit(&text, a.output.out.as_deref(), dir, &format!("svals_n{}_{hi}.{ext}", a.n))?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct ComplexPoint {
    re: f64,
    im: f64,
}

fn spectrum(a: &SpectrumArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let format = check_format(a.output.format, &[Format::Csv, Format::Json], Format::Csv)?;
    let eigs = polyeval::spectrum_small(a.n, a.allow_large)?;
    let (text, ext) = match format {
        Format::Json => {
            let pts: Vec<ComplexPoint> = eigs.iter().map(|z| ComplexPoint { re: z.re, im: z.im }).collect();
            (json(&pts)?, "json")
        }
        _ => (plotdata::spectrum_csv(&eigs), "csv"),
    };
    if let Some(p) = emit(&text, a.output.out.as_deref(), dir, &format!("spectrum_n{}.{ext}", a.n))? {
        let periodic = eigs
            .iter()
            .filter(|&&z| polyeval::periodic_orbit_check(a.n, z, 1e-6))
            .count();
        println!("wrote {} ({} eigenvalues)", p.display(), eigs.len());
        println!("min pairwise distance  {:.3e}", polyeval::min_pairwise_distance(&eigs));
        println!("periodic orbits        {periodic}/{}", eigs.len());
    }
    Ok(Outcome::Pass)
}

fn homotopy_cmd(a: &HomotopyArgs, dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let format = check_format(a.output.format, &[Format::Csv, Format::Json], Format::Csv)?;
    let tol = positive_tol(a.tol, DEFAULT_TRACK_TOL)?;
    if a.steps == 0 {
        return Err(usage("--steps must be positive"));
    }
    let tr = homotopy::track_paths_with(a.n, a.steps, tol, a.allow_large)?;
    let oracle = spectra::all_singular_values(a.n + 1, a.allow_large)?.sigmas;
    let ends = tr.end_magnitudes();
    let worst = ends
        .iter()
        .zip(&oracle)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let ok = ends.len() == oracle.len() && worst <= 1e-8;
    println!("paths             {}", tr.paths.len());
    println!("refinements       {}", tr.refinements);
    println!("min separation    {:.3e}", tr.min_separation);
    println!("max residual      {:.3e}", tr.max_residual);
    println!("zero path end     {:.10}", tr.zero_path().converged_end);
    println!("endpoint error    {worst:.3e} (vs singular values of M_{})", a.n + 1);
    if a.output.out.is_some() || dir.is_some() {
        let text = match format {
            Format::Json => json(&tr)?,
            _ => {
                let mut s = String::from("path_id,eps,lambda\n");
                for (id, p) in tr.paths.iter().enumerate() {
                    for (e, l) in &p.samples {
                        s.push_str(&format!("{id},{e:e},{l:e}\n"));
                    }
                }
                s
            }
        };
        let ext = if format == Format::Json { "json" } else { "csv" };
        if let Some(p) = emit(&text, a.output.out.as_deref(), dir, &format!("paths_n{}.{ext}", a.n))? {
            println!("wrote {}", p.display());
        }
    }
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { Outcome::Pass } else { Outcome::CheckFailed })
}
