use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use associator::dsl::parse_catalogue;
use associator::exact::parse_rational;
use associator::holonomy::{compute_cached, ode_oracle_psi, AssociatorKind, HolonomyParams, OracleParams};
use associator::relations::{self, VerifyConfig};
use associator::scalar::{bigfloat_to_f64, ln2};
use associator::t4algebra::{hilbert_dims, NormalFormTable, ResourceGuard};
use associator::{serial, Error, GaussRational, Scalar};

const CACHE_ENV: &str = "ASSOC_CACHE_DIR";

#[derive(Parser)]
#[command(name = "associator", version, about = "KZ and cyclotomic associators and the relations between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an associator and write its series document.
    Compute(ComputeArgs),
    /// Verify the catalogue relations involving Psi_N (N in 1, 2, 4).
    Verify(VerifyArgs),
    /// Verify every catalogue relation plus structural checks.
    VerifyAll(VerifyAllArgs),
    /// Print the dimensions of U(t4) by degree.
    Dims(DimsArgs),
    /// Compare the Taylor-method Psi_N with the ODE oracle.
    Oracle(OracleArgs),
    /// Render a saved JSON report as a text table.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Psi,
    Phi,
    PhiHalf,
}

#[derive(Args)]
struct Numerics {
    /// Working precision in bits.
    #[arg(long = "prec-bits", default_value_t = relations::DEFAULT_PREC)]
    prec: usize,
    /// Number of Taylor terms.
    #[arg(long, default_value_t = relations::DEFAULT_TERMS)]
    terms: usize,
    /// Cache directory (default: $ASSOC_CACHE_DIR, else no cache).
    #[arg(long)]
    cache: Option<PathBuf>,
}

impl Numerics {
    fn cache_dir(&self) -> Option<PathBuf> {
        self.cache.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long = "N", default_value_t = 4)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Kind::Psi)]
    kind: Kind,
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Gluing point in (0, 1), as `p/q`.
    #[arg(long, default_value = "1/2")]
    point: String,
    #[command(flatten)]
    num: Numerics,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Relation catalogue (default: the shipped one).
    #[arg(long)]
    catalogue: Option<PathBuf>,
    /// Evaluate every relation at this degree.
    #[arg(long)]
    degree: Option<usize>,
    /// Use this tolerance for every row.
    #[arg(long)]
    tol: Option<f64>,
    /// Run only these rows (repeatable).
    #[arg(long)]
    relation: Vec<String>,
    #[command(flatten)]
    num: Numerics,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "N")]
    n: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct VerifyAllArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long, default_value_t = 4)]
    degree: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "N", default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Integration steps per half interval.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[command(flatten)]
    num: Numerics,
}

#[derive(Args)]
struct ReportArgs {
    /// A JSON report written by `verify` or `verify-all`.
    input: PathBuf,
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_compute(a: &ComputeArgs) -> Result<ExitCode> {
    let point: GaussRational = GaussRational::new(parse_rational(&a.point)?, Default::default());
    let params = HolonomyParams::new(a.degree, a.num.prec, a.num.terms).with_point(point);
    let kind = match a.kind {
        Kind::Psi => AssociatorKind::Psi(a.n),
        Kind::Phi => AssociatorKind::Phi,
        Kind::PhiHalf => AssociatorKind::PhiHalf,
    };
    let assoc = compute_cached(kind, &params, a.num.cache_dir().as_deref())?;
    let text = serial::to_string(&assoc.series, Some(assoc.metadata()))?;
    write_out(a.out.as_deref(), &text)?;
    if a.out.is_some() {
        eprintln!("{}: degree {}, tail bound {:.2e}", kind.name(), a.degree, assoc.tail_bound);
    }
    Ok(ExitCode::SUCCESS)
}

fn run_catalogue(run: &RunArgs, keep: impl Fn(&[String]) -> bool) -> Result<ExitCode> {
    let catalogue = match &run.catalogue {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_catalogue(&text)?
        }
        None => relations::default_catalogue(),
    };
    let catalogue: Vec<_> = catalogue.into_iter().filter(|e| keep(&e.relation.series_names())).collect();
    let config = VerifyConfig {
        prec: run.num.prec,
        terms: run.num.terms,
        degree: run.degree,
        tolerance: run.tol,
        cache_dir: run.num.cache_dir(),
        only: run.relation.clone(),
        guard: ResourceGuard::default(),
    };
    if !run.relation.is_empty() {
        let p = relations::plan(&catalogue, &config)?;
        if p.entries.is_empty() && p.structural.is_empty() {
            bail!(Error::Contract(format!("no row named {}", run.relation.join(", "))));
        }
    }
    let report = relations::verify_all(&catalogue, &config)?;
    print!("{}", report.to_text());
    if let Some(out) = &run.out {
        let text = serde_json::to_string_pretty(&report.to_json_with_timings())?;
        fs::write(out, text + "\n").with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let wanted: &[&str] = match a.n {
        4 => &["Psi4"],
        2 => &["Psi2"],
        1 => &["Phi", "PhiHalf"],
        n => bail!(Error::Contract(format!("verify supports N in 1, 2, 4; got {n}"))),
    };
    let higher: &[&str] = match a.n {
        4 => &[],
        2 => &["Psi4"],
        _ => &["Psi4", "Psi2"],
    };
    run_catalogue(&a.run, |names| {
        names.iter().any(|n| wanted.contains(&n.as_str())) && !names.iter().any(|n| higher.contains(&n.as_str()))
    })
}

fn cmd_dims(a: &DimsArgs) -> Result<ExitCode> {
    let cache = a.cache.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let table = NormalFormTable::load_or_build(a.degree, cache.as_deref(), ResourceGuard::default())?;
    let expected = hilbert_dims(a.degree);
    println!("degree  dim  expected");
    for (k, d) in table.dims().iter().enumerate() {
        println!("{k:>6}  {d:>3}  {}", expected[k]);
    }
    println!("Z central: {}", table.z_is_central());
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(a: &OracleArgs) -> Result<ExitCode> {
    let params = HolonomyParams::new(a.degree, a.num.prec, a.num.terms);
    let taylor = compute_cached(AssociatorKind::Psi(a.n), &params, a.num.cache_dir().as_deref())?.series;
    let op = OracleParams { steps: a.steps, prec: a.num.prec.min(128), ..OracleParams::new(a.degree) };
    let oracle = ode_oracle_psi(a.n, &op)?;
    let taylor = taylor.truncate(a.degree)?;
    println!("word        taylor                              oracle                              |diff|");
    let mut worst = 0f64;
    for (w, c) in taylor.nonzero_terms() {
        let o = oracle.coeff(&w);
        let name = if w.is_empty() { "1".to_string() } else { taylor.alphabet().word_to_string(&w) };
        let diff = c.sub(&o, 128).abs_f64();
        worst = worst.max(diff);
        println!("{name:<10}  {:<34}  {:<34}  {diff:.2e}", fmt_scalar(c), fmt_scalar(&o));
    }
    if a.n == 2 && a.degree >= 1 {
        let c = taylor.coeff_of("bm1")?;
        println!("ln 2 = {:.15}; coeff of bm1 = {:.15}", bigfloat_to_f64(&ln2(128)), bigfloat_to_f64(c.re()));
    }
    println!("max |diff| = {worst:.2e}");
    Ok(ExitCode::SUCCESS)
}

fn fmt_scalar(c: &Scalar) -> String {
    let (re, im) = (bigfloat_to_f64(c.re()), bigfloat_to_f64(c.im()));
    format!("{re:+.15e} {im:+.15e}i")
}

fn cmd_report(a: &ReportArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let v: Value = serde_json::from_str(&text)?;
    let rows = v["rows"].as_array().context("report has no `rows`")?;
    for r in rows {
        let status = match (r["kind"].as_str(), r["pass"].as_bool()) {
            (Some("reading"), Some(true)) => "holds",
            (Some("reading"), _) => "fails",
            (_, Some(true)) => "PASS",
            _ => "FAIL",
        };
        let res = r["residual"].as_f64().map_or("-".to_string(), |x| format!("{x:.3e}"));
        println!("{:<24} {:>3}  {res:>10}  {status}", r["name"].as_str().unwrap_or("?"), r["degree"]);
    }
    let pass = v["pass"].as_bool().unwrap_or(false);
    println!("{}", json!({ "pass": pass }));
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn exit_code(e: &anyhow::Error) -> ExitCode {
    match e.downcast_ref::<Error>() {
        Some(Error::Resource { .. }) => ExitCode::from(3),
        Some(Error::Contract(_) | Error::Domain(_) | Error::Parse { .. } | Error::Bind { .. }) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::VerifyAll(a) => run_catalogue(&a.run, |_| true),
        Command::Dims(a) => cmd_dims(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Report(a) => cmd_report(a),
    };
    r.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        exit_code(&e)
    })
}
