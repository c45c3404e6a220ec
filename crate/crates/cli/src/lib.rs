//! `dzeta` command-line front end. [`run`] takes the argument list and
//! output sinks so that every command can be driven in-process.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dzeta_core::arith::{to_pq, BigRat, Poly};
use dzeta_core::curves::{catalog, CurveSpec, ZetaLevel};
use dzeta_core::derived::{derive_tower, special_values};
use dzeta_core::invariants::{extract_invariants, gamma_interlacing_check, gamma_poly, InvariantReport};
use dzeta_core::rh::sweep::{builtin_catalog, builtin_elliptic, elliptic_grid, sweep, Check, SweepConfig, SweepReport};
use dzeta_core::rh::{default_tolerance, parse_decimal, rh_check, rh_numeric, Outcome, RHVerdict};
use dzeta_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const ENV_CAP: &str = "DZETA_PRODUCT_CAP";
pub const ENV_PRECISION: &str = "DZETA_PRECISION_BITS";
pub const ENV_TOLERANCE: &str = "DZETA_TOLERANCE";

#[derive(Parser, Debug)]
#[command(name = "dzeta", version, about = "Derived zeta functions of curves over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive the tower of levels for a tuple.
    Derive(LevelArgs),
    /// Alpha/beta invariants and Gamma signs of each level.
    Invariants(LevelArgs),
    /// Riemann-hypothesis check of the last level.
    RhCheck(RhArgs),
    /// Check battery over a grid of curves and tuples.
    Sweep(SweepArgs),
    /// List the enumerated example curves.
    Catalog(OutputArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CapArgs {
    /// Largest allowed product of tuple entries.
    #[arg(long, env = ENV_CAP, default_value_t = 64)]
    pub cap: u64,
    /// Ignore the product cap.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Debug)]
pub struct LevelArgs {
    /// `elliptic:q=Q,a=A`, `catalog:LABEL`, inline JSON, or a JSON file.
    #[arg(long)]
    pub curve: Option<String>,
    /// Comma-separated positive integers.
    #[arg(long, value_parser = parse_tuple_arg)]
    pub tuple: Option<TupleArg>,
    /// Divide every level by its alpha(0).
    #[arg(long)]
    pub normalize: bool,
    #[command(flatten)]
    pub cap: CapArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PrecisionArgs {
    #[arg(long, env = ENV_PRECISION, default_value_t = 256)]
    pub precision_bits: u32,
    /// Decimal such as `1e-30`; defaults to `10^{-floor(3 bits / 20)}`.
    #[arg(long, env = ENV_TOLERANCE)]
    pub tolerance: Option<String>,
}

impl PrecisionArgs {
    fn tolerance(&self) -> Result<BigRat, Failure> {
        match &self.tolerance {
            Some(s) => parse_decimal(s).map_err(|e| Failure::usage(e.to_string())),
            None => Ok(default_tolerance(self.precision_bits)),
        }
    }

    fn validate(&self) -> Result<(), Failure> {
        if !(32..=1 << 16).contains(&self.precision_bits) {
            return Err(Failure::usage("precision bits must lie in 32..=65536"));
        }
        Ok(())
    }
}

#[derive(Args, Debug)]
pub struct RhArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    /// Use the root finder even in genus 1.
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// `builtin-elliptic`, `builtin-elliptic:Q1,Q2,..`, `builtin-catalog`,
    /// or a JSON file holding an array of curves.
    #[arg(long)]
    pub grid: Option<String>,
    /// Extra curves, in any `--curve` form.
    #[arg(long = "curve")]
    pub curves: Vec<String>,
    /// Tuples separated by `;`, e.g. `2;3;2,2`.
    #[arg(long)]
    pub tuples: String,
    /// `all` or a comma-separated subset of
    /// positivity,rh,miracle,interlacing,ratio_bounds,beta_routes.
    #[arg(long, default_value = "all")]
    pub checks: String,
    /// Worker threads for the cells.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub cap: CapArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// A command error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ParseRational(_)
            | Error::GenusZero
            | Error::Hasse { .. }
            | Error::InvalidCurve(_)
            | Error::EnumerationBound(_)
            | Error::UnsupportedEquation(_)
            | Error::InconsistentCounts(_)
            | Error::InvalidTuple(_)
            | Error::GenusMismatch { .. } => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

/// Parsed `--tuple` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleArg(pub Vec<u32>);

fn parse_tuple_arg(s: &str) -> Result<TupleArg, String> {
    parse_tuple(s).map(TupleArg)
}

impl LevelArgs {
    fn tuple(&self) -> &[u32] {
        self.tuple.as_ref().map_or(&[], |t| &t.0)
    }
}

pub fn parse_tuple(s: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("bad tuple entry {p:?}")))
        .collect::<Result<_, _>>()?;
    if parts.contains(&0) {
        return Err("tuple entries must be at least 1".into());
    }
    Ok(parts)
}

fn check_cap(tuple: &[u32], cap: &CapArgs) -> Result<(), Failure> {
    if tuple.is_empty() {
        return Err(Failure::usage("--tuple is required"));
    }
    if cap.allow_large {
        return Ok(());
    }
    let product = tuple.iter().try_fold(1u64, |a, &n| a.checked_mul(n as u64));
    match product {
        Some(p) if p <= cap.cap => Ok(()),
        _ => Err(Failure::usage(format!(
            "product of {tuple:?} exceeds the cap {}; pass --allow-large or raise --cap",
            cap.cap
        ))),
    }
}

/// Parses any accepted `--curve` form.
pub fn load_curve(arg: &str) -> Result<CurveSpec, Failure> {
    let t = arg.trim();
    if let Some(rest) = t.strip_prefix("elliptic:") {
        let mut q = None;
        let mut a = None;
        for kv in rest.split(',') {
            match kv.split_once('=') {
                Some(("q", v)) => q = v.trim().parse::<u64>().ok(),
                Some(("a", v)) => a = v.trim().parse::<i64>().ok(),
                _ => return Err(Failure::usage(format!("bad elliptic parameter {kv:?}"))),
            }
        }
        let (Some(q), Some(a)) = (q, a) else {
            return Err(Failure::usage("elliptic curves need q=.. and a=.."));
        };
        return Ok(CurveSpec::elliptic(format!("elliptic:q={q},a={a}"), q, a));
    }
    if let Some(label) = t.strip_prefix("catalog:") {
        let c = catalog::find(label).ok_or_else(|| Failure::usage(format!("no catalog curve {label:?}")))?;
        return Ok(c.spec()?);
    }
    if t.starts_with('{') {
        return Ok(CurveSpec::from_json(t)?);
    }
    let path = Path::new(t);
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read curve file {}: {e}", path.display())))?;
    Ok(CurveSpec::from_json(&text)?)
}

fn require_curve(arg: &Option<String>) -> Result<CurveSpec, Failure> {
    match arg {
        Some(c) => load_curve(c),
        None => Err(Failure::usage("--curve is required")),
    }
}

fn pq_list(xs: &[BigRat]) -> Value {
    xs.iter().map(|x| Value::String(to_pq(x))).collect()
}

fn level_json(l: &ZetaLevel) -> Result<Value, Failure> {
    Ok(json!({
        "tuple": l.tuple,
        "Q": to_pq(&l.q),
        "genus": l.genus,
        "numerator": pq_list(l.numerator()?.coeffs()),
        "normalization": l.normalization.as_ref().map(to_pq),
        "zeta": {
            "num": pq_list(l.zeta.num().coeffs()),
            "den": pq_list(l.zeta.den().coeffs()),
        },
    }))
}

fn tuple_str(t: &[u32]) -> String {
    t.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn poly_str(p: &Poly) -> String {
    p.coeffs().iter().map(to_pq).collect::<Vec<_>>().join(" ")
}

struct Artifact {
    json: Value,
    csv: Vec<Vec<String>>,
}

fn emit(a: &Artifact, out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let bytes = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&a.json).expect("json");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &a.csv {
                w.write_record(row).map_err(|e| Failure {
                    code: EXIT_INTERNAL,
                    message: e.to_string(),
                })?;
            }
            w.into_inner().map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: e.to_string(),
            })?
        }
    };
    match &out.output {
        Some(p) => fs::write(p, bytes)?,
        None => stdout.write_all(&bytes)?,
    }
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn tower(args: &LevelArgs) -> Result<(CurveSpec, ZetaLevel, Vec<ZetaLevel>), Failure> {
    check_cap(args.tuple(), &args.cap)?;
    let curve = require_curve(&args.curve)?;
    let mut base = curve.artin()?;
    if args.normalize {
        base = base.normalized()?;
    }
    let levels = derive_tower(&base, args.tuple(), args.normalize)?;
    Ok((curve, base, levels))
}

fn cmd_derive(args: &LevelArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let (curve, base, levels) = tower(args)?;
    let mut lv = Vec::new();
    let mut csv = vec![vec![
        "curve".into(),
        "tuple".into(),
        "Q".into(),
        "genus".into(),
        "normalization".into(),
        "numerator".into(),
    ]];
    for l in &levels {
        lv.push(level_json(l)?);
        let p = l.numerator()?;
        writeln!(
            stderr,
            "tuple=({}) Q={} genus={} P={}",
            tuple_str(&l.tuple),
            to_pq(&l.q),
            l.genus,
            p
        )?;
        csv.push(vec![
            curve.label.clone(),
            tuple_str(&l.tuple),
            to_pq(&l.q),
            l.genus.to_string(),
            l.normalization.as_ref().map(to_pq).unwrap_or_default(),
            poly_str(&p),
        ]);
    }
    let json = json!({
        "curve": curve.label,
        "base": level_json(&base)?,
        "levels": lv,
    });
    emit(&Artifact { json, csv }, &args.out, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_invariants(args: &LevelArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let (curve, base, levels) = tower(args)?;
    let mut reports = Vec::new();
    let mut csv = vec![vec![
        "curve".into(),
        "tuple".into(),
        "Q".into(),
        "beta".into(),
        "alphas".into(),
        "positivity".into(),
        "gamma_signs".into(),
    ]];
    let mut prefix = base.normalized()?;
    for l in &levels {
        let inv = extract_invariants(l)?;
        let mut r = InvariantReport::new(&curve.label, l, &inv);
        let n = *l.tuple.last().expect("derived level");
        let gp = gamma_poly(&special_values(&prefix, n as usize)?, n)?;
        let signs = gamma_interlacing_check(&gp).signs;
        r.gamma_signs.insert(format!("n={n}"), signs.clone());
        writeln!(stderr, "{}", r.summary_line())?;
        csv.push(vec![
            curve.label.clone(),
            tuple_str(&l.tuple),
            to_pq(&r.q),
            to_pq(&r.beta),
            r.alphas.iter().map(to_pq).collect::<Vec<_>>().join(" "),
            r.positivity.to_string(),
            signs.iter().map(i8::to_string).collect::<Vec<_>>().join(" "),
        ]);
        reports.push(r);
        prefix = l.normalized()?;
    }
    let json = json!({ "curve": curve.label, "levels": to_value(&reports) });
    emit(&Artifact { json, csv }, &args.out, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_rh_check(args: &RhArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    args.precision.validate()?;
    let tol = args.precision.tolerance()?;
    let (curve, _, levels) = tower(&args.level)?;
    let last = levels.last().expect("nonempty tuple");
    let inv = extract_invariants(last)?;
    let bits = args.precision.precision_bits;
    let v: RHVerdict = if args.numeric {
        rh_numeric(&inv, bits, &tol)?
    } else {
        rh_check(&inv, bits, &tol)?
    };
    writeln!(
        stderr,
        "tuple=({}) Q={} method={} holds={}",
        tuple_str(&last.tuple),
        to_pq(&last.q),
        to_value(&v.method).as_str().unwrap_or_default(),
        v.holds.as_str()
    )?;
    let json = json!({
        "curve": curve.label,
        "tuple": last.tuple,
        "Q": to_pq(&last.q),
        "numerator": pq_list(inv.p.coeffs()),
        "verdict": to_value(&v),
    });
    let csv = vec![
        vec![
            "curve".into(),
            "tuple".into(),
            "Q".into(),
            "method".into(),
            "holds".into(),
            "max_deviation".into(),
        ],
        vec![
            curve.label.clone(),
            tuple_str(&last.tuple),
            to_pq(&last.q),
            to_value(&v.method).as_str().unwrap_or_default().to_string(),
            v.holds.as_str().into(),
            v.max_deviation.clone().unwrap_or_default(),
        ],
    ];
    emit(&Artifact { json, csv }, &args.level.out, stdout)?;
    Ok(if v.holds == Outcome::Pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

/// Curves named by a `--grid` value.
pub fn load_grid(spec: &str) -> Result<Vec<CurveSpec>, Failure> {
    match spec.trim() {
        "builtin-elliptic" => Ok(builtin_elliptic()),
        "builtin-catalog" => Ok(builtin_catalog()?),
        s => {
            if let Some(qs) = s.strip_prefix("builtin-elliptic:") {
                let qs: Vec<u64> = qs
                    .split(',')
                    .map(|q| q.trim().parse::<u64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Failure::usage(format!("bad q list {qs:?}")))?;
                return Ok(elliptic_grid(&qs));
            }
            let text = fs::read_to_string(s)
                .map_err(|e| Failure::usage(format!("cannot read grid file {s}: {e}")))?;
            let items: Vec<Value> =
                serde_json::from_str(&text).map_err(|e| Failure::usage(format!("grid file {s}: {e}")))?;
            items
                .iter()
                .map(|v| Ok(CurveSpec::from_json(&v.to_string())?))
                .collect()
        }
    }
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    args.precision.validate()?;
    let mut curves = match &args.grid {
        Some(g) => load_grid(g)?,
        None => Vec::new(),
    };
    for c in &args.curves {
        curves.push(load_curve(c)?);
    }
    let tuples: Vec<Vec<u32>> = args
        .tuples
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_tuple)
        .collect::<Result<_, _>>()
        .map_err(Failure::usage)?;
    for t in &tuples {
        check_cap(t, &args.cap)?;
    }
    let checks = Check::parse_list(&args.checks).map_err(|e| Failure::usage(e.to_string()))?;
    let mut cfg = SweepConfig::new(curves, tuples, checks);
    cfg.precision_bits = args.precision.precision_bits;
    cfg.tolerance = args.precision.tolerance()?;
    cfg.product_cap = if args.cap.allow_large { u64::MAX } else { args.cap.cap };
    let report: SweepReport = match args.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: e.to_string(),
            })?
            .install(|| sweep(&cfg)),
        None => sweep(&cfg),
    };
    let s = &report.summary;
    writeln!(
        stderr,
        "cells={} pass={} fail={} unknown={} errors={} failed_cells={}",
        s.cells, s.pass, s.fail, s.unknown, s.errors, s.failed_cells
    )?;
    let mut csv = vec![vec![
        "curve".into(),
        "tuple".into(),
        "check".into(),
        "outcome".into(),
        "error".into(),
    ]];
    for c in &report.cells {
        for (k, o) in &c.checks {
            csv.push(vec![
                c.curve.clone(),
                tuple_str(&c.tuple),
                k.clone(),
                o.as_str().into(),
                c.error.clone().unwrap_or_default(),
            ]);
        }
    }
    emit(
        &Artifact {
            json: to_value(&report),
            csv,
        },
        &args.out,
        stdout,
    )?;
    Ok(if report.any_failed() {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

fn cmd_catalog(args: &OutputArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mut items = Vec::new();
    let mut csv = vec![vec![
        "label".into(),
        "q".into(),
        "genus".into(),
        "numerator".into(),
    ]];
    for c in catalog::CURVES {
        let spec = c.spec()?;
        let p = spec.artin()?.numerator()?;
        let mut v: Value = serde_json::from_str(&spec.to_json()).expect("curve json");
        v["artin_numerator"] = pq_list(p.coeffs());
        csv.push(vec![
            spec.label.clone(),
            spec.q.to_string(),
            spec.genus.to_string(),
            poly_str(&p),
        ]);
        items.push(v);
    }
    emit(
        &Artifact {
            json: Value::Array(items),
            csv,
        },
        args,
        stdout,
    )?;
    Ok(EXIT_OK)
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Derive(a) => cmd_derive(a, stdout, stderr),
        Command::Invariants(a) => cmd_invariants(a, stdout, stderr),
        Command::RhCheck(a) => cmd_rh_check(a, stdout, stderr),
        Command::Sweep(a) => cmd_sweep(a, stdout, stderr),
        Command::Catalog(a) => cmd_catalog(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
