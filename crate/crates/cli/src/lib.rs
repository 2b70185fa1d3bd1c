// SPDX-License-Identifier: Apache-2.0

//! The `keven` command line: rank reports, Kummer verdicts and scans, class
//! groups and Bernoulli numbers, with an optional on-disk cache.
//!
//! Exit codes: 0 success, 1 internal or I/O error, 2 unmet hypothesis or
//! precondition, 64 malformed command line.

pub mod cache;
mod check;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use keven_core::arith::vp;
use keven_core::cyclo::profile;
use keven_core::krank::{quad_report, rank_large_n, rank_small_n, rational_large_n_data};
use keven_core::kummer::{kummer_check, kummer_scan};
use keven_core::qforms::class_group;
use keven_core::zeta::{bernoulli_upto, seed_bernoulli};
use keven_core::{ClassData, Error, ExactRational, Field, FinAbGroup, KummerVerdict, RankReport};

use cache::{Cache, CacheKind, CACHE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "keven", version, about = "p-primary structure of even K-groups of Q and quadratic fields")]
pub struct Cli {
    /// Cache directory; overrides K_EVEN_RANK_CACHE. No cache is used if neither is set.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p^n-rank of K_{2i}(O_F) with the terms of the underlying exact sequence.
    Krank(KrankArgs),
    /// Kummer-type criterion through zeta values, for one prime or a scan.
    Kummer(KummerArgs),
    /// Form class group of a fundamental discriminant (narrow when D > 0).
    Classgroup(ClassgroupArgs),
    /// Bernoulli number B_n (B_1 = -1/2).
    Bernoulli(BernoulliArgs),
    /// Randomized self-check of core identities.
    Check(CheckArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct KrankArgs {
    /// Q or sqrt:<m>
    #[arg(long, value_parser = parse_field)]
    pub field: Field,
    #[arg(long)]
    pub p: u64,
    /// One or more values of i, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub i: Vec<u64>,
    #[arg(long)]
    pub n: u32,
    /// TOML file describing A^S with its Galois action.
    #[arg(long)]
    pub class_data: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["p", "scan"])))]
pub struct KummerArgs {
    #[arg(long, value_parser = parse_field)]
    pub field: Field,
    #[arg(long)]
    pub p: Option<u64>,
    /// Report every odd prime below this bound at which divisibility holds.
    #[arg(long)]
    pub scan: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ClassgroupArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub disc: i64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BernoulliArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String, io::Error),
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_precondition() => EXIT_PRECONDITION,
            _ => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(ctx, e) => write!(f, "{ctx}: {e}"),
            CliError::Check(msg) => write!(f, "self-check failed: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn io_err(ctx: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let ctx = ctx.into();
    move |e| CliError::Io(ctx, e)
}

type CliResult<T> = Result<T, CliError>;

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn open_cache(cli: &Cli) -> CliResult<Option<Cache>> {
    let dir = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    dir.map(|d| Cache::open(&d).map_err(io_err(format!("cache directory {}", d.display())))).transpose()
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let cache = open_cache(cli)?;
    let text = match &cli.command {
        Command::Krank(a) => cmd_krank(a)?,
        Command::Kummer(a) => cmd_kummer(a, cache.as_ref())?,
        Command::Classgroup(a) => cmd_classgroup(a, cache.as_ref())?,
        Command::Bernoulli(a) => cmd_bernoulli(a, cache.as_ref())?,
        Command::Check(a) => check::run(a.seed, a.trials).map_err(CliError::Check)?,
    };
    out.write_all(text.as_bytes()).map_err(io_err("writing output"))
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn to_csv<R: Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

/// Flat CSV view of a [`RankReport`].
#[derive(Serialize)]
struct RankRow<'a> {
    field: String,
    p: u64,
    i: u64,
    n: u32,
    regime: keven_core::krank::Regime,
    rank: u32,
    rank_kind: keven_core::krank::RankKind,
    terms: String,
    branch: &'a str,
}

fn rank_row(r: &RankReport) -> RankRow<'_> {
    RankRow {
        field: r.field.to_string(),
        p: r.p,
        i: r.i,
        n: r.n,
        regime: r.regime,
        rank: r.rank,
        rank_kind: r.rank_kind,
        terms: r.term_sizes.iter().map(|t| format!("{}={}", t.name, t.log_order)).collect::<Vec<_>>().join(";"),
        branch: &r.branch,
    }
}

/// Report for one `(F, p, i, n)`, picking the regime and the data source.
pub fn krank_report(field: &Field, p: u64, i: u64, n: u32, external: Option<&ClassData>) -> Result<RankReport, Error> {
    match field {
        Field::Quadratic(q) => quad_report(q.m(), p, i, n, external),
        Field::Rational => {
            let prof = profile(field, p)?;
            if n <= prof.a + vp(i, p) {
                return rank_small_n(field, p, i, n, external);
            }
            match external {
                Some(data) => rank_large_n(field, p, i, n, data),
                None => rank_large_n(field, p, i, n, &rational_large_n_data(p, i, n)?),
            }
        }
    }
}

fn cmd_krank(a: &KrankArgs) -> CliResult<String> {
    let text = match &a.class_data {
        Some(path) => Some(std::fs::read_to_string(path).map_err(io_err(format!("reading {}", path.display())))?),
        None => None,
    };
    let mut reports = Vec::new();
    for &i in &a.i {
        // character values default to the level of G = Gal(F(μ_{p^{n-b}})/F)
        let level = a.n.saturating_sub(vp(i, a.p));
        let data = text.as_deref().map(|t| ClassData::from_toml_str(t, level)).transpose()?;
        reports.push(krank_report(&a.field, a.p, i, a.n, data.as_ref())?);
    }
    Ok(match a.format {
        Format::Json if reports.len() == 1 => to_json(&reports[0]),
        Format::Json => to_json(&reports),
        Format::Csv => to_csv(&reports.iter().map(rank_row).collect::<Vec<_>>()),
        Format::Text => reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
    })
}

/// Fill the Bernoulli memo from the cache and write back anything new.
fn warm_bernoulli(cache: Option<&Cache>, upto: usize) -> CliResult<()> {
    let Some(cache) = cache else { return Ok(()) };
    let stored = cache.load(CacheKind::Bernoulli).map_err(io_err("reading Bernoulli cache"))?;
    let prefix: Vec<ExactRational> = (0i64..)
        .map_while(|k| stored.get(&k).and_then(|s| s.parse().ok()))
        .collect();
    seed_bernoulli(&prefix);
    let table = bernoulli_upto(upto);
    let fresh: BTreeMap<i64, String> = table
        .iter()
        .enumerate()
        .filter(|(k, _)| !stored.contains_key(&(*k as i64)))
        .map(|(k, b)| (k as i64, b.to_string()))
        .collect();
    if !fresh.is_empty() {
        cache.store(CacheKind::Bernoulli, &fresh).map_err(io_err("writing Bernoulli cache"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    field: &'a Field,
    bound: u64,
    primes: &'a [u64],
}

#[derive(Serialize)]
struct VerdictRow {
    field: String,
    p: u64,
    hypothesis_ok: bool,
    divisible: bool,
    witnesses: String,
}

fn verdict_text(v: &KummerVerdict) -> String {
    let mut s = format!("field {}  p = {}\n", v.field, v.p);
    if !v.hypothesis_ok {
        s.push_str("WARNING: hypothesis fails (a prime above p has odd local degree); the verdict is not a criterion here\n");
    }
    s.push_str(&format!("divisible: {}\n", v.divisible));
    if v.divisible {
        let w: Vec<String> = v.witnesses.iter().map(|i| i.to_string()).collect();
        s.push_str(&format!("witnesses i = {}\n", w.join(", ")));
    }
    for q in &v.quantities {
        s.push_str(&format!("  i = {}: {} (v_p = {})\n", q.i, q.value, q.valuation));
    }
    s
}

fn cmd_kummer(a: &KummerArgs, cache: Option<&Cache>) -> CliResult<String> {
    if let Some(bound) = a.scan {
        warm_bernoulli(cache, bound.max(2) as usize)?;
        let primes = kummer_scan(&a.field, bound)?;
        return Ok(match a.format {
            Format::Json => to_json(&ScanOutput { field: &a.field, bound, primes: &primes }),
            Format::Csv => {
                #[derive(Serialize)]
                struct Row {
                    p: u64,
                }
                to_csv(&primes.iter().map(|&p| Row { p }).collect::<Vec<_>>())
            }
            Format::Text => {
                let list: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                format!("[{}]\n", list.join(", "))
            }
        });
    }
    let p = a.p.expect("clap enforces --p or --scan");
    warm_bernoulli(cache, p.max(2) as usize)?;
    let v = kummer_check(&a.field, p)?;
    Ok(match a.format {
        Format::Json => to_json(&v),
        Format::Csv => to_csv(&[VerdictRow {
            field: v.field.to_string(),
            p: v.p,
            hypothesis_ok: v.hypothesis_ok,
            divisible: v.divisible,
            witnesses: v.witnesses.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
        }]),
        Format::Text => verdict_text(&v),
    })
}

#[derive(Serialize)]
struct ClassGroupOutput {
    disc: i64,
    invariants: Vec<u64>,
    order: u64,
}

/// Class group of `d`, read from or written to the cache.
pub fn cached_class_group(d: i64, cache: Option<&Cache>) -> CliResult<FinAbGroup> {
    if let Some(c) = cache {
        if let Some(payload) = c.get(CacheKind::Classgroup, d).map_err(io_err("reading class-group cache"))? {
            if let Some(g) = serde_json::from_str::<Vec<u64>>(&payload).ok().and_then(|v| FinAbGroup::from_invariants(v).ok()) {
                return Ok(g);
            }
        }
    }
    let g = class_group(d)?;
    if let Some(c) = cache {
        let entry = BTreeMap::from([(d, g.to_string())]);
        c.store(CacheKind::Classgroup, &entry).map_err(io_err("writing class-group cache"))?;
    }
    Ok(g)
}

fn cmd_classgroup(a: &ClassgroupArgs, cache: Option<&Cache>) -> CliResult<String> {
    let g = cached_class_group(a.disc, cache)?;
    let o = ClassGroupOutput { disc: a.disc, invariants: g.invariants().to_vec(), order: g.order() };
    Ok(match a.format {
        Format::Json => to_json(&o),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                disc: i64,
                invariants: String,
                order: u64,
            }
            to_csv(&[Row { disc: o.disc, invariants: g.to_string(), order: o.order }])
        }
        Format::Text => format!("D = {}: {} (order {})\n", o.disc, g, o.order),
    })
}

fn cmd_bernoulli(a: &BernoulliArgs, cache: Option<&Cache>) -> CliResult<String> {
    warm_bernoulli(cache, a.n)?;
    let b = bernoulli_upto(a.n).pop().expect("nonempty table");
    Ok(match a.format {
        Format::Json => to_json(&serde_json::json!({ "n": a.n, "value": b })),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                value: String,
            }
            to_csv(&[Row { n: a.n, value: b.to_string() }])
        }
        Format::Text => format!("{b}\n"),
    })
}
