//! The `deltakit` command line: spec ingestion, scans, reports and the report cache.

mod cache;
mod corpus;
mod report;
mod specfile;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::checks::{self, BlockAnalysis, CheckOutcome};
use crate::error::Error;
use crate::factor::{scan_region, with_workers, Engine, LengthSet};
use crate::groups::FiniteAbelianGroup;
use crate::tblock::{self, BlockElement, Caps, TBlockSpec, DEFAULT_REGION_LIMIT};
use crate::zerosum::ZeroSumMonoid;

pub use cache::{Cache, CACHE_ENV};
pub use corpus::bundled_corpus;
pub use report::{InvariantReport, RegionInfo, Status, Value, WitnessEntry};
pub use specfile::{Expectations, ExpectedLengths, ParseError, SpecFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const ANCHOR_TRIVIAL_PRODUCT: &str =
    "trivial class group: B is the product of its components, so distances are {1} with c = 3 \
     when some component has rank >= 2 and B is factorial otherwise";
const ANCHOR_SMALL_GROUP: &str = "the set of distances of B(G) is empty exactly when |G| <= 2";
const ANCHOR_DAVENPORT: &str = "D(G) = D*(G) for p-groups and groups of rank at most 2";
const ANCHOR_EXTREMAL: &str = "max distance D(G) - 2 and catenary degree D(G) exactly for cyclic groups and elementary 2-groups";
const ANCHOR_NEAR_EXTREMAL: &str =
    "max distance D(G) - 3 and catenary degree D(G) - 1 exactly for C_2^(r-1) + C_4 (r >= 2) and C_2 + C_2n (n >= 2)";
const ANCHOR_GROUP_INTERVAL: &str =
    "for |G| >= 3 the set of distances of B(G) is an interval starting at 1";
const ANCHOR_BOUNDS: &str =
    "max(exp(G) - 2, r(G) - 1) <= max distance <= c - 2 <= D(G) - 2 and 1 + sum floor(n_i / 2) <= c";

#[derive(Debug, Parser)]
#[command(
    name = "deltakit",
    version,
    about = "Sets of lengths, distances and catenary degrees of zero-sum and T-block monoids"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for scans (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Neither read nor write cached reports.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Report cache directory (default: $DELTAKIT_CACHE_DIR, then ~/.cache/deltakit).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Davenport constant, distances and catenary degree of B(G) for G = C_n1 + ... + C_nr.
    Group {
        /// Cyclic factors; any list of moduli is reduced to invariant factors.
        #[arg(required = true)]
        moduli: Vec<u64>,
        /// Only `seq=K` is used: the longest zero-sum sequence scanned (default 3·D(G)).
        #[arg(long)]
        caps: Option<CapsArg>,
        /// Largest accepted group order.
        #[arg(long, default_value_t = 64)]
        max_order: usize,
        /// Largest accepted scan region.
        #[arg(long, default_value_t = DEFAULT_REGION_LIMIT)]
        limit: u128,
    },
    /// Scans the T-block monoid described by a spec file.
    Tblock {
        spec: PathBuf,
        /// Region caps, overriding the spec file, e.g. `seq=6,exp=6`.
        #[arg(long)]
        caps: Option<CapsArg>,
        /// Require the order-2 max-distance formula to apply.
        #[arg(long)]
        thm33: bool,
        #[arg(long, default_value_t = DEFAULT_REGION_LIMIT)]
        limit: u128,
    },
    /// Runs every spec file in a directory and fails if any check fails.
    Verify {
        corpus: PathBuf,
        #[arg(long)]
        caps: Option<CapsArg>,
        #[arg(long, default_value_t = DEFAULT_REGION_LIMIT)]
        limit: u128,
    },
    /// Writes the bundled example corpus.
    Examples {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
}

/// Parsed `--caps seq=K,exp=K`; either part may be omitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CapsArg {
    pub seq: Option<usize>,
    pub exp: Option<u32>,
}

impl CapsArg {
    pub fn apply(self, base: Caps) -> Caps {
        Caps {
            seq_len_cap: self.seq.unwrap_or(base.seq_len_cap),
            exp_cap: self.exp.unwrap_or(base.exp_cap),
        }
    }
}

impl FromStr for CapsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = CapsArg::default();
        for item in s.split(',').filter(|x| !x.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
            let bad = |e: std::num::ParseIntError| format!("bad value for {key}: {e}");
            match key.trim() {
                "seq" => out.seq = Some(val.trim().parse().map_err(bad)?),
                "exp" => out.exp = Some(val.trim().parse().map_err(bad)?),
                other => return Err(format!("unknown cap `{other}` (expected seq or exp)")),
            }
        }
        Ok(out)
    }
}

/// Errors that end a command with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Compute(#[from] Error),
}

/// Parses arguments and runs, printing to stdout; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_to(args, &mut std::io::stdout())
}

/// [`run`] with reports written to `out`.
pub fn run_to<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write + Send,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::open(cli.cache_dir.as_deref())
    };
    let workers = cli.workers;
    let format = cli.format;
    with_workers(workers, move || dispatch(cli.command, format, &cache, out))
}

fn dispatch(command: Command, format: Format, cache: &Cache, out: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Group {
            moduli,
            caps,
            max_order,
            limit,
        } => FiniteAbelianGroup::canonicalize(&moduli)
            .map_err(CliError::from)
            .and_then(|g| {
                let reports = group_reports(&g, caps.and_then(|c| c.seq), max_order, limit, cache)?;
                Ok((g, reports))
            })
            .map(|(g, reports)| emit(out, format, &format!("group {g}"), &reports)),
        Command::Tblock {
            spec,
            caps,
            thm33,
            limit,
        } => load_spec(&spec)
            .and_then(|file| {
                let reports = tblock_reports(&file, caps.unwrap_or_default(), thm33, limit, cache)?;
                Ok((file, reports))
            })
            .map(|(file, reports)| emit(out, format, &spec_label(&file, &spec), &reports)),
        Command::Verify {
            corpus,
            caps,
            limit,
        } => return verify(&corpus, caps.unwrap_or_default(), limit, format, cache, out),
        Command::Examples { dir } => write_examples(&dir).map(|paths| {
            for p in paths {
                let _ = writeln!(out, "{}", p.display());
            }
            EXIT_OK
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn spec_label(file: &SpecFile, path: &Path) -> String {
    file.name
        .clone()
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_spec(path: &Path) -> Result<SpecFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    SpecFile::parse(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Prints reports and returns the exit code they imply.
fn emit(out: &mut dyn Write, format: Format, header: &str, reports: &[InvariantReport]) -> i32 {
    let failures = reports.iter().filter(|r| r.status.is_failure()).count();
    match format {
        Format::Json => {
            for r in reports {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string(r).expect("reports serialize")
                );
            }
        }
        Format::Text => {
            let _ = writeln!(out, "{header}");
            if let Some(r) = reports.first() {
                let caps = match (r.region.seq_len_cap, r.region.exp_cap) {
                    (Some(s), Some(e)) => format!("seq={s},exp={e}"),
                    (Some(s), None) => format!("seq={s}"),
                    _ => "none".to_string(),
                };
                let _ = writeln!(out, "  region {caps}, {} elements", r.region.elements);
            }
            for r in reports {
                let _ = writeln!(out, "{}", r.summary_line());
            }
            let _ = writeln!(out, "  {} reports, {failures} failed", reports.len());
        }
    }
    if failures > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

/// Serves a whole batch from the cache, or computes and stores it.
fn cached_batch(
    cache: &Cache,
    digest: &str,
    region: &RegionInfo,
    planned: &[String],
    compute: impl FnOnce() -> Result<(u64, Vec<InvariantReport>), CliError>,
) -> Result<Vec<InvariantReport>, CliError> {
    let key = region.key();
    let hits: Option<Vec<InvariantReport>> = planned
        .iter()
        .map(|name| cache.get(digest, name, &key))
        .collect();
    if let Some(hits) = hits {
        log::info!("served {} reports from cache", hits.len());
        return Ok(hits);
    }
    let (elements, mut reports) = compute()?;
    for r in &mut reports {
        r.spec_digest = digest.to_string();
        r.region = RegionInfo {
            elements,
            ..region.clone()
        };
        cache.put(&key, r);
    }
    debug_assert_eq!(
        reports
            .iter()
            .map(|r| r.invariant.as_str())
            .collect::<Vec<_>>(),
        planned.iter().map(String::as_str).collect::<Vec<_>>()
    );
    Ok(reports)
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn lengths_of(l: &LengthSet) -> Vec<u32> {
    l.to_vec()
}

fn check_report(c: &CheckOutcome, runtime_ms: u64) -> InvariantReport {
    let mut r =
        InvariantReport::predicted(c.name, Value::Holds(c.passed), Value::Holds(true), c.anchor)
            .with_detail(c.detail.clone());
    r.runtime_ms = runtime_ms;
    r
}

fn timed_check(f: impl FnOnce() -> CheckOutcome) -> InvariantReport {
    let start = Instant::now();
    let c = f();
    check_report(&c, elapsed_ms(start))
}

/// Reports for `B(G)`: Davenport constant, distances, catenary degree and the bounds relating them.
pub fn group_reports(
    g: &FiniteAbelianGroup,
    seq_cap: Option<usize>,
    max_order: usize,
    limit: u128,
    cache: &Cache,
) -> Result<Vec<InvariantReport>, CliError> {
    if g.order() > max_order {
        return Err(CliError::Usage(format!(
            "group {g} has order {} above --max-order {max_order}",
            g.order()
        )));
    }
    let digest = hex::encode(<sha2::Sha256 as sha2::Digest>::digest(
        serde_json::to_vec(&serde_json::json!({ "group": g })).expect("groups serialize"),
    ));
    let start = Instant::now();
    let m = ZeroSumMonoid::full(g.clone());
    let d = m.davenport();
    let len = seq_cap.unwrap_or(3 * d as usize);
    let region_info = RegionInfo {
        seq_len_cap: Some(len),
        exp_cap: None,
        elements: 0,
    };
    let planned: Vec<String> = [
        "order",
        "exponent",
        "d_star",
        "davenport",
        "delta",
        "max_delta",
        "catenary",
        "min_equals_gcd",
        "interval",
        "bounds",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cached_batch(cache, &digest, &region_info, &planned, || {
        let size = m.zero_free_region_size(len);
        if size > limit {
            return Err(Error::RegionTooLarge { count: size, limit }.into());
        }
        let region = m.zero_free_region(len);
        let scan = scan_region(&m, &region, true)?;
        let runtime = elapsed_ms(start);
        let witness = |i: Option<usize>| {
            i.map(|i| {
                let seq = m.to_sequence(&region.elements[i]);
                (
                    serde_json::to_value(seq).expect("sequences serialize"),
                    lengths_of(&scan.lengths[i]),
                )
            })
        };
        let max_delta = scan.max_delta().unwrap_or(0);
        let catenary = scan.catenary.unwrap_or(0);
        let n = g.order();
        let factors = g.invariant_factors();
        let near_extremal = (factors.len() >= 2
            && factors[factors.len() - 1] == 4
            && factors[..factors.len() - 1].iter().all(|&f| f == 2))
            || (factors.len() == 2 && factors[0] == 2 && factors[1] % 2 == 0 && factors[1] >= 4);
        let prediction: Option<(u32, u32, &str)> = if n <= 2 {
            Some((0, 0, ANCHOR_SMALL_GROUP))
        } else if g.is_cyclic() || g.is_elementary_two_group() {
            Some((d - 2, d, ANCHOR_EXTREMAL))
        } else if near_extremal {
            Some((d - 3, d - 1, ANCHOR_NEAR_EXTREMAL))
        } else {
            None
        };

        let mut reports = vec![
            InvariantReport::info("order", Value::Integer(n as i64)),
            InvariantReport::info("exponent", Value::Integer(g.exponent() as i64)),
            InvariantReport::info("d_star", Value::Integer(g.d_star() as i64)),
        ];
        let is_p_group = n > 1 && {
            let p = (2..=n)
                .find(|p| n % p == 0)
                .expect("n > 1 has a prime factor");
            let mut k = n;
            while k % p == 0 {
                k /= p;
            }
            k == 1
        };
        reports.push(if is_p_group || g.rank() <= 2 {
            InvariantReport::predicted(
                "davenport",
                Value::Integer(d as i64),
                Value::Integer(g.d_star() as i64),
                ANCHOR_DAVENPORT,
            )
        } else {
            InvariantReport::info("davenport", Value::Integer(d as i64))
        });

        let delta = Value::set(&scan.delta);
        let mut delta_report = match prediction {
            Some((md, _, anchor)) => {
                InvariantReport::predicted("delta", delta.clone(), Value::range(md), anchor)
            }
            None => InvariantReport::info("delta", delta.clone()),
        };
        let mut md_report = match prediction {
            Some((md, _, anchor)) => InvariantReport::predicted(
                "max_delta",
                Value::Integer(max_delta as i64),
                Value::Integer(md as i64),
                anchor,
            ),
            None => InvariantReport::info("max_delta", Value::Integer(max_delta as i64)),
        };
        let mut c_report = match prediction {
            Some((_, c, anchor)) => InvariantReport::predicted(
                "catenary",
                Value::Integer(catenary as i64),
                Value::Integer(c as i64),
                anchor,
            ),
            None => InvariantReport::info("catenary", Value::Integer(catenary as i64)),
        };
        if let Some((e, l)) = witness(scan.delta_witness) {
            delta_report = delta_report.with_witness(e.clone(), l.clone());
            md_report = md_report.with_witness(e, l);
        }
        if let Some((e, l)) = witness(scan.catenary_witness) {
            c_report = c_report.with_witness(e, l);
        }
        reports.extend([delta_report, md_report, c_report]);
        for r in &mut reports {
            r.runtime_ms = runtime;
        }

        reports.push(gcd_report(&scan.delta));
        reports.push(if n >= 3 {
            let c = checks::interval(&scan.delta);
            InvariantReport::predicted(
                "interval",
                Value::Holds(c.passed),
                Value::Holds(true),
                ANCHOR_GROUP_INTERVAL,
            )
            .with_detail(c.detail)
        } else {
            InvariantReport::info("interval", Value::Holds(scan.delta.is_empty()))
        });

        let lower = (g.exponent().saturating_sub(2)).max(g.rank().saturating_sub(1) as u32);
        let c_lower = 1 + factors.iter().map(|&f| f / 2).sum::<u32>();
        let bounds = if n >= 3 {
            let holds = lower <= max_delta
                && max_delta + 2 <= catenary
                && catenary <= d
                && c_lower <= catenary;
            InvariantReport::predicted(
                "bounds",
                Value::Holds(holds),
                Value::Holds(true),
                ANCHOR_BOUNDS,
            )
            .with_detail(format!(
                "{lower} <= {max_delta} <= {} <= {}; {c_lower} <= {catenary}",
                catenary.saturating_sub(2),
                d - 2
            ))
        } else {
            InvariantReport::info("bounds", Value::Holds(true))
        };
        reports.push(bounds);
        Ok((region.elements.len() as u64, reports))
    })
}

fn gcd_report(delta: &std::collections::BTreeSet<u32>) -> InvariantReport {
    match checks::min_equals_gcd(delta) {
        Some(c) => check_report(&c, 0),
        None => {
            InvariantReport::info("min_equals_gcd", Value::Holds(true)).with_detail("no distances")
        }
    }
}

/// Names of the reports [`tblock_reports`] produces for a spec, in order.
fn tblock_plan(spec: &TBlockSpec, file: &SpecFile) -> Vec<String> {
    let order_two = spec.group().order() == 2 && spec.ground_is_full();
    let order_two_positive = order_two && tblock::thm33_max_delta(spec).is_ok_and(|m| m > 0);
    let mut names: Vec<String> = vec!["delta".into(), "max_delta".into(), "catenary".into()];
    if order_two_positive {
        names.push("order_two_witness".into());
    }
    names.push("min_equals_gcd".into());
    if checks::interval_hypotheses(spec) {
        names.push("interval".into());
        names.push("descent".into());
    }
    if spec.group().is_trivial() {
        names.push("trivial_group".into());
    }
    if spec.ground_is_full() {
        names.push("atom_exchange".into());
        names.push("full_support_swap".into());
    }
    if order_two {
        names.push("single_component_bound".into());
    }
    for i in 0..spec.components().len() {
        names.push(format!("component_law[{i}]"));
    }
    let e = &file.expect;
    if e.delta.is_some() {
        names.push("expect.delta".into());
    }
    if !e.delta_contains.is_empty() {
        names.push("expect.delta_contains".into());
    }
    if e.max_delta.is_some() {
        names.push("expect.max_delta".into());
    }
    if e.catenary.is_some() {
        names.push("expect.catenary".into());
    }
    for i in 0..e.lengths.len() {
        names.push(format!("expect.lengths[{i}]"));
    }
    names
}

fn element_json(a: &BlockElement) -> serde_json::Value {
    serde_json::to_value(a).expect("elements serialize")
}

/// Reports for a T-block spec: distances, catenary degree, theorem predictions and property checks.
pub fn tblock_reports(
    file: &SpecFile,
    caps: CapsArg,
    thm33: bool,
    limit: u128,
    cache: &Cache,
) -> Result<Vec<InvariantReport>, CliError> {
    let spec = file.to_spec()?;
    let order_two = spec.group().order() == 2 && spec.ground_is_full();
    if thm33 && !order_two {
        return Err(CliError::Usage(format!(
            "--thm33 needs a class group of order 2 with every class in the ground set; this spec has {} (order {})",
            spec.group(),
            spec.group().order()
        )));
    }
    let caps = caps.apply(file.scan.unwrap_or_else(|| spec.default_caps()));
    let region_info = RegionInfo {
        seq_len_cap: Some(caps.seq_len_cap),
        exp_cap: Some(caps.exp_cap),
        elements: 0,
    };
    let planned = tblock_plan(&spec, file);
    cached_batch(cache, &file.digest(), &region_info, &planned, || {
        let start = Instant::now();
        let an = BlockAnalysis::run(&spec, caps, limit)?;
        let runtime = elapsed_ms(start);
        let witness = |i: Option<usize>| {
            i.map(|i| {
                (
                    element_json(&an.region.elements[i]),
                    lengths_of(&an.scan.lengths[i]),
                )
            })
        };
        let max_delta = an.scan.max_delta().unwrap_or(0);
        let catenary = an.scan.catenary.unwrap_or(0);

        let formula = if order_two {
            Some(tblock::thm33_max_delta(&spec)?)
        } else {
            None
        };
        // (max distance, catenary, anchor); the catenary is only pinned when positive distances exist.
        let prediction: Option<(u32, Option<u32>, &str)> = if let Some(f) = formula {
            Some((f, (f > 0).then_some(f + 2), checks::ANCHOR_ORDER_TWO))
        } else if spec.group().is_trivial() {
            let wide = spec.components().iter().any(|c| c.rank() >= 2);
            Some((
                wide as u32,
                Some(if wide { 3 } else { 0 }),
                ANCHOR_TRIVIAL_PRODUCT,
            ))
        } else {
            None
        };

        let mut reports = Vec::new();
        let delta = Value::set(&an.scan.delta);
        let mut r = match prediction {
            Some((md, _, anchor)) => {
                InvariantReport::predicted("delta", delta, Value::range(md), anchor)
            }
            None => InvariantReport::info("delta", delta),
        };
        if let Some((e, l)) = witness(an.scan.delta_witness) {
            r = r.with_witness(e, l);
        }
        reports.push(r);
        let mut r = match prediction {
            Some((md, _, anchor)) => InvariantReport::predicted(
                "max_delta",
                Value::Integer(max_delta as i64),
                Value::Integer(md as i64),
                anchor,
            ),
            None => InvariantReport::info("max_delta", Value::Integer(max_delta as i64)),
        };
        if let Some((e, l)) = witness(an.scan.delta_witness) {
            r = r.with_witness(e, l);
        }
        reports.push(r);
        let c_value = Value::Integer(catenary as i64);
        let mut r = match prediction {
            Some((_, Some(c), anchor)) => {
                let anchor = if formula.is_some() {
                    checks::ANCHOR_CATENARY_IDENTITY
                } else {
                    anchor
                };
                InvariantReport::predicted("catenary", c_value, Value::Integer(c as i64), anchor)
            }
            _ => InvariantReport::info("catenary", c_value),
        };
        if let Some((e, l)) = witness(an.scan.catenary_witness) {
            r = r.with_witness(e, l);
        }
        reports.push(r);
        for r in &mut reports {
            r.runtime_ms = runtime;
        }

        let mut engine = Engine::new(&an.monoid);
        if formula.is_some_and(|f| f > 0) {
            let start = Instant::now();
            let w = tblock::witness(&spec)?;
            let product = spec.multiply(&w.first, &w.second);
            let l = engine.length_set(&product)?;
            let mut r = InvariantReport::predicted(
                "order_two_witness",
                Value::Set(l.to_vec()),
                Value::Set(w.expected_lengths.clone()),
                checks::ANCHOR_ORDER_TWO,
            )
            .with_detail(format!("construction case {}", w.case));
            for a in [&w.first, &w.second, &product] {
                let la = engine.length_set(a)?;
                r = r.with_witness(element_json(a), la.to_vec());
            }
            r.runtime_ms = elapsed_ms(start);
            reports.push(r);
        }

        reports.push(gcd_report(&an.scan.delta));
        if checks::interval_hypotheses(&spec) {
            reports.push(timed_check(|| checks::interval(&an.scan.delta)));
            reports.push(timed_check(|| {
                checks::descent(&an).expect("hypotheses checked")
            }));
        }
        if let Some(c) = checks::trivial_group(&spec, &an.scan.delta) {
            reports.push(check_report(&c, 0));
        }
        if spec.ground_is_full() {
            reports.push(timed_check(|| checks::atom_exchange(&an)));
            reports.push(timed_check(|| checks::full_support_swap(&an)));
        }
        if order_two {
            reports.push(timed_check(|| {
                checks::single_component_bound(&an).expect("order two")
            }));
        }
        let start = Instant::now();
        let laws = checks::component_laws(&spec, caps.exp_cap);
        let each = elapsed_ms(start) / laws.len().max(1) as u64;
        for (i, c) in laws.iter().enumerate() {
            let mut r = check_report(c, each);
            r.invariant = format!("component_law[{i}]");
            reports.push(r);
        }

        let e = &file.expect;
        if let Some(d) = &e.delta {
            let mut want = d.clone();
            want.sort_unstable();
            want.dedup();
            reports.push(InvariantReport::declared(
                "expect.delta",
                Value::set(&an.scan.delta),
                Value::Set(want),
            ));
        }
        if !e.delta_contains.is_empty() {
            let missing: Vec<u32> = e
                .delta_contains
                .iter()
                .copied()
                .filter(|d| !an.scan.delta.contains(d))
                .collect();
            let mut r = InvariantReport::declared(
                "expect.delta_contains",
                Value::Holds(missing.is_empty()),
                Value::Holds(true),
            );
            if !missing.is_empty() {
                r = r.with_detail(format!("missing {missing:?}"));
            }
            reports.push(r);
        }
        if let Some(m) = e.max_delta {
            reports.push(InvariantReport::declared(
                "expect.max_delta",
                Value::Integer(max_delta as i64),
                Value::Integer(m as i64),
            ));
        }
        if let Some(c) = e.catenary {
            reports.push(InvariantReport::declared(
                "expect.catenary",
                Value::Integer(catenary as i64),
                Value::Integer(c as i64),
            ));
        }
        for (i, x) in e.lengths.iter().enumerate() {
            let name = format!("expect.lengths[{i}]");
            let mut want = x.lengths.clone();
            want.sort_unstable();
            want.dedup();
            let r = match spec
                .check_shape(&x.element)
                .map(|()| spec.is_member(&x.element))
            {
                Ok(true) => {
                    let l = engine.length_set(&x.element)?;
                    InvariantReport::declared(name, Value::Set(l.to_vec()), Value::Set(want))
                        .with_witness(element_json(&x.element), l.to_vec())
                }
                Ok(false) => InvariantReport::declared(name, Value::Set(vec![]), Value::Set(want))
                    .with_detail("element is not in the monoid"),
                Err(err) => InvariantReport::declared(name, Value::Set(vec![]), Value::Set(want))
                    .with_detail(err.to_string()),
            };
            reports.push(r);
        }
        Ok((an.region.elements.len() as u64, reports))
    })
}

/// Runs every `*.json` spec in `dir`; exit code 2 on unreadable specs, 1 on failed checks.
pub fn verify(
    dir: &Path,
    caps: CapsArg,
    limit: u128,
    format: Format,
    cache: &Cache,
    out: &mut dyn Write,
) -> i32 {
    let entries = match std::fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {}: {e}", dir.display());
            return EXIT_USAGE;
        }
    };
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        log::warn!("no spec files in {}", dir.display());
        eprintln!("warning: no spec files in {}", dir.display());
        return EXIT_OK;
    }
    let mut errors = 0;
    let mut failed_specs = 0;
    let mut rows = Vec::new();
    for path in &paths {
        let result = load_spec(path).and_then(|f| {
            let r = tblock_reports(&f, caps, false, limit, cache)?;
            Ok((f, r))
        });
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match result {
            Ok((_, reports)) => {
                let failed: Vec<&InvariantReport> =
                    reports.iter().filter(|r| r.status.is_failure()).collect();
                let certified = reports.iter().filter(|r| r.certified).count();
                if format == Format::Json {
                    for r in &reports {
                        let _ = writeln!(
                            out,
                            "{}",
                            serde_json::to_string(r).expect("reports serialize")
                        );
                    }
                }
                let verdict = if failed.is_empty() { "pass" } else { "FAIL" };
                rows.push(format!(
                    "{stem:<40} {:>3} reports {certified:>3} certified  {verdict}",
                    reports.len()
                ));
                for r in &failed {
                    rows.push(r.summary_line());
                }
                if !failed.is_empty() {
                    failed_specs += 1;
                }
            }
            Err(e) => {
                errors += 1;
                rows.push(format!("{stem:<40} error: {e}"));
            }
        }
    }
    let summary = format!(
        "{} specs, {failed_specs} failed, {errors} unreadable",
        paths.len()
    );
    match format {
        Format::Text => {
            for row in rows {
                let _ = writeln!(out, "{row}");
            }
            let _ = writeln!(out, "{summary}");
        }
        Format::Json => {
            for row in rows {
                eprintln!("{row}");
            }
            eprintln!("{summary}");
        }
    }
    if errors > 0 {
        EXIT_USAGE
    } else if failed_specs > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

/// Writes the bundled corpus into `dir`, one file per spec.
pub fn write_examples(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |source| CliError::Io {
        path: dir.display().to_string(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut written = Vec::new();
    for spec in bundled_corpus() {
        let name = spec.name.clone().expect("bundled specs are named");
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, spec.to_pretty_json()).map_err(io)?;
        written.push(path);
    }
    Ok(written)
}
