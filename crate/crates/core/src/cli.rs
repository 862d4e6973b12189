//! Command-line front end: `run`, `show-tables`, `list-claims`.
//!
//! Exit codes: 0 all claims pass, 1 some claim fails, 2 usage error or
//! unknown selector, 3 internal inconsistency.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::claims::{registry, select, verify_all, Bounds, Certificate};
use crate::error::Error;
use crate::qfield::{fmt_rational, rat, Rational};
use crate::reidtai::{
    c_min_red, case_analysis, enumerate_exceptional_orders, enumerate_small_d, tabulated_small_d, CaseId,
    ExceptionalRow, EXCEPTIONAL_TABLE_A, EXCEPTIONAL_TABLE_B, EXCEPTIONAL_TABLE_C,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ballquot", version, about = "Exact certificates for Reid-Tai estimates on ball quotients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute claims and write a report.
    Run(RunArgs),
    /// Print the reproduced tables next to the published values.
    ShowTables {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered claim ids.
    ListClaims {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Claim ids or globs (`*`, `?`), comma separated; `all` selects everything.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub claims: Vec<String>,
    /// Upper bound on r for order enumerations.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub r_limit: Option<u64>,
    /// Upper bound on d for the d-list enumerations.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub d_limit: Option<u64>,
    /// Range of |D| as `LO..HI` (inclusive) for sweeps over fields.
    #[arg(long, value_parser = parse_range, default_value = "1..1000")]
    pub d_range: (u64, u64),
    /// Random instances per field in the cusp sweeps.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override an expected value, `LABEL=VALUE`; repeatable.
    #[arg(long, value_parser = parse_expect)]
    pub expect: Vec<(String, String)>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once("..")
        .or_else(|| s.split_once(':'))
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= LO <= HI, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_expect(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.rsplit_once('=').ok_or_else(|| format!("expected LABEL=VALUE, got {s:?}"))?;
    if k.is_empty() {
        return Err("empty label".into());
    }
    Ok((k.to_string(), v.to_string()))
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub bounds: Bounds,
    pub certificates: Vec<Certificate>,
    pub passed: usize,
    pub failed: usize,
}

/// Parses `args` (including the program name) and executes; returns the
/// exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    match cli.command {
        Command::Run(args) => run(&args, stdout, stderr),
        Command::ShowTables { format, out } => {
            let body = match format {
                Format::Text => show_tables(),
                Format::Json => serde_json::to_string_pretty(&tables_json()).expect("json") + "\n",
            };
            emit(&body, out.as_ref(), stdout, stderr)
        }
        Command::ListClaims { format } => {
            let body = match format {
                Format::Text => registry().iter().fold(String::new(), |mut s, c| {
                    let _ = writeln!(s, "{:<24} {}", c.id, c.statement);
                    s
                }),
                Format::Json => {
                    let v: Vec<_> = registry().iter().map(|c| json!({ "claim_id": c.id, "statement": c.statement })).collect();
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
            };
            emit(&body, None, stdout, stderr)
        }
    }
}

fn emit(body: &str, out: Option<&PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match out {
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => EXIT_PASS,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
        None => {
            let _ = stdout.write_all(body.as_bytes());
            EXIT_PASS
        }
    }
}

pub fn run(args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let ids = match select(&args.claims) {
        Ok(ids) => ids,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let bounds = Bounds {
        r_limit: args.r_limit,
        d_limit: args.d_limit,
        d_range: args.d_range,
        samples: args.samples as usize,
    };
    let expected: BTreeMap<String, String> = args.expect.iter().cloned().collect();
    let mut certificates = Vec::new();
    let mut internal = false;
    for (id, res) in ids.iter().zip(verify_all(&ids, &bounds, args.seed, &expected)) {
        match res {
            Ok(c) => certificates.push(c),
            Err(e) => {
                internal = true;
                let kind = if matches!(e, Error::Inconsistency(_)) { "inconsistency" } else { "error" };
                let _ = writeln!(stderr, "{kind} in {id}: {e}");
            }
        }
    }
    let known: BTreeSet<&str> = certificates.iter().flat_map(|c| c.computed.iter().map(|x| x.label.as_str())).collect();
    if let Some(label) = expected.keys().find(|l| !known.contains(l.as_str())) {
        let _ = writeln!(stderr, "error: --expect label {label:?} matches no computed value");
        return EXIT_USAGE;
    }
    let passed = certificates.iter().filter(|c| c.passed()).count();
    let failed = certificates.len() - passed;
    let report = Report { seed: args.seed, bounds, certificates, passed, failed };
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("json") + "\n",
        Format::Text => render_text(&report),
    };
    let io = emit(&body, args.out.as_ref(), stdout, stderr);
    if internal {
        EXIT_INTERNAL
    } else if io != EXIT_PASS {
        io
    } else if failed > 0 {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

fn render_value(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render_text(report: &Report) -> String {
    let mut s = String::new();
    for c in &report.certificates {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{verdict} {}: {}", c.claim_id, c.statement);
        for x in &c.computed {
            let mut line = format!("    {} = {}", x.label, render_value(&x.value));
            if let (Some(rel), Some(e)) = (x.relation, &x.expected) {
                let mark = if x.pass == Some(true) { "ok" } else { "MISMATCH" };
                let _ = write!(line, "  [{rel} {}] {mark}", render_value(e));
            }
            let _ = writeln!(s, "{line}");
        }
    }
    let _ = writeln!(s, "seed {}: {} passed, {} failed", report.seed, report.passed, report.failed);
    s
}

fn join(xs: impl IntoIterator<Item = u64>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn fmt_list(xs: &[u32]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn table_rows(name: &str, rows: &[ExceptionalRow], s: &mut String) {
    let _ = writeln!(s, "{name}");
    for row in rows {
        let mut v = row.values();
        v.retain(|&r| r >= 3);
        v.sort_unstable();
        let _ = writeln!(
            s,
            "  a={} b={} p={} q={}  ->  {}",
            fmt_list(row.a),
            fmt_list(row.b),
            join(row.p.iter().copied()),
            join(row.q.iter().copied()),
            join(v)
        );
    }
}

const CMIN_RED_PUBLISHED: [(u64, i64, i64); 11] =
    [(30, 11, 15), (24, 5, 6), (20, 4, 5), (15, 11, 15), (14, 4, 7), (12, 1, 3), (8, 1, 4), (7, 4, 7), (6, 0, 1), (4, 0, 1), (3, 0, 1)];

fn published_case_table(case: CaseId) -> Vec<(u64, Rational)> {
    let t: &[(u64, i64, i64)] = match case {
        CaseId::Phi2 => &[(1, 1, 6), (2, 1, 6), (3, 1, 3), (4, 1, 2), (6, 1, 3)],
        CaseId::R7_14 => &[(1, 1, 14), (2, 1, 14), (3, 3, 7), (4, 4, 7), (6, 3, 7), (7, 4, 7), (14, 4, 7)],
        CaseId::DMinus5 => &[(1, 1, 30), (2, 1, 30), (3, 5, 12), (4, 8, 15), (6, 5, 12), (20, 4, 5)],
        CaseId::DMinus6 => &[(24, 5, 6)],
        CaseId::DMinus15 => &[(15, 11, 15), (30, 11, 15)],
    };
    t.iter().map(|&(d, p, q)| (d, rat(p, q))).collect()
}

/// Text rendering of every reproduced table.
pub fn show_tables() -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Exceptional orders (published tables, values r >= 3)");
    table_rows("  r = 2^a p^b q", EXCEPTIONAL_TABLE_A, &mut s);
    table_rows("  r = p^a q^b", EXCEPTIONAL_TABLE_B, &mut s);
    table_rows("  r = p^a", EXCEPTIONAL_TABLE_C, &mut s);
    let found = enumerate_exceptional_orders(100_000);
    let tab = crate::reidtai::tabulated_exceptional_orders();
    let _ = writeln!(s, "  computed (r <= 100000, {} values): {}", found.len(), join(found.iter().copied()));
    let extra: Vec<u64> = found.iter().copied().filter(|r| !tab.contains(r)).collect();
    let missing: Vec<u64> = tab.iter().copied().filter(|r| !found.contains(r)).collect();
    let _ = writeln!(s, "  computed but not tabulated: {}", if extra.is_empty() { "none".into() } else { join(extra) });
    let _ = writeln!(s, "  tabulated but not computed: {}", if missing.is_empty() { "none".into() } else { join(missing) });
    let _ = writeln!(s);

    let _ = writeln!(s, "d-list (sum_(j <= phi(d)/2) j/d < 1)");
    let _ = writeln!(s, "  computed:  {}", join(enumerate_small_d(10_000)));
    let _ = writeln!(s, "  published: {}", join(tabulated_small_d()));
    let _ = writeln!(s);

    let _ = writeln!(s, "c_min^red(d)          computed  published");
    for (d, p, q) in CMIN_RED_PUBLISHED {
        let v = c_min_red(d, &|_| true).map(|m| fmt_rational(&m.value)).unwrap_or_else(|e| e.to_string());
        let _ = writeln!(s, "  {d:>3}                 {v:<9} {}", fmt_rational(&rat(p, q)));
    }
    let _ = writeln!(s);

    for case in CaseId::ALL {
        match case_analysis(case, 11) {
            Ok(rep) => {
                let field = rep.field.map_or("any D < -3".to_string(), |f| format!("D = {}", f.d()));
                let _ = writeln!(s, "Case {case}: r in {{{}}}, {field}", join(rep.orders.iter().copied()));
                let published: BTreeMap<u64, Rational> = published_case_table(case).into_iter().collect();
                for (d, v) in rep.per_d_contribution.iter().filter(|(d, v)| **v < rat(1, 1) || published.contains_key(d)) {
                    let p = published.get(d).map_or("-".to_string(), fmt_rational);
                    let _ = writeln!(s, "  {d} → {}   (published {p})", fmt_rational(v));
                }
                let _ = writeln!(
                    s,
                    "  omega → {} (r = {})   threshold n >= {}",
                    fmt_rational(&rep.omega.value),
                    rep.omega.r,
                    rep.threshold.map_or("-".into(), |t| t.to_string())
                );
            }
            Err(e) => {
                let _ = writeln!(s, "Case {case}: error {e}");
            }
        }
    }
    s
}

fn tables_json() -> serde_json::Value {
    let cases: Vec<_> = CaseId::ALL
        .iter()
        .filter_map(|&c| case_analysis(c, 11).ok())
        .map(|rep| {
            json!({
                "case": rep.case_id,
                "per_d": crate::claims::q_map(&rep.per_d_contribution),
                "omega": fmt_rational(&rep.omega.value),
                "threshold": rep.threshold,
            })
        })
        .collect();
    let cmin: BTreeMap<String, String> = CMIN_RED_PUBLISHED
        .iter()
        .filter_map(|&(d, _, _)| c_min_red(d, &|_| true).ok().map(|m| (d.to_string(), fmt_rational(&m.value))))
        .collect();
    json!({
        "exceptional_orders": enumerate_exceptional_orders(100_000),
        "exceptional_tables": [EXCEPTIONAL_TABLE_A, EXCEPTIONAL_TABLE_B, EXCEPTIONAL_TABLE_C],
        "small_d": enumerate_small_d(10_000),
        "c_min_red": cmin,
        "cases": cases,
    })
}
