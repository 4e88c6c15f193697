//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::builders::{remark1_relation, remark3_auxiliary, remark3_relation, theorem_rhs};
use crate::cache::{Cache, CacheKey};
use crate::error::{Error, Result};
use crate::expand::{analyze, expand_full_with, ExpandOptions, ExpansionReport, ExpansionSummary, DEFAULT_BUDGET};
use crate::localization::{replay_derivation, verify_cprime};
use crate::render::{render_class, Style};
use crate::report::RelationReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "mumford", version, about = "Boundary formulas for the Mumford-type class on M_{g,1}")]
struct Cli {
    /// Cache directory; overrides MUMFORD_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cprime,
    Replay,
    Remark1,
    Remark3,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the boundary formula for genus g.
    Relation {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        genus: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification sweep.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        gmax: u32,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        jmax: u32,
        /// Write every report as JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Rewrite the formula to normal form.
    Expand {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        genus: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        max_steps: u64,
        /// Rewrite rounds; 0 leaves the formula as built.
        #[arg(long)]
        depth: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub suite: Suite,
    pub gmax: u32,
    pub jmax: u32,
    pub passed: bool,
    pub reports: Vec<RelationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandDoc {
    pub report: ExpansionReport,
    pub summary: ExpansionSummary,
}

/// Parse `args` (program name first) and run. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    let cache = if cli.no_cache { None } else { Cache::locate(cli.cache_dir.as_deref()) };
    let result = match cli.command {
        Command::Relation { genus, format, output } => relation(genus, format, output.as_deref(), cache.as_ref(), out),
        Command::Verify { suite, gmax, jmax, report } => verify(suite, gmax, jmax, report.as_deref(), out),
        Command::Expand { genus, max_steps, depth, format, output } => {
            let opts = ExpandOptions { max_steps, depth, ..Default::default() };
            expand(genus, opts, format, output.as_deref(), cache.as_ref(), out, err)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                Error::OutOfRange(_) => EXIT_USAGE,
                _ => EXIT_VERIFY,
            }
        }
    }
}

fn emit(payload: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => fs::write(p, payload)?,
        None => out.write_all(payload.as_bytes())?,
    }
    Ok(())
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Text => "text",
        Format::Latex => "latex",
        Format::Json => "json",
    }
}

fn cached(cache: Option<&Cache>, key: &CacheKey, make: impl FnOnce() -> Result<String>) -> Result<String> {
    if let Some(c) = cache {
        if let Some(hit) = c.get(key)? {
            return Ok(hit);
        }
    }
    let payload = make()?;
    if let Some(c) = cache {
        c.put(key, &payload)?;
    }
    Ok(payload)
}

pub fn relation_payload(genus: u32, style: Option<Style>) -> Result<String> {
    let rhs = theorem_rhs(genus)?;
    Ok(match style {
        Some(s) => format!("{}\n", render_class(&rhs, s)),
        None => format!("{}\n", serde_json::to_string_pretty(&rhs)?),
    })
}

fn relation(genus: u32, format: Format, output: Option<&Path>, cache: Option<&Cache>, out: &mut dyn Write) -> Result<i32> {
    let key = CacheKey::new("relation", genus, format_name(format));
    let style = match format {
        Format::Text => Some(Style::Text),
        Format::Latex => Some(Style::Latex),
        Format::Json => None,
    };
    let payload = cached(cache, &key, || relation_payload(genus, style))?;
    emit(&payload, output, out)?;
    Ok(EXIT_OK)
}

/// Reports for one suite. Report-only entries are marked as such.
pub fn suite_reports(suite: Suite, gmax: u32, jmax: u32) -> Result<Vec<RelationReport>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Cprime {
        for g in 1..=gmax {
            for h in 1..=g {
                out.push(verify_cprime(g, h)?);
            }
        }
    }
    if all || suite == Suite::Replay {
        for g in 1..=gmax {
            out.push(replay_derivation(g)?);
        }
    }
    if all || suite == Suite::Remark1 {
        for g in 1..=gmax {
            for j in 1..=jmax {
                out.push(remark1_relation(g, j)?);
            }
        }
    }
    if all || suite == Suite::Remark3 {
        for g in 2..=gmax.max(2) {
            out.push(remark3_relation(g)?);
            let mut aux = remark3_auxiliary(g, &replay_derivation(g)?.lhs)?;
            aux.report_only = true;
            out.push(aux);
        }
    }
    Ok(out)
}

fn verify(suite: Suite, gmax: u32, jmax: u32, report: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let reports = suite_reports(suite, gmax, jmax)?;
    let mut passed = true;
    for r in &reports {
        let ok = r.holds();
        let tag = match (r.report_only, ok) {
            (true, _) => "REPORT",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        passed &= ok || r.report_only;
        writeln!(out, "{tag} {} g={}", r.variant, r.genus)?;
        for c in &r.checks {
            let mark = if c.passed { "ok" } else if c.hard && !r.report_only { "FAIL" } else { "note" };
            writeln!(out, "    [{mark}] {}: {}", c.name, c.detail)?;
        }
        if !r.residual.is_zero() && !r.report_only {
            writeln!(out, "    residual ({} terms): {}", r.residual.len(), r.residual)?;
        }
    }
    if let Some(p) = report {
        let doc = VerifyDoc { suite, gmax, jmax, passed, reports };
        fs::write(p, serde_json::to_string_pretty(&doc)?)?;
    }
    writeln!(out, "{}", if passed { "all checks passed" } else { "verification failed" })?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}

fn expand_payload(doc: &ExpandDoc, format: Format) -> Result<String> {
    let r = &doc.report;
    Ok(match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(doc)?),
        Format::Latex => format!("{}\n", render_class(&r.normal_form, Style::Latex)),
        Format::Text => {
            let mut s = format!(
                "genus {}: {} terms, {} steps in {} rounds{}\n",
                r.genus,
                r.normal_form.len(),
                r.steps,
                r.rounds,
                if r.complete { "" } else { " (incomplete)" }
            );
            for f in &r.strata {
                s.push_str(&format!(
                    "  {}·{}  |Aut| = {}, marked point on genus {}\n",
                    f.coeff, f.term, f.automorphisms, f.marked_vertex_genus
                ));
            }
            let m = &doc.summary;
            s.push_str(&format!(
                "integral coefficients: raw {}/{}, times |Aut| {}/{}, over |Aut| {}/{}\n",
                m.raw.integral,
                m.terms,
                m.times_automorphisms.integral,
                m.terms,
                m.over_automorphisms.integral,
                m.terms
            ));
            s
        }
    })
}

fn expand(
    genus: u32,
    opts: ExpandOptions,
    format: Format,
    output: Option<&Path>,
    cache: Option<&Cache>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let variant = format!("{}|steps={}|depth={:?}", format_name(format), opts.max_steps, opts.depth);
    let key = CacheKey::new("expand", genus, variant.clone());
    let mut budget = None;
    let payload = cached(cache, &key, || {
        let report = match expand_full_with(genus, opts) {
            Ok(r) => r,
            Err(Error::BudgetExceeded { budget: b, partial }) => {
                budget = Some(b);
                *partial
            }
            Err(e) => return Err(e),
        };
        let summary = analyze(&report);
        let doc = ExpandDoc { report, summary };
        let payload = expand_payload(&doc, format)?;
        if budget.is_some() {
            // partial state goes under its own key so a rerun recomputes
            if let Some(c) = cache {
                c.put(&CacheKey::new("expand", genus, format!("{variant}|partial")), &payload)?;
            }
            return Err(Error::BudgetExceeded { budget: opts.max_steps, partial: Box::new(doc.report) });
        }
        Ok(payload)
    });
    match payload {
        Ok(p) => {
            emit(&p, output, out)?;
            Ok(EXIT_OK)
        }
        Err(Error::BudgetExceeded { budget, partial }) => {
            let doc = ExpandDoc { summary: analyze(&partial), report: *partial };
            emit(&expand_payload(&doc, format)?, output, out)?;
            writeln!(err, "step budget of {budget} exceeded; partial state written")?;
            Ok(EXIT_BUDGET)
        }
        Err(e) => Err(e),
    }
}
