use std::fmt::Write;

use serde::Serialize;

use super::{Overall, VerificationReport};
use crate::check::CheckStatus;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Text => emit_text(r),
        Format::Json => emit_json(r),
    }
}

fn overall_label(o: Overall) -> &'static str {
    match o {
        Overall::Pass => "PASS",
        Overall::Fail => "FAIL",
        Overall::Empty => "no checks run",
    }
}

/// One `CHECK name [anchor] STATUS (time)` line per record, details
/// indented below, then the overall verdict.
pub fn emit_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let suites: Vec<&str> = r.suites.iter().map(|s| s.name()).collect();
    let _ = writeln!(
        out,
        "kform verify alpha={} seed={} degree-bound={} suites={}",
        r.alpha,
        r.seed,
        r.degree_bound,
        suites.join(",")
    );
    for rec in &r.records {
        let _ = write!(out, "CHECK {} [{}] {}", rec.name, rec.anchor, rec.status.label());
        if let Some(ms) = rec.wall_time_ms {
            let _ = write!(out, " ({ms:.1} ms)");
        }
        out.push('\n');
        for d in &rec.details {
            let _ = writeln!(out, "    {d}");
        }
    }
    if let Some(t) = &r.trace {
        let _ = writeln!(out, "TRACE bound={} steps={}", t.bound, t.len());
        for (i, s) in t.steps.iter().enumerate() {
            let kind = serde_json::to_value(s.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let _ = writeln!(out, "  {i:>3} {kind}: {} => {}  [{}]", s.before, s.after, s.anchor);
        }
    }
    match r.overall() {
        Overall::Empty => {
            let _ = writeln!(out, "OVERALL no checks run");
        }
        o => {
            let _ = writeln!(
                out,
                "OVERALL {} ({} pass, {} fail, {} assumption)",
                overall_label(o),
                r.count(CheckStatus::Pass),
                r.count(CheckStatus::Fail),
                r.count(CheckStatus::Assumption)
            );
        }
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: &'a VerificationReport,
    overall: Overall,
    counts: Counts,
}

#[derive(Serialize)]
struct Counts {
    pass: usize,
    fail: usize,
    assumption: usize,
}

pub fn emit_json(r: &VerificationReport) -> String {
    let doc = JsonReport {
        schema: "kform-report/1",
        report: r,
        overall: r.overall(),
        counts: Counts {
            pass: r.count(CheckStatus::Pass),
            fail: r.count(CheckStatus::Fail),
            assumption: r.count(CheckStatus::Assumption),
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}
