//! Plain-text rendering of analysis reports.

use std::fmt::Write as _;

use mvthresh_core::{
    format_ratio, ratio_to_f64, LevelReport, ProbabilityReport, Ratio, SystemSpec,
    VerificationReport,
};

fn approx(r: &Ratio) -> String {
    format!("{:.6}", ratio_to_f64(r))
}

pub fn format_level_report(spec: &SystemSpec, report: &LevelReport, ascii: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "level {} ({}, method {}):",
        report.level, report.perspective, report.method
    );
    let kind = report.boundary.kind;
    let _ = write!(out, "  {kind}s ({}):", report.boundary.len());
    for (rep, count) in &report.boundary.orbit_summary {
        let _ = write!(out, " {count} x {rep}");
    }
    out.push('\n');
    for v in &report.boundary.vectors {
        let _ = writeln!(out, "    {v}");
    }
    let _ = writeln!(
        out,
        "  minimal SOP ({} terms):\n    {}",
        report.minimal_sop.term_count(),
        report.minimal_sop.render(spec, ascii)
    );
    let shell_note = match report.shellable {
        Some(true) => ", shellable=true",
        Some(false) => ", shellable=false (reflection fallback)",
        None => "",
    };
    let _ = writeln!(
        out,
        "  PRE ({} terms{shell_note}):\n    {}",
        report.pre.term_count(),
        report.pre.render(spec, ascii)
    );
    if let Some(p) = &report.probability {
        let what = match report.perspective {
            mvthresh_core::Perspective::Success => format!("P(S>={})", report.level),
            mvthresh_core::Perspective::Failure => format!("P(S<={})", report.level - 1),
        };
        let _ = writeln!(out, "  {what} = {} ~ {}", format_ratio(p), approx(p));
    }
    let _ = writeln!(
        out,
        "  oracle: minimal SOP {}, PRE {}",
        if report.sop_verdict.equal { "ok" } else { "MISMATCH" },
        if report.pre_verdict.equal { "ok" } else { "MISMATCH" }
    );
    out
}

pub fn format_probability_report(report: &ProbabilityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "probabilities ({} perspective, method {}):",
        report.perspective, report.method
    );
    for (j, p) in report.exactly.iter().enumerate() {
        let _ = writeln!(out, "  P(S={j}) = {} ~ {}", format_ratio(p), approx(p));
    }
    for (j, p) in report.at_least.iter().enumerate().skip(1) {
        let _ = writeln!(out, "  P(S>={j}) = {} ~ {}", format_ratio(p), approx(p));
    }
    let _ = writeln!(
        out,
        "  oracle: {}",
        if report.oracle_agrees { "ok" } else { "MISMATCH" }
    );
    out
}

pub fn format_verification_report(report: &VerificationReport) -> String {
    let mut out = String::new();
    for check in &report.checks {
        let _ = writeln!(
            out,
            "{} - {} ({})",
            if check.passed { "ok  " } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    let _ = writeln!(
        out,
        "{}: {} checks",
        if report.all_passed() {
            "all passed"
        } else {
            "FAILURES"
        },
        report.checks.len()
    );
    out
}
