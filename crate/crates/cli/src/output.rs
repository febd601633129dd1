//! Text, CSV and JSON renderers. All numbers are written with 17
//! significant digits (or shortest round-trip form in JSON), so reruns are
//! byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use fixpt_core::cclass::{MonotoneStatus, NamedTriple, TripleReport, ValidationReport};
use fixpt_core::contraction::{ContractionCertificate, Outcome, SampleBox};
use fixpt_core::solver::{IterationTrace, SolverConfig, Status};
use fixpt_core::NormKind;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn coords(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(",")
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// `iter,residual[,x0,...]`. Row `n` holds `u_n` and the step residual that
/// produced it; row 0 is the starting point and has an empty residual.
pub fn trace_csv(trace: &IterationTrace, with_coords: bool) -> String {
    let dim = trace.iterates.first().map_or(0, |p| p.dim());
    let mut out = String::from("iter,residual");
    if with_coords {
        for i in 0..dim {
            let _ = write!(out, ",x{i}");
        }
    }
    out.push('\n');
    for (n, u) in trace.iterates.iter().enumerate() {
        if n == 0 && !with_coords {
            continue;
        }
        let residual = if n == 0 { String::new() } else { trace.residuals.get(n - 1).map_or(String::new(), |&r| num(r)) };
        let _ = write!(out, "{n},{residual}");
        if with_coords {
            let _ = write!(out, ",{}", coords(u.coords()));
        }
        out.push('\n');
    }
    out
}

pub fn run_summary(problem: &str, cfg: &SolverConfig, trace: &IterationTrace) -> String {
    let mut lines: Vec<(&str, String)> = vec![
        ("problem", problem.to_string()),
        ("scheme", cfg.scheme.name().to_string()),
        ("c", num(cfg.c)),
        ("delta", cfg.delta.map_or("none".into(), num)),
        ("tol", num(cfg.tol)),
        ("max_iter", cfg.max_iter.to_string()),
        ("divergence_bound", num(cfg.divergence_bound)),
        ("norm", cfg.norm.name().to_string()),
        ("start", coords(cfg.seed_point.coords())),
        ("status", trace.status.name().to_string()),
        ("iterations", trace.iterations().to_string()),
        ("residual", trace.final_residual().map_or("none".into(), num)),
    ];
    match &trace.status {
        Status::Converged(p) => lines.push(("limit", coords(p.coords()))),
        Status::Diverged(step) => lines.push(("diverged_at", step.to_string())),
        Status::MaxIterExceeded => lines.push(("last_iterate", coords(trace.last_iterate().coords()))),
    }
    lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

pub const SWEEP_HEADER: &str = "c,iterations,status,final_residual\n";

pub fn sweep_row(c: f64, trace: &IterationTrace) -> String {
    format!(
        "{},{},{},{}\n",
        num(c),
        trace.iterations(),
        trace.status.name(),
        trace.final_residual().map_or(String::new(), num)
    )
}

pub struct CertificateContext<'a> {
    pub problem: &'a str,
    pub triple: Option<&'a str>,
    pub sample_box: &'a SampleBox,
    pub norm: NormKind,
    pub tol: f64,
}

pub fn certificate_json(ctx: &CertificateContext<'_>, cert: &ContractionCertificate) -> String {
    let witness = match &cert.outcome {
        Outcome::Satisfied => Value::Null,
        Outcome::Violated { u, v, lhs, rhs } => json!({
            "u": u.coords(),
            "v": v.coords(),
            "lhs": lhs,
            "rhs": rhs,
        }),
    };
    let report = json!({
        "problem": ctx.problem,
        "variant": cert.variant.name(),
        "triple": ctx.triple,
        "coefficients": {
            "delta": cert.coeffs.delta,
            "c": cert.coeffs.c,
            "sum": cert.coeffs.sum(),
            "sum_mode": cert.coeffs.sum_mode.name(),
        },
        "averaging_parameter": cert.coeffs.averaging_parameter(),
        "norm": ctx.norm.name(),
        "tol": ctx.tol,
        "seed": cert.seed,
        "box": { "lo": ctx.sample_box.lo, "hi": ctx.sample_box.hi },
        "pairs_checked": cert.pairs_checked,
        "violations": cert.violations,
        "outcome": if cert.satisfied() { "satisfied" } else { "violated" },
        "witness": witness,
        "warnings": cert.warnings.iter().map(|w| w.message()).collect::<Vec<_>>(),
    });
    pretty(&report)
}

fn validation_json(r: &ValidationReport) -> Value {
    json!({
        "subject": r.subject,
        "passed": r.passed(),
        "points_checked": r.points_checked,
        "violation": r.violation.as_ref().map(|v| json!({
            "axiom": v.axiom.name(),
            "at": [v.at.0, v.at.1],
            "value": v.value,
        })),
    })
}

fn monotone_json(m: &MonotoneStatus) -> Value {
    match *m {
        MonotoneStatus::Unchecked => json!({ "status": "unchecked" }),
        MonotoneStatus::MonotoneOnGrid => json!({ "status": "monotone-on-grid" }),
        MonotoneStatus::Violated { x, y, hx, hy } => json!({
            "status": "violated",
            "x": x, "y": y, "h_x": hx, "h_y": hy,
        }),
    }
}

pub fn triple_json(named: &NamedTriple, report: &TripleReport, grid: Value) -> String {
    let e = named.expected;
    let body = json!({
        "triple": named.name,
        "description": named.description,
        "grid": grid,
        "g": validation_json(&report.g),
        "psi": validation_json(&report.psi),
        "phi": validation_json(&report.phi),
        "monotone": monotone_json(&report.monotone),
        "expected": {
            "g_valid": e.g_valid,
            "psi_valid": e.psi_valid,
            "phi_valid": e.phi_valid,
            "monotone": e.monotone,
        },
        "matches_expected": report.matches(&e),
    });
    pretty(&body)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use fixpt_core::problems::problem_by_name;
    use fixpt_core::solver::{run_schaefer, Scheme};

    fn reflection_trace() -> (SolverConfig, IterationTrace) {
        let p = problem_by_name("reflection").unwrap();
        let cfg = SolverConfig::new(Scheme::Schaefer, p.default_start.clone()).with_delta(1.0).unwrap();
        let t = run_schaefer(&p.f, &cfg).unwrap();
        (cfg, t)
    }

    #[test]
    fn numbers_have_seventeen_significant_digits() {
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        let back: f64 = num(0.1).parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn trace_rows_line_up_with_iterates() {
        let (_, t) = reflection_trace();
        let csv = trace_csv(&t, true);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "iter,residual,x0");
        assert_eq!(lines[1], format!("0,,{}", num(0.0)));
        assert_eq!(lines.len(), t.iterates.len() + 1);
        let bare = trace_csv(&t, false);
        assert_eq!(bare.lines().count(), t.residuals.len() + 1);
    }

    #[test]
    fn summary_reports_limit() {
        let (cfg, t) = reflection_trace();
        let s = run_summary("reflection", &cfg, &t);
        assert!(s.contains("status: converged\n"));
        assert!(s.contains(&format!("limit: {}\n", num(0.5))));
    }
}
