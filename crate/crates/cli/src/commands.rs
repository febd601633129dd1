use std::path::{Path, PathBuf};

use fixpt_core::cclass::{builtin_triples, triple_by_name, validate_triple, Grid1d, Grid2d};
use fixpt_core::contraction::{
    certify, Coefficients, ContractionVariant, PairSampler, SampleBox, VariantTag, DEFAULT_TOL as CERT_TOL,
};
use fixpt_core::problems::{builtin_problems, problem_by_name, ProblemInstance, DEFAULT_SEED};
use fixpt_core::solver::{
    run_jungck_schaefer, run_picard, run_schaefer, IterationTrace, Scheme, SolverConfig, Status,
};
use fixpt_core::{NormKind, Point};
use serde_json::json;

use crate::cli::{RunArgs, SweepArgs, VerifyCclassArgs, VerifyContractionArgs};
use crate::config::{parse_list, ConfigFile};
use crate::error::{exit, CliError, CliResult};
use crate::output;

/// Flag value if given, else the config file's.
macro_rules! pick {
    ($flag:expr, $file:expr, $key:literal) => {
        match $flag.clone() {
            Some(v) => Some(v),
            None => $file.get($key)?,
        }
    };
}

fn load_config(path: &Option<PathBuf>, allowed: &[&str]) -> CliResult<ConfigFile> {
    let Some(path) = path else { return Ok(ConfigFile::default()) };
    let file = ConfigFile::load(path)?;
    file.ensure_known(allowed)?;
    Ok(file)
}

fn problem(name: Option<String>) -> CliResult<ProblemInstance> {
    let name = name.ok_or_else(|| CliError::config("--problem is required"))?;
    Ok(problem_by_name(&name)?)
}

fn start_point(p: &ProblemInstance, flag: &Option<String>, file: &ConfigFile) -> CliResult<Point> {
    let coords = match flag {
        Some(s) => Some(parse_list(s)?),
        None => file.get_list("start")?,
    };
    let Some(coords) = coords else { return Ok(p.default_start.clone()) };
    if coords.len() != p.dim() {
        return Err(CliError::config(format!("start has {} coordinates, problem '{}' has dimension {}", coords.len(), p.name, p.dim())));
    }
    Ok(Point::new(coords)?)
}

fn execute(p: &ProblemInstance, cfg: &SolverConfig) -> CliResult<IterationTrace> {
    let trace = match cfg.scheme {
        Scheme::Picard => run_picard(&p.f, cfg)?,
        Scheme::Schaefer => run_schaefer(&p.f, cfg)?,
        Scheme::JungckSchaefer => {
            let pair = p
                .pair
                .as_ref()
                .ok_or_else(|| CliError::config(format!("problem '{}' has no S map for jungck-schaefer", p.name)))?;
            run_jungck_schaefer(pair, cfg)?
        }
    };
    Ok(trace)
}

fn status_code(s: &Status) -> u8 {
    match s {
        Status::Converged(_) => exit::OK,
        Status::MaxIterExceeded => exit::NOT_CONVERGED,
        Status::Diverged(_) => exit::DIVERGED,
    }
}

const RUN_KEYS: &[&str] = &[
    "problem", "scheme", "delta", "c", "tol", "max_iter", "divergence_bound", "norm", "start", "trace", "summary",
    "coords",
];

pub fn run(args: &RunArgs) -> CliResult<u8> {
    let file = load_config(&args.config, RUN_KEYS)?;
    let p = problem(pick!(args.problem, file, "problem"))?;
    let scheme: Scheme = pick!(args.scheme, file, "scheme").unwrap_or(Scheme::Schaefer);
    // c and delta travel together: a flag for either one discards both file values.
    let (delta, c): (Option<f64>, Option<f64>) = if args.delta.is_some() || args.c.is_some() {
        (args.delta, args.c)
    } else {
        (file.get("delta")?, file.get("c")?)
    };
    if delta.is_some() && c.is_some() {
        return Err(CliError::config("give either delta or c, not both"));
    }
    if scheme == Scheme::Picard && (delta.is_some() || c.is_some()) {
        return Err(CliError::config("picard takes no averaging parameter"));
    }

    let mut cfg = SolverConfig::new(scheme, start_point(&p, &args.start, &file)?);
    if let Some(d) = delta {
        cfg = cfg.with_delta(d)?;
    }
    if let Some(c) = c {
        cfg = cfg.with_c(c);
    }
    cfg = apply_common(cfg, args.tol, args.max_iter, args.divergence_bound, args.norm, &file)?;
    cfg.validate()?;

    let trace = execute(&p, &cfg)?;
    let trace_path: Option<PathBuf> = pick!(args.trace, file, "trace");
    if let Some(path) = trace_path {
        let coords = !args.no_coords && file.get_bool("coords")?.unwrap_or(true);
        output::emit(Some(&path), &output::trace_csv(&trace, coords))?;
    }
    let summary_path: Option<PathBuf> = pick!(args.summary, file, "summary");
    output::emit(summary_path.as_deref(), &output::run_summary(&p.name, &cfg, &trace))?;
    Ok(status_code(&trace.status))
}

fn apply_common(
    mut cfg: SolverConfig,
    tol: Option<f64>,
    max_iter: Option<usize>,
    bound: Option<f64>,
    norm: Option<NormKind>,
    file: &ConfigFile,
) -> CliResult<SolverConfig> {
    if let Some(t) = pick!(tol, file, "tol") {
        cfg = cfg.with_tol(t);
    }
    if let Some(m) = pick!(max_iter, file, "max_iter") {
        cfg = cfg.with_max_iter(m);
    }
    if let Some(b) = pick!(bound, file, "divergence_bound") {
        cfg = cfg.with_divergence_bound(b);
    }
    if let Some(k) = pick!(norm, file, "norm") {
        cfg = cfg.with_norm(k);
    }
    Ok(cfg)
}

const SWEEP_KEYS: &[&str] =
    &["problem", "scheme", "c_values", "tol", "max_iter", "divergence_bound", "norm", "start", "output"];

pub fn sweep(args: &SweepArgs) -> CliResult<u8> {
    let file = load_config(&args.config, SWEEP_KEYS)?;
    let p = problem(pick!(args.problem, file, "problem"))?;
    let scheme: Scheme = pick!(args.scheme, file, "scheme").unwrap_or(Scheme::Schaefer);
    if scheme == Scheme::Picard {
        return Err(CliError::config("sweep varies c, which picard does not use"));
    }
    let c_values = match &args.c_values {
        Some(s) => Some(parse_list(s)?),
        None => file.get_list("c_values")?,
    };
    let c_values = c_values.ok_or_else(|| CliError::config("--c-values is required"))?;

    let base = SolverConfig::new(scheme, start_point(&p, &args.start, &file)?);
    let base = apply_common(base, args.tol, args.max_iter, args.divergence_bound, args.norm, &file)?;
    let mut csv = String::from(output::SWEEP_HEADER);
    for &c in &c_values {
        let cfg = base.clone().with_c(c);
        cfg.validate()?;
        csv.push_str(&output::sweep_row(c, &execute(&p, &cfg)?));
    }
    let out: Option<PathBuf> = pick!(args.output, file, "output");
    output::emit(out.as_deref(), &csv)?;
    Ok(exit::OK)
}

const CONTRACTION_KEYS: &[&str] = &[
    "problem", "variant", "triple", "delta", "c1", "c2", "c3", "c4", "c5", "sum_mode", "box_lo", "box_hi", "seed",
    "pairs", "tol", "norm", "report",
];

pub fn verify_contraction(args: &VerifyContractionArgs) -> CliResult<u8> {
    let file = load_config(&args.config, CONTRACTION_KEYS)?;
    let p = problem(pick!(args.problem, file, "problem"))?;
    let certified = p.certified_as;
    let tag: VariantTag = match pick!(args.variant, file, "variant") {
        Some(t) => t,
        None => certified.as_ref().map_or(VariantTag::HardyRogers, |c| c.variant),
    };

    let given = [
        pick!(args.delta, file, "delta"),
        pick!(args.c1, file, "c1"),
        pick!(args.c2, file, "c2"),
        pick!(args.c3, file, "c3"),
        pick!(args.c4, file, "c4"),
        pick!(args.c5, file, "c5"),
    ];
    let sum_mode = pick!(args.sum_mode, file, "sum_mode").unwrap_or(tag.required_sum_mode());
    // With no coefficients at all, check the problem's own certificate.
    let coeffs = match &certified {
        Some(cert) if given.iter().all(Option::is_none) && cert.variant == tag => {
            Coefficients::new(cert.coeffs.delta, cert.coeffs.c, sum_mode)?
        }
        _ => {
            let v = given.map(|x| x.unwrap_or(0.0));
            Coefficients::new(v[0], [v[1], v[2], v[3], v[4], v[5]], sum_mode)?
        }
    };

    let triple_name: Option<String> = pick!(args.triple, file, "triple");
    let triple = match (&triple_name, tag.is_cclass()) {
        (Some(name), true) => Some(
            triple_by_name(name).ok_or_else(|| CliError::config(format!("unknown triple '{name}'")))?.triple,
        ),
        (None, true) => return Err(CliError::config(format!("variant {tag} needs --triple"))),
        (Some(_), false) => return Err(CliError::config(format!("variant {tag} takes no triple"))),
        (None, false) => None,
    };
    let s_map = || {
        p.s().cloned().ok_or_else(|| CliError::config(format!("problem '{}' has no S map for {tag}", p.name)))
    };
    let variant = match (tag, triple) {
        (VariantTag::HardyRogers, _) => ContractionVariant::hardy_rogers(),
        (VariantTag::JungckHardyRogers, _) => ContractionVariant::jungck(s_map()?),
        (VariantTag::CClassHardyRogers, Some(t)) => ContractionVariant::cclass(t)?,
        (VariantTag::CClassJungckHardyRogers, Some(t)) => ContractionVariant::cclass_jungck(t, s_map()?)?,
        (_, None) => unreachable!("C-class variants were given a triple above"),
    };

    let box_lo: Option<f64> = pick!(args.box_lo, file, "box_lo");
    let box_hi: Option<f64> = pick!(args.box_hi, file, "box_hi");
    let sample_box = match (box_lo, box_hi) {
        (Some(lo), Some(hi)) => SampleBox::cube(p.dim(), lo, hi)?,
        (None, None) => p.sample_box.clone(),
        _ => return Err(CliError::config("box_lo and box_hi go together")),
    };
    let mut sampler = PairSampler::new(sample_box.clone(), pick!(args.seed, file, "seed").unwrap_or(DEFAULT_SEED));
    if let Some(n) = pick!(args.pairs, file, "pairs") {
        sampler.random_pairs = n;
    }
    let norm: NormKind = pick!(args.norm, file, "norm").unwrap_or_default();
    let tol: f64 = pick!(args.tol, file, "tol").unwrap_or(CERT_TOL);

    let cert = certify(&variant, &p.f, &coeffs, &sampler, norm, tol)?;
    let ctx = output::CertificateContext {
        problem: &p.name,
        triple: triple_name.as_deref(),
        sample_box: &sample_box,
        norm,
        tol,
    };
    let report: Option<PathBuf> = pick!(args.report, file, "report");
    output::emit(report.as_deref(), &output::certificate_json(&ctx, &cert))?;
    Ok(if cert.satisfied() { exit::OK } else { exit::VIOLATED })
}

const CCLASS_KEYS: &[&str] = &["triple", "grid_max", "grid_points", "grid_axis_points", "max_jump", "tol", "report"];

pub fn verify_cclass(args: &VerifyCclassArgs) -> CliResult<u8> {
    let file = load_config(&args.config, CCLASS_KEYS)?;
    let name: String = pick!(args.triple, file, "triple").ok_or_else(|| CliError::config("--triple is required"))?;
    let named = triple_by_name(&name).ok_or_else(|| CliError::config(format!("unknown triple '{name}'")))?;

    let mut g1 = Grid1d::default();
    let mut g2 = Grid2d::default();
    if let Some(m) = pick!(args.grid_max, file, "grid_max") {
        g1.max = m;
        g2.max = m;
    }
    if let Some(n) = pick!(args.grid_points, file, "grid_points") {
        g1.points = n;
    }
    if let Some(n) = pick!(args.grid_axis_points, file, "grid_axis_points") {
        g2.points_per_axis = n;
    }
    if let Some(j) = pick!(args.max_jump, file, "max_jump") {
        g1.max_jump = Some(j);
        g2.max_jump = Some(j);
    }
    let tol: f64 = pick!(args.tol, file, "tol").unwrap_or(CERT_TOL);

    let report = validate_triple(&named.triple, &g2, &g1, tol)?;
    let grid = json!({
        "max": g1.max,
        "points": g1.points,
        "axis_points": g2.points_per_axis,
        "max_jump": g1.max_jump,
        "tol": tol,
    });
    let out: Option<PathBuf> = pick!(args.report, file, "report");
    output::emit(out.as_deref(), &output::triple_json(&named, &report, grid))?;
    Ok(if report.matches(&named.expected) { exit::OK } else { exit::VIOLATED })
}

pub fn list_problems() -> CliResult<u8> {
    let mut out = String::new();
    for p in builtin_problems() {
        let cert = p.certified_as.as_ref().map_or("-", |c| c.variant.name());
        out.push_str(&format!("{}\t{}\t{}\t{}\n", p.name, p.dim(), cert, p.description));
    }
    output::emit(None::<&Path>, &out)?;
    Ok(exit::OK)
}

pub fn list_triples() -> CliResult<u8> {
    let out: String = builtin_triples().iter().map(|t| format!("{}\t{}\n", t.name, t.description)).collect();
    output::emit(None::<&Path>, &out)?;
    Ok(exit::OK)
}
