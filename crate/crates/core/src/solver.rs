//! Picard, Schaefer (averaged) and Jungck-Schaefer iteration with full
//! trace capture, plus fixed-point and common-fixed-point verdicts.
//!
//! Every run records the seed point as iterate 0 and one residual per
//! completed step. After each step the stopping rules are checked in order:
//! residual `≤ tol` (converged), iterate norm `> divergence_bound`
//! (diverged), step count `= max_iter`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::space::{blend, check_commuting, distance, norm, MapFn, Mapping, NormKind, Point};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 100_000;
pub const DEFAULT_DIVERGENCE_BOUND: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Picard,
    Schaefer,
    JungckSchaefer,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Picard => "picard",
            Scheme::Schaefer => "schaefer",
            Scheme::JungckSchaefer => "jungck-schaefer",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "picard" => Ok(Scheme::Picard),
            "schaefer" => Ok(Scheme::Schaefer),
            "jungck-schaefer" | "jungck" => Ok(Scheme::JungckSchaefer),
            other => Err(Error::InvalidConfig(format!("unknown scheme '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub scheme: Scheme,
    /// Averaging parameter in `(0, 1]`.
    pub c: f64,
    /// Enrichment parameter, when `c` was derived as `1/(1+δ)`.
    pub delta: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub divergence_bound: f64,
    pub norm: NormKind,
    pub seed_point: Point,
}

impl SolverConfig {
    pub fn new(scheme: Scheme, seed_point: Point) -> Self {
        Self {
            scheme,
            c: 1.0,
            delta: None,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            divergence_bound: DEFAULT_DIVERGENCE_BOUND,
            norm: NormKind::default(),
            seed_point,
        }
    }

    /// Sets `δ` and `c = 1/(1+δ)`.
    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidConfig(format!("delta = {delta} must be finite and ≥ 0")));
        }
        self.delta = Some(delta);
        self.c = 1.0 / (1.0 + delta);
        Ok(self)
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self.delta = None;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_norm(mut self, norm: NormKind) -> Self {
        self.norm = norm;
        self
    }

    pub fn with_divergence_bound(mut self, bound: f64) -> Self {
        self.divergence_bound = bound;
        self
    }

    pub fn with_seed_point(mut self, p: Point) -> Self {
        self.seed_point = p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(Error::InvalidConfig(format!("c = {} not in (0, 1]", self.c)));
        }
        if let Some(delta) = self.delta {
            if libm::fabs(self.c - 1.0 / (1.0 + delta)) > 1e-12 {
                return Err(Error::InvalidConfig(format!("c = {} inconsistent with delta = {delta}", self.c)));
            }
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be ≥ 1".into()));
        }
        if !(self.divergence_bound > 0.0) {
            return Err(Error::InvalidConfig("divergence_bound must be positive".into()));
        }
        Ok(())
    }

    fn expect_scheme(&self, scheme: Scheme) -> Result<()> {
        if self.scheme != scheme {
            return Err(Error::InvalidConfig(format!("config scheme {} used for a {scheme} run", self.scheme)));
        }
        self.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Converged(Point),
    MaxIterExceeded,
    /// Iterate norm exceeded the divergence bound at this step.
    Diverged(usize),
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Converged(_) => "converged",
            Status::MaxIterExceeded => "max-iter-exceeded",
            Status::Diverged(_) => "diverged",
        }
    }

    pub fn limit(&self) -> Option<&Point> {
        match self {
            Status::Converged(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub scheme: Scheme,
    /// `u_0, u_1, …`; `u_0` is the seed point.
    pub iterates: Vec<Point>,
    /// `residuals[n]` is the step size between `u_n` and `u_{n+1}`.
    pub residuals: Vec<f64>,
    pub status: Status,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.residuals.last().copied()
    }

    pub fn last_iterate(&self) -> &Point {
        self.iterates.last().expect("trace always holds the seed point")
    }
}

/// Drives `step` from the seed point; `step` returns the next iterate and
/// its residual.
fn iterate(
    scheme: Scheme,
    cfg: &SolverConfig,
    mut step: impl FnMut(usize, &Point) -> Result<(Point, f64)>,
) -> Result<IterationTrace> {
    let mut iterates = alloc::vec![cfg.seed_point.clone()];
    let mut residuals = Vec::new();
    let status = loop {
        let n = residuals.len();
        let (next, r) = step(n, &iterates[n])?;
        let next_norm = norm(&next, cfg.norm);
        iterates.push(next);
        residuals.push(r);
        if r <= cfg.tol {
            break Status::Converged(iterates[n + 1].clone());
        }
        if !(next_norm <= cfg.divergence_bound) {
            break Status::Diverged(n + 1);
        }
        if n + 1 >= cfg.max_iter {
            break Status::MaxIterExceeded;
        }
    };
    Ok(IterationTrace { scheme, iterates, residuals, status })
}

fn check_dim(f: &Mapping, cfg: &SolverConfig) -> Result<()> {
    if f.dim() != cfg.seed_point.dim() {
        return Err(Error::InvalidInput(format!(
            "mapping has dimension {}, seed point {}",
            f.dim(),
            cfg.seed_point.dim()
        )));
    }
    Ok(())
}

/// `u_{n+1} = f(u_n)`.
pub fn run_picard(f: &Mapping, cfg: &SolverConfig) -> Result<IterationTrace> {
    cfg.expect_scheme(Scheme::Picard)?;
    check_dim(f, cfg)?;
    iterate(Scheme::Picard, cfg, |_, u| {
        let next = f.apply(u)?;
        let r = distance(&next, u, cfg.norm)?;
        Ok((next, r))
    })
}

/// `u_{n+1} = (1 − c)u_n + c·f(u_n)`.
pub fn run_schaefer(f: &Mapping, cfg: &SolverConfig) -> Result<IterationTrace> {
    cfg.expect_scheme(Scheme::Schaefer)?;
    check_dim(f, cfg)?;
    iterate(Scheme::Schaefer, cfg, |_, u| {
        let next = blend(u, &f.apply(u)?, cfg.c);
        let r = distance(&next, u, cfg.norm)?;
        Ok((next, r))
    })
}

/// A commuting pair `(f, S)` with an explicit right inverse of `S`.
#[derive(Clone)]
pub struct PairProblem {
    pub f: Mapping,
    pub s: Mapping,
    s_inverse: MapFn,
}

impl fmt::Debug for PairProblem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("PairProblem").field("f", &self.f).field("s", &self.s).finish_non_exhaustive()
    }
}

impl PairProblem {
    pub fn new<F>(f: Mapping, s: Mapping, s_inverse: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if f.dim() != s.dim() {
            return Err(Error::InvalidInput("f and S differ in dimension".into()));
        }
        Ok(Self { f, s, s_inverse: Arc::new(s_inverse) })
    }

    /// Synthesizes `S⁻¹` by linear solve; `S` must be affine and invertible.
    pub fn with_affine_s(f: Mapping, s: Mapping) -> Result<Self> {
        if f.dim() != s.dim() {
            return Err(Error::InvalidInput("f and S differ in dimension".into()));
        }
        let inv = s
            .affine_inverse()
            .ok_or_else(|| Error::InvalidConfig(format!("S = '{}' is not an invertible affine map", s.label())))?;
        Ok(Self { f, s, s_inverse: inv })
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn s_inverse(&self, w: &Point) -> Result<Point> {
        let out = (self.s_inverse)(w.coords());
        if out.len() != w.dim() || out.iter().any(|x| !x.is_finite()) {
            return Err(Error::Evaluation { what: format!("inverse of {}", self.s.label()), input: w.coords().to_vec() });
        }
        Point::new(out)
    }

    /// Checks `S⁻¹(S(p)) = p` within `tol` on every sample; returns the first
    /// failing sample.
    pub fn check_inverse(&self, samples: &[Point], tol: f64, k: NormKind) -> Result<Option<Point>> {
        for p in samples {
            let back = self.s_inverse(&self.s.apply(p)?)?;
            if distance(&back, p, k)? > tol {
                return Ok(Some(p.clone()));
            }
        }
        Ok(None)
    }

    /// Sampled `f(B) ⊆ S(B)`: each `f(p)` must be reproduced as
    /// `S(S⁻¹(f(p)))` within `tol`. Returns the first failing sample.
    pub fn check_range(&self, samples: &[Point], tol: f64, k: NormKind) -> Result<Option<Point>> {
        for p in samples {
            let fp = self.f.apply(p)?;
            let back = self.s.apply(&self.s_inverse(&fp)?)?;
            if distance(&back, &fp, k)? > tol {
                return Ok(Some(p.clone()));
            }
        }
        Ok(None)
    }

    pub fn commutes_on(&self, samples: &[Point], tol: f64, k: NormKind) -> Result<bool> {
        Ok(check_commuting(&self.f, &self.s, samples, tol, k)?.commutes)
    }
}

/// `S(u_{n+1}) = (1 − c)S(u_n) + c·f(u_n)`, solved for `u_{n+1}` through
/// `S⁻¹`. Residuals are `‖S(u_{n+1}) − S(u_n)‖`.
pub fn run_jungck_schaefer(p: &PairProblem, cfg: &SolverConfig) -> Result<IterationTrace> {
    cfg.expect_scheme(Scheme::JungckSchaefer)?;
    check_dim(&p.f, cfg)?;
    let mut s_current = p.s.apply(&cfg.seed_point)?;
    iterate(Scheme::JungckSchaefer, cfg, |n, u| {
        let w = blend(&s_current, &p.f.apply(u)?, cfg.c);
        let next = p.s_inverse(&w)?;
        let s_next = p.s.apply(&next)?;
        let mismatch = distance(&s_next, &w, cfg.norm)?;
        if mismatch > cfg.tol * norm(&w, cfg.norm).max(1.0) {
            return Err(Error::Inverse { iteration: n + 1, mismatch, w });
        }
        let r = distance(&s_next, &s_current, cfg.norm)?;
        s_current = s_next;
        Ok((next, r))
    })
}

pub fn verdict_fixed_point(f: &Mapping, u: &Point, k: NormKind, tol: f64) -> Result<bool> {
    Ok(distance(&f.apply(u)?, u, k)? <= tol)
}

pub fn verdict_common_fixed_point(p: &PairProblem, u: &Point, k: NormKind, tol: f64) -> Result<bool> {
    Ok(verdict_fixed_point(&p.f, u, k, tol)? && verdict_fixed_point(&p.s, u, k, tol)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartOutcome {
    pub start: Point,
    pub status: Status,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    /// True iff at least two runs converged, every run converged, and all
    /// limits lie within `10·tol` of each other.
    pub all_agree: bool,
    pub limit_points: Vec<Point>,
    pub runs: Vec<StartOutcome>,
    /// Some start failed to converge and was left out of the comparison.
    pub has_non_converged: bool,
}

/// Runs Schaefer iteration from every start and compares the limits.
pub fn uniqueness_probe(f: &Mapping, cfg: &SolverConfig, starts: &[Point]) -> Result<UniquenessReport> {
    if starts.len() < 2 {
        return Err(Error::InvalidInput("uniqueness probe needs at least two starts".into()));
    }
    let mut cfg = cfg.clone();
    cfg.scheme = Scheme::Schaefer;
    let mut runs = Vec::with_capacity(starts.len());
    let mut limits = Vec::new();
    for s in starts {
        cfg.seed_point = s.clone();
        let trace = run_schaefer(f, &cfg)?;
        if let Status::Converged(p) = &trace.status {
            limits.push(p.clone());
        }
        runs.push(StartOutcome { start: s.clone(), iterations: trace.iterations(), status: trace.status });
    }
    let has_non_converged = limits.len() < runs.len();
    let mut agree = limits.len() >= 2 && !has_non_converged;
    'outer: for (i, a) in limits.iter().enumerate() {
        for b in &limits[i + 1..] {
            if distance(a, b, cfg.norm)? > 10.0 * cfg.tol {
                agree = false;
                break 'outer;
            }
        }
    }
    Ok(UniquenessReport { all_agree: agree, limit_points: limits, runs, has_non_converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(x: f64) -> Point {
        Point::scalar(x).unwrap()
    }

    fn half() -> Mapping {
        Mapping::affine_scalar("half", 0.5, 0.0).unwrap()
    }

    fn reflection() -> Mapping {
        Mapping::affine_scalar("reflection", -1.0, 1.0).unwrap()
    }

    fn double() -> Mapping {
        Mapping::affine_scalar("double", 2.0, 0.0).unwrap()
    }

    #[test]
    fn picard_half_map_halves_residuals() {
        let cfg = SolverConfig::new(Scheme::Picard, p(1.0)).with_tol(1e-10);
        let t = run_picard(&half(), &cfg).unwrap();
        let limit = t.status.limit().expect("converged").at(0);
        assert!(limit.abs() < 1e-10);
        for w in t.residuals.windows(2) {
            assert_eq!(w[1], 0.5 * w[0]);
        }
        assert!(t.final_residual().unwrap() <= 1e-10);
    }

    #[test]
    fn picard_reflection_oscillates() {
        let cfg = SolverConfig::new(Scheme::Picard, p(0.0)).with_max_iter(50);
        let t = run_picard(&reflection(), &cfg).unwrap();
        assert_eq!(t.status, Status::MaxIterExceeded);
        assert_eq!(t.iterations(), 50);
        assert!(t.residuals.iter().all(|&r| r == 1.0));
        assert_eq!(t.iterates[1], p(1.0));
        assert_eq!(t.iterates[2], p(0.0));
    }

    #[test]
    fn picard_identity_one_step() {
        let cfg = SolverConfig::new(Scheme::Picard, p(3.5));
        let t = run_picard(&Mapping::identity(1), &cfg).unwrap();
        assert_eq!(t.status, Status::Converged(p(3.5)));
        assert_eq!(t.residuals, vec![0.0]);
    }

    #[test]
    fn picard_diverges_on_doubling() {
        let cfg = SolverConfig::new(Scheme::Picard, p(1.0));
        let t = run_picard(&double(), &cfg).unwrap();
        match t.status {
            Status::Diverged(n) => assert!(norm(&t.iterates[n], NormKind::L2) > DEFAULT_DIVERGENCE_BOUND),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schaefer_reflection_converges_in_one_step() {
        let cfg = SolverConfig::new(Scheme::Schaefer, p(0.0)).with_c(0.5);
        let t = run_schaefer(&reflection(), &cfg).unwrap();
        assert_eq!(t.iterates[1], p(0.5));
        assert_eq!(t.residuals[0], 0.5);
        assert_eq!(t.residuals[1], 0.0);
        assert_eq!(t.status, Status::Converged(p(0.5)));
    }

    #[test]
    fn schaefer_with_unit_c_is_picard() {
        let f = half();
        let a = run_schaefer(&f, &SolverConfig::new(Scheme::Schaefer, p(1.0))).unwrap();
        let b = run_picard(&f, &SolverConfig::new(Scheme::Picard, p(1.0))).unwrap();
        assert_eq!(a.iterates, b.iterates);
        assert_eq!(a.residuals, b.residuals);
        assert_eq!(a.status, b.status);
    }

    #[test]
    fn delta_sets_c() {
        let cfg = SolverConfig::new(Scheme::Schaefer, p(0.0)).with_delta(1.0).unwrap();
        assert_eq!(cfg.c, 0.5);
        let cfg = SolverConfig::new(Scheme::Schaefer, p(0.0)).with_delta(3.0).unwrap();
        assert_eq!(cfg.c, 0.25);
        assert!(SolverConfig::new(Scheme::Schaefer, p(0.0)).with_delta(-1.0).is_err());
    }

    #[test]
    fn config_validation() {
        let base = SolverConfig::new(Scheme::Schaefer, p(0.0));
        assert!(base.clone().with_c(0.0).validate().is_err());
        assert!(base.clone().with_c(1.1).validate().is_err());
        assert!(base.clone().with_tol(0.0).validate().is_err());
        assert!(base.clone().with_max_iter(0).validate().is_err());
        let mut inconsistent = base.clone().with_delta(1.0).unwrap();
        inconsistent.c = 0.4;
        assert!(inconsistent.validate().is_err());
        assert!(run_picard(&half(), &base).is_err());
        assert!(run_schaefer(&Mapping::identity(2), &base).is_err());
    }

    #[test]
    fn jungck_linear_pair_converges_to_zero() {
        let pair = PairProblem::with_affine_s(half(), double()).unwrap();
        let cfg = SolverConfig::new(Scheme::JungckSchaefer, p(1.0)).with_c(0.5).with_tol(1e-12);
        let t = run_jungck_schaefer(&pair, &cfg).unwrap();
        // u_{n+1} = 0.625 u_n
        assert!((t.iterates[1].at(0) - 0.625).abs() < 1e-15);
        assert!((t.iterates[2].at(0) - 0.390625).abs() < 1e-15);
        let limit = t.status.limit().expect("converged");
        assert!(verdict_common_fixed_point(&pair, limit, NormKind::L2, 1e-8).unwrap());
        // residual = ‖S(u_{n+1}) − S(u_n)‖ = 2·0.375·|u_n|
        assert!((t.residuals[0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn jungck_with_identity_is_schaefer() {
        let pair = PairProblem::with_affine_s(reflection(), Mapping::identity(1)).unwrap();
        for c in [0.1, 0.3, 0.5, 1.0] {
            let j = SolverConfig::new(Scheme::JungckSchaefer, p(0.2)).with_c(c).with_max_iter(200);
            let s = SolverConfig { scheme: Scheme::Schaefer, ..j.clone() };
            let a = run_jungck_schaefer(&pair, &j).unwrap();
            let b = run_schaefer(&pair.f, &s).unwrap();
            assert_eq!(a.iterates, b.iterates);
            assert_eq!(a.residuals, b.residuals);
            assert_eq!(a.status, b.status);
        }
    }

    #[test]
    fn jungck_identity_pair_immediate() {
        let pair = PairProblem::with_affine_s(Mapping::identity(1), Mapping::identity(1)).unwrap();
        let cfg = SolverConfig::new(Scheme::JungckSchaefer, p(-2.0)).with_c(0.5);
        let t = run_jungck_schaefer(&pair, &cfg).unwrap();
        assert_eq!(t.status, Status::Converged(p(-2.0)));
        assert_eq!(t.iterations(), 1);
    }

    #[test]
    fn jungck_bad_inverse_detected() {
        let pair = PairProblem::new(half(), double(), |w| vec![w[0]]).unwrap();
        let cfg = SolverConfig::new(Scheme::JungckSchaefer, p(1.0)).with_c(0.5);
        match run_jungck_schaefer(&pair, &cfg) {
            Err(Error::Inverse { iteration, .. }) => assert_eq!(iteration, 1),
            other => panic!("{other:?}"),
        }
        assert!(pair.check_inverse(&[p(1.0)], 1e-9, NormKind::L2).unwrap().is_some());
    }

    #[test]
    fn pair_range_and_commuting_checks() {
        let pair = PairProblem::with_affine_s(half(), double()).unwrap();
        let samples: Vec<Point> = (-5..=5).map(|i| p(i as f64)).collect();
        assert!(pair.check_range(&samples, 1e-12, NormKind::L2).unwrap().is_none());
        assert!(pair.check_inverse(&samples, 1e-12, NormKind::L2).unwrap().is_none());
        assert!(pair.commutes_on(&samples, 1e-12, NormKind::L2).unwrap());
        // S = 0 is not invertible.
        assert!(PairProblem::with_affine_s(half(), Mapping::affine_scalar("zero", 0.0, 0.0).unwrap()).is_err());
        // S with range {x ≥ 0} and a fake inverse cannot reproduce negative f-values.
        let sq = PairProblem::new(half(), Mapping::scalar("abs", f64::abs), |w| vec![w[0]]).unwrap();
        assert_eq!(sq.check_range(&samples, 1e-12, NormKind::L2).unwrap(), Some(p(-5.0)));
    }

    #[test]
    fn verdicts() {
        assert!(verdict_fixed_point(&reflection(), &p(0.5), NormKind::L2, 1e-12).unwrap());
        assert!(!verdict_fixed_point(&reflection(), &p(0.0), NormKind::L2, 1e-12).unwrap());
        assert!(verdict_fixed_point(&Mapping::identity(1), &p(9.0), NormKind::L2, 0.0).unwrap());
        let pair = PairProblem::with_affine_s(half(), double()).unwrap();
        assert!(verdict_common_fixed_point(&pair, &p(0.0), NormKind::L2, 1e-12).unwrap());
        assert!(!verdict_common_fixed_point(&pair, &p(1.0), NormKind::L2, 1e-12).unwrap());
        let ids = PairProblem::with_affine_s(Mapping::identity(1), Mapping::identity(1)).unwrap();
        assert!(verdict_common_fixed_point(&ids, &p(4.0), NormKind::L2, 0.0).unwrap());
    }

    #[test]
    fn uniqueness_examples() {
        let cfg = SolverConfig::new(Scheme::Schaefer, p(0.0));
        let r = uniqueness_probe(&half(), &cfg, &[p(-5.0), p(0.0), p(7.0)]).unwrap();
        assert!(r.all_agree);
        assert!(r.limit_points.iter().all(|q| q.at(0).abs() < 1e-8));

        let r = uniqueness_probe(&Mapping::identity(1), &cfg, &[p(0.0), p(1.0)]).unwrap();
        assert!(!r.all_agree);

        let cfg = cfg.with_max_iter(20);
        let r = uniqueness_probe(&reflection(), &cfg, &[p(0.0), p(1.0)]).unwrap();
        assert!(!r.all_agree && r.has_non_converged);
        assert!(uniqueness_probe(&half(), &SolverConfig::new(Scheme::Schaefer, p(0.0)), &[p(1.0)]).is_err());
    }
}
