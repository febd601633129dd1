//! C-class functions `G`, altering distances `ψ`, `Φ_u` functions `φ`, and
//! monotone triples `(ψ, φ, G)`, with grid-sampled validators.
//!
//! None of the axioms can be decided from finitely many evaluations, so every
//! validator is a sampled check over an explicit grid with an explicit
//! tolerance:
//!
//! * `G(s,t) ≤ s` is checked as `G(s,t) ≤ s + tol`.
//! * `G(s,t) = s ⇒ s = 0 ∨ t = 0` is checked with a tolerance band: any grid
//!   point with `|G(s,t) − s| ≤ tol` must have `s ≤ tol` or `t ≤ tol`.
//! * Continuity is approximated by bounding the jump between adjacent grid
//!   points (`max_jump`). This is a heuristic, nothing more.
//!
//! Witnesses are always the first violation in grid order (row-major over
//! `(s, t)`, ascending), so reports are reproducible.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Minimum number of grid points a validator accepts.
pub const MIN_GRID_POINTS: usize = 1000;

type Scalar2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Scalar1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

macro_rules! labelled_fn {
    ($(#[$meta:meta])* $name:ident, $ty:ty, $($arg:ident),+) => {
        $(#[$meta])*
        #[derive(Clone)]
        pub struct $name {
            label: String,
            f: $ty,
        }

        impl $name {
            pub fn new<F>(label: impl Into<String>, f: F) -> Self
            where
                F: Fn($(labelled_fn!(@f64 $arg)),+) -> f64 + Send + Sync + 'static,
            {
                Self { label: label.into(), f: Arc::new(f) }
            }

            pub fn label(&self) -> &str {
                &self.label
            }

            /// Evaluates, rejecting non-finite results.
            pub fn eval(&self, $($arg: f64),+) -> Result<f64> {
                let y = (self.f)($($arg),+);
                if y.is_finite() {
                    Ok(y)
                } else {
                    Err(Error::Evaluation { what: self.label.clone(), input: vec![$($arg),+] })
                }
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), self.label)
            }
        }
    };
    (@f64 $arg:ident) => { f64 };
}

labelled_fn!(
    /// `G: [0,∞)² → ℝ`.
    CClassFunction, Scalar2, s, t
);
labelled_fn!(
    /// `ψ: [0,∞) → [0,∞)`, non-decreasing, `ψ(t) = 0 ⇔ t = 0`.
    AlteringDistance, Scalar1, x
);
labelled_fn!(
    /// `φ: [0,∞) → [0,∞)` with `φ(t) > 0` for `t > 0`.
    PhiU, Scalar1, x
);

/// Uniform grid on `[0, max]`, optionally merged with log-spaced points
/// near zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1d {
    pub max: f64,
    pub points: usize,
    /// Decades `10^lo ..= 10^hi` refined with `per_decade` log-spaced points.
    pub log_refine: Option<LogRefine>,
    /// Largest allowed jump between adjacent samples (continuity heuristic).
    pub max_jump: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRefine {
    pub lo_exp: i32,
    pub hi_exp: i32,
    pub per_decade: usize,
}

impl Default for Grid1d {
    fn default() -> Self {
        Self {
            max: 10.0,
            points: 1001,
            log_refine: Some(LogRefine { lo_exp: -6, hi_exp: -2, per_decade: 10 }),
            max_jump: Some(1.0),
        }
    }
}

impl Grid1d {
    pub fn uniform(max: f64, points: usize) -> Self {
        Self { max, points, log_refine: None, max_jump: None }
    }

    /// Sorted, de-duplicated sample points, always including `0` and `max`.
    pub fn samples(&self) -> Result<Vec<f64>> {
        if !(self.max > 0.0 && self.max.is_finite()) || self.points < 2 {
            return Err(Error::InvalidInput(format!(
                "grid needs max > 0 and ≥ 2 points, got max={} points={}",
                self.max, self.points
            )));
        }
        let n = self.points - 1;
        let mut xs: Vec<f64> = (0..=n).map(|i| self.max * i as f64 / n as f64).collect();
        if let Some(r) = self.log_refine {
            let steps = (r.hi_exp - r.lo_exp).max(0) as usize * r.per_decade;
            for i in 0..=steps {
                let e = r.lo_exp as f64 + i as f64 / r.per_decade.max(1) as f64;
                let x = libm::pow(10.0, e);
                if x < self.max {
                    xs.push(x);
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        if xs.len() < MIN_GRID_POINTS {
            return Err(Error::InvalidInput(format!(
                "grid has {} points, need at least {MIN_GRID_POINTS}",
                xs.len()
            )));
        }
        Ok(xs)
    }
}

/// Uniform `points × points` grid over `[0, max]²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2d {
    pub max: f64,
    pub points_per_axis: usize,
    pub max_jump: Option<f64>,
}

impl Default for Grid2d {
    fn default() -> Self {
        Self { max: 10.0, points_per_axis: 101, max_jump: Some(1.0) }
    }
}

impl Grid2d {
    pub fn uniform(max: f64, points_per_axis: usize) -> Self {
        Self { max, points_per_axis, max_jump: None }
    }

    pub fn axis(&self) -> Result<Vec<f64>> {
        if !(self.max > 0.0 && self.max.is_finite()) || self.points_per_axis < 2 {
            return Err(Error::InvalidInput("2-D grid needs max > 0 and ≥ 2 points per axis".into()));
        }
        if self.points_per_axis * self.points_per_axis < MIN_GRID_POINTS {
            return Err(Error::InvalidInput(format!(
                "2-D grid has {} points, need at least {MIN_GRID_POINTS}",
                self.points_per_axis * self.points_per_axis
            )));
        }
        let n = self.points_per_axis - 1;
        Ok((0..=n).map(|i| self.max * i as f64 / n as f64).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `G(s,t) ≤ s`.
    UpperBound,
    /// `G(s,t) = s` only if `s = 0` or `t = 0`.
    EqualityOnAxes,
    /// `ψ(0) = 0` (or `φ(0) ≥ 0`).
    ValueAtZero,
    NonDecreasing,
    /// `ψ(t) > 0` (resp. `φ(t) > 0`) for `t > 0`.
    PositiveAwayFromZero,
    /// Adjacent-sample jump exceeded `max_jump`.
    Continuity,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::UpperBound => "upper-bound",
            Axiom::EqualityOnAxes => "equality-on-axes",
            Axiom::ValueAtZero => "value-at-zero",
            Axiom::NonDecreasing => "non-decreasing",
            Axiom::PositiveAwayFromZero => "positive-away-from-zero",
            Axiom::Continuity => "continuity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub axiom: Axiom,
    /// `(s, t)` for `G`; `(x, x)` or adjacent `(x_i, x_{i+1})` for 1-D functions.
    pub at: (f64, f64),
    /// Function value at the witness (at the second coordinate for steps).
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub subject: String,
    pub points_checked: usize,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn validate_cclass(g: &CClassFunction, grid: &Grid2d, tol: f64) -> Result<ValidationReport> {
    let axis = grid.axis()?;
    let fail = |axiom, s, t, value| ValidationReport {
        subject: g.label.clone(),
        points_checked: axis.len() * axis.len(),
        violation: Some(Violation { axiom, at: (s, t), value }),
    };
    let mut prev_row: Option<Vec<f64>> = None;
    for &s in &axis {
        let mut row = Vec::with_capacity(axis.len());
        for (j, &t) in axis.iter().enumerate() {
            let v = g.eval(s, t)?;
            if v > s + tol {
                return Ok(fail(Axiom::UpperBound, s, t, v));
            }
            if libm::fabs(v - s) <= tol && s > tol && t > tol {
                return Ok(fail(Axiom::EqualityOnAxes, s, t, v));
            }
            if let Some(jump) = grid.max_jump {
                let left = row.last().map(|l: &f64| libm::fabs(v - l)).unwrap_or(0.0);
                let up = prev_row.as_ref().map(|r| libm::fabs(v - r[j])).unwrap_or(0.0);
                if left > jump || up > jump {
                    return Ok(fail(Axiom::Continuity, s, t, v));
                }
            }
            row.push(v);
        }
        prev_row = Some(row);
    }
    Ok(ValidationReport { subject: g.label.clone(), points_checked: axis.len() * axis.len(), violation: None })
}

fn eval_grid(xs: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<Vec<f64>> {
    xs.iter().map(|&x| f(x)).collect()
}

fn jump_violation(xs: &[f64], ys: &[f64], max_jump: Option<f64>) -> Option<Violation> {
    let jump = max_jump?;
    xs.windows(2).zip(ys.windows(2)).find_map(|(x, y)| {
        (libm::fabs(y[1] - y[0]) > jump).then_some(Violation { axiom: Axiom::Continuity, at: (x[0], x[1]), value: y[1] })
    })
}

pub fn validate_altering(psi: &AlteringDistance, grid: &Grid1d, tol: f64) -> Result<ValidationReport> {
    let xs = grid.samples()?;
    let ys = eval_grid(&xs, |x| psi.eval(x))?;
    let report = |violation| ValidationReport { subject: psi.label.clone(), points_checked: xs.len(), violation };
    if ys[0] > tol || ys[0] < -tol {
        return Ok(report(Some(Violation { axiom: Axiom::ValueAtZero, at: (xs[0], xs[0]), value: ys[0] })));
    }
    for i in 0..xs.len() {
        if i + 1 < xs.len() && ys[i + 1] < ys[i] - tol {
            return Ok(report(Some(Violation {
                axiom: Axiom::NonDecreasing,
                at: (xs[i], xs[i + 1]),
                value: ys[i + 1],
            })));
        }
        if xs[i] > tol && ys[i] <= tol {
            return Ok(report(Some(Violation {
                axiom: Axiom::PositiveAwayFromZero,
                at: (xs[i], xs[i]),
                value: ys[i],
            })));
        }
    }
    Ok(report(jump_violation(&xs, &ys, grid.max_jump)))
}

/// `φ(0) ≥ 0` (within `tol`) and `φ(t) > 0` strictly for sampled `t > 0`.
///
/// Positivity is strict rather than banded: `φ(t) = t²` is a legitimate
/// member whose values near zero sit far below any useful tolerance.
pub fn validate_phi(phi: &PhiU, grid: &Grid1d, tol: f64) -> Result<ValidationReport> {
    let xs = grid.samples()?;
    let ys = eval_grid(&xs, |x| phi.eval(x))?;
    let report = |violation| ValidationReport { subject: phi.label.clone(), points_checked: xs.len(), violation };
    if ys[0] < -tol {
        return Ok(report(Some(Violation { axiom: Axiom::ValueAtZero, at: (xs[0], xs[0]), value: ys[0] })));
    }
    if let Some(i) = (0..xs.len()).find(|&i| xs[i] > 0.0 && ys[i] <= 0.0) {
        return Ok(report(Some(Violation { axiom: Axiom::PositiveAwayFromZero, at: (xs[i], xs[i]), value: ys[i] })));
    }
    Ok(report(jump_violation(&xs, &ys, grid.max_jump)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneStatus {
    Unchecked,
    MonotoneOnGrid,
    /// `x < y` with `h(x) > h(y) + tol`, where `h(x) = G(ψ(x), φ(x))`.
    Violated { x: f64, y: f64, hx: f64, hy: f64 },
}

#[derive(Debug, Clone)]
pub struct CClassTriple {
    pub psi: AlteringDistance,
    pub phi: PhiU,
    pub g: CClassFunction,
    pub monotone_status: MonotoneStatus,
}

impl CClassTriple {
    pub fn new(psi: AlteringDistance, phi: PhiU, g: CClassFunction) -> Self {
        Self { psi, phi, g, monotone_status: MonotoneStatus::Unchecked }
    }

    /// `h(x) = G(ψ(x), φ(x))`.
    pub fn composed(&self, x: f64) -> Result<f64> {
        self.g.eval(self.psi.eval(x)?, self.phi.eval(x)?)
    }

    /// Runs the monotonicity check and stores its outcome.
    pub fn check_monotone(&mut self, grid: &Grid1d, tol: f64) -> Result<MonotoneStatus> {
        self.monotone_status = validate_monotone_triple(self, grid, tol)?;
        Ok(self.monotone_status)
    }
}

/// Checks `x ≤ y ⇒ h(x) ≤ h(y) + tol` over all grid pairs.
///
/// Pairs are scanned by ascending `y`; against each `y` the earliest grid
/// point attaining the running maximum of `h` is the candidate `x`. This
/// finds a violation whenever any pair violates, and the reported pair is the
/// first in that order.
pub fn validate_monotone_triple(t: &CClassTriple, grid: &Grid1d, tol: f64) -> Result<MonotoneStatus> {
    let xs = grid.samples()?;
    let hs = eval_grid(&xs, |x| t.composed(x))?;
    let mut best = 0;
    for j in 1..xs.len() {
        if hs[best] > hs[j] + tol {
            return Ok(MonotoneStatus::Violated { x: xs[best], y: xs[j], hx: hs[best], hy: hs[j] });
        }
        if hs[j] > hs[best] {
            best = j;
        }
    }
    Ok(MonotoneStatus::MonotoneOnGrid)
}

/// Outcomes a built-in triple is expected to produce on the default grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedOutcome {
    pub g_valid: bool,
    pub psi_valid: bool,
    pub phi_valid: bool,
    pub monotone: bool,
}

#[derive(Debug, Clone)]
pub struct NamedTriple {
    pub name: &'static str,
    pub description: &'static str,
    pub triple: CClassTriple,
    pub expected: ExpectedOutcome,
}

/// `ψ(x) = √x` on `[0, 1]`, `x²` beyond.
pub fn psi_sqrt_then_square() -> AlteringDistance {
    AlteringDistance::new("sqrt-then-square", |x| if x <= 1.0 { libm::sqrt(x) } else { x * x })
}

pub fn g_difference() -> CClassFunction {
    CClassFunction::new("s-t", |s, t| s - t)
}

pub fn builtin_triples() -> Vec<NamedTriple> {
    let all_valid = |monotone| ExpectedOutcome { g_valid: true, psi_valid: true, phi_valid: true, monotone };
    vec![
        NamedTriple {
            name: "sqrt-phi-monotone",
            description: "G = s - t, phi = sqrt(x), psi = sqrt(x) on [0,1] and x^2 beyond",
            triple: CClassTriple::new(psi_sqrt_then_square(), PhiU::new("sqrt", libm::sqrt), g_difference()),
            expected: all_valid(true),
        },
        NamedTriple {
            name: "square-phi-nonmonotone",
            description: "G = s - t, phi = x^2, psi = sqrt(x) on [0,1] and x^2 beyond",
            triple: CClassTriple::new(psi_sqrt_then_square(), PhiU::new("square", |x| x * x), g_difference()),
            expected: all_valid(false),
        },
        NamedTriple {
            name: "identity-triple",
            description: "G = s - t, psi = phi = identity",
            triple: CClassTriple::new(
                AlteringDistance::new("identity", |x| x),
                PhiU::new("identity", |x| x),
                g_difference(),
            ),
            expected: all_valid(true),
        },
    ]
}

pub fn triple_by_name(name: &str) -> Option<NamedTriple> {
    builtin_triples().into_iter().find(|t| t.name == name)
}

/// Results of every validator on one triple.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleReport {
    pub g: ValidationReport,
    pub psi: ValidationReport,
    pub phi: ValidationReport,
    pub monotone: MonotoneStatus,
}

impl TripleReport {
    pub fn matches(&self, expected: &ExpectedOutcome) -> bool {
        self.g.passed() == expected.g_valid
            && self.psi.passed() == expected.psi_valid
            && self.phi.passed() == expected.phi_valid
            && matches!(self.monotone, MonotoneStatus::MonotoneOnGrid) == expected.monotone
    }

    pub fn all_axioms_pass(&self) -> bool {
        self.g.passed() && self.psi.passed() && self.phi.passed()
    }
}

pub fn validate_triple(t: &CClassTriple, grid2: &Grid2d, grid1: &Grid1d, tol: f64) -> Result<TripleReport> {
    Ok(TripleReport {
        g: validate_cclass(&t.g, grid2, tol)?,
        psi: validate_altering(&t.psi, grid1, tol)?,
        phi: validate_phi(&t.phi, grid1, tol)?,
        monotone: validate_monotone_triple(t, grid1, tol)?,
    })
}
