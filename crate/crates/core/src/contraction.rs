//! Sampled certificates for enriched Hardy-Rogers contractions, their
//! Jungck-type form, and the C-class generalizations of both.
//!
//! With `M` the Hardy-Rogers aggregate
//!
//! ```text
//! M = c1‖u−v‖ + c2‖u−fu‖ + c3‖u−fv‖ + c4‖v−fu‖ + c5‖v−fv‖
//! ```
//!
//! the plain conditions read `‖δ(u−v) + fu − fv‖ ≤ M` and the C-class ones
//! `ψ(‖δ(u−v) + fu − fv‖) ≤ G(ψ(M), φ(M))`. The Jungck forms replace `u, v`
//! by `Su, Sv` everywhere except inside `f`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cclass::{validate_altering, validate_cclass, validate_phi, CClassTriple, Grid1d, Grid2d};
use crate::space::{check_commuting, Mapping, NormKind, Point};
use crate::{Error, Result};

/// Default relative tolerance of pairwise checks.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumMode {
    /// `Σcᵢ < 1`, plain and Jungck forms.
    StrictlyLessOne,
    /// `Σcᵢ = 1` (to within `1e-12`), C-class forms.
    ExactlyOne,
}

impl SumMode {
    pub fn name(self) -> &'static str {
        match self {
            SumMode::StrictlyLessOne => "lt1",
            SumMode::ExactlyOne => "eq1",
        }
    }
}

impl core::str::FromStr for SumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lt1" | "strictly-less-one" => Ok(SumMode::StrictlyLessOne),
            "eq1" | "exactly-one" => Ok(SumMode::ExactlyOne),
            other => Err(Error::InvalidConfig(format!("unknown sum mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub delta: f64,
    pub c: [f64; 5],
    pub sum_mode: SumMode,
}

impl Coefficients {
    pub fn new(delta: f64, c: [f64; 5], sum_mode: SumMode) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidConfig(format!("delta = {delta} must be finite and ≥ 0")));
        }
        if let Some(bad) = c.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidConfig(format!("coefficient {bad} must be finite and ≥ 0")));
        }
        let sum: f64 = c.iter().sum();
        match sum_mode {
            SumMode::StrictlyLessOne if sum >= 1.0 => {
                return Err(Error::InvalidConfig(format!("Σc = {sum} must be < 1")));
            }
            SumMode::ExactlyOne if libm::fabs(sum - 1.0) > 1e-12 => {
                return Err(Error::InvalidConfig(format!("Σc = {sum} must equal 1")));
            }
            _ => {}
        }
        Ok(Self { delta, c, sum_mode })
    }

    /// Banach-type coefficients: only `c1` nonzero, `Σc < 1`.
    pub fn banach(delta: f64, c1: f64) -> Result<Self> {
        Self::new(delta, [c1, 0.0, 0.0, 0.0, 0.0], SumMode::StrictlyLessOne)
    }

    pub fn sum(&self) -> f64 {
        self.c.iter().sum()
    }

    /// The averaging parameter `c = 1/(1+δ)` matching these coefficients.
    pub fn averaging_parameter(&self) -> f64 {
        1.0 / (1.0 + self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariantTag {
    HardyRogers,
    JungckHardyRogers,
    CClassHardyRogers,
    CClassJungckHardyRogers,
}

impl VariantTag {
    pub const ALL: [VariantTag; 4] = [
        VariantTag::HardyRogers,
        VariantTag::JungckHardyRogers,
        VariantTag::CClassHardyRogers,
        VariantTag::CClassJungckHardyRogers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantTag::HardyRogers => "hardy-rogers",
            VariantTag::JungckHardyRogers => "jungck-hardy-rogers",
            VariantTag::CClassHardyRogers => "cclass-hardy-rogers",
            VariantTag::CClassJungckHardyRogers => "cclass-jungck-hardy-rogers",
        }
    }

    pub fn is_jungck(self) -> bool {
        matches!(self, VariantTag::JungckHardyRogers | VariantTag::CClassJungckHardyRogers)
    }

    pub fn is_cclass(self) -> bool {
        matches!(self, VariantTag::CClassHardyRogers | VariantTag::CClassJungckHardyRogers)
    }

    pub fn required_sum_mode(self) -> SumMode {
        if self.is_cclass() {
            SumMode::ExactlyOne
        } else {
            SumMode::StrictlyLessOne
        }
    }
}

impl fmt::Display for VariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for VariantTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hardy-rogers" | "hr" => Ok(VariantTag::HardyRogers),
            "jungck-hardy-rogers" | "jungck-hr" => Ok(VariantTag::JungckHardyRogers),
            "cclass-hardy-rogers" | "cclass-hr" => Ok(VariantTag::CClassHardyRogers),
            "cclass-jungck-hardy-rogers" | "cclass-jungck-hr" => Ok(VariantTag::CClassJungckHardyRogers),
            other => Err(Error::InvalidConfig(format!("unknown contraction variant '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContractionVariant {
    pub tag: VariantTag,
    pub triple: Option<CClassTriple>,
    pub s_map: Option<Mapping>,
}

fn ensure_triple_valid(triple: &CClassTriple) -> Result<()> {
    let g = validate_cclass(&triple.g, &Grid2d::default(), DEFAULT_TOL)?;
    let psi = validate_altering(&triple.psi, &Grid1d::default(), DEFAULT_TOL)?;
    let phi = validate_phi(&triple.phi, &Grid1d::default(), DEFAULT_TOL)?;
    for r in [g, psi, phi] {
        if let Some(v) = r.violation {
            return Err(Error::InvalidConfig(format!(
                "triple component '{}' fails {} at {:?}",
                r.subject,
                v.axiom.name(),
                v.at
            )));
        }
    }
    Ok(())
}

impl ContractionVariant {
    pub fn hardy_rogers() -> Self {
        Self { tag: VariantTag::HardyRogers, triple: None, s_map: None }
    }

    pub fn jungck(s: Mapping) -> Self {
        Self { tag: VariantTag::JungckHardyRogers, triple: None, s_map: Some(s) }
    }

    /// Fails unless every component of `triple` passes its validator on the
    /// default grids.
    pub fn cclass(triple: CClassTriple) -> Result<Self> {
        ensure_triple_valid(&triple)?;
        Ok(Self { tag: VariantTag::CClassHardyRogers, triple: Some(triple), s_map: None })
    }

    pub fn cclass_jungck(triple: CClassTriple, s: Mapping) -> Result<Self> {
        ensure_triple_valid(&triple)?;
        Ok(Self { tag: VariantTag::CClassJungckHardyRogers, triple: Some(triple), s_map: Some(s) })
    }

    fn s_map(&self) -> Result<&Mapping> {
        self.s_map
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig(format!("variant {} needs a mapping S", self.tag)))
    }

    fn triple(&self) -> Result<&CClassTriple> {
        self.triple
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig(format!("variant {} needs a C-class triple", self.tag)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

/// `lhs = ‖δ(a−b) + fu − fv‖`, `rhs = c1‖a−b‖ + c2‖a−fu‖ + c3‖a−fv‖ + c4‖b−fu‖ + c5‖b−fv‖`
/// with `(a, b) = (u, v)` or `(Su, Sv)`.
fn sides_from_images(a: &Point, b: &Point, fu: &Point, fv: &Point, coeffs: &Coefficients, k: NormKind) -> Result<Sides> {
    let ab = a.diff(b)?;
    let ffd = fu.diff(fv)?;
    let perturbed: Vec<f64> = ab.iter().zip(&ffd).map(|(d, e)| coeffs.delta * d + e).collect();
    let lhs = k.eval(&perturbed)?;
    let n = |x: &Point, y: &Point| -> Result<f64> { k.eval(&x.diff(y)?) };
    let [c1, c2, c3, c4, c5] = coeffs.c;
    let rhs = c1 * k.eval(&ab)? + c2 * n(a, fu)? + c3 * n(a, fv)? + c4 * n(b, fu)? + c5 * n(b, fv)?;
    Ok(Sides { lhs, rhs })
}

pub fn hr_sides(f: &Mapping, u: &Point, v: &Point, coeffs: &Coefficients, k: NormKind) -> Result<Sides> {
    let fu = f.apply(u)?;
    let fv = f.apply(v)?;
    sides_from_images(u, v, &fu, &fv, coeffs, k)
}

pub fn jungck_sides(f: &Mapping, s: &Mapping, u: &Point, v: &Point, coeffs: &Coefficients, k: NormKind) -> Result<Sides> {
    let (su, sv) = (s.apply(u)?, s.apply(v)?);
    let (fu, fv) = (f.apply(u)?, f.apply(v)?);
    sides_from_images(&su, &sv, &fu, &fv, coeffs, k)
}

fn within(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * lhs.max(rhs).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CClassPairCheck {
    pub holds: bool,
    /// `ψ(‖δ(u−v) + fu − fv‖)`.
    pub lhs_psi: f64,
    /// `G(ψ(M), φ(M))`.
    pub rhs_g: f64,
    /// The Hardy-Rogers aggregate `M`.
    pub aggregate: f64,
}

pub fn cclass_check_pair(
    variant: &ContractionVariant,
    f: &Mapping,
    u: &Point,
    v: &Point,
    coeffs: &Coefficients,
    k: NormKind,
    tol: f64,
) -> Result<CClassPairCheck> {
    let triple = variant.triple()?;
    let sides = match variant.tag {
        VariantTag::CClassHardyRogers => hr_sides(f, u, v, coeffs, k)?,
        VariantTag::CClassJungckHardyRogers => jungck_sides(f, variant.s_map()?, u, v, coeffs, k)?,
        other => return Err(Error::InvalidConfig(format!("{other} is not a C-class variant"))),
    };
    let m = sides.rhs;
    let lhs_psi = triple.psi.eval(sides.lhs)?;
    let rhs_g = triple.g.eval(triple.psi.eval(m)?, triple.phi.eval(m)?)?;
    Ok(CClassPairCheck { holds: within(lhs_psi, rhs_g, tol), lhs_psi, rhs_g, aggregate: m })
}

/// Axis-aligned sampling box.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SampleBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidInput("sample box bounds must be nonempty and of equal length".into()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && l < h)) {
            return Err(Error::InvalidInput("sample box needs finite lo < hi in every coordinate".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo; dim], alloc::vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// The same box scaled by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.lo.iter().map(|x| x * lambda).collect(), self.hi.iter().map(|x| x * lambda).collect())
    }

    fn lerp(&self, mut t: impl FnMut(usize) -> f64) -> Vec<f64> {
        (0..self.dim()).map(|i| self.lo[i] + t(i) * (self.hi[i] - self.lo[i])).collect()
    }
}

/// Deterministic sequence of sample pairs.
///
/// Order: structured pairs (per-axis extremes, diagonals, coincident pairs),
/// then `random_pairs` uniform pairs, then `near_pairs` near-coincident pairs.
/// Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`).
#[derive(Debug, Clone, PartialEq)]
pub struct PairSampler {
    pub sample_box: SampleBox,
    pub seed: u64,
    pub random_pairs: usize,
    pub near_pairs: usize,
}

/// Minimum number of pairs a certificate must check.
pub const MIN_PAIRS: usize = 1000;

impl PairSampler {
    pub fn new(sample_box: SampleBox, seed: u64) -> Self {
        Self { sample_box, seed, random_pairs: 1000, near_pairs: 64 }
    }

    pub fn pairs(&self) -> Result<Vec<(Point, Point)>> {
        let bx = &self.sample_box;
        let d = bx.dim();
        let mut raw: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        let mid = bx.lerp(|_| 0.5);
        for axis in 0..d {
            let mut a = mid.clone();
            let mut b = mid.clone();
            a[axis] = bx.lo[axis];
            b[axis] = bx.hi[axis];
            raw.push((a, b));
        }
        raw.push((bx.lo.clone(), bx.hi.clone()));
        raw.push((mid.clone(), bx.hi.clone()));
        raw.push((bx.lo.clone(), mid.clone()));
        for p in [&mid, &bx.lo, &bx.hi] {
            raw.push((p.clone(), p.clone()));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let uniform = |rng: &mut ChaCha8Rng| bx.lerp(|_| rng.random::<f64>());
        for _ in 0..self.random_pairs {
            let a = uniform(&mut rng);
            let b = uniform(&mut rng);
            raw.push((a, b));
        }
        for _ in 0..self.near_pairs {
            let a = uniform(&mut rng);
            let b = (0..d)
                .map(|i| {
                    let step = 1e-6 * (bx.hi[i] - bx.lo[i]) * (rng.random::<f64>() - 0.5);
                    a[i] + step
                })
                .collect();
            raw.push((a, b));
        }
        if raw.len() < MIN_PAIRS {
            return Err(Error::InvalidConfig(format!("sampler yields {} pairs, need ≥ {MIN_PAIRS}", raw.len())));
        }
        raw.into_iter().map(|(a, b)| Ok((Point::new(a)?, Point::new(b)?))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Satisfied,
    /// First failing pair in sampler order.
    Violated { u: Point, v: Point, lhs: f64, rhs: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateWarning {
    /// C-class variant with `c3 ≠ c4`; the convergence argument assumes equality.
    C3NotEqualC4,
    /// `Σc = 1` with `c2 = c5 = 0`, so `c1 + c3 + c4 = 1` and the uniqueness
    /// bound `c1 + c3 + c4 < 1` cannot hold.
    DegenerateUniquenessBound,
    /// The aggregate `M` vanished on this many sampled pairs.
    ZeroAggregate { pairs: usize },
}

impl CertificateWarning {
    pub fn message(&self) -> String {
        match self {
            CertificateWarning::C3NotEqualC4 => "c3 != c4 for a C-class variant".into(),
            CertificateWarning::DegenerateUniquenessBound => {
                "sum of coefficients is 1 with c2 = c5 = 0; c1 + c3 + c4 < 1 cannot hold".into()
            }
            CertificateWarning::ZeroAggregate { pairs } => {
                format!("aggregate M = 0 on {pairs} pairs; right side reduces to G(psi(0), phi(0))")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCertificate {
    pub variant: VariantTag,
    pub coeffs: Coefficients,
    pub seed: u64,
    pub pairs_checked: usize,
    pub violations: usize,
    pub outcome: Outcome,
    pub warnings: Vec<CertificateWarning>,
}

impl ContractionCertificate {
    pub fn satisfied(&self) -> bool {
        matches!(self.outcome, Outcome::Satisfied)
    }
}

/// Checks the variant's inequality on every sampled pair.
pub fn certify(
    variant: &ContractionVariant,
    f: &Mapping,
    coeffs: &Coefficients,
    sampler: &PairSampler,
    k: NormKind,
    tol: f64,
) -> Result<ContractionCertificate> {
    let tag = variant.tag;
    if coeffs.sum_mode != tag.required_sum_mode() {
        return Err(Error::InvalidConfig(format!(
            "variant {tag} requires sum mode {}, got {}",
            tag.required_sum_mode().name(),
            coeffs.sum_mode.name()
        )));
    }
    if sampler.sample_box.dim() != f.dim() {
        return Err(Error::InvalidInput(format!(
            "sample box has dimension {}, mapping has {}",
            sampler.sample_box.dim(),
            f.dim()
        )));
    }
    let pairs = sampler.pairs()?;
    if tag.is_jungck() {
        let s = variant.s_map()?;
        let samples: Vec<Point> = pairs.iter().map(|(u, _)| u.clone()).collect();
        let check = check_commuting(f, s, &samples, tol, k)?;
        if let Some(w) = check.witness {
            return Err(Error::InvalidConfig(format!("f and S do not commute at {w}")));
        }
    }
    if tag.is_cclass() {
        variant.triple()?;
    }

    let mut warnings = Vec::new();
    if tag.is_cclass() && coeffs.c[2] != coeffs.c[3] {
        warnings.push(CertificateWarning::C3NotEqualC4);
    }
    if coeffs.sum_mode == SumMode::ExactlyOne && coeffs.c[1] == 0.0 && coeffs.c[4] == 0.0 {
        warnings.push(CertificateWarning::DegenerateUniquenessBound);
    }

    let mut outcome = Outcome::Satisfied;
    let mut violations = 0;
    let mut zero_aggregate = 0;
    for (u, v) in &pairs {
        let (holds, lhs, rhs) = if tag.is_cclass() {
            let r = cclass_check_pair(variant, f, u, v, coeffs, k, tol)?;
            if r.aggregate == 0.0 {
                zero_aggregate += 1;
            }
            (r.holds, r.lhs_psi, r.rhs_g)
        } else {
            let s = match tag {
                VariantTag::HardyRogers => hr_sides(f, u, v, coeffs, k)?,
                _ => jungck_sides(f, variant.s_map()?, u, v, coeffs, k)?,
            };
            (within(s.lhs, s.rhs, tol), s.lhs, s.rhs)
        };
        if !holds {
            violations += 1;
            if outcome == Outcome::Satisfied {
                outcome = Outcome::Violated { u: u.clone(), v: v.clone(), lhs, rhs };
            }
        }
    }
    if zero_aggregate > 0 {
        warnings.push(CertificateWarning::ZeroAggregate { pairs: zero_aggregate });
    }
    Ok(ContractionCertificate {
        variant: tag,
        coeffs: *coeffs,
        seed: sampler.seed,
        pairs_checked: pairs.len(),
        violations,
        outcome,
        warnings,
    })
}
