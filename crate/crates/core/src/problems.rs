//! Built-in problem suite, seeded random affine contractions and a
//! bisection oracle for 1-D fixed points.
//!
//! Random instances draw from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded
//! with `seed_from_u64`; matrix entries are drawn row-major, then the offset
//! vector, all uniform on `[-1, 1)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contraction::{
    certify, Coefficients, ContractionCertificate, ContractionVariant, PairSampler, SampleBox, SumMode, VariantTag,
    DEFAULT_TOL,
};
use crate::linalg::{self, Matrix};
use crate::solver::PairProblem;
use crate::space::{Mapping, NormKind, Point};
use crate::{Error, Result};

/// Sampler seed used when certifying built-ins.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certification {
    pub variant: VariantTag,
    pub coeffs: Coefficients,
}

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub name: String,
    pub description: String,
    pub f: Mapping,
    /// Present for commuting-pair problems.
    pub pair: Option<PairProblem>,
    pub certified_as: Option<Certification>,
    pub oracle_fixed_point: Option<Point>,
    pub sample_box: SampleBox,
    pub default_start: Point,
}

impl ProblemInstance {
    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn s(&self) -> Option<&Mapping> {
        self.pair.as_ref().map(|p| &p.s)
    }

    /// The variant object for the certified class (plain or Jungck only;
    /// built-ins carry no C-class certification).
    pub fn certified_variant(&self) -> Option<ContractionVariant> {
        let cert = self.certified_as?;
        match cert.variant {
            VariantTag::HardyRogers => Some(ContractionVariant::hardy_rogers()),
            VariantTag::JungckHardyRogers => self.s().map(|s| ContractionVariant::jungck(s.clone())),
            _ => None,
        }
    }

    /// Re-runs the stored certification over the problem box.
    pub fn certify_default(&self) -> Result<Option<ContractionCertificate>> {
        let (Some(cert), Some(variant)) = (self.certified_as, self.certified_variant()) else {
            return Ok(None);
        };
        let sampler = PairSampler::new(self.sample_box.clone(), DEFAULT_SEED);
        certify(&variant, &self.f, &cert.coeffs, &sampler, NormKind::L2, DEFAULT_TOL).map(Some)
    }

    /// Averaging parameter implied by the certification (`1/(1+δ)`), else 1.
    pub fn natural_c(&self) -> f64 {
        self.certified_as.map_or(1.0, |c| c.coeffs.averaging_parameter())
    }

    /// `n ≥ 2` points evenly spaced along the box diagonal, corners included.
    pub fn spread_starts(&self, n: usize) -> Vec<Point> {
        let bx = &self.sample_box;
        (0..n)
            .map(|i| {
                let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 };
                let coords = bx.lo.iter().zip(&bx.hi).map(|(l, h)| l + t * (h - l)).collect();
                Point::new(coords).expect("box corners are finite")
            })
            .collect()
    }
}

fn scalar_box(lo: f64, hi: f64) -> SampleBox {
    SampleBox::cube(1, lo, hi).expect("valid literal box")
}

fn pt(x: f64) -> Point {
    Point::scalar(x).expect("finite literal")
}

fn half_map() -> ProblemInstance {
    let f = Mapping::affine_scalar("half-map", 0.5, 0.0).unwrap().with_known_fixed_point(pt(0.0)).unwrap();
    ProblemInstance {
        name: "half-map".into(),
        description: "f(x) = x/2; Banach contraction with constant 1/2".into(),
        f,
        pair: None,
        certified_as: Some(Certification { variant: VariantTag::HardyRogers, coeffs: Coefficients::banach(0.0, 0.6).unwrap() }),
        oracle_fixed_point: Some(pt(0.0)),
        sample_box: scalar_box(-10.0, 10.0),
        default_start: pt(1.0),
    }
}

fn reflection() -> ProblemInstance {
    let f = Mapping::affine_scalar("reflection", -1.0, 1.0).unwrap().with_known_fixed_point(pt(0.5)).unwrap();
    ProblemInstance {
        name: "reflection".into(),
        description: "f(x) = 1 - x; Picard oscillates, enriched with delta = 1 the left side vanishes".into(),
        f,
        pair: None,
        certified_as: Some(Certification { variant: VariantTag::HardyRogers, coeffs: Coefficients::banach(1.0, 0.5).unwrap() }),
        oracle_fixed_point: Some(pt(0.5)),
        sample_box: scalar_box(-10.0, 10.0),
        default_start: pt(0.0),
    }
}

/// `x/4` below `1/2`, `x/5` from `1/2` on. Discontinuous at `1/2`, so not a
/// Banach contraction, but `|fu − fv| ≤ (1/3)(|u − fu| + |v − fv|)`.
fn kannan_map(x: f64) -> f64 {
    if x < 0.5 {
        x / 4.0
    } else {
        x / 5.0
    }
}

fn kannan_style() -> ProblemInstance {
    let f = Mapping::scalar("kannan-style", kannan_map).with_known_fixed_point(pt(0.0)).unwrap();
    let coeffs = Coefficients::new(0.0, [0.0, 0.34, 0.0, 0.0, 0.34], SumMode::StrictlyLessOne).unwrap();
    ProblemInstance {
        name: "kannan-style".into(),
        description: "x/4 on x < 1/2, x/5 otherwise; Kannan-type with c2 = c5 = 0.34 on [0, 1]".into(),
        f,
        pair: None,
        certified_as: Some(Certification { variant: VariantTag::HardyRogers, coeffs }),
        oracle_fixed_point: Some(pt(0.0)),
        sample_box: scalar_box(0.0, 1.0),
        default_start: pt(1.0),
    }
}

fn doubling() -> ProblemInstance {
    ProblemInstance {
        name: "doubling".into(),
        description: "f(x) = 2x; expansive, fixed point 0 is repelling".into(),
        f: Mapping::affine_scalar("doubling", 2.0, 0.0).unwrap(),
        pair: None,
        certified_as: None,
        oracle_fixed_point: Some(pt(0.0)),
        sample_box: scalar_box(-10.0, 10.0),
        default_start: pt(1.0),
    }
}

fn identity() -> ProblemInstance {
    ProblemInstance {
        name: "identity".into(),
        description: "f(x) = x; every point is fixed".into(),
        f: Mapping::identity(1),
        pair: None,
        certified_as: None,
        oracle_fixed_point: None,
        sample_box: scalar_box(-10.0, 10.0),
        default_start: pt(1.0),
    }
}

fn jungck_linear() -> ProblemInstance {
    let f = Mapping::affine_scalar("half", 0.5, 0.0).unwrap().with_known_fixed_point(pt(0.0)).unwrap();
    let s = Mapping::affine_scalar("double", 2.0, 0.0).unwrap().with_known_fixed_point(pt(0.0)).unwrap();
    let pair = PairProblem::with_affine_s(f.clone(), s).unwrap();
    ProblemInstance {
        name: "jungck-linear".into(),
        description: "f(x) = x/2 with S(x) = 2x; commuting pair, common fixed point 0".into(),
        f,
        pair: Some(pair),
        certified_as: Some(Certification {
            variant: VariantTag::JungckHardyRogers,
            coeffs: Coefficients::banach(0.0, 0.5).unwrap(),
        }),
        oracle_fixed_point: Some(pt(0.0)),
        sample_box: scalar_box(-10.0, 10.0),
        default_start: pt(1.0),
    }
}

pub fn builtin_problems() -> Vec<ProblemInstance> {
    let mut affine = random_affine(10, 0.9, 7).expect("valid parameters");
    affine.name = "affine-contraction-10d".into();
    affine.description = format!("seeded 10-D affine map, ||A||_2 <= 0.9 ({})", affine.description);
    vec![half_map(), reflection(), kannan_style(), affine, jungck_linear(), doubling(), identity()]
}

/// Looks up a built-in, or parses `random-affine:<dim>:<cap>:<seed>`.
pub fn problem_by_name(name: &str) -> Result<ProblemInstance> {
    if let Some(spec) = name.strip_prefix("random-affine:") {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::InvalidConfig(format!("malformed random problem '{name}', want random-affine:dim:cap:seed"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let dim = parts[0].parse().map_err(|_| bad())?;
        let cap = parts[1].parse().map_err(|_| bad())?;
        let seed = parts[2].parse().map_err(|_| bad())?;
        return random_affine(dim, cap, seed);
    }
    builtin_problems()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown problem '{name}'")))
}

/// Seeded affine contraction `x ↦ Ax + b` with `‖A‖₂ ≤ spectral_cap`.
///
/// `A` is rescaled so that `min(√(‖A‖₁‖A‖∞), ‖A‖_F)`, an upper bound on the
/// spectral norm, equals `spectral_cap`.
pub fn random_affine(dim: usize, spectral_cap: f64, seed: u64) -> Result<ProblemInstance> {
    if dim == 0 {
        return Err(Error::InvalidConfig("random_affine needs dim ≥ 1".into()));
    }
    if !(spectral_cap > 0.0 && spectral_cap < 1.0) {
        return Err(Error::InvalidConfig(format!("spectral cap {spectral_cap} not in (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<f64> = (0..dim * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let offset: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut a = Matrix::from_row_slice(dim, dim, &entries);
    let bound = linalg::spectral_norm_bound(&a);
    if bound > 0.0 {
        a *= spectral_cap / bound;
    }
    let name = format!("random-affine:{dim}:{spectral_cap}:{seed}");
    let f = Mapping::affine(name.clone(), a, offset)?;
    let x = f.affine_fixed_point().expect("I - A is nonsingular when ||A|| < 1");
    let residual = NormKind::L2.eval(&f.apply(&x)?.diff(&x)?)?;
    assert!(residual <= 1e-9, "linear-solve oracle residual {residual}");
    let f = f.with_known_fixed_point(x.clone())?;
    Ok(ProblemInstance {
        name,
        description: "ChaCha8 uniform(-1,1) entries, rescaled".to_string(),
        f,
        pair: None,
        certified_as: Some(Certification {
            variant: VariantTag::HardyRogers,
            coeffs: Coefficients::banach(0.0, spectral_cap)?,
        }),
        oracle_fixed_point: Some(x),
        sample_box: SampleBox::cube(dim, -10.0, 10.0)?,
        default_start: Point::filled(dim, 1.0)?,
    })
}

/// Bisection on `g(x) = f(x) − x` over `[lo, hi]`; independent of the
/// iteration schemes.
pub fn oracle_fixed_point_1d(f: &Mapping, lo: f64, hi: f64, tol: f64) -> Result<Point> {
    if f.dim() != 1 {
        return Err(Error::InvalidInput("bisection oracle needs a 1-D mapping".into()));
    }
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("bad bracket [{lo}, {hi}] or tol {tol}")));
    }
    let g = |x: f64| -> Result<f64> { Ok(f.apply(&Point::scalar(x)?)?.at(0) - x) };
    let (mut a, mut b) = (lo, hi);
    let (mut ga, gb) = (g(a)?, g(b)?);
    if ga == 0.0 {
        return Point::scalar(a);
    }
    if gb == 0.0 {
        return Point::scalar(b);
    }
    if ga.signum() == gb.signum() {
        return Err(Error::NoRootBracketed { lo, hi });
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m)?;
        if gm == 0.0 {
            return Point::scalar(m);
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Point::scalar(0.5 * (a + b))
}
