//! Points, norms and self-maps of `ℝⁿ`, and the averaged-map transform.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{self, Matrix};
use crate::{Error, Result};

/// A finite point of `ℝⁿ`, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("point must have dimension ≥ 1".into()));
        }
        if let Some(bad) = coords.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate {bad}")));
        }
        Ok(Self { coords })
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Self::new(alloc::vec![x])
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0; dim])
    }

    pub fn filled(dim: usize, value: f64) -> Result<Self> {
        Self::new(alloc::vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Coordinate `i`; shorthand for 1-D work.
    pub fn at(&self, i: usize) -> f64 {
        self.coords[i]
    }

    fn ensure_same_dim(&self, other: &Point) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidInput(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    /// `self − other` as raw coordinates (may leave the finite range only
    /// through overflow, which callers treat as divergence).
    pub fn diff(&self, other: &Point) -> Result<Vec<f64>> {
        self.ensure_same_dim(other)?;
        Ok(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormKind {
    L1,
    #[default]
    L2,
    LInf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::L1, NormKind::L2, NormKind::LInf];

    /// Norm of a raw coordinate slice.
    pub fn eval(self, v: &[f64]) -> Result<f64> {
        if v.is_empty() {
            return Err(Error::InvalidInput("norm of a dimension-zero vector".into()));
        }
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(self, v: &[f64]) -> f64 {
        match self {
            NormKind::L1 => v.iter().map(|x| libm::fabs(*x)).sum(),
            NormKind::L2 => libm::sqrt(v.iter().map(|x| x * x).sum()),
            NormKind::LInf => v.iter().map(|x| libm::fabs(*x)).fold(0.0, f64::max),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::LInf => "linf",
        }
    }
}

impl core::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" | "l-inf" | "max" => Ok(NormKind::LInf),
            other => Err(Error::InvalidConfig(format!("unknown norm '{other}'"))),
        }
    }
}

pub fn norm(p: &Point, k: NormKind) -> f64 {
    k.eval_unchecked(p.coords())
}

pub fn distance(u: &Point, v: &Point, k: NormKind) -> Result<f64> {
    Ok(k.eval_unchecked(&u.diff(v)?))
}

pub type MapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub enum MappingKind {
    /// `x ↦ A·x + b`.
    Affine { matrix: Matrix<f64>, offset: Vec<f64> },
    Closure(MapFn),
}

/// A self-map of `ℝⁿ`.
#[derive(Clone)]
pub struct Mapping {
    label: String,
    dim: usize,
    kind: MappingKind,
    known_fixed_point: Option<Point>,
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            MappingKind::Affine { .. } => "Affine",
            MappingKind::Closure(_) => "Closure",
        };
        f.debug_struct("Mapping")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("kind", &kind)
            .field("known_fixed_point", &self.known_fixed_point)
            .finish()
    }
}

impl Mapping {
    pub fn affine(label: impl Into<String>, matrix: Matrix<f64>, offset: Vec<f64>) -> Result<Self> {
        let dim = offset.len();
        if dim == 0 || matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidInput(format!(
                "affine map needs a square {dim}x{dim} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().chain(offset.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("affine map has non-finite entries".into()));
        }
        Ok(Self { label: label.into(), dim, kind: MappingKind::Affine { matrix, offset }, known_fixed_point: None })
    }

    /// 1-D affine map `x ↦ a·x + b`.
    pub fn affine_scalar(label: impl Into<String>, a: f64, b: f64) -> Result<Self> {
        Self::affine(label, Matrix::from_element(1, 1, a), alloc::vec![b])
    }

    pub fn closure<F>(label: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        assert!(dim >= 1, "mapping dimension must be ≥ 1");
        Self { label: label.into(), dim, kind: MappingKind::Closure(Arc::new(f)), known_fixed_point: None }
    }

    /// 1-D map from a scalar function.
    pub fn scalar<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::closure(label, 1, move |x| alloc::vec![f(x[0])])
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "mapping dimension must be ≥ 1");
        Self::affine("identity", Matrix::identity(dim, dim), alloc::vec![0.0; dim])
            .expect("identity is a valid affine map")
    }

    pub fn with_known_fixed_point(mut self, p: Point) -> Result<Self> {
        if p.dim() != self.dim {
            return Err(Error::InvalidInput("known fixed point has wrong dimension".into()));
        }
        self.known_fixed_point = Some(p);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &MappingKind {
        &self.kind
    }

    pub fn known_fixed_point(&self) -> Option<&Point> {
        self.known_fixed_point.as_ref()
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.kind, MappingKind::Affine { .. })
    }

    pub fn apply(&self, u: &Point) -> Result<Point> {
        if u.dim() != self.dim {
            return Err(Error::InvalidInput(format!(
                "mapping '{}' expects dimension {}, got {}",
                self.label,
                self.dim,
                u.dim()
            )));
        }
        let out = match &self.kind {
            MappingKind::Affine { matrix, offset } => {
                let mut y = linalg::mat_vec(matrix, u.coords());
                y.iter_mut().zip(offset).for_each(|(y, b)| *y += b);
                y
            }
            MappingKind::Closure(f) => f(u.coords()),
        };
        if out.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "mapping '{}' changed dimension {} -> {}",
                self.label,
                self.dim,
                out.len()
            )));
        }
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::Evaluation { what: self.label.to_string(), input: u.coords().to_vec() });
        }
        Ok(Point { coords: out })
    }

    /// Exact fixed point of an affine map by solving `(I − A)x = b`.
    pub fn affine_fixed_point(&self) -> Option<Point> {
        let MappingKind::Affine { matrix, offset } = &self.kind else {
            return None;
        };
        let lhs = Matrix::identity(self.dim, self.dim) - matrix;
        linalg::solve(&lhs, offset).and_then(|x| Point::new(x).ok())
    }

    /// `w ↦ A⁻¹(w − b)` for an invertible affine map.
    pub fn affine_inverse(&self) -> Option<MapFn> {
        let MappingKind::Affine { matrix, offset } = &self.kind else {
            return None;
        };
        let lu = matrix.clone().lu();
        if !lu.is_invertible() {
            return None;
        }
        let offset = offset.clone();
        Some(Arc::new(move |w: &[f64]| {
            let rhs = nalgebra::DVector::from_iterator(w.len(), w.iter().zip(&offset).map(|(w, b)| w - b));
            match lu.solve(&rhs) {
                Some(x) => x.iter().copied().collect(),
                None => alloc::vec![f64::NAN; w.len()],
            }
        }))
    }
}

/// `(1 − c)·u + c·v`, returning `v` unchanged when `c = 1`.
pub(crate) fn blend(u: &Point, v: &Point, c: f64) -> Point {
    if c == 1.0 {
        return v.clone();
    }
    let coords = u.coords.iter().zip(&v.coords).map(|(a, b)| (1.0 - c) * a + c * b).collect();
    Point { coords }
}

/// `f_c(u) = (1 − c)u + c·f(u)`, `c ∈ (0, 1]`. Shares its fixed-point set
/// with `f`.
#[derive(Debug, Clone)]
pub struct AveragedMap {
    base: Mapping,
    c: f64,
}

impl AveragedMap {
    pub fn new(base: Mapping, c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidConfig(format!("averaging parameter c = {c} not in (0, 1]")));
        }
        Ok(Self { base, c })
    }

    pub fn base(&self) -> &Mapping {
        &self.base
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn apply(&self, u: &Point) -> Result<Point> {
        let fu = self.base.apply(u)?;
        Ok(blend(u, &fu, self.c))
    }
}

pub fn averaged_apply(m: &AveragedMap, u: &Point) -> Result<Point> {
    m.apply(u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommuteCheck {
    pub commutes: bool,
    /// First sample with `||f(S(p)) − S(f(p))|| > tol`.
    pub witness: Option<Point>,
}

/// Sampled check of `f∘S = S∘f`.
pub fn check_commuting(f: &Mapping, s: &Mapping, samples: &[Point], tol: f64, k: NormKind) -> Result<CommuteCheck> {
    if f.dim() != s.dim() {
        return Err(Error::InvalidInput(format!("f has dimension {}, S has {}", f.dim(), s.dim())));
    }
    if samples.is_empty() {
        return Err(Error::InvalidInput("commuting check needs at least one sample".into()));
    }
    for p in samples {
        let fs = f.apply(&s.apply(p)?)?;
        let sf = s.apply(&f.apply(p)?)?;
        if distance(&fs, &sf, k)? > tol {
            return Ok(CommuteCheck { commutes: false, witness: Some(p.clone()) });
        }
    }
    Ok(CommuteCheck { commutes: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&pt(&[3.0, 4.0]), NormKind::L2), 5.0);
        assert_eq!(norm(&pt(&[0.0, 0.0]), NormKind::L1), 0.0);
        assert_eq!(norm(&pt(&[1.0, -2.0, 3.0]), NormKind::LInf), 3.0);
    }

    #[test]
    fn empty_and_non_finite_rejected() {
        assert!(matches!(Point::new(vec![]), Err(Error::InvalidInput(_))));
        assert!(Point::new(vec![f64::NAN]).is_err());
        assert!(Point::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(matches!(NormKind::L2.eval(&[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&pt(&[1.0, 1.0]), &pt(&[1.0, 1.0]), NormKind::L2).unwrap(), 0.0);
        assert_eq!(distance(&pt(&[0.0, 0.0]), &pt(&[3.0, 4.0]), NormKind::L2).unwrap(), 5.0);
        assert_eq!(distance(&pt(&[1.0, 0.0]), &pt(&[0.0, 1.0]), NormKind::L1).unwrap(), 2.0);
        assert!(distance(&pt(&[1.0]), &pt(&[1.0, 2.0]), NormKind::L2).is_err());
    }

    #[test]
    fn averaged_examples() {
        let reflect = Mapping::affine_scalar("reflection", -1.0, 1.0).unwrap();
        let half = AveragedMap::new(reflect.clone(), 0.5).unwrap();
        assert_eq!(averaged_apply(&half, &pt(&[0.0])).unwrap(), pt(&[0.5]));

        let whole = AveragedMap::new(reflect.clone(), 1.0).unwrap();
        let u = pt(&[0.3]);
        assert_eq!(whole.apply(&u).unwrap(), reflect.apply(&u).unwrap());

        let ident = AveragedMap::new(Mapping::identity(1), 0.37).unwrap();
        assert_eq!(ident.apply(&pt(&[7.0])).unwrap(), pt(&[7.0]));
    }

    #[test]
    fn averaged_rejects_bad_c_and_dim() {
        assert!(AveragedMap::new(Mapping::identity(1), 0.0).is_err());
        assert!(AveragedMap::new(Mapping::identity(1), 1.5).is_err());
        let m = AveragedMap::new(Mapping::identity(2), 0.5).unwrap();
        assert!(matches!(m.apply(&pt(&[1.0])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn commuting_examples() {
        let f = Mapping::affine_scalar("half", 0.5, 0.0).unwrap();
        let s = Mapping::affine_scalar("double", 2.0, 0.0).unwrap();
        let samples = [pt(&[-1.0]), pt(&[0.0]), pt(&[3.0])];
        let r = check_commuting(&f, &s, &samples, 1e-12, NormKind::L2).unwrap();
        assert!(r.commutes && r.witness.is_none());

        let shift = Mapping::scalar("shift", |x| x + 1.0);
        let r = check_commuting(&shift, &s, &[pt(&[1.0])], 1e-12, NormKind::L2).unwrap();
        assert!(!r.commutes);
        assert_eq!(r.witness, Some(pt(&[1.0])));

        let id = Mapping::identity(1);
        assert!(check_commuting(&id, &id, &samples, 0.0, NormKind::L2).unwrap().commutes);
    }

    #[test]
    fn mapping_dimension_checks() {
        let bad = Mapping::closure("grow", 1, |x| vec![x[0], x[0]]);
        assert!(matches!(bad.apply(&pt(&[1.0])), Err(Error::InvalidInput(_))));
        let blowup = Mapping::scalar("inf", |_| f64::INFINITY);
        assert!(matches!(blowup.apply(&pt(&[1.0])), Err(Error::Evaluation { .. })));
        assert!(Mapping::affine("bad", Matrix::zeros(2, 3), vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn affine_fixed_point_and_inverse() {
        let a = Matrix::from_row_slice(2, 2, &[0.5, 0.1, -0.2, 0.3]);
        let f = Mapping::affine("f", a, vec![1.0, -1.0]).unwrap();
        let x = f.affine_fixed_point().unwrap();
        assert!(distance(&f.apply(&x).unwrap(), &x, NormKind::L2).unwrap() < 1e-14);

        let inv = f.affine_inverse().unwrap();
        let w = pt(&[0.7, 2.0]);
        let u = pt(&inv(w.coords()));
        assert!(distance(&f.apply(&u).unwrap(), &w, NormKind::L2).unwrap() < 1e-14);
        assert!(Mapping::scalar("s", |x| x).affine_inverse().is_none());
    }
}
