use fixpt_core::cclass::builtin_triples;
use fixpt_core::contraction::{
    cclass_check_pair, certify, hr_sides, jungck_sides, Coefficients, ContractionVariant, PairSampler, SampleBox,
    SumMode,
};
use fixpt_core::linalg::Matrix;
use fixpt_core::problems::random_affine;
use fixpt_core::solver::{run_jungck_schaefer, run_picard, run_schaefer, PairProblem, Scheme, SolverConfig};
use fixpt_core::space::{averaged_apply, distance, norm, MappingKind};
use fixpt_core::{AveragedMap, Mapping, NormKind, Point};
use proptest::prelude::*;

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, dim)
}

fn point(dim: usize) -> impl Strategy<Value = Point> {
    coords(dim).prop_map(|c| Point::new(c).unwrap())
}

fn norm_kind() -> impl Strategy<Value = NormKind> {
    prop::sample::select(NormKind::ALL.to_vec())
}

fn affine_of(seed: u64, dim: usize) -> Mapping {
    random_affine(dim, 0.9, seed).unwrap().f
}

fn add(a: &Point, b: &Point) -> Point {
    Point::new(a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect()).unwrap()
}

fn scale(a: &Point, s: f64) -> Point {
    Point::new(a.coords().iter().map(|x| s * x).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_homogeneity_and_triangle((u, v) in (1usize..6).prop_flat_map(|d| (point(d), point(d))), lambda in -50.0..50.0f64, k in norm_kind()) {
        let scaled = norm(&scale(&u, lambda), k);
        prop_assert!((scaled - lambda.abs() * norm(&u, k)).abs() <= 1e-12 * scaled.max(1.0));
        prop_assert!(norm(&add(&u, &v), k) <= norm(&u, k) + norm(&v, k) + 1e-12);
        prop_assert!(norm(&u, k) >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distance_is_symmetric_and_separating((u, v) in (1usize..6).prop_flat_map(|d| (point(d), point(d))), k in norm_kind()) {
        prop_assert_eq!(distance(&u, &v, k).unwrap(), distance(&v, &u, k).unwrap());
        prop_assert_eq!(distance(&u, &u, k).unwrap(), 0.0);
        if u != v {
            prop_assert!(distance(&u, &v, k).unwrap() > 0.0);
        }
    }

    /// f_c(u) − u = c·(f(u) − u): fixed points of f and f_c coincide.
    #[test]
    fn averaged_displacement_is_scaled(seed in any::<u64>(), dim in 1usize..6, c in 0.01..=1.0f64, u in coords(5)) {
        let f = affine_of(seed, dim);
        let u = Point::new(u[..dim].to_vec()).unwrap();
        let fc = AveragedMap::new(f.clone(), c).unwrap();
        let lhs = distance(&averaged_apply(&fc, &u).unwrap(), &u, NormKind::L2).unwrap();
        let rhs = c * distance(&f.apply(&u).unwrap(), &u, NormKind::L2).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));

        let x = f.known_fixed_point().unwrap();
        let fcx = averaged_apply(&fc, x).unwrap();
        prop_assert!(distance(&fcx, x, NormKind::L2).unwrap() <= 1e-12);
    }

    /// c ↦ f_c(u) is the segment from u to f(u).
    #[test]
    fn averaged_map_traces_segment(seed in any::<u64>(), c in 0.01..1.0f64, u in coords(3)) {
        let f = affine_of(seed, 3);
        let u = Point::new(u).unwrap();
        let fu = f.apply(&u).unwrap();
        prop_assert_eq!(AveragedMap::new(f.clone(), 1.0).unwrap().apply(&u).unwrap(), fu.clone());
        let mid = AveragedMap::new(f, c).unwrap().apply(&u).unwrap();
        let d_total = distance(&u, &fu, NormKind::L2).unwrap();
        let d_a = distance(&u, &mid, NormKind::L2).unwrap();
        let d_b = distance(&mid, &fu, NormKind::L2).unwrap();
        prop_assert!((d_a + d_b - d_total).abs() <= 1e-9 * d_total.max(1.0));
        prop_assert!((d_a - c * d_total).abs() <= 1e-9 * d_total.max(1.0));
    }

    /// For affine f: f_c²u = (1−c)²u + 2c(1−c)f(u) + c²f²(u).
    #[test]
    fn squared_averaged_map_expands_binomially(seed in any::<u64>(), c in 0.01..=1.0f64, u in coords(4)) {
        let f = affine_of(seed, 4);
        let u = Point::new(u).unwrap();
        let fc = AveragedMap::new(f.clone(), c).unwrap();
        let lhs = fc.apply(&fc.apply(&u).unwrap()).unwrap();
        let fu = f.apply(&u).unwrap();
        let ffu = f.apply(&fu).unwrap();
        let expected = add(&add(&scale(&u, (1.0 - c) * (1.0 - c)), &scale(&fu, 2.0 * c * (1.0 - c))), &scale(&ffu, c * c));
        prop_assert!(distance(&lhs, &expected, NormKind::L2).unwrap() <= 1e-10 * norm(&expected, NormKind::L2).max(1.0));
    }

    /// Residuals of the averaged iteration never grow for certified affine contractions.
    #[test]
    fn schaefer_residuals_non_increasing(seed in any::<u64>(), dim in 1usize..8, c in 0.05..=1.0f64) {
        let p = random_affine(dim, 0.9, seed).unwrap();
        let cfg = SolverConfig::new(Scheme::Schaefer, p.default_start.clone()).with_c(c).with_tol(1e-10);
        let t = run_schaefer(&p.f, &cfg).unwrap();
        prop_assert!(t.status.limit().is_some());
        for w in t.residuals.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn schaefer_unit_c_equals_picard(seed in any::<u64>(), dim in 1usize..6) {
        let p = random_affine(dim, 0.9, seed).unwrap();
        let a = run_schaefer(&p.f, &SolverConfig::new(Scheme::Schaefer, p.default_start.clone())).unwrap();
        let b = run_picard(&p.f, &SolverConfig::new(Scheme::Picard, p.default_start.clone())).unwrap();
        prop_assert_eq!(a.iterates, b.iterates);
        prop_assert_eq!(a.residuals, b.residuals);
    }

    #[test]
    fn jungck_identity_equals_schaefer(seed in any::<u64>(), dim in 1usize..6, c in 0.05..=1.0f64) {
        let p = random_affine(dim, 0.9, seed).unwrap();
        let pair = PairProblem::with_affine_s(p.f.clone(), Mapping::identity(dim)).unwrap();
        let j = SolverConfig::new(Scheme::JungckSchaefer, p.default_start.clone()).with_c(c);
        let s = SolverConfig { scheme: Scheme::Schaefer, ..j.clone() };
        let a = run_jungck_schaefer(&pair, &j).unwrap();
        let b = run_schaefer(&p.f, &s).unwrap();
        prop_assert_eq!(a.iterates, b.iterates);
        prop_assert_eq!(a.residuals, b.residuals);
        prop_assert_eq!(a.status, b.status);
    }

    #[test]
    fn jungck_with_identity_reduces_to_hr(seed in any::<u64>(), dim in 1usize..6, u in coords(5), v in coords(5), delta in 0.0..5.0f64, k in norm_kind()) {
        let f = affine_of(seed, dim);
        let u = Point::new(u[..dim].to_vec()).unwrap();
        let v = Point::new(v[..dim].to_vec()).unwrap();
        let c = Coefficients::new(delta, [0.2, 0.1, 0.15, 0.15, 0.1], SumMode::StrictlyLessOne).unwrap();
        let a = jungck_sides(&f, &Mapping::identity(dim), &u, &v, &c, k).unwrap();
        let b = hr_sides(&f, &u, &v, &c, k).unwrap();
        prop_assert_eq!(a, b);
    }

    /// With ψ strictly increasing and G(s,t) ≤ s, the C-class inequality at
    /// a pair implies the plain one.
    #[test]
    fn cclass_condition_dominates_plain(seed in any::<u64>(), u in -5.0..5.0f64, v in -5.0..5.0f64, w in prop::array::uniform5(0.0..1.0f64), delta in 0.0..2.0f64, which in 0usize..3) {
        let total: f64 = w.iter().sum();
        prop_assume!(total > 1e-3);
        let mut c = w.map(|x| x / total);
        let drift: f64 = c.iter().sum::<f64>() - 1.0;
        c[0] -= drift;
        prop_assume!(c[0] >= 0.0);
        let coeffs = Coefficients::new(delta, c, SumMode::ExactlyOne).unwrap();
        let f = affine_of(seed, 1);
        let triple = builtin_triples().swap_remove(which).triple;
        let variant = ContractionVariant::cclass(triple).unwrap();
        let (u, v) = (Point::scalar(u).unwrap(), Point::scalar(v).unwrap());
        let r = cclass_check_pair(&variant, &f, &u, &v, &coeffs, NormKind::L2, 0.0).unwrap();
        if r.holds {
            let plain = hr_sides(&f, &u, &v, &coeffs, NormKind::L2).unwrap();
            prop_assert!(plain.lhs <= plain.rhs * (1.0 + 1e-12) + 1e-15);
        }
    }

    /// Conjugating an affine f by x ↦ λx scales both sides by λ.
    #[test]
    fn hr_sides_scale_covariant(seed in any::<u64>(), u in coords(3), v in coords(3), lambda in 0.01..100.0f64, delta in 0.0..3.0f64) {
        let f = affine_of(seed, 3);
        let MappingKind::Affine { matrix, offset } = f.kind() else { unreachable!() };
        let conj = Mapping::affine("conj", matrix.clone(), offset.iter().map(|b| lambda * b).collect()).unwrap();
        let (u, v) = (Point::new(u).unwrap(), Point::new(v).unwrap());
        let c = Coefficients::new(delta, [0.3, 0.1, 0.2, 0.2, 0.1], SumMode::StrictlyLessOne).unwrap();
        let base = hr_sides(&f, &u, &v, &c, NormKind::L2).unwrap();
        let scaled = hr_sides(&conj, &scale(&u, lambda), &scale(&v, lambda), &c, NormKind::L2).unwrap();
        prop_assert!((scaled.lhs - lambda * base.lhs).abs() <= 1e-9 * scaled.lhs.max(1.0));
        prop_assert!((scaled.rhs - lambda * base.rhs).abs() <= 1e-9 * scaled.rhs.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificate_outcome_invariant_under_box_scaling(seed in any::<u64>(), lambda in 0.1..10.0f64, c1 in 0.3..0.99f64) {
        let p = random_affine(2, 0.6, seed).unwrap();
        let MappingKind::Affine { matrix, offset } = p.f.kind() else { unreachable!() };
        let conj = Mapping::affine("conj", matrix.clone(), offset.iter().map(|b| lambda * b).collect()).unwrap();
        let coeffs = Coefficients::banach(0.0, c1).unwrap();
        let bx = SampleBox::cube(2, -3.0, 3.0).unwrap();
        let a = certify(&ContractionVariant::hardy_rogers(), &p.f, &coeffs, &PairSampler::new(bx.clone(), 5), NormKind::L2, 1e-9).unwrap();
        let b = certify(&ContractionVariant::hardy_rogers(), &conj, &coeffs, &PairSampler::new(bx.scaled(lambda).unwrap(), 5), NormKind::L2, 1e-9).unwrap();
        prop_assert_eq!(a.satisfied(), b.satisfied());
    }

    #[test]
    fn certify_is_deterministic(seed in any::<u64>(), c1 in 0.1..0.99f64) {
        let f = Mapping::affine("m", Matrix::from_row_slice(2, 2, &[0.4, -0.3, 0.2, 0.5]), vec![1.0, -1.0]).unwrap();
        let coeffs = Coefficients::banach(0.0, c1).unwrap();
        let sampler = PairSampler::new(SampleBox::cube(2, -10.0, 10.0).unwrap(), seed);
        let a = certify(&ContractionVariant::hardy_rogers(), &f, &coeffs, &sampler, NormKind::L2, 1e-9).unwrap();
        let b = certify(&ContractionVariant::hardy_rogers(), &f, &coeffs, &sampler, NormKind::L2, 1e-9).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn random_affine_is_pure(dim in 1usize..12, cap in 0.05..0.95f64, seed in any::<u64>()) {
        let a = random_affine(dim, cap, seed).unwrap();
        let b = random_affine(dim, cap, seed).unwrap();
        prop_assert_eq!(&a.oracle_fixed_point, &b.oracle_fixed_point);
        let probe = Point::filled(dim, 0.5).unwrap();
        prop_assert_eq!(a.f.apply(&probe).unwrap(), b.f.apply(&probe).unwrap());
        let x = a.oracle_fixed_point.unwrap();
        prop_assert!(distance(&a.f.apply(&x).unwrap(), &x, NormKind::L2).unwrap() <= 1e-9);
    }
}

#[test]
fn literal_convex_combination_identity_fails_for_half_map() {
    // f_c²u = (1−c)f(u) + c·f²(u) does not hold for f(x) = x/2, c = 1/2, u = 1:
    // f_c(1) = 0.75, f_c²(1) = 0.5625, whereas the convex-combination form gives 0.375.
    let f = Mapping::affine_scalar("half", 0.5, 0.0).unwrap();
    let fc = AveragedMap::new(f, 0.5).unwrap();
    let u = Point::scalar(1.0).unwrap();
    let twice = fc.apply(&fc.apply(&u).unwrap()).unwrap();
    assert_eq!(twice.at(0), 0.5625);
    assert_ne!(twice.at(0), 0.5 * 0.5 + 0.5 * 0.25);
}
