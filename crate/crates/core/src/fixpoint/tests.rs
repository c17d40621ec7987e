use super::*;
use crate::cso::pinned;
use crate::numeric::{branch_distance, c};

fn omega() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

fn golden_m() -> AffineCso {
    let w = omega();
    AffineCso::from_triples(&[(ONE, c(-w, 0.0), ZERO), (ONE, c(w * w, 0.0), ONE)]).unwrap()
}

fn pole_operator() -> AffineCso {
    let third = c(1.0 / 3.0, 0.0);
    AffineCso::from_triples(&[(third, third, ZERO), (third, third, c(3.0, 0.0))]).unwrap()
}

fn pointwise_residual(op: &AffineCso, f: &SingularFunction, z: Complex) -> f64 {
    let tf = op.eval_with(z, |w| f.eval(w)).unwrap();
    branch_distance(tf, f.eval(z).unwrap())
}

#[test]
fn neumann_small_cases() {
    let op = AffineCso::new(vec![(c(0.5, 0.0), crate::affine::AffineMap::constant(ZERO).unwrap())]).unwrap();
    let g = DiscSeries::constant(ONE, 1.0).unwrap();
    let h = neumann_inverse(&op, &g, 1.0, 1e-12, 1000).unwrap();
    assert!((h.coeff(0) - c(2.0, 0.0)).norm() < 1e-11);

    let m = pinned(&golden_m(), c(omega(), 0.0)).unwrap();
    let zero = DiscSeries::zero(2.0).unwrap();
    assert_eq!(neumann_inverse(&m, &zero, 2.0, 1e-10, 10).unwrap().l1_norm(), 0.0);

    let g = DiscSeries::new(vec![c(0.3, 0.2), c(-0.1, 0.4), c(0.05, -0.02)], 2.0).unwrap();
    let h = neumann_inverse(&m, &g, 2.0, 1e-10, 10_000).unwrap();
    let back = h.sub(&m.apply_series(&h, 2.0).unwrap()).unwrap().sub(&g).unwrap();
    assert!(back.poly_norm() < 1e-10);
}

#[test]
fn neumann_rejects_non_contraction() {
    let g = DiscSeries::constant(ONE, 2.0).unwrap();
    assert!(matches!(neumann_inverse(&golden_m(), &g, 2.0, 1e-8, 100), Err(Error::NotAContraction { .. })));
}

#[test]
fn pole_seed_direct_route() {
    let op = pole_operator();
    let seed = SeedSpec::new(&op, SingularTerm::pole(ZERO, 1, ONE).unwrap()).unwrap();
    assert_eq!(seed.matched_index(), 0);
    let result = seeded_fixed_point(&op, &seed, 4.0, 1e-10).unwrap();
    assert_eq!(result.route, Route::Direct);
    assert!(result.residual_norm < 1e-10);
    assert_eq!(result.fixed_point.terms(), &[*seed.term()]);
    for z in [c(0.5, 0.5), c(-2.0, 1.0), c(3.5, -0.3), c(0.1, 0.0)] {
        assert!(pointwise_residual(&op, &result.fixed_point, z) < 1e-9);
    }
}

#[test]
fn already_fixed_seed_is_returned() {
    let m = golden_m();
    let f = SingularFunction::new(
        vec![SingularTerm::log(ZERO, ONE).unwrap(), SingularTerm::log(ONE, -ONE).unwrap()],
        DiscSeries::zero(1.5).unwrap(),
    )
    .unwrap();
    let (fixed, record) = fixed_point_operator(&m, &f, 1e-10, 100).unwrap();
    assert!(record.is_none());
    assert!(fixed.regular().l1_norm() == 0.0);
    assert_eq!(fixed.terms(), f.terms());
}

#[test]
fn zero_seed_gives_zero() {
    let op = pole_operator();
    let seed = SeedSpec::new(&op, SingularTerm::pole(ZERO, 1, ZERO).unwrap()).unwrap();
    let result = seeded_fixed_point(&op, &seed, 4.0, 1e-10).unwrap();
    assert!(result.fixed_point.is_regular());
    assert_eq!(result.fixed_point.regular().l1_norm(), 0.0);
}

#[test]
fn inadmissible_seed() {
    let m = golden_m();
    let err = SeedSpec::new(&m, SingularTerm::pole(ZERO, 1, ONE).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Inadmissible(ref msg) if msg.contains("a = s^1")));
}

#[test]
fn generalized_route_on_pinned_golden() {
    let m = golden_m();
    let w = omega();
    let mc = pinned(&m, c(w, 0.0)).unwrap();
    let seed = SeedSpec::new(&mc, SingularTerm::log(ONE, ONE).unwrap()).unwrap();
    let direct = seeded_fixed_point(&mc, &seed, 2.0, 1e-8);
    assert!(matches!(direct, Err(Error::RemainderNotRegular { .. })));

    let r1 = generalized_seed_fixed_point(&mc, &seed, 2.0, 1e-8, 8).unwrap();
    assert_eq!(r1.route, Route::GeneralizedSeed(1));
    assert!(r1.residual_norm < 1e-8);
    let f = &r1.fixed_point;
    assert!(branch_distance(f.eval(c(w, 0.0)).unwrap(), ZERO) < 1e-8);
    for z in [c(0.3, 0.4), c(-0.5, -0.2), c(1.2, 0.9)] {
        assert!(pointwise_residual(&m, f, z) < 1e-8);
    }

    let r2 = generalized_seed_fixed_point_at(&mc, &seed, 2.0, 1e-8, 2).unwrap();
    for z in [c(0.3, 0.4), c(-0.5, -0.2), c(1.2, 0.9)] {
        assert!(branch_distance(r1.fixed_point.eval(z).unwrap(), r2.fixed_point.eval(z).unwrap()) < 1e-8);
    }
}

#[test]
fn derivative_route_on_golden() {
    let m = golden_m();
    let r = derivative_route_fixed_point(&m, 0, 3, 1.5, 1e-10).unwrap();
    assert_eq!(r.route, Route::DerivativeRoute(3));
    assert!(r.residual_norm < 1e-10);
    assert_eq!(r.fixed_point.terms().len(), 1);
    for z in [c(0.3, 0.4), c(-0.5, -0.2), c(1.2, 0.3)] {
        assert!(pointwise_residual(&m, &r.fixed_point, z) < 1e-9);
    }
    // Fixed by M and vanishing at -ω, like the pinned construction.
    let w = omega();
    assert!(branch_distance(r.fixed_point.eval(c(-w, 0.0)).unwrap(), ZERO) < 1e-8);
}

#[test]
fn derivative_route_guards() {
    let m = golden_m();
    assert!(matches!(derivative_route_fixed_point(&m, 0, 3, 0.9, 1e-8), Err(Error::NotAContraction { .. })));
    assert!(matches!(derivative_route_fixed_point(&m, 0, 3, 1.9, 1e-8), Err(Error::NotIndependent { .. })));
    assert!(derivative_route_fixed_point(&m, 0, 0, 1.5, 1e-8).is_err());
}

#[test]
fn routes_agree_up_to_scaling() {
    let m = golden_m();
    let registry = RouteRegistry::with_builtin();
    assert_eq!(registry.names(), vec!["derivative", "direct", "generalized"]);
    let mut problem = FixedPointProblem::new(m.clone(), SingularTerm::log(ONE, ONE).unwrap(), 1.5, 1e-9);
    problem.order = Some(3);
    let a = registry.get("derivative").unwrap().construct(&problem).unwrap();
    problem.radius = 2.0;
    let b = registry.get("generalized").unwrap().construct(&problem).unwrap();
    assert!(b.parent_residual_norm.unwrap() < 1e-8);
    for z in [c(0.3, 0.4), c(-0.5, -0.2), c(0.8, -0.9)] {
        assert!(branch_distance(a.fixed_point.eval(z).unwrap(), b.fixed_point.eval(z).unwrap()) < 1e-8);
    }
}
