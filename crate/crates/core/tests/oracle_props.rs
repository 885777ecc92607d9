mod common;

use common::{instance, random_dim, rel};
use rand::Rng;
use sqrtx::oracles::{
    lyapunov_quadrature, remainder_integral, resolvent_frechet, resolvent_sqrt,
    scalar_closed_form,
};
use sqrtx::{
    assert_spd, derivative_stack, frechet_first, principal_sqrt, taylor_sum, QuadratureSpec,
    SymMatrix,
};

#[test]
fn three_first_derivatives_agree() {
    let mut rng = common::rng(41);
    for _ in 0..20 {
        let r = random_dim(&mut rng, 8);
        let (a, h) = instance(&mut rng, r, 1.0);
        let sylvester = frechet_first(&a, &h).unwrap();
        let lyapunov = lyapunov_quadrature(&a, &h, QuadratureSpec::LYAPUNOV).unwrap();
        let resolvent = resolvent_frechet(&a, &h, QuadratureSpec::RESOLVENT).unwrap();
        assert!(rel(&lyapunov, &sylvester) <= 1e-6);
        assert!(rel(&resolvent, &sylvester) <= 1e-6);
        assert!(rel(&lyapunov, &resolvent) <= 1e-6);
    }
}

#[test]
fn resolvent_root_matches_eigen_root() {
    let mut rng = common::rng(42);
    for _ in 0..20 {
        let r = random_dim(&mut rng, 8);
        let (a, _) = instance(&mut rng, r, 0.0);
        let root = resolvent_sqrt(&a, QuadratureSpec::RESOLVENT).unwrap();
        assert!(rel(&root, principal_sqrt(&a).as_sym()) <= 1e-6);
    }
}

#[test]
fn remainder_integral_closes_the_expansion() {
    let mut rng = common::rng(43);
    for _ in 0..20 {
        let r = random_dim(&mut rng, 6);
        let rho = rng.random_range(0.05..0.6);
        let (a, h) = instance(&mut rng, r, rho);
        let b = assert_spd(&(a.as_sym() + &h)).unwrap();
        let truth = principal_sqrt(&b).into_sym();
        for n in 0..=4 {
            let rem = remainder_integral(&a, &h, n, QuadratureSpec::REMAINDER).unwrap();
            let sum = taylor_sum(&a, &h, n).unwrap() + rem;
            assert!(rel(&sum, &truth) <= 1e-8, "n={n}: {}", rel(&sum, &truth));
        }
    }
}

#[test]
fn scalar_stack_matches_binomial_series() {
    let mut rng = common::rng(44);
    for _ in 0..50 {
        let a: f64 = rng.random_range(0.05..20.0);
        let h: f64 = rng.random_range(-5.0..5.0);
        let stack = derivative_stack(
            &assert_spd(&SymMatrix::scalar(a)).unwrap(),
            &SymMatrix::scalar(h),
            12,
        )
        .unwrap();
        for k in 1..=12 {
            let want = scalar_closed_form(a, h, k);
            let got = stack.scaled(k).get(0, 0);
            assert!((got - want).abs() <= 1e-12 * want.abs(), "k={k}: {got} vs {want}");
        }
    }
}

#[test]
fn refinement_reduces_quadrature_error() {
    let mut rng = common::rng(45);
    for _ in 0..5 {
        let r = random_dim(&mut rng, 6);
        let (a, h) = instance(&mut rng, r, 1.0);
        let exact = frechet_first(&a, &h).unwrap();
        let floor = 1e-10;
        for (base, route) in [
            (QuadratureSpec::new(4, 8).unwrap(), 0),
            (QuadratureSpec::new(8, 8).unwrap(), 1),
        ] {
            let mut previous = f64::INFINITY;
            for level in 0..4 {
                let spec = base.with_panels(base.panels << level).unwrap();
                let approx = if route == 0 {
                    lyapunov_quadrature(&a, &h, spec).unwrap()
                } else {
                    resolvent_frechet(&a, &h, spec).unwrap()
                };
                let err = rel(&approx, &exact);
                assert!(err <= previous || err <= floor, "route {route} level {level}: {err} > {previous}");
                previous = err;
            }
        }
    }
}
