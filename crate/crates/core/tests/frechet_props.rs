mod common;

use common::{fd_relative_steps, instance, log_log_slope, random_dim, rel};
use proptest::prelude::*;
use sqrtx::oracles::{finite_difference, scalar_closed_form};
use sqrtx::random::random_symmetric;
use sqrtx::{
    assert_spd, derivative_norm_bound, derivative_stack, frechet_first,
    frechet_second_bidirectional, principal_sqrt, scaled_term_bound, sylvester_residual,
    NormKind, SymMatrix,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sylvester_residual_is_tiny(seed in any::<u64>(), r in 1usize..=20) {
        let mut rng = common::rng(seed);
        let (a, _) = instance(&mut rng, r, 0.0);
        let h = random_symmetric(&mut rng, r);
        let x = frechet_first(&a, &h).unwrap();
        let s = principal_sqrt(&a);
        prop_assert!(sylvester_residual(s.as_sym(), &x, &h) <= 1e-10 * h.frobenius());
    }

    #[test]
    fn polarization_is_bilinear(seed in any::<u64>(), r in 1usize..=6, alpha in -3.0f64..3.0) {
        let mut rng = common::rng(seed);
        let (a, _) = instance(&mut rng, r, 0.0);
        let h1 = random_symmetric(&mut rng, r);
        let h2 = random_symmetric(&mut rng, r);
        let g = random_symmetric(&mut rng, r);
        let f = |x: &SymMatrix, y: &SymMatrix| frechet_second_bidirectional(&a, x, y).unwrap();

        let lhs = f(&(&h1 + &g), &h2);
        let rhs = f(&h1, &h2) + f(&g, &h2);
        prop_assert!((&lhs - &rhs).frobenius() <= 1e-10 * rhs.frobenius().max(lhs.frobenius()).max(1e-300));

        let scaled = f(&h1, &h2.scale(alpha));
        let expected = f(&h1, &h2).scale(alpha);
        prop_assert!((&scaled - &expected).frobenius() <= 1e-10 * expected.frobenius().max(1e-300) + 1e-300);
    }
}

#[test]
fn stack_terms_are_symmetric_and_bounded() {
    let mut rng = common::rng(21);
    for _ in 0..200 {
        let r = random_dim(&mut rng, 10);
        let (a, h) = instance(&mut rng, r, 0.5);
        let stack = derivative_stack(&a, &h, 6).unwrap();
        assert!(stack.first_order_residual() <= 1e-10);
        for kind in [NormKind::Spectral, NormKind::Frobenius] {
            let k_const = kind.constant(r);
            let nh = h.norm(kind);
            for n in 1..=6 {
                let term = stack.scaled(n);
                assert!((0..r).all(|i| (0..r).all(|j| term.get(i, j) == term.get(j, i))));
                let bound = derivative_norm_bound(n - 1, a.lambda_min(), k_const) * nh.powi(n as i32);
                let actual = stack.derivative(n).norm(kind);
                assert!(actual <= bound * (1.0 + 1e-8), "n={n} {kind}: {actual} > {bound}");
                let scaled = scaled_term_bound(n, a.lambda_min(), k_const, nh);
                assert!(term.norm(kind) <= scaled * (1.0 + 1e-8));
            }
        }
    }
}

#[test]
fn scalar_case_saturates_the_bound() {
    let mut rng = common::rng(22);
    for _ in 0..50 {
        let a = sqrtx::random::log_uniform(&mut rng, 0.01, 100.0);
        let h = sqrtx::random::log_uniform(&mut rng, 0.01, 10.0) * if rand::Rng::random::<bool>(&mut rng) { 1.0 } else { -1.0 };
        let stack = derivative_stack(
            &assert_spd(&SymMatrix::scalar(a)).unwrap(),
            &SymMatrix::scalar(h),
            7,
        )
        .unwrap();
        for n in 0..=6 {
            let actual = stack.derivative(n + 1).get(0, 0).abs() / h.abs().powi(n as i32 + 1);
            let bound = derivative_norm_bound(n, a, 1.0);
            assert!((actual - bound).abs() <= 1e-12 * bound, "n={n}: {actual} vs {bound}");
            let closed = scalar_closed_form(a, h, n + 1);
            let s = stack.scaled(n + 1).get(0, 0);
            assert!((s - closed).abs() <= 1e-12 * closed.abs());
        }
    }
}

#[test]
fn commuting_directions_reduce_to_scalars() {
    let mut rng = common::rng(23);
    for _ in 0..20 {
        let r = random_dim(&mut rng, 6);
        let diag_a: Vec<f64> = (0..r).map(|_| sqrtx::random::log_uniform(&mut rng, 0.1, 10.0)).collect();
        let diag_h: Vec<f64> = diag_a
            .iter()
            .map(|a| a * rand::Rng::random_range(&mut rng, -0.5..0.5))
            .collect();
        let a = assert_spd(&SymMatrix::from_diagonal(&diag_a)).unwrap();
        let h = SymMatrix::from_diagonal(&diag_h);
        let stack = derivative_stack(&a, &h, 6).unwrap();
        for k in 1..=6 {
            let term = stack.scaled(k);
            assert!(term.is_diagonal(), "k={k}");
            for i in 0..r {
                let want = scalar_closed_form(diag_a[i], diag_h[i], k);
                assert!((term.get(i, i) - want).abs() <= 1e-12 * want.abs().max(1e-300));
            }
        }
    }
}

#[test]
fn finite_differences_converge_quadratically() {
    let mut rng = common::rng(24);
    for _ in 0..10 {
        let r = random_dim(&mut rng, 6);
        let (a, h) = instance(&mut rng, r, 1.0);
        let stack = derivative_stack(&a, &h, 3).unwrap();
        let scale = a.lambda_min() / h.spectral();
        for k in 1..=3 {
            let exact = stack.derivative(k);
            let steps: Vec<f64> = fd_relative_steps().iter().map(|d| d * scale).collect();
            let errors: Vec<f64> = steps
                .iter()
                .map(|eps| rel(&finite_difference(&a, &h, k, *eps).unwrap(), &exact))
                .collect();
            let slope = log_log_slope(&steps, &errors);
            assert!((1.7..=2.3).contains(&slope), "k={k} slope={slope} errors={errors:?}");
        }
    }
}

#[test]
fn second_derivative_matches_explicit_formula() {
    let mut rng = common::rng(25);
    for _ in 0..20 {
        let r = random_dim(&mut rng, 8);
        let (a, h) = instance(&mut rng, r, 0.5);
        let first = frechet_first(&a, &h).unwrap();
        let explicit = frechet_first(&a, &first.square()).unwrap().scale(-2.0);
        let stack = derivative_stack(&a, &h, 2).unwrap();
        assert!((&stack.derivative(2) - &explicit).frobenius() <= 1e-12 * explicit.frobenius().max(1.0));
    }
}
