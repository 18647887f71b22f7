mod common;

use approx::assert_abs_diff_eq;
use common::*;
use metaunravel::numkernel::*;
use metaunravel::{Matrix, Vector, C64};
use proptest::prelude::*;

#[test]
fn eigenvalues_agree_with_independent_schur() {
    let mut r = rng(1);
    for n in [1, 2, 3, 5, 9, 16] {
        let a = random_matrix(&mut r, n);
        let ours = eigenvalues(&a).unwrap();
        let theirs = reference_eigenvalues(&a);
        assert!(spectrum_distance(&ours, &theirs) < 1e-10, "n={n}");
    }
}

#[test]
fn eigenvalues_are_sorted_by_real_part_descending() {
    let a = random_matrix(&mut rng(2), 12);
    let vals = eig_general(&a).unwrap().values;
    assert!(vals.windows(2).all(|w| w[0].re >= w[1].re - 1e-12));
}

#[test]
fn prescribed_spectrum_is_recovered() {
    let mut r = rng(3);
    let spectrum: Vec<C64> = (0..6).map(|k| C64::new(-(k as f64), 0.3 * k as f64)).collect();
    let v = random_matrix(&mut r, 6);
    let a = v.matmul(&Matrix::diagonal(&spectrum)).matmul(&inverse(&v).unwrap());
    let eig = eig_general(&a).unwrap();
    assert!(spectrum_distance(&eig.values, &spectrum) < 1e-10);
    assert!(eig.biorthonormality_error() < 1e-10);
    assert!((&eig.reconstruct() - &a).max_abs() < 1e-10 * a.max_abs());
}

#[test]
fn jordan_block_is_reported_defective() {
    let a = Matrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
    match eig_general(&a) {
        Err(KernelError::DefectiveMatrix { eigenvalues, .. }) => {
            assert_eq!(eigenvalues.len(), 2);
            assert!(eigenvalues.iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-8));
        }
        other => panic!("expected a defective matrix, got {other:?}"),
    }
}

#[test]
fn non_square_and_non_finite_inputs_are_rejected() {
    let a = Matrix::zeros(2, 3);
    assert!(matches!(eig_general(&a), Err(KernelError::NotSquare { .. })));
    let mut b = Matrix::identity(2);
    b[(0, 1)] = C64::new(f64::NAN, 0.0);
    assert!(matches!(eig_general(&b), Err(KernelError::NonFinite)));
}

#[test]
fn hermitian_eigenvalues_match_nalgebra() {
    let a = random_matrix(&mut rng(4), 7);
    let h = a.hermitian_part();
    let ours = hermitian_eigenvalues(&h).unwrap();
    let mut theirs: Vec<f64> = to_na(&h).symmetric_eigenvalues().iter().cloned().collect();
    theirs.sort_by(f64::total_cmp);
    for (x, y) in ours.iter().zip(&theirs) {
        assert_abs_diff_eq!(x, y, epsilon = 1e-11);
    }
}

#[test]
fn propagator_matches_pade_exponential() {
    let a = random_matrix(&mut rng(5), 6).scale_real(0.7);
    let p = Propagator::new(&a).unwrap();
    for t in [0.0, 0.1, 1.0, 3.0] {
        let diff = &p.matrix(t) - &reference_expm(&a, t);
        assert!(diff.max_abs() < 1e-9, "t={t}: {}", diff.max_abs());
    }
}

#[test]
fn sylvester_solution_satisfies_the_equation() {
    let mut r = rng(6);
    let a = &random_matrix(&mut r, 4) + &Matrix::identity(4).scale_real(3.0);
    let b = &random_matrix(&mut r, 3) + &Matrix::identity(3).scale_real(3.0);
    let c = Matrix::from_fn(4, 3, |i, j| C64::new(i as f64 - j as f64, 1.0));
    let x = solve_sylvester(&a, &b, &c).unwrap();
    let residual = &(&a.matmul(&x) + &x.matmul(&b)) - &c;
    assert!(residual.max_abs() < 1e-11);
}

#[test]
fn singular_sylvester_pencil_is_detected() {
    let a = Matrix::diagonal(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
    let b = Matrix::diagonal(&[C64::new(-2.0, 0.0)]);
    let c = Matrix::zeros(2, 1);
    assert!(matches!(solve_sylvester(&a, &b, &c), Err(KernelError::SingularPencil { .. })));
}

#[test]
fn lyapunov_integral_matches_quadrature() {
    // X = int_0^inf e^{G t} C e^{G^dag t} dt solves G X + X G^dag = -C
    let g = Matrix::from_real_rows(&[vec![-1.0, 0.5], vec![-0.3, -2.0]]);
    let c = Vector::from_real(&[1.0, 0.5]).outer(&Vector::from_real(&[1.0, 0.5]));
    let x = solve_sylvester(&g, &g.adjoint(), &c.scale_real(-1.0)).unwrap();
    let p = Propagator::new(&g).unwrap();
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let q = integrate_to_infinity(
            |t| {
                let e = p.matrix(t);
                e.matmul(&c).matmul(&e.adjoint())[(i, j)].re
            },
            0.0,
            0.5,
            200.0,
            1e-13,
            |t| 10.0 * (-2.0 * 0.9 * t).exp(),
        )
        .unwrap();
        assert_abs_diff_eq!(q.value, x[(i, j)].re, epsilon = 1e-9);
    }
}

#[test]
fn quadrature_and_bisection_on_closed_forms() {
    let q = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-13).unwrap();
    assert_abs_diff_eq!(q.value, 2.0, epsilon = 1e-12);
    let q = integrate_to_infinity(|t| (-t).exp(), 0.0, 1.0, 1e3, 1e-13, |t| (-t).exp()).unwrap();
    assert_abs_diff_eq!(q.value, 1.0, epsilon = 1e-11);
    let root = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
    assert_abs_diff_eq!(root, 2f64.sqrt(), epsilon = 1e-12);
    assert!(matches!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-12), Err(KernelError::RootNotBracketed { .. })));
}

#[test]
fn trace_distance_of_pure_states() {
    let a = Vector::from_real(&[1.0, 0.0]);
    let b = Vector::from_real(&[1.0, 1.0]).normalized().unwrap();
    let expected = (0.5f64).sqrt();
    assert_abs_diff_eq!(pure_trace_distance(&a, &b), expected, epsilon = 1e-14);
    assert_abs_diff_eq!(trace_distance(&a.projector(), &b.projector()).unwrap(), expected, epsilon = 1e-12);
}

#[test]
fn kernel_runs_in_single_precision() {
    let a = CMatrix::<f32>::from_real_rows(&[vec![2.0, 1.0], vec![0.0, -1.0]]);
    let vals = eig_general(&a).unwrap().values;
    assert!((vals[0].re - 2.0).abs() < 1e-5 && (vals[1].re + 1.0).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reconstruction_holds_for_random_matrices(seed in 0u64..10_000, n in 1usize..10) {
        let a = random_matrix(&mut rng(seed), n);
        let eig = eig_general(&a).unwrap();
        prop_assert!((&eig.reconstruct() - &a).max_abs() < 1e-9);
        prop_assert!(eig.biorthonormality_error() < 1e-9);
        prop_assert!(eig.max_residual(&a) < 1e-10);
    }

    #[test]
    fn lu_solve_inverts(seed in 0u64..10_000, n in 1usize..8) {
        let mut r = rng(seed);
        let a = &random_matrix(&mut r, n) + &Matrix::identity(n).scale_real(2.0);
        let x = random_state(&mut r, n);
        let b = a.matvec(&x);
        let y = solve_linear(&a, &b).unwrap();
        prop_assert!(y.sub(&x).max_abs() < 1e-10);
    }
}
