mod common;

use approx::assert_abs_diff_eq;
use common::*;
use metaunravel::models::*;
use metaunravel::qme::*;
use metaunravel::{Error, Matrix, Model, Vector, C64};
use proptest::prelude::*;

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    &a.matmul(b) - &b.matmul(a)
}

/// Right-hand side of the master equation written out term by term.
fn lindblad_rhs(model: &Model, rho: &Matrix) -> Matrix {
    let minus_i = C64::new(0.0, -1.0);
    let mut out = commutator(model.hamiltonian(), rho).scale(minus_i);
    for j in model.jumps() {
        let jd = j.adjoint();
        let jj = jd.matmul(j);
        out += &j.matmul(rho).matmul(&jd);
        out += &(&jj.matmul(rho) + &rho.matmul(&jj)).scale_real(-0.5);
    }
    out
}

fn random_model(seed: u64, n: usize, jumps: usize) -> Model {
    let mut r = rng(seed);
    let h = random_matrix(&mut r, n).hermitian_part();
    let js = (0..jumps).map(|_| random_matrix(&mut r, n)).collect();
    Model::new(h, js, "random").unwrap()
}

#[test]
fn liouvillian_acts_as_the_master_equation() {
    let model = random_model(1, 4, 2);
    let l = build_liouvillian(&model);
    let rho = random_density(&mut rng(2), 4);
    let via_l = Matrix::devectorize(&l.matvec(&rho.vectorize()), 4);
    let direct = lindblad_rhs(&model, &rho);
    assert!((&via_l - &direct).max_abs() < 1e-12);
    assert!((&apply_lindblad(&model, &rho) - &direct).max_abs() < 1e-12);
}

#[test]
fn amplitude_damping_spectrum_is_analytic() {
    let gamma: f64 = 0.7;
    let sm = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).scale_real(gamma.sqrt());
    let model = Model::new(Matrix::zeros(2, 2), vec![sm], "decay").unwrap();
    let sp = spectral_decompose(&model).unwrap();
    let expected = [0.0, -gamma / 2.0, -gamma / 2.0, -gamma];
    for (z, e) in sp.values.iter().zip(expected) {
        assert_abs_diff_eq!(z.re, e, epsilon = 1e-12);
        assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(sp.steady_state()[(0, 0)].re, 1.0, epsilon = 1e-12);
}

#[test]
fn driven_two_level_steady_state_matches_closed_form() {
    // H = (Omega/2) sigma_x, J = sqrt(gamma) sigma_-:
    // rho_ee = (Omega^2/4) / (Omega^2/2 + gamma^2/4)
    let (omega, gamma): (f64, f64) = (1.3, 0.8);
    let h = Matrix::from_real_rows(&[vec![0.0, omega / 2.0], vec![omega / 2.0, 0.0]]);
    let j = Matrix::from_real_rows(&[vec![0.0, 0.0], vec![gamma.sqrt(), 0.0]]);
    let model = Model::new(h, vec![j], "rabi").unwrap();
    let sp = spectral_decompose(&model).unwrap();
    let ee = omega * omega / 4.0 / (omega * omega / 2.0 + gamma * gamma / 4.0);
    assert_abs_diff_eq!(sp.steady_state()[(0, 0)].re, ee, epsilon = 1e-12);
    assert!(sp.steady_state().is_hermitian(1e-12));
}

#[test]
fn spectral_data_is_biorthonormal_with_identity_left_mode() {
    let model = three_state_1j(1.0, 0.05, 4.0);
    let sp = spectral_decompose(&model).unwrap();
    for i in 0..sp.len() {
        for j in 0..sp.len() {
            let ip = sp.left[i].matmul(&sp.right[j]).trace();
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((ip - C64::new(expected, 0.0)).norm() < 1e-8, "({i},{j}) -> {ip}");
        }
    }
    assert!((&sp.left[0] - &Matrix::identity(3)).max_abs() < 1e-10);
    assert_abs_diff_eq!(sp.steady_state().trace().re, 1.0, epsilon = 1e-12);
}

#[test]
fn evolution_matches_dense_exponential() {
    let model = random_model(3, 3, 2);
    let l = build_liouvillian(&model);
    let rho0 = random_density(&mut rng(4), 3);
    let times = [0.0, 0.3, 2.0];
    let evolved = evolve_qme(&model, &rho0, &times).unwrap();
    for (t, rho) in times.iter().zip(&evolved) {
        let exact = Matrix::devectorize(&reference_expm(&l, *t).matvec(&rho0.vectorize()), 3);
        assert!((rho - &exact).max_abs() < 1e-10, "t={t}");
    }
}

#[test]
fn invalid_initial_states_are_rejected() {
    let model = three_state_1j(1.0, 0.05, 4.0);
    let not_unit_trace = Matrix::identity(3);
    assert!(evolve_qme(&model, &not_unit_trace, &[1.0]).is_err());
    let mut not_hermitian = Vector::basis(3, 0).projector();
    not_hermitian[(0, 1)] = C64::new(0.3, 0.0);
    assert!(evolve_qme(&model, &not_hermitian, &[1.0]).is_err());
}

#[test]
fn model_validation() {
    let h = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
    assert!(matches!(Model::new(h, vec![], "bad"), Err(Error::NotHermitian { .. })));
    let res = Model::new(Matrix::zeros(2, 2), vec![Matrix::zeros(3, 3)], "bad");
    assert!(matches!(res, Err(Error::DimensionMismatch { .. })));
}

#[test]
fn model_json_round_trip_is_lossless() {
    let model = two_qubit_dfs(4.0, 1.0, 0.02, 0.01, 0.3);
    let back = Model::from_json(&model.to_json().unwrap()).unwrap();
    assert_eq!(back.hamiltonian(), model.hamiltonian());
    assert_eq!(back.jumps(), model.jumps());
}

#[test]
fn three_state_two_phase_structure() {
    let model = three_state_1j(1.0, 0.05, 4.0);
    let sp = spectral_decompose(&model).unwrap();
    let meta = metastable_analysis(&model, &sp, None).unwrap();
    assert_eq!(meta.m, 2);
    assert_abs_diff_eq!(meta.tau_s, 1.0 / sp.values[1].re.abs(), epsilon = 1e-9);
    let ph = meta.two_phase().unwrap();
    assert!((&(&ph.p_a + &ph.p_b) - &Matrix::identity(3)).max_abs() < 1e-12);
    assert_abs_diff_eq!(ph.p_a.hs_inner(&ph.rho_a).re, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(ph.p_a.hs_inner(&ph.rho_b).re, 0.0, epsilon = 1e-9);
    // bright phase has the larger photon emission rate
    assert!(model.activity(&ph.rho_a) > model.activity(&ph.rho_b));
    // the dark extremal state is close to |2><2|
    assert!(ph.rho_b[(2, 2)].re > 0.99);
    // the steady state lies between the extremal states
    let p = ph.p_a.hs_inner(sp.steady_state()).re;
    assert!((0.0..=1.0).contains(&p));
    let mixed = &ph.rho_a.scale_real(p) + &ph.rho_b.scale_real(1.0 - p);
    assert!((&mixed - sp.steady_state()).max_abs() < 1e-9);
}

#[test]
fn committor_operator_approaches_subspace_projector() {
    // as Omega2 -> 0 the dark committor operator tends to |2><2|
    let mut prev = f64::INFINITY;
    for omega2 in [1e-1, 1e-2, 1e-3] {
        let model = three_state_1j(1.0, omega2, 4.0);
        let sp = spectral_decompose(&model).unwrap();
        let meta = metastable_analysis(&model, &sp, None).unwrap();
        let dev = (&meta.two_phase().unwrap().p_b - &Vector::basis(3, 2).projector()).max_abs();
        assert!(dev < prev);
        prev = dev;
    }
    assert!(prev < 1e-2);
}

#[test]
fn committor_qme_is_complementary() {
    let model = three_state_1j(1.0, 0.05, 4.0);
    let sp = spectral_decompose(&model).unwrap();
    let meta = metastable_analysis(&model, &sp, None).unwrap();
    let mut r = rng(5);
    for _ in 0..10 {
        let psi = random_state(&mut r, 3);
        let (a, b) = committor_qme(&meta, &psi).unwrap();
        assert_abs_diff_eq!(a + b, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn gapless_spectrum_is_reported() {
    let model = random_model(6, 3, 3);
    let sp = spectral_decompose(&model).unwrap();
    assert!(matches!(metastable_analysis(&model, &sp, None), Err(Error::NoGap { .. })));
}

#[test]
fn dfs_model_has_four_slow_modes_and_no_phase_pair() {
    let model = two_qubit_dfs(4.0, 1.0, 0.02, 0.01, 0.0);
    let sp = spectral_decompose(&model).unwrap();
    let meta = metastable_analysis(&model, &sp, None).unwrap();
    assert_eq!(meta.m, 4);
    assert!(matches!(meta.phases, PhaseStructure::NotClassical));
}

#[test]
fn dfs_coordinates_of_a_superposition() {
    let (b1, b2) = (Vector::basis(4, UD), Vector::basis(4, DU));
    let psi = b1.axpy(C64::new(0.0, 1.0), &b2).scale_real(0.5f64.sqrt());
    let c = dfs_coordinates(&psi.projector(), &b1, &b2).unwrap();
    assert_abs_diff_eq!(c.p1, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(c.z.norm(), 0.5, epsilon = 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evolution_preserves_trace_and_hermiticity(seed in 0u64..5000, t in 0.0f64..20.0) {
        let model = random_model(seed, 3, 2);
        let rho0 = random_density(&mut rng(seed + 1), 3);
        let rho = &evolve_qme(&model, &rho0, &[t]).unwrap()[0];
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(rho.is_hermitian(1e-9));
    }

    #[test]
    fn evolution_is_a_semigroup(seed in 0u64..5000, t in 0.0f64..5.0, s in 0.0f64..5.0) {
        let model = random_model(seed, 3, 1);
        let rho0 = random_density(&mut rng(seed + 2), 3);
        let sp = spectral_decompose(&model).unwrap();
        let direct = &sp.evolve(&rho0, &[t + s])[0];
        let mid = &sp.evolve(&rho0, &[t])[0];
        let two_step = &sp.evolve(mid, &[s])[0];
        prop_assert!((direct - two_step).max_abs() < 1e-9);
    }

    #[test]
    fn spectral_reconstruction_of_the_liouvillian(seed in 0u64..5000) {
        let model = random_model(seed, 3, 2);
        let sp = spectral_decompose(&model).unwrap();
        prop_assert!(sp.eigensystem().max_residual(&build_liouvillian(&model)) < 1e-9);
        prop_assert!(sp.values.iter().all(|z| z.re <= 1e-10));
    }
}
