mod common;

use approx::assert_abs_diff_eq;
use common::*;
use metaunravel::models::*;
use metaunravel::unravel::*;
use metaunravel::{Matrix, Model, Vector, C64};

fn generator_matrix(model: &Model) -> Matrix {
    let mut g = model.hamiltonian().scale(C64::new(0.0, -1.0));
    g += &model.jump_sum().scale_real(-0.5);
    g
}

#[test]
fn survival_matches_the_dense_exponential() {
    let model = three_state_2j(1.0, 0.05, 4.0, 1.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    assert!((gen.matrix() - &generator_matrix(&model)).max_abs() < 1e-15);
    let psi = random_state(&mut rng(1), 3);
    let surv = gen.survival(&psi);
    for t in [0.0, 0.5, 3.0, 40.0] {
        let exact = reference_expm(gen.matrix(), t).matvec(&psi).norm_sqr();
        assert_abs_diff_eq!(surv.eval(t), exact, epsilon = 1e-11);
    }
}

#[test]
fn jump_rates_sum_to_minus_the_survival_derivative() {
    let model = two_qubit_dfs(4.0, 1.0, 0.3, 0.2, 0.1);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let psi = random_state(&mut rng(2), 4);
    let surv = gen.survival(&psi);
    let (t, h) = (0.7, 1e-5);
    let derivative = (surv.eval(t + h) - surv.eval(t - h)) / (2.0 * h);
    let rates: f64 = gen.jump_rates(&surv.state(t).unwrap()).iter().sum();
    assert_abs_diff_eq!(-derivative / surv.eval(t), rates, epsilon = 1e-7);
}

#[test]
fn waiting_times_follow_the_survival_law() {
    // the first jump time from |0> has CDF 1 - S(t); compare against the
    // dense exponential with a Kolmogorov–Smirnov test
    let model = three_state_1j(1.0, 0.3, 4.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let psi0 = Vector::basis(3, 0);
    let surv = gen.survival(&psi0);
    let tol = Default::default();
    let mut times = Vec::new();
    for stream in 0..3000 {
        let mut r = trajectory_rng(99, stream);
        if let JumpTime::At(t) = sample_jump_time(&gen, &surv, 1e6, &mut r, &tol).unwrap() {
            times.push(t);
        }
    }
    let g = gen.matrix().clone();
    let d = ks_statistic(&mut times, |t| 1.0 - reference_expm(&g, t).matvec(&psi0).norm_sqr());
    let p = ks_pvalue(d, times.len());
    assert!(p > 0.01, "KS p-value {p}");
}

#[test]
fn dark_state_never_jumps() {
    // with Omega2 = 0, |2> is an exact dark state of the single-jump model
    let model = three_state_1j(1.0, 0.0, 3.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let rec = simulate_trajectory(&gen, &Vector::basis(3, 2), 50.0, 1.0, 5, 0).unwrap();
    assert!(rec.jump_times.is_empty());
    assert!((rec.final_state[2].norm() - 1.0).abs() < 1e-12);
}

#[test]
fn exceptional_point_is_reported() {
    // kappa1 = 4 Omega1 makes G defective once Omega2 = 0
    let model = three_state_1j(1.0, 0.0, 4.0);
    assert!(matches!(
        EffectiveGenerator::new(&model),
        Err(metaunravel::Error::Kernel(metaunravel::numkernel::KernelError::DefectiveMatrix { .. }))
    ));
}

#[test]
fn records_are_reproducible_and_streams_independent() {
    let model = three_state_1j(1.0, 0.05, 4.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let psi0 = Vector::basis(3, 0);
    let a = simulate_trajectory(&gen, &psi0, 30.0, 0.1, 42, 3).unwrap();
    let b = simulate_trajectory(&gen, &psi0, 30.0, 0.1, 42, 3).unwrap();
    let c = simulate_trajectory(&gen, &psi0, 30.0, 0.1, 42, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.jump_times, c.jump_times);
    let ens = simulate_ensemble(&gen, &psi0, 30.0, 0.1, 8, 42).unwrap();
    assert_eq!(ens[3], a);
}

#[test]
fn record_is_internally_consistent() {
    let model = three_state_2j(1.0, 0.05, 4.0, 1.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let rec = simulate_trajectory(&gen, &Vector::basis(3, 0), 100.0, 0.25, 7, 0).unwrap();
    assert_eq!(rec.grid_times.len(), 401);
    assert!(rec.grid_times.iter().enumerate().all(|(i, t)| (t - 0.25 * i as f64).abs() < 1e-12));
    assert!(rec.grid_states.iter().all(|s| (s.norm() - 1.0).abs() < 1e-10));
    assert!(rec.jump_times.windows(2).all(|w| w[0] <= w[1]));
    for ((pre, post), k) in rec.pre_jump_states.iter().zip(&rec.post_jump_states).zip(&rec.jump_indices) {
        let expected = model.jumps()[*k].matvec(pre).normalized().unwrap();
        assert!(expected.dot(post).norm() > 1.0 - 1e-10);
    }
}

#[test]
fn channel_probabilities_are_normalised_rates() {
    let model = three_state_2j(1.0, 0.3, 4.0, 1.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let psi = random_state(&mut rng(3), 3);
    let p = jump_channel_probabilities(&gen, &psi).unwrap();
    let w = gen.jump_rates(&psi);
    let total: f64 = w.iter().sum();
    for (pk, wk) in p.iter().zip(&w) {
        assert_abs_diff_eq!(*pk, wk / total, epsilon = 1e-14);
    }
}

#[test]
fn ensemble_population_follows_exponential_decay() {
    let gamma: f64 = 0.8;
    let sm = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).scale_real(gamma.sqrt());
    let model = Model::new(Matrix::zeros(2, 2), vec![sm], "decay").unwrap();
    let gen = EffectiveGenerator::new(&model).unwrap();
    let recs = simulate_ensemble(&gen, &Vector::basis(2, 1), 3.0, 0.5, 4000, 17).unwrap();
    let avg = ensemble_average(&recs).unwrap();
    for (t, (m, se)) in avg.times.iter().zip(avg.mean.iter().zip(&avg.stderr)) {
        let exact = (-gamma * t).exp();
        let tol = 4.0 * se[(1, 1)].re.max(1e-12);
        assert!((m[(1, 1)].re - exact).abs() <= tol, "t={t}");
    }
}

#[test]
fn ensemble_average_rejects_bad_input() {
    assert!(ensemble_average(&[]).is_err());
    let model = three_state_1j(1.0, 0.05, 4.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let a = simulate_trajectory(&gen, &Vector::basis(3, 0), 1.0, 0.1, 1, 0).unwrap();
    let b = simulate_trajectory(&gen, &Vector::basis(3, 0), 1.0, 0.2, 1, 1).unwrap();
    assert!(ensemble_average(&[a, b]).is_err());
}

#[test]
fn state_csv_round_trip() {
    let model = three_state_1j(1.0, 0.05, 4.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let rec = simulate_trajectory(&gen, &Vector::basis(3, 0), 5.0, 0.5, 1, 0).unwrap();
    let mut buf = Vec::new();
    rec.write_states_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("t,re_0,im_0,re_1,im_1,re_2,im_2\n"));
    let (times, states) = read_states_csv(&text).unwrap();
    assert_eq!(times, rec.grid_times);
    assert_eq!(states, rec.grid_states);
    let side: TrajectorySidecar = serde_json::from_str(&serde_json::to_string(&rec.sidecar()).unwrap()).unwrap();
    assert_eq!(side.jump_times, rec.jump_times);
}

#[test]
fn unnormalised_initial_state_is_rejected() {
    let model = three_state_1j(1.0, 0.05, 4.0);
    let gen = EffectiveGenerator::new(&model).unwrap();
    let bad = Vector::from_real(&[1.0, 1.0, 0.0]);
    assert!(simulate_trajectory(&gen, &bad, 1.0, 0.1, 1, 0).is_err());
}
