mod common;

use approx::assert_abs_diff_eq;
use common::*;
use metaunravel::models::*;
use metaunravel::numkernel::pure_trace_distance;
use metaunravel::reset::*;
use metaunravel::unravel::EffectiveGenerator;
use metaunravel::{Error, Matrix, Vector, C64};

fn setup(model: &metaunravel::Model) -> (EffectiveGenerator, ResetStructure) {
    (EffectiveGenerator::new(model).unwrap(), detect_reset_structure(model.jumps()).unwrap())
}

#[test]
fn rank_one_factorisation_recovers_its_factors() {
    let mut r = rng(1);
    let (phi, xi) = (random_state(&mut r, 4), random_state(&mut r, 4));
    let kappa: f64 = 2.5;
    let j = phi.outer(&xi).scale_real(kappa.sqrt());
    let rs = detect_reset_structure(std::slice::from_ref(&j)).unwrap();
    let c = &rs.channels[0];
    assert_abs_diff_eq!(c.kappa, kappa, epsilon = 1e-12);
    assert!(pure_trace_distance(&c.phi, &phi) < 1e-12);
    assert!((&c.phi.outer(&c.xi).scale_real(c.kappa.sqrt()) - &j).max_abs() < 1e-12);
}

#[test]
fn channels_sharing_a_destination_share_a_reset_point() {
    let phi = Vector::basis(3, 0);
    let j1 = phi.outer(&Vector::basis(3, 1));
    let j2 = phi.outer(&Vector::basis(3, 2)).scale(C64::new(0.0, 2.0));
    let rs = detect_reset_structure(&[j1, j2]).unwrap();
    assert_eq!(rs.reset_points.len(), 1);
    assert_eq!(rs.channels_into(0).collect::<Vec<_>>(), vec![0, 1]);
}

#[test]
fn non_reset_jumps_are_rejected() {
    assert!(matches!(detect_reset_structure(&[Matrix::identity(2)]), Err(Error::NotResetProcess { index: 0, .. })));
    assert!(matches!(detect_reset_structure(&[Matrix::zeros(2, 2)]), Err(Error::ZeroJump { index: 0 })));
}

#[test]
fn splitting_methods_agree_and_conserve_probability() {
    let (gen, rs) = setup(&three_state_2j(1.0, 0.05, 4.0, 1.0));
    let mut r = rng(2);
    for _ in 0..5 {
        let psi = random_state(&mut r, 3);
        let a = splitting_probabilities(&gen, &psi).unwrap();
        let b = splitting_by_quadrature(&gen, &psi, 1e7, &Default::default()).unwrap();
        assert_eq!(a.method, SplittingMethod::Sylvester);
        assert_abs_diff_eq!(a.per_channel.iter().sum::<f64>() + a.never, 1.0, epsilon = 1e-10);
        for (x, y) in a.per_channel.iter().zip(&b.per_channel) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-8);
        }
    }
    let phase = rs.phase_map(&[0, 1]);
    let c = committor_reset(&splitting_probabilities(&gen, &rs.reset_points[0]).unwrap(), &phase, 2);
    assert!(c[0] > 0.99);
}

#[test]
fn dark_state_forces_quadrature_fallback() {
    // Omega2 = 0: |2> never jumps, so the pencil is singular
    let (gen, _) = setup(&three_state_1j(1.0, 0.0, 3.0));
    let psi = Vector::from_real(&[0.6, 0.0, 0.8]);
    let s = splitting_probabilities(&gen, &psi).unwrap();
    assert!(s.fallback);
    assert_eq!(s.method, SplittingMethod::Quadrature);
    assert_abs_diff_eq!(s.never, 0.64, epsilon = 1e-6);
    assert_abs_diff_eq!(s.per_channel[0], 0.36, epsilon = 1e-6);
}

#[test]
fn jumpless_trajectory_columns_match_direct_evaluation() {
    let (gen, rs) = setup(&three_state_1j(1.0, 0.05, 4.0));
    let jt = jumpless_trajectory(&gen, &rs, 0, None).unwrap();
    let phi = &rs.reset_points[0];
    let c = &rs.channels[0];
    for i in (0..jt.taus.len()).step_by(37) {
        let raw = reference_expm(gen.matrix(), jt.taus[i]).matvec(phi);
        assert_abs_diff_eq!(jt.survival[i], raw.norm_sqr(), epsilon = 1e-10);
        let psi = raw.normalized().unwrap();
        assert!(pure_trace_distance(&psi, &jt.states[i]) < 1e-8);
        assert_abs_diff_eq!(jt.rates[i][0], c.kappa * c.xi.dot(&psi).norm_sqr(), epsilon = 1e-9);
    }
    assert!(jt.arc_length.windows(2).all(|w| w[1] >= w[0]));
    assert!(jt.total_length >= pure_trace_distance(phi, &jt.phi_a) - 1e-12);
    assert!(jt.distance_to_asymptote(*jt.taus.last().unwrap()).unwrap() < 1e-6);
}

#[test]
fn multi_reset_arc_coordinate_ends_at_zero() {
    let (gen, rs) = setup(&three_state_2j(1.0, 0.05, 4.0, 1.0));
    for j in 0..2 {
        let jt = jumpless_trajectory(&gen, &rs, j, None).unwrap();
        assert_abs_diff_eq!(jt.arc_length[0], -jt.total_length, epsilon = 1e-12);
        assert!(*jt.arc_length.last().unwrap() <= 0.0);
        assert!(jt.arc_length.last().unwrap().abs() < 1e-6);
    }
}

#[test]
fn semi_markov_rate_is_the_log_derivative_of_survival() {
    let (gen, rs) = setup(&three_state_2j(1.0, 0.2, 4.0, 1.0));
    let jt = jumpless_trajectory(&gen, &rs, 0, None).unwrap();
    for tau in [0.1, 1.0, 5.0] {
        let h = 1e-5;
        let dlog = (jt.survival_at(tau + h).ln() - jt.survival_at(tau - h).ln()) / (2.0 * h);
        let total: f64 = (0..2).map(|k| semi_markov_rate(&jt, k, tau).unwrap()).sum();
        assert_abs_diff_eq!(total, -dlog, epsilon = 1e-6);
    }
    assert!(semi_markov_rate(&jt, 0, -1.0).is_err());
}

#[test]
fn semi_markov_waiting_times_pass_a_ks_test() {
    let (gen, rs) = setup(&three_state_1j(1.0, 0.3, 4.0));
    let jts = vec![jumpless_trajectory(&gen, &rs, 0, None).unwrap()];
    let mut r = trajectory_rng_for_test();
    let path = sample_semi_markov(&gen, &rs, &jts, 0, 2000.0, &mut r).unwrap();
    assert!(path.jumps.len() > 500);
    let mut taus: Vec<f64> = path.jumps.iter().map(|j| j.tau).collect();
    let g = gen.matrix().clone();
    let phi = rs.reset_points[0].clone();
    let d = ks_statistic(&mut taus, |t| 1.0 - reference_expm(&g, t).matvec(&phi).norm_sqr());
    assert!(ks_pvalue(d, path.jumps.len()) > 0.01);
    let (point, since) = path.state_at(path.jumps[10].time + 0.5 * path.jumps[11].tau);
    assert_eq!(point, 0);
    assert_abs_diff_eq!(since, 0.5 * path.jumps[11].tau, epsilon = 1e-9);
}

fn trajectory_rng_for_test() -> rand_chacha::ChaCha8Rng {
    metaunravel::unravel::trajectory_rng(31, 0)
}

#[test]
fn single_reset_committor_limits() {
    let (gen, rs) = setup(&three_state_1j(1.0, 0.05, 4.0));
    let jt = jumpless_trajectory(&gen, &rs, 0, None).unwrap();
    let from_asymptote = committor_single_reset(&gen, &rs, &jt.phi_a, &jt.phi_a, 0.05, 1e5).unwrap();
    assert_eq!(from_asymptote.tau_hit, Some(0.0));
    assert_abs_diff_eq!(from_asymptote.dark, 1.0, epsilon = 1e-14);
    let mut r = rng(3);
    for _ in 0..5 {
        let psi = random_real_state(&mut r, 3);
        let c = committor_single_reset(&gen, &rs, &psi, &jt.phi_a, 0.05, 1e5).unwrap();
        assert!(c.hits);
        assert_abs_diff_eq!(c.bright + c.dark, 1.0, epsilon = 1e-8);
    }
}

#[test]
fn elbow_time_solves_its_defining_equation() {
    let (gen, rs) = setup(&three_state_1j(1.0, 1e-2, 8.0));
    let e = elbow_analysis(&gen, &rs, 1.0).unwrap();
    assert!(e.a_a > 0.0);
    let lhs = e.a_a;
    let rhs = e.a_plus.abs() * (-(e.theta_a - e.theta_plus) * e.tau_e).exp();
    assert_abs_diff_eq!(lhs / rhs, 1.0, epsilon = 1e-10);
    let s = reference_expm(gen.matrix(), e.tau_e).matvec(&rs.reset_points[0]).norm_sqr();
    assert_abs_diff_eq!(e.survival_at_tau_e, s, epsilon = 1e-12);
    assert!(e.theta_a > e.theta_plus && e.theta_plus > e.theta_minus);
}

#[test]
fn jumpless_csv_header() {
    let (gen, rs) = setup(&three_state_2j(1.0, 0.05, 4.0, 1.0));
    let jt = jumpless_trajectory(&gen, &rs, 1, Some(50.0)).unwrap();
    let mut buf = Vec::new();
    write_jumpless_csv(&jt, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("tau,ell,S,w_0,w_1,re_0,im_0,re_1,im_1,re_2,im_2\n"));
    assert_eq!(text.lines().count(), jt.taus.len() + 1);
    let rows = [CommittorRow { psi_id: "psi0".into(), phase: "dark".into(), value: 0.25, method: "sylvester".into() }];
    let mut buf = Vec::new();
    write_committor_csv(&rows, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "psi_id,phase,value,method\npsi0,dark,0.25,sylvester\n");
}

#[test]
fn jumpless_state_survives_survival_underflow() {
    // leading complex pair: S(tau) underflows long before tau = 1e4
    let (gen, rs) = setup(&three_state_2j(1.0, 0.2, 4.0, 1.0));
    let jt = jumpless_trajectory(&gen, &rs, 0, Some(1e4)).unwrap();
    assert_eq!(jt.survival_at(1e4), 0.0);
    assert!((jt.state_at(1e4).unwrap().norm() - 1.0).abs() < 1e-12);
}
