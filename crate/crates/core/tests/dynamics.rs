use std::f64::consts::{FRAC_PI_4, PI};

use approx::assert_abs_diff_eq;
use esdkit::dynamics::{
    bandwidth_threshold, birth_time_numeric, collective_reduced, collective_state, death_time_numeric,
    detection_probability, esb_birth_time, esd_death_time, initial_state, jc_esd_window, jc_esd_window_closed,
    jc_evolve_numeric, jc_state, long_time, mode_edge_grid, pair_state, partition_scan, scan_transition, spectrum,
    two_atom_ww_reduced, Bath, JcParams, ModeSubset, Pair, SuddenTime, WwParams, WwPropagator,
};
use esdkit::measures::q_auxiliary;
use esdkit::C64;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use proptest::prelude::*;

fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * t)));
    v * d * v.adjoint()
}

/// Resonant interaction-picture Hamiltonian of both pairs on the full
/// 16-dimensional space, built from ladder operators.
fn two_pair_hamiltonian(j: f64) -> DMatrix<C64> {
    let one = C64::new(1.0, 0.0);
    let mut lower = DMatrix::<C64>::zeros(2, 2);
    lower[(0, 1)] = one;
    let id = DMatrix::<C64>::identity(2, 2);
    let kron4 = |ops: [&DMatrix<C64>; 4]| ops[0].kronecker(ops[1]).kronecker(ops[2]).kronecker(ops[3]);
    let raise = lower.adjoint();
    let h1 = kron4([&raise, &lower, &id, &id]) + kron4([&lower, &raise, &id, &id]);
    let h2 = kron4([&id, &id, &raise, &lower]) + kron4([&id, &id, &lower, &raise]);
    (h1 + h2) * C64::new(j, 0.0)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn jc_matches_exact_diagonalization() {
    let h = two_pair_hamiltonian(1.0);
    for &theta in &[0.0, 0.3, FRAC_PI_4, 0.4 * PI, 1.5] {
        let psi0 = DVector::from_column_slice(initial_state(theta).unwrap().amplitudes());
        for i in 0..=20 {
            let jt = 0.37 * i as f64;
            let want = expm_hermitian(&h, jt) * &psi0;
            let got = jc_state(theta, jt).unwrap();
            let err = got
                .amplitudes()
                .iter()
                .zip(want.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "θ={theta} Jt={jt}: {err:e}");
        }
    }
}

#[test]
fn numeric_pair_propagation_agrees_with_closed_form() {
    let p = JcParams::new(0.7, 3.0).unwrap();
    for &theta in &[0.2, 0.4 * PI] {
        for i in 0..=10 {
            let t = 0.5 * i as f64;
            let a = jc_evolve_numeric(theta, t, &p).unwrap();
            let b = jc_state(theta, p.coupling() * t).unwrap();
            assert!(a.inner(&b).unwrap().norm() > 1.0 - 1e-12);
            let d = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(d < 1e-10, "{d:e}");
        }
    }
}

#[test]
fn star_graph_matches_dense_eigensolver() {
    let detunings = vec![-2.0, -1.1, -0.3, 0.4, 0.9, 1.7, 2.5];
    let couplings = vec![0.3, 0.2, 0.5, 0.1, 0.4, 0.25, 0.35];
    let n = detunings.len();
    let mut h = DMatrix::<C64>::zeros(n + 1, n + 1);
    for k in 0..n {
        h[(k + 1, k + 1)] = C64::new(detunings[k], 0.0);
        h[(0, k + 1)] = C64::new(couplings[k], 0.0);
        h[(k + 1, 0)] = C64::new(couplings[k], 0.0);
    }
    let prop = WwPropagator::new(Bath::new(detunings, couplings).unwrap()).unwrap();
    for &t in &[0.0, 0.3, 1.0, 4.0, 11.0] {
        let u = expm_hermitian(&h, t);
        let (xi, lambdas) = prop.amplitudes(t);
        assert!((xi - u[(0, 0)]).norm() < 1e-12);
        for k in 0..n {
            assert!((lambdas[k] - u[(k + 1, 0)]).norm() < 1e-12);
        }
    }
}

#[test]
fn wide_band_decay_is_exponential_to_two_percent() {
    let p = WwParams {
        modes: 4000,
        half_bandwidth: 160.0,
        ..Default::default()
    };
    let prop = WwPropagator::from_params(&p).unwrap();
    for i in 0..=50 {
        let gt = 0.1 * i as f64;
        let want = (-gt).exp();
        let got = prop.xi(gt / p.gamma).norm_sqr();
        assert!((got / want - 1.0).abs() < 0.02, "Γt={gt}: {got} vs {want}");
    }
}

#[test]
fn default_band_decay_stays_close() {
    let p = WwParams::default();
    let prop = WwPropagator::from_params(&p).unwrap();
    let sol = prop
        .solve(&(0..=50).map(|i| 0.1 * i as f64).collect::<Vec<_>>())
        .unwrap();
    assert!(sol.norm_error() < 1e-10);
    assert!(!sol.beyond_horizon);
    let dev: Vec<f64> = sol
        .times
        .iter()
        .zip(&sol.xi)
        .map(|(t, xi)| (xi.norm_sqr() - (-t).exp()).abs())
        .collect();
    let worst = dev.iter().copied().fold(0.0, f64::max);
    // finite band: early-time overshoot of order Γ/W, frozen from a dense solve
    assert_abs_diff_eq!(worst, 0.013606094141489278, epsilon = 1e-9);
    assert_abs_diff_eq!(dev[2], worst, epsilon = 0.0);
}

#[test]
fn sudden_times_closed_form() {
    let cases = [
        (0.4 * PI, 0.3929236266, 1.1241772157),
        (0.375 * PI, 0.5347999967, 0.8813735870),
        (0.3 * PI, 1.2966091647, 0.3194582595),
    ];
    for (theta, td, tb) in cases {
        assert_abs_diff_eq!(esd_death_time(theta, 1.0).unwrap().time().unwrap(), td, epsilon = 1e-9);
        assert_abs_diff_eq!(esb_birth_time(theta, 1.0).unwrap().time().unwrap(), tb, epsilon = 1e-9);
        assert_abs_diff_eq!(
            esd_death_time(theta, 2.0).unwrap().time().unwrap(),
            td / 2.0,
            epsilon = 1e-9
        );
    }
    assert_eq!(esd_death_time(0.2 * PI, 1.0).unwrap(), SuddenTime::Never);
    assert_eq!(esb_birth_time(0.2 * PI, 1.0).unwrap(), SuddenTime::Never);
}

#[test]
fn sudden_times_numeric_within_two_percent() {
    let p = WwParams {
        modes: 4000,
        half_bandwidth: 160.0,
        ..Default::default()
    };
    let prop = WwPropagator::from_params(&p).unwrap();
    for theta in [0.4 * PI, 0.375 * PI, 0.3 * PI] {
        let td = esd_death_time(theta, p.gamma).unwrap().time().unwrap();
        let tb = esb_birth_time(theta, p.gamma).unwrap().time().unwrap();
        let tdn = death_time_numeric(theta, &prop, p.gamma).unwrap().time().unwrap();
        let tbn = birth_time_numeric(theta, &prop, p.gamma).unwrap().time().unwrap();
        assert!((tdn / td - 1.0).abs() < 0.02, "θ={theta}: t_d {tdn} vs {td}");
        assert!((tbn / tb - 1.0).abs() < 0.02, "θ={theta}: t_b {tbn} vs {tb}");
    }
    assert_eq!(death_time_numeric(0.2 * PI, &prop, p.gamma).unwrap(), SuddenTime::Never);
}

#[test]
fn jc_window() {
    let (a, b) = jc_esd_window(0.4 * PI).unwrap().unwrap();
    assert_abs_diff_eq!(a, 0.6065268828685066, epsilon = 1e-10);
    assert_abs_diff_eq!(b, 2.5350657707212862, epsilon = 1e-10);
    let (ca, cb) = jc_esd_window_closed(0.4 * PI).unwrap().unwrap();
    assert_abs_diff_eq!(a, ca, epsilon = 1e-10);
    assert_abs_diff_eq!(b, cb, epsilon = 1e-10);
    assert!(jc_esd_window(0.2 * PI).unwrap().is_none());
}

#[test]
fn collective_zero_crossings() {
    let theta = 0.4 * PI;
    let cot = 1.0 / theta.tan();
    let q = |xi: f64, chi: f64, pair| {
        q_auxiliary(&collective_reduced(theta, C64::new(xi, 0.0), chi, pair).unwrap()).unwrap()
    };
    let x = (1.0 - cot).sqrt();
    assert_abs_diff_eq!(q(x, (1.0 - x * x).sqrt(), Pair::Atoms), 0.0, epsilon = 1e-9);
    assert!(q(x * 1.01, 0.0, Pair::Atoms) > 0.0);
    assert!(q(x * 0.99, 0.0, Pair::Atoms) < 0.0);
    // long time: photons alone
    let c = (1.0 - cot).sqrt();
    assert_abs_diff_eq!(q(0.0, c, Pair::Photons), 0.0, epsilon = 1e-9);
    assert!(q(0.0, c * 1.01, Pair::Photons) > 0.0);
    assert!(q(0.0, c * 0.99, Pair::Photons) < 0.0);
    // full mode set
    let x = cot.sqrt();
    assert_abs_diff_eq!(q(x, (1.0 - cot).sqrt(), Pair::Photons), 0.0, epsilon = 1e-9);
}

#[test]
fn collective_state_traces_to_the_pair_state() {
    let theta = 0.35 * PI;
    let xi = C64::from_polar(0.6, 0.4);
    let full = collective_state(theta, xi, 0.5).unwrap();
    assert_abs_diff_eq!(full.norm(), 1.0, epsilon = 1e-12);
    // with every mode in the collective mode the environment qubits are empty
    let chi = (1.0 - xi.norm_sqr()).sqrt();
    let pair = pair_state(theta, xi, C64::new(chi, 0.0)).unwrap();
    for (which, keep) in [(Pair::Atoms, [0, 2]), (Pair::Photons, [1, 3])] {
        let a = collective_reduced(theta, xi, chi, which).unwrap();
        let b = pair.reduced_state(&keep).unwrap();
        assert!((a.matrix() - b.matrix()).norm() < 1e-12);
    }
    assert!(collective_state(theta, xi, 0.9).is_err());
    assert!(ModeSubset::window(-1.0).is_err());
}

#[test]
fn lorentzian_quadrature() {
    let g = 1.0;
    let total = simpson(|nu| spectrum(nu, g, 0.0).unwrap(), -100.0, 100.0, 200_000);
    assert_abs_diff_eq!(total, 0.99363401447, epsilon = 1e-9);
    for dn in [0.1, 1.0, 10.0] {
        let q = simpson(|nu| spectrum(nu, g, 0.0).unwrap(), -dn, dn, 20_000);
        assert_abs_diff_eq!(q, detection_probability(dn, g).unwrap(), epsilon = 1e-10);
    }
    assert_abs_diff_eq!(bandwidth_threshold(0.375 * PI).unwrap(), 1.3136757077, epsilon = 1e-9);
    assert_abs_diff_eq!(bandwidth_threshold(0.4 * PI).unwrap(), 1.7861569409, epsilon = 1e-9);
    assert_abs_diff_eq!(bandwidth_threshold(FRAC_PI_4).unwrap(), 0.0, epsilon = 1e-12);
}

#[test]
fn partition_scan_behaviour() {
    let p = WwParams::default();
    let prop = WwPropagator::from_params(&p).unwrap();
    let t = long_time(&p, &prop).unwrap();
    let sol = prop.solve(&[t]).unwrap();
    let grid = mode_edge_grid(&sol.detunings, p.half_bandwidth);
    let step = grid[1] - grid[0];

    let robust = partition_scan(0.2 * PI, &sol, t, &grid).unwrap();
    assert!(robust.iter().all(|r| r.c_pp > 0.0));
    assert!(robust.windows(2).all(|w| w[1].chi_sq >= w[0].chi_sq));
    let last = robust.last().unwrap();
    assert_abs_diff_eq!(last.chi_sq, 1.0 - sol.xi[0].norm_sqr(), epsilon = 1e-12);

    let gamma = p.linewidth();
    for theta in [0.375 * PI, 0.4 * PI] {
        let rows = partition_scan(theta, &sol, t, &grid).unwrap();
        let at = scan_transition(&rows).unwrap();
        let want = bandwidth_threshold(theta).unwrap() * gamma;
        assert!((at - want).abs() <= step, "θ={theta}: {at} vs {want}");
    }

    let atoms = two_atom_ww_reduced(0.4 * PI, &sol, &ModeSubset::all(), t, Pair::Atoms).unwrap();
    assert!(q_auxiliary(&atoms).unwrap() < 0.0);
    assert!(partition_scan(0.4 * PI, &sol, t, &[2.0, 1.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bath_evolution_is_unitary(n in 2usize..40, w in 1.0f64..20.0, t in 0.0f64..30.0) {
        let p = WwParams { modes: n, half_bandwidth: w, ..Default::default() };
        let prop = WwPropagator::from_params(&p).unwrap();
        let (xi, lambdas) = prop.amplitudes(t);
        let norm = xi.norm_sqr() + lambdas.iter().map(|l| l.norm_sqr()).sum::<f64>();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn death_precedes_birth_above_arccot_half(theta in 1.1072f64..1.5) {
        let td = esd_death_time(theta, 1.0).unwrap().time().unwrap();
        let tb = esb_birth_time(theta, 1.0).unwrap().time().unwrap();
        prop_assert!(tb > td);
    }
}
