use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use twoatom::cli_runner::{parse_config, ScenarioConfig};
use twoatom::collective_basis::*;
use twoatom::coupling_geometry::*;
use twoatom::linalg::{c, hermitian_eigenvalues, max_abs, Mat4, C64};
use twoatom::liouvillian::*;
use twoatom::observables::*;
use twoatom::quantum_jump::{conditional_hamiltonian, no_jump_probability};

fn density() -> impl Strategy<Value = DensityMatrix4> {
    prop::collection::vec(-1.0..1.0f64, 32).prop_map(|xs| {
        let a = Mat4::from_fn(|i, j| c(xs[2 * (4 * i + j)], xs[2 * (4 * i + j) + 1]));
        let m = a * a.adjoint();
        let tr = m.trace();
        DensityMatrix4::new(m / tr).unwrap()
    })
}

fn pair() -> impl Strategy<Value = AtomPairConfig> {
    (0.01..2.0f64, 0.0..FRAC_PI_2, 0.2..3.0f64, 0.2..3.0f64, -3.0..3.0f64)
        .prop_map(|(s, a, g1, g2, d)| AtomPairConfig::identical(s, a).with_rates(g1, g2).with_delta(d))
}

fn drive() -> impl Strategy<Value = DriveField> {
    (0.0..5.0f64, -5.0..5.0f64, 0.0..PI, any::<bool>(), -PI..PI).prop_map(|(rabi, det, ang, standing, phase)| DriveField {
        rabi,
        detuning: det,
        propagation_angle: ang,
        wave_type: if standing { WaveType::Standing } else { WaveType::Running },
        phase,
    })
}

fn is_state(m: &Mat4, tol: f64) -> bool {
    let herm = max_abs(&(m - m.adjoint())) < tol;
    let tr = (m.trace() - C64::new(1.0, 0.0)).norm() < tol;
    herm && tr && hermitian_eigenvalues(m).iter().all(|e| *e > -tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn collective_damping_is_bounded(s in 0.0..20.0f64, a in 0.0..FRAC_PI_2) {
        let g = collective_damping(&AtomPairConfig::identical(s, a));
        prop_assert!(g.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn basis_is_unitary(p in pair()) {
        let b = build_basis(&p).unwrap();
        let u = b.unitary();
        prop_assert!(max_abs(&(u.adjoint() * u - Mat4::identity())) < 1e-12);
        prop_assert!((b.alpha * b.alpha + b.beta * b.beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basis_round_trip(p in pair(), rho in density()) {
        let b = build_basis(&p).unwrap();
        let there = basis_transform(Direction::ToCollective, &rho, &b).unwrap();
        let back = basis_transform(Direction::ToProduct, &there, &b).unwrap();
        prop_assert!(max_abs(&(back.matrix() - rho.matrix())) < 1e-12);
    }

    #[test]
    fn rates_sum_is_preserved(p in pair(), k1 in -PI..PI, k2 in -PI..PI) {
        let (a, b, _, _) = superposition_rates(&SuperpositionCoeffs::running(k1, k2), &p);
        prop_assert!(a >= -1e-12 && b >= -1e-12);
        prop_assert!((a + b - (p.gamma1 + p.gamma2)).abs() < 1e-10);
    }

    #[test]
    fn generator_is_trace_preserving(p in pair(), d in drive()) {
        let l = build_vacuum_drive(&p, &d).unwrap();
        prop_assert!(l.trace_defect() < 1e-10);
    }

    #[test]
    fn steady_state_is_a_state(p in pair(), d in drive()) {
        let ss = steady_state(&build_vacuum_drive(&p, &d).unwrap()).unwrap();
        prop_assert!(is_state(ss.rho.matrix(), 1e-9));
    }

    #[test]
    fn observables_stay_in_range(p in pair(), rho in density(), th in 0.0..PI, alpha in -PI..PI) {
        prop_assert!(angular_intensity(&rho, &p, &DetectionGeometry::single(th)) >= -1e-14);
        prop_assert!(total_intensity(&rho, &p) >= -1e-12);
        if let Ok(v) = visibility(&rho) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v));
        }
        let f = quadrature_variance(&rho, &p, alpha, &DetectionGeometry::perpendicular()).unwrap();
        prop_assert!(f >= -0.25 - 1e-12);
        let pu = purity(&rho);
        prop_assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&pu));
        let s2 = total_spin_squared(&rho);
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&s2));
    }

    #[test]
    fn survival_probability_is_monotone(p in pair(), d in drive(), t in 0.0..3.0f64) {
        let hc = conditional_hamiltonian(&p, &d).unwrap();
        let psi = collective_ket(Collective::E);
        let a = no_jump_probability(&psi, t, &hc).unwrap();
        let b = no_jump_probability(&psi, t + 0.1, &hc).unwrap();
        prop_assert!(a <= 1.0 + 1e-12 && b <= a + 1e-12 && b >= -1e-14);
    }

    #[test]
    fn config_text_round_trips(s in 0.0..5.0f64, rabi in 0.0..10.0f64, det in -10.0..10.0f64, seed in any::<u64>(), pts in 2usize..500) {
        let mut cfg = ScenarioConfig::default();
        cfg.pair.separation = s;
        cfg.drive.rabi = rabi;
        cfg.drive.detuning = det;
        cfg.seed = seed;
        cfg.grid.points = pts;
        prop_assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_keeps_states_physical(p in pair(), d in drive(), rho in density()) {
        let l = build_vacuum_drive(&p, &d).unwrap();
        let s = evolve(&l, &rho, &[0.0, 0.5, 2.0], &EvolveOptions::default()).unwrap();
        for r in &s.states {
            prop_assert!(is_state(r.matrix(), 1e-8));
        }
    }

    #[test]
    fn regression_starts_at_equal_time_value(p in pair(), rabi in 0.3..3.0f64, th1 in 0.2..3.0f64, th2 in 0.2..3.0f64) {
        let d = DriveField::perpendicular(rabi, 0.3);
        let l = build_vacuum_drive(&p, &d).unwrap();
        let rho = steady_state(&l).unwrap().rho;
        let geom = DetectionGeometry { theta1: th1, theta2: th2, phi: FRAC_PI_2 };
        if let Ok(g0) = g2_zero(&rho, &p, &geom) {
            let s = g2_tau(&l, &rho, &p, &geom, &[0.0, 1.0]).unwrap();
            prop_assert!((s.values[0] - g0).abs() < 1e-8 * g0.max(1.0));
            prop_assert!(s.values.iter().all(|v| *v >= -1e-10));
        }
    }
}
