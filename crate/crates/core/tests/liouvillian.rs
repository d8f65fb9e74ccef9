use std::f64::consts::FRAC_PI_2;
use twoatom::collective_basis::{collective_element, collective_ket, Collective};
use twoatom::coupling_geometry::{AtomPairConfig, DriveField, SqueezedReservoir};
use twoatom::linalg::{
    commutator_super, expect, lindblad, lowering, max_abs, raising, re, Mat16, Mat4, C64, EE, EG, GE, GG,
};
use twoatom::liouvillian::*;
use twoatom::observables::total_intensity;
use twoatom::oracles::{analytic_steady, singly_excited_populations, SteadyScenario};
use twoatom::Error;

fn grid(stop: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| stop * i as f64 / (n - 1) as f64).collect()
}

fn sp() -> Mat4 {
    raising(1) + raising(2)
}

#[test]
fn independent_decay_is_exponential() {
    let pair = AtomPairConfig::explicit(0.0, 0.0);
    let l = build_vacuum_drive(&pair, &DriveField::off()).unwrap();
    let ts = grid(5.0, 51);
    let s = evolve(&l, &DensityMatrix4::basis(EG), &ts, &EvolveOptions::default()).unwrap();
    for (t, rho) in s.times.iter().zip(&s.states) {
        let p1 = rho.get(EG, EG).re + rho.get(EE, EE).re;
        assert!((p1 - (-t).exp()).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn singly_excited_collective_populations() {
    let pair = AtomPairConfig::identical(0.1, FRAC_PI_2);
    let (g12, _) = pair.couplings().unwrap();
    let l = build_vacuum_drive(&pair, &DriveField::off()).unwrap();
    let ts = grid(4.0, 41);
    let s = evolve(&l, &DensityMatrix4::basis(EG), &ts, &EvolveOptions::default()).unwrap();
    for (t, rho) in s.times.iter().zip(&s.states) {
        let (ss, aa) = singly_excited_populations(1.0, g12, *t);
        assert!((collective_element(rho.matrix(), Collective::S, Collective::S).re - ss).abs() < 1e-9);
        assert!((collective_element(rho.matrix(), Collective::A, Collective::A).re - aa).abs() < 1e-9);
    }
}

#[test]
fn dicke_cascade_intensity() {
    // |e⟩ → |s⟩ → |g⟩ both at 2Γ: ρ_ee = e^{−2t}, ρ_ss = 2t e^{−2t}, I = 2(ρ_ee + ρ_ss)
    let pair = AtomPairConfig::dicke();
    let l = build_vacuum_drive(&pair, &DriveField::off()).unwrap();
    let ts = grid(4.0, 81);
    let s = evolve(&l, &DensityMatrix4::basis(EE), &ts, &EvolveOptions::default()).unwrap();
    for (t, rho) in s.times.iter().zip(&s.states) {
        let exact = 2.0 * (-2.0 * t).exp() * (1.0 + 2.0 * t);
        assert!((total_intensity(rho, &pair) - exact).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn zero_generator_keeps_state() {
    let l = Generator16::from_matrix(Mat16::zeros(), Scenario::Custom);
    let rho = DensityMatrix4::maximally_mixed();
    let s = evolve(&l, &rho, &[0.0, 1.0, 10.0], &EvolveOptions::default()).unwrap();
    assert!(s.states.iter().all(|r| r == &rho));
}

#[test]
fn step_budget_reports_last_good_time() {
    let pair = AtomPairConfig::identical(0.05, FRAC_PI_2);
    let l = build_vacuum_drive(&pair, &DriveField::perpendicular(20.0, 0.0)).unwrap();
    let opts = EvolveOptions { max_steps: 50, ..Default::default() };
    let e = evolve(&l, &DensityMatrix4::ground(), &grid(10.0, 11), &opts).unwrap_err();
    match e {
        Error::Integration { last_good_time, .. } => assert!((0.0..10.0).contains(&last_good_time)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(evolve(&l, &DensityMatrix4::ground(), &[0.0, 0.0], &opts).is_err());
}

#[test]
fn evolved_states_stay_physical() {
    let pair = AtomPairConfig::identical(0.2, 0.7).with_delta(0.3);
    let drive = DriveField { propagation_angle: 0.4, ..DriveField::perpendicular(2.0, -0.5) };
    let l = build_vacuum_drive(&pair, &drive).unwrap();
    let s = evolve(&l, &DensityMatrix4::basis(GE), &grid(10.0, 101), &EvolveOptions::default()).unwrap();
    for rho in &s.states {
        DensityMatrix4::check(rho.matrix()).unwrap();
    }
}

#[test]
fn generators_preserve_trace() {
    let pair = AtomPairConfig::identical(0.13, 1.1).with_delta(0.7).with_rates(1.0, 1.8);
    let res = SqueezedReservoir { carrier_offset: 0.3, ..SqueezedReservoir::ideal(0.4, 0.5, 0.9) };
    let gens = [
        build_vacuum_drive(&pair, &DriveField::perpendicular(1.2, 0.4)).unwrap(),
        build_squeezed(&pair, &res).unwrap(),
        build_squeezed_secular(&pair.with_delta(30.0), &res).unwrap(),
        build_dicke_dressed(&DriveField::perpendicular(50.0, 0.0)).unwrap(),
        build_bad_cavity(&pair, 10.0, 100.0, 30.0).unwrap(),
    ];
    for l in &gens {
        assert!(l.trace_defect() < 1e-10, "{:?}", l.scenario);
    }
}

#[test]
fn undriven_vacuum_relaxes_to_ground() {
    let l = build_vacuum_drive(&AtomPairConfig::identical(0.3, FRAC_PI_2), &DriveField::off()).unwrap();
    let ss = steady_state(&l).unwrap();
    assert!(!ss.degenerate);
    assert!(max_abs(&(ss.rho.matrix() - DensityMatrix4::ground().matrix())) < 1e-12);
}

#[test]
fn extended_atoms_correlations() {
    for (g12, o12, rabi) in [(0.3, 0.8, 1.0), (-0.2, 2.0, 0.5), (0.6, -1.5, 3.0)] {
        let pair = AtomPairConfig::explicit(g12, o12);
        let l = build_vacuum_drive(&pair, &DriveField::perpendicular(rabi, 0.0)).unwrap();
        let rho = steady_state(&l).unwrap().rho;
        let r = analytic_steady(&SteadyScenario::Extended { gamma: 1.0, gamma12: g12, omega12: o12, rabi }).unwrap();
        let s11 = expect(&(raising(1) * lowering(1)), rho.matrix());
        let s12 = expect(&(raising(1) * lowering(2)), rho.matrix());
        assert!((s11.re - r.s11.unwrap()).abs() < 1e-10);
        assert!((s12.re - r.s12.unwrap()).abs() < 1e-10);
    }
}

#[test]
fn driven_dicke_is_degenerate() {
    for rabi in [0.5, 2.0, 10.0] {
        let pair = AtomPairConfig::dicke();
        let l = build_vacuum_drive(&pair, &DriveField::perpendicular(rabi, 0.0)).unwrap();
        let ss = steady_state(&l).unwrap();
        assert!(ss.degenerate);
        assert_eq!(ss.null_dim, 2);
        let r = analytic_steady(&SteadyScenario::Dicke { gamma: 1.0, rabi }).unwrap();
        let m = ss.rho.matrix();
        assert!((expect(&(raising(1) * lowering(1)), m).re - r.s11.unwrap()).abs() < 1e-9);
        assert!((expect(&(raising(1) * lowering(2)), m).re - r.s12.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn degenerate_steady_state_is_the_long_time_limit() {
    let pair = AtomPairConfig::dicke();
    let l = build_vacuum_drive(&pair, &DriveField::perpendicular(1.5, 0.0)).unwrap();
    let ss = steady_state(&l).unwrap();
    let s = evolve(&l, &DensityMatrix4::ground(), &[0.0, 80.0], &EvolveOptions::default()).unwrap();
    assert!(max_abs(&(s.states[1].matrix() - ss.rho.matrix())) < 1e-8);
}

#[test]
fn vacuum_squeezing_reduces_to_free_decay() {
    let pair = AtomPairConfig::identical(0.17, 0.9).with_delta(0.4);
    let a = build_squeezed(&pair, &SqueezedReservoir::vacuum()).unwrap();
    let b = build_vacuum_drive(&pair, &DriveField::off()).unwrap();
    assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-12);
}

#[test]
fn ideal_squeezing_dicke_limit() {
    for n in [0.05, 0.5, 5.0] {
        let l = build_squeezed(&AtomPairConfig::dicke(), &SqueezedReservoir::quantum(n)).unwrap();
        let ss = steady_state(&l).unwrap();
        let m = ss.rho.matrix();
        assert!(collective_element(m, Collective::S, Collective::S).re.abs() < 1e-10);
        assert!((collective_element(m, Collective::E, Collective::E).re - n / (2.0 * n + 1.0)).abs() < 1e-10);
    }
}

#[test]
fn squeezing_rejects_invalid_reservoir() {
    let e = build_squeezed(&AtomPairConfig::dicke(), &SqueezedReservoir::ideal(0.5, 2.0, 0.0)).unwrap_err();
    assert!(matches!(e, Error::Invariant(_)));
}

#[test]
fn finite_separation_squeezing() {
    let pair = AtomPairConfig::explicit(0.5, 0.0);
    let n = 0.5;
    let m = (n * (n + 1.0f64)).sqrt();
    let rho = steady_state(&build_squeezed(&pair, &SqueezedReservoir::quantum(n)).unwrap()).unwrap().rho;
    let r = analytic_steady(&SteadyScenario::SqueezedSeparated { n, m, a: 0.5 }).unwrap();
    let el = |c| collective_element(rho.matrix(), c, c).re;
    assert!((el(Collective::E) - r.rho_ee.unwrap()).abs() < 1e-10);
    assert!((el(Collective::S) - r.rho_ss.unwrap()).abs() < 1e-10);
    assert!((el(Collective::A) - r.rho_aa.unwrap()).abs() < 1e-10);
}

fn mean(op: &Mat4, rho: &Mat4) -> C64 {
    expect(op, rho)
}

#[test]
fn dressed_model_decay_rates() {
    let rabi = 30.0;
    let l = build_dicke_dressed(&DriveField::perpendicular(rabi, 0.0)).unwrap();
    let (rz, _, rm) = dressed_operators();
    let psi = (collective_ket(Collective::G) + collective_ket(Collective::S) * C64::new(0.6, 0.8)) * re(0.5f64.sqrt());
    let rho0 = DensityMatrix4::pure(&psi).unwrap();
    let ts = grid(3.0, 31);
    let s = evolve(&l, &rho0, &ts, &EvolveOptions { rtol: 1e-11, atol: 1e-13, ..Default::default() }).unwrap();
    let z0 = mean(&rz, rho0.matrix());
    let m0 = mean(&rm, rho0.matrix());
    assert!(z0.norm() > 0.1 && m0.norm() > 0.1);
    for (t, rho) in ts.iter().zip(&s.states) {
        let z = mean(&rz, rho.matrix());
        assert!((z - z0 * (-0.5 * t).exp()).norm() < 1e-8);
        let m = mean(&rm, rho.matrix());
        let plus = m0 * C64::new(-0.75 * t, rabi * t).exp();
        let minus = m0 * C64::new(-0.75 * t, -rabi * t).exp();
        assert!((m - plus).norm().min((m - minus).norm()) < 1e-8, "t = {t}");
    }
}

#[test]
fn bad_cavity_small_gamma_is_collective_decay() {
    let (g, gc, om) = (2.0, 100.0, 40.0);
    let pair = AtomPairConfig::dicke().with_rates(1e-14, 1e-14);
    let l = build_bad_cavity(&pair, g, gc, om).unwrap();
    let h = (sp() + sp().adjoint()) * re(-0.5 * g * om / gc);
    let expected = commutator_super(&h) + lindblad(&sp().adjoint(), g * g / gc);
    assert!(max_abs(&(l.matrix() - expected)) < 1e-12);
}

#[test]
fn bad_cavity_without_coupling_is_independent_emission() {
    let pair = AtomPairConfig::identical(0.2, FRAC_PI_2).with_rates(1.0, 0.6);
    let l = build_bad_cavity(&pair, 0.0, 50.0, 10.0).unwrap();
    let expected = lindblad(&lowering(1), 1.0) + lindblad(&lowering(2), 0.6);
    assert!(max_abs(&(l.matrix() - expected)) < 1e-15);
}

#[test]
fn bad_cavity_hamiltonian_block() {
    let l = build_bad_cavity(&AtomPairConfig::dicke(), 1.0, 100.0, 50.0).unwrap();
    let dissipative = lindblad(&lowering(1), 1.0) + lindblad(&lowering(2), 1.0) + lindblad(&sp().adjoint(), 0.01);
    // −½gη(S⁺ + S⁻) with gη = 0.5, written element by element
    let mut h = Mat4::zeros();
    for (i, j) in [(EG, GG), (GE, GG), (EE, EG), (EE, GE)] {
        h[(i, j)] = re(-0.25);
        h[(j, i)] = re(-0.25);
    }
    assert!(max_abs(&(l.matrix() - dissipative - commutator_super(&h))) < 1e-15);
}

#[test]
fn bad_cavity_requires_positive_cavity_rate() {
    for gc in [0.0, -1.0] {
        let e = build_bad_cavity(&AtomPairConfig::dicke(), 1.0, gc, 1.0).unwrap_err();
        assert!(matches!(e, Error::Domain(_)));
    }
}

#[test]
fn density_matrix_validation() {
    assert!(matches!(DensityMatrix4::new(Mat4::identity()), Err(Error::InvalidState(_))));
    let mut m = Mat4::zeros();
    m[(GG, GG)] = re(1.5);
    m[(EE, EE)] = re(-0.5);
    assert!(matches!(DensityMatrix4::new(m), Err(Error::InvalidState(_))));
    let mut m = Mat4::zeros();
    m[(GG, GG)] = re(1.0);
    m[(GG, EE)] = C64::new(0.0, 0.1);
    assert!(matches!(DensityMatrix4::new(m), Err(Error::InvalidState(_))));
    assert!(DensityMatrix4::pure(&twoatom::linalg::Vec4::zeros()).is_err());
}
