use approx::assert_relative_eq;
use std::f64::consts::{FRAC_PI_2, PI};
use twoatom::collective_basis::{collective_element, collective_ket, Collective};
use twoatom::coupling_geometry::{AtomPairConfig, DriveField, SqueezedReservoir};
use twoatom::liouvillian::*;
use twoatom::oracles::*;

fn pop(rho: &DensityMatrix4, c: Collective) -> f64 {
    collective_element(rho.matrix(), c, c).re
}

#[test]
fn dicke_strong_drive_correlations() {
    let r = analytic_steady(&SteadyScenario::Dicke { gamma: 1.0, rabi: 1e4 }).unwrap();
    assert_relative_eq!(r.s11.unwrap(), 0.5, max_relative = 1e-6);
    assert_relative_eq!(r.s12.unwrap(), 1.0 / 6.0, max_relative = 1e-6);
}

#[test]
fn squeezed_dicke_special_cases() {
    for n in [0.1, 1.0, 5.0] {
        let q = analytic_steady(&SteadyScenario::SqueezedQuantum { n }).unwrap();
        assert_eq!(q.rho_ss, Some(0.0));
        assert_relative_eq!(q.rho_ee.unwrap(), n / (2.0 * n + 1.0));
        let full = analytic_steady(&SteadyScenario::SqueezedDicke { n, m: (n * (n + 1.0)).sqrt() }).unwrap();
        assert!(full.rho_ss.unwrap().abs() < 1e-12);
        assert_relative_eq!(full.rho_ee.unwrap(), n / (2.0 * n + 1.0), max_relative = 1e-12);
        let c = analytic_steady(&SteadyScenario::SqueezedClassical { n }).unwrap();
        assert_relative_eq!(c.rho_ss.unwrap(), n / (3.0 * n + 1.0));
        let full = analytic_steady(&SteadyScenario::SqueezedDicke { n, m: n }).unwrap();
        assert_relative_eq!(full.rho_ss.unwrap(), c.rho_ss.unwrap(), max_relative = 1e-12);
        assert_relative_eq!(full.rho_ee.unwrap(), c.rho_ee.unwrap(), max_relative = 1e-12);
    }
}

#[test]
fn squeezed_dicke_against_engine() {
    for (n, m, phase) in [(0.3, 0.4, 0.0), (1.0, 1.2, 0.7), (2.0, 1.0, 0.0)] {
        let rho = steady_state(&build_squeezed(&AtomPairConfig::dicke(), &SqueezedReservoir::ideal(n, m, phase)).unwrap()).unwrap().rho;
        let r = analytic_steady(&SteadyScenario::SqueezedDicke { n, m }).unwrap();
        assert!((pop(&rho, Collective::E) - r.rho_ee.unwrap()).abs() < 1e-10);
        assert!((pop(&rho, Collective::S) - r.rho_ss.unwrap()).abs() < 1e-10);
        assert!((pop(&rho, Collective::G) - r.rho_gg.unwrap()).abs() < 1e-10);
    }
}

#[test]
fn squeezed_populations_complete_to_one() {
    for n in [0.0, 0.2, 1.0, 3.0] {
        for frac in [0.0, 0.5, 1.0] {
            let m = frac * (n * (n + 1.0f64)).sqrt();
            for a in [0.0, 0.3, 0.9] {
                let r = analytic_steady(&SteadyScenario::SqueezedSeparated { n, m, a }).unwrap();
                let sum = r.rho_gg.unwrap() + r.rho_ee.unwrap() + r.rho_ss.unwrap() + r.rho_aa.unwrap();
                assert_relative_eq!(sum, 1.0, epsilon = 1e-14);
                let s = analytic_steady(&SteadyScenario::SqueezedSecular { n, m, a }).unwrap();
                assert_eq!(s.rho_ss, s.rho_aa);
            }
        }
    }
}

#[test]
fn driven_populations_against_engine() {
    for (g12, o12, rabi, dl) in [(0.5, 1.0, 0.8, 0.0), (0.9, -2.0, 2.0, 0.5), (0.2, 3.0, 1.5, 3.0)] {
        let pair = AtomPairConfig::explicit(g12, o12);
        let rho = steady_state(&build_vacuum_drive(&pair, &DriveField::perpendicular(rabi, dl)).unwrap()).unwrap().rho;
        let r = analytic_steady(&SteadyScenario::Driven { gamma: 1.0, gamma12: g12, omega12: o12, rabi, detuning: dl }).unwrap();
        assert!((pop(&rho, Collective::E) - r.rho_ee.unwrap()).abs() < 1e-10);
        assert!((pop(&rho, Collective::S) - r.rho_ss.unwrap()).abs() < 1e-10);
        assert!((pop(&rho, Collective::A) - r.rho_aa.unwrap()).abs() < 1e-10);
        use Collective::*;
        let m = rho.matrix();
        assert!((collective_element(m, E, S).norm() - r.rho_es.unwrap().norm()).abs() < 1e-10);
        assert!((collective_element(m, S, G).norm() - r.rho_sg.unwrap().norm()).abs() < 1e-10);
        assert!((collective_element(m, E, G).norm() - r.rho_eg.unwrap().norm()).abs() < 1e-10);
    }
}

#[test]
fn intensity_formulas_at_special_points() {
    let (g, g12, o12, d) = (1.0, 0.4, 20.0, 0.5);
    let i0 = analytic_intensity(&IntensityScenario::BeatsDetuned { gamma: g, gamma12: g12, omega12: o12, delta: d }, 0.0);
    assert_relative_eq!(i0, g + d * g12 / (2.0 * o12), epsilon = 1e-15);
    let eq = IntensityScenario::BeatsRates { gamma1: 1.0, gamma2: 1.0, gamma12: g12, omega12: o12 };
    let no_beats = IntensityScenario::BeatsRates { gamma1: 1.0, gamma2: 1.0, gamma12: g12, omega12: 2.0 * o12 };
    for t in [0.1, 0.7, 2.0] {
        assert_relative_eq!(analytic_intensity(&eq, t), analytic_intensity(&no_beats, t), epsilon = 1e-15);
    }
    let prep = IntensityScenario::SymmetricPreparation { rabi: 3.0 };
    assert_relative_eq!(analytic_intensity(&prep, PI / (2f64.sqrt() * 3.0)), 1.0, epsilon = 1e-15);
}

#[test]
fn beats_with_unequal_rates_against_engine() {
    // Δ = 0, Ω₁₂ ≫ Γᵢ, atom 1 excited
    let (g1, g2, g12, o12) = (1.0, 0.6, 0.3, 40.0);
    let pair = AtomPairConfig::explicit(g12, o12).with_rates(g1, g2);
    let l = build_vacuum_drive(&pair, &DriveField::off()).unwrap();
    let ts: Vec<f64> = (0..60).map(|i| 0.05 * i as f64).collect();
    let ev = evolve(&l, &DensityMatrix4::basis(twoatom::linalg::EG), &ts, &EvolveOptions::default()).unwrap();
    let s = IntensityScenario::BeatsRates { gamma1: g1, gamma2: g2, gamma12: g12, omega12: o12 };
    assert!(s.warnings().is_empty());
    for (t, rho) in ev.times.iter().zip(&ev.states) {
        let i = twoatom::observables::total_intensity(rho, &pair);
        assert!((i - analytic_intensity(&s, *t)).abs() < 0.03, "t {t}");
    }
}

#[test]
fn singly_excited_intensity() {
    let s = IntensityScenario::SinglyExcited { gamma: 1.0, gamma12: 0.6 };
    assert_relative_eq!(analytic_intensity(&s, 0.0), 1.0, epsilon = 1e-15);
    let t: f64 = 1.3;
    let expect = 0.5 * 1.6 * (-1.6 * t).exp() + 0.5 * 0.4 * (-0.4 * t).exp();
    assert_relative_eq!(analytic_intensity(&s, t), expect, epsilon = 1e-15);
}

#[test]
fn dicke_g2_limits() {
    let s = G2Scenario::DickeStrong { gamma: 1.0, rabi: 100.0 };
    assert_relative_eq!(analytic_g2(&s, 0.0), 0.75, epsilon = 1e-15);
    assert_relative_eq!(analytic_g2(&s, 200.0), 1.0, epsilon = 1e-12);
    assert!(G2Scenario::DickeStrong { gamma: 1.0, rabi: 2.0 }.warnings().len() == 1);
}

#[test]
fn weak_drive_substitution() {
    let g = analytic_g2(&G2Scenario::WeakDrive { gamma: 1.0, gamma12: 0.5, detuning: 7.5 }, 0.0);
    assert_relative_eq!(g, 0.01, epsilon = 1e-15);
}

#[test]
fn transient_variances() {
    let ip = VarianceScenario::DickeInPhase { gamma: 1.0, rabi: 100.0 };
    let quad = VarianceScenario::DickeQuadrature { gamma: 1.0, rabi: 100.0 };
    assert!(analytic_variance(&ip, 0.0).abs() < 1e-15);
    assert!(analytic_variance(&quad, 0.0).abs() < 1e-15);
    let mut min = f64::INFINITY;
    for k in 1..20000 {
        let t = k as f64 * 5e-4;
        assert!(analytic_variance(&quad, t) >= -1e-12, "t {t}");
        min = min.min(analytic_variance(&ip, t));
    }
    assert!((min + 1.0 / 16.0).abs() < 0.01);
}

#[test]
fn two_photon_variance_substitution() {
    let s = VarianceScenario::TwoPhoton { gamma: 1.0, omega12: 500.0, rabi: 20.0, detuning: 0.0 };
    assert_eq!(analytic_variance(&s, 0.0), 0.0);
    assert!(s.warnings().is_empty());
    assert!(!VarianceScenario::TwoPhoton { gamma: 1.0, omega12: 50.0, rabi: 20.0, detuning: 0.0 }.warnings().is_empty());
}

#[test]
fn visibility_formulas() {
    let v = |rabi| analytic_visibility(&VisibilityScenario::Driven { gamma: 1.0, rabi, detuning: 0.0 });
    assert_relative_eq!(v(1e-6), 1.0, epsilon = 1e-10);
    assert_relative_eq!(v(1.0), 1.0 / 3.0, epsilon = 1e-15);
    let n = 1e4;
    let sq = analytic_visibility(&VisibilityScenario::Squeezed { n, m: (n * (n + 1.0)).sqrt(), a: 1.0 });
    assert!((sq + 0.5).abs() < 1e-3);
}

#[test]
fn squeezed_visibility_against_engine() {
    let (n, a) = (0.5, 0.8);
    let m = (n * (n + 1.0f64)).sqrt();
    let pair = AtomPairConfig::explicit(a, 0.0);
    let rho = steady_state(&build_squeezed(&pair, &SqueezedReservoir::ideal(n, m, 0.0)).unwrap()).unwrap().rho;
    let got = twoatom::observables::visibility(&rho).unwrap();
    assert_relative_eq!(got, analytic_visibility(&VisibilityScenario::Squeezed { n, m, a }), max_relative = 1e-8);
}

#[test]
fn dicke_squeezed_state_is_two_photon_entangled() {
    let (n, phase) = (0.8, 0.4);
    let res = SqueezedReservoir::ideal(n, (n * (n + 1.0f64)).sqrt(), phase);
    let rho = steady_state(&build_squeezed(&AtomPairConfig::dicke(), &res).unwrap()).unwrap().rho;
    let d = entangled_eigenstates(&rho);
    assert!(d.block_structured && d.warnings.is_empty());
    assert!(d.populations[1].abs() < 1e-10 && d.populations[2].abs() < 1e-10);
    assert_relative_eq!(d.populations[0], 1.0, epsilon = 1e-10);
    let overlap = (d.states[0].adjoint() * tpe_state(n, phase))[(0, 0)].norm();
    assert_relative_eq!(overlap, 1.0, epsilon = 1e-10);
    assert!(annihilation_residual(&tpe_state(n, phase), n, phase) < 1e-12);
}

#[test]
fn vacuum_reservoir_gives_ground() {
    let rho = steady_state(&build_squeezed(&AtomPairConfig::dicke(), &SqueezedReservoir::vacuum()).unwrap()).unwrap().rho;
    let d = entangled_eigenstates(&rho);
    assert!((d.states[0] - collective_ket(Collective::G)).norm() < 1e-10);
}

#[test]
fn separated_atoms_mix_two_entangled_states() {
    let n = 0.5;
    let res = SqueezedReservoir::ideal(n, (n * (n + 1.0f64)).sqrt(), 0.0);
    let pair = AtomPairConfig::explicit(0.9, 0.0);
    let rho = steady_state(&build_squeezed(&pair, &res).unwrap()).unwrap().rho;
    let d = entangled_eigenstates(&rho);
    assert!(d.populations[1] < 5e-3 && d.populations[2] < 5e-3);
    assert!(d.populations[0] > 0.5 && d.populations[3] > 0.01);
    assert_relative_eq!(d.populations.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
}

#[test]
fn mixed_block_falls_back_with_warning() {
    let psi = (collective_ket(Collective::G) + collective_ket(Collective::S)) / twoatom::linalg::re(2f64.sqrt());
    let d = entangled_eigenstates(&DensityMatrix4::pure(&psi).unwrap());
    assert!(!d.block_structured);
    assert_eq!(d.warnings.len(), 1);
    assert_relative_eq!(d.populations[0], 1.0, epsilon = 1e-12);
}

#[test]
fn mapped_variance_ratio() {
    let (inc, emit) = mapped_variances(0.5, 0.75f64.sqrt());
    assert_relative_eq!(emit / inc, 0.5);
    let (inc, emit) = mapped_variances(1e-4, (1e-4f64 * (1.0 + 1e-4)).sqrt());
    assert!((emit / inc - 1.0).abs() < 1e-3);
    assert!(check_squeezing(1.0, 2.0).is_err());
    assert!(check_squeezing(-0.1, 0.0).is_err());
    assert!(check_squeezing(1.0, 2f64.sqrt()).is_ok());
}

#[test]
fn oracles_are_finite_on_their_domains() {
    for i in 0..=20 {
        let x = 0.05 + 0.5 * i as f64;
        let recs = [
            SteadyScenario::Extended { gamma: 1.0, gamma12: 0.5, omega12: x, rabi: x },
            SteadyScenario::Dicke { gamma: 1.0, rabi: x },
            SteadyScenario::Driven { gamma: 1.0, gamma12: 0.3, omega12: x, rabi: 1.0, detuning: x - 3.0 },
            SteadyScenario::SqueezedDicke { n: x, m: 0.5 * x },
            SteadyScenario::SqueezedClassical { n: x },
            SteadyScenario::SqueezedQuantum { n: x },
            SteadyScenario::SqueezedSeparated { n: x, m: x, a: 0.5 },
            SteadyScenario::SqueezedSecular { n: x, m: x, a: 0.5 },
        ];
        for s in recs {
            let r = analytic_steady(&s).unwrap();
            for v in [r.rho_gg, r.rho_ee, r.rho_ss, r.rho_aa, r.rho_u, r.s11, r.s12].into_iter().flatten() {
                assert!(v.is_finite(), "{s:?}");
            }
        }
        let g = G2Scenario::Steady { gamma: 1.0, gamma12: 0.4, omega12: x, rabi: x, detuning: 0.0, phase1: 0.3, phase2: FRAC_PI_2 };
        assert!(analytic_g2(&g, 0.0).is_finite());
        let t = G2Scenario::Nonidentical { gamma1: 1.0, gamma2: x, delta: x, phase1: 0.0, phase2: 1.0, t: x };
        assert!(analytic_g2(&t, x).is_finite());
        assert!(analytic_intensity(&IntensityScenario::BeatsDetuned { gamma: 1.0, gamma12: 0.9, omega12: 50.0, delta: x }, x).is_finite());
    }
}

#[test]
fn warnings_flag_validity() {
    assert!(!IntensityScenario::BeatsDetuned { gamma: 1.0, gamma12: 0.5, omega12: 1.0, delta: 1.0 }.warnings().is_empty());
    assert!(IntensityScenario::BeatsDetuned { gamma: 1.0, gamma12: 0.5, omega12: 100.0, delta: 1.0 }.warnings().is_empty());
    assert!(!SteadyScenario::SqueezedDicke { n: 1.0, m: 2.0 }.warnings().is_empty());
    assert!(!SteadyScenario::SqueezedSeparated { n: 1.0, m: 1.0, a: 1.5 }.warnings().is_empty());
    assert!(!G2Scenario::WeakDrive { gamma: 1.0, gamma12: 0.5, detuning: 2.0 }.warnings().is_empty());
}
