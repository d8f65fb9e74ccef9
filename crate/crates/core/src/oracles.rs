//! Closed-form results transcribed as directly evaluable functions.
//!
//! Each scenario carries the parameters of one formula. `warnings()` reports
//! violations of the formula's validity conditions; it never blocks evaluation.

use crate::collective_basis::{collective_element, collective_ket, Collective};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, lowering, raising, re, Vec4, C64, I};
use crate::liouvillian::DensityMatrix4;

/// Stationary values; fields a formula does not provide stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SteadyRecord {
    pub rho_gg: Option<f64>,
    pub rho_ee: Option<f64>,
    pub rho_ss: Option<f64>,
    pub rho_aa: Option<f64>,
    /// ρ_eg e^{−iφ_s} + ρ_ge e^{iφ_s}.
    pub rho_u: Option<f64>,
    pub rho_es: Option<C64>,
    pub rho_sg: Option<C64>,
    pub rho_eg: Option<C64>,
    /// ⟨S₁⁺S₁⁻⟩ = ⟨S₂⁺S₂⁻⟩.
    pub s11: Option<f64>,
    /// ⟨S₁⁺S₂⁻⟩ = ⟨S₂⁺S₁⁻⟩.
    pub s12: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyScenario {
    /// Extended identical atoms, k_L·r₁₂ = 0, resonant drive.
    Extended { gamma: f64, gamma12: f64, omega12: f64, rabi: f64 },
    /// Two-atom Dicke model, resonant drive.
    Dicke { gamma: f64, rabi: f64 },
    /// Collective-basis populations and coherences, identical atoms, k_L·r₁₂ = 0.
    Driven { gamma: f64, gamma12: f64, omega12: f64, rabi: f64, detuning: f64 },
    /// Squeezed vacuum, Dicke limit.
    SqueezedDicke { n: f64, m: f64 },
    /// Squeezed vacuum, Dicke limit, classical correlations |M| = N.
    SqueezedClassical { n: f64 },
    /// Squeezed vacuum, Dicke limit, quantum correlations |M|² = N(N+1).
    SqueezedQuantum { n: f64 },
    /// Squeezed vacuum, identical atoms at a = Γ₁₂/Γ.
    SqueezedSeparated { n: f64, m: f64, a: f64 },
    /// Squeezed vacuum, nonidentical atoms, secular limit.
    SqueezedSecular { n: f64, m: f64, a: f64 },
}

impl SteadyScenario {
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let bound = |n: f64, m: f64, w: &mut Vec<String>| {
            if m * m > n * (n + 1.0) * (1.0 + 1e-12) {
                w.push("squeezing bound |M|^2 <= N(N+1) violated".into());
            }
        };
        match *self {
            SteadyScenario::SqueezedDicke { n, m } => bound(n, m, &mut w),
            SteadyScenario::SqueezedSeparated { n, m, a } | SteadyScenario::SqueezedSecular { n, m, a } => {
                bound(n, m, &mut w);
                if !(0.0..=1.0).contains(&a) {
                    w.push("a = gamma12/gamma outside [0, 1]".into());
                }
            }
            _ => {}
        }
        w
    }
}

fn complete(mut r: SteadyRecord) -> SteadyRecord {
    if let (Some(ee), Some(ss), Some(aa)) = (r.rho_ee, r.rho_ss, r.rho_aa) {
        r.rho_gg = Some(1.0 - ee - ss - aa);
    }
    r
}

pub fn analytic_steady(s: &SteadyScenario) -> Result<SteadyRecord> {
    let r = match *s {
        SteadyScenario::Extended { gamma: g, gamma12, omega12, rabi: o } => {
            let o2 = o * o;
            let d = o2 * o2 + (o2 + omega12 * omega12) * g * g + 0.25 * g * g * (g + gamma12).powi(2);
            SteadyRecord {
                s11: Some((2.0 * o2 * o2 + g * g * o2) / (4.0 * d)),
                s12: Some(g * g * o2 / (4.0 * d)),
                ..Default::default()
            }
        }
        SteadyScenario::Dicke { gamma: g, rabi: o } => {
            let o2 = o * o;
            let d = 3.0 * o2 * o2 + 4.0 * g * g * o2 + 4.0 * g.powi(4);
            SteadyRecord {
                s11: Some((3.0 * o2 * o2 + 2.0 * o2 * g * g) / (2.0 * d)),
                s12: Some((o2 * o2 + 2.0 * o2 * g * g) / (2.0 * d)),
                ..Default::default()
            }
        }
        SteadyScenario::Driven { gamma: g, gamma12, omega12, rabi, detuning: dl } => {
            // Coherences follow the drive convention −½(ΩS⁺ + h.c.); see the tests for the
            // relation to the alternative ground-state phase.
            let w = rabi / 2f64.sqrt();
            let w2 = w * w;
            let q = g * g + 4.0 * dl * dl;
            let x = C64::new(0.5 * (g + gamma12), dl - omega12);
            let z = 4.0 * w2 * w2 + q * (2.0 * w2 + 0.25 * (g + gamma12).powi(2) + (dl - omega12).powi(2));
            let gl = C64::new(g, 2.0 * dl);
            SteadyRecord {
                rho_ee: Some(w2 * w2 / z),
                rho_aa: Some(w2 * w2 / z),
                rho_ss: Some((w2 * q + w2 * w2) / z),
                rho_es: Some(I * w2 * w * gl / z),
                rho_sg: Some(I * w * (gl * w2 + x * q) / z),
                rho_eg: Some(-(gl * x) * w2 / z),
                ..Default::default()
            }
        }
        SteadyScenario::SqueezedDicke { n, m } => squeezed_dicke(n, m),
        SteadyScenario::SqueezedClassical { n } => SteadyRecord {
            rho_ss: Some(n / (3.0 * n + 1.0)),
            rho_ee: Some(2.0 * n * n / ((2.0 * n + 1.0) * (3.0 * n + 1.0))),
            ..Default::default()
        },
        SteadyScenario::SqueezedQuantum { n } => SteadyRecord {
            rho_ss: Some(0.0),
            rho_ee: Some(n / (2.0 * n + 1.0)),
            ..Default::default()
        },
        SteadyScenario::SqueezedSeparated { n, m, a } => {
            let m2 = m * m;
            let k = 2.0 * n + 1.0;
            let big_g = k * k * (k.powi(4) + 4.0 * m2 * (a * a - k * k));
            SteadyRecord {
                rho_ee: Some(n * n / (k * k) + a * a * m2 * (4.0 * n + 1.0) / big_g),
                rho_ss: Some(n * (n + 1.0) / (k * k) - a * m2 * (2.0 * k * k - a) / big_g),
                rho_aa: Some(n * (n + 1.0) / (k * k) + a * m2 * (2.0 * k * k + a) / big_g),
                rho_u: Some(2.0 * a * k.powi(3) * m / big_g),
                ..Default::default()
            }
        }
        SteadyScenario::SqueezedSecular { n, m, a } => {
            let k = 2.0 * n + 1.0;
            let den = k * k - 4.0 * a * a * m * m;
            SteadyRecord {
                rho_ee: Some(0.25 * ((2.0 * n - 1.0) / k + 1.0 / den)),
                rho_ss: Some(0.25 * (1.0 - 1.0 / den)),
                rho_aa: Some(0.25 * (1.0 - 1.0 / den)),
                rho_u: Some(2.0 * a * m / (k * den)),
                ..Default::default()
            }
        }
    };
    Ok(complete(r))
}

fn squeezed_dicke(n: f64, m: f64) -> SteadyRecord {
    let m2 = m * m;
    let k = 2.0 * n + 1.0;
    let den = 3.0 * n * n + 3.0 * n + 1.0 - 3.0 * m2;
    SteadyRecord {
        rho_ee: Some((n * n * k - (2.0 * n - 1.0) * m2) / (k * den)),
        rho_ss: Some((n * (n + 1.0) - m2) / den),
        rho_aa: Some(0.0),
        rho_u: Some(2.0 * m / (k * den)),
        ..Default::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntensityScenario {
    /// Quantum beats, Γ₁ = Γ₂ = Γ, Ω₁₂ ≫ Δ, atom 1 initially excited.
    BeatsDetuned { gamma: f64, gamma12: f64, omega12: f64, delta: f64 },
    /// Quantum beats, Δ = 0, Γ₁ ≠ Γ₂, Ω₁₂ ≫ Γ_i.
    BeatsRates { gamma1: f64, gamma2: f64, gamma12: f64, omega12: f64 },
    /// Free decay from ρ_ss(0) = ρ_aa(0) = ½, identical atoms; total intensity.
    SinglyExcited { gamma: f64, gamma12: f64 },
    /// Population of |s⟩ under resonant in-phase driving (two-state truncation).
    SymmetricPreparation { rabi: f64 },
}

impl IntensityScenario {
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        match *self {
            IntensityScenario::BeatsDetuned { omega12, delta, .. } => {
                if omega12.abs() < 10.0 * delta.abs() {
                    w.push(format!("requires omega12 >> delta (ratio {:.2})", (omega12 / delta).abs()));
                }
            }
            IntensityScenario::BeatsRates { gamma1, gamma2, omega12, .. } => {
                if omega12.abs() < 10.0 * gamma1.max(gamma2) {
                    w.push("requires omega12 >> gamma_i".into());
                }
            }
            _ => {}
        }
        w
    }
}

pub fn analytic_intensity(s: &IntensityScenario, t: f64) -> f64 {
    match *s {
        IntensityScenario::BeatsDetuned { gamma, gamma12, omega12, delta } => {
            let w = omega12.hypot(delta);
            (-gamma * t).exp()
                * (delta / (2.0 * omega12) * gamma12 * (2.0 * w * t).cos() + gamma * (gamma12 * t).cosh()
                    - gamma12 * (gamma12 * t).sinh())
        }
        IntensityScenario::BeatsRates { gamma1, gamma2, gamma12, omega12 } => {
            (-0.5 * (gamma1 + gamma2) * t).exp()
                * (0.5 * (gamma1 - gamma2) * (2.0 * omega12 * t).cos() + 0.5 * (gamma1 + gamma2) * (gamma12 * t).cosh()
                    - gamma12 * (gamma12 * t).sinh())
        }
        IntensityScenario::SinglyExcited { gamma, gamma12 } => {
            let (ss, aa) = singly_excited_populations(gamma, gamma12, t);
            (gamma + gamma12) * ss + (gamma - gamma12) * aa
        }
        IntensityScenario::SymmetricPreparation { rabi } => (rabi * t / 2f64.sqrt()).sin().powi(2),
    }
}

/// (ρ_ss(t), ρ_aa(t)) for free decay from ρ_ss(0) = ρ_aa(0) = ½.
pub fn singly_excited_populations(gamma: f64, gamma12: f64, t: f64) -> (f64, f64) {
    (0.5 * (-(gamma + gamma12) * t).exp(), 0.5 * (-(gamma - gamma12) * t).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum G2Scenario {
    /// Strong-field two-atom Dicke model, Γ = 1 units of the given gamma.
    DickeStrong { gamma: f64, rabi: f64 },
    /// Steady state, identical atoms, k_L·r₁₂ = 0; phases kR̂ᵢ·r₁₂ at the two detectors.
    Steady { gamma: f64, gamma12: f64, omega12: f64, rabi: f64, detuning: f64, phase1: f64, phase2: f64 },
    /// Weak drive tuned to the symmetric state, single detector.
    WeakDrive { gamma: f64, gamma12: f64, detuning: f64 },
    /// Free decay from |e₁e₂⟩, identical atoms; unnormalized G² at (t, t+τ) with u = 1.
    Transient { gamma: f64, gamma12: f64, omega12: f64, phase1: f64, phase2: f64, t: f64 },
    /// Free decay from |e₁e₂⟩, independent atoms with splitting 2Δ; unnormalized, u = 1.
    Nonidentical { gamma1: f64, gamma2: f64, delta: f64, phase1: f64, phase2: f64, t: f64 },
}

impl G2Scenario {
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        match *self {
            G2Scenario::DickeStrong { gamma, rabi } if rabi < 10.0 * gamma => w.push("requires rabi >> gamma".into()),
            G2Scenario::WeakDrive { gamma, detuning, .. } if detuning.abs() < 10.0 * gamma => {
                w.push("requires detuning >> gamma and weak drive".into())
            }
            _ => {}
        }
        w
    }
}

/// (U, W) steady-state correlation ratios for k_L·r₁₂ = 0.
pub fn u_w(gamma: f64, gamma12: f64, omega12: f64, rabi: f64, detuning: f64) -> (f64, f64) {
    let q = gamma * gamma + 4.0 * detuning * detuning;
    let o2 = rabi * rabi;
    let den = q + 2.0 * o2;
    let u = (o2 * o2 + q * o2 + q * (0.25 * (gamma + gamma12).powi(2) + (detuning - omega12).powi(2))) / (den * den);
    (u, q / den)
}

pub fn analytic_g2(s: &G2Scenario, tau: f64) -> f64 {
    match *s {
        G2Scenario::DickeStrong { gamma: g, rabi: o } => {
            1.0 + (-1.5 * g * tau).exp() / 32.0 + 3.0 / 32.0 * (-2.5 * g * tau).exp() * (2.0 * o * tau).cos()
                - 3.0 / 8.0 * (-0.75 * g * tau).exp() * (o * tau).cos()
        }
        G2Scenario::Steady { gamma, gamma12, omega12, rabi, detuning, phase1, phase2 } => {
            let (u, w) = u_w(gamma, gamma12, omega12, rabi, detuning);
            2.0 * u * (1.0 + (phase1 - phase2).cos()) / ((1.0 + w * phase1.cos()) * (1.0 + w * phase2.cos()))
        }
        G2Scenario::WeakDrive { gamma, gamma12, detuning } => (gamma + gamma12).powi(2) / (4.0 * detuning * detuning),
        G2Scenario::Transient { gamma, gamma12, omega12, phase1, phase2, t } => {
            let (c1, c2) = (phase1.cos(), phase2.cos());
            0.5 * gamma * gamma
                * (-gamma * (2.0 * t + tau)).exp()
                * ((1.0 + c1 * c2) * (gamma12 * tau).cosh() - (c1 + c2) * (gamma12 * tau).sinh()
                    + phase1.sin() * phase2.sin() * (2.0 * omega12 * tau).cos())
        }
        G2Scenario::Nonidentical { gamma1, gamma2, delta, phase1, phase2, t } => {
            let g = 0.5 * (gamma1 + gamma2);
            0.5 * g * g
                * (-g * (2.0 * t + tau)).exp()
                * ((0.5 * (gamma2 - gamma1) * tau).cosh() + (phase1 - phase2 - 2.0 * delta * tau).cos())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarianceScenario {
    /// Transient F_{θ=0}(t), Dicke model from the ground state, Δ_L = 0.
    DickeInPhase { gamma: f64, rabi: f64 },
    /// Transient F_{θ=π/2}(t), same conditions.
    DickeQuadrature { gamma: f64, rabi: f64 },
    /// Steady F_α near the two-photon resonance, Ω₁₂ ≫ Ω ≫ Γ; evaluated at phase α.
    TwoPhoton { gamma: f64, omega12: f64, rabi: f64, detuning: f64 },
}

impl VarianceScenario {
    pub fn warnings(&self) -> Vec<String> {
        match *self {
            VarianceScenario::DickeInPhase { gamma, rabi } | VarianceScenario::DickeQuadrature { gamma, rabi } if rabi < 10.0 * gamma => {
                vec!["requires rabi >> gamma".into()]
            }
            VarianceScenario::TwoPhoton { gamma, omega12, rabi, .. } if !(omega12.abs() >= 10.0 * rabi && rabi >= 10.0 * gamma) => {
                vec!["requires omega12 >> rabi >> gamma".into()]
            }
            _ => Vec::new(),
        }
    }
}

/// Time `t` for the transient variances, phase α for the two-photon form.
pub fn analytic_variance(s: &VarianceScenario, t_or_alpha: f64) -> f64 {
    match *s {
        VarianceScenario::DickeInPhase { gamma: g, rabi: o } => {
            let t = t_or_alpha;
            1.0 / 3.0 - 0.125 * (-2.5 * g * t).exp() * (2.0 * o * t).cos() + (-1.5 * g * t).exp() / 24.0
                - 0.5 * (-1.5 * g * t).exp() * (o * t).sin().powi(2)
                - 0.25 * (-0.75 * g * t).exp() * (o * t).cos()
        }
        VarianceScenario::DickeQuadrature { gamma: g, rabi: o } => {
            let t = t_or_alpha;
            1.0 / 3.0 - (-1.5 * g * t).exp() / 12.0 - 0.25 * (-0.75 * g * t).exp() * (o * t).cos()
        }
        VarianceScenario::TwoPhoton { gamma, omega12, rabi, detuning } => {
            let a = t_or_alpha;
            let den = gamma * gamma + 4.0 * detuning * detuning;
            rabi * rabi / omega12 * (detuning / den * (2.0 * a).cos() + gamma / den * (2.0 * a).sin())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VisibilityScenario {
    /// Driven identical atoms, k_L·r₁₂ = 0.
    Driven { gamma: f64, rabi: f64, detuning: f64 },
    /// Squeezed vacuum, identical atoms at a = Γ₁₂/Γ.
    Squeezed { n: f64, m: f64, a: f64 },
}

pub fn analytic_visibility(s: &VisibilityScenario) -> f64 {
    match *s {
        VisibilityScenario::Driven { gamma, rabi, detuning } => {
            let q = gamma * gamma + 4.0 * detuning * detuning;
            q / (q + 2.0 * rabi * rabi)
        }
        VisibilityScenario::Squeezed { n, m, a } => {
            let m2 = m * m;
            let k = 2.0 * n + 1.0;
            -2.0 * a * m2 / (n * k.powi(3) + 2.0 * m2 * (a * a + k - k * k))
        }
    }
}

/// Eigen-decomposition of a squeezed-vacuum steady state into |Υ₁⟩…|Υ₄⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledDecomposition {
    /// |Υ₁⟩, |Υ₂⟩ (g–e superpositions), |Υ₃⟩ = |s⟩, |Υ₄⟩ = |a⟩, in the product basis.
    pub states: [Vec4; 4],
    pub populations: [f64; 4],
    /// False when ρ couples the g–e block to |s⟩ or |a⟩; the labels then only
    /// describe the g–e block and populations come from full diagonalization.
    pub block_structured: bool,
    pub warnings: Vec<String>,
}

pub fn entangled_eigenstates(rho: &DensityMatrix4) -> EntangledDecomposition {
    use Collective::*;
    let m = rho.matrix();
    let el = |i, j| collective_element(m, i, j);
    let (gg, ee) = (el(G, G).re, el(E, E).re);
    let eg = el(E, G);
    let off = [el(G, S), el(G, A), el(E, S), el(E, A), el(S, A)];
    let structure = off.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let block_structured = structure < 1e-10;
    let root = ((gg - ee).powi(2) + 4.0 * eg.norm_sqr()).sqrt();
    let p1 = 0.5 * (gg + ee) + 0.5 * root;
    let p2 = 0.5 * (gg + ee) - 0.5 * root;
    let g = collective_ket(G);
    let e = collective_ket(E);
    let (y1, y2) = if eg.norm() < 1e-300 {
        // already diagonal: Υ₁ is the more populated of |g⟩, |e⟩
        if gg >= ee {
            (g, e)
        } else {
            (e, g)
        }
    } else {
        let a1 = g * re(p1 - ee) + e * eg;
        let a2 = g * eg.conj() + e * re(p2 - gg);
        (a1 / re(a1.norm()), a2 / re(a2.norm()))
    };
    let mut warnings = Vec::new();
    let populations = if block_structured {
        [p1, p2, el(S, S).re, el(A, A).re]
    } else {
        warnings.push(format!("state is not block structured (max coupling {structure:.3e})"));
        let ev = hermitian_eigenvalues(m);
        [ev[3], ev[2], ev[1], ev[0]]
    };
    EntangledDecomposition { states: [y1, y2, collective_ket(S), collective_ket(A)], populations, block_structured, warnings }
}

/// The pure two-photon entangled state (√(N+1)|g⟩ + e^{iφ}√N|e⟩)/√(2N+1).
pub fn tpe_state(n: f64, phase: f64) -> Vec4 {
    let k = (2.0 * n + 1.0).sqrt();
    collective_ket(Collective::G) * re((n + 1.0).sqrt() / k) + collective_ket(Collective::E) * C64::from_polar(n.sqrt() / k, phase)
}

/// ‖(μS⁻ + νS⁺)ψ‖ with μ = √(N+1), ν = −e^{iφ}√N.
pub fn annihilation_residual(psi: &Vec4, n: f64, phase: f64) -> f64 {
    let sm = lowering(1) + lowering(2);
    let sp = raising(1) + raising(2);
    let op = sm * re((n + 1.0).sqrt()) - sp * C64::from_polar(n.sqrt(), phase);
    (op * psi).norm()
}

/// Incident and emitted normally ordered field variances at θ = π/2 (E₀ = 1).
pub fn mapped_variances(n: f64, m: f64) -> (f64, f64) {
    (2.0 * (n - m), 2.0 * (n - m) / (2.0 * n + 1.0))
}

/// Reject clearly non-physical inputs shared by several formulas.
pub fn check_squeezing(n: f64, m: f64) -> Result<()> {
    if n < 0.0 || m < 0.0 || m * m > n * (n + 1.0) * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("invalid squeezing parameters N = {n}, M = {m}")));
    }
    Ok(())
}
