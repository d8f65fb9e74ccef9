//! Geometry-dependent couplings: collective damping Γ₁₂, dipole-dipole shift Ω₁₂,
//! position-resolved Rabi frequencies and effective squeezing parameters.
//!
//! Units: rates in Γ₁, distances in wavelengths, k₀r = 2π·separation.
//! The atoms sit at x₁ = −r/2 and x₂ = +r/2 on the interatomic axis.

use crate::error::{Error, Result};
use crate::linalg::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// How Γ₁₂ and Ω₁₂ are obtained for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Coupling {
    /// From separation and dipole orientation.
    Geometric,
    /// Small-sample limit: Γ₁₂ = √(Γ₁Γ₂), Ω₁₂ = 0, both atoms at the origin.
    Dicke,
    /// Supplied directly; positions still follow `separation`.
    Explicit { gamma12: f64, omega12: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomPairConfig {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Half splitting Δ = (ω₂ − ω₁)/2.
    pub delta: f64,
    /// r₁₂ / λ.
    pub separation: f64,
    /// Angle between μ̂ and r̂₁₂.
    pub dipole_angle: f64,
    pub coupling: Coupling,
}

impl AtomPairConfig {
    /// Identical atoms (Γ₁ = Γ₂ = 1, Δ = 0) with geometric couplings.
    pub fn identical(separation: f64, dipole_angle: f64) -> Self {
        AtomPairConfig { gamma1: 1.0, gamma2: 1.0, delta: 0.0, separation, dipole_angle, coupling: Coupling::Geometric }
    }

    /// Identical atoms in the small-sample (Dicke) limit.
    pub fn dicke() -> Self {
        AtomPairConfig { gamma1: 1.0, gamma2: 1.0, delta: 0.0, separation: 0.0, dipole_angle: FRAC_PI_2, coupling: Coupling::Dicke }
    }

    /// Identical atoms with Γ₁₂, Ω₁₂ given directly.
    pub fn explicit(gamma12: f64, omega12: f64) -> Self {
        AtomPairConfig {
            gamma1: 1.0,
            gamma2: 1.0,
            delta: 0.0,
            separation: 0.0,
            dipole_angle: FRAC_PI_2,
            coupling: Coupling::Explicit { gamma12, omega12 },
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_rates(mut self, gamma1: f64, gamma2: f64) -> Self {
        self.gamma1 = gamma1;
        self.gamma2 = gamma2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma1, self.gamma2, self.delta, self.separation, self.dipole_angle];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invariant("pair parameters must be finite".into()));
        }
        if !(self.gamma1 > 0.0) {
            return Err(Error::Invariant("gamma1 > 0".into()));
        }
        if !(self.gamma2 > 0.0) {
            return Err(Error::Invariant("gamma2 > 0".into()));
        }
        if self.separation < 0.0 {
            return Err(Error::Invariant("separation >= 0".into()));
        }
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&self.dipole_angle) {
            return Err(Error::Invariant("dipole_angle in [0, pi/2]".into()));
        }
        if let Coupling::Explicit { gamma12, omega12 } = self.coupling {
            if !gamma12.is_finite() || !omega12.is_finite() {
                return Err(Error::Invariant("explicit couplings must be finite".into()));
            }
            if gamma12 * gamma12 > self.gamma1 * self.gamma2 * (1.0 + 1e-12) {
                return Err(Error::Invariant("gamma12^2 <= gamma1*gamma2".into()));
            }
        }
        Ok(())
    }

    /// Positions x₁, x₂ in wavelengths along the interatomic axis.
    pub fn positions(&self) -> (f64, f64) {
        match self.coupling {
            Coupling::Dicke => (0.0, 0.0),
            _ => (-0.5 * self.separation, 0.5 * self.separation),
        }
    }

    /// (Γ₁₂, Ω₁₂) for use in generators. Ω₁₂ is an error only for a geometric pair at r = 0.
    pub fn couplings(&self) -> Result<(f64, f64)> {
        Ok((collective_damping(self), dipole_dipole_shift(self)?))
    }

    /// Damping matrix [[Γ₁, Γ₁₂], [Γ₁₂, Γ₂]].
    pub fn damping_matrix(&self) -> [[f64; 2]; 2] {
        let g12 = collective_damping(self);
        [[self.gamma1, g12], [g12, self.gamma2]]
    }
}

/// Eq. 33 radiation-pattern factor F(x) with x = k₀r, p = μ̂·r̂.
pub fn damping_factor(x: f64, p: f64) -> f64 {
    let a = 1.0 - p * p;
    let b = 1.0 - 3.0 * p * p;
    if x.abs() < 1e-3 {
        // series: sin x/x = 1 − x²/6 + x⁴/120, cos x/x² − sin x/x³ = −1/3 + x²/30 − x⁴/840
        let x2 = x * x;
        let s0 = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
        let s1 = -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0;
        return 1.5 * (a * s0 + b * s1);
    }
    let (s, c) = x.sin_cos();
    1.5 * (a * s / x + b * (c / (x * x) - s / (x * x * x)))
}

/// Dipole-dipole shift factor G(x) with Ω₁₂ = √(Γ₁Γ₂)·G(k₀r).
pub fn shift_factor(x: f64, p: f64) -> f64 {
    let a = 1.0 - p * p;
    let b = 1.0 - 3.0 * p * p;
    let (s, c) = x.sin_cos();
    0.75 * (-a * c / x + b * (s / (x * x) + c / (x * x * x)))
}

/// Collective damping Γ₁₂.
pub fn collective_damping(pair: &AtomPairConfig) -> f64 {
    let g = (pair.gamma1 * pair.gamma2).sqrt();
    match pair.coupling {
        Coupling::Dicke => g,
        Coupling::Explicit { gamma12, .. } => gamma12,
        Coupling::Geometric => {
            if pair.separation == 0.0 {
                g
            } else {
                g * damping_factor(2.0 * PI * pair.separation, pair.dipole_angle.cos())
            }
        }
    }
}

/// Dipole-dipole shift Ω₁₂. Diverges for a geometric pair at zero separation.
pub fn dipole_dipole_shift(pair: &AtomPairConfig) -> Result<f64> {
    match pair.coupling {
        Coupling::Dicke => Ok(0.0),
        Coupling::Explicit { omega12, .. } => Ok(omega12),
        Coupling::Geometric => {
            if pair.separation == 0.0 {
                return Err(Error::Domain("dipole-dipole shift diverges at zero separation".into()));
            }
            let g = (pair.gamma1 * pair.gamma2).sqrt();
            Ok(g * shift_factor(2.0 * PI * pair.separation, pair.dipole_angle.cos()))
        }
    }
}

/// Quasistatic near-field limit 3(1 − 3p²)/(4x³) of the shift factor.
pub fn quasistatic_shift(pair: &AtomPairConfig) -> f64 {
    let x = 2.0 * PI * pair.separation;
    let p = pair.dipole_angle.cos();
    (pair.gamma1 * pair.gamma2).sqrt() * 0.75 * (1.0 - 3.0 * p * p) / (x * x * x)
}

/// Complex coefficient C₁₂ = Γ₁₂ + 2iΩ₁₂ of the conditional Hamiltonian.
pub fn c_coefficient(pair: &AtomPairConfig) -> Result<C64> {
    let (g, o) = pair.couplings()?;
    Ok(C64::new(g, 2.0 * o))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveType {
    Running,
    Standing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveField {
    /// Maximum Rabi frequency Ω.
    pub rabi: f64,
    /// Δ_L = ω_L − ω₀.
    pub detuning: f64,
    /// Angle between k_L and r̂₁₂.
    pub propagation_angle: f64,
    pub wave_type: WaveType,
    /// Laser phase φ_L. For a standing wave it shifts the node pattern.
    pub phase: f64,
}

impl DriveField {
    /// Running wave propagating perpendicular to the axis: Ω₁ = Ω₂ = Ω.
    pub fn perpendicular(rabi: f64, detuning: f64) -> Self {
        DriveField { rabi, detuning, propagation_angle: FRAC_PI_2, wave_type: WaveType::Running, phase: 0.0 }
    }

    pub fn off() -> Self {
        Self::perpendicular(0.0, 0.0)
    }

    /// Standing wave along the axis with a node between the atoms, so Ω₁ = −Ω₂.
    pub fn antisymmetric_standing(rabi: f64, detuning: f64) -> Self {
        DriveField { rabi, detuning, propagation_angle: 0.0, wave_type: WaveType::Standing, phase: -FRAC_PI_2 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi >= 0.0) || !self.rabi.is_finite() {
            return Err(Error::Invariant("rabi >= 0".into()));
        }
        if !self.detuning.is_finite() || !self.propagation_angle.is_finite() || !self.phase.is_finite() {
            return Err(Error::Invariant("drive parameters must be finite".into()));
        }
        Ok(())
    }
}

/// Rabi frequencies (Ω₁, Ω₂) at the atom positions.
pub fn rabi_at_atoms(drive: &DriveField, pair: &AtomPairConfig) -> (C64, C64) {
    let (x1, x2) = pair.positions();
    let kc = 2.0 * PI * drive.propagation_angle.cos();
    let at = |x: f64| -> C64 {
        // k·r is exactly zero when the field is perpendicular to the axis
        let kr = if drive.propagation_angle == FRAC_PI_2 { 0.0 } else { kc * x };
        match drive.wave_type {
            WaveType::Running => C64::from_polar(drive.rabi, kr + drive.phase),
            WaveType::Standing => C64::new(drive.rabi * (kr + drive.phase).cos(), 0.0),
        }
    };
    (at(x1), at(x2))
}

/// k_L·r₁₂ for the drive and pair geometry.
pub fn drive_phase_difference(drive: &DriveField, pair: &AtomPairConfig) -> f64 {
    let (x1, x2) = pair.positions();
    if drive.propagation_angle == FRAC_PI_2 {
        return 0.0;
    }
    2.0 * PI * drive.propagation_angle.cos() * (x2 - x1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedReservoir {
    pub n_photons: f64,
    pub m_magnitude: f64,
    pub squeeze_phase: f64,
    /// |D(ω_s)|².
    pub matching: f64,
    /// Solid-angle parameter θ_s.
    pub solid_angle: f64,
    /// ω_s − ω₀.
    pub carrier_offset: f64,
}

impl SqueezedReservoir {
    /// Perfectly matched reservoir (|D|² = 1, θ_s = π) on the atomic carrier.
    pub fn ideal(n: f64, m: f64, phase: f64) -> Self {
        SqueezedReservoir { n_photons: n, m_magnitude: m, squeeze_phase: phase, matching: 1.0, solid_angle: PI, carrier_offset: 0.0 }
    }

    /// Ideal reservoir with maximal quantum correlations |M|² = N(N+1).
    pub fn quantum(n: f64) -> Self {
        Self::ideal(n, (n * (n + 1.0)).sqrt(), 0.0)
    }

    pub fn vacuum() -> Self {
        Self::ideal(0.0, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.n_photons, self.m_magnitude, self.squeeze_phase, self.matching, self.solid_angle, self.carrier_offset];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invariant("reservoir parameters must be finite".into()));
        }
        if self.n_photons < 0.0 {
            return Err(Error::Invariant("n_photons >= 0".into()));
        }
        if self.m_magnitude < 0.0 {
            return Err(Error::Invariant("m_magnitude >= 0".into()));
        }
        if classify_squeezing(self.n_photons, self.m_magnitude) == SqueezingClass::Invalid {
            return Err(Error::Invariant("m_magnitude^2 <= n_photons*(n_photons+1)".into()));
        }
        if !(0.0..=1.0).contains(&self.matching) {
            return Err(Error::Invariant("0 <= matching <= 1".into()));
        }
        if !(self.solid_angle > 0.0 && self.solid_angle <= PI + 1e-12) {
            return Err(Error::Invariant("solid_angle in (0, pi]".into()));
        }
        Ok(())
    }
}

/// Solid-angle weight v(θ) = ½[1 − ¼(3 + cos²θ)cos θ].
pub fn solid_angle_factor(theta: f64) -> f64 {
    let c = theta.cos();
    0.5 * (1.0 - 0.25 * (3.0 + c * c) * c)
}

/// (Ñ, |M̃|) seen by the atoms.
pub fn effective_squeezing(res: &SqueezedReservoir) -> (f64, f64) {
    let w = res.matching * solid_angle_factor(res.solid_angle);
    (res.n_photons * w, res.m_magnitude * w)
}

/// Gaussian mode-matching |D|² = exp(−2 W₀ sin²θ_k). The phase k z_f cos θ_k drops out of the modulus.
pub fn gaussian_matching(w0: f64, _z_f: f64, theta_k: f64) -> f64 {
    let s = theta_k.sin();
    (-2.0 * w0 * s * s).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SqueezingClass {
    Vacuum,
    Classical,
    Quantum,
    Invalid,
}

/// Classify (N, |M|) against the bound |M|² ≤ N(N+1).
pub fn classify_squeezing(n: f64, m: f64) -> SqueezingClass {
    if n == 0.0 && m == 0.0 {
        return SqueezingClass::Vacuum;
    }
    let bound = (n * (n + 1.0)).sqrt();
    let tol = 1e-12 * (1.0 + bound);
    if m <= n {
        SqueezingClass::Classical
    } else if m <= bound + tol {
        SqueezingClass::Quantum
    } else {
        SqueezingClass::Invalid
    }
}
