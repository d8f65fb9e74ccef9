//! Collective (entangled) bases of the two-atom system and the
//! superposition-operator decomposition of the dissipator and Hamiltonian.

use crate::coupling_geometry::{AtomPairConfig, DriveField};
use crate::error::{Error, Result};
use crate::linalg::{basis_ket, re, Mat4, Vec4, C64, EE, EG, GE, GG};
use crate::liouvillian::DensityMatrix4;
use std::f64::consts::FRAC_1_SQRT_2;

/// Labels of the collective states for identical atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collective {
    G,
    S,
    A,
    E,
}

/// |g⟩, |s⟩ = (|e₁g₂⟩ + |g₁e₂⟩)/√2, |a⟩ = (|e₁g₂⟩ − |g₁e₂⟩)/√2, |e⟩ in the product basis.
pub fn collective_ket(state: Collective) -> Vec4 {
    match state {
        Collective::G => basis_ket(GG),
        Collective::E => basis_ket(EE),
        Collective::S => (basis_ket(EG) + basis_ket(GE)) * re(FRAC_1_SQRT_2),
        Collective::A => (basis_ket(EG) - basis_ket(GE)) * re(FRAC_1_SQRT_2),
    }
}

/// ⟨i|ρ|j⟩ for collective labels.
pub fn collective_element(rho: &Mat4, i: Collective, j: Collective) -> C64 {
    (collective_ket(i).adjoint() * rho * collective_ket(j))[(0, 0)]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveBasis {
    pub alpha: f64,
    pub beta: f64,
    /// Half splitting of the intermediate levels, √(Ω₁₂² + Δ²).
    pub w: f64,
    /// (E_g, E_s′, E_a′, E_e) in the frame rotating at ω₀.
    pub energies: [f64; 4],
}

impl CollectiveBasis {
    /// Columns |g⟩, |s′⟩, |a′⟩, |e⟩ expressed in the product basis.
    pub fn unitary(&self) -> Mat4 {
        let (a, b) = (self.alpha, self.beta);
        let mut u = Mat4::zeros();
        u[(GG, 0)] = re(1.0);
        u[(EG, 1)] = re(b);
        u[(GE, 1)] = re(a);
        u[(EG, 2)] = re(a);
        u[(GE, 2)] = re(-b);
        u[(EE, 3)] = re(1.0);
        u
    }
}

/// Eigenbasis of the dipole-coupled pair with frequency splitting 2Δ.
///
/// Uses α = √((w+Δ)/2w), β = sgn(Ω₁₂)√((w−Δ)/2w), equal to d/√(d²+Ω₁₂²) and
/// Ω₁₂/√(d²+Ω₁₂²) but finite when d → 0.
pub fn build_basis(pair: &AtomPairConfig) -> Result<CollectiveBasis> {
    pair.validate()?;
    let (_, o12) = pair.couplings()?;
    let delta = pair.delta;
    let w = o12.hypot(delta);
    let (alpha, beta) = if w == 0.0 {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else {
        let sign = if o12 < 0.0 { -1.0 } else { 1.0 };
        (((w + delta) / (2.0 * w)).max(0.0).sqrt(), sign * ((w - delta) / (2.0 * w)).max(0.0).sqrt())
    };
    Ok(CollectiveBasis { alpha, beta, w, energies: [0.0, w, -w, 0.0] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToCollective,
    ToProduct,
}

/// Unitary change between the product basis and (|g⟩, |s′⟩, |a′⟩, |e⟩).
pub fn basis_transform(direction: Direction, rho: &DensityMatrix4, basis: &CollectiveBasis) -> Result<DensityMatrix4> {
    let u = basis.unitary();
    let m = rho.matrix();
    let out = match direction {
        Direction::ToCollective => u.adjoint() * m * u,
        Direction::ToProduct => u * m * u.adjoint(),
    };
    DensityMatrix4::new(out)
}

/// Coefficients of S_s⁺ = uS₁⁺ + vS₂⁺ and S_a⁺ = vS₁⁺ − uS₂⁺.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionCoeffs {
    pub u: C64,
    pub v: C64,
}

impl SuperpositionCoeffs {
    pub fn new(u: C64, v: C64) -> Result<Self> {
        let n = u.norm_sqr() + v.norm_sqr();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Invariant(format!("|u|^2 + |v|^2 = 1 (got {n})")));
        }
        Ok(SuperpositionCoeffs { u, v })
    }

    /// u = √(Γ₁/(Γ₁+Γ₂)), v = √(Γ₂/(Γ₁+Γ₂)).
    pub fn canonical(pair: &AtomPairConfig) -> Self {
        let s = pair.gamma1 + pair.gamma2;
        SuperpositionCoeffs { u: re((pair.gamma1 / s).sqrt()), v: re((pair.gamma2 / s).sqrt()) }
    }

    /// Running-wave coefficients for laser phases k·r₁, k·r₂.
    pub fn running(kr1: f64, kr2: f64) -> Self {
        SuperpositionCoeffs {
            u: C64::from_polar(FRAC_1_SQRT_2, kr1),
            v: C64::from_polar(FRAC_1_SQRT_2, kr2),
        }
    }

    /// Standing-wave coefficients for laser phases k·r₁, k·r₂.
    pub fn standing(kr1: f64, kr2: f64) -> Result<Self> {
        let (c1, c2) = (kr1.cos(), kr2.cos());
        let n = c1.hypot(c2);
        if n < 1e-12 {
            return Err(Error::Domain("both atoms at field nodes".into()));
        }
        Ok(SuperpositionCoeffs { u: re(c1 / n), v: re(c2 / n) })
    }
}

/// (Γ_ss, Γ_aa, Γ_as, Γ_sa) in the normalization where the dissipator reads
/// −Γ_mn(S_m⁺S_n⁻ρ + ρS_m⁺S_n⁻ − 2S_n⁻ρS_m⁺) with Γ_ii the single-atom rates.
pub fn superposition_rates(coeffs: &SuperpositionCoeffs, pair: &AtomPairConfig) -> (f64, f64, C64, C64) {
    let (u, v) = (coeffs.u, coeffs.v);
    let g12 = crate::coupling_geometry::collective_damping(pair);
    let (g1, g2) = (pair.gamma1, pair.gamma2);
    let cross = (u * v.conj() + u.conj() * v).re;
    let diff = u.norm_sqr() - v.norm_sqr();
    let gss = u.norm_sqr() * g1 + v.norm_sqr() * g2 + cross * g12;
    let gaa = v.norm_sqr() * g1 + u.norm_sqr() * g2 - cross * g12;
    let gas = u * v.conj() * g1 - u.conj() * v * g2 - re(diff * g12);
    let gsa = u.conj() * v * g1 - u * v.conj() * g2 - re(diff * g12);
    (gss, gaa, gas, gsa)
}

/// (Δ′, Δ_c): energy shift of the superpositions and their coherent coupling.
pub fn coherent_couplings(coeffs: &SuperpositionCoeffs, pair: &AtomPairConfig, drive: &DriveField) -> Result<(f64, C64)> {
    let (u, v) = (coeffs.u, coeffs.v);
    let (_, o12) = pair.couplings()?;
    let shift = (v * u.conj() + v.conj() * u).re * o12;
    let dc = re((u.norm_sqr() - v.norm_sqr()) * o12) + (v.conj() * u - v * u.conj()) * drive.detuning;
    Ok((shift, dc))
}

/// Damping rates (Γ_s′, Γ_a′, Γ_a′s′) of the nonidentical-atom eigenbasis, equal single-atom rates Γ.
pub fn eigenbasis_rates(basis: &CollectiveBasis, gamma: f64, gamma12: f64) -> (f64, f64, f64) {
    let ab = basis.alpha * basis.beta;
    (
        0.5 * (gamma + 2.0 * ab * gamma12),
        0.5 * (gamma - 2.0 * ab * gamma12),
        0.5 * (basis.alpha * basis.alpha - basis.beta * basis.beta) * gamma12,
    )
}
