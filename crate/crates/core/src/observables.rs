//! Intensities, correlation functions, variances and state diagnostics.
//!
//! Field amplitudes are normalized so that a detector in direction R̂ sees
//! E⁺(R̂) = Σ_j √Γ_j S_j⁻ e^{−ik R̂·r_j}, with the dipole factor u(R̂) = sin²φ.
//! Detection angles θ are measured from the interatomic axis pointing from atom 1 to atom 2.

use crate::collective_basis::{collective_element, Collective};
use crate::coupling_geometry::{collective_damping, AtomPairConfig};
use crate::error::{Error, Result};
use crate::linalg::{expect, lowering, raising, re, unvec, vec_of, Mat4, C64};
use crate::liouvillian::{evolve_vec, DensityMatrix4, EvolveOptions, Generator16};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionGeometry {
    pub theta1: f64,
    pub theta2: f64,
    /// Angle between the dipole moment and the observation direction.
    pub phi: f64,
}

impl DetectionGeometry {
    /// One detector perpendicular to the axis and to the dipoles.
    pub fn perpendicular() -> Self {
        DetectionGeometry { theta1: FRAC_PI_2, theta2: FRAC_PI_2, phi: FRAC_PI_2 }
    }

    pub fn single(theta: f64) -> Self {
        DetectionGeometry { theta1: theta, theta2: theta, phi: FRAC_PI_2 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("theta1", self.theta1), ("theta2", self.theta2), ("phi", self.phi)] {
            if !(0.0..=PI).contains(&v) {
                return Err(Error::Invariant(format!("{name} in [0, pi]")));
            }
        }
        Ok(())
    }

    fn u(&self) -> f64 {
        self.phi.sin().powi(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub tau: Vec<f64>,
    pub values: Vec<f64>,
}

impl CorrelationSeries {
    /// CSV with header `tau,value` and 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,value\n");
        for (t, v) in self.tau.iter().zip(&self.values) {
            s.push_str(&format!("{},{}\n", fmt12(*t), fmt12(*v)));
        }
        s
    }
}

/// Scientific notation with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Positive-frequency field operator for observation angle θ (without √u).
pub fn field_operator(pair: &AtomPairConfig, theta: f64) -> Mat4 {
    let (x1, x2) = pair.positions();
    let k = 2.0 * PI * theta.cos();
    lowering(1) * C64::from_polar(pair.gamma1.sqrt(), -k * x1) + lowering(2) * C64::from_polar(pair.gamma2.sqrt(), -k * x2)
}

/// I = Σ_ij Γ_ij ⟨S_i⁺S_j⁻⟩.
pub fn total_intensity(rho: &DensityMatrix4, pair: &AtomPairConfig) -> f64 {
    let g12 = collective_damping(pair);
    let m = rho.matrix();
    let n1 = expect(&(raising(1) * lowering(1)), m).re;
    let n2 = expect(&(raising(2) * lowering(2)), m).re;
    let c12 = expect(&(raising(1) * lowering(2)), m);
    pair.gamma1 * n1 + pair.gamma2 * n2 + 2.0 * g12 * c12.re
}

/// Far-field intensity u(R̂)·⟨E⁻E⁺⟩ at observation angle θ₁.
pub fn angular_intensity(rho: &DensityMatrix4, pair: &AtomPairConfig, geometry: &DetectionGeometry) -> f64 {
    let e = field_operator(pair, geometry.theta1);
    geometry.u() * expect(&(e.adjoint() * e), rho.matrix()).re
}

/// Far-field intensity for an arbitrary unit direction and dipole orientation, both
/// given in the frame where the interatomic axis is x̂. Multiplying by 3/(8π) and
/// integrating over the sphere gives `total_intensity`.
pub fn angular_intensity_3d(rho: &DensityMatrix4, pair: &AtomPairConfig, rhat: [f64; 3], muhat: [f64; 3]) -> f64 {
    let dot = rhat[0] * muhat[0] + rhat[1] * muhat[1] + rhat[2] * muhat[2];
    let e = field_operator(pair, rhat[0].clamp(-1.0, 1.0).acos());
    (1.0 - dot * dot) * expect(&(e.adjoint() * e), rho.matrix()).re
}

/// Dipole unit vector for a pair's orientation angle (in the x–y plane).
pub fn dipole_direction(pair: &AtomPairConfig) -> [f64; 3] {
    [pair.dipole_angle.cos(), pair.dipole_angle.sin(), 0.0]
}

fn g2_parts(rho: &Mat4, pair: &AtomPairConfig, geometry: &DetectionGeometry) -> (f64, f64, f64) {
    let e1 = field_operator(pair, geometry.theta1);
    let e2 = field_operator(pair, geometry.theta2);
    let i1 = expect(&(e1.adjoint() * e1), rho).re;
    let i2 = expect(&(e2.adjoint() * e2), rho).re;
    let g2 = expect(&(e1.adjoint() * e2.adjoint() * e2 * e1), rho).re;
    (g2, i1, i2)
}

/// Normalized equal-time intensity correlation between the two detectors.
pub fn g2_zero(rho_ss: &DensityMatrix4, pair: &AtomPairConfig, geometry: &DetectionGeometry) -> Result<f64> {
    let (g2, i1, i2) = g2_parts(rho_ss.matrix(), pair, geometry);
    if i1 * i2 < 1e-14 {
        return Err(Error::Undefined("zero intensity at a detector".into()));
    }
    Ok(g2 / (i1 * i2))
}

/// Unnormalized ⟨E⁻(R₁,t)E⁻(R₂,t+τ)E⁺(R₂,t+τ)E⁺(R₁,t)⟩ (u = 1) by quantum regression
/// from the state at time t.
pub fn two_time_g2(
    l: &Generator16,
    rho_t: &DensityMatrix4,
    pair: &AtomPairConfig,
    geometry: &DetectionGeometry,
    tau: &[f64],
) -> Result<Vec<f64>> {
    if tau.is_empty() {
        return Ok(Vec::new());
    }
    let e1 = field_operator(pair, geometry.theta1);
    let e2 = field_operator(pair, geometry.theta2);
    let x0 = e1 * rho_t.matrix() * e1.adjoint();
    let n2 = e2.adjoint() * e2;
    let opts = EvolveOptions { rtol: 1e-10, atol: 1e-14, ..Default::default() };
    let mut grid = tau.to_vec();
    let shifted = grid[0] != 0.0;
    if shifted {
        grid.insert(0, 0.0);
    }
    let xs = evolve_vec(l, &vec_of(&x0), &grid, &opts)?;
    let skip = usize::from(shifted);
    Ok(xs.iter().skip(skip).map(|x| expect(&n2, &unvec(x)).re).collect())
}

/// Normalized g²(τ) in the steady state by quantum regression.
pub fn g2_tau(
    l: &Generator16,
    rho_ss: &DensityMatrix4,
    pair: &AtomPairConfig,
    geometry: &DetectionGeometry,
    tau: &[f64],
) -> Result<CorrelationSeries> {
    let (_, i1, i2) = g2_parts(rho_ss.matrix(), pair, geometry);
    if i1 * i2 < 1e-14 {
        return Err(Error::Undefined("zero steady-state intensity".into()));
    }
    let raw = two_time_g2(l, rho_ss, pair, geometry, tau)?;
    Ok(CorrelationSeries { tau: tau.to_vec(), values: raw.iter().map(|v| v / (i1 * i2)).collect() })
}

/// Q = qT(g² − 1).
pub fn mandel_q(g2_zero_value: f64, q_efficiency: f64, t_window: f64) -> Result<f64> {
    if g2_zero_value < 0.0 || !(q_efficiency > 0.0 && q_efficiency <= 1.0) || !(t_window > 0.0) {
        return Err(Error::Domain("need g2 >= 0, q in (0, 1], T > 0".into()));
    }
    Ok(q_efficiency * t_window * (g2_zero_value - 1.0))
}

/// Normally ordered quadrature variance per atom in the collective-state form, valid
/// for observation perpendicular to the axis at the laser frequency.
pub fn quadrature_variance(rho: &DensityMatrix4, _pair: &AtomPairConfig, alpha: f64, geometry: &DetectionGeometry) -> Result<f64> {
    if (geometry.theta1 - FRAC_PI_2).abs() > 1e-12 {
        return Err(Error::Domain("quadrature variance requires observation perpendicular to the interatomic axis".into()));
    }
    use Collective::*;
    let m = rho.matrix();
    let el = |i, j| collective_element(m, i, j);
    let ph = C64::from_polar(1.0, alpha);
    let lin = (el(E, S) + el(S, G)) * ph + (el(S, E) + el(G, S)) * ph.conj();
    let v = (re(2.0 * el(E, E).re + 2.0 * el(S, S).re) + el(E, G) * ph * ph + el(G, E) * ph.conj() * ph.conj() - lin * lin) * 0.25;
    Ok(v.re)
}

/// 𝒱 = (ρ_ss − ρ_aa)/(ρ_ss + ρ_aa + 2ρ_ee).
pub fn visibility(rho: &DensityMatrix4) -> Result<f64> {
    use Collective::*;
    let m = rho.matrix();
    let ss = collective_element(m, S, S).re;
    let aa = collective_element(m, A, A).re;
    let ee = collective_element(m, E, E).re;
    let den = ss + aa + 2.0 * ee;
    if den.abs() < 1e-14 {
        return Err(Error::Undefined("no excitation: visibility undefined".into()));
    }
    Ok((ss - aa) / den)
}

pub fn purity(rho: &DensityMatrix4) -> f64 {
    let m = rho.matrix();
    (m * m).trace().re
}

/// S² = 2 − 2ρ_aa.
pub fn total_spin_squared(rho: &DensityMatrix4) -> f64 {
    2.0 - 2.0 * collective_element(rho.matrix(), Collective::A, Collective::A).re
}

/// (incident, emitted) normally ordered field variances at θ = π/2 with E₀ = 1.
pub fn field_variance_mapping(res: &crate::coupling_geometry::SqueezedReservoir, rho_ss: &DensityMatrix4) -> (f64, f64) {
    use Collective::*;
    let (n, m) = crate::coupling_geometry::effective_squeezing(res);
    let r = rho_ss.matrix();
    let rho_u = rho_u(r, res.squeeze_phase);
    // cos 2θ = −1 at θ = π/2
    let emitted = 2.0 * collective_element(r, S, S).re + 2.0 * collective_element(r, E, E).re - rho_u.abs();
    (2.0 * (n - m), emitted)
}

/// ρ_u = ρ_eg e^{−iφ} + ρ_ge e^{iφ}.
pub fn rho_u(rho: &Mat4, phase: f64) -> f64 {
    use Collective::*;
    let p = C64::from_polar(1.0, phase);
    (collective_element(rho, E, G) * p.conj() + collective_element(rho, G, E) * p).re
}

/// Populations (ρ_gg, ρ_ss, ρ_aa, ρ_ee) in the collective basis.
pub fn collective_populations(rho: &DensityMatrix4) -> [f64; 4] {
    use Collective::*;
    let m = rho.matrix();
    [G, S, A, E].map(|c| collective_element(m, c, c).re)
}
