//! Vectorized Lindblad generators for the two-atom scenarios, time evolution and steady states.
//!
//! States are column-stacked: vec(ρ)[i + 4j] = ρ[i, j], so vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
//! Every generator is written in a frame that removes explicit time dependence:
//! the laser frame for driven problems, the squeezed-carrier frame for squeezed baths.

mod integrate;
mod steady;

pub use integrate::{evolve, evolve_vec, EvolveOptions};
pub use steady::{steady_state, SteadyState, DEGENERACY_THRESHOLD};

use crate::coupling_geometry::{effective_squeezing, rabi_at_atoms, AtomPairConfig, DriveField, SqueezedReservoir};
use crate::error::{Error, Result};
use crate::linalg::{
    commutator_super, dissipator_pair, hermitian_eigenvalues, lindblad, lowering, max_abs, raising, re, spost, spre,
    trace4, unvec, vec_of, Mat16, Mat4, Vec16, Vec4, C64, I,
};
use serde::{Deserialize, Serialize};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Validated two-atom density matrix in the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(Mat4);

impl DensityMatrix4 {
    pub fn new(m: Mat4) -> Result<Self> {
        Self::check(&m)?;
        Ok(DensityMatrix4(m))
    }

    pub fn check(m: &Mat4) -> Result<()> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let herm = max_abs(&(m - m.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:.3e})")));
        }
        let tr = trace4(m);
        if (tr - re(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {:.12} != 1", tr.re)));
        }
        let lo = hermitian_eigenvalues(m)[0];
        if lo < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(())
    }

    /// Both atoms in the ground state.
    pub fn ground() -> Self {
        Self::basis(crate::linalg::GG)
    }

    /// Pure product-basis state |i⟩⟨i|.
    pub fn basis(i: usize) -> Self {
        let mut m = Mat4::zeros();
        m[(i, i)] = re(1.0);
        DensityMatrix4(m)
    }

    /// Pure state |ψ⟩⟨ψ|, normalizing ψ.
    pub fn pure(psi: &Vec4) -> Result<Self> {
        let n = psi.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let p = psi / re(n);
        Ok(DensityMatrix4(p * p.adjoint()))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix4(Mat4::identity() * re(0.25))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_inner(self) -> Mat4 {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn to_vec16(&self) -> Vec16 {
        vec_of(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    VacuumDrive,
    Squeezed,
    DickeDressed,
    BadCavity,
    Custom,
}

/// Superoperator L with ρ̇ = Lρ on column-stacked ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator16 {
    matrix: Mat16,
    pub scenario: Scenario,
    /// Validity conditions and modelling choices attached at construction.
    pub notes: Vec<String>,
}

impl Generator16 {
    pub fn from_matrix(matrix: Mat16, scenario: Scenario) -> Self {
        Generator16 { matrix, scenario, notes: Vec::new() }
    }

    /// −i[H, ·] + Σ γ_k D[A_k].
    pub fn from_lindblad(h: &Mat4, jumps: &[(Mat4, f64)], scenario: Scenario) -> Self {
        let mut m = commutator_super(h);
        for (a, g) in jumps {
            m += lindblad(a, *g);
        }
        Self::from_matrix(m, scenario)
    }

    pub fn matrix(&self) -> &Mat16 {
        &self.matrix
    }

    pub fn apply(&self, rho: &Mat4) -> Mat4 {
        unvec(&(self.matrix * vec_of(rho)))
    }

    /// max_k |Σ_i L[(ii), k]|: how far the trace functional is from annihilating L.
    pub fn trace_defect(&self) -> f64 {
        (0..16)
            .map(|k| (0..4).map(|i| self.matrix[(5 * i, k)]).sum::<C64>().norm())
            .fold(0.0, f64::max)
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

/// Dissipator Σ_ij Γ_ij (S_j⁻ ρ S_i⁺ − ½{S_i⁺S_j⁻, ρ}) for a real symmetric damping matrix.
pub(crate) fn collective_dissipator(g: &[[f64; 2]; 2]) -> Mat16 {
    let mut m = Mat16::zeros();
    for i in 0..2 {
        for j in 0..2 {
            if g[i][j] != 0.0 {
                m += dissipator_pair(&lowering(j + 1), &raising(i + 1), re(g[i][j]));
            }
        }
    }
    m
}

/// Atomic part of the Hamiltonian in a frame rotating at ω₀ + `offset`.
fn atomic_hamiltonian(pair: &AtomPairConfig, offset: f64, omega12: f64) -> Mat4 {
    let n1 = raising(1) * lowering(1);
    let n2 = raising(2) * lowering(2);
    let exchange = raising(1) * lowering(2) + raising(2) * lowering(1);
    n1 * re(-pair.delta - offset) + n2 * re(pair.delta - offset) + exchange * re(omega12)
}

/// Laser-frame Hamiltonian including the drive −½Σ(Ω_i S_i⁺ + h.c.).
pub fn vacuum_drive_hamiltonian(pair: &AtomPairConfig, drive: &DriveField) -> Result<Mat4> {
    let (_, o12) = pair.couplings()?;
    let (om1, om2) = rabi_at_atoms(drive, pair);
    let hl = raising(1) * om1 + raising(2) * om2;
    Ok(atomic_hamiltonian(pair, drive.detuning, o12) - (hl + hl.adjoint()) * re(0.5))
}

/// Vacuum reservoir plus coherent drive.
pub fn build_vacuum_drive(pair: &AtomPairConfig, drive: &DriveField) -> Result<Generator16> {
    pair.validate()?;
    drive.validate()?;
    let h = vacuum_drive_hamiltonian(pair, drive)?;
    let m = commutator_super(&h) + collective_dissipator(&pair.damping_matrix());
    Ok(Generator16::from_matrix(m, Scenario::VacuumDrive).note("laser rotating frame"))
}

fn squeezed_matrix(pair: &AtomPairConfig, res: &SqueezedReservoir, secular: bool) -> Result<Mat16> {
    pair.validate()?;
    res.validate()?;
    let (n, m_abs) = effective_squeezing(res);
    let m = C64::from_polar(m_abs, res.squeeze_phase);
    let (_, o12) = pair.couplings()?;
    let g = pair.damping_matrix();
    let h = atomic_hamiltonian(pair, res.carrier_offset, if secular { 0.0 } else { o12 });
    let mut l = commutator_super(&h);
    for i in 0..2 {
        for j in 0..2 {
            let gij = g[i][j];
            if gij == 0.0 {
                continue;
            }
            let (si_p, si_m) = (raising(i + 1), lowering(i + 1));
            let (sj_p, sj_m) = (raising(j + 1), lowering(j + 1));
            if !(secular && i != j) {
                l += dissipator_pair(&sj_m, &si_p, re((1.0 + n) * gij));
                l += dissipator_pair(&sj_p, &si_m, re(n * gij));
            }
            if secular && i == j {
                continue;
            }
            // ½Γ_ij M (ρS_i⁺S_j⁺ + S_i⁺S_j⁺ρ − 2S_j⁺ρS_i⁺) and its M* partner
            let pp = si_p * sj_p;
            let mm = si_m * sj_m;
            l += (spost(&pp) + spre(&pp) - spre(&sj_p) * spost(&si_p) * re(2.0)) * (m * (0.5 * gij));
            l += (spost(&mm) + spre(&mm) - spre(&sj_m) * spost(&si_m) * re(2.0)) * (m.conj() * (0.5 * gij));
        }
    }
    Ok(l)
}

/// Broadband squeezed vacuum in the frame rotating at the squeezing carrier.
pub fn build_squeezed(pair: &AtomPairConfig, res: &SqueezedReservoir) -> Result<Generator16> {
    let l = squeezed_matrix(pair, res, false)?;
    Ok(Generator16::from_matrix(l, Scenario::Squeezed).note("squeezed-carrier rotating frame; frequency shifts from the two-photon correlations set to zero"))
}

/// Secular form for nonidentical atoms with Δ ≫ Γ: terms oscillating at ±2Δ are dropped
/// (cross-damping in the N and N+1 parts, single-atom two-photon terms, and the Ω₁₂ exchange).
pub fn build_squeezed_secular(pair: &AtomPairConfig, res: &SqueezedReservoir) -> Result<Generator16> {
    let l = squeezed_matrix(pair, res, true)?;
    let mut gen = Generator16::from_matrix(l, Scenario::Squeezed).note("secular approximation, requires |delta| >> 1");
    if pair.delta.abs() < 10.0 * pair.gamma1.max(pair.gamma2) {
        gen = gen.note(format!("warning: |delta| = {} outside secular regime", pair.delta.abs()));
    }
    Ok(gen)
}

/// Collective operators of the dressed Dicke model: (R_z, R⁺, R⁻).
pub fn dressed_operators() -> (Mat4, Mat4, Mat4) {
    let sp = raising(1) + raising(2);
    let sm = lowering(1) + lowering(2);
    let sz = (sp * sm - sm * sp) * re(0.5);
    let sy = (sp - sm) * (-I * 0.5);
    let rz = (sp + sm) * re(0.5);
    (rz, sy + sz * I, sy - sz * I)
}

/// Strong-field Dicke model after the secular approximation in the dressed frame (Γ = 1).
pub fn build_dicke_dressed(drive: &DriveField) -> Result<Generator16> {
    drive.validate()?;
    let (rz, rp, rm) = dressed_operators();
    let h = rz * re(-drive.rabi);
    let mut gen = Generator16::from_lindblad(&h, &[(rz, 1.0), (rm, 0.25), (rp, 0.25)], Scenario::DickeDressed)
        .note("dressed-state secular approximation, valid for rabi >> 1");
    if drive.rabi < 10.0 {
        gen = gen.note(format!("warning: rabi = {} below strong-field regime", drive.rabi));
    }
    Ok(gen)
}

/// Two atoms in a driven bad cavity after adiabatic elimination of the cavity mode.
pub fn build_bad_cavity(pair: &AtomPairConfig, g: f64, gamma_c: f64, omega_drive: f64) -> Result<Generator16> {
    pair.validate()?;
    if !(gamma_c > 0.0) || !gamma_c.is_finite() {
        return Err(Error::Domain("gamma_c must be positive".into()));
    }
    if !g.is_finite() || !omega_drive.is_finite() {
        return Err(Error::Invariant("cavity parameters must be finite".into()));
    }
    let eta = omega_drive / gamma_c;
    let sp = raising(1) + raising(2);
    let h = (sp + sp.adjoint()) * re(-0.5 * g * eta);
    let jumps = [
        (lowering(1), pair.gamma1),
        (lowering(2), pair.gamma2),
        (sp.adjoint(), g * g / gamma_c),
    ];
    let mut gen = Generator16::from_lindblad(&h, &jumps, Scenario::BadCavity).note("requires gamma_c >> g >> gamma");
    if !(gamma_c >= 10.0 * g.abs() && g.abs() >= pair.gamma1.max(pair.gamma2)) {
        gen = gen.note("warning: outside bad-cavity regime");
    }
    Ok(gen)
}

/// Time-ordered states on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSeries {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix4>,
}
