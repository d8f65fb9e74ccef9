//! Null space of the generator by singular-value decomposition.

use super::{DensityMatrix4, Generator16};
use crate::error::{Error, Result};
use crate::linalg::{hermitize, re, trace4, unvec, vec_of, Mat4, C64};
use nalgebra::DMatrix;

/// Singular values below this fraction of the largest count as zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub rho: DensityMatrix4,
    /// More than one stationary state exists; `rho` is the one reached from |g₁g₂⟩.
    pub degenerate: bool,
    /// Dimension of the null space.
    pub null_dim: usize,
    /// Ratio of the second-smallest to the largest singular value.
    pub gap_ratio: f64,
}

/// Solve Lρ = 0 with Tr ρ = 1.
///
/// For a degenerate null space the answer is the t → ∞ limit from the ground state,
/// obtained with the spectral projector V (U†V)⁻¹ U† built from the right (V) and
/// left (U) null vectors.
pub fn steady_state(l: &Generator16) -> Result<SteadyState> {
    let a = DMatrix::from_iterator(16, 16, l.matrix().iter().copied());
    let svd = a.svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::Numerical("SVD failed".into())),
    };
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..16).collect();
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).unwrap_or(std::cmp::Ordering::Equal));
    let smax = sv[order[0]];
    if !(smax > 0.0) {
        return Err(Error::Numerical("generator is zero; every state is stationary".into()));
    }
    let null: Vec<usize> = order.iter().copied().filter(|&i| sv[i] / smax < DEGENERACY_THRESHOLD).collect();
    if null.is_empty() {
        return Err(Error::Numerical(format!(
            "no null vector: smallest singular value ratio {:.3e}",
            sv[order[15]] / smax
        )));
    }
    let gap_ratio = sv[order[14]] / smax;
    let k = null.len();
    let mut v = DMatrix::<C64>::zeros(16, k);
    let mut ul = DMatrix::<C64>::zeros(16, k);
    for (c, &i) in null.iter().enumerate() {
        for r in 0..16 {
            v[(r, c)] = vt[(i, r)].conj();
            ul[(r, c)] = u[(r, i)];
        }
    }
    let x = if k == 1 {
        v.column(0).into_owned()
    } else {
        let g = vec_of(&ground());
        let g = DMatrix::from_iterator(16, 1, g.iter().copied());
        let overlap = ul.adjoint() * &v;
        let coeff = overlap
            .lu()
            .solve(&(ul.adjoint() * g))
            .ok_or_else(|| Error::Numerical("defective zero eigenvalue".into()))?;
        (&v * coeff).column(0).into_owned()
    };
    let mut xs = crate::linalg::Vec16::zeros();
    for i in 0..16 {
        xs[i] = x[i];
    }
    let m = unvec(&xs);
    let tr = trace4(&m);
    if tr.norm() < 1e-12 {
        return Err(Error::Numerical("null vector has zero trace".into()));
    }
    let rho = hermitize(&(m / tr));
    let rho = DensityMatrix4::new(rho).map_err(|e| Error::Numerical(format!("steady state unphysical: {e}")))?;
    Ok(SteadyState { rho, degenerate: k > 1, null_dim: k, gap_ratio })
}

fn ground() -> Mat4 {
    let mut g = Mat4::zeros();
    g[(0, 0)] = re(1.0);
    g
}
