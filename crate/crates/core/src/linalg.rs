//! Fixed-size complex matrices, two-atom operators and superoperator plumbing.
//!
//! Product basis ordering: |g1g2⟩, |e1g2⟩, |g1e2⟩, |e1e2⟩ (index = e1 + 2·e2).
//! Superoperators act on column-stacked density matrices: vec(AρB) = (Bᵀ ⊗ A) vec(ρ).

use nalgebra::{Const, DimMin, SMatrix, SVector};
pub use num_complex::Complex64 as C64;

pub type Mat4 = SMatrix<C64, 4, 4>;
pub type Vec4 = SVector<C64, 4>;
pub type Mat16 = SMatrix<C64, 16, 16>;
pub type Vec16 = SVector<C64, 16>;

pub const GG: usize = 0;
pub const EG: usize = 1;
pub const GE: usize = 2;
pub const EE: usize = 3;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Lowering operator S_i⁻ of atom `atom` (1 or 2).
pub fn lowering(atom: usize) -> Mat4 {
    let mut m = Mat4::zeros();
    match atom {
        1 => {
            m[(GG, EG)] = re(1.0);
            m[(GE, EE)] = re(1.0);
        }
        2 => {
            m[(GG, GE)] = re(1.0);
            m[(EG, EE)] = re(1.0);
        }
        _ => panic!("atom index must be 1 or 2"),
    }
    m
}

pub fn raising(atom: usize) -> Mat4 {
    lowering(atom).adjoint()
}

/// Collective lowering operator S⁻ = S₁⁻ + S₂⁻.
pub fn collective_lowering() -> Mat4 {
    lowering(1) + lowering(2)
}

pub fn basis_ket(i: usize) -> Vec4 {
    let mut v = Vec4::zeros();
    v[i] = re(1.0);
    v
}

pub fn projector(psi: &Vec4) -> Mat4 {
    psi * psi.adjoint()
}

pub fn vec_of(rho: &Mat4) -> Vec16 {
    let mut v = Vec16::zeros();
    for j in 0..4 {
        for i in 0..4 {
            v[i + 4 * j] = rho[(i, j)];
        }
    }
    v
}

pub fn unvec(v: &Vec16) -> Mat4 {
    let mut m = Mat4::zeros();
    for j in 0..4 {
        for i in 0..4 {
            m[(i, j)] = v[i + 4 * j];
        }
    }
    m
}

fn kron(a: &Mat4, b: &Mat4) -> Mat16 {
    let mut k = Mat16::zeros();
    for ar in 0..4 {
        for ac in 0..4 {
            let x = a[(ar, ac)];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for br in 0..4 {
                for bc in 0..4 {
                    k[(4 * ar + br, 4 * ac + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    k
}

/// Left multiplication ρ ↦ Aρ.
pub fn spre(a: &Mat4) -> Mat16 {
    kron(&Mat4::identity(), a)
}

/// Right multiplication ρ ↦ ρB.
pub fn spost(b: &Mat4) -> Mat16 {
    kron(&b.transpose(), &Mat4::identity())
}

/// ρ ↦ −i[H, ρ].
pub fn commutator_super(h: &Mat4) -> Mat16 {
    (spre(h) - spost(h)) * (-I)
}

/// ρ ↦ γ (AρB − ½{BA, ρ}). With B = A† this is the Lindblad dissipator D[A].
pub fn dissipator_pair(a: &Mat4, b: &Mat4, gamma: C64) -> Mat16 {
    let ba = b * a;
    (spre(a) * spost(b) - (spre(&ba) + spost(&ba)) * re(0.5)) * gamma
}

pub fn lindblad(a: &Mat4, gamma: f64) -> Mat16 {
    dissipator_pair(a, &a.adjoint(), re(gamma))
}

pub fn trace4(m: &Mat4) -> C64 {
    m[(0, 0)] + m[(1, 1)] + m[(2, 2)] + m[(3, 3)]
}

/// Expectation Tr(Aρ).
pub fn expect(a: &Mat4, rho: &Mat4) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..4 {
        for k in 0..4 {
            s += a[(i, k)] * rho[(k, i)];
        }
    }
    s
}

pub fn max_abs<const R: usize, const C: usize>(m: &SMatrix<C64, R, C>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn one_norm<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    (0..N)
        .map(|j| (0..N).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé approximant.
pub fn expm<const N: usize>(a: &SMatrix<C64, N, N>) -> SMatrix<C64, N, N>
where
    Const<N>: DimMin<Const<N>, Output = Const<N>>,
{
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let theta13 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > theta13 { (norm / theta13).log2().ceil() as i32 } else { 0 };
    let a = a * re(0.5f64.powi(s));
    let id = SMatrix::<C64, N, N>::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let b = |k: usize| re(B[k]);
    let u_inner = a6 * (a6 * b(13) + a4 * b(11) + a2 * b(9)) + a6 * b(7) + a4 * b(5) + a2 * b(3) + id * b(1);
    let u = a * u_inner;
    let v = a6 * (a6 * b(12) + a4 * b(10) + a2 * b(8)) + a6 * b(6) + a4 * b(4) + a2 * b(2) + id * b(0);
    let p = v + u;
    let q = v - u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is nonsingular");
    for _ in 0..s {
        r = r * r;
    }
    r
}

/// Hermitian part (ρ + ρ†)/2.
pub fn hermitize(m: &Mat4) -> Mat4 {
    (m + m.adjoint()) * re(0.5)
}

/// Eigenvalues (ascending) of a Hermitian 4×4 matrix.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let e = hermitize(m).symmetric_eigenvalues();
    let mut v = [e[0], e[1], e[2], e[3]];
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
