//! Quantum-jump (Monte Carlo wave-function) unraveling of the vacuum master equation.
//!
//! Between detections a state evolves under the non-Hermitian conditional Hamiltonian
//! H_c = H − (i/2) Σ_ij Γ_ij S_i⁺S_j⁻. Jump times are drawn exactly by inverting the
//! no-jump probability, and each jump applies one emission channel of the reset operator.

use nalgebra::{Matrix2, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::coupling_geometry::{AtomPairConfig, DriveField};
use crate::linalg::*;
use crate::liouvillian::{vacuum_drive_hamiltonian, DensityMatrix4};
use crate::{Error, Result};

/// Environment variable capping the number of worker threads for ensembles.
pub const THREADS_ENV: &str = "TWOATOM_THREADS";

const CHUNK: usize = 64;

/// H_c = H − (i/2)K with K = Σ_ij Γ_ij S_i⁺S_j⁻, plus the emission channels of K.
#[derive(Debug, Clone)]
pub struct ConditionalHamiltonian {
    matrix: Mat4,
    decay: Mat4,
    channels: Vec<(Mat4, f64)>,
    eigen: Option<Eigen>,
}

#[derive(Debug, Clone)]
struct Eigen {
    values: [C64; 4],
    vectors: Mat4,
    inverse: Mat4,
}

impl ConditionalHamiltonian {
    /// Build from a Hermitian part and a real symmetric damping matrix.
    pub fn new(h: Mat4, damping: [[f64; 2]; 2]) -> Result<Self> {
        let mut decay = Mat4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                decay += raising(i + 1) * lowering(j + 1) * re(damping[i][j]);
            }
        }
        let g = Matrix2::new(damping[0][0], damping[0][1], damping[1][0], damping[1][1]);
        let se = SymmetricEigen::new(g);
        let mut channels = Vec::with_capacity(2);
        for k in 0..2 {
            let rate = se.eigenvalues[k];
            if rate < -1e-12 {
                return Err(Error::Invariant(format!("damping matrix has negative eigenvalue {rate}")));
            }
            let e = se.eigenvectors.column(k);
            let op = lowering(1) * re(e[0]) + lowering(2) * re(e[1]);
            channels.push((op, rate.max(0.0)));
        }
        let matrix = hermitize(&h) - decay * c(0.0, 0.5);
        let eigen = Eigen::of(&matrix);
        Ok(ConditionalHamiltonian { matrix, decay, channels, eigen })
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    /// K = i(H_c − H_c†), the positive decay operator.
    pub fn decay_operator(&self) -> &Mat4 {
        &self.decay
    }

    /// Jump operators (unit-norm combinations of S_j⁻) and their rates.
    pub fn channels(&self) -> &[(Mat4, f64)] {
        &self.channels
    }

    /// Eigenvalues of H_c, or `None` when H_c is numerically defective.
    pub fn eigenvalues(&self) -> Option<[C64; 4]> {
        self.eigen.as_ref().map(|e| e.values)
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.eigen.is_some()
    }

    /// C₁₂ recovered from the atom-exchange element: 2i⟨e₁g₂|H_c|g₁e₂⟩.
    pub fn c12(&self) -> C64 {
        I * 2.0 * self.matrix[(EG, GE)]
    }

    /// Smallest eigenvalue of the decay operator; nonnegative for a physical H_c.
    pub fn min_decay_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.decay)[0]
    }

    /// exp(−iH_c t)ψ.
    pub fn propagate(&self, psi: &Vec4, t: f64) -> Vec4 {
        match &self.eigen {
            Some(e) => {
                let coef = e.inverse * psi;
                e.apply(&coef, t)
            }
            None => expm(&(self.matrix * c(0.0, -t))) * psi,
        }
    }

    fn propagator(&self, psi: &Vec4) -> Propagator<'_> {
        let coef = self.eigen.as_ref().map(|e| e.inverse * psi);
        Propagator { hc: self, psi: *psi, coef }
    }
}

impl Eigen {
    /// Complex Schur form followed by back-substitution for the eigenvectors of T.
    fn of(m: &Mat4) -> Option<Self> {
        let (q, t) = m.schur().unpack();
        let scale = max_abs(m).max(1.0);
        let mut x = Mat4::zeros();
        for k in 0..4 {
            x[(k, k)] = re(1.0);
            for i in (0..k).rev() {
                let mut num = C64::new(0.0, 0.0);
                for j in i + 1..=k {
                    num += t[(i, j)] * x[(j, k)];
                }
                let den = t[(i, i)] - t[(k, k)];
                if den.norm() < 1e-12 * scale {
                    if num.norm() < 1e-12 * scale {
                        continue;
                    }
                    return None;
                }
                x[(i, k)] = -num / den;
            }
        }
        let mut v = q * x;
        for k in 0..4 {
            let n = v.column(k).norm();
            v.column_mut(k).unscale_mut(n);
        }
        let inverse = v.try_inverse()?;
        let values = [t[(0, 0)], t[(1, 1)], t[(2, 2)], t[(3, 3)]];
        let d = Mat4::from_diagonal(&Vec4::from_column_slice(&values));
        if max_abs(&(v * d * inverse - m)) > 1e-10 * scale {
            return None;
        }
        Some(Eigen { values, vectors: v, inverse })
    }

    fn apply(&self, coef: &Vec4, t: f64) -> Vec4 {
        let mut w = *coef;
        for k in 0..4 {
            w[k] *= (self.values[k] * c(0.0, -t)).exp();
        }
        self.vectors * w
    }
}

/// Unnormalized conditional evolution from a fixed starting state.
struct Propagator<'a> {
    hc: &'a ConditionalHamiltonian,
    psi: Vec4,
    coef: Option<Vec4>,
}

impl Propagator<'_> {
    fn state(&self, t: f64) -> Vec4 {
        match (&self.coef, &self.hc.eigen) {
            (Some(coef), Some(e)) => e.apply(coef, t),
            _ => expm(&(self.hc.matrix * c(0.0, -t))) * self.psi,
        }
    }

    fn norm2(&self, t: f64) -> f64 {
        self.state(t).norm_squared()
    }
}

/// Conditional Hamiltonian of the driven pair in the laser frame.
pub fn conditional_hamiltonian(pair: &AtomPairConfig, drive: &DriveField) -> Result<ConditionalHamiltonian> {
    pair.validate()?;
    drive.validate()?;
    let h = vacuum_drive_hamiltonian(pair, drive)?;
    ConditionalHamiltonian::new(h, pair.damping_matrix())
}

/// R(ρ) = Σ_ij Γ_ij S_j⁻ ρ S_i⁺ and its trace, the total emission rate.
pub fn reset_state(rho: &DensityMatrix4, pair: &AtomPairConfig) -> (Mat4, f64) {
    let g = pair.damping_matrix();
    let mut r = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            r += lowering(j + 1) * rho.matrix() * raising(i + 1) * re(g[i][j]);
        }
    }
    let rate = trace4(&r).re;
    (r, rate)
}

fn check_psi(psi: &Vec4, t: f64) -> Result<()> {
    if (psi.norm_squared() - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("initial state not normalized: |psi|^2 = {}", psi.norm_squared())));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// P(t) = ‖exp(−iH_c t)ψ₀‖², the probability of no emission up to t.
pub fn no_jump_probability(psi0: &Vec4, t: f64, hc: &ConditionalHamiltonian) -> Result<f64> {
    check_psi(psi0, t)?;
    Ok(hc.propagate(psi0, t).norm_squared())
}

/// w₁(t) = −dP/dt = ⟨φ(t)|K|φ(t)⟩ with φ(t) = exp(−iH_c t)ψ₀.
pub fn waiting_time_density(psi0: &Vec4, t: f64, hc: &ConditionalHamiltonian) -> Result<f64> {
    check_psi(psi0, t)?;
    let phi = hc.propagate(psi0, t);
    Ok((phi.adjoint() * hc.decay * phi)[0].re.max(0.0))
}

/// One trajectory's detection record.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub index: usize,
    /// Derived per-trajectory seed.
    pub seed: u64,
    pub jump_times: Vec<f64>,
    pub channels: Vec<usize>,
    pub post_jump_states: Vec<Vec4>,
    pub final_state: Vec4,
}

impl TrajectoryRecord {
    /// `seed count t1,t2,...` with nine decimals.
    pub fn to_line(&self) -> String {
        let times: Vec<String> = self.jump_times.iter().map(|t| format!("{t:.9}")).collect();
        format!("{} {} {}", self.seed, self.jump_times.len(), times.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct TrajectoryOptions {
    /// Jump budget per trajectory.
    pub max_jumps: usize,
    /// Worker cap; falls back to `TWOATOM_THREADS`, then the rayon default.
    pub threads: Option<usize>,
    pub keep_records: bool,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        TrajectoryOptions { max_jumps: 1_000_000, threads: None, keep_records: true }
    }
}

/// Ensemble statistics on the time grid.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub grid: Vec<f64>,
    pub n_traj: usize,
    pub mean_rho: Vec<Mat4>,
    /// Standard error of the four product-basis populations.
    pub population_stderr: Vec<[f64; 4]>,
    /// Mean of ⟨ψ|K|ψ⟩ (emission rate) and its standard error.
    pub emission_rate: Vec<f64>,
    pub emission_stderr: Vec<f64>,
    /// Detections in (grid[k], grid[k+1]].
    pub jump_counts: Vec<u64>,
    pub records: Vec<TrajectoryRecord>,
}

impl Ensemble {
    pub fn populations(&self, k: usize) -> [f64; 4] {
        let m = &self.mean_rho[k];
        [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re]
    }

    /// Detections per unit time and trajectory in each grid interval.
    pub fn count_rate(&self) -> Vec<f64> {
        self.jump_counts
            .iter()
            .zip(self.grid.windows(2))
            .map(|(&n, w)| n as f64 / (self.n_traj as f64 * (w[1] - w[0])))
            .collect()
    }
}

#[derive(Clone)]
struct Accum {
    rho: Vec<Mat4>,
    pop2: Vec<[f64; 4]>,
    rate: Vec<f64>,
    rate2: Vec<f64>,
    counts: Vec<u64>,
    records: Vec<TrajectoryRecord>,
}

impl Accum {
    fn new(n: usize) -> Self {
        Accum {
            rho: vec![Mat4::zeros(); n],
            pop2: vec![[0.0; 4]; n],
            rate: vec![0.0; n],
            rate2: vec![0.0; n],
            counts: vec![0; n.saturating_sub(1)],
            records: Vec::new(),
        }
    }

    fn add_state(&mut self, k: usize, psi: &Vec4, decay: &Mat4) {
        self.rho[k] += projector(psi);
        for i in 0..4 {
            self.pop2[k][i] += psi[i].norm_sqr().powi(2);
        }
        let r = (psi.adjoint() * decay * psi)[0].re;
        self.rate[k] += r;
        self.rate2[k] += r * r;
    }

    fn merge(&mut self, o: Accum) {
        for k in 0..self.rho.len() {
            self.rho[k] += o.rho[k];
            for i in 0..4 {
                self.pop2[k][i] += o.pop2[k][i];
            }
            self.rate[k] += o.rate[k];
            self.rate2[k] += o.rate2[k];
        }
        for (a, b) in self.counts.iter_mut().zip(o.counts) {
            *a += b;
        }
        self.records.extend(o.records);
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trajectory `index` in a run with master seed `seed`.
pub fn trajectory_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

fn sample_initial(rho0: &DensityMatrix4, rng: &mut ChaCha12Rng) -> Vec4 {
    let e = rho0.matrix().symmetric_eigen();
    let (imax, pmax) = e.eigenvalues.iter().enumerate().fold((0, f64::MIN), |a, (i, &p)| if p > a.1 { (i, p) } else { a });
    let pick = if pmax > 1.0 - 1e-12 {
        imax
    } else {
        let xi: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = imax;
        for i in 0..4 {
            acc += e.eigenvalues[i].max(0.0);
            if xi < acc {
                pick = i;
                break;
            }
        }
        pick
    };
    let v: Vec4 = e.eigenvectors.column(pick).into();
    v.unscale(v.norm())
}

/// Solve P(τ) = ξ on [0, tmax] given P(tmax) ≤ ξ < P(0) = 1.
fn bisect(prop: &Propagator<'_>, xi: f64, tmax: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, tmax);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if prop.norm2(mid) > xi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn run_one(
    hc: &ConditionalHamiltonian,
    rho0: &DensityMatrix4,
    grid: &[f64],
    seed: u64,
    index: usize,
    opts: &TrajectoryOptions,
    acc: &mut Accum,
) -> Result<()> {
    let tseed = trajectory_seed(seed, index);
    let mut rng = ChaCha12Rng::seed_from_u64(tseed);
    let mut psi = sample_initial(rho0, &mut rng);
    let horizon = *grid.last().unwrap();
    let mut t = grid[0];
    acc.add_state(0, &psi, &hc.decay);
    let mut next = 1;
    let mut rec = TrajectoryRecord { index, seed: tseed, jump_times: vec![], channels: vec![], post_jump_states: vec![], final_state: psi };
    loop {
        let xi = 1.0 - rng.random::<f64>();
        let prop = hc.propagator(&psi);
        let tmax = horizon - t;
        let jump = if prop.norm2(tmax) > xi { None } else { Some(bisect(&prop, xi, tmax)) };
        let t_end = jump.map_or(horizon, |tau| t + tau);
        while next < grid.len() && (grid[next] < t_end || (jump.is_none() && grid[next] <= t_end)) {
            let phi = prop.state(grid[next] - t);
            acc.add_state(next, &phi.unscale(phi.norm()), &hc.decay);
            next += 1;
        }
        let Some(tau) = jump else {
            let phi = prop.state(tmax);
            rec.final_state = phi.unscale(phi.norm());
            break;
        };
        let phi = prop.state(tau);
        let weights: Vec<f64> = hc.channels.iter().map(|(j, g)| g * (j * phi).norm_squared()).collect();
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Numerical(format!("jump at t = {} with zero emission rate", t + tau)));
        }
        let mut u = rng.random::<f64>() * total;
        let mut k = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                k = i;
                break;
            }
            u -= w;
        }
        let after = hc.channels[k].0 * phi;
        psi = after.unscale(after.norm());
        t += tau;
        if next >= 1 && next - 1 < acc.counts.len() {
            acc.counts[next - 1] += 1;
        }
        rec.jump_times.push(t);
        rec.channels.push(k);
        rec.post_jump_states.push(psi);
        if rec.jump_times.len() > opts.max_jumps {
            return Err(Error::Integration { last_good_time: t, reason: format!("jump budget {} exhausted", opts.max_jumps) });
        }
    }
    if opts.keep_records {
        acc.records.push(rec);
    }
    Ok(())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("time grid is empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) || grid[0] < 0.0 {
        return Err(Error::Domain("time grid must be finite and start at t >= 0".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("time grid must be strictly increasing".into()));
    }
    Ok(())
}

fn worker_count(opts: &TrajectoryOptions) -> Option<usize> {
    opts.threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()))
        .filter(|&n| n > 0)
}

/// Run `n_traj` trajectories of the driven vacuum problem.
pub fn run_trajectories(
    pair: &AtomPairConfig,
    drive: &DriveField,
    rho0: &DensityMatrix4,
    n_traj: usize,
    seed: u64,
    grid: &[f64],
    opts: &TrajectoryOptions,
) -> Result<Ensemble> {
    let hc = conditional_hamiltonian(pair, drive)?;
    run_with(&hc, rho0, n_traj, seed, grid, opts)
}

/// Run an ensemble for a prebuilt conditional Hamiltonian.
pub fn run_with(
    hc: &ConditionalHamiltonian,
    rho0: &DensityMatrix4,
    n_traj: usize,
    seed: u64,
    grid: &[f64],
    opts: &TrajectoryOptions,
) -> Result<Ensemble> {
    if n_traj == 0 {
        return Err(Error::Domain("n_traj must be >= 1".into()));
    }
    check_grid(grid)?;
    let n_chunks = n_traj.div_ceil(CHUNK);
    let work = || -> Vec<std::result::Result<Accum, (usize, Error)>> {
        (0..n_chunks)
            .into_par_iter()
            .map(|ci| {
                let mut acc = Accum::new(grid.len());
                for idx in ci * CHUNK..((ci + 1) * CHUNK).min(n_traj) {
                    run_one(hc, rho0, grid, seed, idx, opts, &mut acc).map_err(|e| (idx, e))?;
                }
                Ok(acc)
            })
            .collect()
    };
    let chunks = match worker_count(opts) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let mut total = Accum::new(grid.len());
    for ch in chunks {
        match ch {
            Ok(a) => total.merge(a),
            Err((idx, e)) => return Err(Error::Partial { completed: idx, reason: e.to_string() }),
        }
    }
    let n = n_traj as f64;
    let se = |s: f64, s2: f64| {
        if n_traj < 2 {
            return 0.0;
        }
        let m = s / n;
        ((s2 / n - m * m).max(0.0) / (n - 1.0)).sqrt()
    };
    let mean_rho: Vec<Mat4> = total.rho.iter().map(|m| m * re(1.0 / n)).collect();
    let population_stderr = (0..grid.len())
        .map(|k| {
            let mut out = [0.0; 4];
            for (i, o) in out.iter_mut().enumerate() {
                *o = se(total.rho[k][(i, i)].re, total.pop2[k][i]);
            }
            out
        })
        .collect();
    Ok(Ensemble {
        grid: grid.to_vec(),
        n_traj,
        mean_rho,
        population_stderr,
        emission_rate: total.rate.iter().map(|s| s / n).collect(),
        emission_stderr: total.rate.iter().zip(&total.rate2).map(|(s, s2)| se(*s, *s2)).collect(),
        jump_counts: total.counts,
        records: total.records,
    })
}
