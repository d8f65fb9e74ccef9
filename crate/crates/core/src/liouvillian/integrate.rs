//! Dormand–Prince 5(4) with step-size control, landing exactly on each requested time.

use super::{DensityMatrix4, EvolutionSeries, Generator16};
use crate::error::{Error, Result};
use crate::linalg::{re, unvec, Mat16, Vec16};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { rtol: 1e-9, atol: 1e-12, max_steps: 2_000_000 }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct Stepper<'a> {
    l: &'a Mat16,
    opts: EvolveOptions,
    h: f64,
    steps: usize,
}

impl Stepper<'_> {
    fn f(&self, y: &Vec16) -> Vec16 {
        self.l * y
    }

    /// Advance y from t to t_end, adapting the step.
    fn advance(&mut self, y: &mut Vec16, t: &mut f64, t_end: f64) -> Result<()> {
        let mut k1 = self.f(y);
        while *t < t_end {
            if self.steps >= self.opts.max_steps {
                return Err(Error::Integration { last_good_time: *t, reason: "step budget exhausted".into() });
            }
            let remaining = t_end - *t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            let k2 = self.f(&(*y + k1 * re(h * A21)));
            let k3 = self.f(&(*y + (k1 * re(A31) + k2 * re(A32)) * re(h)));
            let k4 = self.f(&(*y + (k1 * re(A41) + k2 * re(A42) + k3 * re(A43)) * re(h)));
            let k5 = self.f(&(*y + (k1 * re(A51) + k2 * re(A52) + k3 * re(A53) + k4 * re(A54)) * re(h)));
            let k6 = self.f(&(*y + (k1 * re(A61) + k2 * re(A62) + k3 * re(A63) + k4 * re(A64) + k5 * re(A65)) * re(h)));
            let y_new = *y + (k1 * re(B1) + k3 * re(B3) + k4 * re(B4) + k5 * re(B5) + k6 * re(B6)) * re(h);
            let k7 = self.f(&y_new);
            let err = (k1 * re(E1) + k3 * re(E3) + k4 * re(E4) + k5 * re(E5) + k6 * re(E6) + k7 * re(E7)) * re(h);
            let mut en = 0.0f64;
            for i in 0..16 {
                let scale = self.opts.atol + self.opts.rtol * y[i].norm().max(y_new[i].norm());
                en = en.max(err[i].norm() / scale);
            }
            if !en.is_finite() || y_new.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Integration { last_good_time: *t, reason: "non-finite state".into() });
            }
            self.steps += 1;
            if en <= 1.0 {
                *t = if last { t_end } else { *t + h };
                *y = y_new;
                k1 = k7;
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                // a step clipped to hit t_end says nothing about the natural step size
                if !last || fac < 1.0 {
                    self.h = h * fac;
                }
            } else {
                self.h = h * (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
                if self.h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::Integration { last_good_time: *t, reason: "step size underflow".into() });
                }
            }
        }
        Ok(())
    }
}

fn initial_step(l: &Mat16, y: &Vec16, opts: &EvolveOptions) -> f64 {
    let f = l * y;
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..16 {
        let s = opts.atol + opts.rtol * y[i].norm();
        d0 = d0.max(y[i].norm() / s);
        d1 = d1.max(f[i].norm() / s);
    }
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        (0.01 * d0 / d1).min(1.0)
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Invariant("time grid is empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Invariant("time grid must be finite".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invariant("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Integrate a column-stacked vector without state validation (used for regression
/// quantities that are not density matrices). The integration starts at grid[0].
pub fn evolve_vec(l: &Generator16, y0: &Vec16, grid: &[f64], opts: &EvolveOptions) -> Result<Vec<Vec16>> {
    check_grid(grid)?;
    let mut y = *y0;
    let mut t = grid[0];
    let mut stepper = Stepper { l: l.matrix(), opts: *opts, h: initial_step(l.matrix(), y0, opts), steps: 0 };
    let mut out = Vec::with_capacity(grid.len());
    out.push(y);
    for &tn in &grid[1..] {
        stepper.advance(&mut y, &mut t, tn)?;
        out.push(y);
    }
    Ok(out)
}

/// Integrate ρ̇ = Lρ from rho0 at grid[0], returning validated states at every grid time.
pub fn evolve(l: &Generator16, rho0: &DensityMatrix4, grid: &[f64], opts: &EvolveOptions) -> Result<EvolutionSeries> {
    let ys = evolve_vec(l, &rho0.to_vec16(), grid, opts)?;
    let mut states = Vec::with_capacity(ys.len());
    let mut last_good = grid[0];
    for (y, &t) in ys.iter().zip(grid) {
        let s = DensityMatrix4::new(unvec(y)).map_err(|e| Error::Integration {
            last_good_time: last_good,
            reason: format!("state left the physical set: {e}"),
        })?;
        states.push(s);
        last_good = t;
    }
    Ok(EvolutionSeries { times: grid.to_vec(), states })
}
