//! Scenario-driven front end: configuration, dispatch, and tabular output.

mod config;
mod presets;

pub use config::*;
pub use presets::{figure_preset, FIGURES};

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::collective_basis::{build_basis, collective_element, eigenbasis_rates, Collective};
use crate::coupling_geometry::{collective_damping, dipole_dipole_shift, AtomPairConfig};
use crate::linalg::{basis_ket, c, EE, EG, GE};
use crate::liouvillian::*;
use crate::observables::*;
use crate::oracles::entangled_eigenstates;
use crate::quantum_jump::{run_trajectories, TrajectoryOptions};
use crate::{Error, Result};

pub const ENGINE: &str = concat!("twoatom ", env!("CARGO_PKG_VERSION"));

const CONFIG_BEGIN: &str = "# --- config ---";
const CONFIG_END: &str = "# --- end config ---";

/// Rectangular numeric output with a metadata block.
#[derive(Debug, Clone)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
    pub config: ScenarioConfig,
    /// JSON-lines trajectory records (jump scenarios only).
    pub records: Vec<String>,
}

impl ResultTable {
    /// CSV with a commented metadata header that embeds the resolved config.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "{CONFIG_BEGIN}");
        for line in self.config.to_text().lines() {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{CONFIG_END}");
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Rows belonging to family curve `k`.
    pub fn curve(&self, k: usize) -> Vec<&Vec<f64>> {
        self.rows.iter().filter(|r| r[0] == k as f64).collect()
    }
}

/// Recover the configuration embedded in a CSV written by [`ResultTable::to_csv`].
pub fn config_from_csv(text: &str) -> Result<ScenarioConfig> {
    let mut inside = false;
    let mut cfg = String::new();
    for line in text.lines() {
        if line == CONFIG_BEGIN {
            inside = true;
        } else if line == CONFIG_END {
            return parse_config(&cfg);
        } else if inside {
            cfg.push_str(line.strip_prefix("# ").unwrap_or(line.trim_start_matches('#')));
            cfg.push('\n');
        }
    }
    Err(Error::Config("no embedded config block found".into()))
}

fn context(e: Error, ctx: &str) -> Error {
    match e {
        Error::Invariant(m) => Error::Invariant(format!("{ctx}: {m}")),
        Error::Domain(m) => Error::Domain(format!("{ctx}: {m}")),
        Error::InvalidState(m) => Error::InvalidState(format!("{ctx}: {m}")),
        Error::Integration { last_good_time, reason } => Error::Integration { last_good_time, reason: format!("{ctx}: {reason}") },
        Error::Numerical(m) => Error::Numerical(format!("{ctx}: {m}")),
        Error::Undefined(m) => Error::Undefined(format!("{ctx}: {m}")),
        Error::Config(m) => Error::Config(format!("{ctx}: {m}")),
        Error::Partial { completed, reason } => Error::Partial { completed, reason: format!("{ctx}: {reason}") },
    }
}

fn generator(cfg: &ScenarioConfig) -> Result<(Generator16, AtomPairConfig)> {
    let pair = cfg.pair_config();
    let drive = cfg.drive_field();
    Ok(match cfg.model {
        Model::Vacuum => (build_vacuum_drive(&pair, &drive)?, pair),
        Model::Squeezed => (build_squeezed(&pair, &cfg.reservoir())?, pair),
        Model::SqueezedSecular => (build_squeezed_secular(&pair, &cfg.reservoir())?, pair),
        Model::DickeDressed => (build_dicke_dressed(&drive)?, AtomPairConfig::dicke()),
        Model::BadCavity => (build_bad_cavity(&pair, cfg.cavity.g, cfg.cavity.gamma_c, drive.rabi)?, pair),
    })
}

fn initial_state(s: InitialState) -> Result<DensityMatrix4> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match s {
        InitialState::Ground => DensityMatrix4::ground(),
        InitialState::Eg => DensityMatrix4::basis(EG),
        InitialState::Ge => DensityMatrix4::basis(GE),
        InitialState::Ee => DensityMatrix4::basis(EE),
        InitialState::Symmetric => DensityMatrix4::pure(&((basis_ket(EG) + basis_ket(GE)) * c(h, 0.0)))?,
        InitialState::Antisymmetric => DensityMatrix4::pure(&((basis_ket(EG) - basis_ket(GE)) * c(h, 0.0)))?,
        InitialState::Mixed => DensityMatrix4::maximally_mixed(),
    })
}

fn evolve_options(cfg: &ScenarioConfig) -> EvolveOptions {
    EvolveOptions { rtol: cfg.tolerance.rtol, atol: cfg.tolerance.atol, ..EvolveOptions::default() }
}

fn product_populations(rho: &DensityMatrix4) -> [f64; 4] {
    [0, 1, 2, 3].map(|i| rho.get(i, i).re)
}

struct Curve {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    notes: Vec<String>,
    records: Vec<String>,
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn quantity_columns(q: Quantity) -> Vec<String> {
    names(match q {
        Quantity::Populations => &["rho_gg", "rho_ss", "rho_aa", "rho_ee"],
        Quantity::Visibility => &["visibility"],
        Quantity::G2Zero => &["g2_zero"],
        Quantity::Variance => &["variance"],
        Quantity::Purity => &["purity"],
        Quantity::Entangled => &["p1", "p2", "p3", "p4"],
        Quantity::Couplings => &["gamma12", "omega12"],
        Quantity::EigenRates => &["gamma_s", "gamma_a"],
        Quantity::Intensity => &["intensity"],
    })
}

fn quantity(cfg: &ScenarioConfig, q: Quantity) -> Result<Vec<f64>> {
    let pair = cfg.pair_config();
    match q {
        Quantity::Couplings => {
            let norm = (pair.gamma1 * pair.gamma2).sqrt();
            return Ok(vec![collective_damping(&pair) / norm, dipole_dipole_shift(&pair)? / norm]);
        }
        Quantity::EigenRates => {
            let basis = build_basis(&pair)?;
            let (s, a, _) = eigenbasis_rates(&basis, pair.gamma1, collective_damping(&pair));
            return Ok(vec![s, a]);
        }
        _ => {}
    }
    let (l, pair) = generator(cfg)?;
    let rho = steady_state(&l)?.rho;
    Ok(match q {
        Quantity::Populations => collective_populations(&rho).to_vec(),
        Quantity::Visibility => vec![visibility(&rho)?],
        Quantity::G2Zero => vec![g2_zero(&rho, &pair, &cfg.detection_geometry())?],
        Quantity::Variance => vec![quadrature_variance(&rho, &pair, cfg.detection.alpha, &cfg.detection_geometry())?],
        Quantity::Purity => vec![purity(&rho)],
        Quantity::Entangled => entangled_eigenstates(&rho).populations.to_vec(),
        Quantity::Intensity => vec![total_intensity(&rho, &pair)],
        Quantity::Couplings | Quantity::EigenRates => unreachable!(),
    })
}

fn run_curve(cfg: &ScenarioConfig, curve: usize) -> Result<Curve> {
    let mut notes = Vec::new();
    let mut records = Vec::new();
    let (columns, rows) = match cfg.kind {
        ScenarioKind::Evolve => {
            let (l, pair) = generator(cfg)?;
            notes.extend(l.notes.iter().cloned());
            let grid = cfg.grid.values();
            let series = evolve(&l, &initial_state(cfg.initial)?, &grid, &evolve_options(cfg))?;
            let rows = grid
                .iter()
                .zip(&series.states)
                .map(|(t, rho)| {
                    let p = product_populations(rho);
                    let col = collective_populations(rho);
                    vec![*t, p[0], p[1], p[2], p[3], col[1], col[2], total_intensity(rho, &pair)]
                })
                .collect();
            (names(&["t", "p_gg", "p_eg", "p_ge", "p_ee", "rho_ss", "rho_aa", "intensity"]), rows)
        }
        ScenarioKind::Steady => {
            let (l, pair) = generator(cfg)?;
            notes.extend(l.notes.iter().cloned());
            let ss = steady_state(&l)?;
            let m = ss.rho.matrix();
            let col = collective_populations(&ss.rho);
            use Collective::*;
            let es = collective_element(m, E, S);
            let sg = collective_element(m, S, G);
            let eg = collective_element(m, E, G);
            let row = vec![
                col[0], col[1], col[2], col[3], es.re, es.im, sg.re, sg.im, eg.re, eg.im,
                total_intensity(&ss.rho, &pair), purity(&ss.rho), if ss.degenerate { 1.0 } else { 0.0 },
            ];
            let cols = names(&[
                "rho_gg", "rho_ss", "rho_aa", "rho_ee", "re_rho_es", "im_rho_es", "re_rho_sg", "im_rho_sg", "re_rho_eg",
                "im_rho_eg", "intensity", "purity", "degenerate",
            ]);
            (cols, vec![row])
        }
        ScenarioKind::G2 => {
            let (l, pair) = generator(cfg)?;
            notes.extend(l.notes.iter().cloned());
            let rho = steady_state(&l)?.rho;
            let s = g2_tau(&l, &rho, &pair, &cfg.detection_geometry(), &cfg.grid.values())?;
            (names(&["tau", "g2"]), s.tau.iter().zip(&s.values).map(|(t, v)| vec![*t, *v]).collect())
        }
        ScenarioKind::Variance => {
            let (l, pair) = generator(cfg)?;
            notes.extend(l.notes.iter().cloned());
            let grid = cfg.grid.values();
            let series = evolve(&l, &initial_state(cfg.initial)?, &grid, &evolve_options(cfg))?;
            let geom = cfg.detection_geometry();
            let rows = grid
                .iter()
                .zip(&series.states)
                .map(|(t, rho)| Ok(vec![*t, quadrature_variance(rho, &pair, cfg.detection.alpha, &geom)?]))
                .collect::<Result<Vec<_>>>()?;
            (names(&["t", "variance"]), rows)
        }
        ScenarioKind::Visibility => {
            let (l, _) = generator(cfg)?;
            notes.extend(l.notes.iter().cloned());
            (names(&["visibility"]), vec![vec![visibility(&steady_state(&l)?.rho)?]])
        }
        ScenarioKind::Jump => {
            let grid = cfg.grid.values();
            let opts = TrajectoryOptions { max_jumps: cfg.jump.max_jumps, ..TrajectoryOptions::default() };
            let ens = run_trajectories(
                &cfg.pair_config(),
                &cfg.drive_field(),
                &initial_state(cfg.initial)?,
                cfg.jump.trajectories,
                cfg.seed,
                &grid,
                &opts,
            )?;
            for r in &ens.records {
                let line = serde_json::json!({
                    "curve": curve,
                    "index": r.index,
                    "seed": r.seed,
                    "count": r.jump_times.len(),
                    "jump_times": r.jump_times,
                    "channels": r.channels,
                });
                records.push(line.to_string());
            }
            let rows = (0..grid.len())
                .map(|k| {
                    let p = ens.populations(k);
                    let se = ens.population_stderr[k];
                    let jumps = if k == 0 { 0.0 } else { ens.jump_counts[k - 1] as f64 };
                    vec![grid[k], p[0], p[1], p[2], p[3], se[0], se[1], se[2], se[3], ens.emission_rate[k], ens.emission_stderr[k], jumps]
                })
                .collect();
            let cols = names(&[
                "t", "p_gg", "p_eg", "p_ge", "p_ee", "se_gg", "se_eg", "se_ge", "se_ee", "emission_rate", "emission_stderr", "jumps",
            ]);
            (cols, rows)
        }
        ScenarioKind::Sweep => {
            let sw = cfg.sweep.as_ref().ok_or_else(|| Error::Config("sweep scenario requires a [sweep] section".into()))?;
            let xs = sw.range.values();
            let key = [sw.parameter.clone()];
            let rows = xs
                .par_iter()
                .map(|x| {
                    let point = cfg.with_assignments(&key, &[format!("{x}")])?;
                    let mut row = vec![*x];
                    row.extend(quantity(&point, sw.quantity).map_err(|e| context(e, &format!("{} = {x}", sw.parameter)))?);
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut cols = vec![sw.parameter.clone()];
            cols.extend(quantity_columns(sw.quantity));
            (cols, rows)
        }
        ScenarioKind::Figure => return Err(Error::Config("figure scenario must be resolved through parse_config".into())),
    };
    Ok(Curve { columns, rows, notes, records })
}

/// Run a validated configuration. Deterministic given (config, seed).
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let start = Instant::now();
    let curves: Vec<(ScenarioConfig, String)> = match &cfg.family {
        Some(f) => f
            .values
            .iter()
            .map(|row| {
                let label = f.parameters.iter().zip(row).map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
                Ok((cfg.with_assignments(&f.parameters, row)?, label))
            })
            .collect::<Result<_>>()?,
        None => vec![(cfg.clone(), String::new())],
    };
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    let mut metadata = vec![("engine".to_string(), ENGINE.to_string())];
    let mut records = Vec::new();
    for (k, (c, label)) in curves.iter().enumerate() {
        let ctx = if label.is_empty() { format!("scenario {}", c.kind.as_str()) } else { format!("scenario {} [{label}]", c.kind.as_str()) };
        let out = run_curve(c, k).map_err(|e| context(e, &ctx))?;
        if k == 0 {
            columns = std::iter::once("curve".to_string()).chain(out.columns).collect();
        }
        if !label.is_empty() {
            metadata.push((format!("curve {k}"), label.clone()));
        }
        for n in out.notes {
            if !metadata.iter().any(|(key, v)| key == "generator" && *v == n) {
                metadata.push(("generator".into(), n));
            }
        }
        rows.extend(out.rows.into_iter().map(|r| std::iter::once(k as f64).chain(r).collect()));
        records.extend(out.records);
    }
    metadata.push(("wall_time_s".into(), format!("{:.3}", start.elapsed().as_secs_f64())));
    Ok(ResultTable { columns, rows, metadata, config: cfg.clone(), records })
}

/// Write the CSV (and `.jsonl` records next to it when present).
pub fn write_outputs(table: &ResultTable, path: &std::path::Path) -> std::io::Result<()> {
    std::fs::write(path, table.to_csv())?;
    if !table.records.is_empty() {
        let mut text = table.records.join("\n");
        text.push('\n');
        std::fs::write(path.with_extension("jsonl"), text)?;
    }
    Ok(())
}
