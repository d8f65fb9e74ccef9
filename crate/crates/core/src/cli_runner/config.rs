use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use crate::coupling_geometry::{AtomPairConfig, Coupling, DriveField, SqueezedReservoir, WaveType};
use crate::observables::DetectionGeometry;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Evolve,
    Steady,
    G2,
    Variance,
    Jump,
    Visibility,
    Sweep,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Vacuum,
    Squeezed,
    SqueezedSecular,
    DickeDressed,
    BadCavity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Ground,
    Eg,
    Ge,
    Ee,
    Symmetric,
    Antisymmetric,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeClass {
    /// |M|² = N(N+1)
    Quantum,
    /// |M| = N
    Classical,
    /// |M| from `m`
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Populations,
    Visibility,
    G2Zero,
    Variance,
    Purity,
    Entangled,
    Couplings,
    EigenRates,
    Intensity,
}

macro_rules! keyword_enum {
    ($t:ty, $what:literal, $($v:path => $s:literal),+ $(,)?) => {
        impl $t {
            pub fn as_str(&self) -> &'static str {
                match self { $($v => $s),+ }
            }
            pub fn parse(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok($v),)+
                    _ => Err(Error::Config(format!(
                        concat!("unknown ", $what, " '{}', expected one of: {}"),
                        s, [$($s),+].join(", ")
                    ))),
                }
            }
        }
    };
}

keyword_enum!(ScenarioKind, "scenario",
    ScenarioKind::Evolve => "evolve", ScenarioKind::Steady => "steady", ScenarioKind::G2 => "g2",
    ScenarioKind::Variance => "variance", ScenarioKind::Jump => "jump", ScenarioKind::Visibility => "visibility",
    ScenarioKind::Sweep => "sweep", ScenarioKind::Figure => "figure");
keyword_enum!(Model, "model",
    Model::Vacuum => "vacuum", Model::Squeezed => "squeezed", Model::SqueezedSecular => "squeezed_secular",
    Model::DickeDressed => "dicke_dressed", Model::BadCavity => "bad_cavity");
keyword_enum!(InitialState, "initial state",
    InitialState::Ground => "ground", InitialState::Eg => "eg", InitialState::Ge => "ge", InitialState::Ee => "ee",
    InitialState::Symmetric => "s", InitialState::Antisymmetric => "a", InitialState::Mixed => "mixed");
keyword_enum!(SqueezeClass, "squeezing class",
    SqueezeClass::Quantum => "quantum", SqueezeClass::Classical => "classical", SqueezeClass::Explicit => "explicit");
keyword_enum!(Quantity, "quantity",
    Quantity::Populations => "populations", Quantity::Visibility => "visibility", Quantity::G2Zero => "g2_zero",
    Quantity::Variance => "variance", Quantity::Purity => "purity", Quantity::Entangled => "entangled",
    Quantity::Couplings => "couplings", Quantity::EigenRates => "eigen_rates", Quantity::Intensity => "intensity");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Geometric,
    Dicke,
    Explicit,
}

keyword_enum!(CouplingKind, "coupling",
    CouplingKind::Geometric => "geometric", CouplingKind::Dicke => "dicke", CouplingKind::Explicit => "explicit");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta: f64,
    pub separation: f64,
    pub dipole_angle: f64,
    pub coupling: CouplingKind,
    pub gamma12: f64,
    pub omega12: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub rabi: f64,
    pub detuning: f64,
    pub propagation_angle: f64,
    pub standing: bool,
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirParams {
    pub class: SqueezeClass,
    pub n: f64,
    pub m: f64,
    pub squeeze_phase: f64,
    pub matching: f64,
    pub solid_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub g: f64,
    pub gamma_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    pub theta1: f64,
    pub theta2: f64,
    pub phi: f64,
    /// Quadrature phase for variance outputs.
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|i| if i + 1 == self.points { self.stop } else { self.start + h * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: String,
    pub range: GridSpec,
    pub quantity: Quantity,
}

/// Curves of a figure: each row of `values` assigns one value to every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub parameters: Vec<String>,
    pub values: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpParams {
    pub trajectories: usize,
    pub max_jumps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceParams {
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub figure: Option<String>,
    pub model: Model,
    pub seed: u64,
    pub output: Option<String>,
    pub pair: PairParams,
    pub drive: DriveParams,
    pub reservoir: ReservoirParams,
    pub cavity: CavityParams,
    pub detection: DetectionParams,
    pub initial: InitialState,
    pub grid: GridSpec,
    pub sweep: Option<SweepSpec>,
    pub family: Option<Family>,
    pub jump: JumpParams,
    pub tolerance: ToleranceParams,
    /// Free-text notes; serialized as comments, not reparsed.
    pub notes: Vec<String>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            kind: ScenarioKind::Steady,
            figure: None,
            model: Model::Vacuum,
            seed: 0,
            output: None,
            pair: PairParams {
                gamma1: 1.0,
                gamma2: 1.0,
                delta: 0.0,
                separation: 0.1,
                dipole_angle: FRAC_PI_2,
                coupling: CouplingKind::Geometric,
                gamma12: 0.0,
                omega12: 0.0,
            },
            drive: DriveParams { rabi: 0.0, detuning: 0.0, propagation_angle: FRAC_PI_2, standing: false, phase: 0.0 },
            reservoir: ReservoirParams {
                class: SqueezeClass::Quantum,
                n: 0.0,
                m: 0.0,
                squeeze_phase: 0.0,
                matching: 1.0,
                solid_angle: PI,
            },
            cavity: CavityParams { g: 10.0, gamma_c: 100.0 },
            detection: DetectionParams { theta1: FRAC_PI_2, theta2: FRAC_PI_2, phi: FRAC_PI_2, alpha: FRAC_PI_2 },
            initial: InitialState::Ground,
            grid: GridSpec { start: 0.0, stop: 10.0, points: 201 },
            sweep: None,
            family: None,
            jump: JumpParams { trajectories: 1000, max_jumps: 1_000_000 },
            tolerance: ToleranceParams { rtol: 1e-9, atol: 1e-12 },
            notes: Vec::new(),
        }
    }
}

/// Every accepted key, by section. The empty section holds top-level keys.
pub const KEYS: &[(&str, &[&str])] = &[
    ("", &["scenario", "figure", "model", "seed", "output"]),
    ("pair", &["gamma1", "gamma2", "delta", "separation", "dipole_angle", "coupling", "gamma12", "omega12"]),
    ("drive", &["rabi", "detuning", "propagation_angle", "wave", "phase"]),
    ("reservoir", &["class", "n", "m", "squeeze_phase", "matching", "solid_angle"]),
    ("cavity", &["g", "gamma_c"]),
    ("detection", &["theta1", "theta2", "phi", "alpha"]),
    ("initial", &["state"]),
    ("grid", &["start", "stop", "points"]),
    ("sweep", &["parameter", "start", "stop", "points", "quantity"]),
    ("family", &["parameter", "values"]),
    ("jump", &["trajectories", "max_jumps"]),
    ("tolerance", &["rtol", "atol"]),
];

/// Number with optional `pi` multiples and a single `/`: `0.5`, `pi/2`, `3pi/4`, `1/12`.
pub fn parse_number(s: &str) -> Result<f64> {
    fn atom(s: &str) -> Option<f64> {
        let s = s.trim();
        if let Some(k) = s.strip_suffix("pi") {
            let k = k.trim().trim_end_matches('*');
            let f = match k {
                "" => 1.0,
                "-" => -1.0,
                _ => k.parse::<f64>().ok()?,
            };
            return Some(f * PI);
        }
        s.parse::<f64>().ok()
    }
    let v = match s.split_once('/') {
        Some((a, b)) => atom(a).zip(atom(b)).map(|(a, b)| a / b),
        None => atom(s),
    };
    v.ok_or_else(|| Error::Config(format!("'{s}' is not a number")))
}

fn parse_count(key: &str, s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| Error::Config(format!("{key}: '{s}' is not a nonnegative integer")))
}

fn parse_bool_wave(s: &str) -> Result<bool> {
    match s {
        "running" => Ok(false),
        "standing" => Ok(true),
        _ => Err(Error::Config(format!("unknown wave '{s}', expected one of: running, standing"))),
    }
}

fn full_key(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

/// Resolve a possibly bare key to its section.
fn resolve(section: &str, key: &str) -> Result<(String, String)> {
    if let Some((s, k)) = key.split_once('.') {
        return resolve(s, k);
    }
    if let Some((_, keys)) = KEYS.iter().find(|(s, _)| *s == section) {
        if keys.contains(&key) {
            return Ok((section.to_string(), key.to_string()));
        }
        if !section.is_empty() {
            return Err(Error::Config(format!("unknown key '{}'", full_key(section, key))));
        }
    } else {
        return Err(Error::Config(format!("unknown section '[{section}]'")));
    }
    let hits: Vec<&str> = KEYS.iter().filter(|(_, ks)| ks.contains(&key)).map(|(s, _)| *s).collect();
    match hits.as_slice() {
        [s] => Ok((s.to_string(), key.to_string())),
        [] => Err(Error::Config(format!("unknown key '{key}'"))),
        _ => Err(Error::Config(format!("ambiguous key '{key}', qualify it with one of: {}", hits.join(", ")))),
    }
}

impl ScenarioConfig {
    /// Set `section.key` from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let (section, key) = resolve("", key)?;
        self.set_in(&section, &key, value)
    }

    fn set_in(&mut self, section: &str, key: &str, v: &str) -> Result<()> {
        let v = v.trim();
        let num = |v: &str| parse_number(v).map_err(|e| Error::Config(format!("{}: {e}", full_key(section, key))));
        match (section, key) {
            ("", "scenario") => self.kind = ScenarioKind::parse(v)?,
            ("", "figure") => self.figure = if v.is_empty() { None } else { Some(v.to_string()) },
            ("", "model") => self.model = Model::parse(v)?,
            ("", "seed") => self.seed = v.parse().map_err(|_| Error::Config(format!("seed: '{v}' is not an unsigned integer")))?,
            ("", "output") => self.output = if v.is_empty() { None } else { Some(v.to_string()) },
            ("pair", "gamma1") => self.pair.gamma1 = num(v)?,
            ("pair", "gamma2") => self.pair.gamma2 = num(v)?,
            ("pair", "delta") => self.pair.delta = num(v)?,
            ("pair", "separation") => self.pair.separation = num(v)?,
            ("pair", "dipole_angle") => self.pair.dipole_angle = num(v)?,
            ("pair", "coupling") => self.pair.coupling = CouplingKind::parse(v)?,
            ("pair", "gamma12") => self.pair.gamma12 = num(v)?,
            ("pair", "omega12") => self.pair.omega12 = num(v)?,
            ("drive", "rabi") => self.drive.rabi = num(v)?,
            ("drive", "detuning") => self.drive.detuning = num(v)?,
            ("drive", "propagation_angle") => self.drive.propagation_angle = num(v)?,
            ("drive", "wave") => self.drive.standing = parse_bool_wave(v)?,
            ("drive", "phase") => self.drive.phase = num(v)?,
            ("reservoir", "class") => self.reservoir.class = SqueezeClass::parse(v)?,
            ("reservoir", "n") => self.reservoir.n = num(v)?,
            ("reservoir", "m") => self.reservoir.m = num(v)?,
            ("reservoir", "squeeze_phase") => self.reservoir.squeeze_phase = num(v)?,
            ("reservoir", "matching") => self.reservoir.matching = num(v)?,
            ("reservoir", "solid_angle") => self.reservoir.solid_angle = num(v)?,
            ("cavity", "g") => self.cavity.g = num(v)?,
            ("cavity", "gamma_c") => self.cavity.gamma_c = num(v)?,
            ("detection", "theta1") => self.detection.theta1 = num(v)?,
            ("detection", "theta2") => self.detection.theta2 = num(v)?,
            ("detection", "phi") => self.detection.phi = num(v)?,
            ("detection", "alpha") => self.detection.alpha = num(v)?,
            ("initial", "state") => self.initial = InitialState::parse(v)?,
            ("grid", "start") => self.grid.start = num(v)?,
            ("grid", "stop") => self.grid.stop = num(v)?,
            ("grid", "points") => self.grid.points = parse_count("grid.points", v)?,
            ("sweep", _) => {
                let sw = self.sweep.get_or_insert_with(|| SweepSpec {
                    parameter: String::new(),
                    range: GridSpec { start: 0.0, stop: 1.0, points: 101 },
                    quantity: Quantity::Populations,
                });
                match key {
                    "parameter" => sw.parameter = v.to_string(),
                    "start" => sw.range.start = num(v)?,
                    "stop" => sw.range.stop = num(v)?,
                    "points" => sw.range.points = parse_count("sweep.points", v)?,
                    _ => sw.quantity = Quantity::parse(v)?,
                }
            }
            ("family", _) => {
                let fam = self.family.get_or_insert_with(|| Family { parameters: vec![], values: vec![] });
                if key == "parameter" {
                    fam.parameters = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                } else {
                    fam.values = v
                        .split(';')
                        .map(|row| row.split(',').map(|s| s.trim().to_string()).collect::<Vec<_>>())
                        .filter(|row| !(row.len() == 1 && row[0].is_empty()))
                        .collect();
                }
            }
            ("jump", "trajectories") => self.jump.trajectories = parse_count("jump.trajectories", v)?,
            ("jump", "max_jumps") => self.jump.max_jumps = parse_count("jump.max_jumps", v)?,
            ("tolerance", "rtol") => self.tolerance.rtol = num(v)?,
            ("tolerance", "atol") => self.tolerance.atol = num(v)?,
            _ => return Err(Error::Config(format!("unknown key '{}'", full_key(section, key)))),
        }
        Ok(())
    }

    /// Resolved configuration as `key = value` text.
    pub fn to_text(&self) -> String {
        let f = |x: f64| format!("{x}");
        let mut out = String::new();
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        let _ = writeln!(out, "scenario = {}", self.kind.as_str());
        if let Some(fig) = &self.figure {
            let _ = writeln!(out, "figure = {fig}");
        }
        let _ = writeln!(out, "model = {}", self.model.as_str());
        let _ = writeln!(out, "seed = {}", self.seed);
        if let Some(o) = &self.output {
            let _ = writeln!(out, "output = {o}");
        }
        let p = &self.pair;
        let _ = write!(
            out,
            "\n[pair]\ngamma1 = {}\ngamma2 = {}\ndelta = {}\nseparation = {}\ndipole_angle = {}\ncoupling = {}\ngamma12 = {}\nomega12 = {}\n",
            f(p.gamma1), f(p.gamma2), f(p.delta), f(p.separation), f(p.dipole_angle), p.coupling.as_str(), f(p.gamma12), f(p.omega12)
        );
        let d = &self.drive;
        let _ = write!(
            out,
            "\n[drive]\nrabi = {}\ndetuning = {}\npropagation_angle = {}\nwave = {}\nphase = {}\n",
            f(d.rabi), f(d.detuning), f(d.propagation_angle), if d.standing { "standing" } else { "running" }, f(d.phase)
        );
        let r = &self.reservoir;
        let _ = write!(
            out,
            "\n[reservoir]\nclass = {}\nn = {}\nm = {}\nsqueeze_phase = {}\nmatching = {}\nsolid_angle = {}\n",
            r.class.as_str(), f(r.n), f(r.m), f(r.squeeze_phase), f(r.matching), f(r.solid_angle)
        );
        let _ = write!(out, "\n[cavity]\ng = {}\ngamma_c = {}\n", f(self.cavity.g), f(self.cavity.gamma_c));
        let dt = &self.detection;
        let _ = write!(
            out,
            "\n[detection]\ntheta1 = {}\ntheta2 = {}\nphi = {}\nalpha = {}\n",
            f(dt.theta1), f(dt.theta2), f(dt.phi), f(dt.alpha)
        );
        let _ = write!(out, "\n[initial]\nstate = {}\n", self.initial.as_str());
        let g = &self.grid;
        let _ = write!(out, "\n[grid]\nstart = {}\nstop = {}\npoints = {}\n", f(g.start), f(g.stop), g.points);
        if let Some(s) = &self.sweep {
            let _ = write!(
                out,
                "\n[sweep]\nparameter = {}\nstart = {}\nstop = {}\npoints = {}\nquantity = {}\n",
                s.parameter, f(s.range.start), f(s.range.stop), s.range.points, s.quantity.as_str()
            );
        }
        if let Some(fam) = &self.family {
            let rows: Vec<String> = fam.values.iter().map(|r| r.join(", ")).collect();
            let _ = write!(out, "\n[family]\nparameter = {}\nvalues = {}\n", fam.parameters.join(", "), rows.join("; "));
        }
        let _ = write!(out, "\n[jump]\ntrajectories = {}\nmax_jumps = {}\n", self.jump.trajectories, self.jump.max_jumps);
        let _ = write!(out, "\n[tolerance]\nrtol = {}\natol = {}\n", f(self.tolerance.rtol), f(self.tolerance.atol));
        out
    }

    pub fn pair_config(&self) -> AtomPairConfig {
        let p = &self.pair;
        let coupling = match p.coupling {
            CouplingKind::Geometric => Coupling::Geometric,
            CouplingKind::Dicke => Coupling::Dicke,
            CouplingKind::Explicit => Coupling::Explicit { gamma12: p.gamma12, omega12: p.omega12 },
        };
        AtomPairConfig {
            gamma1: p.gamma1,
            gamma2: p.gamma2,
            delta: p.delta,
            separation: p.separation,
            dipole_angle: p.dipole_angle,
            coupling,
        }
    }

    pub fn drive_field(&self) -> DriveField {
        let d = &self.drive;
        DriveField {
            rabi: d.rabi,
            detuning: d.detuning,
            propagation_angle: d.propagation_angle,
            wave_type: if d.standing { WaveType::Standing } else { WaveType::Running },
            phase: d.phase,
        }
    }

    pub fn reservoir(&self) -> SqueezedReservoir {
        let r = &self.reservoir;
        let m = match r.class {
            SqueezeClass::Quantum => (r.n * (r.n + 1.0)).sqrt(),
            SqueezeClass::Classical => r.n,
            SqueezeClass::Explicit => r.m,
        };
        SqueezedReservoir {
            n_photons: r.n,
            m_magnitude: m,
            squeeze_phase: r.squeeze_phase,
            matching: r.matching,
            solid_angle: r.solid_angle,
            carrier_offset: 0.0,
        }
    }

    pub fn detection_geometry(&self) -> DetectionGeometry {
        DetectionGeometry { theta1: self.detection.theta1, theta2: self.detection.theta2, phi: self.detection.phi }
    }

    /// Check every physics invariant that can be checked before running.
    pub fn validate(&self) -> Result<()> {
        self.pair_config().validate()?;
        self.drive_field().validate()?;
        self.detection_geometry().validate()?;
        if matches!(self.model, Model::Squeezed | Model::SqueezedSecular) {
            self.reservoir().validate()?;
        }
        if self.model == Model::BadCavity && !(self.cavity.gamma_c > 0.0) {
            return Err(Error::Invariant("gamma_c > 0".into()));
        }
        if !(self.tolerance.rtol > 0.0 && self.tolerance.atol > 0.0) {
            return Err(Error::Invariant("rtol > 0 and atol > 0".into()));
        }
        let series = matches!(self.kind, ScenarioKind::Evolve | ScenarioKind::G2 | ScenarioKind::Variance | ScenarioKind::Jump);
        if series {
            let g = &self.grid;
            if g.points < 2 {
                return Err(Error::Invariant("grid points >= 2".into()));
            }
            if !(g.start >= 0.0 && g.stop > g.start && g.stop.is_finite()) {
                return Err(Error::Invariant("0 <= grid start < grid stop".into()));
            }
        }
        if self.kind == ScenarioKind::Jump {
            if self.jump.trajectories < 1 {
                return Err(Error::Invariant("trajectories >= 1".into()));
            }
            if self.model != Model::Vacuum {
                return Err(Error::Config("jump scenario requires model = vacuum".into()));
            }
        }
        if self.kind == ScenarioKind::Sweep {
            let Some(sw) = &self.sweep else {
                return Err(Error::Config("sweep scenario requires a [sweep] section".into()));
            };
            if sw.range.points < 2 {
                return Err(Error::Invariant("sweep points >= 2".into()));
            }
            resolve("", &sw.parameter)?;
        }
        if let Some(fam) = &self.family {
            if fam.parameters.is_empty() || fam.values.is_empty() {
                return Err(Error::Config("[family] needs parameter and values".into()));
            }
            for p in &fam.parameters {
                resolve("", p)?;
            }
            if let Some(row) = fam.values.iter().find(|r| r.len() != fam.parameters.len()) {
                return Err(Error::Config(format!(
                    "family row '{}' has {} values for {} parameters",
                    row.join(", "),
                    row.len(),
                    fam.parameters.len()
                )));
            }
            for row in &fam.values {
                self.with_assignments(&fam.parameters, row)?.validate_physics()?;
            }
        }
        Ok(())
    }

    fn validate_physics(&self) -> Result<()> {
        self.pair_config().validate()?;
        self.drive_field().validate()?;
        if matches!(self.model, Model::Squeezed | Model::SqueezedSecular) {
            self.reservoir().validate()?;
        }
        Ok(())
    }

    /// Copy with `keys[i] = values[i]` applied.
    pub fn with_assignments(&self, keys: &[String], values: &[String]) -> Result<ScenarioConfig> {
        let mut c = self.clone();
        for (k, v) in keys.iter().zip(values) {
            c.set(k, v)?;
        }
        Ok(c)
    }
}

/// Parse `key = value` text with `[section]` headers and `#` comments.
///
/// With `scenario = figure`, the named preset is loaded first and the remaining keys override it.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut section = String::new();
    let mut entries: Vec<(String, String, String, usize)> = Vec::new();
    let mut notes = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        if let Some(n) = raw.trim_start().strip_prefix("# note:") {
            notes.push(n.trim().to_string());
            continue;
        }
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Config(format!("line {}: unterminated section header", ln + 1)))?
                .trim();
            if !KEYS.iter().any(|(s, _)| *s == name) || name.is_empty() {
                return Err(Error::Config(format!("line {}: unknown section '[{name}]'", ln + 1)));
            }
            section = name.to_string();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", ln + 1)))?;
        let (s, k) = resolve(&section, k.trim()).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("line {}: {m}", ln + 1)),
            e => e,
        })?;
        entries.push((s, k, v.trim().to_string(), ln + 1));
    }
    let is_figure = entries.iter().any(|(s, k, v, _)| s.is_empty() && k == "scenario" && v == "figure");
    let mut cfg = if is_figure {
        let id = entries
            .iter()
            .find(|(s, k, _, _)| s.is_empty() && k == "figure")
            .map(|e| e.2.clone())
            .ok_or_else(|| Error::Config("scenario = figure requires 'figure = <id>'".into()))?;
        super::presets::figure_preset(&id)?
    } else {
        ScenarioConfig::default()
    };
    for (s, k, v, ln) in &entries {
        if is_figure && s.is_empty() && (k == "scenario" || k == "figure") {
            continue;
        }
        cfg.set_in(s, k, v).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("line {ln}: {m}")),
            e => e,
        })?;
    }
    cfg.notes.extend(notes);
    cfg.validate()?;
    Ok(cfg)
}
