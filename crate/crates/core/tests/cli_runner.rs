use std::process::Command;
use twoatom::cli_runner::*;
use twoatom::coupling_geometry::AtomPairConfig;
use twoatom::oracles::{analytic_steady, SteadyScenario};
use twoatom::Error;

const BEATS: &str = "\
# quantum beats, one atom excited
scenario = evolve
seed = 7

[pair]
separation = 1/12
delta = -2
dipole_angle = pi/2

[initial]
state = eg

[grid]
stop = 8
points = 81
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twoatom"))
}

#[test]
fn minimal_config_gets_defaults() {
    let c = parse_config("scenario = steady\n[pair]\nseparation = 0.2\n").unwrap();
    assert_eq!(c.kind, ScenarioKind::Steady);
    assert_eq!(c.pair.separation, 0.2);
    let d = ScenarioConfig::default();
    assert_eq!(c.drive, d.drive);
    assert_eq!(c.grid, d.grid);
    assert_eq!(c.tolerance, d.tolerance);
    let text = c.to_text();
    for key in ["rtol = ", "points = ", "gamma1 = ", "propagation_angle = "] {
        assert!(text.contains(key), "{key}");
    }
}

#[test]
fn negative_separation_names_the_invariant() {
    let e = parse_config("scenario = steady\n[pair]\nseparation = -1\n").unwrap_err();
    assert!(matches!(e, Error::Invariant(_)));
    assert!(e.to_string().contains("separation >= 0"));
}

#[test]
fn unknown_key_is_named() {
    let e = parse_config("scenario = steady\n[pair]\nseperation = 0.1\n").unwrap_err();
    assert!(e.to_string().contains("pair.seperation"), "{e}");
    let e = parse_config("[bogus]\nx = 1\n").unwrap_err();
    assert!(e.to_string().contains("bogus"));
    assert!(parse_config("scenario = stedy\n").unwrap_err().to_string().contains("stedy"));
}

#[test]
fn number_syntax() {
    assert_eq!(parse_number("pi/2").unwrap(), std::f64::consts::FRAC_PI_2);
    assert_eq!(parse_number("3pi/4").unwrap(), 0.75 * std::f64::consts::PI);
    assert_eq!(parse_number("1/12").unwrap(), 1.0 / 12.0);
    assert_eq!(parse_number("-2").unwrap(), -2.0);
    assert!(parse_number("two").is_err());
}

#[test]
fn config_round_trips() {
    let c = parse_config(BEATS).unwrap();
    assert_eq!(c.pair.separation, 1.0 / 12.0);
    assert_eq!(c.pair.delta, -2.0);
    let again = parse_config(&c.to_text()).unwrap();
    assert_eq!(again, c);
    assert_eq!(again.to_text(), c.to_text());
}

#[test]
fn presets_round_trip() {
    for id in FIGURES {
        let c = figure_preset(id).unwrap();
        assert_eq!(parse_config(&c.to_text()).unwrap(), c, "{id}");
    }
}

#[test]
fn steady_row_matches_driven_closed_form() {
    let c = parse_config("scenario = steady\n[pair]\nseparation = 0.1\n[drive]\nrabi = 0.5\n").unwrap();
    let t = run_scenario(&c).unwrap();
    let (g12, o12) = AtomPairConfig::identical(0.1, std::f64::consts::FRAC_PI_2).couplings().unwrap();
    let r = analytic_steady(&SteadyScenario::Driven { gamma: 1.0, gamma12: g12, omega12: o12, rabi: 0.5, detuning: 0.0 }).unwrap();
    let get = |name: &str| t.column(name).unwrap()[0];
    assert!((get("rho_ee") - r.rho_ee.unwrap()).abs() < 1e-10);
    assert!((get("rho_ss") - r.rho_ss.unwrap()).abs() < 1e-10);
    assert!((get("rho_aa") - r.rho_aa.unwrap()).abs() < 1e-10);
    assert!((get("rho_gg") - r.rho_gg.unwrap()).abs() < 1e-10);
    assert_eq!(get("degenerate"), 0.0);
}

#[test]
fn jump_runs_are_reproducible() {
    let text = "scenario = jump\nseed = 42\n[pair]\nseparation = 0.2\n[drive]\nrabi = 1\n[grid]\nstop = 3\npoints = 7\n[jump]\ntrajectories = 200\n";
    let c = parse_config(text).unwrap();
    let a = run_scenario(&c).unwrap();
    let b = run_scenario(&c).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.records, b.records);
    assert_eq!(a.records.len(), 200);
    let first: serde_json::Value = serde_json::from_str(&a.records[0]).unwrap();
    assert_eq!(first["index"], 0);
    let other = run_scenario(&c.with_assignments(&["seed".into()], &["43".into()]).unwrap()).unwrap();
    assert_ne!(a.rows, other.rows);
}

#[test]
fn antisymmetric_population_peaks_at_minus_omega12() {
    let mut c = figure_preset("fig13").unwrap();
    c.family = None;
    c.sweep.as_mut().unwrap().range = GridSpec { start: -20.0, stop: 20.0, points: 401 };
    let t = run_scenario(&c).unwrap();
    let x = t.column("drive.detuning").unwrap();
    let aa = t.column("rho_aa").unwrap();
    let k = (0..aa.len()).max_by(|&i, &j| aa[i].total_cmp(&aa[j])).unwrap();
    let peak = x[k];
    assert!((peak + c.pair.omega12).abs() < 1.0, "peak at {peak}");
    // nearly pure |a⟩ at the peak, almost empty on the symmetric resonance
    assert!(aa[k] > 0.9);
    assert!(aa[300] < 0.01);
}

#[test]
fn csv_replays_bit_identically() {
    let c = parse_config(BEATS).unwrap();
    let t = run_scenario(&c).unwrap();
    let csv = t.to_csv();
    assert!(csv.starts_with("# engine = twoatom "));
    assert!(csv.lines().all(|l| !l.contains(";")));
    let back = config_from_csv(&csv).unwrap();
    assert_eq!(back, c);
    assert_eq!(run_scenario(&back).unwrap().rows, t.rows);
    assert!(config_from_csv("t,x\n1,2\n").is_err());
}

#[test]
fn family_curves_are_labelled() {
    let mut c = figure_preset("fig4").unwrap();
    c.grid.points = 11;
    let t = run_scenario(&c).unwrap();
    assert_eq!(t.columns[0], "curve");
    assert_eq!(t.rows.len(), 33);
    assert_eq!(t.curve(2).len(), 11);
    assert!(t.metadata.iter().any(|(k, v)| k == "curve 1" && v == "pair.delta=-2"));
    assert!(t.rows.iter().all(|r| r.len() == t.columns.len()));
}

#[test]
fn figure_presets_follow_captions() {
    let f4 = figure_preset("fig4").unwrap();
    assert_eq!(f4.pair.separation, 1.0 / 12.0);
    assert_eq!(f4.pair.dipole_angle, std::f64::consts::FRAC_PI_2);
    assert_eq!(f4.family.as_ref().unwrap().values, vec![vec!["0"], vec!["-2"], vec!["-3"]]);
    let f8 = figure_preset("fig8").unwrap();
    assert_eq!(f8.kind, ScenarioKind::G2);
    assert_eq!(f8.family.as_ref().unwrap().values, vec![vec!["2.5"], vec!["10"]]);
    let f20 = figure_preset("fig20").unwrap();
    assert_eq!(f20.reservoir.class, SqueezeClass::Quantum);
    assert_eq!(f20.family.as_ref().unwrap().values, vec![vec!["0.05"], vec!["0.5"], vec!["5"]]);
    assert_eq!(f20.sweep.as_ref().unwrap().quantity, Quantity::Purity);
}

#[test]
fn unknown_figure_lists_presets() {
    let e = figure_preset("fig2").unwrap_err();
    assert!(matches!(e, Error::Config(_)));
    assert!(e.to_string().contains("fig1, fig3"));
}

#[test]
fn cli_validate_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.cfg");
    std::fs::write(&good, BEATS).unwrap();
    let out = bin().arg("validate").arg(&good).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("separation = 0.08333333333333333"));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "scenario = steady\n[pair]\nseparation = -1\n").unwrap();
    let out = bin().arg("validate").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("separation >= 0"));

    let out = bin().args(["figure", "fig99"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Ω₁₂ diverges at contact for a geometric pair: a domain error in the input
    let contact = dir.path().join("contact.cfg");
    std::fs::write(&contact, "scenario = steady\n[pair]\nseparation = 0\n").unwrap();
    let out = bin().arg("run").arg(&contact).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverges"));

    // undriven atoms stay in the ground state, where the visibility is undefined
    let num = dir.path().join("num.cfg");
    std::fs::write(&num, "scenario = visibility\n[pair]\nseparation = 0.2\n").unwrap();
    let out = bin().arg("run").arg(&num).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cli_run_writes_csv_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("jump.cfg");
    std::fs::write(&cfg, "scenario = jump\nseed = 1\n[drive]\nrabi = 1\n[grid]\nstop = 1\npoints = 3\n[jump]\ntrajectories = 5\n").unwrap();
    let out = dir.path().join("jump.csv");
    let status = bin().args(["--threads", "2", "run"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("t,p_gg"));
    let jsonl = std::fs::read_to_string(out.with_extension("jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 5);
}
