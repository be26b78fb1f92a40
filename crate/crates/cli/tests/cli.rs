use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn rossby(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rossby")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, config: &Value) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

fn run(command: &str, config: &Path) -> Output {
    rossby(&[command, config.to_str().unwrap()])
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn family1() -> Value {
    json!({
        "physical": {"beta": 1.0, "depth": std::f64::consts::PI, "drift": 0.0},
        "family": {"id": 1, "n": 1, "amplitude": 0.0},
        "modes": [{"kind": "plane_wave", "amplitude": 1.0}],
        "sampling": {"n_points": 400},
        "outputs": {"report": "report.json"}
    })
}

#[test]
fn list_families() {
    let out = rossby(&["list-families"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let entries: Vec<&str> = text.lines().filter(|l| l.starts_with("family ")).collect();
    assert_eq!(entries.len(), 9);
    let block = |id: u32| -> String {
        let start = text.find(&format!("family {id}:")).unwrap();
        let end = text[start + 1..].find("\nfamily ").map(|e| start + 1 + e).unwrap_or(text.len());
        text[start..end].to_string()
    };
    assert!(block(4).contains("kz < kr"));
    assert!(block(1).contains("n (integer)"));
    assert!(rossby(&["--quiet", "list-families"]).stdout.is_empty());
}

#[test]
fn verify_passes_and_echoes_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.json", &family1());
    let out = run("verify", &config);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("all checks passed"));

    let first = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(report["pass"], true);
    let echo = &report["config"];
    assert_eq!(echo["sampling"]["seed"], 0);
    assert_eq!(echo["sampling"]["fd_step"], 1e-3);
    assert_eq!(echo["modes"][0]["kappa"], 1.0);
    assert_eq!(echo["family"]["id"], 1);

    // the echoed config reproduces the run
    let again = write_config(dir.path(), "again.json", echo);
    let out = run("verify", &again);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(dir.path().join("report.json")).unwrap(), first);

    let out = rossby(&["--quiet", "verify", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let mut bad = family1();
    bad["family"] = json!({"id": 4, "kz": 2.0, "kr": 1.0});
    let out = run("verify", &write_config(dir.path(), "constraint.json", &bad));
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("kz < kr"), "{}", stderr(&out));

    let mut resonant = family1();
    resonant["family"] = json!({"id": 6, "kz": 1e-4});
    resonant["physical"]["depth"] = json!(1.0);
    let out = run("verify", &write_config(dir.path(), "resonant.json", &resonant));
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ResonantDepth"), "{}", stderr(&out));

    let mut typo = family1();
    typo["sampling"]["n_pionts"] = json!(10);
    let out = run("verify", &write_config(dir.path(), "typo.json", &typo));
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("sampling") && err.contains("n_pionts") && err.contains("line"), "{err}");

    let mut mismatch = family1();
    mismatch["modes"][0]["kappa"] = json!(2.0);
    let out = run("verify", &write_config(dir.path(), "mismatch.json", &mismatch));
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("WavenumberMismatch"));

    // a tolerance no solution can meet makes the checks fail
    let mut strict = family1();
    strict["sampling"]["tolerances"] = json!({"fd": 1e-30});
    let out = run("verify", &write_config(dir.path(), "strict.json", &strict));
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert_eq!(report["checks"]["pde_fd"]["pass"], false);

    assert_eq!(rossby(&["verify", "/nonexistent/config.json"]).status.code(), Some(1));
    assert_eq!(rossby(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn build_writes_fields() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = family1();
    config["grid"] = json!({"nx": 2, "ny": 2, "nz": 2, "x": [-1.0, 1.0], "y": [-1.0, 1.0], "z": [0.0, 1.0]});
    config["outputs"] = json!({"csv": "field.csv", "vtk": "field.vtk"});
    let out = run("build", &write_config(dir.path(), "build.json", &config));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("min") && stdout(&out).contains("max"));
    assert_eq!(fs::read_to_string(dir.path().join("field.csv")).unwrap().lines().count(), 9);
    assert!(fs::read_to_string(dir.path().join("field.vtk")).unwrap().contains("DIMENSIONS 2 2 2"));

    config["outputs"] = json!({"csv": "missing-dir/field.csv"});
    let out = run("build", &write_config(dir.path(), "unwritable.json", &config));
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing-dir"));

    config["grid"]["z"] = json!([0.0, 10.0]);
    let out = run("build", &write_config(dir.path(), "deep.json", &config));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn vortex_build_loads_in_vtk_reader() {
    let dir = tempfile::tempdir().unwrap();
    let config = json!({
        "physical": {"beta": 1.0, "depth": 2.0, "drift": 0.3},
        "family": {"id": 7, "kz": 0.4, "kr": 1.0},
        "modes": [{"kind": "vortex", "order": 1, "amplitude": 1.0, "center": [0.5, 0.0]}],
        "grid": {"nx": 8, "ny": 6, "nz": 3, "x": [-4.0, 4.0], "y": [-3.0, 3.0], "z": [0.0, 2.0], "t": 1.0},
        "outputs": {"vtk": "vortex.vtk"}
    });
    let out = run("build", &write_config(dir.path(), "vortex.json", &config));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let vtk = vtkio::Vtk::import(dir.path().join("vortex.vtk")).unwrap();
    let vtkio::model::DataSet::RectilinearGrid { pieces, .. } = vtk.data else { panic!("not a rectilinear grid") };
    let piece = pieces.into_iter().next().unwrap().into_loaded_piece_data(None).unwrap();
    assert_eq!(piece.extent.clone().into_dims(), [8, 6, 3]);
    assert_eq!(piece.data.point.len(), 3);
}

#[test]
fn sweep_tabulates_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = json!({
        "physical": {"beta": 1.0, "depth": 1.0},
        "family": {"id": 3, "kz": 1.0, "kr": 1.0},
        "sweep": {"parameter": "kr", "range": [0.1, 5.0], "samples": 300},
        "outputs": {"sweep_csv": "sweep.csv"}
    });
    let out = run("sweep", &write_config(dir.path(), "sweep.json", &config));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kr,m,denominator,resonant"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 300);
    assert!(rows.iter().any(|r| r[3] == "true"));
    assert!(stdout(&out).contains("resonances"));

    // no denominator zero on a short interval
    config["sweep"]["range"] = json!([0.1, 0.5]);
    config["outputs"] = json!({});
    let out = run("sweep", &write_config(dir.path(), "quiet-range.json", &config));
    assert_eq!(out.status.code(), Some(0));
    let table = stdout(&out);
    assert!(table.lines().skip(1).all(|l| l.ends_with(",false")), "{table}");

    config["sweep"]["range"] = json!([2.0, 2.0]);
    let out = run("sweep", &write_config(dir.path(), "empty.json", &config));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_match_shipped_schema() {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let check = |report: &Value| {
        let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path())).collect();
        assert!(errors.is_empty(), "{errors:#?}");
    };

    let dir = tempfile::tempdir().unwrap();
    let mut vortex = family1();
    vortex["physical"] = json!({"beta": 1.0, "depth": 2.0, "drift": 0.3});
    vortex["family"] = json!({"id": 7, "kz": 0.4, "kr": 1.0});
    vortex["modes"] = json!([
        {"kind": "vortex", "order": 2, "amplitude": 1.0, "center": [0.5, 0.0]},
        {"kind": "plane_wave", "amplitude": 0.2}
    ]);
    for (name, config) in [("plain.json", family1()), ("vortex.json", vortex)] {
        let out = run("verify", &write_config(dir.path(), name, &config));
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        check(&serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap());
    }

    // family 9 has K = 0 and a perturbed solution adds its own section
    use rossby_core::*;
    let phys = PhysicalParams::new(1.0, 2.0, 0.1).unwrap();
    let spec = validate(&FamilySpec::new(9, 0.7, 0.0).unwrap(), &phys).unwrap();
    let solution = build_solution(&spec, &phys, plane_wave(spec.kappa(), 1.0, 0.0, 0.3).unwrap()).unwrap();
    let plan = SamplingPlan { n_points: 50, ..SamplingPlan::default() };
    let report = verify_solution(&solution.perturbed(Perturbation::ScaleM(1.01)).unwrap(), &plan).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["perturbation"]["kind"], "scale_m");
    check(&json);

    let mut broken = json.clone();
    broken["checks"]["pde_fd"]["max"] = json!("large");
    assert!(!validator.is_valid(&broken));
}
