use std::path::Path;
use std::process::{Command, Output};

fn floercalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floercalc"))
        .args(args)
        .env_remove("FLOERCALC_CORPUS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn table(o: &Output) -> Vec<(i64, usize)> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| {
            let (k, r) = l.split_once('\t').expect("k<TAB>rank");
            (k.parse().unwrap(), r.parse().unwrap())
        })
        .collect()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&floercalc(&["validate", "corpus/trefoil_rh.json"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"name":"k","generators":[{"name":"a","alexander":0}],"arrows":[{"from":"a","to":"b","u":0}]}"#,
    );
    assert_eq!(code(&floercalc(&["validate", &unknown])), 2);

    let unreduced = write(
        dir.path(),
        "unreduced.json",
        r#"{"name":"k","generators":[{"name":"a","alexander":0},{"name":"b","alexander":0}],"arrows":[{"from":"a","to":"b","u":0}]}"#,
    );
    let o = floercalc(&["validate", &unreduced]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("reducedness"));
}

#[test]
fn build_left_trefoil_at_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = floercalc(&[
        "build", "trefoil_lh.json", "--flavor", "dd_reduced", "--framing", "-1", "--check", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["generators"].as_array().unwrap().len(), 9);
}

#[test]
fn build_unknot_short_chain() {
    let o = floercalc(&["build", "unknot.json", "--flavor", "dd_reduced", "-f", "0", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("ρ₁σ₃+ρ₃σ₁+ρ₁₂₃σ₁₂₃"));
}

#[test]
fn unreduced_build_rejects_small_n() {
    let o = floercalc(&["build", "trefoil_rh.json", "--flavor", "dd_unreduced", "--framing", "-3"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn build_output_is_deterministic() {
    let args = ["build", "figure8.json", "--flavor", "dd_reduced", "-f", "-10"];
    assert_eq!(floercalc(&args).stdout, floercalc(&args).stdout);
}

#[test]
fn reduce_with_absorption() {
    let dir = tempfile::tempdir().unwrap();
    let un = dir.path().join("un.json");
    let o = floercalc(&[
        "build", "trefoil_rh.json", "--flavor", "dd_unreduced", "-f", "-10", "--out", un.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = floercalc(&["reduce", un.to_str().unwrap(), "--absorb"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["generators"].as_array().unwrap().len(), 20);
}

#[test]
fn hfk_right_trefoil() {
    let o = floercalc(&["hfk-meridian", "trefoil_rh.json", "--n", "8", "--compare"]);
    assert_eq!(code(&o), 0);
    let rows = table(&o);
    assert_eq!(rows.len(), 8);
    for (k, r) in rows {
        assert_eq!(r, if k == 0 || k == -1 { 3 } else { 1 }, "k={k}");
    }
}

#[test]
fn hfk_unknot_odd_n() {
    let o = floercalc(&["hfk-meridian", "unknot.json", "--n", "5", "--compare"]);
    assert_eq!(code(&o), 0);
    let rows = table(&o);
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), [-2, -1, 0, 1, 2]);
    assert!(rows.iter().all(|r| r.1 == 1));
}

#[test]
fn hfk_figure_eight_methods_agree() {
    assert_eq!(code(&floercalc(&["hfk-meridian", "figure8.json", "--n", "10", "--compare"])), 0);
    let planar = floercalc(&["hfk-meridian", "figure8.json", "--n", "10", "--method", "planar", "--format", "json"]);
    assert_eq!(code(&planar), 0);
    let doc: serde_json::Value = serde_json::from_slice(&planar.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn tensor_final_complex() {
    let o = floercalc(&["tensor", "trefoil_rh.json", "--n", "8", "--final"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn verify_corpus_passes() {
    let o = floercalc(&["verify-corpus", "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 14);
}

#[test]
fn corpus_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "solo.json",
        r#"{"name":"solo","generators":[{"name":"u","alexander":0}],"arrows":[]}"#,
    );
    let o = Command::new(env!("CARGO_BIN_EXE_floercalc"))
        .args(["verify-corpus", "--n", "4"])
        .env("FLOERCALC_CORPUS", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "PASS solo n=4");

    let o = Command::new(env!("CARGO_BIN_EXE_floercalc"))
        .args(["validate", "elsewhere/solo.json"])
        .env("FLOERCALC_CORPUS", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("solo:"));
}

#[test]
fn unknown_input_is_a_schema_error() {
    assert_eq!(code(&floercalc(&["validate", "no_such_knot.json"])), 2);
}
