use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sharpcut_core::instruments::max_projector_residual;
use sharpcut_core::io::{parse_effects, parse_measurement, parse_state};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn sharpcut(args: &[&str]) -> Output {
    sharpcut_env(args, None)
}

fn sharpcut_env(args: &[&str], max_vertices: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sharpcut"));
    cmd.args(args).env_remove("SHARPCUT_MAX_VERTICES");
    if let Some(v) = max_vertices {
        cmd.env("SHARPCUT_MAX_VERTICES", v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = sharpcut(&all);
    let v = serde_json::from_str(&stdout(&out)).expect("structured output is JSON");
    (code(&out), v)
}

fn approx(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn pr_box_on_chsh_violates_second_level() {
    let (game, pr) = (data("chsh.game"), data("pr.box"));
    let (status, v) = structured(&["analyze-game", &game, "--box", &pr, "--lo-level", "2"]);
    assert_eq!(status, 1);
    assert_eq!(v["classical_value"]["exact"], "3/4");
    assert_eq!(v["lo_lp_value"]["exact"], "1");
    let bx = &v["boxes"][0];
    assert_eq!(approx(&bx["payoff"]), 1.0);
    assert_eq!(bx["lo_check"]["pass"], false);
    assert!(approx(&bx["lo_check"]["max_sum"]) > 1.0 + 1e-9);

    let table = stdout(&sharpcut(&["analyze-game", &game, "--box", &pr, "--level", "2"]));
    assert!(table.contains("1.000000"), "{table}");
    assert!(table.contains("FAIL"), "{table}");
}

#[test]
fn tsirelson_box_on_chsh_holds() {
    let (status, v) = structured(&[
        "analyze-game",
        &data("chsh.game"),
        "--box",
        &data("tsirelson.box"),
        "--lo-level",
        "2",
    ]);
    assert_eq!(status, 0);
    let payoff = approx(&v["boxes"][0]["payoff"]);
    assert!((payoff - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
}

#[test]
fn gyni4_graph_is_disjoint_union_of_cliques() {
    let (status, v) = structured(&["analyze-game", &data("gyni4.game")]);
    assert_eq!(status, 0);
    assert_eq!(v["graph"]["disjoint_union_of_cliques"], true);
    assert_eq!(v["classical_value"]["exact"], "1/8");
    assert_eq!(v["lo_lp_value"]["exact"], "1/8");
}

#[test]
fn builtin_games_match_files() {
    let (_, from_file) = structured(&["analyze-game", &data("gyni4.game")]);
    let (_, builtin) = structured(&["analyze-game", "builtin:gyni:4"]);
    assert_eq!(from_file, builtin);
}

#[test]
fn malformed_game_reports_line() {
    let out = sharpcut(&["analyze-game", &data("malformed.game")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 7"), "{}", stderr(&out));
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    assert_eq!(code(&sharpcut(&["analyze-game", "/nonexistent/x.game"])), 2);
    assert_eq!(code(&sharpcut(&["analyze-game", "builtin:chsh", "--lo-level", "0"])), 2);
    assert_eq!(code(&sharpcut(&["analyze-game", "builtin:chsh", "--tolerance", "-1"])), 2);
    assert_eq!(code(&sharpcut(&["analyze-game", "builtin:chsh", "--format", "xml"])), 2);
    assert_eq!(code(&sharpcut(&["analyze-game", "builtin:gyni:2"])), 2);
    // A box over a different scenario than the game.
    assert_eq!(code(&sharpcut(&["analyze-game", &data("gyni4.game"), "--box", "builtin:pr"])), 2);
}

#[test]
fn vertex_limit_exits_three() {
    let game = data("chsh.game");
    let out = sharpcut_env(&["analyze-game", &game], Some("4"));
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert_eq!(code(&sharpcut_env(&["analyze-game", &game], Some("8"))), 0);
    // The level-2 lift of the PR box has 64 surviving vertices.
    let args = ["check-lo", "builtin:pr", "--lo-level", "2"];
    assert_eq!(code(&sharpcut_env(&args, Some("32"))), 3);
    assert_eq!(code(&sharpcut_env(&args, Some("64"))), 1);
    assert_eq!(code(&sharpcut_env(&args, Some("zero"))), 2);
}

#[test]
fn check_lo_levels() {
    let pr = data("pr.box");
    assert_eq!(code(&sharpcut(&["check-lo", &pr])), 0);
    let (status, v) = structured(&["check-lo", &pr, "--lo-level", "2"]);
    assert_eq!(status, 1);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[0]["pass"], true);
    assert_eq!(levels[1]["pass"], false);
    assert!((approx(&levels[1]["max_sum"]) - 1.25).abs() < 1e-12);
    assert_eq!(code(&sharpcut(&["check-lo", &data("tsirelson.box"), "--lo-level", "2"])), 0);
}

#[test]
fn check_ce_on_kcbs() {
    let (status, v) = structured(&["check-ce", "builtin:kcbs"]);
    assert_eq!(status, 0);
    let expected = 4.0 * 5f64.sqrt() / 10.0;
    assert!((approx(&v["levels"][0]["max_sum"]) - expected).abs() < 1e-9);
    assert_eq!(code(&sharpcut(&["check-ce", "builtin:kcbs", "--weights", "0.5,0.5,0.5,0.5,0.5"])), 0);
    assert_eq!(code(&sharpcut(&["check-ce", "builtin:kcbs", "--weights", "0.6,0.5,0.5,0.5,0.5"])), 1);
    assert_eq!(code(&sharpcut(&["check-ce", "builtin:kcbs", "--weights", "0.5,0.5"])), 2);
}

#[test]
fn luders_instrument_is_sharp() {
    let out = sharpcut(&["check-sharp", &data("luders.instrument")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).lines().any(|l| l.starts_with("verdict") && l.ends_with(" sharp")));
}

#[test]
fn noisy_instrument_is_not_sharp() {
    let out = sharpcut(&["check-sharp", &data("noisy.instrument")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not sharp: repeatability residual 0.090000"), "{}", stdout(&out));
    let (status, v) = structured(&["check-sharp", &data("noisy.instrument")]);
    assert_eq!(status, 1);
    assert_eq!(v["sharp"], false);
    // For m = diag(0.9, 0.1) the residual is the norm of m² - m.
    assert!((approx(&v["repeatability"]["residual"]) - 0.09).abs() < 1e-12);
}

#[test]
fn wrong_dimension_instrument_is_rejected() {
    let out = sharpcut(&["check-sharp", &data("wrong-dimension.instrument")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("2x2"), "{}", stderr(&out));
}

fn assert_valid_measurement(path: &Path) -> sharpcut_core::model::Measurement {
    let text = std::fs::read_to_string(path).unwrap();
    parse_measurement(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn dilate_trine_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("trine-dilated.povm");
    let out_str = out_path.to_str().unwrap();
    let (status, v) = structured(&["dilate", &data("trine.povm"), "--out", out_str]);
    assert_eq!(status, 0);
    assert!(approx(&v["max_deviation"]) <= 1e-9);
    assert!(v.get("artifact").is_none());

    let dilated = assert_valid_measurement(&out_path);
    assert_eq!(dilated.len(), 3);
    assert!(max_projector_residual(&dilated) <= 1e-9);
    let ancilla = dir.path().join("trine-dilated-ancilla.povm");
    let sigma = parse_state(&std::fs::read_to_string(ancilla).unwrap()).unwrap();
    assert_eq!(sigma.system().dim() * 2, dilated.system().dim());

    let table = stdout(&sharpcut(&["dilate", &data("trine.povm"), "--out", out_str]));
    assert!(table.contains("max statistics deviation"), "{table}");
}

#[test]
fn shared_dilation_writes_one_file_per_measurement() {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("family.json");
    let trine = data("trine.povm");
    let args = ["dilate", &trine, &data("qubit-x.povm"), "--out", out.to_str().unwrap()];
    let status = code(&sharpcut(&args));
    assert_eq!(status, 0);
    let members: Vec<_> = (0..2)
        .map(|k| assert_valid_measurement(&dir.path().join(format!("family-{k}.json"))))
        .collect();
    assert_eq!(members[0].system(), members[1].system());
    assert!(members.iter().all(|m| max_projector_residual(m) <= 1e-9));
    parse_state(&std::fs::read_to_string(dir.path().join("family-ancilla.json")).unwrap()).unwrap();
}

#[test]
fn joint_measure_of_orthogonal_projectors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("joint.povm");
    let effects = data("orthogonal.effects");
    let status = code(&sharpcut(&["joint-measure", &effects, "--out", out.to_str().unwrap()]));
    assert_eq!(status, 0);
    let joint = assert_valid_measurement(&out);
    assert_eq!(joint.len(), 3);
    let (_, inputs) = parse_effects(&std::fs::read_to_string(&effects).unwrap()).unwrap();
    assert_eq!(inputs.len(), 2);
}

#[test]
fn joint_measure_embeds_artifact_without_out() {
    let (status, v) = structured(&["joint-measure", &data("orthogonal.effects")]);
    assert_eq!(status, 0);
    assert_eq!(v["outcomes"], 3);
    let artifact = serde_json::to_string(&v["artifact"]).unwrap();
    assert_eq!(parse_measurement(&artifact).unwrap().len(), 3);
}

#[test]
fn joint_measure_of_overlapping_projectors_fails() {
    let out = sharpcut(&["joint-measure", &data("overlapping.effects")]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("\"x\"") && err.contains("\"z\""), "{err}");
    assert!(err.contains("residual"), "{err}");
}

#[test]
fn structured_output_is_deterministic() {
    let args = ["analyze-game", "builtin:chsh", "--box", "builtin:pr", "--box", "builtin:tsirelson", "--format", "structured"];
    let first = stdout(&sharpcut(&args));
    let second = stdout(&sharpcut(&args));
    assert_eq!(first, second);
    let keys: Vec<&str> = first
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(keys[0], "classical_value");
    assert!(keys.iter().position(|&k| k == "boxes") > keys.iter().position(|&k| k == "graph"));
}

#[test]
fn structured_numbers_round_trip() {
    let (_, v) = structured(&["analyze-game", "builtin:chsh", "--box", "builtin:tsirelson"]);
    let payoff = approx(&v["boxes"][0]["payoff"]);
    let table = stdout(&sharpcut(&["analyze-game", "builtin:chsh", "--box", "builtin:tsirelson"]));
    assert!(table.contains(&format!("{payoff:.6}")), "{table}");
    // Seventeen significant digits recover the exact double.
    let text = stdout(&sharpcut(&["analyze-game", "builtin:chsh", "--box", "builtin:tsirelson", "--format", "structured"]));
    let literal = text.lines().find(|l| l.contains("\"payoff\"")).unwrap();
    let digits = literal.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    assert_eq!(digits.parse::<f64>().unwrap(), payoff);
    assert_eq!(digits.split('e').next().unwrap().replace('.', "").len(), 17);
}

#[test]
fn edge_list_written_for_games() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chsh.edges");
    assert_eq!(code(&sharpcut(&["analyze-game", "builtin:chsh", "--out", out.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(out).unwrap();
    let edges = text.lines().filter(|l| !l.starts_with('#')).skip(1).count();
    assert_eq!(edges, 16);
}
