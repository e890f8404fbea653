use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sroiqs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout).expect("valid json on stdout");
    (o.status.code().unwrap(), v)
}

#[test]
fn normalize_sister_example() {
    let sig = fixture("family.sig");
    let o = run(&[
        "normalize",
        "--sig",
        &sig,
        "--concept",
        "(exists Sister.Female)[Female := Female + Alice]",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "exists Sister.(Female | {o_Alice})");
}

#[test]
fn normalize_trace_in_json() {
    let sig = fixture("family.sig");
    let (code, v) = json(&[
        "normalize",
        "--sig",
        &sig,
        "--trace",
        "--concept",
        "(exists Sister.Female)[Female := Female + Alice]",
    ]);
    assert_eq!(code, 0);
    let steps = v["steps"].as_array().unwrap();
    let rules: Vec<u64> = steps.iter().map(|s| s["rule"].as_u64().unwrap()).collect();
    assert_eq!(rules, [26, 5]);
    assert_eq!(steps[1]["redex_path"], serde_json::json!([0]));
    assert_eq!(steps[0]["measure_before"]["m"], 2);
    assert_eq!(steps[0]["measure_after"]["mp"], 0);
    assert_eq!(v["step_count"], 2);
}

#[test]
fn measure_of_substituted_bottom() {
    let o = run(&["measure", "--concept", "bot[Female := Female + Alice]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "M=1 M'=0");
    let (_, v) = json(&["measure", "--concept", "bot[Female := Female + Alice]"]);
    assert_eq!(v, serde_json::json!({ "m": 1, "mp": 0 }));
}

#[test]
fn equiv_rule_5_is_clean() {
    let o = run(&["equiv", "--rule", "5", "--trials", "100", "--max-domain", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(": 0 counterexamples"));
}

#[test]
fn equiv_exhaustive_flag() {
    let (code, v) = json(&["equiv", "--rule", "22", "--trials", "20", "--exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(v["exhaustive"].as_array().unwrap().len(), 3);
}

#[test]
fn equiv_mutant_fails_with_exit_1() {
    let (code, v) = json(&["equiv", "--rule", "15", "--variant", "mutant-15-operator-flip", "--seed", "7"]);
    assert_eq!(code, 1);
    assert!(!v["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn equiv_is_deterministic() {
    let args = ["equiv", "--rule", "27", "--variant", "literal-27", "--seed", "3", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn eval_on_family_model() {
    let o = run(&[
        "eval",
        "--sig",
        &fixture("family.sig"),
        "--model",
        &fixture("family.json"),
        "--concept",
        "exists Brother.Male | Animal",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "{alice, charles}");
}

#[test]
fn check_model_accepts_family_model() {
    let (code, v) = json(&[
        "check-model",
        "--sig",
        &fixture("family.sig"),
        "--model",
        &fixture("family.json"),
        "--concept-file",
        &fixture("g.concept"),
        "--at",
        "Alice",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["extension"], serde_json::json!(["alice"]));
    assert_eq!(v["at"]["member"], true);
    assert!(v["axioms"].as_array().unwrap().iter().all(|a| a["satisfied"] == true));
    assert_eq!(v["accepted"], true);
}

#[test]
fn sat_finds_model_of_g() {
    let (code, v) = json(&[
        "sat",
        "--sig",
        &fixture("family.sig"),
        "--concept-file",
        &fixture("g.concept"),
        "--max-domain",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "SAT");
    assert!(v["witness"]["domain"].as_array().unwrap().len() <= 3);
}

#[test]
fn sat_on_bottom_is_unknown() {
    let (code, v) = json(&["sat", "--sig", &fixture("family.sig"), "--concept", "bot", "--max-domain", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "UNKNOWN");
}

#[test]
fn sat_rejects_substitutions_unless_normalizing() {
    let sig = fixture("family.sig");
    let c = "(exists Sister.Female)[Female := Female + Alice]";
    let (code, v) = json(&["sat", "--sig", &sig, "--concept", c]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "E_PRECONDITION");
    let (code, v) = json(&["sat", "--sig", &sig, "--concept", c, "--normalize"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "SAT");
}

#[test]
fn sat_random_mode_needs_seed() {
    let sig = fixture("family.sig");
    let o = run(&["sat", "--sig", &sig, "--concept", "Female", "--mode", "random"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sat", "--sig", &sig, "--concept", "Female", "--mode", "random", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn rbox_check_reports() {
    let (code, v) = json(&["rbox-check", "--sig", &fixture("family.sig")]);
    assert_eq!(code, 0);
    assert_eq!(v["regular"], true);
    let (code, v) = json(&["rbox-check", "--sig", &fixture("nonregular.sig"), "--find-order"]);
    assert_eq!(code, 1);
    assert_eq!(v["regular"], false);
    assert_eq!(v["regular_order"], Value::Null);
}

#[test]
fn parse_echoes_canonical_form() {
    let o = run(&["parse", "--no-resolve", "--concept", "exists   R.( A&B )"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "exists R.(A & B)");
}

#[test]
fn errors_have_codes_and_exit_2() {
    let o = run(&["parse", "--no-resolve", "--concept", "exists"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[E_SYNTAX]"));

    let o = run(&["parse", "--sig", &fixture("family.sig"), "--concept", "Unicorn"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[E_UNKNOWN_NAME]"));

    let o = run(&["eval", "--sig", &fixture("family.sig"), "--model", "/nonexistent.json", "--concept", "top"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[E_IO]"));

    // clap usage errors also exit with 2.
    assert_eq!(run(&["normalize"]).status.code(), Some(2));
}

#[test]
fn step_limit_is_internal_failure() {
    let o = run(&[
        "normalize",
        "--sig",
        &fixture("family.sig"),
        "--step-limit",
        "2",
        "--concept",
        "(<3 Parent (<3 Parent top))[Parent := Parent + (Alice, Alice)]",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[E_STEP_LIMIT]"));
}

#[test]
fn text_and_json_agree_on_eval() {
    let args = [
        "eval",
        "--sig",
        &fixture("family.sig"),
        "--model",
        &fixture("family.json"),
        "--concept",
        "Female | Male",
    ];
    let text = stdout(&run(&args));
    let (_, v) = json(&args);
    let members: Vec<&str> = v["members"].as_array().unwrap().iter().map(|m| m.as_str().unwrap()).collect();
    assert_eq!(text.trim(), format!("{{{}}}", members.join(", ")));
}

#[test]
fn version_flag() {
    let o = run(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("sroiqs "));
}
