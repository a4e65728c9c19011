use std::process::{Command, Output};

use detpol_cli::report::{Report, Verdict, SCHEMA_VERSION};

fn detpol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detpol")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    detpol(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = detpol(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn corpus_path() -> String {
    format!("{}/../../corpus/languages.txt", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn quiet_exit_codes() {
    assert_eq!(code(&["member", "--class", "PT", "--regex", "(ab)*", "--quiet"]), 1);
    assert_eq!(
        code(&["separate", "--class", "LPOL(AT)", "--left", "a(a|b)*", "--right", "b(a|b)*", "--quiet"]),
        0
    );
    assert_eq!(
        code(&["separate", "--class", "AT", "--left", "a(a|b)*", "--right", "b(a|b)*", "--quiet"]),
        1
    );
    // PT is approximated, so a negative answer stays open
    assert_eq!(
        code(&["separate", "--class", "BSIGMA2(1)", "--left", "(ab)*", "--right", "(ba)+", "--quiet"]),
        3
    );
    assert_eq!(code(&["member", "--class", "NOPE", "--regex", "a", "--quiet"]), 2);
    assert_eq!(code(&["member", "--class", "PT", "--regex", "a(", "--quiet"]), 2);
    assert_eq!(code(&["member", "--class", "UPOL(AT)", "--regex", "a", "--bogus"]), 2);
    assert_eq!(code(&["member", "--class", "PT", "--regex", "%", "--quiet"]), 2);
    assert_eq!(code(&["member", "--class", "PT", "--regex", "%", "--alphabet", "ab", "--quiet"]), 0);
}

#[test]
fn member_prints_verdict() {
    assert_eq!(stdout(&["member", "--class", "BSIGMA2(1)", "--regex", "b*a(a|b)*"]), "true\n");
    let out = stdout(&["member", "--class", "LPOL(AT)", "--regex", "(ab)*", "--witness"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "false");
    assert!(lines[1].starts_with("violation LPOL"));
    // non-quiet runs exit 0 whatever the verdict
    assert_eq!(code(&["member", "--class", "PT", "--regex", "(ab)*"]), 0);
}

#[test]
fn json_reports_round_trip() {
    let args = ["--json", "separate", "--class", "MPOL(PT)", "--left", "a(a|b)*", "--right", "b(a|b)*"];
    let line = stdout(&args);
    let rep: Report = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(rep.schema_version, SCHEMA_VERSION);
    assert_eq!(rep.verdict, Some(Verdict::True));
    assert_eq!(serde_json::to_string(&rep).unwrap(), line.trim());
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert_eq!(v["certification"], "approx-sound");
    assert_eq!(v["config"]["ptk"], 3);
    assert_eq!(v["details"]["computed"], "MPOL(PTK(3))");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--json", "--ptk", "2", "--k-max", "2", "member", "--class", "AT", "--regex", "a+"])).unwrap();
    assert_eq!(v["certification"], "exact");
    assert_eq!(v["config"]["ptk"], 2);
    assert_eq!(v["config"]["k_max"], 2);
}

#[test]
fn reports_are_deterministic() {
    let strip = |s: String| {
        let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
        v["elapsed_ms"] = 0.into();
        v
    };
    for args in [
        &["--json", "cover", "--class", "LPOL(AT)", "--target", "(a|b)*", "--against", "a(a|b)*", "b(a|b)*"][..],
        &["--json", "syntactic", "--regex", "(ab)*"][..],
        &["--json", "separate", "--class", "MPOL(AT)", "--left", "(ab)+", "--right", "(ba)+", "--witness"][..],
    ] {
        assert_eq!(strip(stdout(args)), strip(stdout(args)));
    }
}

#[test]
fn config_file_and_overrides() {
    let dir = std::env::temp_dir().join(format!("detpol-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.json");
    std::fs::write(&path, r#"{"ptk": 1, "cap": 8}"#).unwrap();
    let p = path.to_str().unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--json", "--config", p, "member", "--class", "AT", "--regex", "a"])).unwrap();
    assert_eq!(v["config"]["ptk"], 1);
    assert_eq!(v["config"]["cap"], 8);
    assert_eq!(v["config"]["k_max"], 4);
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "--json", "--config", p, "--ptk", "2", "member", "--class", "AT", "--regex", "a",
    ]))
    .unwrap();
    assert_eq!(v["config"]["ptk"], 2);
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(code(&["--config", p, "member", "--class", "AT", "--regex", "a"]), 2);
}

#[test]
fn separator_witness() {
    let out = stdout(&["separate", "--class", "LPOL(AT)", "--left", "a(a|b)*", "--right", "b(a|b)*", "--witness"]);
    assert!(out.contains("separator k=1 mode=left"), "{out}");
}

#[test]
fn syntactic_dump() {
    let out = stdout(&["syntactic", "--regex", "(a|b)*a(a|b)*"]);
    assert!(out.starts_with("monoid 2\n"));
    assert!(out.contains("omega 1"));
    assert!(out.contains("names 1 a"));
}

#[test]
fn product_and_word_classes() {
    let out = stdout(&["classify-product", "--parts", "b* a (a|b)*"]);
    assert!(out.contains("left-deterministic true"));
    assert!(out.contains("right-deterministic false"));
    assert_eq!(code(&["classify-product", "--parts", "b* a"]), 2);
    let out = stdout(&["word-class", "--class-morphism", "AT", "--k", "0", "--mode", "left", "--word", "ab"]);
    assert_eq!(out.lines().next(), Some("((aa*b|bb*a)(a|b)*)"));
}

#[test]
fn ef_command() {
    assert_eq!(stdout(&["ef", "--k", "1", "--n", "1", "--left", "ab", "--right", "ba"]).lines().next(), Some("true"));
    assert_eq!(code(&["ef", "--k", "2", "--n", "1", "--left", "ab", "--right", "ba", "--quiet"]), 1);
    assert_eq!(code(&["ef", "--k", "0", "--n", "1", "--left", "%", "--right", "a", "--eta", "at", "--quiet"]), 1);
    assert_eq!(code(&["ef", "--k", "0", "--n", "0", "--left", "a", "--right", "a", "--quiet"]), 2);
}

#[test]
fn shipped_corpus() {
    let out = stdout(&["corpus", "--file", &corpus_path()]);
    assert!(out.contains("36/36 fixtures passed"), "{out}");
    assert_eq!(code(&["corpus", "--file", &corpus_path(), "--quiet"]), 0);
}

#[test]
fn corrupted_corpus_names_fixture() {
    let dir = std::env::temp_dir().join(format!("detpol-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.txt");
    let text = std::fs::read_to_string(corpus_path())
        .unwrap()
        .replace("abstar ; ab ; (ab)* ; ST=false AT=false PTK(1)=false PTK(2)=false PT=false", "abstar ; ab ; (ab)* ; ST=false AT=false PTK(1)=false PTK(2)=false PT=true");
    std::fs::write(&path, text).unwrap();
    let out = detpol(&["corpus", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("FAIL abstar: PT: expected true, computed false"), "{err}");
    let std_out = String::from_utf8(out.stdout).unwrap();
    assert!(std_out.contains("35/36 fixtures passed"));
    let empty = dir.join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    assert!(stdout(&["corpus", "--file", empty.to_str().unwrap()]).contains("0/0 fixtures passed"));
}
