//! End-to-end runs of the `recursorlab` binary: exit codes, byte-identical
//! reruns, schema flags, and the supervise/audit file flow.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_recursorlab"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

#[test]
fn trace_is_deterministic_across_processes() {
    let first = run(&["trace", "--k", "3", "--payload", "S(Z)"]);
    let second = run(&["trace", "--k", "3", "--payload", "S(Z)"]);
    assert_eq!(first.0, 0, "{}", first.2);
    assert_eq!(first, second);
    assert!(first.1.contains("\"firings\": 4"));
}

#[test]
fn exit_codes_follow_the_discipline() {
    // usage errors are 2
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["trace"]).0, 2);
    assert_eq!(run(&["parse", "/nonexistent/file.trs"]).0, 2);
    // checker mismatch is 1
    let (code, stdout, _) = run(&[
        "orient", "--method", "additive", "--expect", "oriented", "recursor",
    ]);
    assert_eq!(code, 1);
    assert!(stdout.contains("\"outcome\": \"refuted\""));
    // success is 0
    assert_eq!(run(&["family"]).0, 0);
}

#[test]
fn stdout_is_one_json_document() {
    for args in [
        vec!["parse", "recursor"],
        vec!["dp", "recursor"],
        vec!["confess", "recursor", "--k", "5"],
        vec!["kappa", "recursor"],
        vec!["necessity", "--depth", "5"],
        vec!["diagnose", "--k", "3", "--payload", "S(Z)"],
    ] {
        let (code, stdout, stderr) = run(&args);
        assert_eq!(code, 0, "args {:?}: {}", args, stderr);
        recursorlab::parse_report(&stdout)
            .unwrap_or_else(|e| panic!("args {:?} stdout not JSON: {}", args, e));
    }
}

#[test]
fn supervise_then_audit_round_trip() {
    let dir = std::env::temp_dir().join("recursorlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let record_path = dir.join("record.json");

    let (code, stdout, stderr) = run(&["supervise", "recursor", "--k", "5"]);
    assert_eq!(code, 0, "{}", stderr);
    assert!(stdout.contains("\"kind\": \"T3\""));
    std::fs::write(&record_path, &stdout).unwrap();

    // a genuine record passes the audit
    let (code, stdout, _) = run(&["audit", record_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{}", stdout);
    assert!(stdout.contains("\"valid\": true"));

    // strip the license: the audit rejects with exit 1
    let doctored = stdout_record_without_license(&record_path);
    let bad_path = dir.join("doctored.json");
    std::fs::write(&bad_path, doctored).unwrap();
    let (code, stdout, _) = run(&["audit", bad_path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("missing-license"));
}

fn stdout_record_without_license(path: &std::path::Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    let mut json = recursorlab::parse_report(&text).unwrap();
    json.insert("license_name", recursorlab::Json::from(""));
    recursorlab::emit_report(&json)
}

#[test]
fn audit_rejects_insufficient_exhaustion_from_files() {
    let dir = std::env::temp_dir().join("recursorlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();

    // shipped catalog file (truncated to W0+W1 in-process for the record)
    let catalog = recursorlab::supervisor::SupervisorCatalog::barrier_confined().truncated_below(2);
    let catalog_path = dir.join("truncated.json");
    std::fs::write(&catalog_path, recursorlab::emit_report(&catalog.to_json())).unwrap();

    let obligation = recursorlab::supervisor::Obligation::recursor(2);
    let record = recursorlab::supervisor::supervise_loop(&obligation, &catalog).unwrap();
    let mut json = record.to_json();
    // drop one certificate from the array
    if let recursorlab::Json::Obj(map) = &mut json {
        if let Some(recursorlab::Json::Arr(certs)) = map.get_mut("certificates") {
            certs.remove(0);
        }
    }
    let record_path = dir.join("underfilled.json");
    std::fs::write(&record_path, recursorlab::emit_report(&json)).unwrap();

    let (code, stdout, stderr) = run(&[
        "audit",
        record_path.to_str().unwrap(),
        "--catalog",
        catalog_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "stdout {} stderr {}", stdout, stderr);
    assert!(stdout.contains("insufficient-exhaustion"));
}

#[test]
fn shipped_catalog_files_load() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .unwrap()
        .to_path_buf();
    for (file, kappa) in [
        ("catalogs/barrier_confined.json", "\"2\""),
        ("catalogs/full.json", "\"1\""),
    ] {
        let path = root.join(file);
        let (code, stdout, stderr) =
            run(&["kappa", "recursor", "--catalog", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {}", file, stderr);
        assert!(
            stdout.contains(&format!("\"kappa_star\": {}", kappa)),
            "{}: {}",
            file,
            stdout
        );
    }
}

#[test]
fn sweep_emits_plain_csv() {
    let (code, stdout, _) = run(&["sweep", "--k", "1:4", "--payload", "S(Z)"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next(),
        Some("k,payload_size,con,res,ratio,eta,hproof_max")
    );
    assert_eq!(stdout.lines().count(), 5);
    let first = stdout.lines().nth(1).unwrap();
    assert!(first.starts_with("1,2,6,1,"), "{}", first);
}

#[test]
fn fuel_env_var_reaches_the_engine() {
    // the env var is honored by normalization defaults
    let out = bin()
        .args(["trace", "--k", "1"])
        .env("RECURSORLAB_FUEL", "123")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn meta_flag_attaches_metadata() {
    let (code, stdout, _) = run(&["diagnose", "--k", "2", "--payload", "S(Z)", "--meta"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"meta\""));
    assert!(stdout.contains("\"generated_at_unix\""));
    // without --meta no machine data appears
    let (_, stdout, _) = run(&["diagnose", "--k", "2", "--payload", "S(Z)"]);
    assert!(!stdout.contains("generated_at_unix"));
}
