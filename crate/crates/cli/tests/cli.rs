use std::process::{Command, Output};

use serde_json::Value;

fn ppf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppf"))
        .args(args)
        .env_remove("PPF_CAP")
        .output()
        .expect("run ppf")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn verify_trinomial_and_identity() {
    let o = ppf(&[
        "--field",
        "p=5,n=2",
        "--format",
        "json",
        "verify",
        "x^3 + 3*(a2)*x^11",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["is_permutation"], true);
    assert_eq!(v["inverse_table_available"], true);
    assert_eq!(code(&ppf(&["--field", "p=2", "verify", "x"])), 0);
}

#[test]
fn verify_negative_and_parse_errors() {
    let o = ppf(&["--field", "p=2,n=2", "--format", "json", "verify", "x^3"]);
    assert_eq!(code(&o), 3);
    assert!(json(&o)["witness"].is_array());
    assert_eq!(code(&ppf(&["--field", "p=6", "verify", "x"])), 1);
    let o = ppf(&["--field", "p=5", "verify", "x^^2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("col"));
    assert_eq!(code(&ppf(&["verify", "x"])), 1);
    assert_eq!(code(&ppf(&["no-such-command"])), 1);
}

#[test]
fn verify_prints_inverse() {
    let o = ppf(&[
        "--field",
        "p=5,n=2",
        "--format",
        "json",
        "verify",
        "--inverse",
        "x^5",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["inverse"], "x^5");
}

#[test]
fn table1_exit_codes() {
    let o = ppf(&[
        "--format", "json", "table1", "--q", "2,5", "--m-max", "4", "--n-max", "4",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["summary"]["disagreements"], 0);
    assert!(v["reports"].as_array().unwrap().len() > 100);

    let o = ppf(&[
        "--format",
        "json",
        "table1",
        "--q",
        "9",
        "--families",
        "2,3,4",
    ]);
    assert_eq!(code(&o), 1);
    let errors = json(&o)["errors"].as_array().unwrap().clone();
    assert_eq!(errors.len(), 3);
    assert!(errors[0]["error"].as_str().unwrap().contains("not defined"));

    assert_eq!(code(&ppf(&["table1"])), 1);
    assert_eq!(
        code(&ppf(&[
            "table1",
            "--q",
            "7",
            "--families",
            "2",
            "--m-max",
            "2",
            "--n-max",
            "2"
        ])),
        2
    );
}

#[test]
fn table1_output_is_deterministic() {
    let args = [
        "--format", "json", "--seed", "11", "table1", "--q", "11", "--m-max", "2", "--n-max", "2",
    ];
    let a = ppf(&args);
    let b = ppf(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(ppf(&seq).stdout, a.stdout);
    assert_eq!(json(&a)["seed"], 11);
}

#[test]
fn table1_records_rerun_to_same_verdict() {
    let o = ppf(&[
        "--format", "json", "table1", "--q", "4", "--m-max", "3", "--n-max", "3",
    ]);
    let v = json(&o);
    let dir = std::env::temp_dir().join(format!("ppf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let reports = v["reports"].as_array().unwrap();
    for (i, r) in reports.iter().enumerate().step_by(37) {
        let path = dir.join(format!("r{i}.json"));
        std::fs::write(&path, serde_json::to_string(r).unwrap()).unwrap();
        let again = ppf(&[
            "--format",
            "json",
            "family",
            "--record",
            path.to_str().unwrap(),
        ]);
        let w = json(&again);
        for key in [
            "predicted",
            "oracle",
            "agree",
            "witness",
            "epsilon",
            "alpha",
            "beta",
            "omega",
        ] {
            assert_eq!(w[key], r[key], "{key} differs for record {i}");
        }
        assert_eq!(code(&again), if r["agree"] == true { 0 } else { 2 });
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ast_and_psi_checks() {
    let o = ppf(&[
        "--field",
        "p=2,n=2",
        "--seed",
        "42",
        "--format",
        "json",
        "ast-check",
        "--trials",
        "100",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["seed"], 42);
    assert_eq!(
        code(&ppf(&[
            "--field",
            "p=3,n=2",
            "--seed",
            "7",
            "ast-check",
            "--trials",
            "100"
        ])),
        0
    );
    assert_eq!(
        code(&ppf(&["--field", "p=3,n=2", "ast-check", "--trials", "0"])),
        1
    );
    assert_eq!(
        code(&ppf(&[
            "--field",
            "p=2,n=2",
            "psi-check",
            "--trials",
            "200"
        ])),
        0
    );
    assert_eq!(code(&ppf(&["--field", "p=5", "psi-check"])), 1);
}

#[test]
fn dual_basis_command() {
    let o = ppf(&[
        "--field",
        "p=3,n=2",
        "--format",
        "json",
        "dual-basis",
        "1",
        "a1",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["gram_check"], true);
    assert_eq!(
        code(&ppf(&["--field", "p=3,n=2", "dual-basis", "1", "1"])),
        3
    );
    let o = ppf(&[
        "--field",
        "p=2,n=2",
        "--format",
        "json",
        "dual-basis",
        "1",
        "(0,1)",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["dual"].as_array().unwrap().len(), 2);
    assert_eq!(code(&ppf(&["--field", "p=2,n=2", "dual-basis", "1"])), 1);
}

#[test]
fn family_command() {
    let o = ppf(&[
        "--format",
        "json",
        "family",
        "--q",
        "5",
        "--family",
        "1",
        "--m",
        "3",
        "--n",
        "3",
        "--alpha",
        "0",
        "--beta",
        "3",
        "--epsilon",
        "field:1",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["predicted"], v["oracle"]);
    assert_eq!(code(&ppf(&["family", "--q", "9", "--family", "2"])), 1);
    assert_eq!(
        code(&ppf(&[
            "family",
            "--q",
            "5",
            "--family",
            "5",
            "--epsilon",
            "field:7"
        ])),
        1
    );
    assert_eq!(
        code(&ppf(&[
            "family",
            "--q",
            "5",
            "--family",
            "7",
            "--epsilon",
            "+omega2",
            "--m",
            "2"
        ])),
        0
    );
}

#[test]
fn lemma_pentanomial_lappano_commands() {
    assert_eq!(code(&ppf(&["lemma31", "--q", "5"])), 0);
    assert_eq!(code(&ppf(&["lemma31", "--q", "7"])), 0);
    assert_eq!(code(&ppf(&["lemma31", "--q", "7", "--part", "5"])), 1);
    assert_eq!(code(&ppf(&["pentanomial", "--q", "5"])), 0);
    assert_eq!(
        code(&ppf(&[
            "pentanomial",
            "--q",
            "8",
            "--variant",
            "twisted",
            "--alpha",
            "2"
        ])),
        0
    );
    assert_eq!(
        code(&ppf(&[
            "pentanomial",
            "--q",
            "4",
            "--exps",
            "1,2,2",
            "--variant",
            "z1"
        ])),
        2
    );
    assert_eq!(code(&ppf(&["lappano", "--q", "11"])), 0);
    assert_eq!(code(&ppf(&["lappano", "--q", "13", "--a", "1"])), 2);
    assert_eq!(code(&ppf(&["lappano", "--q", "8"])), 1);
}

#[test]
fn cap_override_and_out_file() {
    let o = Command::new(env!("CARGO_BIN_EXE_ppf"))
        .args(["--field", "p=5,n=2", "verify", "x"])
        .env("PPF_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    let path = std::env::temp_dir().join(format!("ppf-out-{}.json", std::process::id()));
    let o = ppf(&[
        "--field",
        "p=3",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "verify",
        "x",
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "verify");
    std::fs::remove_file(path).unwrap();
}
