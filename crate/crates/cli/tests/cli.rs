//! End-to-end runs of the binary: records, formats and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn esequence(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esequence"))
        .args(args)
        .env_remove("ESEQ_BIT_CAP")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is a JSON record"))
        .collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn trajectory_of_seven() {
    let out = esequence(&["trajectory", "--x", "7", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert_eq!(recs.len(), 5);
    let xs: Vec<&str> = recs.iter().map(|r| r["x"].as_str().unwrap()).collect();
    assert_eq!(xs, ["11", "17", "13", "5", "1"]);
    let last = &recs[4];
    assert_eq!(last["schema_version"], 1);
    assert_eq!(last["b"], 11);
    assert_eq!(last["big_b"], "347");
    // 2^11 * 1 - 3^5 * 7 = 347
}

#[test]
fn trajectory_of_one_and_bad_inputs() {
    let out = esequence(&["trajectory", "--x", "1", "--n", "2"]);
    assert!(records(&out).iter().all(|r| r["a"] == 2 && r["x"] == "1"));
    assert_eq!(code(&esequence(&["trajectory", "--x", "4"])), 2);
    assert_eq!(code(&esequence(&["trajectory", "--x", "seven"])), 2);
    assert_eq!(code(&esequence(&["trajectory"])), 2);
    assert_eq!(code(&esequence(&["no-such-command"])), 2);
    assert_eq!(code(&esequence(&[])), 2);
}

#[test]
fn trajectory_bit_cap_abort() {
    let out = esequence(&["--bit-cap", "64", "trajectory", "--x", "1", "--n", "40"]);
    assert_eq!(code(&out), 3);
    // b_k = 2k, so the records up to b = 64 were written before the abort
    assert_eq!(records(&out).len(), 32);
}

#[test]
fn omega_orbit_converges() {
    let out = esequence(&["omega", "--generator", "orbit:27"]);
    assert_eq!(code(&out), 0);
    let summary = records(&out).pop().unwrap();
    assert_eq!(summary["record"], "summary");
    assert_eq!(summary["verdict"], "convergent");
    assert_eq!(summary["x"], "27");
}

#[test]
fn omega_powers_of_two_crosses_threshold() {
    let out = esequence(&[
        "omega",
        "--generator",
        "powers-of-two",
        "--threshold",
        "2^64",
    ]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    let summary = recs.last().unwrap();
    assert_eq!(summary["verdict"], "divergent-evidence");
    // pinned from an independent run of the solver
    assert_eq!(summary["depth"], 69);
    assert_eq!(summary["x0"], "18902287049380563725563");
    let depths: Vec<u64> = recs[..recs.len() - 1]
        .iter()
        .map(|r| r["n"].as_u64().unwrap())
        .collect();
    assert_eq!(depths, [1, 2, 4, 8, 16, 32, 64, 69]);
}

#[test]
fn omega_squares_never_certified() {
    for max_n in ["10", "200"] {
        let out = esequence(&["omega", "--generator", "squares", "--max-n", max_n]);
        let summary = records(&out).pop().unwrap();
        assert!(
            ["inconclusive", "divergent-evidence"].contains(&summary["verdict"].as_str().unwrap()),
            "{summary}"
        );
    }
}

#[test]
fn omega_bit_cap_keeps_series() {
    let out = esequence(&[
        "--bit-cap",
        "100",
        "omega",
        "--generator",
        "sturmian:log2_3",
    ]);
    assert_eq!(code(&out), 3);
    let recs = records(&out);
    assert!(recs.iter().all(|r| r["record"] == "series"));
    assert_eq!(recs.last().unwrap()["n"], 63);
}

#[test]
fn bit_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_esequence"))
        .args(["omega", "--generator", "sturmian:log2_3"])
        .env("ESEQ_BIT_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_esequence"))
        .args(["omega", "--generator", "orbit:27"])
        .env("ESEQ_BIT_CAP", "12")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn periodic_examples() {
    let verdict = |args: &[&str]| records(&esequence(args)).pop().unwrap();
    let r = verdict(&["periodic", "--periodic", "2"]);
    assert_eq!(
        (r["verdict"].as_str(), r["x"].as_str()),
        (Some("convergent"), Some("1"))
    );
    let r = verdict(&["periodic", "--periodic", "1"]);
    assert_eq!(r["verdict"], "divergent-certified");
    assert_eq!(r["criterion"], "periodic-deficit");
    let r = verdict(&["periodic", "--prefix", "1,4", "--periodic", "2"]);
    assert_eq!(r["x"], "3");
    assert_eq!(
        r["trajectory"],
        serde_json::json!(["3", "5", "1", "1", "1"])
    );
    assert_eq!(code(&esequence(&["periodic", "--periodic", "1,0"])), 2);
    assert_eq!(code(&esequence(&["periodic", "--prefix", "1"])), 2);
}

#[test]
fn sweep_is_ordered_and_deterministic() {
    let args = [
        "sweep-periodic",
        "--l-max",
        "2",
        "--r-max",
        "2",
        "--term-max",
        "4",
    ];
    let first = esequence(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, esequence(&args).stdout);
    let recs = records(&first);
    let find = |spec: &str| recs.iter().find(|r| r["spec"] == spec).cloned();
    assert_eq!(find(";2").unwrap()["x"], "1");
    assert_eq!(find(";1").unwrap()["verdict"], "divergent-certified");
    assert_eq!(find("1,4;2").unwrap()["x"], "3");
    assert!(find("2;2").is_none(), "non-canonical specs are skipped");

    let empty = esequence(&[
        "sweep-periodic",
        "--r-max",
        "0",
        "--term-max",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&empty), 0);
    assert_eq!(
        String::from_utf8_lossy(&empty.stdout).lines().count(),
        1,
        "header only"
    );
}

#[test]
fn sturmian_examples() {
    let out = esequence(&["sturmian", "--theta", "log2_3", "--max-n", "100"]);
    let recs = records(&out);
    assert_eq!(recs[0]["criterion"], "beatty-log2-3");
    assert_eq!(recs[0]["terms"].as_array().unwrap().len(), 100);
    assert!(recs
        .iter()
        .any(|r| r["record"] == "witness" && r["n"] == 64));

    let out = esequence(&["sturmian", "--theta", "3/2"]);
    assert_eq!(records(&out)[0]["criterion"], "periodic-deficit");

    let out = esequence(&["sturmian", "--theta", "cf:1;2", "--max-n", "1000"]);
    let recs = records(&out);
    assert_eq!(recs[0]["criterion"], "sturmian-below-log2-3");
    assert!(recs[0]["validated_convergents"].as_u64().unwrap() >= 3);
    assert!(recs
        .iter()
        .filter(|r| r["record"] == "convergent" && !r["holds"].is_null())
        .all(|r| r["holds"] == true));
}

#[test]
fn sturmian_depth_policy() {
    // √2 known to four partial quotients: enough for a verdict on 20 terms,
    // not enough to generate 2000 terms
    assert_eq!(
        code(&esequence(&[
            "sturmian",
            "--theta",
            "cf:1,2,2,2",
            "--max-n",
            "20"
        ])),
        0
    );
    assert_eq!(
        code(&esequence(&[
            "sturmian",
            "--theta",
            "cf:1,2,2,2",
            "--max-n",
            "2000"
        ])),
        4
    );
    assert_eq!(code(&esequence(&["sturmian", "--theta", "cf:1,1"])), 4);
    assert_eq!(code(&esequence(&["sturmian", "--theta", "1/2"])), 2);
}

#[test]
fn verify_suites_pass() {
    for (suite, n_max) in [
        ("product-bound", "2000"),
        ("reciprocal-products", "100"),
        ("positional", "2000"),
        ("split-identity", "30"),
    ] {
        let out = esequence(&["verify", "--suite", suite, "--n-max", n_max]);
        assert_eq!(code(&out), 0, "{suite}");
        assert_eq!(records(&out)[0]["status"], "pass");
    }
    let out = esequence(&[
        "verify",
        "--suite",
        "matthews-watts",
        "--samples",
        "500",
        "--seed",
        "3",
    ]);
    let rec = &records(&out)[0];
    assert_eq!(
        (rec["checked"].as_u64(), rec["seed"].as_u64()),
        (Some(500), Some(3))
    );
    assert_eq!(code(&esequence(&["verify", "--suite", "bounds45"])), 2);
}

#[test]
fn csv_headers_are_fixed() {
    let out = esequence(&["omega", "--generator", "orbit:7", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "record,generator,n,x0,verdict,criterion,x,depth,threshold"
    );
    assert!(lines.last().unwrap().starts_with("summary,orbit:7,"));
}

#[test]
fn config_file_runs_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    let output = dir.path().join("out.jsonl");
    std::fs::write(
        &config,
        format!(
            "command = \"omega\"\ngenerator = \"powers-of-two\"\nthreshold = \"2^64\"\n\
             [output]\npath = {:?}\n",
            output.display().to_string()
        ),
    )
    .unwrap();
    let cfg = config.to_str().unwrap();
    assert_eq!(code(&esequence(&["--config", cfg])), 0);
    let summary: Value = last_line(&output);
    assert_eq!(summary["depth"], 69);

    // a flag on the matching subcommand replaces the file's value
    assert_eq!(
        code(&esequence(&[
            "--config",
            cfg,
            "omega",
            "--threshold",
            "2^32"
        ])),
        0
    );
    let summary: Value = last_line(&output);
    assert!(summary["depth"].as_u64().unwrap() < 69);

    assert_eq!(
        code(&esequence(&[
            "--config",
            cfg,
            "periodic",
            "--periodic",
            "2"
        ])),
        2
    );
    std::fs::write(&config, "command = \"omega\"\nbogus = 1\n").unwrap();
    assert_eq!(code(&esequence(&["--config", cfg])), 2);
}

fn last_line(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap();
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let value: toml::Value = toml::from_str(&text).unwrap();
        assert!(value.get("command").is_some(), "{}", path.display());
    }
}
