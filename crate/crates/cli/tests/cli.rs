use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_coniveau"));
    c.env_remove("CONIVEAU_OUT_DIR").env_remove("CONIVEAU_SCENARIO_PATH");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(out)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coniveau-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const TOY: &str = "\
scenario toy
group (Z/2)^2
prime 2
cap 8
gen x1 1
gen x2 1
max_index 1
Q 0 x1 = x1^2
Q 0 x2 = x2^2
Q 1 x1 = x1^4
Q 1 x2 = x2^4
chern x1^2
chern x2^2
candidate q = Q0(x1*x2)
";

#[test]
fn verify_g2() {
    let out = run(&["verify", "g2", "--I", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out.stdout);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["kind"], "certificate");
    assert_eq!(r["body"]["value"], "w7");
    assert_eq!(r["body"]["verdict"], "not-in-strong-coniveau");
    assert_eq!(r["scenario_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn dh_table_elementary() {
    let out = run(&["dh-table", "elementary", "--p", "2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out.stdout)["body"]["rows"].as_array().unwrap().len();
    assert_eq!(rows, 4);
}

#[test]
fn unknown_scenario_is_an_input_error() {
    let out = run(&["verify", "no-such-scenario"]);
    assert_eq!(out.status.code(), Some(2));
    let e = json(&out.stderr);
    assert_eq!(e["reason"], "unknown-scenario");
    assert!(out.stdout.is_empty());
}

#[test]
fn failed_certificate_exits_one() {
    let out = run(&["verify", "elementary", "--p", "3", "--n", "2", "--element", "y1", "--I", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out.stdout)["body"]["verdict"], "rejected-chern");
    let out = run(&["verify", "g2", "--element", "w7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        &["report", "--all"][..],
        &["dh-table", "g2"],
        &["rost", "--n", "3"],
        &["stable-quotient", "so", "--m", "2", "--format", "markdown"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_dir_and_scenario_path() {
    let dir = scratch("env");
    std::fs::write(dir.join("toy.scenario"), TOY).unwrap();
    let out = bin()
        .args(["dh-table", "toy"])
        .env("CONIVEAU_OUT_DIR", dir.join("reports"))
        .env("CONIVEAU_SCENARIO_PATH", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(dir.join("reports/dh-table-toy.json")).unwrap();
    assert_eq!(json(&written)["body"]["rows"][0]["certificate"]["verdict"], "not-in-strong-coniveau");

    let explicit = dir.join("one.md");
    let out = bin()
        .args(["--scenario-file", dir.join("toy.scenario").to_str().unwrap(), "verify", "toy", "--format", "markdown", "--out"])
        .arg(&explicit)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&explicit).unwrap().contains("not-in-strong-coniveau"));
}

#[test]
fn broken_scenario_file_reports_position() {
    let dir = scratch("broken");
    let path = dir.join("bad.scenario");
    std::fs::write(&path, TOY.replace("Q 1 x2 = x2^4", "Q 1 x2 = x2^^4")).unwrap();
    let out = run(&["--scenario-file", path.to_str().unwrap(), "list"]);
    assert_eq!(out.status.code(), Some(2));
    let e = json(&out.stderr);
    assert_eq!(e["reason"], "parse");
    assert!(e["message"].as_str().unwrap().contains("line 11"));

    std::fs::write(&path, TOY.replace("Q 1 x2 = x2^4", "Q 1 x2 = x2^2*x1^2")).unwrap();
    let out = run(&["--scenario-file", path.to_str().unwrap(), "list"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(!json(&out.stderr)["reason"].as_str().unwrap().is_empty());
}

#[test]
fn rost_and_hilbert() {
    let r = json(&run(&["rost", "--n", "2"]).stdout);
    assert_eq!(r["body"]["dh"]["verdict"], "dh-zero");
    assert_eq!(r["body"]["quadric_ranks"][2]["torsion_dim"], 1);
    let h = json(&run(&["hilbert", "elementary", "--p", "2", "--n", "2", "--cap", "4"]).stdout);
    let dims: Vec<u64> = h["body"]["series"].as_array().unwrap().iter().map(|r| r["dimension"].as_u64().unwrap()).collect();
    // F_2[x1, x2]: d + 1 monomials in degree d.
    assert_eq!(dims, [1, 2, 3, 4, 5]);
    assert_eq!(run(&["rost", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn qop_trail() {
    let r = json(&run(&["qop", "elementary", "--p", "3", "--n", "2", "--I", "1,0", "--element", "x1*x2"]).stdout);
    let steps = r["body"]["steps"].as_array().unwrap();
    assert_eq!(steps[0]["op"], "Q0");
    assert_eq!(steps[1]["op"], "Q1");
    assert_eq!(steps[1]["degree"], 8);
}

#[derive(Clone, Debug)]
struct Invocation {
    args: Vec<String>,
    /// Set when the arguments are certainly invalid.
    must_fail: bool,
}

/// Family parameters, mirroring the registry.
fn takes(family: &str, flag: &str) -> bool {
    match flag {
        "--p" => matches!(family, "elementary" | "extraspecial" | "spin7" | "pgl"),
        "--n" => matches!(family, "elementary" | "extraspecial" | "extraspecial_d"),
        "--m" => family == "so",
        "--cap" => family != "pgl",
        _ => true,
    }
}

fn invocation() -> impl Strategy<Value = Invocation> {
    let command = prop::sample::select(vec!["verify", "dh-table", "stable-quotient", "hilbert", "qop", "report"]);
    let scenario = prop::sample::select(vec![
        ("elementary", false),
        ("so", false),
        ("g2", false),
        ("spin7", false),
        ("extraspecial", false),
        ("extraspecial_d", false),
        ("pgl", false),
        ("g2(x)", true),
        ("nonsense", true),
        ("", true),
    ]);
    let p = prop::sample::select(vec![None, Some("2"), Some("3"), Some("5"), Some("4"), Some("0"), Some("x")]);
    let n = prop::sample::select(vec![None, Some("0"), Some("1"), Some("2"), Some("3"), Some("-1")]);
    let m = prop::sample::select(vec![None, Some("1"), Some("2"), Some("9")]);
    let cap = prop::sample::select(vec![None, Some("0"), Some("4"), Some("8"), Some("100000")]);
    let idx = prop::sample::select(vec![None, Some("1"), Some("0,1"), Some("7"), Some("a")]);
    let element = prop::sample::select(vec![None, Some("w4"), Some("x1*x2"), Some("Q0(x1*x2)"), Some("y1"), Some("((")]);
    (command, scenario, p, n, m, cap, idx, element).prop_map(|(c, (s, bad), p, n, m, cap, i, e)| {
        let mut args = vec![c.to_string(), s.to_string()];
        let mut must_fail = bad;
        for (flag, v) in [("--p", p), ("--n", n), ("--m", m), ("--cap", cap), ("--I", i), ("--element", e)] {
            if let Some(v) = v {
                if c == "report" {
                    must_fail = true;
                }
                args.push(flag.to_string());
                args.push(v.to_string());
                must_fail |= matches!(
                    (flag, v),
                    ("--p", "x" | "4" | "0") | ("--n", "-1") | ("--m", "9") | ("--cap", "100000") | ("--I", "a") | ("--element", "((")
                );
                must_fail |= !takes(s, flag);
            }
        }
        Invocation { args, must_fail }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Every invocation ends in 0, 1 or 2; failures carry a JSON reason, and
    /// certainly-invalid input never reports success.
    #[test]
    fn exit_code_contract(inv in invocation()) {
        let out = bin().args(&inv.args).output().unwrap();
        let code = out.status.code();
        prop_assert!(matches!(code, Some(0..=2)), "{:?} exited {:?}: {}", inv.args, code, String::from_utf8_lossy(&out.stderr));
        if code == Some(2) {
            let e: Value = serde_json::from_slice(&out.stderr).unwrap();
            prop_assert_eq!(&e["kind"], "error");
            prop_assert!(e["reason"].as_str().is_some_and(|r| !r.is_empty()));
        } else {
            let r: Value = serde_json::from_slice(&out.stdout).unwrap();
            prop_assert_eq!(&r["schema_version"], 1);
            prop_assert_eq!(r["ok"].as_bool(), Some(code == Some(0)));
        }
        if inv.must_fail {
            prop_assert_eq!(code, Some(2), "{:?}", inv.args);
        }
    }

    /// Corrupting a scenario file never crashes the verifier.
    #[test]
    fn corrupted_scenario_files(pos in 0usize..TOY.len(), byte in prop::sample::select(vec![b'^', b'=', b'9', b' ', b'\n', b'#', b'q'])) {
        let dir = scratch(&format!("fuzz-{pos}-{byte}"));
        let mut text = TOY.as_bytes().to_vec();
        text[pos] = byte;
        let path = dir.join("toy.scenario");
        std::fs::write(&path, &text).unwrap();
        let out = bin().args(["--scenario-file", path.to_str().unwrap(), "dh-table", "toy"]).output().unwrap();
        let code = out.status.code();
        prop_assert!(matches!(code, Some(0..=2)), "exited {:?}: {}", code, String::from_utf8_lossy(&out.stderr));
        if code == Some(2) {
            let e: Value = serde_json::from_slice(&out.stderr).unwrap();
            prop_assert!(e["reason"].as_str().is_some());
        }
    }
}
