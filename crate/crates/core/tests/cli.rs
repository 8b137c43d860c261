use std::process::Command;

use arcmilnor::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("arcmilnor").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn lefschetz_of_the_cusp() {
    let (code, out, _) = run(&["lefschetz", "--f", "x^2+y^3", "--vars", "x,y", "--n", "6"]);
    assert_eq!((code, out.trim()), (0, "-1"));
    let (code, out, _) = run(&["lefschetz", "--f", "x^2+y^3", "--n", "6", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((code, v["lefschetz"].as_i64()), (0, Some(-1)));
}

#[test]
fn sec_report_passes() {
    let (code, out, err) = run(&[
        "verify", "sec", "--f", "x^2+y^3", "--vars", "x,y", "--n", "6", "--d", "2", "--primes", "7,13,19,31", "--json",
    ]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["theorem"], "SEC");
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn precondition_errors_exit_with_two() {
    assert_eq!(run(&["resolve", "--f", "x^2+y^3+x", "--vars", "x,y"]).0, 0);
    let (code, _, err) = run(&["resolve", "--f", "x+1"]);
    assert_eq!(code, 2);
    assert!(err.contains("origin"), "{err}");
    assert_eq!(run(&["lefschetz", "--n", "2"]).0, 2);
    assert_eq!(run(&["lefschetz", "--f", "x^2", "--vars", "x", "--res", "r.json", "--n", "2"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["volume", "--f", "x^2+y^3", "--mode", "count"]).0, 2);
    assert_eq!(run(&["verify", "mt", "--f", "x*y", "--n", "3", "--primes", "3,5"]).0, 2);
}

#[test]
fn aborted_computations_exit_with_three() {
    assert_eq!(run(&["count", "--f", "x^2+y^3", "--n", "6", "--q", "13", "--work-bound", "1000"]).0, 3);
    assert_eq!(run(&["class", "--f", "x^2+y^3", "--n", "6", "--mode", "split"]).0, 3);
    assert_eq!(run(&["resolve", "--f", "(x^2-2*y^2)^2+y^5"]).0, 3);
    assert_eq!(run(&["resolve", "--f", "x^2+y^3", "--max-blowups", "1"]).0, 3);
}

#[test]
fn failing_verification_exits_with_one() {
    // x^3 + y^3 at n = 3: the cover over the exceptional curve has genus one,
    // the count is not a polynomial in q and the fit must be rejected
    let (code, out, _) = run(&[
        "verify", "mt", "--f", "x^3+y^3", "--n", "3", "--primes", "7,13,19,31,37,43,61,67",
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("fail"));
}

#[test]
fn resolution_json_round_trips() {
    let dir = std::env::temp_dir().join(format!("arcmilnor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cusp.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["resolve", "--f", "x^2+y^3", "--json", "--out", p]).0, 0);
    for (cmd, want) in [
        (vec!["zeta"], "(1-t^2)(1-t^3)(1-t^6)^-1"),
        (vec!["lefschetz", "--n", "4"], "2"),
        (vec!["volume"], "-1"),
        (vec!["class", "--n", "2", "--mode", "split"], "2*L^3"),
        (vec!["class", "--n", "6", "--mode", "count", "--q", "7"], "9058973"),
    ] {
        let mut args = cmd.clone();
        args.extend(["--res", p]);
        let (code, out, err) = run(&args);
        assert_eq!((code, out.trim()), (0, want), "{cmd:?} {err}");
    }
    let (_, again, _) = run(&["resolve", "--res", p, "--json"]);
    assert_eq!(again.trim(), std::fs::read_to_string(&path).unwrap().trim());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_and_json_carry_the_same_values() {
    let (_, text, _) = run(&["s-invariants", "--f", "x^2+y^3"]);
    let (_, json, _) = run(&["s-invariants", "--f", "x^2+y^3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for line in text.lines() {
        let (i, s) = line.split_once(": ").unwrap();
        assert_eq!(v["s"][i].as_i64().unwrap().to_string(), s);
    }
    let (_, text, _) = run(&["count", "--f", "x^2+y^3", "--n", "6", "--q", "7", "--threads", "2"]);
    let (_, json, _) = run(&["count", "--f", "x^2+y^3", "--n", "6", "--q", "7", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["count"].as_str().unwrap(), text.trim());
    let (_, text, _) = run(&["series", "--f", "x*y", "--n", "3"]);
    let (_, json, _) = run(&["series", "--f", "x*y", "--n", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(text.ends_with(&format!("T^3: {}\n", v["coefficient"].as_str().unwrap())));
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_arcmilnor"))
        .args(["fixed-count", "--f", "x^2+y^3", "--n", "6", "--d", "2", "--q", "7"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "686");
    let out = Command::new(env!("CARGO_BIN_EXE_arcmilnor")).args(["resolve", "--f", "x+1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
