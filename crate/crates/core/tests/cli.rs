use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["hullcensus", "--no-cache"];
    argv.extend_from_slice(args);
    let code = hullcensus::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = run(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn spectrum_example_one() {
    let (code, out, _) = run(&["spectrum", "--q", "3", "--n", "8", "--k", "4"]);
    assert_eq!(code, 0);
    for v in ["48958182", "23587200", "3276000", "89600", "2240"] {
        assert!(out.contains(v), "{v} missing:\n{out}");
    }
    let doc = json(&["spectrum", "--q", "3", "--n", "8", "--k", "4"]);
    assert_eq!(
        strings(&doc["results"]["counts"]),
        ["48958182", "23587200", "3276000", "89600", "2240"]
    );
}

#[test]
fn spectrum_json_counts_are_strings() {
    let doc = json(&["spectrum", "--q", "2", "--n", "4", "--k", "2"]);
    assert_eq!(strings(&doc["results"]["counts"]), ["20", "12", "3"]);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["verified"], true);
}

#[test]
fn brute_method_matches_formula() {
    let a = json(&[
        "spectrum", "--q", "2", "--n", "10", "--k", "5", "--method", "brute",
    ]);
    let b = json(&[
        "spectrum", "--q", "2", "--n", "10", "--k", "5", "--method", "sendrier",
    ]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(
        strings(&a["results"]["counts"]),
        ["46792704", "46701312", "13708800", "1943100", "73440", "2295"]
    );
}

#[test]
fn hash_ignores_timing_and_threads() {
    let a = json(&[
        "spectrum",
        "--q",
        "2",
        "--n",
        "6",
        "--k",
        "3",
        "--method",
        "brute",
        "--threads",
        "1",
    ]);
    let b = json(&[
        "spectrum",
        "--q",
        "2",
        "--n",
        "6",
        "--k",
        "3",
        "--method",
        "brute",
        "--threads",
        "3",
    ]);
    assert_eq!(a["canonical_hash"], b["canonical_hash"]);
    assert_eq!(a["canonical_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn ratios_examples() {
    let (code, out, _) = run(&["ratios", "--q", "3", "--n", "9", "--k", "4"]);
    assert_eq!(code, 0);
    for v in ["2.025", "8.1", "29.25", "90"] {
        assert!(out.contains(v), "{v} missing:\n{out}");
    }
    let doc = json(&["ratios", "--q", "2", "--n", "10", "--k", "5"]);
    let decimals: Vec<&str> = doc["results"]["ratios"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["ratio_decimal_display_only"].as_str().unwrap())
        .collect();
    assert_eq!(decimals, ["1.00196", "3.40667", "7.05512", "26.4583", "32"]);
}

#[test]
fn degenerate_ratio_is_reported() {
    let doc = json(&["ratios", "--q", "3", "--n", "6", "--k", "3"]);
    let last = &doc["results"]["ratios"][2];
    assert_eq!(last["degenerate"], true);
    assert!(last["reason"].as_str().unwrap().contains("zero"));
}

#[test]
fn verify_grid_exits_zero() {
    let (code, out, _) = run(&["ratios", "--verify-grid", "--q", "5", "--max-n", "14"]);
    assert_eq!(code, 0);
    assert!(out.contains("violations"));
}

#[test]
fn classify_examples() {
    let doc = json(&[
        "classify", "--q", "2", "--n", "6", "--k", "3", "--min-d", "2", "--min-dd", "2",
    ]);
    let cells = &doc["results"]["census"]["cells"];
    let total = |t: &str| cells[t]["total"].as_str().unwrap().to_string();
    assert_eq!(
        [total("linear"), total("even"), total("SO"), total("LCD")],
        ["8", "3", "1", "2"]
    );

    let doc = json(&[
        "classify", "--q", "3", "--n", "6", "--k", "3", "--min-d", "2", "--min-dd", "2",
    ]);
    let cells = &doc["results"]["census"]["cells"];
    let total = |t: &str| cells[t]["total"].as_str().unwrap().to_string();
    assert_eq!(
        [total("linear"), total("SO"), total("LCD")],
        ["14", "0", "7"]
    );

    let doc = json(&[
        "classify",
        "--q",
        "2",
        "--n",
        "4",
        "--k",
        "2",
        "--mass-check",
    ]);
    let checks = doc["results"]["mass_check"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|m| m["holds"] == true));
}

#[test]
fn classify_csv_listing() {
    let (code, out, _) = run(&[
        "classify", "--q", "2", "--n", "4", "--k", "2", "--list", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,k,q,hull_dim,d,dual_d,even,self_orthogonal,lcd,aut_order,generator"
    );
    assert_eq!(lines.count(), 6);
    // span{1100, 0011}: its orbit's smallest RREF is 1001/0110, with 8 automorphisms
    assert!(out.contains("4,2,2,2,2,2,true,true,false,8,96"), "{out}");
}

#[test]
fn crosscheck_runs() {
    assert_eq!(run(&["crosscheck", "--q", "2", "--max-n", "9"]).0, 0);
    assert_eq!(
        run(&["crosscheck", "--q", "3", "--max-n", "6", "--with-brute"]).0,
        0
    );
    assert_eq!(run(&["crosscheck", "--q", "4", "--max-n", "12"]).0, 0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["spectrum", "--q", "6", "--n", "3", "--k", "1"]).0, 2);
    assert_eq!(run(&["spectrum", "--q", "2", "--n", "3", "--k", "5"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    let (code, _, err) = run(&[
        "spectrum", "--q", "2", "--n", "40", "--k", "20", "--method", "brute",
    ]);
    assert_eq!(code, 3);
    assert!(err.contains("guard"));
    assert_eq!(run(&["classify", "--q", "2", "--n", "9", "--k", "2"]).0, 3);
    assert_eq!(run(&["classify", "--q", "5", "--n", "3", "--k", "1"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn cache_is_a_pure_memo() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_hullcensus");
    let call = || {
        let out = Command::new(bin)
            .env("HULLCENSUS_CACHE", dir.path())
            .args([
                "spectrum", "--q", "3", "--n", "5", "--k", "2", "--method", "brute", "--format",
                "json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let first = call();
    let second = call();
    assert_eq!(first["provenance"]["cached"], false);
    assert_eq!(second["provenance"]["cached"], true);
    assert_eq!(first["canonical_hash"], second["canonical_hash"]);
    // a corrupted entry is ignored, not trusted
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), b"not json").unwrap();
    }
    let third = call();
    assert_eq!(third["results"], first["results"]);
}

#[test]
fn binary_exit_code_for_domain_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_hullcensus"))
        .args(["--no-cache", "ratios", "--q", "3", "--n", "4", "--k", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k <= n/2"));
}
