use std::process::Command;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use hassett_lab::cli::{self, ClassifyResult, Envelope, LatticeResult, Section, Tabular, WitnessResult};
use hassett_lab::conditions::DiscriminantProfile;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hassett-lab").chain(args.iter().copied());
    let code = cli::main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn error_code(v: &Value) -> &str {
    v["errors"][0]["code"].as_str().unwrap()
}

#[test]
fn check_examples() {
    let (code, v) = json(&["check", "14"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["command"], "check");
    let r = &v["result"];
    assert_eq!(r["has_associated_k3"], true);
    assert_eq!(r["fano_hilb2"]["n"], 2);
    assert_eq!(r["bulles"], serde_json::json!({"f": 1, "g": 14, "n": 2}));
    assert_eq!(r["llsvs"]["status"], "found");
    assert_eq!(v["errors"], serde_json::json!([]));

    let (code, v) = json(&["check", "182"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["bulles"]["n"], 9);
    assert_eq!(v["result"]["llsvs"]["n"], 5);

    let (code, v) = json(&["check", "7"]);
    assert_eq!(code, 2);
    assert_eq!(v["result"], Value::Null);
    assert_eq!(error_code(&v), "not-admissible");
}

#[test]
fn check_rejects_bad_numbers() {
    for bad in ["0", "-14", "abc", "9223372036854775808"] {
        let (code, v) = json(&["check", bad]);
        assert_eq!(code, 2, "{bad}");
        assert_eq!(error_code(&v), "invalid-input", "{bad}");
    }
}

#[test]
fn enumerate_examples() {
    let (code, v) = json(&["enumerate", "8", "50", "--k3"]);
    assert_eq!(code, 0);
    let ds: Vec<u64> = v["result"].as_array().unwrap().iter().map(|p| p["d"].as_u64().unwrap()).collect();
    assert_eq!(ds, [14, 26, 38, 42]);

    let (code, v) = json(&["enumerate", "8", "30", "--tail"]);
    assert_eq!(code, 0);
    let ds: Vec<u64> = v["result"].as_array().unwrap().iter().map(|p| p["d"].as_u64().unwrap()).collect();
    assert_eq!(ds, [24, 26]);

    let (code, v) = json(&["enumerate", "50", "8"]);
    assert_eq!(code, 2);
    assert_eq!(error_code(&v), "invalid-range");
}

#[test]
fn enumerate_streamed_output_matches_buffered_rendering() {
    for format in ["csv", "table"] {
        let (code, streamed, _) = run(&["--format", format, "enumerate", "8", "120", "--bulles"]);
        assert_eq!(code, 0);
        let filter = hassett_lab::conditions::ProfileFilter { bulles: true, ..Default::default() };
        let profiles = cli::cmd_enumerate("8", "120", &filter, 100).unwrap();
        let expected = profiles.sections();
        let parsed = if format == "csv" { cli::parse_csv(&streamed) } else { cli::parse_table(&streamed) };
        assert_eq!(parsed, expected, "{format}");
    }
}

#[test]
fn witness_examples() {
    let (code, v) = json(&["witness", "8"]);
    assert_eq!(code, 0);
    let discs: Vec<u64> = v["result"]["witness"]["all_discs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(discs.len(), 19);
    assert!(discs.contains(&8) && discs.contains(&14));
    assert_eq!(v["result"]["trace"].as_array().unwrap().len(), 6);

    let (code, v) = json(&["witness", "8", "--k3-disc", "182"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["witness"]["k3_disc"], 182);

    let (code, v) = json(&["witness", "8", "--k3-disc", "8"]);
    assert_eq!(code, 1);
    assert_eq!(error_code(&v), "invalid-k3-disc");

    let (code, v) = json(&["witness", "9"]);
    assert_eq!(code, 2);
    assert_eq!(error_code(&v), "not-admissible");
}

#[test]
fn classify_examples() {
    let (code, v) = json(&["classify", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["status"]["finite_dimensional"], "proven");
    assert_eq!(v["result"]["status"]["abelian_type"], "proven");

    let (code, v) = json(&["classify", "14", "--witness", "none"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["status"]["finite_dimensional"], "unknown");
    assert_eq!(v["result"]["witness"], Value::Null);
    assert_eq!(v["result"]["fano"]["relation"], "isomorphic_hilb2");

    let (code, _) = json(&["classify", "14", "--witness", "auto"]);
    assert_eq!(code, 0);
}

#[test]
fn lattice_examples() {
    let (code, v) = json(&["lattice", "--discs", "14"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["gram"], serde_json::json!([[3, 1], [1, 5]]));
    assert_eq!(v["result"]["positive_definite"], true);

    let (code, v) = json(&["lattice", "--discs", "12,14"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["gram"], serde_json::json!([[3, 0, 1], [0, 4, 0], [1, 0, 5]]));
    assert_eq!(v["result"]["sublattice_discriminants"], serde_json::json!([12, 14]));

    let (code, v) = json(&["lattice", "--discs", "10"]);
    assert_eq!(code, 2);
    assert_eq!(error_code(&v), "not-admissible");

    let (code, v) = json(&["lattice", "--discs", "8,8,8,8,8,8,8,8,8"]);
    assert_eq!(code, 1);
    assert_eq!(error_code(&v), "positivity-failure");
}

#[test]
fn usage_errors_exit_with_two() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    let (code, _, _) = run(&["--format", "xml", "check", "14"]);
    assert_eq!(code, 2);
}

/// JSON → typed payload → sections must equal what the CSV and table
/// renderings parse back to.
fn formats_agree<T>(args: &[&str])
where
    T: DeserializeOwned + Serialize + Tabular,
{
    let (code, out, _) = run(&[&["--format", "json"], args].concat());
    let env: Envelope<T> = serde_json::from_str(&out).unwrap();
    let value: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_value(&env).unwrap(), value, "typed round trip of {args:?}");
    let (csv_code, csv, _) = run(&[&["--format", "csv"], args].concat());
    let (table_code, table, _) = run(&[&["--format", "table"], args].concat());
    assert_eq!((code, code), (csv_code, table_code));
    let from_csv = cli::parse_csv(&csv);
    let from_table = cli::parse_table(&table);
    assert_eq!(from_csv, from_table, "{args:?}");
    match env.result {
        Some(r) => assert_eq!(r.sections(), from_csv, "{args:?}"),
        None => {
            let codes: Vec<&str> = env.errors.iter().map(|e| e.code.as_str()).collect();
            let section: &Section = &from_csv[0];
            assert_eq!(section.rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), codes);
        }
    }
}

#[test]
fn output_formats_carry_the_same_data() {
    formats_agree::<DiscriminantProfile>(&["check", "14"]);
    formats_agree::<DiscriminantProfile>(&["check", "182"]);
    formats_agree::<DiscriminantProfile>(&["check", "8"]);
    formats_agree::<DiscriminantProfile>(&["check", "7"]);
    formats_agree::<Vec<DiscriminantProfile>>(&["enumerate", "8", "200"]);
    formats_agree::<WitnessResult>(&["witness", "8"]);
    formats_agree::<WitnessResult>(&["witness", "62", "--k3-disc", "182"]);
    formats_agree::<WitnessResult>(&["witness", "8", "--k3-disc", "8"]);
    formats_agree::<ClassifyResult>(&["classify", "38"]);
    formats_agree::<ClassifyResult>(&["classify", "20", "--witness", "none"]);
    formats_agree::<LatticeResult>(&["lattice", "--discs", "12,14,24"]);
    formats_agree::<LatticeResult>(&["lattice", "--discs", "10"]);
}

#[test]
fn a_bound_from_environment() {
    let bin = env!("CARGO_BIN_EXE_hassett-lab");
    let run_with = |bound: &str| {
        let out = Command::new(bin).args(["check", "38"]).env("HASSETT_LAB_A_BOUND", bound).output().unwrap();
        assert!(out.status.success());
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let narrow = run_with("6");
    assert_eq!(narrow["result"]["addington"]["status"], "bound_exhausted");
    assert_eq!(narrow["result"]["addington"]["a_bound"], 6);
    let wide = run_with("100");
    assert_ne!(wide["result"]["addington"]["status"], "bound_exhausted");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hassett-lab");
    for (args, expected) in [
        (&["check", "14"][..], 0),
        (&["check", "7"][..], 2),
        (&["witness", "8", "--k3-disc", "8"][..], 1),
        (&["lattice", "--discs", "10"][..], 2),
        (&["--format", "table", "classify", "8"][..], 0),
    ] {
        let status = Command::new(bin).args(args).env_remove("HASSETT_LAB_A_BOUND").output().unwrap().status;
        assert_eq!(status.code(), Some(expected), "{args:?}");
    }
}
