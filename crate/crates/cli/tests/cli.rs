use std::process::{Command, Output};

use serde_json::{json, Value};

fn mfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn table(rep: &str, gen: usize, depth: usize) -> Value {
    stdout_json(&mfl(&[
        "table",
        "--rep",
        rep,
        "--gen",
        &gen.to_string(),
        "--depth",
        &depth.to_string(),
    ]))
}

#[test]
fn reps_lists_grammar_and_builtins() {
    let out = mfl(&["reps"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in [
        "std:N",
        "cyc:N:C:PHASE",
        "free:inf",
        "F[N,M](D)",
        "Finf[N](D)",
        "Fext[N](D)",
    ] {
        assert!(text.contains(needle), "missing {needle}");
    }

    let v = stdout_json(&mfl(&["reps", "--json"]));
    assert!(v["grammar"].as_array().unwrap().len() >= 8);
    assert_eq!(v["builtins"].as_array().unwrap().len(), 4);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = mfl(&["reps", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn eval_prints_a_label_keyed_map() {
    let v = stdout_json(&mfl(&[
        "eval",
        "--rep",
        "std:2",
        "--expr",
        "s1 s2'",
        "--vector",
        r#"{"int":3}"#,
    ]));
    assert_eq!(v, json!({ r#"{"int":2}"#: [1.0, 0.0] }));

    let v = stdout_json(&mfl(&[
        "eval",
        "--rep",
        "std:2",
        "--expr",
        "s1 - i s2",
        "--vector",
        r#"{"int":0}"#,
    ]));
    assert_eq!(
        v,
        json!({ r#"{"int":0}"#: [1.0, 0.0], r#"{"int":1}"#: [0.0, -1.0] })
    );
}

#[test]
fn eval_rejects_bad_input() {
    let out = mfl(&[
        "eval",
        "--rep",
        "std:1",
        "--expr",
        "s1",
        "--vector",
        r#"{"int":0}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = mfl(&[
        "eval",
        "--rep",
        "std:2",
        "--expr",
        "s1 +",
        "--vector",
        r#"{"int":0}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = mfl(&["eval", "--rep", "std:2", "--expr", "s1", "--vector", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn functor_image_generator() {
    // F_{3,2}(π)(s_3) = π(s_2)²: e_1 → e_3 → e_7.
    let v = stdout_json(&mfl(&[
        "functor",
        "--to",
        "3",
        "--from",
        "2",
        "--rep",
        "std:2",
        "--vector",
        r#"{"int":1}"#,
        "--generator",
        "3",
    ]));
    assert_eq!(v["rep"], "F[3,2](std:2)");
    assert_eq!(
        v["out"],
        json!({ "phase": [1.0, 0.0], "label": { "int": 7 } })
    );
}

#[test]
fn functor_restriction_and_extension() {
    // t_j* Ω = 0 on the restriction of a Cuntz state.
    let v = stdout_json(&mfl(&[
        "functor",
        "--to",
        "inf",
        "--from",
        "2",
        "--rep",
        "cyc:2:2:-1",
        "--vector",
        r#"{"word":[]}"#,
        "--generator",
        "3",
        "--adjoint",
    ]));
    assert_eq!(v["out"], Value::Null);

    let v = stdout_json(&mfl(&[
        "functor",
        "--to",
        "2",
        "--from",
        "inf",
        "--rep",
        "free:inf",
        "--vector",
        r#"{"word":[]}"#,
        "--generator",
        "1",
    ]));
    assert_eq!(v["rep"], "Fext[2](free:inf)");
    assert_eq!(v["out"]["label"], json!({ "word": [1] }));

    let out = mfl(&[
        "functor",
        "--to",
        "inf",
        "--from",
        "inf",
        "--rep",
        "free:inf",
        "--vector",
        "{\"word\":[]}",
        "--generator",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn closedform_compare_agrees_with_the_functor() {
    for (n, m, rep, j, x) in [
        ("2", "3", "std:3", "2", r#"{"int":5}"#),
        ("4", "3", "cyc:3:1:i", "4", r#"{"word":[3,2]}"#),
        ("5", "3", "cyc:3:3:-1", "5", r#"{"word":[3,3,1]}"#),
    ] {
        let v = stdout_json(&mfl(&[
            "closedform",
            "--to",
            n,
            "--from",
            m,
            "--rep",
            rep,
            "--generator",
            j,
            "--vector",
            x,
            "--compare",
        ]));
        assert_eq!(v["verdict"], "agree", "{n},{m} {rep} s{j} {x}");
        assert_eq!(v["closed_form"], v["constructive"]);
    }
}

#[test]
fn table_of_image_matches_squared_source_generator() {
    let image = table("F[3,2](std:2)", 3, 3);
    assert_eq!(image["rep"], "F[3,2](std:2)");
    assert_eq!(image["gen"], 3);
    assert_eq!(image["adjoint"], false);
    let rows = image["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let x = row["in"]["int"].as_u64().unwrap();
        assert_eq!(row["out"]["label"]["int"].as_u64().unwrap(), 4 * x + 3);
    }
}

#[test]
fn table_of_free_rep_prepends_letters() {
    let t = table("free:inf", 4, 2);
    for row in t["rows"].as_array().unwrap() {
        let mut expected = vec![json!(4)];
        expected.extend(row["in"]["word"].as_array().unwrap().iter().cloned());
        assert_eq!(row["out"]["label"]["word"], Value::Array(expected));
    }
}

#[test]
fn nested_descriptor_tables_agree() {
    for gen in 1..=2 {
        let nested = table("F[2,3](F[3,4](std:4))", gen, 3);
        let direct = table("F[2,4](std:4)", gen, 3);
        assert_eq!(nested["rows"], direct["rows"], "generator {gen}");
    }
}

#[test]
fn table_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = mfl(&[
        "table",
        "--rep",
        "cyc:2:1:-1",
        "--gen",
        "1",
        "--adjoint",
        "--depth",
        "2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["in", "phase_re", "phase_im", "out"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // Ω, [2], [1,2], [2,2].
    assert_eq!(rows.len(), 4);
    let omega = rows.iter().find(|r| &r[0] == r#"{"word":[]}"#).unwrap();
    assert_eq!(
        (&omega[1], &omega[2], &omega[3]),
        ("-1", "0", r#"{"word":[]}"#)
    );
    let killed = rows.iter().find(|r| &r[0] == r#"{"word":[2]}"#).unwrap();
    assert_eq!(&killed[3], "");
}

#[test]
fn verify_subset_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.json");
    let out = mfl(&[
        "verify",
        "--suite",
        "scenario",
        "--grid",
        "2,3",
        "--depth",
        "3",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let body: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(body["summary"]["fail"], 0);
    let reports = body["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports
        .iter()
        .all(|r| r["name"] == "scenario.cuntz_states" && r["status"] == "pass"));
}

#[test]
fn verify_findings_only_fail_in_strict_mode() {
    let args = [
        "verify",
        "--suite",
        "closedform.display",
        "--grid",
        "2,3,4",
        "--depth",
        "3",
    ];
    let out = mfl(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[finding] closedform.display"), "{text}");

    let strict: Vec<&str> = args.iter().copied().chain(["--strict-findings"]).collect();
    assert_eq!(mfl(&strict).status.code(), Some(1));
}

#[test]
fn verify_empty_catalog_is_vacuous() {
    let out = mfl(&[
        "verify",
        "--suite",
        "functor.composition",
        "--catalog",
        "empty",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("[vacuous] functor.composition"));
}

#[test]
fn verify_unknown_suite_is_an_error() {
    assert_eq!(
        mfl(&["verify", "--suite", "nonexistent"]).status.code(),
        Some(2)
    );
}
