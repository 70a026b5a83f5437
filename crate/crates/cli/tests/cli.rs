use std::process::{Command, Output};

use serde_json::Value;

fn tubed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tubed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("diagnostic line");
    serde_json::from_str(line).expect("stderr is a JSON record")
}

#[test]
fn chunks_example() {
    let out = tubed(&["chunks", "--n", "7", "--index", "1,3,5,6,7,11,12"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["tool"], "tubed");
    assert_eq!(doc["n"], 7);
    assert_eq!(doc["command"]["subcommand"], "chunks");
    assert_eq!(doc["result"]["sizes"], serde_json::json!([1, 1, 3, 2]));
    assert_eq!(
        doc["result"]["chunks"][2]["members"],
        serde_json::json!([5, 6, 7])
    );
}

#[test]
fn index_is_sorted_and_deduplicated() {
    let a = tubed(&["chunks", "--n", "3", "--index", "3,1,2,2"]);
    let b = tubed(&["chunks", "--n", "3", "--index", "1,2,3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["result"]["sizes"], serde_json::json!([3]));
}

#[test]
fn cross_side_path_reports_no_path() {
    let out = tubed(&["path", "--n", "2", "--index", "1,3", "--target", "2,4"]);
    assert_eq!(out.status.code(), Some(7));
    let doc = json(&out);
    assert_eq!(doc["result"]["found"], false);
    assert_eq!(doc["result"]["start_side"], "below");
    assert_eq!(doc["result"]["target_side"], "above");
    assert_eq!(error_record(&out)["error"], "no-path");
}

#[test]
fn same_side_path_is_found() {
    let out = tubed(&["path", "--n", "3", "--index", "1,3,5", "--target", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["found"], true);
    let steps = doc["result"]["path"]["steps"].as_array().unwrap();
    assert_eq!(
        steps.len() as u64,
        doc["result"]["length"].as_u64().unwrap()
    );
    assert_eq!(steps.last().unwrap()["to"], serde_json::json!([1, 2, 3]));
}

#[test]
fn bounds_report() {
    let out = tubed(&["bounds", "--n", "3", "--d", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"][0]["cross_side_stable_genus_lower"], 5);
    assert_eq!(doc["result"][0]["hypothesis_d_ge_4n"], true);

    let out = tubed(&["bounds", "--n", "5", "--d", "11,20", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# tubed "));
    assert_eq!(
        lines[1],
        "n,d,genus,count,same_side_upper,cross_side_lower,d_gt_2n,d_ge_4n"
    );
    assert_eq!(lines[2], "5,11,5,252,6,5,true,false");
    assert_eq!(lines[3], "5,20,5,252,6,9,true,true");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["graph", "--n", "4"][..],
        &["tunnels", "--n", "3"],
        &["classify", "--n", "4"],
        &["verify", "--n", "3"],
    ] {
        let a = tubed(args);
        let b = tubed(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["pair", "--n", "3"], 2, "invalid-arguments"),
        (
            &["pair", "--n", "3", "--index", "1,2"],
            2,
            "invalid-arguments",
        ),
        (
            &["pair", "--n", "3", "--index", "1,2,9"],
            2,
            "invalid-arguments",
        ),
        (
            &["chunks", "--n", "1", "--index", "1"],
            2,
            "invalid-arguments",
        ),
        (
            &["graph", "--n", "3", "--format", "csv"],
            2,
            "invalid-arguments",
        ),
        (
            &["graph", "--n", "3", "--graph-cap", "9"],
            2,
            "invalid-arguments",
        ),
        (
            &["moves", "--n", "3", "--index", "1,3,5", "--apply", "2,3"],
            2,
            "invalid-move",
        ),
        (
            &["moves", "--n", "3", "--index", "1,3,5", "--apply", "1,1"],
            2,
            "excluded-move",
        ),
        (
            &["moves", "--n", "2", "--index", "1,2", "--apply", "1,2"],
            3,
            "move-rejected",
        ),
        (&["graph", "--n", "8"], 4, "resource-limit"),
        (&["enumerate", "--n", "11"], 4, "resource-limit"),
        (&["nonsense"], 2, "invalid-arguments"),
    ];
    for (args, code, kind) in cases {
        let out = tubed(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}");
        assert_eq!(error_record(&out)["error"], *kind, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn moves_listing_and_apply() {
    let out = tubed(&["moves", "--n", "3", "--index", "1,3,5"]);
    let doc = json(&out);
    let moves = doc["result"]["moves"].as_array().unwrap();
    assert_eq!(moves.len(), 6);
    let valid = moves.iter().filter(|m| m["valid"] == true).count();
    assert_eq!(doc["result"]["valid"], valid);

    let out = tubed(&["moves", "--n", "3", "--index", "1,3,5", "--apply", "1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(
        doc["result"]["after"]["index"],
        serde_json::json!([1, 2, 5])
    );
    assert_eq!(doc["result"]["after"]["side"], "below");
}

#[test]
fn pair_includes_oracle_check() {
    let doc = json(&tubed(&["pair", "--n", "2", "--index", "1,2"]));
    assert_eq!(
        doc["result"]["surface"]["annuli"],
        serde_json::json!([[1, 4], [2, 3]])
    );
    assert_eq!(doc["result"]["oracle"]["matchings"], 1);
    assert_eq!(doc["result"]["oracle"]["agrees"], true);

    let doc = json(&tubed(&[
        "pair",
        "--n",
        "9",
        "--index",
        "1,2,3,4,5,6,7,8,9",
    ]));
    assert_eq!(doc["result"]["oracle"]["checked"], false);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atlas.json");
    let out = tubed(&["tunnels", "--n", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["total"], 20);
    assert_eq!(doc["result"]["below"], 10);
    assert_eq!(doc["result"]["above"], 10);
    let systems = doc["result"]["systems"].as_array().unwrap();
    assert!(systems
        .iter()
        .all(|s| s["tunnels"].as_array().unwrap().len() == 2));
}

#[test]
fn dot_export() {
    let out = tubed(&["graph", "--n", "3", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("// tubed "));
    assert_eq!(lines.next(), Some("digraph moves_n3 {"));
    assert_eq!(text.matches("fillcolor=\"lightblue\"").count(), 10);
    assert_eq!(text.matches("fillcolor=\"lightsalmon\"").count(), 10);
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn graph_components() {
    let doc = json(&tubed(&["graph", "--n", "4"]));
    let comps = doc["result"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["size"], 35);
    assert_eq!(comps[1]["size"], 35);
    assert_ne!(comps[0]["side"], comps[1]["side"]);
}

#[test]
fn verify_passes() {
    let out = tubed(&["verify", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let checks = doc["result"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["failures"] == 0));
    let sizes: Vec<Value> = doc["result"]["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["sizes"].clone())
        .collect();
    assert_eq!(
        sizes,
        vec![
            serde_json::json!([3, 3]),
            serde_json::json!([10, 10]),
            serde_json::json!([35, 35])
        ]
    );

    let out = tubed(&["verify", "--n", "3", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| !l.starts_with("[FAIL]")));
    assert!(text.contains("tunnel systems n=3: 20 total, 10 below, 10 above"));
}

#[test]
fn classify_single_and_batch() {
    let doc = json(&tubed(&["classify", "--n", "3", "--index", "2,4,6"]));
    assert_eq!(doc["result"]["side"], "above");
    let doc = json(&tubed(&["classify", "--n", "3"]));
    assert_eq!(doc["result"]["total"], 20);
    assert_eq!(doc["result"]["below"], 10);
}

#[test]
fn enumerate_lists_every_index() {
    let doc = json(&tubed(&["enumerate", "--n", "4"]));
    let entries = doc["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 70);
    assert_eq!(entries[0]["index"], serde_json::json!([1, 2, 3, 4]));
}
