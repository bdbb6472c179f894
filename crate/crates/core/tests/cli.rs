use std::process::{Command, Output};

use serde_json::Value;

fn lpcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpcodes"))
        .args(args)
        .env_remove("QP_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = lpcodes(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn compact(rows: &Value) -> String {
    rows.as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

#[test]
fn hits_round_trip_through_analyze() {
    let report: Value = serde_json::from_str(&stdout(&["search", "--dim", "2", "--p", "3", "--max-volume", "60"])).unwrap();
    let hits = report["hits"].as_array().unwrap();
    assert!(!hits.is_empty());
    for hit in hits {
        let json = serde_json::to_string(&hit["basis"]).unwrap();
        let again: Value = serde_json::from_str(&stdout(&["analyze", "--dim", "2", "--p", "3", "--basis", &json])).unwrap();
        assert_eq!(again, hit["analysis"]);
        let again: Value =
            serde_json::from_str(&stdout(&["analyze", "--dim", "2", "--p", "3", "--basis", &compact(&hit["basis"])])).unwrap();
        assert_eq!(again, hit["analysis"]);
    }
}

#[test]
fn csv_and_json_carry_the_same_search() {
    let args = ["search", "--dim", "3", "--p", "2", "--max-volume", "30"];
    let json: Value = serde_json::from_str(&stdout(&args)).unwrap();
    let csv_text = stdout(&[&args[..], &["--format", "csv"]].concat());
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let hits = json["hits"].as_array().unwrap();
    assert_eq!(rows.len(), hits.len());
    for (row, hit) in rows.iter().zip(hits) {
        let a = &hit["analysis"];
        for (name, cell) in headers.iter().zip(row) {
            let want = if name == "basis" { Value::String(compact(&a["basis"])) } else { a[name].clone() };
            match want {
                Value::Null => assert_eq!(cell, ""),
                Value::String(s) => assert_eq!(cell, s),
                Value::Number(x) => assert_eq!(cell.parse::<f64>().unwrap(), x.as_f64().unwrap(), "{name}"),
                other => panic!("unexpected {name}: {other}"),
            }
        }
    }
}

#[test]
fn exit_codes() {
    let out = lpcodes(&["analyze", "--dim", "2", "--basis", "1,5;0,24"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--p"));

    let out = lpcodes(&["analyze", "--dim", "2", "--p", "2", "--basis", "1,2;2,4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--basis"));

    let out = lpcodes(&["family", "--kind", "B", "--r", "3", "--p", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2(r-1)^p > r^p"));

    let out = lpcodes(&["distset", "--dim", "2", "--p", "2", "--limit", "99999999999"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--limit"));

    assert_eq!(lpcodes(&["tables", "--which", "table3"]).status.code(), Some(0));
}

#[test]
fn tables_are_deterministic_and_use_decimal_points() {
    for which in ["table1", "table2", "table3", "table4"] {
        let a = stdout(&["tables", "--which", which, "--format", "csv"]);
        assert_eq!(a, stdout(&["tables", "--which", which, "--format", "csv"]));
        for line in a.lines().skip(1) {
            for cell in line.split(',') {
                if let Ok(x) = cell.parse::<f64>() {
                    // at most four decimals, as printed in the reference tables
                    let decimals = cell.split('.').nth(1).map_or(0, str::len);
                    assert!(decimals <= 4, "{which}: {cell} ({x})");
                }
            }
        }
    }
}

#[test]
fn jobs_come_from_the_environment() {
    let base = ["search", "--dim", "2", "--p", "2", "--max-volume", "80"];
    let plain = stdout(&base);
    let out = Command::new(env!("CARGO_BIN_EXE_lpcodes")).args(base).env("QP_JOBS", "3").output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), plain);
    let out = Command::new(env!("CARGO_BIN_EXE_lpcodes")).args(base).env("QP_JOBS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn checkpoint_and_svg_files() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.tsv");
    let ck_s = ck.to_str().unwrap();
    stdout(&["search", "--dim", "2", "--p", "2", "--max-volume", "25", "--checkpoint", ck_s]);
    let lines: Vec<String> = std::fs::read_to_string(&ck).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 25);
    for (i, line) in lines.iter().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        assert_eq!(fields.len(), 3, "{line}");
        assert_eq!(fields[0].parse::<u64>().unwrap(), i as u64 + 1);
        fields[1].parse::<u64>().unwrap();
        fields[2].parse::<u64>().unwrap();
    }
    let resumed: Value =
        serde_json::from_str(&stdout(&["search", "--dim", "2", "--p", "2", "--max-volume", "25", "--checkpoint", ck_s])).unwrap();
    let fresh: Value = serde_json::from_str(&stdout(&["search", "--dim", "2", "--p", "2", "--max-volume", "25"])).unwrap();
    assert_eq!(resumed["hits"], fresh["hits"]);
    assert!(resumed["counts"]["resumed_volumes"].as_u64().unwrap() > 0);

    let svg = dir.path().join("tile.svg");
    stdout(&["polyomino", "--p", "2", "--r", "3", "--basis", "3,5;6,-1", "--out", svg.to_str().unwrap()]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
}
