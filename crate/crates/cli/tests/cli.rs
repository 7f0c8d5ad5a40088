use std::path::Path;
use std::process::{Command, Output};

use gbcodes::{build_gb_str, BitVec};
use serde_json::Value;
use tempfile::TempDir;

fn gbx(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbx"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("gbx runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_base(dir: &Path) {
    let o = gbx(dir, &["build", "--a", "1+x^4", "--b", "1+x+x^2+x^4", "--ell", "5", "--out", "code.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn build_then_distance() {
    let dir = TempDir::new().unwrap();
    let o = gbx(dir.path(), &["build", "--a", "10001", "--b", "1+x+x^2+x^4", "--ell", "5", "--distance"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64()), (Some(10), Some(2), Some(3)));
    assert_eq!(v["a"], "1+x^4");

    write_base(dir.path());
    let o = gbx(dir.path(), &["distance", "--code", "code.json", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d"], 3);
    assert_eq!(v["exact"], true);
    let w = v["witness"].as_str().unwrap();
    assert_eq!(w.len(), 20);
    assert_eq!(w.chars().filter(|&c| c == '1').count(), 3);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let empty = gbx(dir.path(), &["search", "--ell", "4", "--min-distance", "3"]);
    assert_eq!(empty.status.code(), Some(2));
    assert!(stdout(&empty).contains("49 with k > 0"));
    assert_eq!(gbx(dir.path(), &["search", "--ell", "13"]).status.code(), Some(3));
    write_base(dir.path());
    let budget = gbx(dir.path(), &["distance", "--code", "code.json", "--budget", "4"]);
    assert_eq!(budget.status.code(), Some(3));
    assert_eq!(gbx(dir.path(), &["report", "missing.csv"]).status.code(), Some(4));
    std::fs::write(dir.path().join("bad.json"), "{not json").unwrap();
    assert_eq!(gbx(dir.path(), &["distance", "--code", "bad.json"]).status.code(), Some(4));
    std::fs::write(dir.path().join("bad.csv"), "wrong,header\n").unwrap();
    assert_eq!(gbx(dir.path(), &["report", "bad.csv"]).status.code(), Some(4));
}

#[test]
fn search_counts_and_ranking() {
    let dir = TempDir::new().unwrap();
    let o = gbx(dir.path(), &["search", "--ell", "5", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total_pairs"], 961);
    assert_eq!(v["positive_dim"], 226);
    let o = gbx(dir.path(), &["search", "--ell", "5", "--min-distance", "3", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("pair_index,a,b,n,k,w_r,d,ler\n"));
    assert!(text.lines().any(|l| l.contains(",1+x^4,1+x+x^2+x^4,10,2,6,3,")));
}

#[test]
fn catalog_lists_six_codes() {
    let dir = TempDir::new().unwrap();
    let o = gbx(dir.path(), &["catalog", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 6);
    assert!(entries.iter().all(|e| e["k"] == 2));
    assert_eq!(entries[2]["b"], "1+x+x^3+x^6");
}

#[test]
fn families_and_certificates() {
    let dir = TempDir::new().unwrap();
    write_base(dir.path());
    let o = gbx(dir.path(), &["scale3", "--base", "code.json", "--levels", "3", "--out", "fam.json"]);
    assert!(o.status.success());
    let fam: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fam.json")).unwrap()).unwrap();
    let ns: Vec<u64> = fam.as_array().unwrap().iter().map(|c| c["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [10, 30, 90]);
    let certs: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fam.embedding.json")).unwrap()).unwrap();
    assert_eq!(certs.as_array().unwrap().len(), 2);
    assert!(certs.as_array().unwrap().iter().all(|c| c["holds"] == true));
    assert_eq!(certs[0]["x_block_perm"], serde_json::json!([2, 4, 0, 3, 5, 1]));

    let o = gbx(dir.path(), &["scale4", "--base", "code.json", "--levels", "3", "--j", "2", "--r", "5"]);
    let fam: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ns: Vec<u64> = fam.as_array().unwrap().iter().map(|c| c["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [10, 20, 30]);

    let o = gbx(dir.path(), &["extend", "--plan", "thm3", "--base", "code.json", "--members", "1,2", "--format", "text"]);
    let text = stdout(&o);
    assert!(text.contains("m = 2: [[30,"), "{text}");
    assert!(text.contains("k >= k_1 on every member: true"));

    let plan = r#"{"base": {"a": "1+x^4", "b": "1+x+x^2+x^4", "ell": 5}, "M": 2, "kappa": [1, 3], "p_seq": ["1", "1+x^5"]}"#;
    std::fs::write(dir.path().join("plan.json"), plan).unwrap();
    let o = gbx(dir.path(), &["extend", "--plan", "plan.json", "--members", "1..2", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = gbx(dir.path(), &["extend", "--plan", "plan.json", "--members", "1..3"]);
    assert!(!o.status.success());
}

#[test]
fn decode_round_trip() {
    let dir = TempDir::new().unwrap();
    write_base(dir.path());
    let code = build_gb_str("1+x^4", "1+x+x^2+x^4", 5).unwrap();
    let ex = BitVec::from_support(10, &[7]);
    let ez = BitVec::from_support(10, &[2]);
    let sx = code.hx().mul_vec(&ez).unwrap();
    let sz = code.hz().mul_vec(&ex).unwrap();
    std::fs::write(dir.path().join("s.txt"), format!("{sx}\n{sz}\n")).unwrap();
    let o = gbx(dir.path(), &["decode", "--code", "code.json", "--syndrome", "s.txt", "--p", "0.01", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ex"], ex.to_string());
    assert_eq!(v["ez"], ez.to_string());
    std::fs::write(dir.path().join("short.txt"), "101\n").unwrap();
    let o = gbx(dir.path(), &["decode", "--code", "code.json", "--syndrome", "short.txt", "--p", "0.01"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sweep_is_reproducible_and_reportable() {
    let dir = TempDir::new().unwrap();
    write_base(dir.path());
    let args = |out: &'static str| {
        vec![
            "sweep", "--plan", "identity", "--base", "code.json", "--members", "1..2", "--p-min", "0.05", "--p-max",
            "0.15", "--p-step", "0.05", "--trials", "2000", "--stop", "fixed", "--seed", "17", "--out", out,
        ]
    };
    assert!(gbx(dir.path(), &args("a.csv")).status.success());
    assert!(gbx(dir.path(), &[&args("b.csv")[..], &["--threads", "1"]].concat()).status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("code_label,n,k,p,trials,failures,ler,ci_low,ci_high,seed\n"));
    assert_eq!(text.lines().count(), 7);
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["options"]["seed"], 17);
    assert_eq!(manifest["decoder"]["osd_order"], 5);

    let o = gbx(dir.path(), &["report", "a.csv", "b.csv", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), text, "merging identical CSVs is idempotent");
    let o = gbx(dir.path(), &["report", "a.csv"]);
    let report = stdout(&o);
    assert!(report.contains("ell5-m1:") && report.contains("ell5-m2:"), "{report}");
    assert!(report.contains("ell5-m1 vs ell5-m2"));
}
