use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sparsefair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsefair"))
        .args(args)
        .env_remove("SPARSEFAIR_OUT_DIR")
        .output()
        .unwrap()
}

fn ok_stdout(args: &[&str]) -> String {
    let out = sparsefair(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn report(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

fn component(report: &Value, label: &str) -> f64 {
    report["result"]["components"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["label"] == label)
        .unwrap_or_else(|| panic!("no component {label}"))["value"]
        .as_f64()
        .unwrap()
}

const PARITY: &str = "y_true,y_pred,group\n0,0,a\n1,1,a\n1,0,a\n0,1,a\n0,0,b\n1,1,b\n1,0,b\n0,1,b\n";

#[test]
fn perfect_parity_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "parity.csv", PARITY);
    for criterion in ["sp", "eo", "eo-classic"] {
        let mut args = vec!["evaluate", "--input", &input, "--group-cols", "group", "--criterion", criterion];
        if criterion == "eo-classic" {
            args.extend(["--measure", "mpd"]);
        }
        let r = report(&args);
        assert_eq!(r["schema_version"], 1);
        assert_eq!(r["result"]["value"].as_f64().unwrap(), 0.0, "{criterion}");
    }
}

#[test]
fn ks_demo() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "ks.csv",
        "y_true,y_pred,group\n1,1,A\n2,2,A\n3,3,A\n2,2,B\n3,3,B\n4,4,B\n",
    );
    let r = report(&[
        "evaluate", "--input", &input, "--group-cols", "group", "--task", "regression", "--measure", "mpd",
    ]);
    assert!((r["result"]["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(r["config"]["task"], "regression");
}

#[test]
fn multigroup_mpd_vs_pq() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mg.csv");
    ok_stdout(&[
        "gen", "--scenario", "multigroup-cls", "--n", "500000", "--n-groups", "5", "--seed", "9", "-o",
        csv.to_str().unwrap(),
    ]);
    let input = csv.to_str().unwrap();
    let mpd = report(&["evaluate", "--input", input, "--group-cols", "group", "--measure", "mpd"]);
    let pq = report(&["evaluate", "--input", input, "--group-cols", "group", "--measure", "pq"]);
    assert!((mpd["result"]["value"].as_f64().unwrap() - 0.4).abs() < 0.005);
    assert!((component(&pq, "y=1") - 0.0198).abs() < 0.005);
    assert_eq!(pq["groups"].as_array().unwrap().len(), 5);
}

#[test]
fn data_errors_exit_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let out_s = out.to_str().unwrap();
    let cases = [
        ("missing.csv", "y_true,group\n0,a\n1,b\n", vec![]),
        ("nonnumeric.csv", "y_true,y_pred,group\n1,1,a\nx,2,b\n", vec!["--task", "regression"]),
        ("classes.csv", "y_true,y_pred,group\n0,0,a\n1,2,b\n", vec!["--classes", "0,1"]),
        (
            "negative.csv",
            "y_true,y_pred,group\n1,-2,a\n2,-3,b\n",
            vec!["--task", "regression", "--criterion", "sp-weak"],
        ),
    ];
    for (name, body, extra) in cases {
        let input = write(dir.path(), name, body);
        let mut args = vec!["evaluate", "--input", &input, "--group-cols", "group", "-o", out_s];
        args.extend(extra);
        let o = sparsefair(&args);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
        assert!(!out.exists(), "{name} left a report");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sparsefair(&["evaluate"]).status.code(), Some(2));
    assert_eq!(sparsefair(&["check", "--measure", "pq", "--p", "2", "--q", "1"]).status.code(), Some(2));
    assert_eq!(sparsefair(&["surface", "--measure", "mpd"]).status.code(), Some(2));
    assert_eq!(sparsefair(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_exit_codes() {
    for measure in ["pq", "gini", "mpd"] {
        let out = sparsefair(&["check", "--measure", measure, "--trials", "2000"]);
        assert_eq!(out.status.code(), Some(0), "{measure}");
        let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(summary["all_match"], true);
    }
    let out = sparsefair(&["check", "--measure", "pq", "--properties", "theorems", "--trials", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let out = sparsefair(&["check", "--measure", "pq", "--p", "2", "--q", "5", "--trials", "2000"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_examples() {
    let csv = ok_stdout(&["sweep", "--counts", "2", "--measures", "mpd,pq"]);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers, vec!["group_count", "criterion", "measure", "value", "stderr", "seeds", "grouping"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let aggregate: Vec<_> = rows.iter().filter(|r| &r[1] == "sp").collect();
    assert_eq!(aggregate.len(), 2);
    assert_eq!(aggregate[0][3].parse::<f64>().unwrap(), 0.4);
    let pq1 = rows.iter().find(|r| &r[1] == "sp[y=1]" && r[2].starts_with("pq")).unwrap();
    assert!((pq1[3].parse::<f64>().unwrap() - 0.03847605235917673).abs() < 1e-12);

    let csv = ok_stdout(&["sweep", "--counts", "2,5,10,20,50", "--measures", "mpd"]);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let mpd: Vec<f64> = rdr
        .records()
        .map(Result::unwrap)
        .filter(|r| &r[1] == "sp")
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert_eq!(mpd, vec![0.4; 5]);
}

#[test]
fn sweep_over_groupings() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "g.csv",
        "y_true,y_pred,sex,age\n0,0,m,1\n1,1,m,2\n1,0,f,1\n0,1,f,2\n1,1,f,1\n0,0,m,2\n",
    );
    let csv = ok_stdout(&["sweep", "--input", &input, "--groupings", "sex;sex,age", "--measures", "mpd"]);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let counts: Vec<&str> = rows.iter().filter(|r| &r[1] == "sp").map(|r| &r[0]).collect();
    assert_eq!(counts, ["2", "4"]);
}

#[test]
fn surface_grid_csv() {
    let csv = ok_stdout(&["surface", "--measure", "gini", "--resolution", "11"]);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["w1", "w2", "value"]);
    let rows: Vec<[f64; 3]> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            [r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()]
        })
        .collect();
    assert_eq!(rows.len(), 66);
    let at = |w1: f64, w2: f64| rows.iter().find(|r| r[0] == w1 && r[1] == w2).unwrap()[2];
    assert!((at(0.5, 0.3) - 0.2).abs() < 1e-12);
    assert!((at(1.0, 0.0) - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn gen_sizes_and_seed() {
    let a = ok_stdout(&["gen", "--scenario", "multigroup-cls", "--n", "101", "--seed", "3"]);
    let b = ok_stdout(&["gen", "--scenario", "multigroup-cls", "--n", "101", "--seed", "3"]);
    assert_eq!(a, b);
    let mut rdr = csv::Reader::from_reader(a.as_bytes());
    let groups: Vec<String> = rdr.records().map(|r| r.unwrap()[2].to_string()).collect();
    assert_eq!(groups.len(), 101);
    assert_eq!(groups.iter().filter(|g| *g == "0").count(), 51);
    assert_eq!(groups.iter().filter(|g| *g == "1").count(), 50);

    let reg = ok_stdout(&["gen", "--scenario", "twogroup-reg", "--n", "10", "--seed", "3"]);
    assert!(reg.starts_with("y_true,y_pred,group,x\n"));
    assert_eq!(reg.lines().count(), 11);
}

#[test]
fn out_dir_env_sets_default_destination() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sparsefair"))
        .args(["gen", "--scenario", "twogroup-cls", "--n", "20"])
        .env("SPARSEFAIR_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("twogroup_cls.csv")).unwrap();
    assert_eq!(written.lines().count(), 21);
}

#[test]
fn report_carries_config_and_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "w.csv", "y_true,y_pred,group\n0,0,a\n0,0,a\n0,0,b\n1,1,b\n");
    let r = report(&[
        "evaluate", "--input", &input, "--group-cols", "group", "--criterion", "eo-classic", "--measure", "mpd",
        "--on-undefined", "drop",
    ]);
    assert_eq!(r["config"]["criterion"], "eo-classic");
    assert!(!r["warnings"].as_array().unwrap().is_empty());
}
