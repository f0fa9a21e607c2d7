use std::process::{Command, Output};

use serde_json::Value;

fn permtab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permtab"))
        .args(args)
        .env_remove("PERMTAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON value per line"))
        .collect()
}

fn counts(v: &Value) -> Vec<(u64, String)> {
    v["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["value"].as_u64().unwrap(),
                e["count"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

#[test]
fn enumerate_small_lengths() {
    let o = permtab(&["enumerate", "--n", "3"]);
    assert!(o.status.success());
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[6]["count"], 6);

    let o = permtab(&["enumerate", "--n", "1"]);
    let lines = json_lines(&o);
    assert_eq!(lines[0]["rows"], "");
    assert_eq!(lines[1]["count"], 1);
}

#[test]
fn enumerate_guard() {
    let o = permtab(&["enumerate", "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit"));
}

#[test]
fn dist_examples() {
    let o = permtab(&["dist", "--n", "3", "--stat", "rows", "--method", "pgf"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(
        counts(v),
        vec![(1, "1".into()), (2, "4".into()), (3, "1".into())]
    );
    assert_eq!(v["total"], "6");

    let o = permtab(&["dist", "--n", "3", "--stat", "unrestricted"]);
    let v = &json_lines(&o)[0];
    assert_eq!(
        counts(v),
        vec![(1, "2".into()), (2, "3".into()), (3, "1".into())]
    );
}

#[test]
fn dist_methods_agree() {
    let mut seen = Vec::new();
    for method in ["pgf", "dp", "exhaustive"] {
        let o = permtab(&[
            "dist",
            "--n",
            "6",
            "--stat",
            "superfluous",
            "--method",
            method,
        ]);
        assert!(o.status.success(), "{method}");
        seen.push(counts(&json_lines(&o)[0]));
    }
    assert_eq!(seen[0], seen[1]);
    assert_eq!(seen[0], seen[2]);
}

#[test]
fn dist_rejects_bad_requests() {
    assert_eq!(
        permtab(&["dist", "--n", "0", "--stat", "rows"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        permtab(&["dist", "--n", "4", "--stat", "nope"])
            .status
            .code(),
        Some(2)
    );
    let o = permtab(&[
        "dist",
        "--n",
        "4",
        "--stat",
        "total-ones",
        "--method",
        "pgf",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = permtab(&["dist", "--n", "4", "--stat", "total-ones"]);
    assert!(o.status.success());
}

#[test]
fn dist_csv() {
    let o = permtab(&["dist", "--n", "3", "--stat", "rows", "--format", "csv"]);
    assert_eq!(stdout(&o), "value,count\n1,1\n2,4\n3,1\ntotal,6\n");
}

#[test]
fn moments_at_five() {
    let o = permtab(&["moments", "--n", "5"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(v["mean_superfluous"], "1");
    assert_eq!(v["var_superfluous"], "13/15");
    assert_eq!(v["mean_rows"], "3");
    assert_eq!(v["mean_unrestricted"], "137/60");
}

#[test]
fn sampling_is_reproducible() {
    let a = permtab(&["sample", "--n", "5", "--count", "2", "--seed", "7"]);
    let b = permtab(&["sample", "--n", "5", "--count", "2", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_lines(&a).len(), 2);
    let c = permtab(&["sample", "--n", "5", "--count", "2"]);
    let d = permtab(&["sample", "--n", "5", "--count", "2"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn verify_suites() {
    let o = permtab(&["verify", "--suite", "equidistribution", "--nmax", "7"]);
    assert_eq!(o.status.code(), Some(0));
    for suite in ["pgf-cross", "measure-change", "moments", "covariances"] {
        let o = permtab(&["verify", "--suite", suite, "--nmax", "5"]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
    }
    assert_eq!(
        permtab(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    let o = permtab(&["verify", "--suite", "measure-change", "--nmax", "12"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn clt_report() {
    let args = [
        "clt",
        "--stat",
        "S",
        "--source",
        "permutation",
        "--n",
        "100",
        "--trials",
        "2000",
        "--normalization",
        "exact",
    ];
    let o = permtab(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = &json_lines(&o)[0];
    let ks = v["ks_distance"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&ks));
    assert_eq!(v["config"]["n"], 100);
    assert_eq!(permtab(&args).stdout, o.stdout);

    let o = permtab(&[
        "clt",
        "--stat",
        "pattern31_2",
        "--source",
        "tableau-sampler",
        "--n",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_file_and_samples() {
    let dir = std::env::temp_dir().join(format!("permtab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let samples = dir.join("samples.txt");
    let o = permtab(&[
        "clt",
        "--stat",
        "R",
        "--n",
        "50",
        "--trials",
        "100",
        "--out",
        out.to_str().unwrap(),
        "--samples-out",
        samples.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["config"]["trials"], 100);
    assert_eq!(
        std::fs::read_to_string(&samples).unwrap().lines().count(),
        100
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_cap_does_not_change_results() {
    let args = [
        "clt",
        "--stat",
        "U",
        "--source",
        "indicators",
        "--n",
        "1000",
        "--trials",
        "20000",
    ];
    let a = permtab(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_permtab"))
        .args(args)
        .env("PERMTAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        permtab(&["--threads", "0", "moments", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
}
