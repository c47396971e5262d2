use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadtwist"))
        .args(args)
        .env_remove("MODSYM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn newform_lists_eigenvalues() {
    let o = run(&["newform", "--level", "34", "--bound", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("a_1..a_5: 1, 1, -2, 1, 0"));
    let o = run(&["newform", "--level", "37", "--bound", "5"]);
    assert!(stdout(&o).contains("a_1..a_5: 1, -2, -3, 2, -2"));
    let o = run(&["newform", "--level", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no cusp forms"));
}

#[test]
fn table_csv_parses_back() {
    let o = run(&["table", "--level", "34", "--n", "0", "--max-q", "191", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "q",
            "sign",
            "v2_aq_minus_2",
            "v2_algebraic_part",
            "bound_applicable",
            "bound_uniform",
            "equality_flag"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    // 3 qualifies as well as the 30 primes from 5 to 191
    assert_eq!(rows.len(), 31);
    let row = |q: &str| rows.iter().find(|r| &r[0] == q).unwrap().clone();
    assert_eq!(row("11").iter().collect::<Vec<_>>(), ["11", "-1", "2", "inf", "1", "2", "false"]);
    assert_eq!(row("29").iter().collect::<Vec<_>>(), ["29", "1", "1", "1", "1", "1", "true"]);
    assert_eq!(row("43")[3], *"4");

    let o = run(&["table", "--level", "34", "--n", "0", "--max-q", "2", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn output_does_not_depend_on_jobs() {
    let args = ["table", "--level", "37", "--n", "1", "--max-q", "151", "--format", "json"];
    let serial = run(&[&["--jobs", "1"], &args[..]].concat());
    let parallel = run(&[&["--jobs", "4"], &args[..]].concat());
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
    let v: serde_json::Value = serde_json::from_slice(&serial.stdout).unwrap();
    assert_eq!(v["meta"]["v2_t4"], 1);
    assert_eq!(v["rows"].as_array().unwrap().len(), 30);
    let red: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["equality_flag"] == true)
        .map(|r| r["q"].as_u64().unwrap())
        .collect();
    assert_eq!(red, [41, 53, 73, 101, 149]);
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--level", "37", "--n", "1", "--m", "41"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equality attained"));
    let o = run(&["verify", "--level", "34", "--n", "0", "--m", "145", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["r"], 2);
    assert_eq!(v["bound_applicable"], 2);
    let o = run(&["verify", "--level", "37", "--n", "1", "--m", "37"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["verify", "--level", "37", "--n", "1", "--m", "137"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("HYPOTHESIS_NOT_MET"));
}

#[test]
fn scans() {
    let o = run(&["scan", "--level", "37", "--class", "S0+", "--count", "20"]);
    let text = stdout(&o);
    let got: Vec<&str> = text.lines().collect();
    assert_eq!(got.len(), 20);
    assert_eq!(&got[..5], ["41", "53", "73", "101", "149"]);
    assert_eq!(got[19], "641");
    let o = run(&["scan", "--level", "34", "--class", "S1+", "--count", "5"]);
    assert_eq!(stdout(&o).split_whitespace().collect::<Vec<_>>(), ["5", "29", "37", "61", "109"]);
    let o = run(&["scan", "--level", "37", "--count", "0"]);
    assert!(o.status.success() && stdout(&o).is_empty());
}

#[test]
fn check_lemmas_reports_counterexamples() {
    let o = run(&["check-lemmas", "--level", "11", "--max-m", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["check-lemmas", "--level", "34", "--max-m", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample [before-twist inequalities as stated]: m=5"));
}

#[test]
fn oracle_agrees() {
    let o = run(&["oracle", "--level", "34", "--m", "29", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agrees"], true);
    assert!(v["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn cache_directory_is_used_and_survives_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_quadtwist"))
            .args(["newform", "--level", "37", "--bound", "5"])
            .env("MODSYM_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = go();
    assert!(first.status.success());
    let file = dir.path().join("space-37.bin");
    let bytes = std::fs::read(&file).unwrap();
    assert_eq!(&bytes[..4], b"QTMS");
    let second = go();
    assert_eq!(first.stdout, second.stdout);
    std::fs::write(&file, b"QTMS garbage").unwrap();
    let third = go();
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn fixture_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.txt");
    std::fs::write(&path, "# label N a1 a2 a3 a4 a6\nmine11 11 0 -1 1 -10 -20\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["newform", "--fixtures", p, "--curve", "mine11", "--bound", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("a_1..a_5: 1, -2, -1, 2, 1"));
    assert!(stdout(&o).contains("non-rectangular"));
    std::fs::write(&path, "bad 11 0 -1\n").unwrap();
    let o = run(&["newform", "--fixtures", p, "--level", "11"]);
    assert_eq!(o.status.code(), Some(1));
}
