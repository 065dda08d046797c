use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use zsi::report::{write_csv, write_json};
use zsi::{run_suite, Record, Status, Suite, SuiteReport};

fn zsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zsi"))
        .args(args)
        .env_remove("ZSI_CACHE_DIR")
        .output()
        .unwrap()
}

fn verify(cache: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["verify", "--cache-dir", cache.to_str().unwrap()];
    args.extend_from_slice(extra);
    zsi(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn query_commands() {
    let o = zsi(&["index", "1,1,15,17,28", "--order", "31"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("index=2 norm=62/31\nwitness m=1 "));
    let o = zsi(&["index", "1,1,14,22,24", "--order", "31", "--verbose"]);
    assert!(stdout(&o).contains("witness m=3 norm_prime=31"));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("m=")).count(),
        30
    );

    assert_eq!(stdout(&zsi(&["classify", "17"])), "(8,10,14),(8,11,13)\n");
    assert_eq!(
        stdout(&zsi(&["witness", "7", "9", "14", "31"])),
        "k=1 m=3; k1=1 m1=3; eq3=0\n"
    );
    assert!(stdout(&zsi(&["witness", "3", "14", "15", "31"])).starts_with("none; k1=5 m1=11;"));

    let o = zsi(&["enumerate", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "1,1,6,8,10"));
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 9] = [
        &["index", "1,,2", "--order", "5"],
        &["index", "1,2", "--order", "1"],
        &["index", "1,7", "--order", "5"],
        &["witness", "3", "4", "6", "31"],
        &["witness", "7", "9", "14", "15"],
        &["classify", "21"],
        &["enumerate", "11", "--h-min", "1"],
        &["verify", "--suites", "theorem", "--primes", "4..10"],
        &["frobnicate"],
    ];
    let dir = tempfile::tempdir().unwrap();
    for args in cases {
        let o = Command::new(env!("CARGO_BIN_EXE_zsi"))
            .args(args)
            .env("ZSI_CACHE_DIR", dir.path())
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = zsi(&["witness", "3", "4", "6", "31"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("2 + c = a + b"));
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        &["--primes", "37..31", "--suites", "audit"][..],
        &["--primes", "31..37", "--suites", ","],
        &["--primes", "31..37", "--suites", "audit", "--jobs", "0"],
    ] {
        assert_eq!(verify(dir.path(), bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn env_var_sets_the_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_zsi"))
        .args(["verify", "--suites", "prop22", "--primes", "5..13"])
        .env("ZSI_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    for p in [5, 7, 11, 13] {
        assert!(dir.path().join(format!("prop22_p{p}.json")).exists());
    }
}

fn canonical_files(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|path| {
            let report: SuiteReport =
                serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, report.canonical_json().unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn runs_are_deterministic_across_worker_counts() {
    let args = [
        "--suites",
        "prop21,prop23,lemma24,theorem,audit",
        "--primes",
        "29..61",
    ];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let oa = verify(a.path(), &[&args[..], &["--jobs", "1"]].concat());
    let ob = verify(b.path(), &[&args[..], &["--jobs", "4"]].concat());
    // theorem and audit need p >= 31, so 29 is a config error
    assert_eq!(oa.status.code(), Some(2));
    assert_eq!(ob.status.code(), Some(2));

    let args = [
        "--suites",
        "prop21,prop23,lemma24,theorem,audit",
        "--primes",
        "31..61",
    ];
    let oa = verify(a.path(), &[&args[..], &["--jobs", "1"]].concat());
    let ob = verify(b.path(), &[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(stdout(&oa), stdout(&ob));
    let (fa, fb) = (canonical_files(a.path()), canonical_files(b.path()));
    assert_eq!(fa.len(), 5 * 8);
    assert_eq!(fa, fb);
}

#[test]
fn cached_runs_match_cold_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--suites",
        "theorem,audit,prop23",
        "--primes",
        "31..67",
        "--format",
        "csv",
    ];
    let cold = verify(dir.path(), &args);
    let before = canonical_files(dir.path());
    let warm = verify(dir.path(), &args);
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(warm.status.code(), cold.status.code());
    assert_eq!(stdout(&warm), stdout(&cold));
    assert_eq!(canonical_files(dir.path()), before);

    // a passing cached report is reused as is, so an edit to one shows
    // through until --force recomputes it
    let path = dir.path().join("theorem_p31.json");
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    value["payload"]["sequences"] = serde_json::json!(999_999);
    fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let run = |extra: &[&str]| {
        let o = verify(dir.path(), &[&args[..], extra].concat());
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert!(run(&[]).contains("sequences=999999"));
    assert_eq!(run(&["--force"]), stdout(&cold));
    assert_eq!(canonical_files(dir.path()), before);

    // stale version stamps are recomputed
    let path = dir.path().join("theorem_p31.json");
    let text = fs::read_to_string(&path).unwrap();
    let stale = text.replace(&format!("\"{}\"", zsi::report::REPORT_VERSION), "\"0.0.0\"");
    fs::write(&path, stale).unwrap();
    assert_eq!(verify(dir.path(), &args).status.code(), Some(0));
    assert!(fs::read_to_string(&path)
        .unwrap()
        .contains(zsi::report::REPORT_VERSION));
}

#[test]
fn failing_cached_report_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--suites", "prop22", "--primes", "11..11"];
    assert_eq!(verify(dir.path(), &args).status.code(), Some(0));
    let path = dir.path().join("prop22_p11.json");
    let mut report: SuiteReport =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    report.status = Status::Fail;
    fs::write(&path, report.to_json().unwrap()).unwrap();
    assert_eq!(verify(dir.path(), &args).status.code(), Some(0));
    let back: SuiteReport = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back.status, Status::Pass);
}

#[test]
fn csv_and_json_hold_the_same_records() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "--suites",
        "prop21,prop22,prop23,lemma24",
        "--primes",
        "5..29",
    ];
    let json = verify(dir.path(), &[&base[..], &["--format", "json"]].concat());
    let csv = verify(dir.path(), &[&base[..], &["--format", "csv"]].concat());
    let from_json: Vec<Record> = serde_json::from_slice(&json.stdout).unwrap();
    let from_csv: Vec<Record> = csv::Reader::from_reader(&csv.stdout[..])
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    assert!(!from_json.is_empty());
    assert_eq!(from_json, from_csv);
    let header = stdout(&csv).lines().next().unwrap().to_string();
    assert_eq!(header, "suite,prime,status,family_or_bucket,detail");
}

#[test]
fn every_suite_report_round_trips() {
    for (suite, p) in [
        (Suite::Prop21, 13),
        (Suite::Prop22, 13),
        (Suite::Prop23, 19),
        (Suite::Prop23, 61),
        (Suite::Lemma24, 29),
        (Suite::Theorem, 37),
        (Suite::Audit, 37),
    ] {
        let report = run_suite(suite, p).unwrap();
        let back: SuiteReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report, "{suite} p={p}");
        let (mut j, mut c) = (Vec::new(), Vec::new());
        write_json(std::slice::from_ref(&report), &mut j).unwrap();
        write_csv(&[report], &mut c).unwrap();
        assert!(!j.is_empty() && !c.is_empty());
    }
}

#[test]
fn reports_use_exact_integers_only() {
    let report = run_suite(Suite::Prop22, 31).unwrap();
    let json = report.to_json().unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(
        value["payload"]["index"],
        serde_json::json!({"num": 2, "den": 1})
    );
    assert_eq!(
        value["payload"]["sequence"],
        serde_json::json!([1, 1, 15, 17, 28])
    );
    fn no_floats(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Number(n) => n.is_u64() || n.is_i64(),
            serde_json::Value::Array(a) => a.iter().all(no_floats),
            serde_json::Value::Object(o) => o.values().all(no_floats),
            _ => true,
        }
    }
    for (suite, p) in [
        (Suite::Theorem, 41),
        (Suite::Audit, 41),
        (Suite::Lemma24, 41),
    ] {
        assert!(no_floats(
            &serde_json::to_value(run_suite(suite, p).unwrap()).unwrap()
        ));
    }
}
