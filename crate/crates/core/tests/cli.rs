use std::path::PathBuf;
use std::process::{Command, Output};

fn comonet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comonet"))
        .args(args)
        .output()
        .expect("spawn comonet")
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn addr_encode_and_decode() {
    let o = comonet(&["addr", "encode", "0773031470"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "201.3.14.70\n");
    let o = comonet(&["addr", "decode", "201.3.14.70"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0773031470\n");
}

#[test]
fn addr_rejects_invalid_values() {
    assert_eq!(
        comonet(&["addr", "encode", "0873031470"]).status.code(),
        Some(1)
    );
    assert_eq!(
        comonet(&["addr", "encode", "07730314"]).status.code(),
        Some(1)
    );
    assert_eq!(
        comonet(&["addr", "decode", "10.0.0.1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        comonet(&["addr", "decode", "201.3.14"]).status.code(),
        Some(1)
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(comonet(&[]).status.code(), Some(2));
    assert_eq!(comonet(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        comonet(&["run", &scenario("table4.toml"), "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        comonet(&["run", &scenario("table4.toml"), "--seeds", "5..1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        comonet(&[
            "run",
            &scenario("table4.toml"),
            "--seed",
            "1",
            "--seeds",
            "1..2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(comonet(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_scenario_exits_1_with_located_message() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "[scenario]\nhorizon_s = 5\n\n[[node]]\nname = \"a\"\nnumber = \"0771000001\"\nposition = [0, 0]\n\n\
         [[call]]\ncaller = \"a\"\ncallee = \"b\"\ndial_s = 1\nhangup_s = 4\n",
    )
    .unwrap();
    let o = comonet(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("call[0].callee"), "{err}");
    assert_eq!(
        comonet(&["run", "/nonexistent/scenario.toml"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn run_writes_report_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let trace = dir.path().join("trace.txt");
    let o = comonet(&[
        "run",
        &scenario("gsm_only.toml"),
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let report = std::fs::read_to_string(&out).unwrap();
    assert!(report.starts_with("scenario gsm-only seed 7\n"), "{report}");
    assert!(report.contains("Setup (s)"));
    let trace = std::fs::read_to_string(&trace).unwrap();
    assert!(trace
        .lines()
        .next()
        .unwrap()
        .starts_with("1000000 199.0.0.1 dial call=GSM"));
}

#[test]
fn seed_range_csv_has_mean_rows() {
    let o = comonet(&[
        "run",
        &scenario("table4.toml"),
        "--seeds",
        "1..3",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "seed,call,delay_ms,jitter_ms,loss,setup_s,delay_ok,jitter_ok,loss_ok"
    );
    assert_eq!(lines.len(), 1 + 9 + 3);
    assert!(lines[10].starts_with("mean,Direct,"));
    // rows come back in seed order despite running in parallel
    let seeds: Vec<&str> = lines[1..10]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(seeds, ["1", "1", "1", "2", "2", "2", "3", "3", "3"]);
}
