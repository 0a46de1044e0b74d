use runnerlab::cli::{run, ExitCode};
use runnerlab::document::{Document, Payload};
use std::path::PathBuf;

fn cli(args: &[&str]) -> runnerlab::cli::CliOutput {
    run(std::iter::once("runnerlab").chain(args.iter().copied()))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("runnerlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn ml_inline() {
    let out = cli(&["--json", "ml", "1", "2", "3"]);
    assert_eq!(out.code, ExitCode::Success, "{}", out.stderr);
    let doc = Document::parse(&out.stdout).unwrap();
    let Payload::Ml(records) = doc.payload else { panic!() };
    assert_eq!(records[0].value.to_string(), "1/4");
    assert_eq!(records[0].witness_time.to_string(), "1/4");
    assert!(records[0].oracle.consistent);
}

#[test]
fn ml_range_table_and_csv() {
    let out = cli(&["ml", "--range", "n=4", "max=10"]);
    assert_eq!(out.code, ExitCode::Success);
    // header, rule and C(10, 4) rows
    assert_eq!(out.stdout.lines().count(), 2 + 210);
    let out = cli(&["--csv", "ml", "--range", "n=2 max=3"]);
    assert_eq!(
        out.stdout,
        "speeds,ml,decimal,witness_time,oracle_consistent\n\
         \"1 2\",1/3,0.333333333333,1/3,true\n\
         \"1 3\",1/2,0.500000000000,1/2,true\n\
         \"2 3\",2/5,0.400000000000,1/5,true\n"
    );
}

#[test]
fn ml_diagnostics() {
    let out = cli(&["ml", "1", "1", "2"]);
    assert_eq!(out.code, ExitCode::Usage);
    assert!(out.stderr.contains("column 3") && out.stderr.contains("more than once"), "{}", out.stderr);
    let file = scratch("bad.txt", "1 2 3\n4 x 6\n");
    let out = cli(&["ml", "--file", file.to_str().unwrap()]);
    assert_eq!(out.code, ExitCode::Usage);
    assert!(out.stderr.contains("line 2, column 3"), "{}", out.stderr);
    assert_eq!(cli(&["ml", "--range", "n=5 max=3"]).code, ExitCode::Usage);
    assert_eq!(cli(&["frobnicate"]).code, ExitCode::Usage);
}

#[test]
fn ml_file_and_batch_document() {
    let file = scratch("sets.txt", "# comment\n1 2 3\n\n2 3 5  # trailing\n");
    let out = cli(&["--csv", "ml", "--file", file.to_str().unwrap()]);
    assert_eq!(out.code, ExitCode::Success);
    assert_eq!(out.stdout.lines().count(), 3);
    let batch = r#"{"schema":"runnerlab/1","version":"0.1.0","kind":"speed-sets","body":[[1,2],[1,2,3,4]]}"#;
    let file = scratch("batch.json", batch);
    let out = cli(&["--csv", "ml", "--file", file.to_str().unwrap()]);
    assert!(out.stdout.contains("1/5"), "{}", out.stdout);
}

#[test]
fn ml_budget_exit_code() {
    let config = scratch("tiny.json", r#"{"candidate_budget": 10}"#);
    let out = cli(&["--config", config.to_str().unwrap(), "ml", "3", "7", "11"]);
    assert_eq!(out.code, ExitCode::Budget);
    assert!(out.stderr.contains("candidate_budget"));
}

#[test]
fn certify_examples() {
    let out = cli(&["--json", "certify", "1", "2", "3", "--method", "prime", "--p", "5"]);
    assert_eq!(out.code, ExitCode::Success);
    let Payload::Certificate(c) = Document::parse(&out.stdout).unwrap().payload else { panic!() };
    assert_eq!(c.bound.to_string(), "1/5");

    let out = cli(&["--json", "certify", "4", "9", "17", "--method", "trivial"]);
    assert_eq!(out.code, ExitCode::Success);
    let Payload::Certificate(c) = Document::parse(&out.stdout).unwrap().payload else { panic!() };
    assert_eq!(c.bound.to_string(), "1/6");

    // arccos(3/4)/(2π) ≈ 0.11503 < 1/8, so the exit code reports failure
    let out = cli(&["--json", "certify", "1", "3", "9", "27", "--method", "riesz-dissoc"]);
    assert_eq!(out.code, ExitCode::Failure);
    let Payload::Certificate(c) = Document::parse(&out.stdout).unwrap().payload else { panic!() };
    let e = c.enclosure.unwrap();
    assert!(e.display.starts_with("0.11502672808"), "{}", e.display);

    assert_eq!(cli(&["certify", "1", "2", "3", "--method", "prime", "--p", "3"]).code, ExitCode::Failure);
    assert_eq!(cli(&["certify", "1", "2", "--method", "riesz", "--p", "3"]).code, ExitCode::Usage);
}

#[test]
fn certify_verify_round_trip() {
    for (i, method) in ["auto", "prime", "riesz", "riesz-dissoc", "reduce-then-prime", "trivial"].iter().enumerate() {
        let out = cli(&["--json", "certify", "3", "1000", "77777", "--method", method]);
        assert_ne!(out.code, ExitCode::Usage, "{method}: {}", out.stderr);
        if out.stdout.is_empty() {
            continue;
        }
        let path = scratch(&format!("cert{i}.json"), &out.stdout);
        let v = cli(&["verify", path.to_str().unwrap()]);
        assert_eq!(v.code, ExitCode::Success, "{method}: {}{}", v.stdout, v.stderr);
        assert_eq!(v.stdout, "pass\n");
    }
}

#[test]
fn verify_rejects_raised_bound_and_warns_on_version() {
    let out = cli(&["--json", "certify", "1", "2", "3", "--method", "prime", "--p", "5"]);
    let raised = out.stdout.replace("\"den\": \"5\"", "\"den\": \"4\"");
    assert_ne!(raised, out.stdout);
    let path = scratch("raised.json", &raised);
    assert_eq!(cli(&["verify", path.to_str().unwrap()]).code, ExitCode::Failure);

    let old = out.stdout.replace("\"version\": \"0.1.0\"", "\"version\": \"0.0.1\"");
    let path = scratch("old.json", &old);
    let v = cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.code, ExitCode::Success);
    assert!(v.stderr.contains("warning"));

    let path = scratch("junk.json", "{ \"schema\": ");
    let v = cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.code, ExitCode::Usage);
    assert!(v.stderr.contains("line 1"), "{}", v.stderr);
}

#[test]
fn suite_is_deterministic() {
    let args = ["--json", "suite", "invariants", "--seed", "42", "--samples", "12"];
    let a = cli(&args);
    assert_eq!(a.code, ExitCode::Success, "{}", a.stdout);
    let b = cli(&["--threads", "1", "--json", "suite", "invariants", "--seed", "42", "--samples", "12"]);
    assert_eq!(a.stdout, b.stdout);
    let out = cli(&["suite", "soundness", "--n-max", "2", "--v-max", "10"]);
    assert_eq!(out.code, ExitCode::Success);
    assert!(out.stdout.contains("certificates-sound"));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(cli(&["--help"]).code, ExitCode::Success);
    assert!(cli(&["--version"]).stdout.contains("0.1.0"));
    assert_eq!(cli(&["ml", "1", "--threads", "0"]).code, ExitCode::Usage);
}
