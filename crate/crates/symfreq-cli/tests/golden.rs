//! Byte-for-byte regression tests against committed trace output.

use std::process::Command;

const TRACE_ARGS: [&str; 7] = [
    "trace",
    "--gen",
    "bernoulli:1/2,1/2",
    "--seed",
    "42",
    "--checkpoints",
    "10,100,1000,10000,100000,1000000",
];

fn run_binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_symfreq"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn pinned_bernoulli_trace_matches_the_committed_jsonl() {
    let output = run_binary(&TRACE_ARGS);
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    assert_eq!(
        output.stdout,
        include_bytes!("golden/bernoulli_trace.jsonl"),
        "stdout diverged from the committed golden file"
    );
}

#[test]
fn pinned_bernoulli_trace_matches_the_committed_csv() {
    let mut args = TRACE_ARGS.to_vec();
    args.extend(["--format", "csv"]);
    let output = run_binary(&args);
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    assert_eq!(
        output.stdout,
        include_bytes!("golden/bernoulli_trace.csv"),
        "stdout diverged from the committed golden file"
    );
}

#[test]
fn golden_rows_round_trip_and_keep_their_invariant() {
    for line in include_str!("golden/bernoulli_trace.jsonl").lines() {
        let row: serde_json::Value = serde_json::from_str(line).expect("row parses");
        let numerators: u64 = row["numerators"]
            .as_array()
            .expect("numerator list")
            .iter()
            .map(|v| v.as_u64().expect("numerator"))
            .sum();
        assert_eq!(numerators, row["denominator"].as_u64().expect("denominator"));
        assert_eq!(row["n"], row["denominator"]);
    }
}

#[test]
fn parallel_runs_reproduce_the_golden_file() {
    for workers in ["2", "4"] {
        let mut args = TRACE_ARGS.to_vec();
        args.extend(["--parallel", workers]);
        let output = run_binary(&args);
        assert!(output.status.success());
        assert_eq!(
            output.stdout,
            include_bytes!("golden/bernoulli_trace.jsonl"),
            "--parallel {workers} diverged"
        );
    }
}
