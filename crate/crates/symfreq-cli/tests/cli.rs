//! Exit-code and stream-plumbing behavior of the installed binary.

use std::io::Write;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symfreq"))
}

#[test]
fn success_exits_zero_with_output_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream");
    std::fs::write(&path, "0110").unwrap();
    let output = binary()
        .args(["count", path.to_str().unwrap(), "--base", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stderr.is_empty());
    assert_eq!(
        String::from_utf8_lossy(&output.stdout),
        "{\"m\":2,\"n\":4,\"counts\":[2,2],\"measure\":[\"1/2\",\"1/2\"]}\n"
    );
}

#[test]
fn decode_failures_exit_two_with_the_offset_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream");
    std::fs::write(&path, "0120").unwrap();
    let output = binary()
        .args(["count", path.to_str().unwrap(), "--base", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.starts_with("error:"), "stderr: {stderr}");
    assert!(stderr.contains("offset 2"), "stderr: {stderr}");
}

#[test]
fn empty_prefixes_exit_two_with_the_undefined_frequency_message() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream");
    std::fs::write(&path, "").unwrap();
    let output = binary()
        .args(["count", path.to_str().unwrap(), "--base", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert_eq!(
        String::from_utf8_lossy(&output.stderr),
        "error: frequency undefined at n=0\n"
    );
}

#[test]
fn usage_errors_exit_two() {
    let output = binary().args(["count", "--base", "2"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = binary()
        .args(["trace", "--gen", "nonsense:1", "--checkpoints", "4"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn generated_streams_count_back_to_their_own_measure() {
    // gen then count round-trips exactly, for both encodings.
    let dir = tempfile::tempdir().unwrap();
    for (encode, decode) in [("ascii", "ascii"), ("raw", "raw")] {
        let path = dir.path().join(format!("stream_{encode}"));
        let status = binary()
            .args([
                "gen",
                "bernoulli:1/5,3/10,1/2",
                "--seed",
                "7",
                "--count",
                "30000",
                "--encode",
                encode,
                "--out",
                path.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        let output = binary()
            .args([
                "count",
                path.to_str().unwrap(),
                "--base",
                "3",
                "--decode",
                decode,
            ])
            .output()
            .unwrap();
        assert_eq!(output.status.code(), Some(0));
        let row: serde_json::Value =
            serde_json::from_slice(&output.stdout).expect("count output parses");
        assert_eq!(row["n"], 30000);
        let counts: Vec<u64> = row["counts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .collect();
        assert_eq!(counts.iter().sum::<u64>(), 30000);
        // Both encodings carry the same symbols, so the counts agree.
        if encode == "raw" {
            let ascii_path = dir.path().join("stream_ascii");
            let ascii_output = binary()
                .args(["count", ascii_path.to_str().unwrap(), "--base", "3"])
                .output()
                .unwrap();
            assert_eq!(output.stdout, ascii_output.stdout);
        }
    }
}

#[test]
fn whitespace_in_ascii_input_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "0 1  1\t0").unwrap();
    drop(file);
    let output = binary()
        .args(["count", path.to_str().unwrap(), "--base", "2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("\"counts\":[2,2]"));
}
