use std::io::Write;
use std::process::{Command, Output, Stdio};

fn flashback(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_flashback"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn encode_examples() {
    let o = flashback(&["encode"], b"");
    assert_eq!(stdout(&o), "FLASHBACK v1\n@$ 0\n");
    let o = flashback(&["encode"], b"\x00");
    assert_eq!(stdout(&o), "FLASHBACK v1\n@$ 1\n\\x00 0\n");
    let o = flashback(&["encode"], b"a b");
    assert_eq!(stdout(&o), "FLASHBACK v1\n@$ 1\nab 1\n\\x20 0\n");
}

#[test]
fn missing_file_is_an_io_error() {
    let o = flashback(&["encode", "/nonexistent/input"], b"");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: /nonexistent/input"));
}

#[test]
fn analyze_key_value_and_json() {
    let o = flashback(&["analyze"], b"CASSAYFF");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "n: 8\nr: 6\nk: 4\nrle: C^1 A^1 S^2 A^1 Y^1 F^2\nkernel: SSA\nkernel_alphabet_size: 2\n\
         kernel_runs: 3,4\npalindrome: false\npair: depth=1 runs=1<->6\npair: depth=2 runs=2<->5\n\
         run_pairing_agrees: true\nempty_input: false\n"
    );

    let o = flashback(&["analyze", "--json"], b"");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 0);
    assert_eq!(v["k"], 1);
    assert_eq!(v["kernel"], "@$");
    assert_eq!(v["empty_input"], true);

    let o = flashback(&["analyze", "--json"], b"ABA");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["r"].as_u64(), v["k"].as_u64()), (Some(3), Some(3)));
    assert_eq!(v["kernel"], "B");
    assert_eq!(v["palindrome"], true);
}

#[test]
fn diff_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, data: &[u8]| {
        let p = dir.path().join(name);
        std::fs::write(&p, data).unwrap();
        p.to_str().unwrap().to_string()
    };
    let a = write("a", b"CASSAYFF");
    let b = write("b", b"CASSSAYFF");
    let c = write("c", b"AAA");
    let d = write("d", b"ABA");

    let o = flashback(&["diff", &a, &b], b"");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "changed_depths: {3}\nskeleton_match: true\npredicted_depths: {3}\nverdict: AGREE\n"
    );

    let o = flashback(&["diff", &a, &a], b"");
    assert!(stdout(&o).starts_with("changed_depths: {}\n"));

    let o = flashback(&["diff", &c, &d, "--json"], b"");
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["changed"]["changed_depths"], serde_json::json!([1, 2]));
    assert_eq!(v["skeleton_match"], false);
    assert!(v["verdict"].is_null());

    // One side may come from stdin.
    let o = flashback(&["diff", &a, "-"], b"CASSSAYFF");
    assert!(stdout(&o).contains("verdict: AGREE"));
    let o = flashback(&["diff", "-", "-"], b"");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_output() {
    let o = flashback(
        &[
            "stats", "--n", "2", "--sigma", "2", "--trials", "500", "--json",
        ],
        b"",
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["expected_k"], 2.0);
    assert_eq!(v["variance_k"], 0.0);
    assert_eq!(v["mc_mean_k"], 2.0);
    assert_eq!(v["verdict"], "PASS");

    let o = flashback(
        &[
            "stats", "--n", "64", "--sigma", "4", "--trials", "20000", "--seed", "3",
        ],
        b"",
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("verdict: PASS"));
    assert!(text.contains("identity_violations: 0"));

    let o = flashback(&["stats", "--n", "1", "--sigma", "4"], b"");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be at least 2"));
}

#[test]
fn search_output() {
    let o = flashback(&["search", "--max-len", "8", "--alphabet", "AB"], b"");
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("strings: 510\n"));
    assert!(text.contains("counterexamples: 0\n"));
    assert!(text.ends_with("verdict: PASS\n"));

    let o = flashback(&["search", "--max-len", "1"], b"");
    assert!(stdout(&o).contains("strings: 2\n"));

    let o = flashback(&["search", "--max-len", "12", "--limit", "10"], b"");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_json_lists_every_violation() {
    let doc = b"FLASHBACK v1\n@$ 1\nAB 0\nA\\@ 1\nC 0\n";
    let o = flashback(&["validate", "--json"], doc);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let conditions: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["condition"].as_str().unwrap())
        .collect();
    assert!(conditions.contains(&"TERMINAL_FORM"), "{conditions:?}");
}
