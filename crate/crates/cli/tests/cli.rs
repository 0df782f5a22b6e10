//! End-to-end tests of the `ofal` binary: every subcommand, the JSON and CSV
//! it emits, and the exit-code contract (0 pass, 1 failed check, 2 bad input).

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use ofal_cli::files::{RatioReportFile, SequenceFile, TraceFile};
use ofal_core::rational::parse_rational;

fn ofal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ofal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

/// Per-test temp path; tests run in parallel in one process, so the caller
/// must pick a unique name.
fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ofal-cli-{}-{name}", std::process::id()))
}

fn assert_code(out: &Output, want: i32) {
    assert_eq!(
        out.status.code(),
        Some(want),
        "stdout: {}\nstderr: {}",
        stdout_of(out),
        stderr_of(out)
    );
}

#[test]
fn gen_thm1_writes_the_construction_with_metadata() {
    let path = tmp("thm1-k3.json");
    let out = ofal(&[
        "gen", "--kind", "thm1", "--k", "3", "--ell", "1", "--eps", "1/10", "--out",
        path.to_str().unwrap(),
    ]);
    assert_code(&out, 0);

    let file: SequenceFile =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.requests, ["479/320", "81/160", "2"]);
    let meta = file.generator.expect("generator metadata embedded");
    assert_eq!(meta.kind, "thm1");
    assert_eq!(meta.k, Some(3));
    assert_eq!(meta.ell, Some(1));
    assert_eq!(meta.eps.as_deref(), Some("1/10"));
    assert_eq!(meta.n, None);
    assert_eq!(meta.seed, None);
    fs::remove_file(&path).ok();
}

#[test]
fn ratio_checks_bounds_and_sets_the_exit_code() {
    let path = tmp("ratio-k3.json");
    assert_code(
        &ofal(&[
            "gen", "--kind", "thm1", "--k", "3", "--ell", "1", "--eps", "1/10", "--out",
            path.to_str().unwrap(),
        ]),
        0,
    );

    // 1277/321 ~ 3.978 reaches the bound 4 - 1/10...
    let out = ofal(&[
        "ratio", "--alg", "perm", "--seq", path.to_str().unwrap(), "--bound", "39/10",
    ]);
    assert_code(&out, 0);
    let report: RatioReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report.k, 3);
    assert_eq!(report.ell, 1);
    assert_eq!(report.algorithm, "perm");
    assert_eq!(report.alg_total, "1277/320");
    assert_eq!(report.opt_total, "321/320");
    assert_eq!(report.ratio, "1277/321");
    assert_eq!(report.ratio_decimal, "3.978193");
    assert_eq!(report.bound.as_deref(), Some("39/10"));
    assert_eq!(report.pass, Some(true));

    // ...but not the bound 4.
    let out = ofal(&[
        "ratio", "--alg", "perm", "--seq", path.to_str().unwrap(), "--bound", "4",
    ]);
    assert_code(&out, 1);
    let report: RatioReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report.pass, Some(false));
    fs::remove_file(&path).ok();
}

#[test]
fn run_emits_a_one_based_trace_with_running_totals() {
    let instance = tmp("run-inst.json");
    let seq = tmp("run-seq.json");
    fs::write(
        &instance,
        r#"{"servers": ["0", "1", "2"], "capacities": [1, 1, 1]}"#,
    )
    .unwrap();
    fs::write(&seq, r#"{"requests": ["479/320", "81/160", "2"]}"#).unwrap();

    let out = ofal(&[
        "run", "--alg", "perm", "--instance", instance.to_str().unwrap(), "--seq",
        seq.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    let trace: TraceFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(trace.algorithm, "perm");
    assert_eq!(trace.total, "1277/320");
    let triples: Vec<(usize, usize, &str, &str)> = trace
        .steps
        .iter()
        .map(|s| (s.request, s.server, s.cost.as_str(), s.total.as_str()))
        .collect();
    assert_eq!(
        triples,
        [
            (1, 2, "159/320", "159/320"),
            (2, 3, "239/160", "637/320"),
            (3, 1, "2", "1277/320"),
        ]
    );

    // --trace writes the same JSON to a file and summarizes on stdout.
    let trace_path = tmp("run-trace.json");
    let out = ofal(&[
        "run", "--alg", "perm", "--instance", instance.to_str().unwrap(), "--seq",
        seq.to_str().unwrap(), "--trace", trace_path.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert!(stdout_of(&out).contains("total cost 1277/320"));
    let from_file: TraceFile =
        serde_json::from_str(&fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert_eq!(from_file, trace);

    for p in [instance, seq, trace_path] {
        fs::remove_file(p).ok();
    }
}

#[test]
fn gen_random_is_deterministic_and_fills_defaults() {
    let a = tmp("rand-a.json");
    let b = tmp("rand-b.json");
    for path in [&a, &b] {
        assert_code(
            &ofal(&[
                "gen", "--kind", "random", "--k", "2", "--ell", "2", "--seed", "7", "--out",
                path.to_str().unwrap(),
            ]),
            0,
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let file: SequenceFile = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(file.requests.len(), 4); // n defaults to k * ell
    let meta = file.generator.expect("metadata");
    assert_eq!(meta.kind, "random");
    assert_eq!(meta.n, Some(4));
    assert_eq!(meta.seed, Some(7));
    assert_eq!(meta.lo.as_deref(), Some("-1/2"));
    assert_eq!(meta.hi.as_deref(), Some("3/2"));

    let lo = parse_rational("-1/2").unwrap();
    let hi = parse_rational("3/2").unwrap();
    for r in &file.requests {
        let r = parse_rational(r).unwrap();
        assert!(r >= lo && r <= hi, "{r} out of range");
    }
    for p in [a, b] {
        fs::remove_file(p).ok();
    }
}

#[test]
fn ratio_defaults_come_from_the_sequence_metadata() {
    let path = tmp("lifted-k2.json");
    assert_code(
        &ofal(&[
            "gen", "--kind", "thm1", "--k", "2", "--ell", "2", "--eps", "1/10", "--out",
            path.to_str().unwrap(),
        ]),
        0,
    );
    let file: SequenceFile =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.requests, ["0", "1", "79/160", "0"]); // capacity fills first

    // No --k/--ell: picked up from the metadata. Lifting preserves the ratio.
    let out = ofal(&[
        "ratio", "--alg", "perm", "--seq", path.to_str().unwrap(), "--bound", "29/10",
    ]);
    assert_code(&out, 0);
    let report: RatioReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report.k, 2);
    assert_eq!(report.ell, 2);
    assert_eq!(report.ratio, "239/81");
    assert_eq!(report.pass, Some(true));
    fs::remove_file(&path).ok();
}

#[test]
fn sweep_writes_exact_csv_rows() {
    let csv_path = tmp("sweep.csv");
    let out = ofal(&[
        "sweep", "--alg", "perm", "--k-from", "2", "--k-to", "4", "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    let stdout = stdout_of(&out);
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.lines().all(|l| l.ends_with("pass")));

    // eps defaults to 1/100; every column is frozen.
    let csv = fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines,
        [
            "k,ell,eps,alg,alg_cost_exact,opt_cost_exact,ratio_exact,ratio_decimal,bound_exact,pass",
            "2,1,1/100,perm,2399/1600,801/1600,2399/801,2.995006242,299/100,true",
            "3,1,1/100,perm,12797/3200,3201/3200,12797/3201,3.997813183,399/100,true",
            "4,1,1/100,perm,47993/6400,9603/6400,4363/873,4.997709049,499/100,true",
        ]
    );
    fs::remove_file(&csv_path).ok();
}

#[test]
fn sweep_flags_rows_below_the_bound() {
    // Greedy plays this particular sequence optimally, so its ratio is 1 and
    // the k+1-eps bound must fail.
    let out = ofal(&["sweep", "--alg", "greedy", "--k-from", "3", "--k-to", "3"]);
    assert_code(&out, 1);
    let stdout = stdout_of(&out);
    assert!(stdout.contains("ratio=1 "), "stdout: {stdout}");
    assert!(stdout.trim_end().ends_with("FAIL"));
}

#[test]
fn oracle_check_agrees_and_reports() {
    let out = ofal(&["oracle-check", "--trials", "10", "--max-n", "5", "--seed", "3"]);
    assert_code(&out, 0);
    assert!(stdout_of(&out).contains("10 trials agree exactly"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let missing_eps = ofal(&["gen", "--kind", "thm1", "--k", "3", "--ell", "1", "--out", "/tmp/x"]);
    assert_code(&missing_eps, 2);

    let bad_kind = ofal(&[
        "gen", "--kind", "thm2", "--k", "3", "--ell", "1", "--eps", "1/10", "--out", "/tmp/x",
    ]);
    assert_code(&bad_kind, 2);

    let bad_rational = ofal(&[
        "gen", "--kind", "thm1", "--k", "3", "--ell", "1", "--eps", "0.01", "--out", "/tmp/x",
    ]);
    assert_code(&bad_rational, 2);

    let missing_file = ofal(&["ratio", "--alg", "perm", "--seq", "/tmp/ofal-no-such-file.json"]);
    assert_code(&missing_file, 2);
    assert!(stderr_of(&missing_file).contains("error:"));

    let thm1_with_seed = ofal(&[
        "gen", "--kind", "thm1", "--k", "3", "--ell", "1", "--eps", "1/10", "--seed", "5",
        "--out", "/tmp/x",
    ]);
    assert_code(&thm1_with_seed, 2);

    let random_with_eps = ofal(&[
        "gen", "--kind", "random", "--k", "2", "--ell", "1", "--eps", "1/10", "--out", "/tmp/x",
    ]);
    assert_code(&random_with_eps, 2);

    let oversized = ofal(&[
        "gen", "--kind", "random", "--k", "2", "--ell", "2", "--n", "9", "--out", "/tmp/x",
    ]);
    assert_code(&oversized, 2);
    assert!(stderr_of(&oversized).contains("exceed the total capacity"));

    let bad_alg = ofal(&["sweep", "--alg", "fastest", "--k-from", "2", "--k-to", "3"]);
    assert_code(&bad_alg, 2);

    // Too many requests for the instance is caught before any assignment.
    let instance = tmp("err-inst.json");
    let seq = tmp("err-seq.json");
    fs::write(&instance, r#"{"servers": ["0"], "capacities": [1]}"#).unwrap();
    fs::write(&seq, r#"{"requests": ["0", "1"]}"#).unwrap();
    let overfull = ofal(&[
        "run", "--alg", "greedy", "--instance", instance.to_str().unwrap(), "--seq",
        seq.to_str().unwrap(),
    ]);
    assert_code(&overfull, 2);
    for p in [instance, seq] {
        fs::remove_file(p).ok();
    }
}
