use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ratdense::sequential::{default_checkpoints, sequential_density};
use ratdense::{Dfa, MeasureSequence};

fn write_spec(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn ratdense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratdense")).args(args).output().unwrap()
}

fn summary_value(summary: &str, key: &str) -> String {
    summary
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {summary}"))
        .to_string()
}

const ONE_OVER_N: &str = "[job]
mode = sequential
n = 100000
output = out

[language]
regex = (a|b)*a(a|b)*

[sequence]
spec = bernoulli p_n = 1/n over a,b
";

#[test]
fn one_over_n_summary_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "one_over_n.job", ONE_OVER_N);
    let out = ratdense(&[spec.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let summary = std::fs::read_to_string(dir.path().join("out/one_over_n.summary.txt")).unwrap();
    let delta: f64 = summary_value(&summary, "delta").parse().unwrap();
    assert!((delta - (1.0 - (-1.0f64).exp())).abs() <= 2e-3);
    assert_eq!(summary_value(&summary, "verdict"), "converged");

    let dfa = Dfa::parse_regex("(a|b)*a(a|b)*", &['a', 'b']).unwrap();
    let seq = MeasureSequence::power(&['a', 'b'], 1.0, -1.0).unwrap();
    let lib = sequential_density(&seq, &dfa, 100_000, &default_checkpoints(100_000)).unwrap();
    assert_eq!(summary_value(&summary, "delta"), lib.summary.estimate.to_string());

    let csv = std::fs::read_to_string(dir.path().join("out/one_over_n.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,term,cesaro_partial"));
    assert_eq!(lines.next(), Some("0,0,0"));
    let last = csv.lines().last().unwrap();
    assert_eq!(last.rsplit(',').next().unwrap(), lib.summary.estimate.to_string());
    assert_eq!(csv.lines().count(), 100_001);
    assert!(!csv.contains('\r'));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "one_over_n.job", ONE_OVER_N);
    let run = |out: &str| {
        let o = ratdense(&[spec.to_str().unwrap(), "--out", out, "--max-n", "5000", "--quiet"]);
        assert!(o.status.success());
        std::fs::read(Path::new(out).join("one_over_n.csv")).unwrap()
    };
    let a = run(dir.path().join("a").to_str().unwrap());
    let b = run(dir.path().join("b").to_str().unwrap());
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 5001);
}

#[test]
fn monoid_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "contains_a.job",
        "[job]\nmode = monoid\n\n[language]\nregex = (a|b)*a(a|b)*\n\n[measure]\nspec = bernoulli a=0.5 b=0.5\n",
    );
    let out = ratdense(&[spec.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(summary_value(&stdout, "corollary"), "pass");
    assert_eq!(summary_value(&stdout, "monoid_size"), "2");
    let csv = std::fs::read_to_string(dir.path().join("contains_a.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    // the identity has density 0; the zero, reached by a, carries everything
    assert_eq!(rows[0][1], "ε");
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[1][1], "a");
    assert!((rows[1][3].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(rows[1][4], "true");
    assert_eq!(rows[1][5], "1");
}

#[test]
fn density_and_combinatorial_modes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "even.job",
        "[job]\nmode = density\nn = 20\n[language]\nregex = ((a|b)(a|b))*\n[measure]\nspec = bernoulli a=0.3 b=0.7\n",
    );
    let out = ratdense(&[spec.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success());
    let summary = std::fs::read_to_string(dir.path().join("even.summary.txt")).unwrap();
    assert_eq!(summary_value(&summary, "delta"), "0.5");
    assert_eq!(summary_value(&summary, "density_mode"), "cesaro");
    assert_eq!(summary_value(&summary, "aperiodic_language"), "false");

    let spec = write_spec(
        dir.path(),
        "golden.job",
        "[job]\nmode = combinatorial\nn = 2000\n[language]\nregex = a(a|b)*\n[shift]\nalphabet = a,b\nforbid = bb\n",
    );
    let out = ratdense(&[spec.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("golden.summary.txt")).unwrap();
    let delta: f64 = summary_value(&summary, "delta").parse().unwrap();
    // words starting with a: F(n+1)/F(n+2) -> 1/φ
    assert!((delta - 2.0 / (1.0 + 5f64.sqrt())).abs() < 1e-2);
}

#[test]
fn missing_spec_file_is_a_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = ratdense(&[dir.path().join("nope.job").to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out_dir.exists());
}

#[test]
fn missing_shift_file_and_bad_regex_are_spec_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("shift.job", "[job]\nmode = combinatorial\n[language]\nregex = a*\n[shift]\nfile = missing.sft\n"),
        ("regex.job", "[job]\nmode = density\n[language]\nregex = (a|b\n[measure]\nspec = bernoulli a=0.5 b=0.5\n"),
    ] {
        let spec = write_spec(dir.path(), name, text);
        let out = ratdense(&[spec.to_str().unwrap(), "--out", dir.path().join("out").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        assert!(!dir.path().join("out").exists());
    }
}

#[test]
fn family_cap_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "window.job",
        "[job]\nmode = sequential\nn = 20\noutput = out\n[language]\nregex = a.*a|a\n[sequence]\nspec = maxent family2\n",
    );
    let out = ratdense(&[spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
    let out = ratdense(&[spec.to_str().unwrap(), "--max-n", "17", "--quiet"]);
    assert!(out.status.success());
    assert!(dir.path().join("out/window.csv").exists());
}
