use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn dcaq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dcaq")).args(args).output().expect("spawn dcaq");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn fixture_text(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn compute_matches_golden_reports() {
    for f in ["illustration1", "illustration2"] {
        let (code, out, _) = dcaq(&["--output", "machine", "compute", f]);
        assert_eq!(code, 0);
        assert_eq!(out, golden(&format!("compute_{f}.txt")), "{f} machine");
        let (_, out, _) = dcaq(&["compute", f]);
        assert_eq!(out, golden(&format!("compute_{f}_human.txt")), "{f} human");
    }
}

#[test]
fn fixture_files_and_builtin_names_agree() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/illustration1.toml");
    let (_, by_path, _) = dcaq(&["--output", "machine", "compute", path.to_str().unwrap()]);
    let (_, by_name, _) = dcaq(&["--output", "machine", "compute", "illustration1"]);
    assert_eq!(by_path, by_name);
}

#[test]
fn machine_report_is_toml() {
    let (_, out, _) = dcaq(&["--output", "machine", "compute", "illustration2"]);
    let table: toml::Table = out.parse().expect("machine output parses");
    assert_eq!(table["schema"].as_str(), Some("dcaq-report/1"));
}

#[test]
fn compare_ranks_illustration1_first() {
    let (code, out, _) = dcaq(&["--output", "machine", "compare", "illustration2", "illustration1"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("compare.txt"));
    let (_, human, _) = dcaq(&["compare", "illustration2", "illustration1"]);
    assert!(human.contains("Most ready library: illustration1"));
}

#[test]
fn compare_breaks_ties_by_label() {
    let dir = tempfile::tempdir().unwrap();
    let text = fixture_text("illustration1.toml").replace("label = \"illustration1\"\n", "");
    let b = write(dir.path(), "beta.toml", &text);
    let a = write(dir.path(), "alpha.toml", &text);
    let (code, out, _) = dcaq(&["--output", "machine", "compare", b.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("rank.1.label = \"alpha\"\n"), "{out}");
    assert!(out.contains("rank.2.label = \"beta\"\n"));
}

#[test]
fn compare_orders_by_sublibrary_count() {
    let dir = tempfile::tempdir().unwrap();
    let base = fixture_text("illustration1.toml");
    let paths: Vec<String> = [10, 1, 5]
        .iter()
        .map(|n| {
            let text = base
                .replace("label = \"illustration1\"", &format!("label = \"n{n:02}\""))
                .replace("sublibrary_count = 5", &format!("sublibrary_count = {n}"));
            write(dir.path(), &format!("n{n}.toml"), &text).to_string_lossy().into_owned()
        })
        .collect();
    let args: Vec<&str> =
        ["--output", "machine", "compare"].into_iter().chain(paths.iter().map(String::as_str)).collect();
    let (code, out, _) = dcaq(&args);
    assert_eq!(code, 0);
    let labels: Vec<&str> = out.lines().filter(|l| l.ends_with("\"") && l.contains(".label = ")).collect();
    assert_eq!(labels, ["rank.1.label = \"n01\"", "rank.2.label = \"n05\"", "rank.3.label = \"n10\""]);
}

#[test]
fn compare_needs_two_inputs() {
    let (code, _, err) = dcaq(&["compare", "illustration1"]);
    assert_eq!(code, 1);
    assert!(err.contains("at least two"));
    assert_eq!(dcaq(&["compare"]).0, 1);
}

#[test]
fn invalid_hit_ratio_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = fixture_text("illustration1.toml").replace("hit_ratio = 0.9", "hit_ratio = 1.3");
    let path = write(dir.path(), "bad.toml", &text);
    let (code, out, err) = dcaq(&["compute", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("environment.client.hit_ratio"), "{err}");
}

#[test]
fn malformed_documents_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("missing.toml", fixture_text("illustration1.toml").replace("[command]\ntext = \"retrcomp\"\n", "[command]\n")),
        ("type.toml", fixture_text("illustration1.toml").replace("component_count = 16", "component_count = \"many\"")),
        ("syntax.toml", "[doocl\n".to_string()),
    ];
    for (name, text) in cases {
        let path = write(dir.path(), name, &text);
        let (code, _, err) = dcaq(&["compute", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{name}");
        assert!(err.starts_with("error:"), "{name}: {err}");
    }
    let (_, _, err) = dcaq(&["compute", dir.path().join("type.toml").to_str().unwrap()]);
    assert!(err.contains("doocl.component_count"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(dcaq(&[]).0, 1);
    assert_eq!(dcaq(&["simulate", "illustration2", "--trials", "lots"]).0, 1);
    assert_eq!(dcaq(&["--output", "yaml", "compute", "illustration1"]).0, 1);
    assert_eq!(dcaq(&["--version"]).0, 0);
}

#[test]
fn no_ts_override_flags_the_deviation() {
    let (code, out, _) = dcaq(&["--output", "machine", "compute", "illustration2", "--no-ts-override"]);
    assert_eq!(code, 0);
    assert!(out.contains("result.ts_source = \"computed\"\n"));
    assert!(out.contains("input.ts_override_applied = false\n"));
    assert!(out.contains("result.ts_differs_from_override = true\n"));
}

#[test]
fn simulate_is_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let text = fixture_text("illustration2.toml")
        .replace("data_rate = \"0.1 bpns\"", "distribution = \"uniform\"\nlo = \"0.05 bpns\"\nhi = \"0.15 bpns\"");
    let path = write(dir.path(), "uniform.toml", &text);
    let args = ["--output", "machine", "simulate", path.to_str().unwrap(), "--trials", "1000", "--seed", "1"];
    let (c1, a, e1) = dcaq(&args);
    let (c2, b, _) = dcaq(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(e1.is_empty(), "{e1}");
    assert!(a.contains("warning_count = 0\n"));
    let mut other = args;
    other[7] = "2";
    assert_ne!(dcaq(&other).1, a);
}

#[test]
fn simulate_fixed_rate_warns() {
    let (code, out, err) = dcaq(&["--output", "machine", "simulate", "illustration2", "--trials", "10"]);
    assert_eq!(code, 0);
    assert!(err.starts_with("warning:"));
    assert!(out.contains("dcaq.stddev = 0.0000000000000000e0\n"));
    assert!(out.contains("warning_count = 1\n"));
}

#[test]
fn validate_reports_each_suite() {
    let (code, out, _) = dcaq(&["validate", "--max-n", "64", "--replay-scenarios", "200"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    let (code, out, _) = dcaq(&["--output", "machine", "validate", "--max-n", "1024", "--replay-scenarios", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("suite.1.checks = 1024\n"));
    assert!(out.ends_with("passed = true\n"));
}

#[test]
fn validate_negative_control_exits_three() {
    for fault in ["search-count", "replay-bias"] {
        let (code, _, err) = dcaq(&["validate", "--max-n", "32", "--replay-scenarios", "50", "--inject-fault", fault]);
        assert_eq!(code, 3, "{fault}");
        assert!(err.contains("oracle disagreement"));
    }
}

#[test]
fn documented_example_is_valid() {
    let doc = include_str!("../../../docs/scenario-format.md");
    let start = doc.find("```toml\n").expect("example block") + "```toml\n".len();
    let end = start + doc[start..].find("```").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "example.toml", &doc[start..end]);
    let (code, out, err) = dcaq(&["--output", "machine", "compute", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("input.doocl.sublibrary_count = 12\n"));
    assert!(out.contains("input.network.distribution = \"uniform\"\n"));
}
