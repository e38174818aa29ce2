//! End-to-end tests that drive the compiled binary and re-validate its
//! file outputs through the library's own parsers.

use std::process::{Command, Output};

use cigraph::format::{parse_class_dump, read_certificate, write_matrix};
use cigraph::gf::field;
use cigraph::involutions::{canonical_t, transposed_t, ClassSpec};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cigraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn census_reports_match_closed_forms_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("census.json");
    let csv_path = dir.path().join("census.csv");
    let output = run(&[
        "census",
        "--n",
        "4",
        "--k",
        "1",
        "--p",
        "3",
        "--json",
        json_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("distance 1: 117"));
    assert!(text.contains("diameter: 2"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["spec"]["n"], 4);
    assert_eq!(json["spec"]["k"], 1);
    assert_eq!(json["spec"]["p"], 3);
    assert_eq!(json["counts"]["0"], 1);
    assert_eq!(json["counts"]["1"], 117);
    assert_eq!(json["counts"]["2"], 962);
    assert_eq!(json["diameter"], 2);
    assert_eq!(json["connected"], true);
    assert!(json.get("cells").is_none());

    assert_eq!(
        std::fs::read_to_string(&csv_path).unwrap(),
        "distance,m,count\n0,,1\n1,,117\n2,,962\n"
    );
}

#[test]
fn distance_four_witness_emits_a_certificate_the_library_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("chain.txt");
    let output = run(&[
        "witness",
        "--case",
        "distance4-char2",
        "--n",
        "6",
        "--k",
        "3",
        "--p",
        "2",
        "--emit",
        cert_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(stdout(&output).contains("distance at least 4"));

    let (spec, cert) =
        read_certificate(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!((spec.n(), spec.k()), (6, 3));
    assert_eq!(cert.length(), 4);
    assert_eq!(&cert.vertices()[0], canonical_t(&spec).mat());
    assert_eq!(cert.vertices().last().unwrap(), transposed_t(&spec).mat());
}

#[test]
fn wide_witness_runs_are_reproducible_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.txt");
    let second = dir.path().join("b.txt");
    for path in [&first, &second] {
        let output = run(&[
            "witness",
            "--case",
            "wide",
            "--n",
            "4",
            "--k",
            "1",
            "--p",
            "3",
            "--seed",
            "5",
            "--emit",
            path.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "stderr: {}", stderr(&output));
    }
    let a = std::fs::read_to_string(&first).unwrap();
    let b = std::fs::read_to_string(&second).unwrap();
    assert_eq!(a, b);
    let (spec, cert) = read_certificate(&a).unwrap();
    assert_eq!((spec.n(), spec.k()), (4, 1));
    assert!(cert.length() <= 2);
}

#[test]
fn class_dump_lists_every_member() {
    let dir = tempfile::tempdir().unwrap();
    let dump_path = dir.path().join("class.txt");
    let output = run(&[
        "class",
        "--n",
        "3",
        "--k",
        "1",
        "--p",
        "2",
        "--list",
        dump_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(stdout(&output).contains("21 members"));

    let (f, members) =
        parse_class_dump(&std::fs::read_to_string(&dump_path).unwrap()).unwrap();
    assert_eq!(f.order(), 2);
    assert_eq!(members.len(), 21);
    assert!(members.iter().all(|m| m.is_involution()));
}

#[test]
fn exact_and_bounded_distance_agree_on_the_transpose_pair() {
    let exact = run(&["distance", "--n", "4", "--k", "2", "--p", "2", "--transpose"]);
    assert!(exact.status.success(), "stderr: {}", stderr(&exact));
    let bounded = run(&[
        "distance",
        "--n",
        "4",
        "--k",
        "2",
        "--p",
        "2",
        "--transpose",
        "--bounded",
    ]);
    assert!(bounded.status.success(), "stderr: {}", stderr(&bounded));
    assert_eq!(stdout(&exact), "distance: 2\n");
    assert_eq!(stdout(&bounded), "distance: 2\n");
}

#[test]
fn distance_reads_the_target_from_a_matrix_file() {
    let f = field(3, 1).unwrap();
    let spec = ClassSpec::new(&f, 4, 2).unwrap();
    let neg_t = canonical_t(&spec).mat().neg();
    let dir = tempfile::tempdir().unwrap();
    let mat_path = dir.path().join("member.txt");
    std::fs::write(&mat_path, write_matrix(&neg_t)).unwrap();

    let output = run(&[
        "distance",
        "--n",
        "4",
        "--k",
        "2",
        "--p",
        "3",
        "--to",
        mat_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert_eq!(stdout(&output), "distance: 1\n");
}

#[test]
fn all_involutions_subcommand_reports_the_union_diameter() {
    let output = run(&["all-involutions", "--n", "4", "--p", "2"]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("vertices: 315"));
    assert!(text.contains("diameter: 3"));
}

#[test]
fn grid_sweep_skips_entries_over_the_cap_and_reports_version() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("grid.json");
    let output = run(&[
        "verify",
        "--grid",
        "--cap",
        "200",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("skipped"));
    assert!(text.contains("grid verification passed"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["grid_version"], 1);
    assert_eq!(json["passed"], true);
    assert_eq!(json["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn infeasible_requests_exit_nonzero_with_diagnostics() {
    let bad_class = run(&["census", "--n", "4", "--k", "3", "--p", "2"]);
    assert!(!bad_class.status.success());
    assert!(stderr(&bad_class).contains("no involution class"));

    let wrong_characteristic = run(&[
        "witness",
        "--case",
        "distance3-odd",
        "--n",
        "4",
        "--k",
        "2",
        "--p",
        "2",
    ]);
    assert!(!wrong_characteristic.status.success());
    assert!(stderr(&wrong_characteristic).contains("does not apply"));

    let over_cap = run(&["census", "--n", "4", "--k", "2", "--p", "3", "--cap", "100"]);
    assert!(!over_cap.status.success());
}
