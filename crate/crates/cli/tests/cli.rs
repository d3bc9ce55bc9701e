use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sbm_gof::gof::{bootstrap_corrected_test, gof_test, GofTestResult};
use sbm_gof::harness::RealDataReport;
use sbm_gof::netgen::{largest_connected_component, read_edge_list, read_labels, EdgeListOptions, Indexing};
use sbm_gof::SeededRng;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sbm-gof"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn sbm-gof")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn one_based() -> EdgeListOptions {
    EdgeListOptions {
        indexing: Indexing::One,
        ..EdgeListOptions::default()
    }
}

#[test]
fn real_data_report_matches_library() {
    let edges = fixture("six_node.txt");
    let labels = fixture("six_node_labels.txt");
    let list = read_edge_list(&edges, one_based()).unwrap();
    let (lcc, nodes) = largest_connected_component(&list.graph);
    let m = read_labels(&labels).unwrap().membership_for(&list, &nodes).unwrap();

    let text = stdout(&run(&[
        "real-data",
        edges.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--one-based",
        "--k0",
        "2",
        "--seed",
        "9",
        "--json",
    ]));
    let report: RealDataReport = serde_json::from_str(&text).unwrap();
    let expected = gof_test(&lcc, 2, 0.05, Some(&m), &mut SeededRng::new(9)).unwrap();
    assert_eq!(report.component_nodes, 5);
    assert!(report.labels_used);
    assert_eq!(report.test, expected);
    assert_eq!(report.test.statistic.to_bits(), expected.statistic.to_bits());

    let text = stdout(&run(&[
        "real-data",
        edges.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--one-based",
        "--bootstrap",
        "10",
        "--seed",
        "9",
        "--json",
    ]));
    let report: RealDataReport = serde_json::from_str(&text).unwrap();
    let expected = bootstrap_corrected_test(&lcc, 2, 0.05, 10, Some(&m), &mut SeededRng::new(9)).unwrap();
    assert_eq!(report.test, expected);
}

#[test]
fn test_command_matches_library_and_writes_report() {
    let edges = fixture("six_node.txt");
    let labels = fixture("six_node_labels.txt");
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let text = stdout(&run(&[
        "test",
        edges.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--one-based",
        "--k0",
        "2",
        "--seed",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]));
    assert!(text.starts_with("K0=2 statistic="), "{text}");
    let report: GofTestResult = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let list = read_edge_list(&edges, one_based()).unwrap();
    let all: Vec<usize> = (0..6).collect();
    let m = read_labels(&labels).unwrap().membership_for(&list, &all).unwrap();
    let expected = gof_test(&list.graph, 2, 0.05, Some(&m), &mut SeededRng::new(3)).unwrap();
    assert_eq!(report, expected);
}

#[test]
fn generated_graph_feeds_the_test() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let labels = dir.path().join("labels.txt");
    let out = run(&[
        "gen",
        "--n",
        "120",
        "--k",
        "2",
        "--b",
        "0.6,0.2;0.2,0.6",
        "--membership",
        "balanced",
        "--seed",
        "5",
        "--out",
        graph.to_str().unwrap(),
        "--labels-out",
        labels.to_str().unwrap(),
    ]);
    stdout(&out);
    let again = dir.path().join("g2.txt");
    stdout(&run(&[
        "gen", "--n", "120", "--k", "2", "--b", "0.6,0.2;0.2,0.6", "--membership", "balanced", "--seed", "5",
        "--out", again.to_str().unwrap(),
    ]));
    assert_eq!(fs::read(&graph).unwrap(), fs::read(&again).unwrap());

    let text = stdout(&run(&[
        "test",
        graph.to_str().unwrap(),
        "--labels",
        labels.to_str().unwrap(),
        "--k0",
        "2",
        "--json",
    ]));
    let res: GofTestResult = serde_json::from_str(&text).unwrap();
    assert_eq!(res.n, 120);
    assert_eq!(res.community_sizes, vec![60, 60]);

    let text = stdout(&run(&["estimate-k", graph.to_str().unwrap(), "--bootstrap", "10", "--json"]));
    let est: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(est["k_hat"], 2);
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn simulation_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut trees = Vec::new();
    for threads in ["1", "2"] {
        let out = dir.path().join(format!("run-{threads}"));
        stdout(&run(&[
            "simulate",
            "null-dist",
            "--reps",
            "4",
            "--bootstrap",
            "5",
            "--seed",
            "11",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]));
        trees.push(tree(&out));
    }
    assert_eq!(trees[0], trees[1]);
    let names: Vec<&str> = trees[0].iter().map(|(n, _)| n.as_str()).collect();
    assert!(names.contains(&"meta.json") && names.contains(&"samples.csv"), "{names:?}");
}

#[test]
fn exit_codes_follow_error_class() {
    let edges = fixture("six_node.txt");
    let edges = edges.to_str().unwrap();
    let code = |args: &[&str]| run(args).status.code();

    assert_eq!(code(&["test", "/nonexistent/edges.txt", "--k0", "1"]), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n1 two\n").unwrap();
    assert_eq!(code(&["test", bad.to_str().unwrap(), "--k0", "1"]), Some(3));

    assert_eq!(code(&["test", edges, "--one-based", "--k0", "1", "--alpha", "1.5"]), Some(2));
    assert_eq!(code(&["test", edges, "--one-based", "--k0", "9"]), Some(2));
    assert_eq!(code(&["test", edges, "--no-such-flag"]), Some(2));
    assert_eq!(code(&["estimate-k", edges, "--power-law", "1"]), Some(2));

    // Every bootstrap replicate of a complete graph is complete.
    let complete = dir.path().join("complete.txt");
    fs::write(&complete, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    assert_eq!(code(&["test", complete.to_str().unwrap(), "--k0", "1", "--bootstrap", "5"]), Some(4));

    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"kind":"select-k","design":{"design":"random-b","ns":[30],"ks":[3],"min_singular":0.49,"max_attempts":1},"replicates":1,"seed":1,"modes":["plain"]}"#,
    )
    .unwrap();
    let out = dir.path().join("sim");
    assert_eq!(
        code(&["simulate", "select-k", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]),
        Some(4)
    );
}
