//! End-to-end checks of the command-line surface: selectors, file formats,
//! config-file precedence, and exit codes.

use std::fs;
use std::sync::Arc;

use graph_rearrange::cli::{execute, parse_graph, parse_ordering};
use graph_rearrange::ordering::VertexOrdering;
use graph_rearrange::rearrange::LatticeFunction;
use graph_rearrange::Graph;

#[test]
fn profile_csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("profile.csv");
    let code = execute(&[
        "profile",
        "--family",
        "grid",
        "--kind",
        "vertex",
        "--n",
        "1..6",
        "--box",
        "13",
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(code, 0);
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("N,min,provenance"));
    let mins: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(mins, ["4", "6", "7", "8", "8", "9"]);
}

#[test]
fn profile_with_witness_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("profile.csv");
    execute(&[
        "profile",
        "--family",
        "grid",
        "--kind",
        "edge",
        "--n",
        "5",
        "--witness",
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("N,min,provenance,witness\n"));
    let row = csv.lines().nth(1).unwrap();
    assert!(row.starts_with("5,10,"));
    assert_eq!(row.split(',').last().unwrap().split(';').count(), 5);
}

#[test]
fn rearrange_norms_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.txt");
    fs::write(&input, "0 0 2\n0 1 1\n1 0 1\n").unwrap();
    let out = dir.path().join("fstar.txt");
    let code = execute(&[
        "rearrange",
        "--graph",
        "ladder:8",
        "--ordering",
        "snake",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(code, 0);
    let graph = parse_graph("ladder:8").unwrap();
    let fstar =
        LatticeFunction::from_text(Arc::clone(&graph), &fs::read_to_string(&out).unwrap()).unwrap();
    let expected = LatticeFunction::from_text(graph, "0 0 2\n0 1 1\n1 1 1\n").unwrap();
    assert_eq!(fstar.support(), expected.support());

    let norms_out = dir.path().join("norms.csv");
    execute(&[
        "norms",
        "--graph",
        "ladder:8",
        "--in",
        input.to_str().unwrap(),
        "--p",
        "1,2,inf",
        "--out",
        norms_out.to_str().unwrap(),
    ])
    .unwrap();
    let csv = fs::read_to_string(&norms_out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,lp_norm,grad_lp_norm");
    assert!(lines[1].starts_with("1,4,5"));
    assert!(lines[3].starts_with("inf,2,1"));
}

#[test]
fn audit_exit_codes_reflect_hypotheses() {
    // Full-range audit fails for the spiral, so the exit code is nonzero.
    let code = execute(&[
        "audit",
        "--graph",
        "grid:5",
        "--ordering",
        "spiral",
        "--nmax",
        "6",
        "--theorems",
        "2,3,4",
    ])
    .unwrap();
    assert_eq!(code, 1);

    let code = execute(&[
        "audit",
        "--graph",
        "grid:5",
        "--ordering",
        "spiral",
        "--nmax",
        "6",
        "--theorems",
        "2,3",
    ])
    .unwrap();
    assert_eq!(code, 0);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("audit");
    let code = execute(&[
        "audit",
        "--graph",
        "path:31",
        "--ordering",
        "path",
        "--nmax",
        "10",
        "--theorems",
        "2,3,4",
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(code, 0);
    let constants = fs::read_to_string(out.join("audit_constants.csv")).unwrap();
    assert!(constants.contains("alpha,1\n"));
    assert!(constants.contains("c,1\n"));
    assert!(constants.contains("full_range_holds,true"));
    assert!(out.join("audit_rows.csv").exists());
}

#[test]
fn counterexample_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("witness.txt");
    let code = execute(&[
        "counterexample",
        "--graph",
        "grid:4",
        "--ordering",
        "spiral",
        "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(code, 0);
    let graph = parse_graph("grid:4").unwrap();
    let witness =
        LatticeFunction::from_text(graph, &fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(witness.support_size(), 5);
}

#[test]
fn render_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for out in [&a, &b] {
        execute(&[
            "render",
            "--graph",
            "grid:4",
            "--ordering",
            "spiral",
            "--upto",
            "16",
            "--out",
            out.to_str().unwrap(),
        ])
        .unwrap();
    }
    let bytes_a = fs::read(&a).unwrap();
    let bytes_b = fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    assert!(bytes_a.starts_with(b"<svg"));

    let f = dir.path().join("f.txt");
    fs::write(&f, "0 0 2\n1 0 1\n").unwrap();
    let heat = dir.path().join("heat.svg");
    execute(&[
        "render",
        "--graph",
        "grid:4",
        "--in",
        f.to_str().unwrap(),
        "--out",
        heat.to_str().unwrap(),
    ])
    .unwrap();
    assert!(fs::read_to_string(&heat).unwrap().contains("<rect"));
}

#[test]
fn config_file_supplies_missing_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gr.conf");
    let out = dir.path().join("profile.csv");
    fs::write(
        &config,
        format!(
            "family = grid\nkind = edge\nn = 1..3\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let code = execute(&["profile", "--config", config.to_str().unwrap()]).unwrap();
    assert_eq!(code, 0);
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 4);

    // Explicit flags win over the config file.
    let out2 = dir.path().join("override.csv");
    execute(&[
        "profile",
        "--config",
        config.to_str().unwrap(),
        "--n",
        "1..2",
        "--out",
        out2.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(fs::read_to_string(&out2).unwrap().lines().count(), 3);
}

#[test]
fn ordering_file_selector_round_trips() {
    let graph = parse_graph("grid:3").unwrap();
    let spiral = parse_ordering(&graph, "spiral").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ordering.txt");
    fs::write(&path, spiral.to_text()).unwrap();
    let selector = format!("file:{}", path.display());
    let back = parse_ordering(&graph, &selector).unwrap();
    assert_eq!(back.len(), spiral.len());
    for rank in 1..=back.len() {
        assert_eq!(back.vertex_at_rank(rank), spiral.vertex_at_rank(rank));
    }
}

#[test]
fn graph_text_round_trip_via_files() {
    for selector in ["grid:3", "ladder:5", "path:7", "tree:3,3"] {
        let g = parse_graph(selector).unwrap();
        let text = g.to_text();
        let back = Graph::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
    }
}

#[test]
fn bad_selectors_are_parse_errors() {
    assert!(execute(&["profile", "--family", "grid"]).is_err());
    let graph = parse_graph("grid:3").unwrap();
    assert!(parse_ordering(&graph, "snake").is_err());
    assert!(matches!(
        VertexOrdering::from_text(graph, "1 0 0\n3 1 0\n"),
        Err(graph_rearrange::Error::Parse(_))
    ));
}
