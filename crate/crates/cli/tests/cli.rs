use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use radial_embed::graphs::load_edge_list_file;
use radial_embed::positions::Positions;
use radial_embed::stats::spearman;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radial-embed"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

/// Data rows (non-comment, non-header) of a CSV file.
fn data_rows(p: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(p)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn generate_er_echoes_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("er.txt");
    ok(&[
        "generate",
        "er",
        "--n",
        "1000",
        "--p",
        "0.025",
        "--seed",
        "7",
        "--out",
        path(&file),
    ]);
    let text = fs::read_to_string(&file).unwrap();
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header.iter().any(|l| l.contains("er n=1000 p=0.025")));
    let echo = header
        .iter()
        .find_map(|l| l.strip_prefix("# config: "))
        .unwrap();
    let echo: Value = serde_json::from_str(echo).unwrap();
    assert_eq!(echo["seed"], 7);
    assert_eq!(echo["family"]["family"], "er");
    let (g, _) = load_edge_list_file(&file).unwrap();
    // expected edge count 0.025 * C(1000, 2) = 12487.5, sd about 110
    assert!((g.edge_count() as f64 - 12487.5).abs() < 600.0);

    let again = dir.path().join("er2.txt");
    ok(&[
        "generate",
        "er",
        "--n",
        "1000",
        "--p",
        "0.025",
        "--seed",
        "7",
        "--out",
        path(&again),
    ]);
    assert_eq!(text, fs::read_to_string(&again).unwrap());
}

#[test]
fn generate_tree_and_grid_sizes() {
    let out = ok(&["generate", "tree", "--r", "3", "--h", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    // (3^9 - 1) / 2 vertices
    assert!(text.contains("# Nodes: 9841 Edges: 9840"));

    let out = ok(&["generate", "grid", "--rows", "30", "--cols", "40"]);
    let text = String::from_utf8(out.stdout).unwrap();
    // 31 x 41 lattice points, 30*41 + 31*40 edges
    assert!(text.contains("# Nodes: 1271 Edges: 2470"));
}

#[test]
fn embed_writes_self_describing_positions() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = |out: &Path| {
        vec![
            "embed".to_owned(),
            "--family".into(),
            "powerlaw".into(),
            "--n".into(),
            "150".into(),
            "--seed".into(),
            "3".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let a_args = args(&a);
    ok(&a_args.iter().map(String::as_str).collect::<Vec<_>>());
    let b_args = args(&b);
    ok(&b_args.iter().map(String::as_str).collect::<Vec<_>>());

    let text = fs::read_to_string(a.join("positions.csv")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# config: {")));
    assert_eq!(text, fs::read_to_string(b.join("positions.csv")).unwrap());
    let p = Positions::read_csv(&text).unwrap();
    assert_eq!(p.dim(), 2);
    assert_eq!(p.n(), 150);
    assert!(p.mean_square_radius() <= 1.0 + 1e-9);

    let summary = read_json(&a.join("embed.json"));
    assert_eq!(summary["graph"]["vertices"], 150);
    assert!(summary["runtime"]["layout_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn bench_centrality_outputs_all_measures() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        ok(&[
            "bench-centrality",
            "--family",
            "er",
            "--n",
            "250",
            "--p",
            "0.05",
            "--dim",
            "3",
            "--bootstrap-b",
            "200",
            "--seed",
            "11",
            "--out",
            path(out),
        ]);
    }
    let csv = fs::read_to_string(a.join("centrality.csv")).unwrap();
    assert_eq!(csv, fs::read_to_string(b.join("centrality.csv")).unwrap());
    let rows = data_rows(&a.join("centrality.csv"));
    let measures: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(
        measures,
        [
            "degree",
            "betweenness",
            "eigenvector",
            "pagerank",
            "closeness",
            "load"
        ]
    );

    let mut ja = read_json(&a.join("centrality.json"));
    let mut jb = read_json(&b.join("centrality.json"));
    assert_eq!(ja["config"]["layout"]["dim"], 3);
    assert_eq!(ja["config"]["stats"]["resamples"], 200);
    assert_eq!(ja["rows"].as_array().unwrap().len(), 6);
    for row in ja["rows"].as_array().unwrap() {
        let rho = row["rho"].as_f64().unwrap();
        assert!(row["ci_low"].as_f64().unwrap() <= rho + 1e-12);
        assert!(row["ci_high"].as_f64().unwrap() >= rho - 1e-12);
    }
    assert!(ja["runtime"]["layout_seconds"].is_number());
    ja.as_object_mut().unwrap().remove("runtime");
    jb.as_object_mut().unwrap().remove("runtime");
    assert_eq!(ja, jb);
}

#[test]
fn laplacian_only_baseline_runs() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "bench-centrality",
        "--family",
        "ws",
        "--n",
        "200",
        "--layout",
        "laplacian-only",
        "--bootstrap-b",
        "100",
        "--out",
        path(dir.path()),
    ]);
    let j = read_json(&dir.path().join("centrality.json"));
    assert_eq!(j["layout"], "laplacian-only");
    assert_eq!(j["config"]["layout_kind"], "laplacian-only");
}

#[test]
fn dump_layout_consistent_with_bench() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump");
    let bench = dir.path().join("bench");
    let common = [
        "--family",
        "er",
        "--n",
        "300",
        "--p",
        "0.03",
        "--seed",
        "5",
        "--bootstrap-b",
        "100",
    ];
    let mut args = vec!["dump-layout"];
    args.extend(common);
    args.extend(["--out", path(&dump)]);
    ok(&args);
    let mut args = vec!["bench-centrality"];
    args.extend(common);
    args.extend(["--out", path(&bench)]);
    ok(&args);

    let initial = data_rows(&dump.join("initial.csv"));
    let last = data_rows(&dump.join("final.csv"));
    let degrees = data_rows(&dump.join("degrees.csv"));
    assert_eq!(initial.len(), last.len());
    assert_eq!(last.len(), degrees.len());
    assert_ne!(initial, last);
    for (p, d) in last.iter().zip(&degrees) {
        assert_eq!(p[0], d[0]);
        let norm: f64 = d[2].parse().unwrap();
        assert!((0.0..=1.0).contains(&norm));
    }
    assert!(degrees.iter().any(|d| d[2] == "1.000000"));
    assert!(degrees.iter().any(|d| d[2] == "0.000000"));

    let radial: Vec<f64> = last
        .iter()
        .map(|r| r.last().unwrap().parse().unwrap())
        .collect();
    let degree: Vec<f64> = degrees.iter().map(|r| r[1].parse().unwrap()).collect();
    let rho = spearman(&radial, &degree).unwrap();
    let j = read_json(&bench.join("centrality.json"));
    let bench_rho = j["rows"][0]["rho"].as_f64().unwrap();
    assert_eq!(j["rows"][0]["measure"], "degree");
    assert!((rho - bench_rho).abs() < 1e-12, "{rho} vs {bench_rho}");
}

#[test]
fn dump_layout_on_grid() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "dump-layout",
        "--family",
        "grid",
        "--rows",
        "30",
        "--cols",
        "40",
        "--iterations",
        "20",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(data_rows(&dir.path().join("final.csv")).len(), 1271);
}

#[test]
fn bench_influence_reports_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "bench-influence",
        "--family",
        "er",
        "--n",
        "128",
        "--p",
        "0.05",
        "--repeats",
        "2",
        "--n-sims",
        "50",
        "--out",
        path(dir.path()),
    ]);
    let j = read_json(&dir.path().join("influence.json"));
    for method in ["greedy", "embedding"] {
        let m = &j[method];
        assert!(m["influence_mean"].as_f64().unwrap() >= 10.0);
        assert_eq!(m["evaluation_simulations"], 50);
        assert_eq!(m["seeds"].as_array().unwrap().len(), 2);
        assert!(m["wall_time_seconds"].is_number());
    }
    // per repeat: greedy pays for selection, embedding only for evaluation
    assert!(j["greedy"]["total_simulations"].as_u64().unwrap() > 50);
    assert_eq!(j["embedding"]["total_simulations"], 50);
    assert!(j["speedup"].is_number());
    assert!(j["graph"]["description"]
        .as_str()
        .unwrap()
        .contains("er n=128"));
}

#[test]
fn influence_with_every_vertex_seeded_ties() {
    let dir = tempfile::tempdir().unwrap();
    // 3 x 3 lattice has 16 vertices
    ok(&[
        "bench-influence",
        "--family",
        "grid",
        "--rows",
        "3",
        "--cols",
        "3",
        "--k-seeds",
        "16",
        "--repeats",
        "1",
        "--n-sims",
        "20",
        "--out",
        path(dir.path()),
    ]);
    let j = read_json(&dir.path().join("influence.json"));
    assert_eq!(j["greedy"]["influence_mean"], 16.0);
    assert_eq!(j["embedding"]["influence_mean"], 16.0);
}

#[test]
fn config_file_values_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"input.family": "grid", "input.rows": 5, "input.cols": 6, "layout.dim": 3, "layout.iterations": 5, "seed": 9}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    ok(&[
        "embed",
        "--config",
        path(&cfg),
        "--dim",
        "4",
        "--out",
        path(&out),
    ]);
    let j = read_json(&out.join("embed.json"));
    assert_eq!(j["config"]["layout"]["dim"], 4);
    assert_eq!(j["config"]["layout"]["iterations"], 5);
    assert_eq!(j["config"]["seed"], 9);
    assert_eq!(j["graph"]["vertices"], 42);
}

#[test]
fn projection_plane_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let base = ["embed", "--family", "grid", "--rows", "4", "--cols", "4"];
    let mut args = base.to_vec();
    args.extend([
        "--dim",
        "3",
        "--projection-plane",
        "1,2",
        "--out",
        path(&out),
    ]);
    ok(&args);
    let j = read_json(&out.join("embed.json"));
    assert_eq!(
        j["config"]["layout"]["projection_plane"],
        serde_json::json!([1, 2])
    );
    let mut args = base.to_vec();
    args.extend(["--projection-plane", "0", "--out", path(&out)]);
    assert_eq!(code(&args), 1);
}

#[test]
fn edge_list_input_keeps_labels() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    // cycle on labels 10..=15 plus a detached edge
    fs::write(
        &file,
        "# demo\n10 11\n11 12\n12 13\n13 14\n14 15\n15 10\n10 12\n100 200\n",
    )
    .unwrap();
    ok(&[
        "embed",
        "--input",
        path(&file),
        "--iterations",
        "5",
        "--out",
        path(dir.path()),
    ]);
    let rows = data_rows(&dir.path().join("positions.csv"));
    let labels: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(labels, ["10", "11", "12", "13", "14", "15"]);
    let j = read_json(&dir.path().join("embed.json"));
    assert_eq!(j["graph"]["source_vertices"], 8);
    assert_eq!(j["graph"]["vertices"], 6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let o = path(&out);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(
        code(&["embed", "--family", "er", "--n", "50", "--k", "4", "--out", o]),
        1
    );
    assert_eq!(code(&["embed", "--family", "er", "--n", "50"]), 1);
    assert_eq!(
        code(&["embed", "--family", "er", "--n", "50", "--dim", "1", "--out", o]),
        1
    );
    assert_eq!(
        code(&["embed", "--family", "ws", "--k", "3", "--out", o]),
        1
    );

    let bad_cfg = dir.path().join("bad.json");
    fs::write(&bad_cfg, r#"{"layout.dimension": 3}"#).unwrap();
    assert_eq!(
        code(&[
            "embed",
            "--family",
            "grid",
            "--config",
            path(&bad_cfg),
            "--out",
            o
        ]),
        1
    );

    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&["embed", "--input", path(&missing), "--out", o]), 2);
    let malformed = dir.path().join("bad.txt");
    fs::write(&malformed, "1 2\n2 three\n").unwrap();
    assert_eq!(code(&["embed", "--input", path(&malformed), "--out", o]), 2);

    // complete graph: every degree ties, so the correlation is undefined
    assert_eq!(
        code(&[
            "bench-centrality",
            "--family",
            "er",
            "--n",
            "10",
            "--p",
            "1",
            "--out",
            o
        ]),
        3
    );
}

#[test]
fn thread_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args([
            "embed",
            "--family",
            "grid",
            "--rows",
            "4",
            "--cols",
            "4",
            "--out",
            path(dir.path()),
        ])
        .env("RADIAL_EMBED_THREADS", "1")
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .args(["embed", "--family", "grid", "--out", path(dir.path())])
        .env("RADIAL_EMBED_THREADS", "none")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
