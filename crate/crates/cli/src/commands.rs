//! Verb implementations. Each writes its outputs single-threaded after the
//! computation finishes.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use radial_embed::bench::{
    bench_centrality as run_centrality, layout, load_graph, LayoutKind, LoadedGraph,
};
use radial_embed::graphs::write_edge_list_with_header;
use radial_embed::influence::benchmark_influence;
use radial_embed::layout::{embed_traced, radial_scores};
use radial_embed::positions::Positions;
use serde::Serialize;
use serde_json::json;

use crate::config::{
    graph_seed, resolve_family, resolve_seed, CommonArgs, FamilyArgs, FamilyName, FileConfig,
    RunArgs, RunConfig,
};
use crate::CliError;

#[derive(Debug, Serialize)]
struct GraphInfo {
    description: String,
    source_vertices: usize,
    source_edges: usize,
    vertices: usize,
    edges: usize,
    edge_fraction: f64,
}

impl GraphInfo {
    fn new(cfg: &RunConfig, lg: &LoadedGraph) -> Self {
        let mut description = cfg.input.source.describe();
        if let Some(f) = cfg.input.subsample {
            description.push_str(&format!(", subsample {f}"));
        }
        description.push_str(", largest component");
        Self {
            description,
            source_vertices: lg.source_vertices,
            source_edges: lg.source_edges,
            vertices: lg.graph.n(),
            edges: lg.graph.edge_count(),
            edge_fraction: lg.edge_fraction(),
        }
    }
}

fn prepare(
    args: &RunArgs,
    command: &'static str,
) -> Result<(RunConfig, PathBuf, LoadedGraph), CliError> {
    let (cfg, out) = args.resolve(command)?;
    fs::create_dir_all(&out)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out.display())))?;
    let subsample = cfg.input.subsample.zip(cfg.input.subsample_seed);
    let lg = load_graph(&cfg.input.source, subsample)?;
    log::info!(
        "graph: {} vertices, {} edges ({})",
        lg.graph.n(),
        lg.graph.edge_count(),
        cfg.input.source.describe()
    );
    Ok((cfg, out, lg))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn write_positions(
    path: &Path,
    p: &Positions,
    header: &[String],
    lg: &LoadedGraph,
) -> Result<(), CliError> {
    p.write_csv_labeled(header, Some(lg.map.originals()), create(path)?)?;
    Ok(())
}

pub fn generate(
    family: FamilyName,
    params: &FamilyArgs,
    common: &CommonArgs,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let seed = resolve_seed(common, &file)?;
    let family = resolve_family(family, params, &file)?;
    let graph_seed = graph_seed(seed);
    let g = family.generate(graph_seed)?;
    let echo = json!({
        "command": "generate",
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "graph_seed": graph_seed,
        "family": family,
    });
    let header = vec![
        format!(
            "radial-embed {} generate: {}",
            env!("CARGO_PKG_VERSION"),
            family.describe()
        ),
        format!("config: {echo}"),
    ];
    match out {
        Some(path) => write_edge_list_with_header(&g, &header, create(path)?)?,
        None => write_edge_list_with_header(&g, &header, io::stdout().lock())?,
    }
    log::info!("generated {} vertices, {} edges", g.n(), g.edge_count());
    Ok(())
}

pub fn embed(args: &RunArgs) -> Result<(), CliError> {
    let (cfg, out, lg) = prepare(args, "embed")?;
    let start = Instant::now();
    let p = layout(&lg.graph, &cfg.layout, cfg.layout_kind)?;
    let seconds = start.elapsed().as_secs_f64();
    write_positions(&out.join("positions.csv"), &p, &cfg.header(), &lg)?;
    write_json(
        &out.join("embed.json"),
        &json!({
            "config": cfg,
            "graph": GraphInfo::new(&cfg, &lg),
            "runtime": { "layout_seconds": seconds },
        }),
    )?;
    println!(
        "embedded {} vertices in {seconds:.2}s -> {}",
        lg.graph.n(),
        out.join("positions.csv").display()
    );
    Ok(())
}

pub fn bench_centrality(args: &RunArgs) -> Result<(), CliError> {
    let (cfg, out, lg) = prepare(args, "bench-centrality")?;
    let bench = run_centrality(&lg.graph, &cfg.layout, cfg.layout_kind, &cfg.stats)?;

    let mut csv = create(&out.join("centrality.csv"))?;
    for line in cfg.header() {
        writeln!(csv, "# {line}")?;
    }
    csv.write_all(bench.to_csv().as_bytes())?;
    csv.flush()?;
    write_json(
        &out.join("centrality.json"),
        &json!({
            "config": cfg,
            "graph": GraphInfo::new(&cfg, &lg),
            "layout": bench.layout,
            "rows": bench.rows,
            "runtime": bench.runtime,
        }),
    )?;

    println!("{:<12} {:>7}  {:>17}  {:>10}", "measure", "rho", "ci", "p");
    for row in &bench.rows {
        let r = &row.report;
        println!(
            "{:<12} {:>7.3}  [{:>6.3}, {:>6.3}]  {:>10.3e}",
            row.measure.name(),
            r.rho,
            r.ci_low,
            r.ci_high,
            r.p_value
        );
    }
    Ok(())
}

pub fn bench_influence(args: &RunArgs) -> Result<(), CliError> {
    let (cfg, out, lg) = prepare(args, "bench-influence")?;
    let mut report = benchmark_influence(
        &lg.graph,
        &cfg.layout,
        &cfg.influence.cascade,
        cfg.influence.repeats,
    )?;
    // report seeds under the input's vertex labels
    for method in [&mut report.greedy, &mut report.embedding] {
        for set in &mut method.seeds {
            for v in set.iter_mut() {
                *v = lg.map.original(*v) as usize;
            }
        }
    }
    let ratio = report.embedding.influence_mean / report.greedy.influence_mean;
    write_json(
        &out.join("influence.json"),
        &json!({
            "config": cfg,
            "graph": GraphInfo::new(&cfg, &lg),
            "repeats": report.repeats,
            "greedy": report.greedy,
            "embedding": report.embedding,
            "influence_ratio": ratio,
            "speedup": report.speedup(),
        }),
    )?;
    println!(
        "greedy    {:.2} +- {:.2} in {:.3}s\nembedding {:.2} +- {:.2} in {:.3}s\nratio {ratio:.3}, speedup {:.1}x",
        report.greedy.influence_mean,
        report.greedy.influence_std,
        report.greedy.wall_time_seconds,
        report.embedding.influence_mean,
        report.embedding.influence_std,
        report.embedding.wall_time_seconds,
        report.speedup()
    );
    Ok(())
}

pub fn dump_layout(args: &RunArgs) -> Result<(), CliError> {
    let (cfg, out, lg) = prepare(args, "dump-layout")?;
    let g = &lg.graph;
    let (initial, last) = match cfg.layout_kind {
        LayoutKind::Force => {
            let e = embed_traced(g, &cfg.layout)?;
            (e.initial, e.positions)
        }
        LayoutKind::LaplacianOnly => {
            let p = layout(g, &cfg.layout, LayoutKind::LaplacianOnly)?;
            (p.clone(), p)
        }
    };
    let header = cfg.header();
    write_positions(&out.join("initial.csv"), &initial, &header, &lg)?;
    write_positions(&out.join("final.csv"), &last, &header, &lg)?;

    let degrees = g.degrees();
    let lo = degrees.iter().copied().min().unwrap_or(0);
    let hi = degrees.iter().copied().max().unwrap_or(0);
    let mut w = create(&out.join("degrees.csv"))?;
    for line in &header {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "vertex,degree,degree_norm")?;
    for (i, &d) in degrees.iter().enumerate() {
        let norm = if hi > lo {
            (d - lo) as f64 / (hi - lo) as f64
        } else {
            0.0
        };
        writeln!(w, "{},{d},{norm:.6}", lg.map.original(i))?;
    }
    w.flush()?;

    let radial = radial_scores(&last);
    let max = radial.iter().cloned().fold(0.0, f64::max);
    println!(
        "wrote initial.csv, final.csv, degrees.csv for {} vertices (max radius {max:.3})",
        g.n()
    );
    Ok(())
}
