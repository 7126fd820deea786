//! Benchmark pipeline: obtain a graph, embed it, and correlate the radial
//! score with every centrality measure.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::centrality::{compute, Measure};
use crate::error::{Error, Result, StageExt};
use crate::graphs::{
    gen_balanced_tree, gen_erdos_renyi, gen_grid, gen_powerlaw_cluster, gen_watts_strogatz,
    largest_connected_component, load_edge_list_file, subsample_vertices, Graph, VertexMap,
};
use crate::layout::{embed, laplacian_layout, radial_scores, LayoutConfig};
use crate::positions::Positions;
use crate::stats::{correlation_report, BootstrapSettings, CorrelationReport};

/// Generator family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Er { n: usize, p: f64 },
    Ws { n: usize, k: usize, beta: f64 },
    Powerlaw { n: usize, m: usize, p: f64 },
    Tree { r: usize, h: usize },
    Grid { rows: usize, cols: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Er { .. } => "er",
            Family::Ws { .. } => "ws",
            Family::Powerlaw { .. } => "powerlaw",
            Family::Tree { .. } => "tree",
            Family::Grid { .. } => "grid",
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            Family::Er { n, p } => gen_erdos_renyi(n, p, seed),
            Family::Ws { n, k, beta } => gen_watts_strogatz(n, k, beta, seed),
            Family::Powerlaw { n, m, p } => gen_powerlaw_cluster(n, m, p, seed),
            Family::Tree { r, h } => gen_balanced_tree(r, h),
            Family::Grid { rows, cols } => gen_grid(rows, cols),
        }
    }

    /// Human-readable parameter list, e.g. `er n=1000 p=0.025`.
    pub fn describe(&self) -> String {
        match self {
            Family::Er { n, p } => format!("er n={n} p={p}"),
            Family::Ws { n, k, beta } => format!("ws n={n} k={k} beta={beta}"),
            Family::Powerlaw { n, m, p } => format!("powerlaw n={n} m={m} p={p}"),
            Family::Tree { r, h } => format!("tree r={r} h={h}"),
            Family::Grid { rows, cols } => format!("grid rows={rows} cols={cols}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphSource {
    Generated { family: Family, seed: u64 },
    EdgeList { path: PathBuf },
}

impl GraphSource {
    pub fn describe(&self) -> String {
        match self {
            GraphSource::Generated { family, seed } => format!("{} seed={seed}", family.describe()),
            GraphSource::EdgeList { path } => format!("edge list {}", path.display()),
        }
    }
}

/// Benchmark substrate: the largest connected component of the source graph,
/// optionally after vertex subsampling.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Compact id to original id (file label or generator index).
    pub map: VertexMap,
    pub source_vertices: usize,
    pub source_edges: usize,
}

impl LoadedGraph {
    /// Fraction of the source edges that survived.
    pub fn edge_fraction(&self) -> f64 {
        self.graph.edge_count() as f64 / self.source_edges.max(1) as f64
    }
}

/// Load or generate the graph, optionally keep a random `subsample` fraction of
/// its vertices, and restrict to the largest component.
pub fn load_graph(source: &GraphSource, subsample: Option<(f64, u64)>) -> Result<LoadedGraph> {
    let (g, map) = match source {
        GraphSource::Generated { family, seed } => {
            let g = family.generate(*seed).stage("generate")?;
            let n = g.n();
            (g, VertexMap::identity(n))
        }
        GraphSource::EdgeList { path } => load_edge_list_file(path).stage("load")?,
    };
    let (source_vertices, source_edges) = (g.n(), g.edge_count());
    let (sub, sub_map) = match subsample {
        Some((fraction, seed)) => subsample_vertices(&g, fraction, seed).stage("subsample")?,
        None => largest_connected_component(&g).stage("largest component")?,
    };
    Ok(LoadedGraph {
        graph: sub,
        map: sub_map.compose(&map),
        source_vertices,
        source_edges,
    })
}

/// What produces the radial scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutKind {
    /// Spectral initialization refined by the force iteration.
    Force,
    /// Normalized spectral initialization only (baseline).
    LaplacianOnly,
}

impl std::str::FromStr for LayoutKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "force" => Ok(LayoutKind::Force),
            "laplacian-only" => Ok(LayoutKind::LaplacianOnly),
            other => Err(Error::InvalidParameter(format!(
                "unknown layout kind {other:?}"
            ))),
        }
    }
}

/// Layout for `kind`.
pub fn layout(g: &Graph, cfg: &LayoutConfig, kind: LayoutKind) -> Result<Positions> {
    match kind {
        LayoutKind::Force => embed(g, cfg).stage("embed"),
        LayoutKind::LaplacianOnly => laplacian_layout(g, cfg).stage("spectral"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityRow {
    pub measure: Measure,
    #[serde(flatten)]
    pub report: CorrelationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTimes {
    pub layout_seconds: f64,
    pub centrality_seconds: f64,
    pub statistics_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityBench {
    pub n: usize,
    pub edges: usize,
    pub layout: LayoutKind,
    pub rows: Vec<CentralityRow>,
    pub runtime: StageTimes,
}

impl CentralityBench {
    pub fn row(&self, m: Measure) -> Option<&CorrelationReport> {
        self.rows.iter().find(|r| r.measure == m).map(|r| &r.report)
    }

    /// One line per measure: `measure,rho,ci_low,ci_high,p_value,n,bootstrap_b,gamma,seed,skipped_resamples`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "measure,rho,ci_low,ci_high,p_value,n,bootstrap_b,gamma,seed,skipped_resamples\n",
        );
        for row in &self.rows {
            let r = &row.report;
            s.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6e},{},{},{},{},{}\n",
                row.measure.name(),
                r.rho,
                r.ci_low,
                r.ci_high,
                r.p_value,
                r.n,
                r.bootstrap_b,
                r.gamma,
                r.seed,
                r.skipped_resamples
            ));
        }
        s
    }
}

/// Correlate precomputed radial scores with every measure.
pub fn correlate_all(
    g: &Graph,
    radial: &[f64],
    bootstrap: &BootstrapSettings,
) -> Result<(Vec<CentralityRow>, f64, f64)> {
    let start = Instant::now();
    let mut scores = Vec::with_capacity(Measure::ALL.len());
    for m in Measure::ALL {
        scores.push(compute(g, m).stage(m.name())?);
    }
    let centrality_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let mut rows = Vec::with_capacity(scores.len());
    for c in scores {
        let report = correlation_report(radial, &c.scores, bootstrap).stage("statistics")?;
        rows.push(CentralityRow {
            measure: c.measure,
            report,
        });
    }
    Ok((rows, centrality_seconds, start.elapsed().as_secs_f64()))
}

/// Embed `g` and report Spearman's rho between radial score and each measure.
pub fn bench_centrality(
    g: &Graph,
    cfg: &LayoutConfig,
    kind: LayoutKind,
    bootstrap: &BootstrapSettings,
) -> Result<CentralityBench> {
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "benchmark needs a connected graph".into(),
        ));
    }
    let start = Instant::now();
    let p = layout(g, cfg, kind)?;
    let layout_seconds = start.elapsed().as_secs_f64();
    let (rows, centrality_seconds, statistics_seconds) =
        correlate_all(g, &radial_scores(&p), bootstrap)?;
    Ok(CentralityBench {
        n: g.n(),
        edges: g.edge_count(),
        layout: kind,
        rows,
        runtime: StageTimes {
            layout_seconds,
            centrality_seconds,
            statistics_seconds,
        },
    })
}
