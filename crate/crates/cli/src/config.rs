//! Command-line arguments, the optional JSON config file, and their merge into
//! one resolved [`RunConfig`].

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use radial_embed::bench::{Family, GraphSource, LayoutKind};
use radial_embed::influence::CascadeConfig;
use radial_embed::layout::{CrossingMode, LayoutConfig};
use radial_embed::rng::derive_seed;
use radial_embed::stats::BootstrapSettings;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Er,
    Ws,
    Powerlaw,
    Tree,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingArg {
    Exact,
    Knn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayoutArg {
    Force,
    LaplacianOnly,
}

/// Generator parameters; unset values fall back to per-family defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    /// Vertex count (er, ws, powerlaw)
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (er) or triangle probability (powerlaw)
    #[arg(long)]
    pub p: Option<f64>,
    /// Ring degree (ws)
    #[arg(long)]
    pub k: Option<usize>,
    /// Rewiring probability (ws)
    #[arg(long)]
    pub beta: Option<f64>,
    /// Edges per new vertex (powerlaw)
    #[arg(long)]
    pub m: Option<usize>,
    /// Branching factor (tree)
    #[arg(long)]
    pub r: Option<usize>,
    /// Height (tree)
    #[arg(long)]
    pub h: Option<usize>,
    /// Grid rows
    #[arg(long)]
    pub rows: Option<usize>,
    /// Grid columns
    #[arg(long)]
    pub cols: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// SNAP-style edge list to load
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Generate the graph from this family instead of loading it
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    pub params: FamilyArgs,
    /// Keep this fraction of vertices (uniformly sampled) before taking the largest component
    #[arg(long, value_name = "FRACTION")]
    pub subsample: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LayoutArgs {
    /// Embedding dimension [default: 2]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Force iterations [default: 100]
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Spring constant [default: 0.05]
    #[arg(long)]
    pub k_attr: Option<f64>,
    /// Crossing repulsion constant [default: 0.1]
    #[arg(long)]
    pub k_inter: Option<f64>,
    /// Spring rest length [default: 0.1]
    #[arg(long)]
    pub l_min: Option<f64>,
    /// Normalization guard [default: 1e-6]
    #[arg(long)]
    pub eps: Option<f64>,
    /// Neighbors per midpoint in knn mode [default: 15]
    #[arg(long)]
    pub knn_k: Option<usize>,
    /// Crossing detection [default: knn]
    #[arg(long, value_enum)]
    pub crossing_mode: Option<CrossingArg>,
    /// Midpoints sampled per iteration in knn mode; 0 disables the cap
    #[arg(long)]
    pub midpoint_cap: Option<usize>,
    /// Step damping [default: 1]
    #[arg(long)]
    pub damping: Option<f64>,
    /// Coordinate pair used for crossing tests, e.g. 0,1
    #[arg(long, value_delimiter = ',', value_name = "A,B")]
    pub projection_plane: Option<Vec<usize>>,
    /// Scale spectral eigenvectors by 1/sqrt(lambda)
    #[arg(long)]
    pub scale_by_inv_sqrt_lambda: bool,
    /// Radial scores from the force layout or from the spectral initialization alone
    #[arg(long, value_enum)]
    pub layout: Option<LayoutArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct StatsArgs {
    /// Bootstrap resamples for confidence intervals
    #[arg(long)]
    pub bootstrap_b: Option<usize>,
    /// Confidence level
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct InfluenceArgs {
    /// Edge activation probability
    #[arg(long)]
    pub p_ic: Option<f64>,
    /// Seed set size
    #[arg(long)]
    pub k_seeds: Option<usize>,
    /// Simulations per influence estimate
    #[arg(long)]
    pub n_sims: Option<usize>,
    /// Independent benchmark repeats
    #[arg(long)]
    pub repeats: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Global seed; every random stream is derived from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// JSON file with flat dotted keys (e.g. "layout.dim"); flags take precedence
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// Every key accepted in a config file.
pub const CONFIG_KEYS: &[&str] = &[
    "seed",
    "out",
    "input.path",
    "input.family",
    "input.n",
    "input.p",
    "input.k",
    "input.beta",
    "input.m",
    "input.r",
    "input.h",
    "input.rows",
    "input.cols",
    "input.subsample",
    "layout.dim",
    "layout.iterations",
    "layout.k-attr",
    "layout.k-inter",
    "layout.l-min",
    "layout.eps",
    "layout.knn-k",
    "layout.crossing-mode",
    "layout.midpoint-cap",
    "layout.damping",
    "layout.projection-plane",
    "layout.scale-by-inv-sqrt-lambda",
    "layout.kind",
    "stats.bootstrap-b",
    "stats.gamma",
    "influence.p-ic",
    "influence.k-seeds",
    "influence.n-sims",
    "influence.repeats",
];

/// Values read from a config file.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: Map<String, Value>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
        let Value::Object(values) = value else {
            return Err(CliError::Usage("config must be a JSON object".into()));
        };
        let known: BTreeSet<&str> = CONFIG_KEYS.iter().copied().collect();
        if let Some(bad) = values.keys().find(|k| !known.contains(k.as_str())) {
            return Err(CliError::Usage(format!("unknown config key {bad:?}")));
        }
        Ok(Self { values })
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key:?}: {e}"))),
        }
    }

    /// Command-line value if given, else the file value.
    fn pick<T: DeserializeOwned>(&self, cli: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match cli {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputConfig {
    pub source: GraphSource,
    pub subsample: Option<f64>,
    /// Seed of the vertex subsample, present when subsampling.
    pub subsample_seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfluenceSettings {
    #[serde(flatten)]
    pub cascade: CascadeConfig,
    pub repeats: usize,
}

/// Fully resolved run configuration; serialized verbatim as the config echo.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub input: InputConfig,
    pub layout: LayoutConfig,
    pub layout_kind: LayoutKind,
    pub stats: BootstrapSettings,
    pub influence: InfluenceSettings,
}

impl RunConfig {
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Comment lines that open every CSV output.
    pub fn header(&self) -> Vec<String> {
        vec![
            format!("radial-embed {} {}", self.version, self.command),
            format!("config: {}", self.echo()),
        ]
    }
}

pub const DEFAULT_REPEATS: usize = 50;

/// Family with unset parameters filled from defaults. Parameters that do not
/// belong to the family are rejected.
pub fn resolve_family(
    name: FamilyName,
    args: &FamilyArgs,
    file: &FileConfig,
) -> Result<Family, CliError> {
    let n = file.pick(args.n, "input.n")?;
    let p = file.pick(args.p, "input.p")?;
    let k = file.pick(args.k, "input.k")?;
    let beta = file.pick(args.beta, "input.beta")?;
    let m = file.pick(args.m, "input.m")?;
    let r = file.pick(args.r, "input.r")?;
    let h = file.pick(args.h, "input.h")?;
    let rows = file.pick(args.rows, "input.rows")?;
    let cols = file.pick(args.cols, "input.cols")?;

    let allowed: &[&str] = match name {
        FamilyName::Er => &["n", "p"],
        FamilyName::Ws => &["n", "k", "beta"],
        FamilyName::Powerlaw => &["n", "m", "p"],
        FamilyName::Tree => &["r", "h"],
        FamilyName::Grid => &["rows", "cols"],
    };
    let given = [
        ("n", args.n.is_some()),
        ("p", args.p.is_some()),
        ("k", args.k.is_some()),
        ("beta", args.beta.is_some()),
        ("m", args.m.is_some()),
        ("r", args.r.is_some()),
        ("h", args.h.is_some()),
        ("rows", args.rows.is_some()),
        ("cols", args.cols.is_some()),
    ];
    if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !allowed.contains(f)) {
        return Err(CliError::Usage(format!(
            "--{flag} does not apply to family {}",
            name.to_possible_value().unwrap().get_name()
        )));
    }

    Ok(match name {
        FamilyName::Er => Family::Er {
            n: n.unwrap_or(1000),
            p: p.unwrap_or(0.025),
        },
        FamilyName::Ws => Family::Ws {
            n: n.unwrap_or(1000),
            k: k.unwrap_or(10),
            beta: beta.unwrap_or(0.1),
        },
        FamilyName::Powerlaw => Family::Powerlaw {
            n: n.unwrap_or(1000),
            m: m.unwrap_or(2),
            p: p.unwrap_or(0.3),
        },
        FamilyName::Tree => Family::Tree {
            r: r.unwrap_or(3),
            h: h.unwrap_or(8),
        },
        FamilyName::Grid => Family::Grid {
            rows: rows.unwrap_or(30),
            cols: cols.unwrap_or(40),
        },
    })
}

pub fn resolve_seed(common: &CommonArgs, file: &FileConfig) -> Result<u64, CliError> {
    Ok(file.pick(common.seed, "seed")?.unwrap_or(0))
}

/// Seed of the generated graph; shared by `generate` and the pipeline verbs so
/// that a generated file and an inline `--family` run see the same graph.
pub fn graph_seed(seed: u64) -> u64 {
    derive_seed(seed, "graph", 0)
}

fn resolve_source(
    input: &InputArgs,
    file: &FileConfig,
    seed: u64,
) -> Result<GraphSource, CliError> {
    // sources given on the command line replace any source from the file
    let (path, family) = if input.input.is_some() || input.family.is_some() {
        (input.input.clone(), input.family)
    } else {
        (
            file.get::<PathBuf>("input.path")?,
            file.get::<FamilyName>("input.family")?,
        )
    };
    match (path, family) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either --input or --family, not both".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "an input is required: --input PATH or --family NAME".into(),
        )),
        (Some(path), None) => {
            let p = &input.params;
            let stray = [
                p.n.is_some(),
                p.p.is_some(),
                p.k.is_some(),
                p.beta.is_some(),
                p.m.is_some(),
            ]
            .into_iter()
            .chain([
                p.r.is_some(),
                p.h.is_some(),
                p.rows.is_some(),
                p.cols.is_some(),
            ])
            .any(|set| set);
            if stray {
                return Err(CliError::Usage("generator parameters need --family".into()));
            }
            Ok(GraphSource::EdgeList { path })
        }
        (None, Some(name)) => Ok(GraphSource::Generated {
            family: resolve_family(name, &input.params, file)?,
            seed: graph_seed(seed),
        }),
    }
}

fn resolve_layout(
    args: &LayoutArgs,
    file: &FileConfig,
    seed: u64,
) -> Result<(LayoutConfig, LayoutKind), CliError> {
    let d = LayoutConfig::default();
    let crossing_mode = match file.pick(args.crossing_mode, "layout.crossing-mode")? {
        Some(CrossingArg::Exact) => CrossingMode::Exact,
        Some(CrossingArg::Knn) => CrossingMode::Knn,
        None => d.crossing_mode,
    };
    let midpoint_sample_cap = match file.pick(args.midpoint_cap, "layout.midpoint-cap")? {
        Some(0) => None,
        Some(c) => Some(c),
        None => d.midpoint_sample_cap,
    };
    let projection_plane =
        match file.pick(args.projection_plane.clone(), "layout.projection-plane")? {
            Some(v) if v.len() == 2 => (v[0], v[1]),
            Some(v) => {
                return Err(CliError::Usage(format!(
                    "projection plane needs two axes, got {v:?}"
                )))
            }
            None => d.projection_plane,
        };
    let scale = args.scale_by_inv_sqrt_lambda
        || file
            .get::<bool>("layout.scale-by-inv-sqrt-lambda")?
            .unwrap_or(d.scale_by_inv_sqrt_lambda);
    let cfg = LayoutConfig {
        dim: file.pick(args.dim, "layout.dim")?.unwrap_or(d.dim),
        k_attr: file.pick(args.k_attr, "layout.k-attr")?.unwrap_or(d.k_attr),
        k_inter: file
            .pick(args.k_inter, "layout.k-inter")?
            .unwrap_or(d.k_inter),
        l_min: file.pick(args.l_min, "layout.l-min")?.unwrap_or(d.l_min),
        eps: file.pick(args.eps, "layout.eps")?.unwrap_or(d.eps),
        iterations: file
            .pick(args.iterations, "layout.iterations")?
            .unwrap_or(d.iterations),
        knn_k: file.pick(args.knn_k, "layout.knn-k")?.unwrap_or(d.knn_k),
        midpoint_sample_cap,
        damping: file
            .pick(args.damping, "layout.damping")?
            .unwrap_or(d.damping),
        seed: derive_seed(seed, "layout", 0),
        crossing_mode,
        projection_plane,
        scale_by_inv_sqrt_lambda: scale,
    };
    cfg.validate()?;
    let kind = match file.pick(args.layout, "layout.kind")? {
        Some(LayoutArg::LaplacianOnly) => LayoutKind::LaplacianOnly,
        Some(LayoutArg::Force) | None => LayoutKind::Force,
    };
    Ok((cfg, kind))
}

fn resolve_stats(
    args: &StatsArgs,
    file: &FileConfig,
    seed: u64,
) -> Result<BootstrapSettings, CliError> {
    let d = BootstrapSettings::default();
    let s = BootstrapSettings {
        resamples: file
            .pick(args.bootstrap_b, "stats.bootstrap-b")?
            .unwrap_or(d.resamples),
        gamma: file.pick(args.gamma, "stats.gamma")?.unwrap_or(d.gamma),
        seed: derive_seed(seed, "bootstrap", 0),
    };
    if s.resamples < 100 {
        return Err(CliError::Usage(format!(
            "--bootstrap-b must be at least 100, got {}",
            s.resamples
        )));
    }
    if !(s.gamma > 0.0 && s.gamma < 1.0) {
        return Err(CliError::Usage(format!(
            "--gamma must lie in (0, 1), got {}",
            s.gamma
        )));
    }
    Ok(s)
}

fn resolve_influence(
    args: &InfluenceArgs,
    file: &FileConfig,
    seed: u64,
) -> Result<InfluenceSettings, CliError> {
    let d = CascadeConfig::default();
    let cascade = CascadeConfig {
        p_ic: file.pick(args.p_ic, "influence.p-ic")?.unwrap_or(d.p_ic),
        k_seeds: file
            .pick(args.k_seeds, "influence.k-seeds")?
            .unwrap_or(d.k_seeds),
        n_sims: file
            .pick(args.n_sims, "influence.n-sims")?
            .unwrap_or(d.n_sims),
        seed: derive_seed(seed, "cascade", 0),
    };
    let repeats = file
        .pick(args.repeats, "influence.repeats")?
        .unwrap_or(DEFAULT_REPEATS);
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be positive".into()));
    }
    Ok(InfluenceSettings { cascade, repeats })
}

/// Arguments shared by the pipeline verbs.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub layout: LayoutArgs,
    #[command(flatten)]
    pub stats: StatsArgs,
    #[command(flatten)]
    pub influence: InfluenceArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Output directory (created if missing)
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn resolve(&self, command: &'static str) -> Result<(RunConfig, PathBuf), CliError> {
        let file = FileConfig::load(self.common.config.as_deref())?;
        let seed = resolve_seed(&self.common, &file)?;
        let source = resolve_source(&self.input, &file, seed)?;
        let subsample = file.pick(self.input.subsample, "input.subsample")?;
        if let Some(f) = subsample {
            if !(f > 0.0 && f <= 1.0) {
                return Err(CliError::Usage(format!(
                    "--subsample must lie in (0, 1], got {f}"
                )));
            }
        }
        let (layout, layout_kind) = resolve_layout(&self.layout, &file, seed)?;
        let out = file
            .pick(self.out.clone(), "out")?
            .ok_or_else(|| CliError::Usage("--out DIR is required".into()))?;
        let cfg = RunConfig {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            input: InputConfig {
                source,
                subsample,
                subsample_seed: subsample.map(|_| derive_seed(seed, "subsample", 0)),
            },
            layout,
            layout_kind,
            stats: resolve_stats(&self.stats, &file, seed)?,
            influence: resolve_influence(&self.influence, &file, seed)?,
        };
        Ok((cfg, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(family: FamilyName) -> RunArgs {
        RunArgs {
            input: InputArgs {
                family: Some(family),
                ..Default::default()
            },
            out: Some("out".into()),
            ..Default::default()
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(matches!(
            FileConfig::parse(r#"{"layout.dimm": 3}"#),
            Err(CliError::Usage(_))
        ));
        assert!(FileConfig::parse(r#"{"layout.dim": 3, "seed": 4}"#).is_ok());
        assert!(FileConfig::parse("[1]").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let file = FileConfig::parse(r#"{"layout.dim": 4, "layout.k-attr": 0.2}"#).unwrap();
        let args = LayoutArgs {
            dim: Some(3),
            ..Default::default()
        };
        let (cfg, kind) = resolve_layout(&args, &file, 0).unwrap();
        assert_eq!(cfg.dim, 3);
        assert_eq!(cfg.k_attr, 0.2);
        assert_eq!(cfg.l_min, LayoutConfig::default().l_min);
        assert_eq!(kind, LayoutKind::Force);
    }

    #[test]
    fn wrong_type_in_file_is_usage_error() {
        let file = FileConfig::parse(r#"{"layout.dim": "four"}"#).unwrap();
        assert!(matches!(
            resolve_layout(&LayoutArgs::default(), &file, 0),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn family_defaults_and_stray_parameters() {
        let file = FileConfig::default();
        let f = resolve_family(FamilyName::Ws, &FamilyArgs::default(), &file).unwrap();
        assert_eq!(
            f,
            Family::Ws {
                n: 1000,
                k: 10,
                beta: 0.1
            }
        );
        let args = FamilyArgs {
            rows: Some(3),
            ..Default::default()
        };
        assert!(resolve_family(FamilyName::Er, &args, &file).is_err());
    }

    #[test]
    fn exactly_one_input_source() {
        let mut args = run_args(FamilyName::Er);
        args.input.input = Some("g.txt".into());
        assert!(matches!(args.resolve("embed"), Err(CliError::Usage(_))));
        args.input = InputArgs::default();
        assert!(matches!(args.resolve("embed"), Err(CliError::Usage(_))));
    }

    #[test]
    fn seeds_derive_from_global_seed() {
        let mut args = run_args(FamilyName::Grid);
        args.common.seed = Some(5);
        let (a, _) = args.resolve("embed").unwrap();
        let (b, _) = args.resolve("bench-centrality").unwrap();
        assert_eq!(a.layout.seed, b.layout.seed);
        assert_eq!(a.layout.seed, derive_seed(5, "layout", 0));
        assert_ne!(a.layout.seed, a.stats.seed);
        args.common.seed = Some(6);
        let (c, _) = args.resolve("embed").unwrap();
        assert_ne!(a.layout.seed, c.layout.seed);
    }

    #[test]
    fn midpoint_cap_zero_means_uncapped() {
        let args = LayoutArgs {
            midpoint_cap: Some(0),
            ..Default::default()
        };
        let (cfg, _) = resolve_layout(&args, &FileConfig::default(), 0).unwrap();
        assert_eq!(cfg.midpoint_sample_cap, None);
    }
}
