//! Force-directed refinement of a spectral layout.
//!
//! Each iteration adds spring attraction along edges and repulsion of the
//! endpoints of crossing edge pairs away from their common midpoint, then
//! re-centers and rescales the configuration:
//!
//! ```text
//! Q       = P + damping * (F_spring(P) + F_cross(P))
//! P_next  = (Q - mean(Q)) / (rms_radius(Q - mean(Q)) + eps)
//! ```
//!
//! Every output therefore has zero mean and RMS radius below one. The
//! distance of a vertex from the origin is its centrality score.

mod crossings;
mod forces;
mod geometry;
mod kdtree;

pub use crossings::{find_crossings_exact, find_crossings_knn, find_crossings_knn_at, CrossingSet};
pub use forces::{intersection_forces, spring_forces, ForceMatrix};
pub use geometry::{orient, segments_cross, Point2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::positions::Positions;
use crate::rng;
use crate::spectral::{spectral_init_with, SpectralOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingMode {
    Exact,
    Knn,
}

impl std::str::FromStr for CrossingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CrossingMode::Exact),
            "knn" => Ok(CrossingMode::Knn),
            other => Err(Error::InvalidParameter(format!(
                "unknown crossing mode {other:?}"
            ))),
        }
    }
}

/// Parameters of the layout iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutConfig {
    /// Embedding dimension.
    pub dim: usize,
    /// Spring stiffness.
    pub k_attr: f64,
    /// Crossing repulsion strength.
    pub k_inter: f64,
    /// Preferred edge length.
    pub l_min: f64,
    /// Regularizer in distances, repulsion denominators and normalization.
    pub eps: f64,
    /// Number of force steps.
    pub iterations: usize,
    /// Candidate neighbors per edge midpoint in `knn` mode.
    pub knn_k: usize,
    /// Midpoints considered per iteration; `None` means all.
    pub midpoint_sample_cap: Option<usize>,
    /// Multiplier on the total force.
    pub damping: f64,
    pub seed: u64,
    pub crossing_mode: CrossingMode,
    /// Coordinates used for crossing tests when `dim > 2`.
    pub projection_plane: (usize, usize),
    /// Scale spectral eigenvectors by `1 / sqrt(lambda)` before normalization.
    pub scale_by_inv_sqrt_lambda: bool,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            k_attr: 0.05,
            k_inter: 0.1,
            l_min: 0.1,
            eps: 1e-6,
            iterations: 100,
            knn_k: 15,
            midpoint_sample_cap: Some(50_000),
            damping: 1.0,
            seed: 0,
            crossing_mode: CrossingMode::Knn,
            projection_plane: (0, 1),
            scale_by_inv_sqrt_lambda: false,
        }
    }
}

impl LayoutConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("k_attr", self.k_attr),
            ("k_inter", self.k_inter),
            ("l_min", self.l_min),
            ("eps", self.eps),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if self.dim < 2 {
            return Err(Error::InvalidParameter(
                "embedding dimension must be >= 2".into(),
            ));
        }
        if self.knn_k < 1 {
            return Err(Error::InvalidParameter("knn_k must be >= 1".into()));
        }
        if self.midpoint_sample_cap == Some(0) {
            return Err(Error::InvalidParameter(
                "midpoint_sample_cap must be >= 1".into(),
            ));
        }
        let (a, b) = self.projection_plane;
        if a == b || a >= self.dim || b >= self.dim {
            return Err(Error::InvalidParameter(format!(
                "projection plane ({a}, {b}) invalid for dimension {}",
                self.dim
            )));
        }
        Ok(())
    }
}

/// Crossings of `p` according to `cfg.crossing_mode`, sampling stream `iteration`.
pub fn find_crossings(
    p: &Positions,
    g: &Graph,
    cfg: &LayoutConfig,
    iteration: usize,
) -> CrossingSet {
    match cfg.crossing_mode {
        CrossingMode::Exact => find_crossings_exact(p, g, cfg),
        CrossingMode::Knn => find_crossings_knn_at(p, g, cfg, iteration),
    }
}

/// Center on the mean and divide by `sigma + eps`, `sigma` the RMS distance to the mean.
pub fn normalize(p: &Positions, eps: f64) -> Positions {
    let mu = p.mean();
    let dim = p.dim();
    let mut out = p.clone();
    let mut ss = 0.0;
    for i in 0..p.n() {
        for (x, m) in out.point_mut(i).iter_mut().zip(&mu) {
            *x -= m;
            ss += *x * *x;
        }
    }
    let sigma = if p.n() > 0 {
        (ss / p.n() as f64).sqrt()
    } else {
        0.0
    };
    let scale = 1.0 / (sigma + eps);
    out.as_mut_slice().iter_mut().for_each(|x| *x *= scale);
    debug_assert_eq!(out.dim(), dim);
    out
}

/// Diagnostics of one force step, measured on the step's input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepStats {
    pub iteration: usize,
    pub crossings: usize,
    pub energy: f64,
}

/// One force step followed by normalization.
pub fn step(p: &Positions, g: &Graph, cfg: &LayoutConfig) -> Result<Positions> {
    step_at(p, g, cfg, 0).map(|(next, _)| next)
}

/// [`step`] for iteration `iteration`, which selects the midpoint sampling stream.
pub fn step_at(
    p: &Positions,
    g: &Graph,
    cfg: &LayoutConfig,
    iteration: usize,
) -> Result<(Positions, StepStats)> {
    advance(p, g, cfg, iteration, true)
}

/// One step; the energy in the returned stats is only computed on request
/// (NaN otherwise).
fn advance(
    p: &Positions,
    g: &Graph,
    cfg: &LayoutConfig,
    iteration: usize,
    with_energy: bool,
) -> Result<(Positions, StepStats)> {
    let cs = find_crossings(p, g, cfg, iteration);
    let stats = StepStats {
        iteration,
        crossings: cs.len(),
        energy: if with_energy {
            energy_with(p, g, &cs, cfg)
        } else {
            f64::NAN
        },
    };
    let mut total = spring_forces(p, g, cfg);
    total.add(&intersection_forces(p, g, &cs, cfg));
    let mut moved = p.clone();
    moved
        .as_mut_slice()
        .iter_mut()
        .zip(total.as_slice())
        .for_each(|(x, f)| *x += cfg.damping * f);
    if let Some(vertex) = moved.first_non_finite() {
        return Err(Error::NonFinite { vertex, iteration });
    }
    Ok((normalize(&moved, cfg.eps), stats))
}

/// Result of [`embed_traced`].
#[derive(Debug, Clone)]
pub struct Embedding {
    /// Normalized spectral layout the iteration started from.
    pub initial: Positions,
    pub positions: Positions,
    pub trace: Vec<StepStats>,
}

/// Spectral initialization, one normalization, then `cfg.iterations` steps.
pub fn embed(g: &Graph, cfg: &LayoutConfig) -> Result<Positions> {
    let init = laplacian_layout(g, cfg)?;
    iterate(g, cfg, init, false).map(|e| e.positions)
}

pub fn embed_traced(g: &Graph, cfg: &LayoutConfig) -> Result<Embedding> {
    let init = laplacian_layout(g, cfg)?;
    embed_from(g, cfg, init)
}

/// Normalized spectral layout without force refinement.
pub fn laplacian_layout(g: &Graph, cfg: &LayoutConfig) -> Result<Positions> {
    cfg.validate()?;
    let opts = SpectralOptions {
        scale_by_inv_sqrt_lambda: cfg.scale_by_inv_sqrt_lambda,
        seed: rng::derive_seed(cfg.seed, "spectral", 0),
        ..Default::default()
    };
    let init = spectral_init_with(g, cfg.dim, &opts)?;
    Ok(normalize(&init, cfg.eps))
}

/// Run the force iteration from a given starting layout (used as is),
/// recording crossings and energy per step.
pub fn embed_from(g: &Graph, cfg: &LayoutConfig, initial: Positions) -> Result<Embedding> {
    iterate(g, cfg, initial, true)
}

fn iterate(
    g: &Graph,
    cfg: &LayoutConfig,
    initial: Positions,
    with_energy: bool,
) -> Result<Embedding> {
    cfg.validate()?;
    if initial.dim() != cfg.dim || initial.n() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "initial layout is {}x{}, expected {}x{}",
            initial.dim(),
            initial.n(),
            cfg.dim,
            g.n()
        )));
    }
    let mut p = initial.clone();
    let mut trace = Vec::with_capacity(cfg.iterations);
    for t in 0..cfg.iterations {
        let (next, stats) = advance(&p, g, cfg, t, with_energy)?;
        if with_energy {
            log::debug!(
                "iteration {t}: {} crossings, energy {:.6e}",
                stats.crossings,
                stats.energy
            );
        } else {
            log::debug!("iteration {t}: {} crossings", stats.crossings);
        }
        trace.push(stats);
        p = next;
    }
    Ok(Embedding {
        initial,
        positions: p,
        trace,
    })
}

/// Euclidean norm of each vertex position.
pub fn radial_scores(p: &Positions) -> Vec<f64> {
    (0..p.n())
        .map(|i| p.point(i).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect()
}

/// Spring energy plus crossing congestion energy of `p`:
/// `k_attr/2 sum_edges (||p_i - p_j|| - l_min)^2 + sum_crossings sum_endpoints k_inter / (||p_i - m||^2 + eps)`.
pub fn energy(p: &Positions, g: &Graph, cfg: &LayoutConfig) -> f64 {
    let cs = find_crossings(p, g, cfg, 0);
    energy_with(p, g, &cs, cfg)
}

pub fn energy_with(p: &Positions, g: &Graph, cs: &CrossingSet, cfg: &LayoutConfig) -> f64 {
    let spring: f64 = g
        .edges()
        .iter()
        .map(|&(i, j)| {
            let d = dist(p.point(i), p.point(j));
            (d - cfg.l_min).powi(2)
        })
        .sum::<f64>()
        * cfg.k_attr
        / 2.0;
    let mut congestion = 0.0;
    for c in 0..cs.len() {
        let m = cs.midpoint(c);
        for i in cs.endpoints(g, c) {
            congestion += cfg.k_inter / (dist(p.point(i), m).powi(2) + cfg.eps);
        }
    }
    spring + congestion
}

/// Number of crossing pairs acting on each vertex.
pub fn intersection_load(p: &Positions, g: &Graph, cfg: &LayoutConfig) -> Vec<f64> {
    let cs = find_crossings(p, g, cfg, 0);
    let mut load = vec![0.0; g.n()];
    for c in 0..cs.len() {
        for i in cs.endpoints(g, c) {
            load[i] += 1.0;
        }
    }
    load
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}
