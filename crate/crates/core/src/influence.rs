//! Independent Cascade simulation and seed selection.
//!
//! Greedy selection evaluates every candidate with a fixed Monte-Carlo budget
//! per round (no lazy evaluation), so it spends
//! `n_sims * (n + (n - 1) + ... + (n - k + 1))` simulations. Embedding
//! selection takes the `k` vertices farthest from the origin of the layout and
//! spends none.

use std::collections::VecDeque;
use std::time::Instant;

use rand::{Rng, RngExt};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::layout::{embed, radial_scores, LayoutConfig};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeConfig {
    /// Activation probability of each edge.
    pub p_ic: f64,
    pub k_seeds: usize,
    /// Simulations per influence estimate.
    pub n_sims: usize,
    pub seed: u64,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        Self {
            p_ic: 0.1,
            k_seeds: 10,
            n_sims: 200,
            seed: 0,
        }
    }
}

impl CascadeConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_ic) {
            return Err(Error::InvalidParameter(format!(
                "p_ic {} outside [0, 1]",
                self.p_ic
            )));
        }
        if self.k_seeds == 0 || self.k_seeds > n {
            return Err(Error::InvalidParameter(format!(
                "k_seeds {} must be in 1..={n}",
                self.k_seeds
            )));
        }
        if self.n_sims == 0 {
            return Err(Error::InvalidParameter("n_sims must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeOutcome {
    pub mean_influence: f64,
    /// Sample standard deviation; 0 for a single simulation.
    pub std_influence: f64,
    pub total_simulations: usize,
    /// Seconds.
    pub wall_time: f64,
}

/// One cascade: returns the number of active vertices when it dies out.
pub fn ic_simulate<R: Rng + ?Sized>(g: &Graph, seeds: &[usize], p_ic: f64, rng: &mut R) -> usize {
    let mut active = vec![false; g.n()];
    let mut frontier = VecDeque::new();
    for &s in seeds {
        if !active[s] {
            active[s] = true;
            frontier.push_back(s);
        }
    }
    let mut count = frontier.len();
    while let Some(u) = frontier.pop_front() {
        for &v in g.neighbors(u) {
            if !active[v] && rng.random_bool(p_ic) {
                active[v] = true;
                count += 1;
                frontier.push_back(v);
            }
        }
    }
    count
}

fn check_seeds(g: &Graph, seeds: &[usize]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("seed set is empty".into()));
    }
    if let Some(&s) = seeds.iter().find(|&&s| s >= g.n()) {
        return Err(Error::InvalidParameter(format!(
            "seed vertex {s} out of range"
        )));
    }
    Ok(())
}

/// Counts of `n_sims` cascades; run `r` draws from stream `(base, "ic", r)`.
fn simulate_counts(g: &Graph, seeds: &[usize], p_ic: f64, n_sims: usize, base: u64) -> Vec<usize> {
    (0..n_sims)
        .into_par_iter()
        .map(|r| ic_simulate(g, seeds, p_ic, &mut rng::stream(base, "ic", r as u64)))
        .collect()
}

fn mean_std(counts: &[usize]) -> (f64, f64) {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    if counts.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Mean and sample standard deviation of the cascade size over `cfg.n_sims` runs.
pub fn estimate_influence(
    g: &Graph,
    seeds: &[usize],
    cfg: &CascadeConfig,
) -> Result<CascadeOutcome> {
    check_seeds(g, seeds)?;
    if !(0.0..=1.0).contains(&cfg.p_ic) || cfg.n_sims == 0 {
        return Err(Error::InvalidParameter(
            "invalid cascade configuration".into(),
        ));
    }
    let start = Instant::now();
    let counts = simulate_counts(g, seeds, cfg.p_ic, cfg.n_sims, cfg.seed);
    let (mean_influence, std_influence) = mean_std(&counts);
    Ok(CascadeOutcome {
        mean_influence,
        std_influence,
        total_simulations: cfg.n_sims,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSelection {
    pub seeds: Vec<usize>,
    pub simulations: usize,
}

/// Greedy hill climbing on Monte-Carlo spread estimates.
///
/// All candidates of round `j` share the simulation streams derived from
/// `(cfg.seed, "greedy-round", j)`. Ties go to the smallest vertex id.
pub fn greedy_seed_selection(g: &Graph, cfg: &CascadeConfig) -> Result<SeedSelection> {
    cfg.validate(g.n())?;
    let mut seeds: Vec<usize> = Vec::with_capacity(cfg.k_seeds);
    let mut chosen = vec![false; g.n()];
    let mut simulations = 0;
    for round in 0..cfg.k_seeds {
        let base = rng::derive_seed(cfg.seed, "greedy-round", round as u64);
        let candidates: Vec<usize> = (0..g.n()).filter(|&v| !chosen[v]).collect();
        let totals: Vec<usize> = candidates
            .iter()
            .map(|&v| {
                let mut trial = seeds.clone();
                trial.push(v);
                simulate_counts(g, &trial, cfg.p_ic, cfg.n_sims, base)
                    .iter()
                    .sum()
            })
            .collect();
        simulations += candidates.len() * cfg.n_sims;
        let mut best = 0;
        for (i, &t) in totals.iter().enumerate() {
            if t > totals[best] {
                best = i;
            }
        }
        let v = candidates[best];
        chosen[v] = true;
        seeds.push(v);
    }
    Ok(SeedSelection { seeds, simulations })
}

/// Indices of the `k` largest scores, ties to the smallest index.
pub fn top_k(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    order
}

/// The `k` vertices with the largest radial score after embedding.
pub fn embedding_seed_selection(
    g: &Graph,
    layout_cfg: &LayoutConfig,
    k: usize,
) -> Result<Vec<usize>> {
    if k == 0 || k > g.n() {
        return Err(Error::InvalidParameter(format!(
            "k {k} must be in 1..={}",
            g.n()
        )));
    }
    let p = embed(g, layout_cfg)?;
    Ok(top_k(&radial_scores(&p), k))
}

/// Aggregate of one selection method over all benchmark repeats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    /// Pooled over every evaluation simulation of every repeat.
    pub influence_mean: f64,
    pub influence_std: f64,
    /// Simulations spent per repeat on selection plus evaluation.
    pub total_simulations: usize,
    pub selection_simulations: usize,
    pub evaluation_simulations: usize,
    /// Selection plus evaluation, seconds, mean over repeats.
    pub wall_time_seconds: f64,
    pub wall_time_std: f64,
    /// Seeds chosen in each repeat.
    pub seeds: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceBenchmark {
    pub repeats: usize,
    pub n: usize,
    pub edges: usize,
    pub greedy: MethodReport,
    pub embedding: MethodReport,
}

impl InfluenceBenchmark {
    /// Greedy wall time over embedding wall time.
    pub fn speedup(&self) -> f64 {
        self.greedy.wall_time_seconds / self.embedding.wall_time_seconds
    }
}

#[derive(Default)]
struct MethodRuns {
    counts: Vec<usize>,
    times: Vec<f64>,
    seeds: Vec<Vec<usize>>,
    selection_simulations: usize,
}

impl MethodRuns {
    fn finish(self, n_sims: usize) -> MethodReport {
        let (influence_mean, influence_std) = mean_std(&self.counts);
        let tn = self.times.len() as f64;
        let wall = self.times.iter().sum::<f64>() / tn;
        let wall_std = if self.times.len() > 1 {
            (self.times.iter().map(|t| (t - wall).powi(2)).sum::<f64>() / (tn - 1.0)).sqrt()
        } else {
            0.0
        };
        MethodReport {
            influence_mean,
            influence_std,
            total_simulations: self.selection_simulations + n_sims,
            selection_simulations: self.selection_simulations,
            evaluation_simulations: n_sims,
            wall_time_seconds: wall,
            wall_time_std: wall_std,
            seeds: self.seeds,
        }
    }
}

/// Run greedy and embedding selection `repeats` times on `g` and evaluate each
/// selected set with `n_sims` fresh simulations.
///
/// Repeat `r` uses cascade seed `(cascade_cfg.seed, "repeat", r)`; its
/// evaluation streams derive from `(that seed, "evaluate", method)`.
pub fn benchmark_influence(
    g: &Graph,
    layout_cfg: &LayoutConfig,
    cascade_cfg: &CascadeConfig,
    repeats: usize,
) -> Result<InfluenceBenchmark> {
    cascade_cfg.validate(g.n())?;
    layout_cfg.validate()?;
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be positive".into()));
    }
    let mut greedy = MethodRuns::default();
    let mut embedding = MethodRuns::default();
    for r in 0..repeats {
        let seed = rng::derive_seed(cascade_cfg.seed, "repeat", r as u64);
        let cfg = CascadeConfig {
            seed,
            ..*cascade_cfg
        };

        let start = Instant::now();
        let sel = greedy_seed_selection(g, &cfg)?;
        let counts = simulate_counts(
            g,
            &sel.seeds,
            cfg.p_ic,
            cfg.n_sims,
            rng::derive_seed(seed, "evaluate", 0),
        );
        greedy.times.push(start.elapsed().as_secs_f64());
        greedy.counts.extend(counts);
        greedy.selection_simulations = sel.simulations;
        greedy.seeds.push(sel.seeds);

        let start = Instant::now();
        let chosen = embedding_seed_selection(g, layout_cfg, cfg.k_seeds)?;
        let counts = simulate_counts(
            g,
            &chosen,
            cfg.p_ic,
            cfg.n_sims,
            rng::derive_seed(seed, "evaluate", 1),
        );
        embedding.times.push(start.elapsed().as_secs_f64());
        embedding.counts.extend(counts);
        embedding.seeds.push(chosen);
        log::info!("influence repeat {r} done");
    }
    Ok(InfluenceBenchmark {
        repeats,
        n: g.n(),
        edges: g.edge_count(),
        greedy: greedy.finish(cascade_cfg.n_sims),
        embedding: embedding.finish(cascade_cfg.n_sims),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn trivial_probabilities() {
        let g = path(6);
        let mut r = rng::rng_from_seed(1);
        assert_eq!(ic_simulate(&g, &[2, 4], 0.0, &mut r), 2);
        assert_eq!(ic_simulate(&g, &[2], 1.0, &mut r), 6);
        assert_eq!(ic_simulate(&g, &[2, 2], 0.0, &mut r), 1);
    }

    #[test]
    fn p3_middle_expectation() {
        let g = path(3);
        let cfg = CascadeConfig {
            p_ic: 0.5,
            k_seeds: 1,
            n_sims: 100_000,
            seed: 11,
        };
        let out = estimate_influence(&g, &[1], &cfg).unwrap();
        // count = 1 + Bin(2, 1/2): variance 1/2
        let sigma = (0.5f64 / 100_000.0).sqrt();
        assert!(
            (out.mean_influence - 2.0).abs() < 3.0 * sigma,
            "{}",
            out.mean_influence
        );
        assert_eq!(out.total_simulations, 100_000);
    }

    #[test]
    fn single_simulation_and_full_seed_set() {
        let g = path(5);
        let cfg = CascadeConfig {
            p_ic: 0.3,
            k_seeds: 1,
            n_sims: 1,
            seed: 0,
        };
        assert_eq!(
            estimate_influence(&g, &[0], &cfg).unwrap().std_influence,
            0.0
        );
        let all: Vec<usize> = (0..5).collect();
        let out = estimate_influence(&g, &all, &CascadeConfig { n_sims: 50, ..cfg }).unwrap();
        assert_eq!((out.mean_influence, out.std_influence), (5.0, 0.0));
    }

    #[test]
    fn determinism() {
        let g = star(12);
        let cfg = CascadeConfig {
            p_ic: 0.4,
            k_seeds: 2,
            n_sims: 300,
            seed: 9,
        };
        let a = estimate_influence(&g, &[3], &cfg).unwrap();
        let b = estimate_influence(&g, &[3], &cfg).unwrap();
        assert_eq!(a.mean_influence, b.mean_influence);
        assert_eq!(
            greedy_seed_selection(&g, &cfg).unwrap(),
            greedy_seed_selection(&g, &cfg).unwrap()
        );
    }

    #[test]
    fn greedy_tie_rule_and_star_center() {
        let g = path(7);
        let cfg = CascadeConfig {
            p_ic: 1.0,
            k_seeds: 1,
            n_sims: 5,
            seed: 0,
        };
        assert_eq!(greedy_seed_selection(&g, &cfg).unwrap().seeds, vec![0]);

        let s = Graph::from_edges(10, (1..10).map(|i| (i, 0))).unwrap();
        let cfg = CascadeConfig {
            p_ic: 0.5,
            k_seeds: 1,
            n_sims: 2000,
            seed: 3,
        };
        let sel = greedy_seed_selection(&s, &cfg).unwrap();
        assert_eq!(sel.seeds, vec![0]);
        assert_eq!(sel.simulations, 10 * 2000);
    }

    #[test]
    fn greedy_simulation_count() {
        let g = path(20);
        let cfg = CascadeConfig {
            p_ic: 0.2,
            k_seeds: 3,
            n_sims: 7,
            seed: 0,
        };
        let sel = greedy_seed_selection(&g, &cfg).unwrap();
        assert_eq!(sel.simulations, 7 * (20 + 19 + 18));
        let mut distinct = sel.seeds.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 3);
        assert!(greedy_seed_selection(&g, &CascadeConfig { k_seeds: 21, ..cfg }).is_err());
    }

    #[test]
    fn top_k_ties_to_smallest_id() {
        assert_eq!(top_k(&[1.0, 3.0, 3.0, 2.0], 2), vec![1, 2]);
        assert_eq!(top_k(&[5.0, 5.0, 5.0], 3), vec![0, 1, 2]);
    }

    #[test]
    fn monotone_in_seed_set() {
        let g = crate::graphs::gen_erdos_renyi(60, 0.08, 2).unwrap();
        let cfg = CascadeConfig {
            p_ic: 0.15,
            k_seeds: 3,
            n_sims: 10_000,
            seed: 4,
        };
        let sub = estimate_influence(&g, &[0, 1], &cfg).unwrap();
        let sup = estimate_influence(&g, &[0, 1, 2], &CascadeConfig { seed: 5, ..cfg }).unwrap();
        let joint = ((sub.std_influence.powi(2) + sup.std_influence.powi(2)) / 10_000.0).sqrt();
        assert!(sup.mean_influence >= sub.mean_influence - 3.0 * joint);
    }

    #[test]
    fn benchmark_full_seed_set_ties() {
        let g = path(6);
        let cascade = CascadeConfig {
            p_ic: 0.3,
            k_seeds: 6,
            n_sims: 10,
            seed: 0,
        };
        let layout = LayoutConfig {
            iterations: 5,
            crossing_mode: crate::layout::CrossingMode::Exact,
            ..Default::default()
        };
        let rep = benchmark_influence(&g, &layout, &cascade, 1).unwrap();
        assert_eq!(rep.greedy.influence_mean, 6.0);
        assert_eq!(rep.embedding.influence_mean, 6.0);
        assert_eq!(
            rep.greedy.selection_simulations,
            10 * (6 + 5 + 4 + 3 + 2 + 1)
        );
        assert_eq!(rep.embedding.total_simulations, 10);
    }
}
