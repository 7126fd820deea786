//! Detection of properly crossing edge pairs in the projection plane.

use rand::seq::index;

use super::geometry::{segments_cross, Point2};
use super::kdtree::KdTree;
use super::LayoutConfig;
use crate::graphs::Graph;
use crate::positions::Positions;
use crate::rng;

/// Crossing edge pairs `(e, f)` with `e < f` (indices into `Graph::edges`),
/// sorted, each with the average of its four endpoint positions in full
/// embedding coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossingSet {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    midpoints: Vec<f64>,
}

impl CrossingSet {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            ..Default::default()
        }
    }

    #[cfg(test)]
    pub(crate) fn from_pairs(p: &Positions, g: &Graph, mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted_pairs(p, g, pairs)
    }

    /// `pairs` must be strictly increasing with `e < f` in each pair.
    fn from_sorted_pairs(p: &Positions, g: &Graph, pairs: Vec<(usize, usize)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        let dim = p.dim();
        let edges = g.edges();
        let mut midpoints = Vec::with_capacity(pairs.len() * dim);
        for &(e, f) in &pairs {
            let (u, v) = edges[e];
            let (w, x) = edges[f];
            for k in 0..dim {
                midpoints
                    .push((p.point(u)[k] + p.point(v)[k] + p.point(w)[k] + p.point(x)[k]) / 4.0);
            }
        }
        Self {
            dim,
            pairs,
            midpoints,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Average midpoint `m_{e,f}` of crossing `k`.
    pub fn midpoint(&self, k: usize) -> &[f64] {
        &self.midpoints[k * self.dim..(k + 1) * self.dim]
    }

    /// The four distinct endpoints of crossing `k`.
    pub fn endpoints(&self, g: &Graph, k: usize) -> [usize; 4] {
        let (e, f) = self.pairs[k];
        let (u, v) = g.edges()[e];
        let (w, x) = g.edges()[f];
        [u, v, w, x]
    }

    pub fn contains(&self, e: usize, f: usize) -> bool {
        self.pairs.binary_search(&(e.min(f), e.max(f))).is_ok()
    }

    pub fn is_subset_of(&self, other: &CrossingSet) -> bool {
        self.pairs.iter().all(|&(e, f)| other.contains(e, f))
    }
}

fn pair_key(e: usize, f: usize) -> u64 {
    ((e as u64) << 32) | f as u64
}

fn project(p: &Positions, v: usize, plane: (usize, usize)) -> Point2 {
    let x = p.point(v);
    [x[plane.0], x[plane.1]]
}

#[inline]
pub(crate) fn edges_cross(
    p: &Positions,
    g: &Graph,
    e: usize,
    f: usize,
    plane: (usize, usize),
) -> bool {
    let (u, v) = g.edges()[e];
    let (w, x) = g.edges()[f];
    if u == w || u == x || v == w || v == x {
        return false;
    }
    segments_cross(
        project(p, u, plane),
        project(p, v, plane),
        project(p, w, plane),
        project(p, x, plane),
    )
}

/// Every crossing pair. Edges are swept in order of their left x-extent so
/// only pairs with overlapping x-ranges are tested.
pub fn find_crossings_exact(p: &Positions, g: &Graph, cfg: &LayoutConfig) -> CrossingSet {
    let plane = cfg.projection_plane;
    let boxes: Vec<[f64; 4]> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (project(p, u, plane), project(p, v, plane));
            [
                a[0].min(b[0]),
                a[0].max(b[0]),
                a[1].min(b[1]),
                a[1].max(b[1]),
            ]
        })
        .collect();
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a][0].total_cmp(&boxes[b][0]).then(a.cmp(&b)));

    let mut keys = Vec::new();
    for (pos, &e) in order.iter().enumerate() {
        let be = boxes[e];
        for &f in &order[pos + 1..] {
            let bf = boxes[f];
            if bf[0] > be[1] {
                break;
            }
            if bf[2] > be[3] || bf[3] < be[2] {
                continue;
            }
            if edges_cross(p, g, e, f, plane) {
                keys.push(pair_key(e.min(f), e.max(f)));
            }
        }
    }
    keys.sort_unstable();
    let pairs = keys
        .into_iter()
        .map(|key| ((key >> 32) as usize, (key & 0xffff_ffff) as usize))
        .collect();
    CrossingSet::from_sorted_pairs(p, g, pairs)
}

/// Crossings among candidate pairs formed by each edge midpoint and its
/// `knn_k` nearest edge midpoints in the projection plane. When the edge
/// count exceeds `midpoint_sample_cap`, only a uniform sample of edges drawn
/// from the `(seed, iteration)` stream takes part.
pub fn find_crossings_knn(p: &Positions, g: &Graph, cfg: &LayoutConfig) -> CrossingSet {
    find_crossings_knn_at(p, g, cfg, 0)
}

pub fn find_crossings_knn_at(
    p: &Positions,
    g: &Graph,
    cfg: &LayoutConfig,
    iteration: usize,
) -> CrossingSet {
    let plane = cfg.projection_plane;
    let m = g.edge_count();
    let sampled: Vec<usize> = match cfg.midpoint_sample_cap {
        Some(cap) if cap < m => {
            let mut r = rng::stream(cfg.seed, "midpoint-sample", iteration as u64);
            let mut s = index::sample(&mut r, m, cap).into_vec();
            s.sort_unstable();
            s
        }
        _ => (0..m).collect(),
    };
    let edges = g.edges();
    // projected endpoints of each sampled edge
    let segs: Vec<[Point2; 2]> = sampled
        .iter()
        .map(|&e| {
            let (u, v) = edges[e];
            [project(p, u, plane), project(p, v, plane)]
        })
        .collect();
    let mids: Vec<Point2> = segs
        .iter()
        .map(|[a, b]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0])
        .collect();
    let count = sampled.len();
    let k = cfg.knn_k.min(count.saturating_sub(1));
    let tree = KdTree::new(mids.clone());

    // every kNN relation filed under its smaller local index; a mutual pair
    // appears twice and is deduplicated per bucket
    let mut lists = vec![0usize; count * k];
    let mut starts = vec![0usize; count + 1];
    let mut hits = Vec::with_capacity(k + 1);
    for a in 0..count {
        tree.nearest_into(mids[a], k + 1, &mut hits);
        let row = &mut lists[a * k..(a + 1) * k];
        for (slot, &(_, b)) in row.iter_mut().zip(hits.iter().filter(|h| h.1 != a)) {
            *slot = b;
            starts[a.min(b) + 1] += 1;
        }
    }
    for i in 0..count {
        starts[i + 1] += starts[i];
    }
    let mut partners = vec![0usize; starts[count]];
    let mut fill = starts.clone();
    for a in 0..count {
        for &b in &lists[a * k..(a + 1) * k] {
            let lo = a.min(b);
            partners[fill[lo]] = a.max(b);
            fill[lo] += 1;
        }
    }

    // `sampled` is ascending, so walking `lo` in order yields sorted pairs
    let mut pairs = Vec::new();
    for lo in 0..count {
        let bucket = &mut partners[starts[lo]..starts[lo + 1]];
        bucket.sort_unstable();
        let e = sampled[lo];
        let (u, v) = edges[e];
        let [pu, pv] = segs[lo];
        let mut prev = usize::MAX;
        for &hi in bucket.iter() {
            if hi == prev {
                continue;
            }
            prev = hi;
            let f = sampled[hi];
            let (w, x) = edges[f];
            if u == w || u == x || v == w || v == x {
                continue;
            }
            let [pw, px] = segs[hi];
            if segments_cross(pu, pv, pw, px) {
                pairs.push((e, f));
            }
        }
    }
    CrossingSet::from_sorted_pairs(p, g, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::CrossingMode;

    fn two_diagonals() -> (Positions, Graph) {
        // square corners 0..3 counterclockwise, edges are the diagonals
        let p = Positions::from_columns(2, vec![0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0]).unwrap();
        let g = Graph::from_edges(4, [(0, 2), (1, 3)]).unwrap();
        (p, g)
    }

    #[test]
    fn diagonals_cross_once() {
        let (p, g) = two_diagonals();
        let cs = find_crossings_exact(&p, &g, &LayoutConfig::default());
        assert_eq!(cs.pairs(), &[(0, 1)]);
        assert_eq!(cs.midpoint(0), &[0.5, 0.5]);
    }

    #[test]
    fn square_cycle_is_planar() {
        let (p, _) = two_diagonals();
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(find_crossings_exact(&p, &c4, &LayoutConfig::default()).is_empty());
    }

    #[test]
    fn knn_with_single_neighbor_finds_diagonal_crossing() {
        let (p, g) = two_diagonals();
        let cfg = LayoutConfig {
            knn_k: 1,
            crossing_mode: CrossingMode::Knn,
            ..Default::default()
        };
        assert_eq!(find_crossings_knn(&p, &g, &cfg).pairs(), &[(0, 1)]);
    }

    #[test]
    fn projection_plane_selects_coordinates() {
        // crossing only visible in the (0, 2) plane
        let p = Positions::from_columns(
            3,
            vec![0.0, 5.0, 0.0, 1.0, -3.0, 0.0, 1.0, 2.0, 1.0, 0.0, -1.0, 1.0],
        )
        .unwrap();
        let g = Graph::from_edges(4, [(0, 2), (1, 3)]).unwrap();
        let xy = LayoutConfig {
            dim: 3,
            ..Default::default()
        };
        let xz = LayoutConfig {
            dim: 3,
            projection_plane: (0, 2),
            ..Default::default()
        };
        assert!(find_crossings_exact(&p, &g, &xy).is_empty());
        let cs = find_crossings_exact(&p, &g, &xz);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.midpoint(0), &[0.5, 0.75, 0.5]);
    }
}
