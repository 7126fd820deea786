//! Spring attraction along edges and repulsion away from crossing midpoints.

use super::crossings::CrossingSet;
use super::LayoutConfig;
use crate::graphs::Graph;
use crate::positions::Positions;

/// Net force per vertex, same shape as [`Positions`].
#[derive(Debug, Clone, PartialEq)]
pub struct ForceMatrix(Positions);

impl ForceMatrix {
    pub fn zeros(dim: usize, n: usize) -> Self {
        Self(Positions::zeros(dim, n))
    }

    pub fn force(&self, i: usize) -> &[f64] {
        self.0.point(i)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    /// Sum of all force vectors.
    pub fn total(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.dim()];
        for i in 0..self.n() {
            t.iter_mut().zip(self.force(i)).for_each(|(a, b)| *a += b);
        }
        t
    }

    /// Largest per-vertex force norm.
    pub fn max_norm(&self) -> f64 {
        (0..self.n())
            .map(|i| self.force(i).iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn add(&mut self, other: &ForceMatrix) {
        self.0
            .as_mut_slice()
            .iter_mut()
            .zip(other.as_slice())
            .for_each(|(a, b)| *a += b);
    }
}

/// Hooke springs of rest length `l_min`: vertex `i` feels
/// `-k_attr (d_ij - l_min) (p_i - p_j) / d_ij` from each neighbor `j`, with
/// `d_ij = ||p_i - p_j|| + eps`. Each edge adds equal and opposite forces.
pub fn spring_forces(p: &Positions, g: &Graph, cfg: &LayoutConfig) -> ForceMatrix {
    let dim = p.dim();
    let mut f = ForceMatrix::zeros(dim, p.n());
    let mut delta = vec![0.0; dim];
    for &(i, j) in g.edges() {
        let (pi, pj) = (p.point(i), p.point(j));
        let mut len2 = 0.0;
        for k in 0..dim {
            delta[k] = pi[k] - pj[k];
            len2 += delta[k] * delta[k];
        }
        let dij = len2.sqrt() + cfg.eps;
        let scale = -cfg.k_attr * (dij - cfg.l_min) / dij;
        let data = f.0.as_mut_slice();
        for k in 0..dim {
            let c = scale * delta[k];
            data[i * dim + k] += c;
            data[j * dim + k] -= c;
        }
    }
    f
}

/// Each endpoint `i` of a crossing with midpoint `m` is pushed by
/// `k_inter (p_i - m) / (||p_i - m||^2 + eps)`.
pub fn intersection_forces(
    p: &Positions,
    g: &Graph,
    cs: &CrossingSet,
    cfg: &LayoutConfig,
) -> ForceMatrix {
    let dim = p.dim();
    let mut f = ForceMatrix::zeros(dim, p.n());
    let coords = p.as_slice();
    let data = f.0.as_mut_slice();
    let mut delta = vec![0.0; dim];
    for c in 0..cs.len() {
        let m = cs.midpoint(c);
        for i in cs.endpoints(g, c) {
            let pi = &coords[i * dim..(i + 1) * dim];
            let mut dist2 = 0.0;
            for ((d, x), y) in delta.iter_mut().zip(pi).zip(m) {
                *d = x - y;
                dist2 += *d * *d;
            }
            let scale = cfg.k_inter / (dist2 + cfg.eps);
            for (out, d) in data[i * dim..(i + 1) * dim].iter_mut().zip(&delta) {
                *out += scale * d;
            }
        }
    }
    f
}
