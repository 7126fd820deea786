//! Combinatorial Laplacian and the spectral starting layout.
//!
//! Graphs with at most [`DENSE_LIMIT`] vertices use a dense symmetric
//! eigendecomposition. Larger graphs use block inverse subspace iteration:
//! the pseudo-inverse `L⁺` is applied through a sparse Cholesky factor of the
//! grounded Laplacian (the last row and column removed), each block is
//! re-orthonormalized against the constant vector, and a Rayleigh–Ritz step
//! on `L` extracts the eigenpairs. Both paths are checked against the same
//! residual contract before returning.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use rand::RngExt;

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::positions::Positions;
use crate::rng;

/// Largest vertex count handled by the dense eigensolver.
pub const DENSE_LIMIT: usize = 3000;

const RESIDUAL_TOL: f64 = 1e-6;
const ITERATIVE_TOL: f64 = 1e-10;
const MAX_SUBSPACE_ITERS: usize = 500;

/// Symmetric sparse matrix held as a full (both triangles) triplet list.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseSymmetric {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries
            .iter()
            .filter(|&&(r, c, _)| r == row && c == col)
            .map(|e| e.2)
            .sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for &(r, c, v) in &self.entries {
            m[r][c] += v;
        }
        m
    }
}

/// `L = D - A`.
pub fn laplacian(g: &Graph) -> SparseSymmetric {
    let mut entries = Vec::with_capacity(g.n() + 2 * g.edge_count());
    for v in 0..g.n() {
        entries.push((v, v, g.degree(v) as f64));
    }
    for &(u, v) in g.edges() {
        entries.push((u, v, -1.0));
        entries.push((v, u, -1.0));
    }
    SparseSymmetric { n: g.n(), entries }
}

/// Options for [`spectral_init_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOptions {
    /// Scale each eigenvector by `1 / sqrt(lambda)` (Laplacian eigenmap style).
    pub scale_by_inv_sqrt_lambda: bool,
    /// Graphs with more vertices than this use the iterative solver.
    pub dense_limit: usize,
    /// Seed of the iterative solver's random starting block.
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            scale_by_inv_sqrt_lambda: false,
            dense_limit: DENSE_LIMIT,
            seed: 0,
        }
    }
}

/// Eigenpairs `(lambda_k, phi_k)` of `L` for the smallest nonzero eigenvalues.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Spectral initial layout: row `k` is the unit eigenvector of the `k`-th
/// smallest nonzero Laplacian eigenvalue.
pub fn spectral_init(g: &Graph, d: usize) -> Result<Positions> {
    spectral_init_with(g, d, &SpectralOptions::default())
}

pub fn spectral_init_with(g: &Graph, d: usize, opts: &SpectralOptions) -> Result<Positions> {
    let pairs = smallest_nonzero_eigenpairs(g, d, opts)?;
    let rows: Vec<Vec<f64>> = pairs
        .values
        .iter()
        .zip(&pairs.vectors)
        .map(|(&lambda, phi)| {
            if opts.scale_by_inv_sqrt_lambda {
                let s = 1.0 / lambda.sqrt();
                phi.iter().map(|x| x * s).collect()
            } else {
                phi.clone()
            }
        })
        .collect();
    Positions::from_rows(&rows)
}

/// The `count` smallest nonzero eigenpairs of the Laplacian of a connected graph.
///
/// Vectors are unit norm, orthogonal to the all-ones vector, and signed so
/// their largest-magnitude entry is positive.
pub fn smallest_nonzero_eigenpairs(
    g: &Graph,
    count: usize,
    opts: &SpectralOptions,
) -> Result<Eigenpairs> {
    let n = g.n();
    if count == 0 || count >= n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= d < n for the spectral layout, got d={count}, n={n}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "zero Laplacian eigenvalue has multiplicity > 1; extract the largest component first"
                .into(),
        ));
    }
    let lap = laplacian(g);
    let mut pairs = if n <= opts.dense_limit {
        dense_eigenpairs(&lap, count)?
    } else {
        iterative_eigenpairs(g, &lap, count, opts.seed)?
    };
    for phi in &mut pairs.vectors {
        fix_sign(phi);
    }
    check_contract(&lap, &pairs)?;
    Ok(pairs)
}

fn dense_eigenpairs(lap: &SparseSymmetric, count: usize) -> Result<Eigenpairs> {
    let n = lap.n();
    let mut m = Mat::<f64>::zeros(n, n);
    for &(r, c, v) in lap.entries() {
        m[(r, c)] += v;
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    // index 0 is the constant vector of the connected graph
    let values: Vec<f64> = (1..=count).map(|k| s[k]).collect();
    let vectors = (1..=count)
        .map(|k| {
            let mut phi: Vec<f64> = (0..n).map(|i| u[(i, k)]).collect();
            project_out_constant(&mut phi);
            normalize_vec(&mut phi);
            phi
        })
        .collect();
    Ok(Eigenpairs { values, vectors })
}

fn iterative_eigenpairs(
    g: &Graph,
    lap: &SparseSymmetric,
    count: usize,
    seed: u64,
) -> Result<Eigenpairs> {
    let n = g.n();
    let block = (2 * count).max(count + 8).min(n - 1);
    let solver = GroundedSolver::new(g)?;

    let mut rng = rng::stream(seed, "spectral-start", 0);
    let mut basis: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    orthonormalize(&mut basis)?;

    let mut ritz = (Vec::new(), Vec::new());
    for _ in 0..MAX_SUBSPACE_ITERS {
        let mut next = solver.apply_pinv(&basis);
        orthonormalize(&mut next)?;
        ritz = rayleigh_ritz(lap, &next)?;
        basis = ritz.1.clone();
        let converged = (0..count).all(|k| {
            residual_norm(lap, ritz.0[k], &ritz.1[k]) <= ITERATIVE_TOL * ritz.0[k].max(1.0)
        });
        if converged {
            return Ok(Eigenpairs {
                values: ritz.0[..count].to_vec(),
                vectors: ritz.1[..count].to_vec(),
            });
        }
    }
    // accept a slower convergence as long as the public contract holds
    let pairs = Eigenpairs {
        values: ritz.0[..count].to_vec(),
        vectors: ritz.1[..count].to_vec(),
    };
    check_contract(lap, &pairs)
        .map(|_| pairs)
        .map_err(|_| Error::NoConvergence {
            what: "subspace iteration",
            iterations: MAX_SUBSPACE_ITERS,
        })
}

/// Applies `L⁺` to vectors orthogonal to the constant vector by solving the
/// grounded system (last vertex pinned to zero) and re-centering.
struct GroundedSolver {
    n: usize,
    llt: faer::sparse::linalg::solvers::Llt<usize, f64>,
}

impl GroundedSolver {
    fn new(g: &Graph) -> Result<Self> {
        let n = g.n();
        let m = n - 1;
        let mut triplets = Vec::with_capacity(m + 2 * g.edge_count());
        for v in 0..m {
            triplets.push(Triplet::new(v, v, g.degree(v) as f64));
        }
        for &(u, v) in g.edges() {
            if u < m && v < m {
                triplets.push(Triplet::new(u, v, -1.0));
                triplets.push(Triplet::new(v, u, -1.0));
            }
        }
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(m, m, &triplets)
            .map_err(|e| Error::Eigen(format!("sparse assembly failed: {e:?}")))?;
        let llt = mat
            .sp_cholesky(Side::Lower)
            .map_err(|e| Error::Eigen(format!("grounded Laplacian factorization failed: {e:?}")))?;
        Ok(Self { n, llt })
    }

    fn apply_pinv(&self, block: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let m = self.n - 1;
        let mut rhs = Mat::<f64>::zeros(m, block.len());
        for (j, x) in block.iter().enumerate() {
            let mean = x.iter().sum::<f64>() / self.n as f64;
            for i in 0..m {
                rhs[(i, j)] = x[i] - mean;
            }
        }
        self.llt.solve_in_place(rhs.as_mut());
        (0..block.len())
            .map(|j| {
                let mut y: Vec<f64> = (0..m).map(|i| rhs[(i, j)]).collect();
                y.push(0.0);
                project_out_constant(&mut y);
                y
            })
            .collect()
    }
}

fn rayleigh_ritz(lap: &SparseSymmetric, basis: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let b = basis.len();
    let images: Vec<Vec<f64>> = basis.iter().map(|v| lap.mul_vec(v)).collect();
    let mut h = Mat::<f64>::zeros(b, b);
    for i in 0..b {
        for j in 0..=i {
            let v = dot(&basis[i], &images[j]);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let n = basis[0].len();
    let values = (0..b).map(|k| s[k]).collect();
    let vectors = (0..b)
        .map(|k| {
            let mut v = vec![0.0; n];
            for (j, bj) in basis.iter().enumerate() {
                let c = u[(j, k)];
                v.iter_mut().zip(bj).for_each(|(a, x)| *a += c * x);
            }
            normalize_vec(&mut v);
            v
        })
        .collect();
    Ok((values, vectors))
}

/// Two passes of modified Gram–Schmidt against the constant vector and each other.
fn orthonormalize(vectors: &mut [Vec<f64>]) -> Result<()> {
    for _ in 0..2 {
        for j in 0..vectors.len() {
            let (done, rest) = vectors.split_at_mut(j);
            let v = &mut rest[0];
            project_out_constant(v);
            for q in done.iter() {
                let c = dot(q, v);
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
            if normalize_vec(v) < 1e-300 {
                return Err(Error::Eigen(
                    "subspace collapsed during orthonormalization".into(),
                ));
            }
        }
    }
    Ok(())
}

fn check_contract(lap: &SparseSymmetric, pairs: &Eigenpairs) -> Result<()> {
    let mut prev = 0.0;
    for (k, (&lambda, phi)) in pairs.values.iter().zip(&pairs.vectors).enumerate() {
        if lambda <= 1e-10 {
            return Err(Error::Eigen(format!(
                "eigenvalue {k} = {lambda} is not positive"
            )));
        }
        if lambda < prev - 1e-12 * lambda.max(1.0) {
            return Err(Error::Eigen("eigenvalues out of order".into()));
        }
        prev = lambda;
        let norm = dot(phi, phi).sqrt();
        let res = residual_norm(lap, lambda, phi);
        if res > RESIDUAL_TOL * norm {
            return Err(Error::Eigen(format!(
                "residual {res:e} of eigenpair {k} exceeds tolerance"
            )));
        }
        if phi.iter().sum::<f64>().abs() > 1e-8 {
            return Err(Error::Eigen(format!(
                "eigenvector {k} is not orthogonal to 1"
            )));
        }
    }
    Ok(())
}

pub(crate) fn residual_norm(lap: &SparseSymmetric, lambda: f64, phi: &[f64]) -> f64 {
    lap.mul_vec(phi)
        .iter()
        .zip(phi)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn fix_sign(phi: &mut [f64]) {
    let mut best = 0;
    for (i, x) in phi.iter().enumerate() {
        if x.abs() > phi[best].abs() {
            best = i;
        }
    }
    if phi[best] < 0.0 {
        phi.iter_mut().for_each(|x| *x = -*x);
    }
}

fn project_out_constant(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn normalize_vec(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{
        gen_balanced_tree, gen_erdos_renyi, gen_grid, largest_connected_component,
    };

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    #[test]
    fn laplacian_small_cases() {
        let l = laplacian(&path(2));
        assert_eq!(l.to_dense(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let l = laplacian(&k3).to_dense();
        for (i, row) in l.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { 2.0 } else { -1.0 });
            }
        }
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let l = laplacian(&star);
        assert_eq!(
            (0..4).map(|i| l.get(i, i)).collect::<Vec<_>>(),
            vec![3.0, 1.0, 1.0, 1.0]
        );
        for row in l.to_dense() {
            assert!(row.iter().sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn path_three_fiedler_vector() {
        let pairs = smallest_nonzero_eigenpairs(&path(3), 1, &SpectralOptions::default()).unwrap();
        assert!((pairs.values[0] - 1.0).abs() < 1e-10);
        let s = 1.0 / 2f64.sqrt();
        let phi = &pairs.vectors[0];
        // sign fixed by the largest-magnitude entry; both ends tie so either orientation is valid
        assert!(phi[1].abs() < 1e-10);
        assert!((phi[0].abs() - s).abs() < 1e-10 && (phi[0] + phi[2]).abs() < 1e-10);
    }

    #[test]
    fn cycle_four_degenerate_pair_is_orthonormal() {
        let p = spectral_init(&cycle(4), 2).unwrap();
        let (a, b) = (p.row(0), p.row(1));
        assert!((dot(&a, &a) - 1.0).abs() < 1e-8);
        assert!((dot(&b, &b) - 1.0).abs() < 1e-8);
        assert!(dot(&a, &b).abs() < 1e-8);
        let lap = laplacian(&cycle(4));
        assert!(residual_norm(&lap, 2.0, &a) < 1e-8);
        assert!(residual_norm(&lap, 2.0, &b) < 1e-8);
    }

    #[test]
    fn rejects_disconnected_and_bad_dimension() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(spectral_init(&g, 2), Err(Error::Disconnected(_))));
        assert!(spectral_init(&path(3), 3).is_err());
        assert!(spectral_init(&path(3), 0).is_err());
    }

    fn assert_contract(g: &Graph, d: usize, opts: &SpectralOptions) -> Eigenpairs {
        let pairs = smallest_nonzero_eigenpairs(g, d, opts).unwrap();
        let lap = laplacian(g);
        for (k, (&lambda, phi)) in pairs.values.iter().zip(&pairs.vectors).enumerate() {
            assert!(phi.iter().sum::<f64>().abs() < 1e-8);
            assert!((dot(phi, phi) - 1.0).abs() < 1e-10);
            let rq = dot(phi, &lap.mul_vec(phi));
            assert!(
                (rq - lambda).abs() <= 1e-8 * lambda,
                "Rayleigh quotient {k}"
            );
            assert!(residual_norm(&lap, lambda, phi) <= 1e-6);
            assert!(lambda > 1e-10);
        }
        assert!(pairs.values.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        pairs
    }

    #[test]
    fn dense_and_iterative_paths_agree_on_spectrum() {
        let (g, _) = largest_connected_component(&gen_erdos_renyi(300, 0.03, 4).unwrap()).unwrap();
        let dense = assert_contract(&g, 4, &SpectralOptions::default());
        let iterative = assert_contract(
            &g,
            4,
            &SpectralOptions {
                dense_limit: 0,
                ..Default::default()
            },
        );
        for (a, b) in dense.values.iter().zip(&iterative.values) {
            assert!((a - b).abs() < 1e-8 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn iterative_path_handles_degenerate_tree_and_grid() {
        let opts = SpectralOptions {
            dense_limit: 0,
            ..Default::default()
        };
        assert_contract(&gen_balanced_tree(3, 5).unwrap(), 4, &opts);
        assert_contract(&gen_grid(12, 12).unwrap(), 3, &opts);
    }

    #[test]
    fn cycle_spectrum_matches_closed_form() {
        let n = 12;
        let pairs = smallest_nonzero_eigenpairs(&cycle(n), 4, &SpectralOptions::default()).unwrap();
        let expect =
            |k: usize| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
        let want = [expect(1), expect(1), expect(2), expect(2)];
        for (a, b) in pairs.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_sqrt_scaling() {
        let opts = SpectralOptions {
            scale_by_inv_sqrt_lambda: true,
            ..Default::default()
        };
        let p = spectral_init_with(&path(3), 1, &opts).unwrap();
        assert!((dot(&p.row(0), &p.row(0)) - 1.0).abs() < 1e-10);
        let p = spectral_init_with(&path(5), 2, &opts).unwrap();
        let lambda = 2.0 - 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((dot(&p.row(0), &p.row(0)) - 1.0 / lambda).abs() < 1e-9);
    }
}
