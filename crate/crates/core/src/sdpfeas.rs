//! Semidefinite feasibility of isometric embeddings by alternating projections.
//!
//! Given an eigenspace basis `B` and edge (or orbit) Laplacians `L^i`, the
//! problem is to find `Z >= 0` with `<B^T L^i B, Z> = t_i`. The solver
//! alternates between the PSD cone and the affine constraint set with Dykstra
//! corrections. It works on a list of diagonal blocks, so the full problem is
//! the single-block case and the symmetry-adapted problem uses one block per
//! isotypic component.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{subgraph_laplacian, Graph};
use crate::repr::IsotypicDecomposition;
use crate::spectra::{eig_sym, EigenspaceCluster};
use crate::symmetry::{orbit_laplacians, EdgeOrbitPartition};

pub const DEFAULT_SDP_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 50_000;
pub const DEFAULT_RANK_TOL: f64 = 1e-6;
const PLATEAU_WINDOW: usize = 200;
const PLATEAU_REL_CHANGE: f64 = 1e-3;

/// Compressed constraint operators `B^T L^i B` with their right-hand sides.
#[derive(Debug, Clone)]
pub struct CompressedOperators {
    pub ops: Vec<DMatrix<f64>>,
    pub targets: Vec<f64>,
    pub basis: DMatrix<f64>,
}

impl CompressedOperators {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn count(&self) -> usize {
        self.ops.len()
    }

    /// `max_i |<op_i, Z> - t_i|`.
    pub fn max_residual(&self, z: &DMatrix<f64>) -> f64 {
        self.ops
            .iter()
            .zip(&self.targets)
            .map(|(a, t)| (a.dot(z) - t).abs())
            .fold(0.0, f64::max)
    }
}

/// Per-edge operators when `part` is `None`, orbit operators otherwise.
pub fn compress_operators(
    g: &Graph,
    cluster: &EigenspaceCluster,
    part: Option<&EdgeOrbitPartition>,
) -> Result<CompressedOperators> {
    let b = &cluster.basis;
    if b.nrows() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: b.nrows(),
        });
    }
    let (ops, targets) = match part {
        None => {
            let ops = g
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let diff = (b.row(u) - b.row(v)).transpose();
                    &diff * diff.transpose()
                })
                .collect();
            (ops, vec![1.0; g.m()])
        }
        Some(p) => {
            let ops = orbit_laplacians(g, p)
                .iter()
                .map(|l| b.transpose() * l * b)
                .collect();
            (ops, p.sizes_f64())
        }
    };
    Ok(CompressedOperators {
        ops,
        targets,
        basis: b.clone(),
    })
}

/// Per-edge operators built from explicit subgraph Laplacians, used as an
/// independent cross-check of [`compress_operators`].
pub fn compress_edge_laplacians(g: &Graph, cluster: &EigenspaceCluster) -> CompressedOperators {
    let b = &cluster.basis;
    let ops = (0..g.m())
        .map(|e| b.transpose() * subgraph_laplacian(g, [e]) * b)
        .collect();
    CompressedOperators {
        ops,
        targets: vec![1.0; g.m()],
        basis: b.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SdpStatus {
    Feasible,
    LikelyInfeasible,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct SdpResult {
    /// The full `d x d` solution in eigenspace coordinates, when feasible.
    pub z: Option<DMatrix<f64>>,
    pub status: SdpStatus,
    pub max_residual: f64,
    pub iterations: usize,
    pub rank_estimate: usize,
    pub block_sizes: Vec<usize>,
}

/// Number of eigenvalues above `rel_tol * lambda_max(Z)`.
pub fn rank_estimate(z: &DMatrix<f64>, rel_tol: f64) -> usize {
    if z.nrows() == 0 {
        return 0;
    }
    let Ok(dec) = eig_sym(&((z + z.transpose()) * 0.5)) else {
        return 0;
    };
    let top = dec.lambda_max();
    if top <= 0.0 {
        return 0;
    }
    dec.eigenvalues
        .iter()
        .filter(|&&x| x > rel_tol * top)
        .count()
}

/// Projection onto the PSD cone by clipping negative eigenvalues.
pub fn project_psd(a: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut out = DMatrix::zeros(a.nrows(), a.ncols());
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > 0.0 {
            let q = eig.eigenvectors.column(k);
            out += q * q.transpose() * lam;
        }
    }
    out
}

type Blocks = Vec<DMatrix<f64>>;

/// The constraint system restricted to block-diagonal `Z`.
struct BlockSystem {
    /// `ops[i][c]`: constraint `i` restricted to block `c`.
    ops: Vec<Vec<DMatrix<f64>>>,
    targets: DVector<f64>,
    gram_pinv: DMatrix<f64>,
}

impl BlockSystem {
    fn new(ops: Vec<Vec<DMatrix<f64>>>, targets: &[f64]) -> Self {
        let k = ops.len();
        let gram = DMatrix::from_fn(k, k, |i, j| {
            ops[i]
                .iter()
                .zip(&ops[j])
                .map(|(a, b)| a.dot(b))
                .sum::<f64>()
        });
        let top = gram.amax().max(f64::MIN_POSITIVE);
        let gram_pinv = gram
            .pseudo_inverse(1e-12 * top)
            .expect("nonnegative tolerance");
        BlockSystem {
            ops,
            targets: DVector::from_column_slice(targets),
            gram_pinv,
        }
    }

    fn values(&self, z: &Blocks) -> DVector<f64> {
        DVector::from_iterator(
            self.ops.len(),
            self.ops
                .iter()
                .map(|op| op.iter().zip(z).map(|(a, b)| a.dot(b)).sum()),
        )
    }

    fn residual(&self, z: &Blocks) -> f64 {
        (self.values(z) - &self.targets).amax()
    }

    fn project_affine(&self, z: &Blocks) -> Blocks {
        let y = &self.gram_pinv * (self.values(z) - &self.targets);
        let mut out = z.clone();
        for (op, yi) in self.ops.iter().zip(y.iter()) {
            for (o, a) in out.iter_mut().zip(op) {
                *o -= a * *yi;
            }
        }
        out
    }
}

fn min_eigenvalue(z: &Blocks) -> f64 {
    z.iter()
        .filter(|b| b.nrows() > 0)
        .map(|b| {
            nalgebra::SymmetricEigen::new((b + b.transpose()) * 0.5)
                .eigenvalues
                .min()
        })
        .fold(f64::INFINITY, f64::min)
}

struct BlockOutcome {
    z: Option<Blocks>,
    status: SdpStatus,
    residual: f64,
    iterations: usize,
}

fn solve_blocks(sys: &BlockSystem, sizes: &[usize], tol: f64, max_iter: usize) -> BlockOutcome {
    let total_trace: f64 = sys
        .ops
        .iter()
        .flat_map(|op| op.iter().map(|a| a.trace()))
        .sum();
    let total_target: f64 = sys.targets.iter().sum();
    let scale = if total_trace.abs() > f64::MIN_POSITIVE {
        total_target / total_trace
    } else {
        1.0
    };
    let mut x: Blocks = sizes
        .iter()
        .map(|&s| DMatrix::identity(s, s) * scale)
        .collect();
    let zero: Blocks = sizes.iter().map(|&s| DMatrix::zeros(s, s)).collect();
    let (mut p, mut q) = (zero.clone(), zero);
    let mut history: Vec<f64> = Vec::new();
    let mut last_residual = f64::INFINITY;

    for iter in 1..=max_iter {
        let shifted: Blocks = x.iter().zip(&p).map(|(a, b)| a + b).collect();
        let y = sys.project_affine(&shifted);
        p = shifted.iter().zip(&y).map(|(a, b)| a - b).collect();

        let shifted: Blocks = y.iter().zip(&q).map(|(a, b)| a + b).collect();
        x = shifted.iter().map(project_psd).collect();
        q = shifted.iter().zip(&x).map(|(a, b)| a - b).collect();

        let res_psd = sys.residual(&x);
        last_residual = res_psd;
        if res_psd <= tol {
            return BlockOutcome {
                z: Some(x),
                status: SdpStatus::Feasible,
                residual: res_psd,
                iterations: iter,
            };
        }
        let y_after = sys.project_affine(&x);
        if min_eigenvalue(&y_after) >= -tol && sys.residual(&y_after) <= tol {
            let residual = sys.residual(&y_after);
            return BlockOutcome {
                z: Some(y_after),
                status: SdpStatus::Feasible,
                residual,
                iterations: iter,
            };
        }

        let dist = (sys.values(&x) - &sys.targets).norm();
        history.push(dist);
        if history.len() > PLATEAU_WINDOW {
            let old = history[history.len() - 1 - PLATEAU_WINDOW];
            let change = (old - dist).abs() / old.max(f64::MIN_POSITIVE);
            if change < PLATEAU_REL_CHANGE && dist > 10.0 * tol {
                return BlockOutcome {
                    z: None,
                    status: SdpStatus::LikelyInfeasible,
                    residual: res_psd,
                    iterations: iter,
                };
            }
        }
    }
    BlockOutcome {
        z: None,
        status: SdpStatus::IterationLimit,
        residual: last_residual,
        iterations: max_iter,
    }
}

fn finish(
    outcome: BlockOutcome,
    coords: &[DMatrix<f64>],
    d: usize,
    sizes: Vec<usize>,
) -> SdpResult {
    let z = outcome.z.map(|blocks| {
        let mut full = DMatrix::zeros(d, d);
        for (c, zc) in coords.iter().zip(&blocks) {
            full += c * zc * c.transpose();
        }
        full
    });
    let rank = z.as_ref().map_or(0, |z| rank_estimate(z, DEFAULT_RANK_TOL));
    SdpResult {
        z,
        status: outcome.status,
        max_residual: outcome.residual,
        iterations: outcome.iterations,
        rank_estimate: rank,
        block_sizes: sizes,
    }
}

/// Solves the full (single block) feasibility problem.
pub fn solve_feasibility(co: &CompressedOperators, tol: f64, max_iter: usize) -> Result<SdpResult> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let d = co.dim();
    let sys = BlockSystem::new(
        co.ops.iter().map(|a| vec![a.clone()]).collect(),
        &co.targets,
    );
    let outcome = solve_blocks(&sys, &[d], tol, max_iter);
    Ok(finish(outcome, &[DMatrix::identity(d, d)], d, vec![d]))
}

/// Solves the problem with `Z` block diagonal in the isotypic coordinates of
/// `dec`. The decomposition must come from the group whose orbits define the
/// constraints.
pub fn block_diagonal_feasibility(
    co: &CompressedOperators,
    dec: &IsotypicDecomposition,
    tol: f64,
    max_iter: usize,
) -> Result<SdpResult> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let d = co.dim();
    if dec.dim != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: dec.dim,
        });
    }
    let coords: Vec<DMatrix<f64>> = dec.components.iter().map(|c| c.coords.clone()).collect();
    let sizes: Vec<usize> = coords.iter().map(|c| c.ncols()).collect();
    let ops = co
        .ops
        .iter()
        .map(|a| coords.iter().map(|c| c.transpose() * a * c).collect())
        .collect();
    let sys = BlockSystem::new(ops, &co.targets);
    let outcome = solve_blocks(&sys, &sizes, tol, max_iter);
    let mut result = finish(outcome, &coords, d, sizes);
    if let Some(z) = &result.z {
        result.max_residual = co.max_residual(z);
    }
    Ok(result)
}

/// `Phi = B Z B^T`, the Gram matrix of the embedding in vertex space.
pub fn expand_solution(co: &CompressedOperators, z: &DMatrix<f64>) -> DMatrix<f64> {
    &co.basis * z * co.basis.transpose()
}
