//! Dense symmetric eigendecomposition and eigenspace clustering.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphcore::{laplacian, Graph, WeightVector};

/// Default relative tolerance for grouping eigenvalues into one eigenspace.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// `A = Q diag(eigenvalues) Q^T` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    /// `max_k ||A q_k - lambda_k q_k||_2`.
    pub residual: f64,
}

impl SpectralDecomposition {
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues[1]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }
}

/// Which end of the nontrivial Laplacian spectrum to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Second,
    Largest,
}

/// An eigenvalue together with an orthonormal basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct EigenspaceCluster {
    pub lambda: f64,
    /// `n x d` matrix with orthonormal columns.
    pub basis: DMatrix<f64>,
    pub cluster_indices: Vec<usize>,
    /// Distance from the cluster to the nearest excluded eigenvalue.
    pub gap: f64,
    pub side: Side,
}

impl EigenspaceCluster {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

fn frobenius_scale(a: &DMatrix<f64>) -> f64 {
    a.norm().max(f64::MIN_POSITIVE)
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
pub fn eig_sym(a: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    let scale = frobenius_scale(a);
    let asym = (a - a.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig =
        nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::ConvergenceFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .total_cmp(&eig.eigenvalues[j])
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        eigenvectors.set_column(k, &eig.eigenvectors.column(i));
    }
    let residual = (0..n)
        .map(|k| (a * eigenvectors.column(k) - eigenvectors.column(k) * eigenvalues[k]).norm())
        .fold(0.0, f64::max);
    if residual > 1e-10 * scale.max(1.0) {
        return Err(Error::ConvergenceFailure);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        residual,
    })
}

/// Modified Gram-Schmidt on the columns, applied twice for stability.
pub fn orthonormalize(b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut q = b.clone();
    for _ in 0..2 {
        for j in 0..q.ncols() {
            for i in 0..j {
                let proj = q.column(i).dot(&q.column(j));
                let ci = q.column(i).clone_owned();
                q.column_mut(j).axpy(-proj, &ci, 1.0);
            }
            let nrm = q.column(j).norm();
            q.column_mut(j).unscale_mut(nrm);
        }
    }
    q
}

/// Groups the eigenvalues equal to `lambda_2` (excluding `lambda_1`) or to
/// `lambda_n`, up to `tol * max(1, lambda_n)`.
pub fn cluster_eigenspace(
    dec: &SpectralDecomposition,
    side: Side,
    tol: f64,
) -> Result<EigenspaceCluster> {
    let ev = &dec.eigenvalues;
    let n = ev.len();
    if n < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: n,
        });
    }
    let scale = tol * dec.lambda_max().max(1.0);
    let anchor = match side {
        Side::Second => ev[1],
        Side::Largest => ev[n - 1],
    };
    let indices: Vec<usize> = (1..n)
        .filter(|&k| (ev[k] - anchor).abs() <= scale)
        .collect();
    let gap = (0..n)
        .filter(|k| !indices.contains(k))
        .flat_map(|k| indices.iter().map(move |&i| (ev[k] - ev[i]).abs()))
        .fold(f64::INFINITY, f64::min);
    if gap <= 10.0 * scale {
        return Err(Error::AmbiguousCluster { gap, tol: scale });
    }
    let lambda = indices.iter().map(|&k| ev[k]).sum::<f64>() / indices.len() as f64;
    let raw = DMatrix::from_fn(n, indices.len(), |r, c| dec.eigenvectors[(r, indices[c])]);
    Ok(EigenspaceCluster {
        lambda,
        basis: orthonormalize(&raw),
        cluster_indices: indices,
        gap,
        side,
    })
}

/// `(lambda_2, lambda_n)` of the weighted Laplacian.
pub fn lambda_bounds(g: &Graph, w: &WeightVector) -> Result<(f64, f64)> {
    let dec = eig_sym(&laplacian(g, w)?)?;
    Ok((dec.lambda2(), dec.lambda_max()))
}
