//! Isotypic decomposition of an eigenspace under a permutation group.
//!
//! The group acts on the eigenspace through the compressed matrices
//! `R(sigma) = B^T P(sigma) B`. Group averages `(1/|G|) sum R^T S R` of random
//! symmetric `S` commute with the action, and their eigenspaces split any
//! reducible invariant subspace. Irreducible pieces are grouped into isotypic
//! components by testing whether averaged intertwiners vanish, and the type of
//! each irreducible (real, complex or quaternionic) is read off from the
//! dimension of its commutant.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectra::{eig_sym, EigenspaceCluster};
use crate::symmetry::{GroupClosure, Permutation};

const SPLIT_ATTEMPTS: usize = 5;
const INVARIANCE_TOL: f64 = 1e-8;

/// One isotypic component `X = U^m` of an eigenspace.
#[derive(Debug, Clone)]
pub struct IsotypicComponent {
    /// `n x (d m)` orthonormal basis in vertex space.
    pub basis: DMatrix<f64>,
    /// The same subspace in eigenspace coordinates, `dim x (d m)`.
    pub coords: DMatrix<f64>,
    /// Eigenspace coordinates of each irreducible copy, `dim x d`.
    pub irreducibles: Vec<DMatrix<f64>>,
    /// Real dimension of the irreducible.
    pub irr_dim: usize,
    pub mult: usize,
    /// Dimension of the commutant of one irreducible: 1, 2 or 4.
    pub endo_dim: usize,
    /// Trace of the action on the whole component, per closure element.
    pub character: Vec<f64>,
}

impl IsotypicComponent {
    /// Short label of the endomorphism algebra.
    pub fn type_label(&self) -> &'static str {
        match self.endo_dim {
            1 => "real",
            2 => "complex",
            _ => "quaternionic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IsotypicDecomposition {
    pub components: Vec<IsotypicComponent>,
    pub lambda: f64,
    pub dim: usize,
    /// `||sum_j C_j C_j^T - I||_F` in eigenspace coordinates.
    pub residual: f64,
}

/// Compressed action `R(sigma) = B^T P(sigma) B` for every closure element.
pub fn compressed_action(
    cluster: &EigenspaceCluster,
    closure: &GroupClosure,
) -> Result<Vec<DMatrix<f64>>> {
    let b = &cluster.basis;
    let (n, d) = b.shape();
    closure
        .elements()
        .iter()
        .map(|sigma| {
            if sigma.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: sigma.len(),
                });
            }
            let mut moved = DMatrix::zeros(n, d);
            for v in 0..n {
                moved.set_row(sigma.apply(v), &b.row(v));
            }
            let r = b.transpose() * moved;
            let defect = (r.transpose() * &r - DMatrix::identity(d, d)).norm();
            if defect > INVARIANCE_TOL {
                return Err(Error::UnstableSplit(format!(
                    "eigenspace is not invariant (defect {defect:e})"
                )));
            }
            Ok(r)
        })
        .collect()
}

fn random_symmetric(rng: &mut ChaCha8Rng, k: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let x = rng.gen_range(-1.0..1.0);
            s[(i, j)] = x;
            s[(j, i)] = x;
        }
    }
    s
}

fn restrict(rs: &[DMatrix<f64>], u: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    rs.iter().map(|r| u.transpose() * r * u).collect()
}

fn average_conjugate(rs: &[DMatrix<f64>], s: &DMatrix<f64>) -> DMatrix<f64> {
    let k = s.nrows();
    let mut m = DMatrix::zeros(k, k);
    for r in rs {
        m += r.transpose() * s * r;
    }
    m / rs.len() as f64
}

enum Split {
    Irreducible,
    Pieces(Vec<DMatrix<f64>>),
    Ambiguous,
}

/// One splitting attempt of the invariant subspace with restricted action `rs`.
fn try_split(rs: &[DMatrix<f64>], rng: &mut ChaCha8Rng) -> Result<Split> {
    let k = rs[0].nrows();
    let m = average_conjugate(rs, &random_symmetric(rng, k));
    let dec = eig_sym(&m)?;
    let ev = &dec.eigenvalues;
    let scale = ev.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..k {
        let diff = ev[i] - ev[i - 1];
        if diff <= 1e-8 * scale {
            groups.last_mut().unwrap().push(i);
        } else if diff < 1e-5 * scale {
            return Ok(Split::Ambiguous);
        } else {
            groups.push(vec![i]);
        }
    }
    if groups.len() == 1 {
        return Ok(Split::Irreducible);
    }
    let pieces = groups
        .into_iter()
        .map(|idx| DMatrix::from_fn(k, idx.len(), |r, c| dec.eigenvectors[(r, idx[c])]))
        .collect();
    Ok(Split::Pieces(pieces))
}

fn invariance_defect(rs: &[DMatrix<f64>], u: &DMatrix<f64>) -> f64 {
    rs.iter()
        .map(|r| (r * u - u * (u.transpose() * r * u)).norm())
        .fold(0.0, f64::max)
}

/// Splits the full eigenspace into irreducible invariant subspaces.
fn irreducible_pieces(rs: &[DMatrix<f64>], rng: &mut ChaCha8Rng) -> Result<Vec<DMatrix<f64>>> {
    let d = rs[0].nrows();
    let mut pending = vec![DMatrix::identity(d, d)];
    let mut done = Vec::new();
    while let Some(u) = pending.pop() {
        if u.ncols() == 1 {
            done.push(u);
            continue;
        }
        let local = restrict(rs, &u);
        let mut outcome = None;
        let mut ambiguous = false;
        for _ in 0..SPLIT_ATTEMPTS {
            match try_split(&local, rng)? {
                Split::Pieces(p) => {
                    outcome = Some(p);
                    break;
                }
                Split::Ambiguous => ambiguous = true,
                Split::Irreducible => {}
            }
        }
        match outcome {
            Some(pieces) => {
                for p in pieces.into_iter().rev() {
                    let sub = &u * p;
                    let defect = invariance_defect(rs, &sub);
                    if defect > INVARIANCE_TOL {
                        return Err(Error::UnstableSplit(format!(
                            "split piece not invariant (defect {defect:e})"
                        )));
                    }
                    pending.push(sub);
                }
            }
            None if ambiguous => {
                return Err(Error::UnstableSplit(
                    "averaged operators repeatedly had near-degenerate spectra".into(),
                ))
            }
            None => done.push(u),
        }
    }
    Ok(done)
}

/// Norm of the averaged intertwiner from piece `a` to piece `b`.
fn intertwiner_norm(
    rs: &[DMatrix<f64>],
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    rng: &mut ChaCha8Rng,
) -> f64 {
    let x = DMatrix::from_fn(b.ncols(), a.ncols(), |_, _| rng.gen_range(-1.0..1.0));
    let mut t = DMatrix::zeros(b.ncols(), a.ncols());
    for r in rs {
        let ra = a.transpose() * r * a;
        let rb = b.transpose() * r * b;
        t += rb.transpose() * &x * ra;
    }
    (t / rs.len() as f64).norm()
}

/// Dimension of `{Y : rho(sigma) Y = Y rho(sigma) for all sigma}` via the null
/// space of the stacked commutation system.
pub fn commutant_dim(rho: &[DMatrix<f64>]) -> Result<usize> {
    let k = rho[0].nrows();
    let kk = k * k;
    let mut gram = DMatrix::zeros(kk, kk);
    let id = DMatrix::<f64>::identity(k, k);
    for r in rho {
        let a = id.kronecker(r) - r.transpose().kronecker(&id);
        gram += a.transpose() * a;
    }
    let dec = eig_sym(&gram)?;
    let top = dec.lambda_max().max(1.0);
    Ok(dec.eigenvalues.iter().filter(|&&x| x <= 1e-8 * top).count())
}

fn compare_characters(a: &[f64], b: &[f64]) -> Ordering {
    let q = |x: f64| (x * 1e6).round() as i64;
    for (x, y) in a.iter().zip(b) {
        match q(*y).cmp(&q(*x)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Decomposes the eigenspace into isotypic components. Components are ordered
/// by their character over the closure elements, lexicographically descending.
pub fn isotypic_decompose(
    cluster: &EigenspaceCluster,
    closure: &GroupClosure,
    seed: u64,
) -> Result<IsotypicDecomposition> {
    let rs = compressed_action(cluster, closure)?;
    let d = cluster.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pieces = irreducible_pieces(&rs, &mut rng)?;

    let mut class: Vec<usize> = (0..pieces.len()).collect();
    for b in 0..pieces.len() {
        for a in 0..b {
            if class[a] != a || pieces[a].ncols() != pieces[b].ncols() {
                continue;
            }
            let norm = intertwiner_norm(&rs, &pieces[a], &pieces[b], &mut rng);
            if norm > 1e-6 * pieces[a].ncols() as f64 {
                class[b] = a;
                break;
            }
        }
    }

    let mut components = Vec::new();
    for root in 0..pieces.len() {
        if class[root] != root {
            continue;
        }
        let members: Vec<DMatrix<f64>> = (0..pieces.len())
            .filter(|&i| class[i] == root)
            .map(|i| pieces[i].clone())
            .collect();
        let irr_dim = members[0].ncols();
        let endo_dim = commutant_dim(&restrict(&rs, &members[0]))?;
        if ![1, 2, 4].contains(&endo_dim) {
            return Err(Error::UnstableSplit(format!(
                "commutant of an irreducible has dimension {endo_dim}"
            )));
        }
        let cols: Vec<_> = members
            .iter()
            .flat_map(|p| p.column_iter().map(|c| c.clone_owned()))
            .collect();
        let coords = DMatrix::from_columns(&cols);
        let character = rs
            .iter()
            .map(|r| (coords.transpose() * r * &coords).trace())
            .collect();
        components.push(IsotypicComponent {
            basis: &cluster.basis * &coords,
            coords,
            mult: members.len(),
            irreducibles: members,
            irr_dim,
            endo_dim,
            character,
        });
    }
    components.sort_by(|a, b| compare_characters(&a.character, &b.character));

    let mut proj = DMatrix::zeros(d, d);
    for c in &components {
        proj += &c.coords * c.coords.transpose();
    }
    let residual = (proj - DMatrix::identity(d, d)).norm();
    Ok(IsotypicDecomposition {
        components,
        lambda: cluster.lambda,
        dim: d,
        residual,
    })
}

/// True iff every component satisfies `m <= d / endo_dim`.
pub fn multiplicity_bound_ok(dec: &IsotypicDecomposition) -> bool {
    dec.components
        .iter()
        .all(|c| c.mult * c.endo_dim <= c.irr_dim)
}

/// True iff every component has multiplicity one.
pub fn all_multiplicity_one(dec: &IsotypicDecomposition) -> bool {
    dec.components.iter().all(|c| c.mult == 1)
}

/// A random unit vector (in vertex space) of a multiplicity-one component.
pub fn representative_vector(component: &IsotypicComponent, seed: u64) -> Result<Vec<f64>> {
    if component.mult != 1 {
        return Err(Error::MultiplicityNotOne);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = component.basis.ncols();
    let c = nalgebra::DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0)).normalize();
    Ok((&component.basis * c).iter().copied().collect())
}

/// Compressed action `B^T P(sigma) B` of each given permutation.
pub fn generator_actions(
    cluster: &EigenspaceCluster,
    gens: &[Permutation],
) -> Result<Vec<DMatrix<f64>>> {
    let b = &cluster.basis;
    let (n, d) = b.shape();
    gens.iter()
        .map(|sigma| {
            if sigma.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: sigma.len(),
                });
            }
            let mut moved = DMatrix::zeros(n, d);
            for v in 0..n {
                moved.set_row(sigma.apply(v), &b.row(v));
            }
            Ok(b.transpose() * moved)
        })
        .collect()
}
