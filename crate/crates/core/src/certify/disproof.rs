//! Disproof of conformal rigidity by an explicit improving weighting.
//!
//! A perturbation `y`, constant on edge orbits with `<y, O> = 0`, raises
//! `lambda_2` to first order when `<y, l(phi)> > 0` for every unit `phi` in
//! the eigenspace. Such a `y` is found by a cutting-plane linear program whose
//! separation oracle is the bottom eigenvector of `sum_i y_i B^T L^i B`. A
//! line search along `1 + delta y` turns it into a concrete weighting, which is
//! then improved by repeating the same step at the new weights.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lp::{simplex, LpOutcome};
use super::Kind;
use crate::error::{Error, Result};
use crate::graphcore::{laplacian, unit_laplacian, Graph, WeightVector};
use crate::spectra::{eig_sym, orthonormalize, EigenspaceCluster};
use crate::symmetry::{orbit_laplacians, EdgeOrbitPartition};

/// Tuning of the disproof search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisproofParams {
    /// Required strict improvement of the eigenvalue.
    pub margin: f64,
    /// First-order gains at or below this are treated as zero.
    pub t_eps: f64,
    pub max_cuts: usize,
    pub delta_start: f64,
    pub delta_min: f64,
    pub polish_rounds: usize,
    /// Relative width of the near-eigenspace used while polishing.
    pub polish_window: f64,
}

impl Default for DisproofParams {
    fn default() -> Self {
        DisproofParams {
            margin: 1e-7,
            t_eps: 1e-8,
            max_cuts: 200,
            delta_start: 0.5,
            delta_min: 1e-6,
            polish_rounds: 100,
            polish_window: 1e-3,
        }
    }
}

/// Normalized weights that beat the uniform weighting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disproof {
    pub w: Vec<f64>,
    pub achieved: f64,
    pub baseline: f64,
    /// `achieved - baseline` for lower, `baseline - achieved` for upper.
    pub margin: f64,
    pub kind: Kind,
    /// Step length of the first accepted line-search step.
    pub delta: f64,
    /// Number of accepted improvement steps.
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DisproofOutcome {
    Found(Disproof),
    /// The best first-order gain is at most `t_eps`.
    NumericallyRigid {
        t: f64,
    },
}

/// A first-order improving direction on orbits and its guaranteed gain.
struct Direction {
    y: Vec<f64>,
    gain: f64,
}

fn compressed(basis: &DMatrix<f64>, lis: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    lis.iter().map(|l| basis.transpose() * l * basis).collect()
}

fn energies(ops: &[DMatrix<f64>], x: &DVector<f64>) -> Vec<f64> {
    ops.iter().map(|a| x.dot(&(a * x))).collect()
}

/// Bottom eigenpair of `sum_i y_i ops_i`.
fn oracle(ops: &[DMatrix<f64>], y: &[f64]) -> Result<(f64, DVector<f64>)> {
    let d = ops[0].nrows();
    let m = ops
        .iter()
        .zip(y)
        .fold(DMatrix::zeros(d, d), |acc, (a, yi)| acc + a * *yi);
    let dec = eig_sym(&((&m + m.transpose()) * 0.5))?;
    Ok((dec.eigenvalues[0], dec.eigenvectors.column(0).clone_owned()))
}

/// `max t` subject to `<y, e_k> >= t` for every cut, `<y, O> = 0`, `|y_i| <= 1`.
fn cut_lp(cuts: &[Vec<f64>], sizes: &[f64]) -> Option<(Vec<f64>, f64)> {
    let s = sizes.len();
    let k = cuts.len();
    // Columns: u (s), v (s), t+, t-, r (k).  y = u - 1, u + v = 2.
    let ncol = 2 * s + 2 + k;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..s {
        let mut row = vec![0.0; ncol];
        row[i] = 1.0;
        row[s + i] = 1.0;
        a.push(row);
        b.push(2.0);
    }
    let mut row = vec![0.0; ncol];
    row[..s].copy_from_slice(sizes);
    a.push(row);
    b.push(sizes.iter().sum());
    for (j, e) in cuts.iter().enumerate() {
        let mut row = vec![0.0; ncol];
        row[..s].copy_from_slice(e);
        row[2 * s] = -1.0;
        row[2 * s + 1] = 1.0;
        row[2 * s + 2 + j] = -1.0;
        a.push(row);
        b.push(e.iter().sum());
    }
    let mut cost = vec![0.0; ncol];
    cost[2 * s] = -1.0;
    cost[2 * s + 1] = 1.0;
    match simplex(&a, &b, &cost) {
        LpOutcome::Optimal { x, .. } => {
            let y = x[..s].iter().map(|u| u - 1.0).collect();
            Some((y, x[2 * s] - x[2 * s + 1]))
        }
        _ => None,
    }
}

/// Cutting-plane search for a direction maximizing the worst first-order gain
/// over unit vectors of `basis`.
fn best_direction(
    ops: &[DMatrix<f64>],
    sizes: &[f64],
    params: &DisproofParams,
) -> Result<Direction> {
    let d = ops[0].nrows();
    let mut cuts = vec![energies(
        ops,
        &DVector::from_fn(d, |i, _| if i == 0 { 1.0 } else { 0.0 }),
    )];
    let mut best = Direction {
        y: vec![0.0; sizes.len()],
        gain: 0.0,
    };
    for _ in 0..params.max_cuts {
        let Some((y, t)) = cut_lp(&cuts, sizes) else {
            break;
        };
        let (mu, x) = oracle(ops, &y)?;
        if mu > best.gain {
            best = Direction {
                y: y.clone(),
                gain: mu,
            };
        }
        if mu >= t - 1e-9 * (1.0 + t.abs()) || t <= params.t_eps {
            break;
        }
        cuts.push(energies(ops, &x));
    }
    Ok(best)
}

fn expand(part: &EdgeOrbitPartition, y: &[f64]) -> Vec<f64> {
    part.orbit_of.iter().map(|&o| y[o]).collect()
}

/// `w + delta y`, clipped at zero and rescaled to sum `m`.
fn step(w: &[f64], y_edges: &[f64], delta: f64) -> Option<Vec<f64>> {
    let raw: Vec<f64> = w
        .iter()
        .zip(y_edges)
        .map(|(a, b)| (a + delta * b).max(0.0))
        .collect();
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let m = w.len() as f64;
    Some(raw.into_iter().map(|x| x * m / total).collect())
}

fn extremal(g: &Graph, w: &[f64], kind: Kind) -> Result<f64> {
    let dec = eig_sym(&laplacian(g, &WeightVector::new(w.to_vec())?)?)?;
    Ok(match kind {
        Kind::Lower => dec.lambda2(),
        Kind::Upper => dec.lambda_max(),
    })
}

fn improvement(kind: Kind, from: f64, to: f64) -> f64 {
    match kind {
        Kind::Lower => to - from,
        Kind::Upper => from - to,
    }
}

/// Geometric line search; returns the first step beating `current + margin`.
fn line_search(
    g: &Graph,
    w: &[f64],
    y_edges: &[f64],
    current: f64,
    kind: Kind,
    params: &DisproofParams,
) -> Result<Option<(Vec<f64>, f64, f64)>> {
    let mut delta = params.delta_start;
    while delta >= params.delta_min {
        if let Some(cand) = step(w, y_edges, delta) {
            let value = extremal(g, &cand, kind)?;
            if improvement(kind, current, value) > params.margin {
                return Ok(Some((cand, value, delta)));
            }
        }
        delta *= 0.5;
    }
    Ok(None)
}

/// Orthonormal basis of the eigenvectors of `L(w)` whose eigenvalues lie
/// within the polishing window of the extremal one.
fn near_eigenspace(g: &Graph, w: &[f64], kind: Kind, window: f64) -> Result<DMatrix<f64>> {
    let dec = eig_sym(&laplacian(g, &WeightVector::new(w.to_vec())?)?)?;
    let n = dec.eigenvalues.len();
    let width = window * dec.lambda_max().max(1.0);
    let anchor = match kind {
        Kind::Lower => dec.eigenvalues[1],
        Kind::Upper => dec.eigenvalues[n - 1],
    };
    let idx: Vec<usize> = (1..n)
        .filter(|&k| (dec.eigenvalues[k] - anchor).abs() <= width)
        .collect();
    let raw = DMatrix::from_fn(n, idx.len(), |r, c| dec.eigenvectors[(r, idx[c])]);
    Ok(orthonormalize(&raw))
}

fn signed(kind: Kind, y: Vec<f64>) -> Vec<f64> {
    match kind {
        Kind::Lower => y,
        Kind::Upper => y.into_iter().map(|v| -v).collect(),
    }
}

/// Searches for normalized weights beating the uniform weighting.
pub fn find_disproof(
    g: &Graph,
    cluster: &EigenspaceCluster,
    part: &EdgeOrbitPartition,
    kind: Kind,
    params: &DisproofParams,
) -> Result<DisproofOutcome> {
    if part.orbit_of.len() != g.m() {
        return Err(Error::DimensionMismatch {
            expected: g.m(),
            found: part.orbit_of.len(),
        });
    }
    let lis = orbit_laplacians(g, part);
    let sizes = part.sizes_f64();
    let dir = best_direction(&compressed(&cluster.basis, &lis), &sizes, params)?;
    if dir.gain <= params.t_eps {
        return Ok(DisproofOutcome::NumericallyRigid { t: dir.gain });
    }
    let uniform = vec![1.0; g.m()];
    let baseline = extremal(g, &uniform, kind)?;
    let y_edges = expand(part, &signed(kind, dir.y));
    let Some((mut w, mut value, delta)) =
        line_search(g, &uniform, &y_edges, baseline, kind, params)?
    else {
        return Err(Error::LineSearchFailed { t: dir.gain });
    };

    let mut rounds = 1;
    for _ in 0..params.polish_rounds {
        let basis = near_eigenspace(g, &w, kind, params.polish_window)?;
        let dir = best_direction(&compressed(&basis, &lis), &sizes, params)?;
        if dir.gain <= params.t_eps {
            break;
        }
        let y_edges = expand(part, &signed(kind, dir.y));
        match line_search(g, &w, &y_edges, value, kind, params)? {
            Some((next, v, _)) => {
                w = next;
                value = v;
                rounds += 1;
            }
            None => break,
        }
    }
    Ok(DisproofOutcome::Found(Disproof {
        w,
        achieved: value,
        baseline,
        margin: improvement(kind, baseline, value),
        kind,
        delta,
        rounds,
    }))
}

/// Recomputes both spectra and checks normalization, nonnegativity and a
/// strict improvement larger than `1e-7`.
pub fn verify_disproof(g: &Graph, d: &Disproof, kind: Kind) -> bool {
    if d.w.len() != g.m() || d.w.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return false;
    }
    let m = g.m() as f64;
    if (d.w.iter().sum::<f64>() - m).abs() > 1e-9 * m {
        return false;
    }
    let dec = match eig_sym(&unit_laplacian(g)) {
        Ok(dec) => dec,
        Err(_) => return false,
    };
    let baseline = match kind {
        Kind::Lower => dec.lambda2(),
        Kind::Upper => dec.lambda_max(),
    };
    match extremal(g, &d.w, kind) {
        Ok(value) => improvement(kind, baseline, value) > 1e-7,
        Err(_) => false,
    }
}
