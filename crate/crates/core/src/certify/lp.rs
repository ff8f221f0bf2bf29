//! Dense two-phase simplex over a generic ordered field.
//!
//! Solves `min c^T x` subject to `A x = b`, `x >= 0` with Bland's rule. The
//! same code runs over exact rationals (cone membership) and over `f64`
//! (cutting-plane subproblems of the disproof search).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the simplex. `is_negligible` is exact for rationals
/// and a small absolute threshold for floats.
pub trait LpScalar:
    Clone
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn is_negligible(&self) -> bool;

    fn is_positive_strict(&self) -> bool {
        !self.is_negligible() && *self > Self::zero()
    }

    fn is_negative_strict(&self) -> bool {
        !self.is_negligible() && *self < Self::zero()
    }
}

impl LpScalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= 1e-11
    }
}

impl LpScalar for BigRational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, objective: T },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    obj: Vec<T>,
    obj_rhs: T,
    basis: Vec<usize>,
    allowed: Vec<bool>,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * prhs.clone();
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.obj_rhs = self.obj_rhs.clone() - f * prhs;
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, cost: &[T]) {
        self.obj = cost.to_vec();
        self.obj_rhs = T::zero();
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = cost[bj].clone();
            if cb.is_zero() {
                continue;
            }
            for (v, a) in self.obj.iter_mut().zip(&self.rows[i]) {
                *v = v.clone() - cb.clone() * a.clone();
            }
            self.obj_rhs = self.obj_rhs.clone() - cb * self.rhs[i].clone();
        }
    }

    /// Runs Bland's rule to optimality. Returns false when unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let entering =
                (0..self.obj.len()).find(|&j| self.allowed[j] && self.obj[j].is_negative_strict());
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive_strict() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / self.rows[i][c].clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        let diff = ratio.clone() - br.clone();
                        diff.is_negative_strict()
                            || (diff.is_negligible() && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Minimizes `cost . x` over `{x >= 0 : a x = b}`. Rows of `a` must all have
/// length `cost.len()`.
pub fn simplex<T: LpScalar>(a: &[Vec<T>], b: &[T], cost: &[T]) -> LpOutcome<T> {
    let m = a.len();
    let n = cost.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "constraint row has wrong length");
        let flip = *bi < T::zero();
        let mut r: Vec<T> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        rows.push(r);
        rhs.push(if flip { -bi.clone() } else { bi.clone() });
    }
    let total = n + m;
    let mut t = Tableau {
        rows,
        rhs,
        obj: vec![T::zero(); total],
        obj_rhs: T::zero(),
        basis: (n..total).collect(),
        allowed: vec![true; total],
    };

    let mut phase1 = vec![T::zero(); total];
    for c in phase1.iter_mut().skip(n) {
        *c = T::one();
    }
    t.set_objective(&phase1);
    t.optimize();
    let infeasibility = -t.obj_rhs.clone();
    if !infeasibility.is_negligible() {
        return LpOutcome::Infeasible;
    }

    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_negligible()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for j in n..total {
        t.allowed[j] = false;
    }
    let mut phase2 = cost.to_vec();
    phase2.extend((0..m).map(|_| T::zero()));
    t.set_objective(&phase2);
    if !t.optimize() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rhs[r].clone();
        }
    }
    let objective = x
        .iter()
        .zip(cost)
        .fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone());
    LpOutcome::Optimal { x, objective }
}

/// A point of `{x >= 0 : a x = b}`, if any.
pub fn feasible_point<T: LpScalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.first().map_or(0, Vec::len);
    match simplex(a, b, &vec![T::zero(); n]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Best rational approximation by continued fractions with denominator at
/// most `max_den`, accepted only when within `tol` of `x`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = rest - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rest = 1.0 / frac;
    }
    if k1 != 0 && ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
        return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
    }
    None
}

/// `p/q` as a decimal-free string, `"p"` when `q = 1`.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Nonnegative least squares `min ||A x - b||_2, x >= 0` (Lawson and Hanson).
pub fn nnls(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
    use nalgebra::{DMatrix, DVector};
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-12 * a.amax().max(1.0) * b.amax().max(1.0) * (n.max(1) as f64);
    let solve_passive = |passive: &[bool]| -> DVector<f64> {
        let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
        let sol = sub
            .svd(true, true)
            .solve(b, 1e-14)
            .unwrap_or_else(|_| DVector::zeros(idx.len()));
        let mut z = DVector::zeros(n);
        for (k, &j) in idx.iter().enumerate() {
            z[j] = sol[k];
        }
        z
    };
    for _ in 0..(3 * n + 10) {
        let grad = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j] && grad[j] > tol)
            .max_by(|&i, &j| grad[i].total_cmp(&grad[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;
        loop {
            let z = solve_passive(&passive);
            if (0..n).filter(|&k| passive[k]).all(|k| z[k] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for k in (0..n).filter(|&k| passive[k] && z[k] <= 0.0) {
                alpha = alpha.min(x[k] / (x[k] - z[k]));
            }
            x += (z - &x) * alpha;
            for k in 0..n {
                if passive[k] && x[k].abs() <= 1e-15 {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
        }
    }
    x.map(|v| v.max(0.0))
}
