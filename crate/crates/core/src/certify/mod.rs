//! Exact and numeric certificates of conformal rigidity, their verification,
//! and disproofs by improving edge weights.

pub mod disproof;
pub mod lp;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{edge_energy, unit_laplacian, Graph};
use crate::repr::{representative_vector, IsotypicComponent, IsotypicDecomposition};
use crate::spectra::{eig_sym, EigenspaceCluster, Side};
use crate::symmetry::{orbit_energy, EdgeOrbitPartition};

pub use disproof::{find_disproof, verify_disproof, Disproof, DisproofOutcome, DisproofParams};
pub use lp::{rational_string, rational_to_f64, rationalize};

/// Largest denominator accepted when reading generator entries as rationals.
pub const RATIONAL_MAX_DEN: i64 = 10_000;
/// Relative error allowed when reading generator entries as rationals.
pub const RATIONAL_TOL: f64 = 1e-10;
/// Accepted `||sum a_j g_j - O||_inf / ||O||_inf` for numeric coefficients.
pub const NUMERIC_CONE_TOL: f64 = 1e-10;

/// Which extremal eigenvalue a certificate or disproof concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Kind {
    Lower,
    Upper,
}

impl Kind {
    pub fn side(self) -> Side {
        match self {
            Kind::Lower => Side::Second,
            Kind::Upper => Side::Largest,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Kind::Lower => "lower",
            Kind::Upper => "upper",
        }
    }
}

/// Polyhedral cone spanned by the orbit energies of one representative per
/// isotypic component.
#[derive(Debug, Clone)]
pub struct ConeModel {
    pub generators: Vec<Vec<f64>>,
    pub reps: Vec<Vec<f64>>,
    pub target: Vec<f64>,
}

/// A representative scaled to squared norm `n / irr_dim`.
fn scaled_representative(component: &IsotypicComponent, unit: Vec<f64>) -> Vec<f64> {
    let n = unit.len() as f64;
    let s = (n / component.irr_dim as f64).sqrt();
    unit.into_iter().map(|x| x * s).collect()
}

fn cone_from_reps(g: &Graph, part: &EdgeOrbitPartition, reps: Vec<Vec<f64>>) -> Result<ConeModel> {
    let generators = reps
        .iter()
        .map(|phi| orbit_energy(g, part, phi).map(|e| e.values))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConeModel {
        generators,
        reps,
        target: part.sizes_f64(),
    })
}

/// One generator per isotypic component. Requires every multiplicity to be one.
pub fn build_cone(
    g: &Graph,
    dec: &IsotypicDecomposition,
    part: &EdgeOrbitPartition,
    seed: u64,
) -> Result<ConeModel> {
    if dec.components.iter().any(|c| c.mult != 1) {
        return Err(Error::MultiplicityObstruction);
    }
    let reps = dec
        .components
        .iter()
        .enumerate()
        .map(|(j, c)| {
            representative_vector(c, seed.wrapping_add(j as u64))
                .map(|u| scaled_representative(c, u))
        })
        .collect::<Result<Vec<_>>>()?;
    cone_from_reps(g, part, reps)
}

/// One generator per isotypic component, taken from its first irreducible
/// copy. Any point of this smaller cone is still a valid certificate.
pub fn build_sub_cone(
    g: &Graph,
    dec: &IsotypicDecomposition,
    part: &EdgeOrbitPartition,
) -> Result<ConeModel> {
    let reps = dec
        .components
        .iter()
        .map(|c| {
            let first = c.irreducibles[0].column(0);
            let phi: Vec<f64> = (&(c.basis.clone() * c.coords.transpose()) * first)
                .iter()
                .copied()
                .collect();
            let norm = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
            scaled_representative(c, phi.into_iter().map(|x| x / norm).collect())
        })
        .collect();
    cone_from_reps(g, part, reps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeMode {
    ExactRational,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Exact(Vec<BigRational>),
    Numeric {
        values: Vec<f64>,
        exact_unavailable: bool,
    },
}

impl Coefficients {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Coefficients::Exact(v) => v.iter().map(rational_to_f64).collect(),
            Coefficients::Numeric { values, .. } => values.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficients::Exact(_))
    }

    /// Exact coefficients as `"p/q"` strings, decimal strings otherwise.
    pub fn strings(&self) -> Vec<String> {
        match self {
            Coefficients::Exact(v) => v.iter().map(rational_string).collect(),
            Coefficients::Numeric { values, .. } => {
                values.iter().map(|x| format!("{x:e}")).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConeSolution {
    Found(Coefficients),
    /// No point of the cone equals the orbit sizes. In exact mode this is a proof.
    Infeasible {
        exact: bool,
    },
}

fn rationalize_all(values: &[f64]) -> Option<Vec<BigRational>> {
    values
        .iter()
        .map(|&x| rationalize(x, RATIONAL_MAX_DEN, RATIONAL_TOL * x.abs().max(1.0)))
        .collect()
}

fn numeric_membership(cone: &ConeModel, exact_unavailable: bool) -> ConeSolution {
    let s = cone.target.len();
    let h = cone.generators.len();
    let a = DMatrix::from_fn(s, h, |i, j| cone.generators[j][i]);
    let b = DVector::from_column_slice(&cone.target);
    let x = lp::nnls(&a, &b);
    let residual = (&a * &x - &b).amax();
    if residual <= NUMERIC_CONE_TOL * b.amax().max(1.0) {
        ConeSolution::Found(Coefficients::Numeric {
            values: x.iter().copied().collect(),
            exact_unavailable,
        })
    } else {
        ConeSolution::Infeasible { exact: false }
    }
}

/// Finds `a >= 0` with `sum_j a_j g_j = O`. Exact mode reads the generators as
/// small rationals and runs rational phase-one simplex; when that is not
/// possible it falls back to nonnegative least squares and flags the result.
pub fn solve_cone_membership(cone: &ConeModel, mode: ConeMode) -> ConeSolution {
    if mode == ConeMode::Numeric {
        return numeric_membership(cone, false);
    }
    let target = rationalize_all(&cone.target);
    let gens: Option<Vec<Vec<BigRational>>> =
        cone.generators.iter().map(|g| rationalize_all(g)).collect();
    let (Some(target), Some(gens)) = (target, gens) else {
        return numeric_membership(cone, true);
    };
    let rows: Vec<Vec<BigRational>> = (0..target.len())
        .map(|i| gens.iter().map(|g| g[i].clone()).collect())
        .collect();
    match lp::feasible_point(&rows, &target) {
        Some(x) => ConeSolution::Found(Coefficients::Exact(x)),
        None => ConeSolution::Infeasible { exact: true },
    }
}

/// `sum_j a_j g_j - O` evaluated exactly. Only meaningful when every generator
/// entry rationalizes.
pub fn exact_cone_residual(cone: &ConeModel, a: &[BigRational]) -> Option<Vec<BigRational>> {
    let target = rationalize_all(&cone.target)?;
    let gens: Vec<Vec<BigRational>> = cone
        .generators
        .iter()
        .map(|g| rationalize_all(g))
        .collect::<Option<_>>()?;
    Some(
        (0..target.len())
            .map(|i| {
                gens.iter()
                    .zip(a)
                    .fold(BigRational::zero(), |acc, (g, aj)| {
                        acc + g[i].clone() * aj.clone()
                    })
                    - target[i].clone()
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateResiduals {
    pub eigen_residual: f64,
    pub orbit_residual: f64,
    pub nonneg_slack: f64,
}

/// A single eigenvector `phi = sum_j sqrt(a_j) phi_j` whose orbit energies
/// equal the orbit sizes.
#[derive(Debug, Clone)]
pub struct ConicCertificate {
    pub coeffs: Coefficients,
    pub phi: Vec<f64>,
    pub lambda: f64,
    pub kind: Kind,
    pub residuals: CertificateResiduals,
}

pub fn assemble_certificate(
    g: &Graph,
    part: &EdgeOrbitPartition,
    cone: &ConeModel,
    coeffs: Coefficients,
    cluster: &EigenspaceCluster,
    kind: Kind,
) -> Result<ConicCertificate> {
    let a = coeffs.to_f64();
    if a.len() != cone.reps.len() {
        return Err(Error::DimensionMismatch {
            expected: cone.reps.len(),
            found: a.len(),
        });
    }
    let nonneg_slack = a.iter().copied().fold(f64::INFINITY, f64::min);
    if nonneg_slack < -1e-12 {
        return Err(Error::InvalidWeights(format!(
            "negative cone coefficient {nonneg_slack:e}"
        )));
    }
    let n = g.n();
    let mut phi = vec![0.0; n];
    for (aj, rep) in a.iter().zip(&cone.reps) {
        let s = aj.max(0.0).sqrt();
        for (p, r) in phi.iter_mut().zip(rep) {
            *p += s * r;
        }
    }
    let energy = orbit_energy(g, part, &phi)?.values;
    let scale = cone.target.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let orbit_residual = energy
        .iter()
        .zip(&cone.target)
        .map(|(e, t)| (e - t).abs())
        .fold(0.0, f64::max)
        / scale;
    let l = unit_laplacian(g);
    let v = DVector::from_column_slice(&phi);
    let eigen_residual = (&l * &v - &v * cluster.lambda).norm() / v.norm().max(f64::MIN_POSITIVE);
    if orbit_residual > 1e-8 {
        return Err(Error::ResidualTooLarge(orbit_residual));
    }
    Ok(ConicCertificate {
        coeffs,
        phi,
        lambda: cluster.lambda,
        kind,
        residuals: CertificateResiduals {
            eigen_residual,
            orbit_residual,
            nonneg_slack: nonneg_slack.max(0.0),
        },
    })
}

/// Clause of a certificate that failed verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailedClause {
    NotEigenvector,
    WrongEigenvalue,
    NotProportional,
    NegativeCoefficient,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub failed: Option<FailedClause>,
    /// `c` with `sum_j a_j l(phi_j) = c * O`.
    pub c: f64,
    /// `c` after rescaling so that `sum_j a_j ||phi_j||^2 = n`.
    pub c_normalized: f64,
    pub max_eigen_residual: f64,
    pub proportionality_residual: f64,
}

/// Independent re-check of a certificate using only the Laplacian spectrum
/// and orbit energies.
pub fn verify_certificate(
    g: &Graph,
    part: &EdgeOrbitPartition,
    vectors: &[(f64, Vec<f64>)],
    lambda: f64,
    kind: Kind,
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport {
        passed: false,
        failed: None,
        c: 0.0,
        c_normalized: 0.0,
        max_eigen_residual: 0.0,
        proportionality_residual: 0.0,
    };
    if vectors.is_empty() {
        report.failed = Some(FailedClause::Empty);
        return Ok(report);
    }
    let l = unit_laplacian(g);
    let dec = eig_sym(&l)?;
    let scale = dec.lambda_max().max(1.0);
    let mut total = vec![0.0; part.s()];
    let mut mass = 0.0;
    for (a, phi) in vectors {
        if phi.len() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                found: phi.len(),
            });
        }
        let v = DVector::from_column_slice(phi);
        let res = (&l * &v - &v * lambda).norm() / v.norm().max(f64::MIN_POSITIVE);
        report.max_eigen_residual = report.max_eigen_residual.max(res);
        let e = orbit_energy(g, part, phi)?.values;
        for (t, x) in total.iter_mut().zip(&e) {
            *t += a * x;
        }
        mass += a * v.norm_squared();
    }
    let sizes = part.sizes_f64();
    let c = total.iter().zip(&sizes).map(|(t, o)| t * o).sum::<f64>()
        / sizes.iter().map(|o| o * o).sum::<f64>();
    report.c = c;
    report.c_normalized = if mass > 0.0 {
        c * g.n() as f64 / mass
    } else {
        0.0
    };
    let tmax = total
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    report.proportionality_residual = total
        .iter()
        .zip(&sizes)
        .map(|(t, o)| (t - c * o).abs())
        .fold(0.0, f64::max)
        / tmax;

    let expected = match kind {
        Kind::Lower => dec.lambda2(),
        Kind::Upper => dec.lambda_max(),
    };
    report.failed = if vectors.iter().any(|(a, _)| *a < 0.0) {
        Some(FailedClause::NegativeCoefficient)
    } else if report.max_eigen_residual > tol * scale {
        Some(FailedClause::NotEigenvector)
    } else if (expected - lambda).abs() > tol * scale {
        Some(FailedClause::WrongEigenvalue)
    } else if c <= 0.0 || report.proportionality_residual > tol {
        Some(FailedClause::NotProportional)
    } else {
        None
    };
    report.passed = report.failed.is_none();
    Ok(report)
}

/// The `+1/-1` vector of a bipartition, when the graph is bipartite.
pub fn bipartite_alternating(g: &Graph) -> Option<Vec<f64>> {
    g.bipartition().map(|side| {
        side.into_iter()
            .map(|s| if s { 1.0 } else { -1.0 })
            .collect()
    })
}

/// For a regular bipartite graph, the alternating vector is a top eigenvector
/// with every edge energy equal to 4. Returns it after checking each edge.
pub fn regular_bipartite_certificate(g: &Graph) -> Option<Vec<f64>> {
    g.regular_degree()?;
    let phi = bipartite_alternating(g)?;
    let e = edge_energy(g, &phi).ok()?;
    e.values.iter().all(|&x| x == 4.0).then_some(phi)
}

/// `<B x, L^i B x> - |O_i|` for each orbit, where `B` is any `n x d` basis.
pub fn quadratic_system_residual(
    g: &Graph,
    basis: &DMatrix<f64>,
    part: &EdgeOrbitPartition,
    x: &[f64],
) -> Result<Vec<f64>> {
    if x.len() != basis.ncols() {
        return Err(Error::DimensionMismatch {
            expected: basis.ncols(),
            found: x.len(),
        });
    }
    let phi = basis * DVector::from_column_slice(x);
    let e = orbit_energy(g, part, phi.as_slice())?.values;
    Ok(e.iter().zip(part.sizes_f64()).map(|(v, o)| v - o).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{circulant, named};
    use crate::repr::isotypic_decompose;
    use crate::spectra::{cluster_eigenspace, DEFAULT_CLUSTER_TOL};
    use crate::symmetry::{
        automorphism_generators, close_group, edge_orbits, GroupClosure, GroupGenerators,
        Permutation, DEFAULT_NODE_BUDGET,
    };
    use num_bigint::BigInt;
    use std::f64::consts::PI;

    fn cluster(g: &Graph, side: Side) -> EigenspaceCluster {
        cluster_eigenspace(
            &eig_sym(&unit_laplacian(g)).unwrap(),
            side,
            DEFAULT_CLUSTER_TOL,
        )
        .unwrap()
    }

    fn rotation_group(g: &Graph) -> (GroupGenerators, GroupClosure) {
        let gens = GroupGenerators::new(g, vec![Permutation::rotation(g.n(), 1)]).unwrap();
        let closure = close_group(&gens, 1000).unwrap();
        (gens, closure)
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    fn z12_cone() -> (Graph, EdgeOrbitPartition, EigenspaceCluster, ConeModel) {
        let g = circulant(12, &[2, 3]).unwrap();
        let (gens, closure) = rotation_group(&g);
        let part = edge_orbits(&g, &gens);
        let cl = cluster(&g, Side::Second);
        let dec = isotypic_decompose(&cl, &closure, 0).unwrap();
        let cone = build_cone(&g, &dec, &part, 0).unwrap();
        (g, part, cl, cone)
    }

    #[test]
    fn z12_generators_and_exact_coefficients() {
        let (g, part, cl, cone) = z12_cone();
        let expect = [[6.0, 12.0], [18.0, 0.0], [6.0, 12.0]];
        for (gen, e) in cone.generators.iter().zip(&expect) {
            assert!(
                (gen[0] - e[0]).abs() < 1e-8 && (gen[1] - e[1]).abs() < 1e-8,
                "{gen:?}"
            );
        }
        let ConeSolution::Found(coeffs) = solve_cone_membership(&cone, ConeMode::ExactRational)
        else {
            panic!("cone membership failed");
        };
        assert_eq!(coeffs, Coefficients::Exact(vec![q(1, 1), q(1, 3), q(0, 1)]));
        assert_eq!(coeffs.strings(), vec!["1", "1/3", "0"]);
        let Coefficients::Exact(a) = &coeffs else {
            unreachable!()
        };
        assert!(exact_cone_residual(&cone, a)
            .unwrap()
            .iter()
            .all(Zero::is_zero));
        let cert = assemble_certificate(&g, &part, &cone, coeffs, &cl, Kind::Lower).unwrap();
        assert!(cert.residuals.orbit_residual < 1e-9 && cert.residuals.eigen_residual < 1e-9);
        let rep = verify_certificate(
            &g,
            &part,
            &[(1.0, cert.phi.clone())],
            cl.lambda,
            Kind::Lower,
            1e-8,
        )
        .unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!((rep.c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn z12_numeric_mode_agrees() {
        let (_, _, _, cone) = z12_cone();
        let ConeSolution::Found(c) = solve_cone_membership(&cone, ConeMode::Numeric) else {
            panic!()
        };
        let a = c.to_f64();
        for i in 0..2 {
            let v: f64 = a
                .iter()
                .zip(&cone.generators)
                .map(|(aj, g)| aj * g[i])
                .sum();
            assert!((v - 12.0).abs() < 1e-9);
        }
    }

    #[test]
    fn z21_single_generator_is_numeric() {
        let g = circulant(21, &[1, 6]).unwrap();
        let (gens, closure) = rotation_group(&g);
        let part = edge_orbits(&g, &gens);
        let cl = cluster(&g, Side::Second);
        let dec = isotypic_decompose(&cl, &closure, 0).unwrap();
        let cone = build_cone(&g, &dec, &part, 0).unwrap();
        assert_eq!(cone.generators.len(), 1);
        assert!((cone.generators[0][0] - cone.generators[0][1]).abs() < 1e-9);
        match solve_cone_membership(&cone, ConeMode::ExactRational) {
            ConeSolution::Found(Coefficients::Numeric {
                values,
                exact_unavailable,
            }) => {
                assert!(exact_unavailable);
                let scaled: Vec<f64> = cone.generators[0].iter().map(|x| x * values[0]).collect();
                assert!((scaled[0] - 21.0).abs() < 1e-8 && (scaled[1] - 21.0).abs() < 1e-8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn z21_cosine_sine_certificates() {
        let g = circulant(21, &[1, 6]).unwrap();
        let (gens, _) = rotation_group(&g);
        let part = edge_orbits(&g, &gens);
        for (k, kind) in [(3.0, Kind::Lower), (9.0, Kind::Upper)] {
            // 3 and 9 are the frequencies j with 2 pi j / 21 equal to 2 pi / 7 and 6 pi / 7.
            let cos: Vec<f64> = (0..21)
                .map(|v| (2.0 * PI * k * v as f64 / 21.0).cos())
                .collect();
            let sin: Vec<f64> = (0..21)
                .map(|v| (2.0 * PI * k * v as f64 / 21.0).sin())
                .collect();
            let lam = 2.0 * (2.0 - (2.0 * PI * k / 21.0).cos() - (12.0 * PI * k / 21.0).cos());
            let rep =
                verify_certificate(&g, &part, &[(1.0, cos), (1.0, sin)], lam, kind, 1e-8).unwrap();
            assert!(rep.passed, "{rep:?}");
            let angle = if kind == Kind::Lower {
                2.0 * PI / 7.0
            } else {
                6.0 * PI / 7.0
            };
            assert!((rep.c_normalized - 2.0 * (1.0 - angle.cos())).abs() < 1e-6);
        }
    }

    #[test]
    fn z21_per_edge_certificate() {
        let g = circulant(21, &[1, 6]).unwrap();
        let part = EdgeOrbitPartition::per_edge(&g);
        let cl = cluster(&g, Side::Second);
        let vectors: Vec<(f64, Vec<f64>)> = (0..2)
            .map(|k| (1.0, cl.basis.column(k).iter().copied().collect()))
            .collect();
        let rep = verify_certificate(&g, &part, &vectors, cl.lambda, Kind::Lower, 1e-8).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn desargues_alternating_certificate() {
        let g = named::desargues();
        let phi = regular_bipartite_certificate(&g).unwrap();
        let part = EdgeOrbitPartition::per_edge(&g);
        let rep =
            verify_certificate(&g, &part, &[(1.0, phi.clone())], 6.0, Kind::Upper, 1e-10).unwrap();
        assert!(rep.passed);
        assert!(edge_energy(&g, &phi)
            .unwrap()
            .values
            .iter()
            .all(|&x| x == 4.0));
    }

    #[test]
    fn verification_rejects_bad_inputs() {
        let g = named::petersen();
        let part = EdgeOrbitPartition::per_edge(&g);
        let cl = cluster(&g, Side::Second);
        let phi: Vec<f64> = cl.basis.column(0).iter().copied().collect();
        let wrong =
            verify_certificate(&g, &part, &[(1.0, phi.clone())], 5.0, Kind::Upper, 1e-8).unwrap();
        assert_eq!(wrong.failed, Some(FailedClause::NotEigenvector));
        let neg =
            verify_certificate(&g, &part, &[(-1.0, phi)], cl.lambda, Kind::Lower, 1e-8).unwrap();
        assert_eq!(neg.failed, Some(FailedClause::NegativeCoefficient));
        let empty = verify_certificate(&g, &part, &[], 2.0, Kind::Lower, 1e-8).unwrap();
        assert_eq!(empty.failed, Some(FailedClause::Empty));
        let ones = vec![1.0; 10];
        let zero = verify_certificate(&g, &part, &[(1.0, ones)], 0.0, Kind::Lower, 1e-8).unwrap();
        assert_eq!(zero.failed, Some(FailedClause::WrongEigenvalue));
    }

    #[test]
    fn barbell_is_not_proportional() {
        let g = named::barbell();
        let part = EdgeOrbitPartition::per_edge(&g);
        let cl = cluster(&g, Side::Second);
        let phi: Vec<f64> = cl.basis.column(0).iter().copied().collect();
        let rep =
            verify_certificate(&g, &part, &[(1.0, phi)], cl.lambda, Kind::Lower, 1e-8).unwrap();
        assert_eq!(rep.failed, Some(FailedClause::NotProportional));
    }

    #[test]
    fn friendship_lower_cone_infeasible() {
        let g = named::friendship(3);
        let gens = automorphism_generators(&g, &[], DEFAULT_NODE_BUDGET).unwrap();
        let part = edge_orbits(&g, &gens);
        let cl = cluster(&g, Side::Second);
        let dec = isotypic_decompose(&cl, &close_group(&gens, 1000).unwrap(), 0).unwrap();
        let cone = build_cone(&g, &dec, &part, 0).unwrap();
        assert_eq!(
            solve_cone_membership(&cone, ConeMode::ExactRational),
            ConeSolution::Infeasible { exact: true }
        );
    }

    #[test]
    fn petersen_cones_are_rational() {
        let g = named::petersen();
        let gens = automorphism_generators(&g, &[], DEFAULT_NODE_BUDGET).unwrap();
        let closure = close_group(&gens, 1000).unwrap();
        let part = edge_orbits(&g, &gens);
        for (side, expect) in [(Side::Second, q(15, 4)), (Side::Largest, q(6, 5))] {
            let dec = isotypic_decompose(&cluster(&g, side), &closure, 0).unwrap();
            let cone = build_cone(&g, &dec, &part, 0).unwrap();
            let ConeSolution::Found(Coefficients::Exact(a)) =
                solve_cone_membership(&cone, ConeMode::ExactRational)
            else {
                panic!("expected exact coefficients");
            };
            assert_eq!(a, vec![expect]);
        }
    }

    #[test]
    fn multiplicity_obstruction() {
        let g = named::petersen();
        let part = EdgeOrbitPartition::per_edge(&g);
        let closure = close_group(&GroupGenerators::trivial(&g), 1).unwrap();
        let dec = isotypic_decompose(&cluster(&g, Side::Second), &closure, 0).unwrap();
        assert_eq!(
            build_cone(&g, &dec, &part, 0).unwrap_err(),
            Error::MultiplicityObstruction
        );
        let sub = build_sub_cone(&g, &dec, &part).unwrap();
        assert_eq!(sub.generators.len(), 1);
    }

    #[test]
    fn cn6b_quadratic_system() {
        let g = named::crossing_number_6b();
        let gens = automorphism_generators(&g, &[], DEFAULT_NODE_BUDGET).unwrap();
        let part = edge_orbits(&g, &gens);
        let rows = named::crossing_number_6b_basis();
        let basis = DMatrix::from_fn(20, 3, |r, c| rows[c][r]);
        let x = [1.0 - 2f64.sqrt() / 2.0, 2.0, -2.0];
        let r = quadratic_system_residual(&g, &basis, &part, &x).unwrap();
        assert!(r.iter().all(|v| v.abs() <= 1e-8), "{r:?}");
        let zero = quadratic_system_residual(&g, &basis, &part, &[0.0; 3]).unwrap();
        assert_eq!(
            zero,
            part.sizes_f64().iter().map(|o| -o).collect::<Vec<_>>()
        );
    }

    #[test]
    fn z12_quadratic_system_at_certificate() {
        let g = circulant(12, &[2, 3]).unwrap();
        let (gens, _) = rotation_group(&g);
        let part = edge_orbits(&g, &gens);
        let basis = DMatrix::from_fn(12, 2, |v, c| {
            let f = [1.0, 4.0][c];
            (2.0 * PI * f * v as f64 / 12.0).cos()
        });
        let r = quadratic_system_residual(&g, &basis, &part, &[1.0, 1.0 / 3f64.sqrt()]).unwrap();
        assert!(r.iter().all(|v| v.abs() <= 1e-9), "{r:?}");
    }

    #[test]
    fn alternating_vector_requires_regular_bipartite() {
        assert!(regular_bipartite_certificate(&named::cycle(5)).is_none());
        assert!(regular_bipartite_certificate(&named::path(4)).is_none());
        assert!(regular_bipartite_certificate(&named::hypercube(3)).is_some());
        assert!(bipartite_alternating(&named::path(4)).is_some());
    }
}
