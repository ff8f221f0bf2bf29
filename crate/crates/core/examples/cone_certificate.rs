//! Exact cone certificates: one representative per isotypic component, a
//! rational cone-membership solve, and an independent re-check.
//!
//! Run with `cargo run --example cone_certificate`.

use rigidity::certify::{
    assemble_certificate, build_cone, solve_cone_membership, verify_certificate, ConeMode,
    ConeSolution, Kind,
};
use rigidity::graphcore::{circulant, named, unit_laplacian, Graph};
use rigidity::repr::isotypic_decompose;
use rigidity::spectra::{cluster_eigenspace, eig_sym, DEFAULT_CLUSTER_TOL};
use rigidity::symmetry::{
    automorphism_generators, close_group, edge_orbits, GroupGenerators, Permutation,
    DEFAULT_GROUP_CAP, DEFAULT_NODE_BUDGET,
};

fn certify(name: &str, g: &Graph, gens: GroupGenerators, kind: Kind) -> rigidity::Result<()> {
    let closure = close_group(&gens, DEFAULT_GROUP_CAP)?;
    let part = edge_orbits(g, &gens);
    let cluster = cluster_eigenspace(
        &eig_sym(&unit_laplacian(g))?,
        kind.side(),
        DEFAULT_CLUSTER_TOL,
    )?;
    let dec = isotypic_decompose(&cluster, &closure, 0)?;
    let cone = build_cone(g, &dec, &part, 0)?;
    println!("{name} [{}]", kind.label());
    for (j, gen) in cone.generators.iter().enumerate() {
        let row: Vec<String> = gen.iter().map(|x| format!("{x:.4}")).collect();
        println!("  generator {j}: [{}]", row.join(", "));
    }
    let target: Vec<String> = cone.target.iter().map(|x| format!("{x}")).collect();
    println!("  target:      [{}]", target.join(", "));
    match solve_cone_membership(&cone, ConeMode::ExactRational) {
        ConeSolution::Found(coeffs) => {
            println!(
                "  coefficients: {:?} (exact: {})",
                coeffs.strings(),
                coeffs.is_exact()
            );
            let cert = assemble_certificate(g, &part, &cone, coeffs, &cluster, kind)?;
            let check = verify_certificate(
                g,
                &part,
                &[(1.0, cert.phi.clone())],
                cert.lambda,
                kind,
                1e-8,
            )?;
            println!(
                "  verified: {} (c = {:.10}, eigen residual {:.1e}, orbit residual {:.1e})",
                check.passed,
                check.c_normalized,
                cert.residuals.eigen_residual,
                cert.residuals.orbit_residual
            );
        }
        ConeSolution::Infeasible { exact } => {
            println!("  target outside the cone (exact check: {exact})")
        }
    }
    Ok(())
}

fn main() -> rigidity::Result<()> {
    let z12 = circulant(12, &[2, 3])?;
    let rot = GroupGenerators::new(&z12, vec![Permutation::rotation(12, 1)])?;
    certify("Cay(Z12,{2,3})", &z12, rot, Kind::Lower)?;

    let petersen = named::petersen();
    for kind in [Kind::Lower, Kind::Upper] {
        let gens = automorphism_generators(&petersen, &[], DEFAULT_NODE_BUDGET)?;
        certify("Petersen", &petersen, gens, kind)?;
    }

    let f3 = named::friendship(3);
    let gens = automorphism_generators(&f3, &[], DEFAULT_NODE_BUDGET)?;
    certify("friendship F3", &f3, gens, Kind::Lower)?;
    Ok(())
}
