//! The compressed SDP feasibility screen, in orbit mode and per-edge mode.
//!
//! Run with `cargo run --example sdp_feasibility`.

use rigidity::graphcore::{circulant, named, unit_laplacian, Graph};
use rigidity::repr::isotypic_decompose;
use rigidity::sdpfeas::{
    block_diagonal_feasibility, compress_operators, solve_feasibility, DEFAULT_MAX_ITER,
    DEFAULT_SDP_TOL,
};
use rigidity::spectra::{cluster_eigenspace, eig_sym, Side, DEFAULT_CLUSTER_TOL};
use rigidity::symmetry::{
    automorphism_generators, close_group, edge_orbits, GroupGenerators, Permutation,
    DEFAULT_GROUP_CAP, DEFAULT_NODE_BUDGET,
};

fn screen(name: &str, g: &Graph, side: Side) -> rigidity::Result<()> {
    let cluster = cluster_eigenspace(&eig_sym(&unit_laplacian(g))?, side, DEFAULT_CLUSTER_TOL)?;
    let gens = automorphism_generators(g, &[], DEFAULT_NODE_BUDGET)?;
    let part = edge_orbits(g, &gens);
    let orbit = solve_feasibility(
        &compress_operators(g, &cluster, Some(&part))?,
        DEFAULT_SDP_TOL,
        DEFAULT_MAX_ITER,
    )?;
    let edge = solve_feasibility(
        &compress_operators(g, &cluster, None)?,
        DEFAULT_SDP_TOL,
        DEFAULT_MAX_ITER,
    )?;
    println!(
        "{name:<16} {side:?}: orbit mode {:?} ({} it, residual {:.1e}, rank {})  per-edge mode {:?}",
        orbit.status, orbit.iterations, orbit.max_residual, orbit.rank_estimate, edge.status
    );
    Ok(())
}

fn main() -> rigidity::Result<()> {
    screen("C5", &named::cycle(5), Side::Second)?;
    screen("Petersen", &named::petersen(), Side::Largest)?;
    screen("Cay(Z12,{2,3})", &circulant(12, &[2, 3])?, Side::Second)?;
    screen("barbell", &named::barbell(), Side::Second)?;
    screen("friendship F3", &named::friendship(3), Side::Largest)?;

    let z12 = circulant(12, &[2, 3])?;
    let gens = GroupGenerators::new(&z12, vec![Permutation::rotation(12, 1)])?;
    let closure = close_group(&gens, DEFAULT_GROUP_CAP)?;
    let cluster = cluster_eigenspace(
        &eig_sym(&unit_laplacian(&z12))?,
        Side::Second,
        DEFAULT_CLUSTER_TOL,
    )?;
    let part = edge_orbits(&z12, &gens);
    let co = compress_operators(&z12, &cluster, Some(&part))?;
    let dec = isotypic_decompose(&cluster, &closure, 0)?;
    let blocks = block_diagonal_feasibility(&co, &dec, DEFAULT_SDP_TOL, DEFAULT_MAX_ITER)?;
    println!(
        "Cay(Z12,{{2,3}}) block-diagonal solve: blocks {:?}, {:?}, residual {:.1e}",
        blocks.block_sizes, blocks.status, blocks.max_residual
    );
    Ok(())
}
