//! Splitting an extremal eigenspace into isotypic components under a group.
//!
//! Run with `cargo run --example isotypic`.

use rigidity::graphcore::{circulant, named, unit_laplacian, Graph};
use rigidity::repr::{isotypic_decompose, multiplicity_bound_ok};
use rigidity::spectra::{cluster_eigenspace, eig_sym, Side, DEFAULT_CLUSTER_TOL};
use rigidity::symmetry::{
    automorphism_generators, close_group, GroupGenerators, Permutation, DEFAULT_GROUP_CAP,
    DEFAULT_NODE_BUDGET,
};

fn decompose(name: &str, g: &Graph, gens: GroupGenerators, side: Side) -> rigidity::Result<()> {
    let closure = close_group(&gens, DEFAULT_GROUP_CAP)?;
    let cluster = cluster_eigenspace(&eig_sym(&unit_laplacian(g))?, side, DEFAULT_CLUSTER_TOL)?;
    let dec = isotypic_decompose(&cluster, &closure, 0)?;
    let parts: Vec<String> = dec
        .components
        .iter()
        .map(|c| format!("(d={}, m={}, {})", c.irr_dim, c.mult, c.type_label()))
        .collect();
    println!(
        "{name:<28} |G|={:<5} eigenspace dim {:<2} -> {}  bound ok: {}",
        closure.size(),
        dec.dim,
        parts.join(" "),
        multiplicity_bound_ok(&dec)
    );
    Ok(())
}

fn main() -> rigidity::Result<()> {
    let z12 = circulant(12, &[2, 3])?;
    let rot = GroupGenerators::new(&z12, vec![Permutation::rotation(12, 1)])?;
    decompose("Cay(Z12,{2,3}) rotations", &z12, rot, Side::Second)?;
    let full = automorphism_generators(&z12, &[], DEFAULT_NODE_BUDGET)?;
    decompose("Cay(Z12,{2,3}) full group", &z12, full, Side::Second)?;

    let z21 = circulant(21, &[1, 6])?;
    let rot = GroupGenerators::new(&z21, vec![Permutation::rotation(21, 1)])?;
    decompose("Cay(Z21,{1,6}) rotations", &z21, rot, Side::Second)?;

    let hog = named::hog_56676();
    let gens = automorphism_generators(&hog, &[], DEFAULT_NODE_BUDGET)?;
    decompose("HoG 56676", &hog, gens, Side::Second)?;

    let petersen = named::petersen();
    decompose(
        "Petersen, trivial group",
        &petersen,
        GroupGenerators::trivial(&petersen),
        Side::Second,
    )?;
    let gens = automorphism_generators(&petersen, &[], DEFAULT_NODE_BUDGET)?;
    decompose("Petersen, full group", &petersen, gens, Side::Largest)?;
    Ok(())
}
