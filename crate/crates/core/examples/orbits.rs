//! Automorphism search, group closure and orbit structure for a few graphs.
//!
//! Run with `cargo run --example orbits`.

use rigidity::graphcore::{cartesian_product, circulant, named, Graph};
use rigidity::symmetry::{
    automorphism_generators, close_group, edge_orbits, vertex_orbits, DEFAULT_GROUP_CAP,
    DEFAULT_NODE_BUDGET,
};

fn report(name: &str, g: &Graph, fixed: &[usize]) -> rigidity::Result<()> {
    let gens = automorphism_generators(g, fixed, DEFAULT_NODE_BUDGET)?;
    let closure = close_group(&gens, DEFAULT_GROUP_CAP)?;
    let part = edge_orbits(g, &gens);
    let vo = vertex_orbits(g, &gens);
    let n_vertex_orbits = vo.iter().max().map_or(0, |x| x + 1);
    println!(
        "{name:<22} n={:<4} |E|={:<4} fixed={fixed:?} generators={} |group|={} vertex orbits={} edge orbit sizes={:?}",
        g.n(),
        g.m(),
        gens.gens().len(),
        closure.size(),
        n_vertex_orbits,
        part.sizes
    );
    Ok(())
}

fn main() -> rigidity::Result<()> {
    report("barbell", &named::barbell(), &[])?;
    report("friendship F3", &named::friendship(3), &[])?;
    report("Petersen", &named::petersen(), &[])?;
    report("Petersen, fix 0", &named::petersen(), &[0])?;
    report("Cay(Z21,{1,6})", &circulant(21, &[1, 6])?, &[])?;
    report("Cay(Z12,{2,3})", &circulant(12, &[2, 3])?, &[])?;
    report("crossing number 6B", &named::crossing_number_6b(), &[])?;
    report("HoG 56676", &named::hog_56676(), &[])?;
    report("Desargues", &named::desargues(), &[])?;
    let product = cartesian_product(&named::desargues(), &named::cycle(5))?;
    report("Desargues x C5", &product, &[])?;
    Ok(())
}
