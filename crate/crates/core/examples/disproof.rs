//! Finding edge weights that beat the uniform weighting, and checking them.
//!
//! Run with `cargo run --example disproof`.

use rigidity::certify::{find_disproof, verify_disproof, DisproofOutcome, DisproofParams, Kind};
use rigidity::graphcore::{circulant, named, unit_laplacian, Graph};
use rigidity::spectra::{cluster_eigenspace, eig_sym, DEFAULT_CLUSTER_TOL};
use rigidity::symmetry::EdgeOrbitPartition;

fn search(name: &str, g: &Graph, kind: Kind) -> rigidity::Result<()> {
    let cluster = cluster_eigenspace(
        &eig_sym(&unit_laplacian(g))?,
        kind.side(),
        DEFAULT_CLUSTER_TOL,
    )?;
    let part = EdgeOrbitPartition::per_edge(g);
    match find_disproof(g, &cluster, &part, kind, &DisproofParams::default())? {
        DisproofOutcome::Found(d) => println!(
            "{name:<16} [{}] disproved: {:.6} vs uniform {:.6} after {} steps, verified: {}",
            kind.label(),
            d.achieved,
            d.baseline,
            d.rounds,
            verify_disproof(g, &d, kind)
        ),
        DisproofOutcome::NumericallyRigid { t } => {
            println!(
                "{name:<16} [{}] no improving direction (first-order gain {t:.1e})",
                kind.label()
            )
        }
    }
    Ok(())
}

fn main() -> rigidity::Result<()> {
    search("barbell", &named::barbell(), Kind::Lower)?;
    search("friendship F3", &named::friendship(3), Kind::Upper)?;
    search("friendship F3", &named::friendship(3), Kind::Lower)?;
    search("path P4", &named::path(4), Kind::Lower)?;
    search("Cay(Z21,{1,6})", &circulant(21, &[1, 6])?, Kind::Lower)?;
    search("Petersen", &named::petersen(), Kind::Upper)?;
    Ok(())
}
