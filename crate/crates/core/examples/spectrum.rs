//! Laplacian spectra and extremal eigenspaces, with and without edge weights.
//!
//! Run with `cargo run --example spectrum`.

use rigidity::graphcore::{circulant, named, unit_laplacian, Graph, WeightVector};
use rigidity::spectra::{cluster_eigenspace, eig_sym, lambda_bounds, Side, DEFAULT_CLUSTER_TOL};

fn show(name: &str, g: &Graph) -> rigidity::Result<()> {
    let dec = eig_sym(&unit_laplacian(g))?;
    let lo = cluster_eigenspace(&dec, Side::Second, DEFAULT_CLUSTER_TOL)?;
    let hi = cluster_eigenspace(&dec, Side::Largest, DEFAULT_CLUSTER_TOL)?;
    println!(
        "{name:<20} lambda_2={:.6} (mult {}, gap {:.2e})  lambda_n={:.6} (mult {}, gap {:.2e})",
        lo.lambda,
        lo.dim(),
        lo.gap,
        hi.lambda,
        hi.dim(),
        hi.gap
    );
    Ok(())
}

fn main() -> rigidity::Result<()> {
    show("C5", &named::cycle(5))?;
    show("Petersen", &named::petersen())?;
    show("Cay(Z12,{2,3})", &circulant(12, &[2, 3])?)?;
    show("Cay(Z21,{1,6})", &circulant(21, &[1, 6])?)?;
    show("barbell", &named::barbell())?;
    show("friendship F3", &named::friendship(3))?;

    let barbell = named::barbell();
    let uniform = lambda_bounds(&barbell, &WeightVector::uniform(barbell.m()))?;
    let tuned = lambda_bounds(
        &barbell,
        &WeightVector::normalized(named::barbell_reweighting())?,
    )?;
    println!("barbell uniform weights: lambda_2 = {:.6}", uniform.0);
    println!("barbell tuned weights:   lambda_2 = {:.6}", tuned.0);

    let f3 = named::friendship(3);
    let uniform = lambda_bounds(&f3, &WeightVector::uniform(f3.m()))?;
    let tuned = lambda_bounds(
        &f3,
        &WeightVector::normalized(named::friendship_reweighting(3))?,
    )?;
    println!("F3 uniform weights: lambda_n = {:.6}", uniform.1);
    println!("F3 tuned weights:   lambda_n = {:.6}", tuned.1);
    Ok(())
}
