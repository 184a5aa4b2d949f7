//! Bounds on the entropy a system picks up by interacting with a second system.
//!
//! Run with `cargo run --example interaction_bounds`.

use logical_entropy::channels::{interaction_blocks, prop6_bounds, purify, schmidt_decompose};
use logical_entropy::linalg::BipartiteDims;
use logical_entropy::quantum::DensityMatrix;
use logical_entropy::sampling::{sample_density, sample_unitary};

fn main() -> logical_entropy::Result<()> {
    let u = sample_unitary(4, 6)?;
    let pure = sample_density(1, 6, Some(1))?.with_dims(vec![2, 3])?;
    let b = prop6_bounds(&interaction_blocks(&pure, &u)?, true);
    println!(
        "pure joint state: {:.6} <= L(rho'_S) = {:.6} <= {:.6}",
        b.lower,
        b.entropy,
        b.upper.unwrap_or(f64::NAN)
    );

    let mixed = sample_density(2, 6, None)?.with_dims(vec![2, 3])?;
    let b = prop6_bounds(&interaction_blocks(&mixed, &u)?, false);
    println!("mixed joint state: {:.6} <= L(rho'_S) = {:.6}", b.lower, b.entropy);

    let rho = sample_density(3, 3, None)?;
    let psi = purify(&rho);
    let schmidt = schmidt_decompose(&psi, BipartiteDims::new(3, 3)?)?;
    let squares: Vec<f64> = schmidt.coefficients.iter().map(|s| s * s).collect();
    println!("purification Schmidt weights {squares:.6?}");
    println!("spectrum of rho             {:.6?}", rho.eigenvalues());
    let back = DensityMatrix::pure(&schmidt.reconstruct())?.with_dims(vec![3, 3])?;
    println!("tracing out the ancilla recovers rho up to {:.1e}", back.reduced_a()?.matrix().max_abs_diff(rho.matrix()));
    Ok(())
}
