//! Logical divergence, fidelity and relative logical entropy.
//!
//! Run with `cargo run --example divergence`.

use logical_entropy::quantum::{
    fidelity, logical_divergence_forms, relative_logical_entropy, DensityMatrix,
};
use logical_entropy::sampling::sample_density;

fn main() -> logical_entropy::Result<()> {
    let rho = sample_density(1, 3, None)?;
    let sigma = sample_density(2, 3, Some(2))?;
    let f = logical_divergence_forms(&rho, &sigma)?;
    println!(
        "d(rho||sigma): definitional {:.12}, tr(rho - sigma)^2 {:.12}, purity form {:.12}",
        f.definitional, f.hilbert_schmidt, f.purity_form
    );
    println!("fidelity {:.6}", fidelity(&rho, &sigma)?);

    let joint = sample_density(3, 6, None)?.with_dims(vec![2, 3])?;
    let rel = relative_logical_entropy(&joint)?;
    println!("L(A/B) = {:.9}", rel.value);
    println!("  -d(rho_AB || I/2 x rho_B)       = {:.9} (match: {})", rel.minus_divergence, rel.matches_unit_factor);
    println!("  -(1/4) d(rho_AB || I/2 x rho_B) = {:.9} (match: {})", rel.minus_quarter_divergence, rel.matches_quarter_factor);

    let bell = {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [s, 0.0, 0.0, s].map(logical_entropy::linalg::cr);
        DensityMatrix::pure(&v)?.with_dims(vec![2, 2])?
    };
    println!("Bell state: L(A/B) = {:.6}", relative_logical_entropy(&bell)?.value);
    Ok(())
}
