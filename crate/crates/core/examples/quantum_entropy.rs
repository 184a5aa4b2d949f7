//! Logical entropy of a density matrix, with and without a measurement.
//!
//! Run with `cargo run --example quantum_entropy`.

use logical_entropy::linalg::{cr, Matrix};
use logical_entropy::quantum::{
    basis_decomposition_check, eigenbasis_pvm, logical_entropy, measured_state,
    min_logical_entropy, purity, pvm_logical_entropy, DensityMatrix, Pvm,
};
use logical_entropy::sampling::{sample_density, sample_pvm};

fn main() -> logical_entropy::Result<()> {
    for d in 2..=4 {
        let mm = DensityMatrix::maximally_mixed(d);
        println!("L(I/{d}) = {:.6}", logical_entropy(&mm));
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[cr(s), cr(s)])?;
    let z = Pvm::computational(2);
    println!("|+>: L = {:.1e}, L_Z = {:.3}", logical_entropy(&plus), pvm_logical_entropy(&plus, &z)?);

    let rho = sample_density(11, 3, None)?;
    println!("random qutrit: purity {:.6}, spectrum {:?}", purity(&rho), rho.eigenvalues());
    let pvm = sample_pvm(11, 3, None)?;
    let measured = measured_state(&rho, &pvm)?;
    println!(
        "random basis: L_pi = {:.6}, L(rho') = {:.6}, eigenbasis minimum {:.6}",
        pvm_logical_entropy(&rho, &pvm)?,
        logical_entropy(&measured),
        min_logical_entropy(&rho)
    );
    let eb = eigenbasis_pvm(&rho);
    println!("in the eigenbasis L_pi = {:.6}", pvm_logical_entropy(&rho, &eb)?);

    let (diag, off) = basis_decomposition_check(&rho, &pvm)?;
    println!("purity = diagonal part {diag:.6} + coherences {off:.6} = {:.6}", diag + off);

    let coarse = Pvm::new(vec![Matrix::diag(&[1.0, 1.0, 0.0]), Matrix::diag(&[0.0, 0.0, 1.0])])?;
    println!("coarse two-block PVM: L_pi = {:.6}", pvm_logical_entropy(&rho, &coarse)?);
    Ok(())
}
