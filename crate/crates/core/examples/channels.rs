//! Unital channels never decrease logical entropy and majorize spectra.
//!
//! Run with `cargo run --example channels`.

use logical_entropy::channels::{apply_channel, povm_unital_implementation, twirl_subsystem, Povm, UnitalChannel};
use logical_entropy::linalg::majorizes;
use logical_entropy::quantum::{logical_entropy, DensityMatrix, Pvm};
use logical_entropy::sampling::{sample_density, sample_pvm, sample_unitary};

fn report(name: &str, ch: &UnitalChannel, rho: &DensityMatrix) -> logical_entropy::Result<()> {
    let out = apply_channel(ch, rho)?;
    println!(
        "{name:>18}: L {:.6} -> {:.6}, input spectrum majorizes output: {}",
        logical_entropy(rho),
        logical_entropy(&out),
        majorizes(&rho.eigenvalues(), &out.eigenvalues())?
    );
    Ok(())
}

fn main() -> logical_entropy::Result<()> {
    let rho = sample_density(5, 3, Some(2))?;
    let mix = UnitalChannel::unitary_mixture(&[(0.3, sample_unitary(1, 3)?), (0.7, sample_unitary(2, 3)?)])?;
    report("unitary mixture", &mix, &rho)?;
    report("dephasing", &UnitalChannel::dephasing(&sample_pvm(3, 3, None)?), &rho)?;
    report("coarse dephasing", &UnitalChannel::dephasing(&sample_pvm(3, 3, Some(&[2, 1]))?), &rho)?;
    let povm = Povm::from_pvm(&Pvm::computational(3));
    report("POVM sqrt(E_k)", &povm_unital_implementation(&povm)?, &rho)?;

    let joint = sample_density(8, 6, None)?.with_dims(vec![2, 3])?;
    let twirled = twirl_subsystem(&joint)?;
    let target = joint.reduced_a()?.tensor(&DensityMatrix::maximally_mixed(3));
    println!("Weyl twirl of B equals rho_A x I/3 up to {:.1e}", twirled.matrix().max_abs_diff(target.matrix()));
    Ok(())
}
