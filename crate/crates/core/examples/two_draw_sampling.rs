//! Logical entropy as the chance that two measurements of copies disagree.
//!
//! Run with `cargo run --release --example two_draw_sampling`.

use logical_entropy::harness::two_draw_comparison;
use logical_entropy::quantum::{DensityMatrix, Pvm};
use logical_entropy::sampling::{sample_density, sample_pvm};

fn main() -> logical_entropy::Result<()> {
    let cases = [
        ("I/3, computational", DensityMatrix::maximally_mixed(3), Pvm::computational(3)),
        ("random qutrit, random basis", sample_density(1, 3, None)?, sample_pvm(1, 3, None)?),
        ("random qudit, coarse blocks", sample_density(2, 4, None)?, sample_pvm(2, 4, Some(&[1, 3]))?),
    ];
    for (name, rho, pvm) in &cases {
        let cmp = two_draw_comparison(rho, pvm, 1_000_000, 99)?;
        println!(
            "{name:<28} sampled {:.5}  exact {:.5}  z = {:+.2}",
            cmp.estimate, cmp.analytic, cmp.z_score
        );
    }
    Ok(())
}
