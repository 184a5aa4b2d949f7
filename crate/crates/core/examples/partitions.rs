//! Logical entropy of set partitions and of probability distributions.
//!
//! Run with `cargo run --example partitions`.

use logical_entropy::classical::{
    dit_count, distribution_logical_entropy, partition_logical_entropy, two_draw_distinction_mc,
    ProbabilityVector, SetPartition,
};

fn main() -> logical_entropy::Result<()> {
    let pi = SetPartition::from_labels(&['a', 'a', 'b', 'c', 'c', 'c'])?;
    println!("blocks {:?}", pi.block_sizes());
    println!("dits {} of {} ordered pairs", dit_count(&pi), 6 * 6);
    println!("L(pi) = {:.6}", partition_logical_entropy(&pi));

    let coarse = SetPartition::from_blocks(6, &[vec![0, 1, 2], vec![3, 4, 5]])?;
    println!(
        "pi refines the coarser partition: {}, L = {:.6} <= {:.6}",
        pi.refines(&coarse),
        partition_logical_entropy(&coarse),
        partition_logical_entropy(&pi)
    );

    let p = ProbabilityVector::new(vec![0.5, 0.25, 0.25])?;
    let exact = distribution_logical_entropy(&p);
    let estimate = two_draw_distinction_mc(&p, 1_000_000, 2026)?;
    println!("two draws differ: exact {exact:.6}, sampled {estimate:.6}");
    Ok(())
}
