//! Seeded numerical checks of every proposition, printed as a table.
//!
//! Run with `cargo run --release --example verify_propositions [trials] [seed]`.

use logical_entropy::harness::{reproduce_trial, verify_proposition, PropositionId, SamplerConfig};

fn main() -> logical_entropy::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(42);
    let cfg = SamplerConfig::new(seed, trials, vec![2, 3, 4])?;

    println!("{:>4}  {:<10} {:>9} {:>13}  description", "id", "status", "failures", "worst margin");
    for id in PropositionId::ALL {
        let r = verify_proposition(id, &cfg);
        println!(
            "{:>4}  {:<10} {:>9} {:>13.3e}  {}",
            r.id,
            format!("{:?}", r.status).to_lowercase(),
            r.failure_count,
            r.worst_violation,
            r.description
        );
    }

    let outcomes = reproduce_trial(PropositionId::P5, seed, 3, 17, cfg.tolerance)?;
    println!("\nproposition 5, dim 3, trial 17 on its own:");
    for o in outcomes {
        println!("  {:<28} margin {:.3e}", o.name, o.margin);
    }
    Ok(())
}
