//! Random search for a three-qubit state violating strong subadditivity.
//!
//! Run with `cargo run --release --example strong_subadditivity [trials] [seed]`.

use logical_entropy::harness::{strong_subadditivity_search, SamplerConfig};

fn main() -> logical_entropy::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(100_000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);
    let r = strong_subadditivity_search(&SamplerConfig::new(seed, trials, vec![2])?);
    println!("{:?}: {} violating states out of {trials}", r.status, r.failure_count);
    if let Some(w) = r.witness {
        println!("trial {}: L(ABC) + L(B) - L(AB) - L(BC) = {:.6}", w.trial, w.violation);
        println!("  recomputed independently: {:.6}", w.reverified_violation);
        println!("  L(ABC) {:.6}  L(B) {:.6}  L(AB) {:.6}  L(BC) {:.6}", w.l_abc, w.l_b, w.l_ab, w.l_bc);
        println!("{}", serde_json::to_string(&w.matrix).expect("numbers serialize"));
    }
    Ok(())
}
