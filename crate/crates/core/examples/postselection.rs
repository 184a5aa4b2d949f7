//! Pre- and post-selected states, weak values and the two post-selected entropies.
//!
//! Run with `cargo run --example postselection`.

use logical_entropy::linalg::{c, cr};
use logical_entropy::postselect::{
    abl_probabilities, postselected_logical_entropy, pre_post_state, relation_diagnostic,
    weak_logical_entropy, weak_values, PrePostPair,
};
use logical_entropy::quantum::Pvm;

fn main() -> logical_entropy::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pair = PrePostPair::new(vec![cr(s), cr(s)], vec![cr(s), c(0.0, s)])?;
    let rho = pre_post_state(&pair);
    let pvm = Pvm::computational(2);

    let w: Vec<String> = weak_values(&rho, &pvm)?.iter().map(|z| z.to_string()).collect();
    println!("weak values {w:?}");
    let abl = abl_probabilities(&rho, &pvm)?;
    println!("ABL |w|^2 {:?}, normalized {:?}", abl.unnormalized, abl.normalized);
    println!("L_pi = {}", postselected_logical_entropy(&rho, &pvm)?);
    println!("L_pi^w = {}", weak_logical_entropy(&rho, &pvm)?);
    let d = relation_diagnostic(&rho, &pvm)?;
    println!(
        "L_pi vs |L_pi^w|^2: {} vs {} ({})",
        d.postselected,
        d.weak_modulus_squared,
        if d.agree { "agree" } else { "disagree" }
    );

    match PrePostPair::new(vec![cr(1.0), cr(0.0)], vec![cr(0.0), cr(1.0)]) {
        Err(e) => println!("orthogonal selection rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
