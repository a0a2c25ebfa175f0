//! The producer/consumer ecosystem: round-robin and queue norms guarantee
//! that every request is served, while each static norm fails.
//!
//! cargo run --example ecosystem_verification

use normsys::ctl::Formula;
use normsys::ecosystem::{gen_ecosystem, norm_fifo, norm_round_robin, objectives, static_norms_simple, EcoConfig};
use normsys::kripke::apply_norm;
use normsys::synthesis::verify;

fn main() -> normsys::Result<()> {
    // Two producers of one good each, three consumers.
    let cfg = EcoConfig::instantiation();
    let eco = gen_ecosystem(&cfg)?;
    let (phi1, phi2) = objectives(&cfg);
    let both = Formula::and(phi1.clone(), phi2.clone());
    println!("instantiation: {} reachable states", eco.mas.num_states());
    for (name, n) in [("round robin", norm_round_robin(&eco)), ("fifo", norm_fifo(&eco))] {
        let k = apply_norm(&eco.mas, &n)?;
        println!("  {name:12} {} product states, phi1 & phi2: {}", k.len(), verify(&eco.mas, &n, &both)?);
    }

    // One producer with capacity one, two consumers wanting the same good.
    let cfg = EcoConfig::simple();
    let eco = gen_ecosystem(&cfg)?;
    let (phi1, phi2) = objectives(&cfg);
    let [n3, n4, n5] = static_norms_simple(&eco)?;
    println!("simple case: {} reachable states", eco.mas.num_states());
    println!("  always serve c_1:  phi1 {}", verify(&eco.mas, &n3, &phi1)?);
    println!("  always serve c_2:  phi1 {}", verify(&eco.mas, &n4, &phi1)?);
    println!("  forbid nothing:    phi2 {}", verify(&eco.mas, &n5, &phi2)?);
    Ok(())
}
