//! Search for norms: no static norm makes the two-consumer case fair, but a
//! norm with two states does.
//!
//! cargo run --example norm_synthesis

use normsys::ctl::Formula;
use normsys::dsl::write_norm;
use normsys::ecosystem::{gen_ecosystem, objectives, EcoConfig};
use normsys::synthesis::{synthesize_dynamic, synthesize_static, verify, SynthesisBudget, SynthesisOutcome};

fn main() -> normsys::Result<()> {
    let cfg = EcoConfig::simple();
    let eco = gen_ecosystem(&cfg)?;
    let (phi1, phi2) = objectives(&cfg);
    let goal = Formula::and(phi1, phi2);

    match synthesize_static(&eco.mas, &goal, SynthesisBudget::default())? {
        SynthesisOutcome::NoneExists(_) => println!("static: no norm exists"),
        other => println!("static: {other:?}"),
    }

    match synthesize_dynamic(&eco.mas, &goal, 2, SynthesisBudget::default())? {
        SynthesisOutcome::Found(n) => {
            println!("dynamic: found a norm with {} states", n.num_norm_states());
            println!("re-verified: {}", verify(&eco.mas, &n, &goal)?);
            print!("{}", write_norm(&n, &eco.mas));
        }
        other => println!("dynamic: {other:?}"),
    }
    Ok(())
}
