//! Read and write the text formats: models, norms, formulas and automata.
//!
//! cargo run --example documents

use normsys::dsl::{parse_formula, parse_model, parse_nfa, parse_norm, write_model, write_nfa, write_norm};
use normsys::synthesis::verify;

const MODEL: &str = "\
[agents]
light
[actions]
light : stay toggle
[states]
off on
[initial]
off
[availability]
off light : stay toggle
on light : stay toggle
[transitions]
off -> off : stay
off -> on : toggle
on -> on : stay
on -> off : toggle
[labels]
on : lit
";

// Forces the light to alternate by remembering the last state.
const NORM: &str = "\
[norm-states]
was_off was_on
[initial]
was_off
[forbids]
off was_off : stay
on was_on : stay
[updates]
was_off on -> was_on
was_on off -> was_off
";

const NFA: &str = "\
states p q
alphabet a b
initial p
final q
p a q
q b p
";

fn main() -> normsys::Result<()> {
    let m = parse_model(MODEL)?;
    let n = parse_norm(NORM, &m)?;
    let f = parse_formula("AG (AF lit & AF !lit)")?;
    println!("{f} under the alternating norm: {}", verify(&m, &n, &f)?);

    assert_eq!(parse_model(&write_model(&m))?, m);
    assert_eq!(parse_norm(&write_norm(&n, &m), &m)?, n);
    assert_eq!(parse_formula(&f.to_string())?.normalize(), f.normalize());
    println!("model, norm and formula survive a write/parse round trip");

    let a = parse_nfa(NFA)?;
    print!("{}", write_nfa(&a));

    match parse_model("[agents]\nlight\n[states]\noff\n[initial]\nnowhere\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
