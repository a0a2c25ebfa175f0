//! Recognition is as hard as NFA universality: the gadget built from an
//! automaton is recognisable exactly when some word has no run.
//!
//! cargo run --example nfa_reduction

use normsys::dsl::parse_nfa;
use normsys::recognition::{build_nfa_recognition_instance, decide_nc2, nfa_run_universal, RecognitionVerdict};

fn main() -> normsys::Result<()> {
    let cases = [
        ("loops on everything", "states q\nalphabet a b\ninitial q\nq a q\nq b q\n"),
        ("no b at all", "states q\nalphabet a b\ninitial q\nq a q\n"),
        ("b only after a", "states p q\nalphabet a b\ninitial p\np a q\nq a q\nq b p\n"),
    ];
    for (name, text) in cases {
        let nfa = parse_nfa(text)?;
        let (m, family) = build_nfa_recognition_instance(&nfa)?;
        let verdict = decide_nc2(&family);
        let revealed = match &verdict {
            RecognitionVerdict::Nc2Successful(path) => format!("revealed by {:?}", family.extend_observation(path)),
            _ => "never revealed".to_string(),
        };
        println!("{name:20} universal {:5}  gadget {:2} states  {revealed}", nfa_run_universal(&nfa), m.num_states());
    }
    Ok(())
}
