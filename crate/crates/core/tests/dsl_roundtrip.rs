mod common;

use common::{random_mas, random_norm, rng, MasShape};
use normsys::dsl::{parse_formula, parse_model, parse_nfa, parse_norm, write_model, write_nfa, write_norm};
use normsys::ecosystem::{gen_ecosystem, norm_fifo, norm_round_robin, EcoConfig};
use normsys::recognition::Nfa;
use proptest::prelude::*;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

fn random_nfa(r: &mut impl Rng) -> Nfa {
    let n = r.gen_range(1..=3);
    let mut delta: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for q in 0..n {
        for a in 0..2 {
            let t: BTreeSet<usize> = (0..n).filter(|_| r.gen_bool(0.4)).collect();
            if !t.is_empty() {
                delta.insert((q, a), t);
            }
        }
    }
    Nfa {
        states: (0..n).map(|i| format!("q{i}")).collect(),
        alphabet: vec!["a".into(), "b".into()],
        initial: r.gen_range(0..n),
        finals: (0..n).filter(|_| r.gen_bool(0.5)).collect(),
        delta,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn models_and_norms_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = MasShape { states: r.gen_range(1..=6), agents: r.gen_range(1..=3), max_actions: 3, obs_classes: 2, max_branching: 2, all_available: false };
        let m = random_mas(&mut r, &shape);
        let back = parse_model(&write_model(&m)).unwrap();
        prop_assert_eq!(&back, &m);
        let k = r.gen_range(1..=3);
        let n = random_norm(&mut r, &m, k);
        prop_assert_eq!(parse_norm(&write_norm(&n, &m), &m).unwrap(), n);
    }

    #[test]
    fn automata_round_trip(seed in any::<u64>()) {
        let a = random_nfa(&mut rng(seed));
        prop_assert_eq!(parse_nfa(&write_nfa(&a)).unwrap(), a);
    }
}

#[test]
fn ecosystem_documents_round_trip() {
    let eco = gen_ecosystem(&EcoConfig::instantiation()).unwrap();
    let m = parse_model(&write_model(&eco.mas)).unwrap();
    assert_eq!(m, eco.mas);
    for n in [norm_round_robin(&eco), norm_fifo(&eco)] {
        assert_eq!(parse_norm(&write_norm(&n, &m), &m).unwrap(), n);
    }
}

#[test]
fn errors_carry_positions() {
    let err = parse_model("[agents]\nx\n[actions]\nx : go\n[states]\ns\n[initial]\ns\n[transitions]\ns -> t : go\n")
        .unwrap_err();
    let text = err.to_string();
    assert!(text.starts_with("10:"), "{text}");
    assert!(text.contains("`t`"), "{text}");
    let err = parse_formula("AG").unwrap_err();
    assert_eq!((err.line, err.column), (1, 3));
    assert!(parse_formula("AG (t_1=p_1 -> EF d_1=bot)").is_ok());
}

#[test]
fn norm_forbidding_everything_is_rejected() {
    let m = parse_model(
        "[agents]\nx\n[actions]\nx : go stay\n[states]\ns\n[initial]\ns\n[availability]\ns x : go stay\n[transitions]\ns -> s : go\ns -> s : stay\n",
    )
    .unwrap();
    assert!(parse_norm("[forbids]\ns q0 : go\n", &m).is_ok());
    assert!(parse_norm("[forbids]\ns q0 : go\ns q0 : stay\n", &m).is_err());
}
