mod common;

use common::{check_synthesis_agreement, synthesis_instance};
use normsys::ctl::Formula;
use normsys::ecosystem::{gen_ecosystem, objectives, EcoConfig};
use normsys::model::{JointAction, MasBuilder};
use normsys::synthesis::{synthesize_dynamic, synthesize_static, verify, SynthesisBudget, SynthesisOutcome};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn static_search_matches_brute_force(seed in any::<u64>()) {
        let (m, f) = synthesis_instance(seed, 1, 5_000.0);
        prop_assert_eq!(check_synthesis_agreement(&m, &f, 1), Ok(()));
    }

    #[test]
    fn dynamic_search_is_monotone(seed in any::<u64>()) {
        let (m, f) = synthesis_instance(seed, 1, 5_000.0);
        let b = SynthesisBudget::default();
        let s = synthesize_static(&m, &f, b).unwrap();
        let d1 = synthesize_dynamic(&m, &f, 1, b).unwrap();
        let d2 = synthesize_dynamic(&m, &f, 2, b).unwrap();
        prop_assert_eq!(matches!(s, SynthesisOutcome::Found(_)), matches!(d1, SynthesisOutcome::Found(_)));
        if matches!(d1, SynthesisOutcome::Found(_)) {
            prop_assert!(matches!(d2, SynthesisOutcome::Found(_)));
        }
        for o in [s, d1, d2] {
            if let SynthesisOutcome::Found(n) = o {
                prop_assert!(verify(&m, &n, &f).unwrap());
            }
        }
    }
}

#[test]
fn two_state_search_matches_brute_force() {
    for seed in 0..12 {
        let (m, f) = synthesis_instance(seed, 2, 20_000.0);
        assert_eq!(check_synthesis_agreement(&m, &f, 2), Ok(()), "seed {seed}");
    }
}

#[test]
fn fairness_needs_memory() {
    let cfg = EcoConfig::simple();
    let eco = gen_ecosystem(&cfg).unwrap();
    let (phi1, phi2) = objectives(&cfg);
    let f = Formula::and(phi1, phi2);
    let b = SynthesisBudget::default();
    assert_eq!(synthesize_static(&eco.mas, &f, b).unwrap(), SynthesisOutcome::NoneExists(1));
    assert_eq!(synthesize_dynamic(&eco.mas, &f, 1, b).unwrap(), SynthesisOutcome::NoneExists(1));
    match synthesize_dynamic(&eco.mas, &f, 2, b).unwrap() {
        SynthesisOutcome::Found(n) => {
            assert_eq!(n.num_norm_states(), 2);
            assert!(verify(&eco.mas, &n, &f).unwrap());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn budgets_are_respected() {
    let mut b = MasBuilder::new(["x"]);
    let go = b.action(0, "go");
    let stay = b.action(0, "stay");
    let u = b.state("u");
    let v = b.state("v");
    b.add_initial(u);
    for s in [u, v] {
        b.set_available(s, 0, [go, stay]);
        b.add_transition(s, JointAction::new([stay]), s);
    }
    b.add_transition(u, JointAction::new([go]), v);
    b.add_transition(v, JointAction::new([go]), v);
    b.add_label(v, "p");
    let m = b.build();
    let f = Formula::ag(Formula::not(Formula::atom("p")));
    let zero = SynthesisBudget { max_candidates: 0, time_limit: None };
    assert_eq!(synthesize_static(&m, &f, zero).unwrap(), SynthesisOutcome::BudgetExceeded(0));
    assert_eq!(synthesize_dynamic(&m, &f, 2, zero).unwrap(), SynthesisOutcome::BudgetExceeded(0));
    match synthesize_static(&m, &f, SynthesisBudget::default()).unwrap() {
        SynthesisOutcome::Found(n) => {
            assert!(n.is_forbidden(u, n.initial(), &JointAction::new([go])));
        }
        other => panic!("{other:?}"),
    }
    assert!(verify(&m, &normsys::norm::NormativeSystem::identity(&m), &Formula::True).unwrap());
}
