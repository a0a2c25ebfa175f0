//! Build a two-agent system by hand, restrict it with a norm and check CTL
//! properties on the result.
//!
//! cargo run --example ctl_basics

use normsys::ctl::{check, sat_set};
use normsys::dsl::parse_formula;
use normsys::kripke::apply_norm;
use normsys::model::{validate_mas, JointAction, MasBuilder};
use normsys::norm::{NormStateId, NormativeSystem};

fn main() -> normsys::Result<()> {
    // Two robots share a door. Both may wait or go; if both go they collide.
    let mut b = MasBuilder::new(["r1", "r2"]);
    let wait = [b.action(0, "wait"), b.action(1, "wait")];
    let go = [b.action(0, "go"), b.action(1, "go")];
    let idle = b.state("idle");
    let first = b.state("first_through");
    let second = b.state("second_through");
    let crash = b.state("crash");
    b.add_initial(idle);
    for s in [idle, first, second, crash] {
        for i in 0..2 {
            b.set_available(s, i, [wait[i], go[i]]);
        }
    }
    let joint = |a, c| JointAction::new([a, c]);
    b.add_transition(idle, joint(wait[0], wait[1]), idle);
    b.add_transition(idle, joint(go[0], wait[1]), first);
    b.add_transition(idle, joint(wait[0], go[1]), second);
    b.add_transition(idle, joint(go[0], go[1]), crash);
    for s in [first, second, crash] {
        for a in [wait[0], go[0]] {
            for c in [wait[1], go[1]] {
                b.add_transition(s, joint(a, c), if s == crash { crash } else { idle });
            }
        }
    }
    b.add_label(crash, "crash");
    b.add_label(first, "through=r1");
    b.add_label(second, "through=r2");
    let m = b.build();
    assert!(validate_mas(&m).is_ok());

    let safe = parse_formula("AG !crash")?;
    let fair = parse_formula("AG (EF through=r1 & EF through=r2)")?;

    let unrestricted = apply_norm(&m, &NormativeSystem::identity(&m))?;
    println!("no norm:   AG !crash = {}", check(&unrestricted, &safe));

    // A one-state norm forbidding simultaneous entry.
    let mut n = NormativeSystem::new(["q"], NormStateId(0), m.num_states());
    n.forbid(idle, NormStateId(0), joint(go[0], go[1]));
    let k = apply_norm(&m, &n)?;
    println!("with norm: AG !crash = {}", check(&k, &safe));
    println!("with norm: {fair} = {}", check(&k, &fair));

    let ef_crash = parse_formula("EF crash")?;
    let states: Vec<&str> =
        sat_set(&unrestricted, &ef_crash).into_iter().map(|i| m.state_name(unrestricted.state(i).state)).collect();
    println!("states that can still crash without the norm: {states:?}");
    Ok(())
}
