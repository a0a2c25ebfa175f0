use std::collections::HashSet;
use std::fmt::Write as _;

use super::{is_identifier, sections, ParseError};
use crate::error::{Error, Result};
use crate::model::{JointAction, Mas};
use crate::norm::{validate_norm, NormStateId, NormativeSystem};

const SECTIONS: &[&str] = &["norm-states", "initial", "forbids", "updates"];

/// Parses a norm document against the system it restricts, and validates
/// the result. An empty document is the identity norm.
pub fn parse_norm(src: &str, m: &Mas) -> Result<NormativeSystem> {
    let secs = sections(src, SECTIONS)?;
    let lines_of = |name: &'static str| secs.iter().filter(move |(t, _)| t.text == name).flat_map(|(_, ls)| ls);

    let mut names: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    for line in lines_of("norm-states") {
        if let Some(c) = &line.colon {
            return Err(ParseError::at(c, "unexpected `:`").into());
        }
        for tok in &line.head {
            if !seen.insert(tok.text) {
                return Err(ParseError::at(tok, format!("duplicate normative state `{}`", tok.text)).into());
            }
            names.push(tok.text.to_string());
        }
    }
    if names.is_empty() {
        names.push("q0".to_string());
    }
    let norm_id = |tok: &super::Token<'_>| -> Result<NormStateId, ParseError> {
        names
            .iter()
            .position(|n| n == tok.text)
            .map(|i| NormStateId(i as u32))
            .ok_or_else(|| ParseError::at(tok, format!("undeclared normative state `{}`", tok.text)))
    };
    let state_id = |tok: &super::Token<'_>| {
        m.state_id(tok.text).ok_or_else(|| ParseError::at(tok, format!("unknown state `{}`", tok.text)))
    };

    let mut initial: Option<NormStateId> = None;
    for line in lines_of("initial") {
        for tok in &line.head {
            if initial.is_some() {
                return Err(ParseError::at(tok, "more than one initial normative state").into());
            }
            initial = Some(norm_id(tok)?);
        }
    }
    let mut n = NormativeSystem::new(names.clone(), initial.unwrap_or(NormStateId(0)), m.num_states());

    for line in lines_of("forbids") {
        let Some(colon) = line.colon else {
            return Err(ParseError::at(&line.start(), "expected `state norm-state : actions...`").into());
        };
        let [st, q] = line.head.as_slice() else {
            return Err(ParseError::at(&line.start(), "expected `state norm-state : actions...`").into());
        };
        let s = state_id(st)?;
        let q = norm_id(q)?;
        if line.tail.len() != m.num_agents() {
            return Err(ParseError::at(
                &colon,
                format!("expected {} local actions, found {}", m.num_agents(), line.tail.len()),
            )
            .into());
        }
        let mut acts = Vec::with_capacity(line.tail.len());
        for (i, tok) in line.tail.iter().enumerate() {
            let a = m
                .action_id(i, tok.text)
                .ok_or_else(|| ParseError::at(tok, format!("unknown action `{}`", tok.text)))?;
            acts.push(a);
        }
        n.forbid(s, q, JointAction(acts));
    }

    for line in lines_of("updates") {
        if let Some(c) = &line.colon {
            return Err(ParseError::at(c, "unexpected `:`").into());
        }
        let [q, st, arrow, target] = line.head.as_slice() else {
            return Err(ParseError::at(&line.start(), "expected `norm-state state -> norm-state`").into());
        };
        if arrow.text != "->" {
            return Err(ParseError::at(arrow, "expected `->`").into());
        }
        n.set_update(norm_id(q)?, state_id(st)?, norm_id(target)?);
    }

    let report = validate_norm(m, &n);
    if report.is_ok() {
        Ok(n)
    } else {
        Err(Error::InvalidNorm(report))
    }
}

/// Serialises `n`, listing only updates that change the normative state.
pub fn write_norm(n: &NormativeSystem, m: &Mas) -> String {
    let mut out = String::new();
    out.push_str("[norm-states]\n");
    for name in n.norm_states() {
        assert!(is_identifier(name), "`{name}` is not a valid identifier");
        writeln!(out, "{name}").unwrap();
    }
    writeln!(out, "\n[initial]\n{}", n.norm_state_name(n.initial())).unwrap();

    out.push_str("\n[forbids]\n");
    for (s, q, set) in n.forbid_entries() {
        for a in set {
            let acts: Vec<&str> = a.0.iter().enumerate().map(|(i, &x)| m.action_name(i, x)).collect();
            writeln!(out, "{} {} : {}", m.state_name(s), n.norm_state_name(q), acts.join(" ")).unwrap();
        }
    }

    out.push_str("\n[updates]\n");
    for q in n.norm_state_ids() {
        for s in m.states() {
            let t = n.update(q, s);
            if t != q {
                writeln!(out, "{} {} -> {}", n.norm_state_name(q), m.state_name(s), n.norm_state_name(t)).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MasBuilder;

    fn toy() -> Mas {
        let mut b = MasBuilder::new(["x"]);
        let u = b.state("u");
        let v = b.state("v");
        let go = b.action(0, "go");
        let stay = b.action(0, "stay");
        for s in [u, v] {
            b.set_available(s, 0, [go, stay]);
            b.add_transition(s, JointAction::new([stay]), s);
            b.add_transition(s, JointAction::new([go]), if s == u { v } else { u });
        }
        b.add_initial(u);
        b.build()
    }

    #[test]
    fn empty_document_is_identity() {
        let m = toy();
        assert_eq!(parse_norm("", &m).unwrap(), NormativeSystem::identity(&m));
        assert_eq!(parse_norm("[forbids]\n[updates]\n", &m).unwrap(), NormativeSystem::identity(&m));
    }

    #[test]
    fn round_trip() {
        let m = toy();
        let src = "[norm-states]\nq0 q1\n[initial]\nq1\n[forbids]\nu q0 : go\n[updates]\nq0 v -> q1\nq1 u -> q0\n";
        let n = parse_norm(src, &m).unwrap();
        assert_eq!(n.initial(), NormStateId(1));
        assert_eq!(parse_norm(&write_norm(&n, &m), &m).unwrap(), n);
    }

    #[test]
    fn forbidding_everything_fails_validation() {
        let m = toy();
        let src = "[forbids]\nu q0 : go\nu q0 : stay\n";
        assert!(matches!(parse_norm(src, &m), Err(Error::InvalidNorm(_))));
    }

    #[test]
    fn dangling_references_are_located() {
        let m = toy();
        let err = parse_norm("[updates]\nq0 w -> q0\n", &m).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 4, .. })), "{err:?}");
        let err = parse_norm("[forbids]\nu q7 : go\n", &m).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 3, .. })), "{err:?}");
    }
}
