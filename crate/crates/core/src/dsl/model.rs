use std::collections::HashSet;
use std::fmt::Write as _;

use super::{is_identifier, sections, Line, ParseError, Token};
use crate::error::{Error, Result};
use crate::model::{validate_mas, ActionId, JointAction, Mas, MasBuilder, StateId};

const SECTIONS: &[&str] =
    &["agents", "actions", "states", "initial", "availability", "observations", "transitions", "labels"];

/// Parses and validates a model document.
pub fn parse_model(src: &str) -> Result<Mas> {
    let m = parse_unvalidated(src)?;
    let report = validate_mas(&m);
    if report.is_ok() {
        Ok(m)
    } else {
        Err(Error::InvalidMas(report))
    }
}

fn body<'s, 'a>(secs: &'s [(Token<'a>, Vec<Line<'a>>)], name: &'s str) -> impl Iterator<Item = &'s Line<'a>> {
    secs.iter().filter(move |(t, _)| t.text == name).flat_map(|(_, ls)| ls.iter())
}

fn no_colon(line: &Line<'_>) -> Result<(), ParseError> {
    match &line.colon {
        Some(c) => Err(ParseError::at(c, "unexpected `:`")),
        None => Ok(()),
    }
}

fn need_colon<'a>(line: &Line<'a>, what: &str) -> Result<Token<'a>, ParseError> {
    line.colon.ok_or_else(|| ParseError::at(&line.start(), format!("expected `:` in {what} entry")))
}

fn state(b: &MasBuilder, tok: &Token<'_>) -> Result<StateId, ParseError> {
    b.state_id(tok.text).ok_or_else(|| ParseError::at(tok, format!("undeclared state `{}`", tok.text)))
}

fn agent(b: &MasBuilder, tok: &Token<'_>) -> Result<usize, ParseError> {
    b.agent_index(tok.text).ok_or_else(|| ParseError::at(tok, format!("undeclared agent `{}`", tok.text)))
}

fn action(b: &MasBuilder, ag: usize, tok: &Token<'_>) -> Result<ActionId, ParseError> {
    b.action_id(ag, tok.text).ok_or_else(|| ParseError::at(tok, format!("undeclared action `{}`", tok.text)))
}

pub(crate) fn parse_unvalidated(src: &str) -> Result<Mas, ParseError> {
    let secs = sections(src, SECTIONS)?;

    let mut agents: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    for line in body(&secs, "agents") {
        no_colon(line)?;
        for tok in &line.head {
            if !seen.insert(tok.text) {
                return Err(ParseError::at(tok, format!("duplicate agent `{}`", tok.text)));
            }
            agents.push(tok.text.to_string());
        }
    }
    let mut b = MasBuilder::new(agents);

    for line in body(&secs, "actions") {
        need_colon(line, "actions")?;
        let [name] = line.head.as_slice() else {
            return Err(ParseError::at(&line.start(), "expected `agent : actions...`"));
        };
        let ag = agent(&b, name)?;
        for tok in &line.tail {
            b.action(ag, tok.text);
        }
    }

    for line in body(&secs, "states") {
        no_colon(line)?;
        for tok in &line.head {
            if b.state_id(tok.text).is_some() {
                return Err(ParseError::at(tok, format!("duplicate state `{}`", tok.text)));
            }
            b.state(tok.text);
        }
    }

    for line in body(&secs, "initial") {
        no_colon(line)?;
        for tok in &line.head {
            let s = state(&b, tok)?;
            b.add_initial(s);
        }
    }

    for line in body(&secs, "availability") {
        need_colon(line, "availability")?;
        let [st, ag] = line.head.as_slice() else {
            return Err(ParseError::at(&line.start(), "expected `state agent : actions...`"));
        };
        let s = state(&b, st)?;
        let ag = agent(&b, ag)?;
        let acts = line.tail.iter().map(|t| action(&b, ag, t)).collect::<Result<Vec<_>, _>>()?;
        b.set_available(s, ag, acts);
    }

    for line in body(&secs, "observations") {
        let colon = need_colon(line, "observations")?;
        let [st, ag] = line.head.as_slice() else {
            return Err(ParseError::at(&line.start(), "expected `state agent : observation`"));
        };
        let s = state(&b, st)?;
        let ag = agent(&b, ag)?;
        let [obs] = line.tail.as_slice() else {
            return Err(ParseError::at(&colon, "expected exactly one observation value"));
        };
        b.set_observation(ag, s, obs.text);
    }

    for line in body(&secs, "transitions") {
        let colon = need_colon(line, "transitions")?;
        let [from, arrow, to] = line.head.as_slice() else {
            return Err(ParseError::at(&line.start(), "expected `state -> state : actions...`"));
        };
        if arrow.text != "->" {
            return Err(ParseError::at(arrow, "expected `->`"));
        }
        let from = state(&b, from)?;
        let to = state(&b, to)?;
        if line.tail.len() != b.num_agents() {
            return Err(ParseError::at(
                &colon,
                format!("expected {} local actions, found {}", b.num_agents(), line.tail.len()),
            ));
        }
        let acts = line.tail.iter().enumerate().map(|(i, t)| action(&b, i, t)).collect::<Result<Vec<_>, _>>()?;
        b.add_transition(from, JointAction(acts), to);
    }

    for line in body(&secs, "labels") {
        need_colon(line, "labels")?;
        let [st] = line.head.as_slice() else {
            return Err(ParseError::at(&line.start(), "expected `state : propositions...`"));
        };
        let s = state(&b, st)?;
        for tok in &line.tail {
            b.add_label(s, tok.text);
        }
    }

    Ok(b.build())
}

/// Serialises `m`; [`parse_model`] reads the output back to an equal system.
///
/// # Panics
///
/// If a name is not a valid identifier (contains whitespace, `#` or `:`).
pub fn write_model(m: &Mas) -> String {
    let check = |s: &str| assert!(is_identifier(s), "`{s}` is not a valid identifier");
    let mut out = String::new();
    out.push_str("[agents]\n");
    m.agents().iter().for_each(|a| check(a));
    writeln!(out, "{}", m.agents().join(" ")).unwrap();

    out.push_str("\n[actions]\n");
    for (i, a) in m.agents().iter().enumerate() {
        m.actions(i).iter().for_each(|x| check(x));
        writeln!(out, "{a} : {}", m.actions(i).join(" ")).unwrap();
    }

    out.push_str("\n[states]\n");
    for s in m.states() {
        check(m.state_name(s));
        writeln!(out, "{}", m.state_name(s)).unwrap();
    }

    out.push_str("\n[initial]\n");
    for &s in m.initial() {
        writeln!(out, "{}", m.state_name(s)).unwrap();
    }

    out.push_str("\n[availability]\n");
    for s in m.states() {
        for (i, a) in m.agents().iter().enumerate() {
            let acts: Vec<&str> = m.available(s, i).iter().map(|&x| m.action_name(i, x)).collect();
            writeln!(out, "{} {a} : {}", m.state_name(s), acts.join(" ")).unwrap();
        }
    }

    out.push_str("\n[observations]\n");
    for s in m.states() {
        for (i, a) in m.agents().iter().enumerate() {
            if let Some(o) = m.explicit_observation(i, s) {
                check(o);
                writeln!(out, "{} {a} : {o}", m.state_name(s)).unwrap();
            }
        }
    }

    out.push_str("\n[transitions]\n");
    for (s, a, t) in m.transitions() {
        let acts: Vec<&str> = a.0.iter().enumerate().map(|(i, &x)| m.action_name(i, x)).collect();
        writeln!(out, "{} -> {} : {}", m.state_name(s), m.state_name(t), acts.join(" ")).unwrap();
    }

    out.push_str("\n[labels]\n");
    for s in m.states() {
        let ls = m.labels(s);
        if !ls.is_empty() {
            ls.iter().for_each(|x| check(x));
            let ls: Vec<&str> = ls.iter().map(String::as_str).collect();
            writeln!(out, "{} : {}", m.state_name(s), ls.join(" ")).unwrap();
        }
    }
    out
}
