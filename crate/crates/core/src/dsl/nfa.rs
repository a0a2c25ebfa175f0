use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{is_identifier, lines, ParseError, Token};
use crate::recognition::Nfa;

/// Parses an automaton document.
///
/// ```text
/// states q0 q1      # optional
/// alphabet a b      # optional; defaults to the symbols used
/// initial q0
/// final q1
/// q0 a q1
/// ```
///
/// States are declared by the `states`, `initial` and `final` lines; a
/// transition naming anything else is an error.
pub fn parse_nfa(src: &str) -> Result<Nfa, ParseError> {
    let mut states: Vec<String> = Vec::new();
    let mut alphabet: Option<Vec<String>> = None;
    let mut initial: Option<usize> = None;
    let mut finals = BTreeSet::new();
    let mut raw_transitions: Vec<[Token<'_>; 3]> = Vec::new();

    let declare = |states: &mut Vec<String>, name: &str| -> usize {
        match states.iter().position(|s| s == name) {
            Some(i) => i,
            None => {
                states.push(name.to_string());
                states.len() - 1
            }
        }
    };

    let all = lines(src);
    for line in &all {
        if let Some(c) = &line.colon {
            return Err(ParseError::at(c, "unexpected `:`"));
        }
        let first = line.head[0];
        let rest = &line.head[1..];
        match first.text {
            "states" => {
                for t in rest {
                    declare(&mut states, t.text);
                }
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(ParseError::at(&first, "duplicate alphabet line"));
                }
                alphabet = Some(rest.iter().map(|t| t.text.to_string()).collect());
            }
            "initial" => {
                let [q] = rest else {
                    return Err(ParseError::at(&first, "expected exactly one initial state"));
                };
                if initial.is_some() {
                    return Err(ParseError::at(q, "more than one initial state"));
                }
                initial = Some(declare(&mut states, q.text));
            }
            "final" => {
                for t in rest {
                    finals.insert(declare(&mut states, t.text));
                }
            }
            _ => {
                let [a, b, c] = line.head.as_slice() else {
                    return Err(ParseError::at(&first, "expected `state symbol state`"));
                };
                raw_transitions.push([*a, *b, *c]);
            }
        }
    }

    let Some(initial) = initial else {
        let (line, column) = all.last().map(|l| (l.number, 1)).unwrap_or((1, 1));
        return Err(ParseError::new(line, column, "missing `initial` line"));
    };

    let fixed_alphabet = alphabet.is_some();
    let mut alphabet = alphabet.unwrap_or_default();
    let mut delta: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for [from, sym, to] in raw_transitions {
        let find = |t: &Token<'_>| {
            states
                .iter()
                .position(|s| s == t.text)
                .ok_or_else(|| ParseError::at(t, format!("undeclared state `{}`", t.text)))
        };
        let q = find(&from)?;
        let r = find(&to)?;
        let a = match alphabet.iter().position(|x| x == sym.text) {
            Some(i) => i,
            None if fixed_alphabet => {
                return Err(ParseError::at(&sym, format!("symbol `{}` is not in the alphabet", sym.text)))
            }
            None => {
                alphabet.push(sym.text.to_string());
                alphabet.len() - 1
            }
        };
        delta.entry((q, a)).or_default().insert(r);
    }

    Ok(Nfa { states, alphabet, initial, finals, delta })
}

/// Serialises `nfa` with explicit `states` and `alphabet` lines.
pub fn write_nfa(nfa: &Nfa) -> String {
    for s in nfa.states.iter().chain(&nfa.alphabet) {
        assert!(is_identifier(s), "`{s}` is not a valid identifier");
    }
    let mut out = String::new();
    writeln!(out, "states {}", nfa.states.join(" ")).unwrap();
    writeln!(out, "alphabet {}", nfa.alphabet.join(" ")).unwrap();
    writeln!(out, "initial {}", nfa.states[nfa.initial]).unwrap();
    if !nfa.finals.is_empty() {
        let fs: Vec<&str> = nfa.finals.iter().map(|&q| nfa.states[q].as_str()).collect();
        writeln!(out, "final {}", fs.join(" ")).unwrap();
    }
    for (&(q, a), targets) in &nfa.delta {
        for &r in targets {
            writeln!(out, "{} {} {}", nfa.states[q], nfa.alphabet[a], nfa.states[r]).unwrap();
        }
    }
    out
}
