use std::collections::BTreeSet;
use std::fmt;

/// CTL formulas over named atomic propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    EX(Box<Formula>),
    AX(Box<Formula>),
    EF(Box<Formula>),
    AF(Box<Formula>),
    EG(Box<Formula>),
    AG(Box<Formula>),
    EU(Box<Formula>, Box<Formula>),
    AU(Box<Formula>, Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(p: impl Into<String>) -> Self {
        Atom(p.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn ex(f: Formula) -> Self {
        EX(Box::new(f))
    }

    pub fn ax(f: Formula) -> Self {
        AX(Box::new(f))
    }

    pub fn ef(f: Formula) -> Self {
        EF(Box::new(f))
    }

    pub fn af(f: Formula) -> Self {
        AF(Box::new(f))
    }

    pub fn eg(f: Formula) -> Self {
        EG(Box::new(f))
    }

    pub fn ag(f: Formula) -> Self {
        AG(Box::new(f))
    }

    pub fn eu(a: Formula, b: Formula) -> Self {
        EU(Box::new(a), Box::new(b))
    }

    pub fn au(a: Formula, b: Formula) -> Self {
        AU(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `True` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or(True)
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            True | False => {}
            Atom(p) => {
                out.insert(p);
            }
            Not(f) | EX(f) | AX(f) | EF(f) | AF(f) | EG(f) | AG(f) => f.collect_atoms(out),
            And(a, b) | Or(a, b) | Implies(a, b) | EU(a, b) | AU(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            True | False | Atom(_) => 0,
            Not(f) | EX(f) | AX(f) | EF(f) | AF(f) | EG(f) | AG(f) => 1 + f.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) | EU(a, b) | AU(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Rewrites into the core fragment `True, Atom, Not, Or, EX, EU, EG`.
    ///
    /// Double negations are cancelled, so the result never contains
    /// `Not(Not(_))` and normalising twice is the identity.
    pub fn normalize(&self) -> Formula {
        match self {
            True => True,
            False => neg(True),
            Atom(p) => Atom(p.clone()),
            Not(f) => neg(f.normalize()),
            Or(a, b) => Formula::or(a.normalize(), b.normalize()),
            And(a, b) => neg(Formula::or(neg(a.normalize()), neg(b.normalize()))),
            Implies(a, b) => Formula::or(neg(a.normalize()), b.normalize()),
            EX(f) => Formula::ex(f.normalize()),
            AX(f) => neg(Formula::ex(neg(f.normalize()))),
            EF(f) => Formula::eu(True, f.normalize()),
            AF(f) => neg(Formula::eg(neg(f.normalize()))),
            EG(f) => Formula::eg(f.normalize()),
            AG(f) => neg(Formula::eu(True, neg(f.normalize()))),
            EU(a, b) => Formula::eu(a.normalize(), b.normalize()),
            AU(a, b) => {
                // A(a U b) = !E(!b U (!a & !b)) & !EG !b
                let na = neg(a.normalize());
                let nb = neg(b.normalize());
                let both = neg(Formula::or(neg(na), neg(nb.clone())));
                let left = neg(Formula::eu(nb.clone(), both));
                let right = neg(Formula::eg(nb));
                neg(Formula::or(neg(left), neg(right)))
            }
        }
    }

    pub fn is_core(&self) -> bool {
        match self {
            True | Atom(_) => true,
            Not(f) => !matches!(**f, Not(_)) && f.is_core(),
            Or(a, b) | EU(a, b) => a.is_core() && b.is_core(),
            EX(f) | EG(f) => f.is_core(),
            _ => false,
        }
    }
}

fn neg(f: Formula) -> Formula {
    match f {
        Not(inner) => *inner,
        other => Formula::not(other),
    }
}

pub(crate) const KEYWORDS: &[&str] = &["EX", "AX", "EF", "AF", "EG", "AG", "U", "true", "false"];

pub(crate) fn is_atom_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '=' | '.' | '{' | '}' | ',' | '+' | '\'' | '$' | '/')
}

fn write_atom(f: &mut fmt::Formatter<'_>, p: &str) -> fmt::Result {
    let plain = !p.is_empty() && p.chars().all(is_atom_char) && !KEYWORDS.contains(&p) && p != "E" && p != "A";
    if plain {
        write!(f, "{p}")
    } else {
        write!(f, "\"")?;
        for c in p.chars() {
            match c {
                '"' => write!(f, "\\\"")?,
                '\\' => write!(f, "\\\\")?,
                c => write!(f, "{c}")?,
            }
        }
        write!(f, "\"")
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    match g {
        And(..) | Or(..) | Implies(..) => write!(f, "({g})"),
        _ => write!(f, "{g}"),
    }
}

/// Prints in the concrete syntax accepted by [`crate::dsl::parse_formula`].
/// Binary operators are always parenthesised so the output re-parses to the
/// same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unary = |f: &mut fmt::Formatter<'_>, op: &str, g: &Formula| {
            write!(f, "{op} ")?;
            write_operand(f, g)
        };
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(p) => write_atom(f, p),
            Not(g) => {
                write!(f, "!")?;
                write_operand(f, g)
            }
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            EX(g) => unary(f, "EX", g),
            AX(g) => unary(f, "AX", g),
            EF(g) => unary(f, "EF", g),
            AF(g) => unary(f, "AF", g),
            EG(g) => unary(f, "EG", g),
            AG(g) => unary(f, "AG", g),
            EU(a, b) => write!(f, "E[{a} U {b}]"),
            AU(a, b) => write!(f, "A[{a} U {b}]"),
        }
    }
}
