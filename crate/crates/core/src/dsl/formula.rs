use super::ParseError;
use crate::ctl::{is_atom_char, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

#[derive(Clone, Debug)]
struct Lexeme {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexeme>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    let mut end = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let push = |out: &mut Vec<Lexeme>, tok| out.push(Lexeme { tok, line: l, column: col });
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            '!' => {
                bump(&mut chars);
                push(&mut out, Tok::Not);
            }
            '&' => {
                bump(&mut chars);
                push(&mut out, Tok::And);
            }
            '|' => {
                bump(&mut chars);
                push(&mut out, Tok::Or);
            }
            '(' => {
                bump(&mut chars);
                push(&mut out, Tok::LParen);
            }
            ')' => {
                bump(&mut chars);
                push(&mut out, Tok::RParen);
            }
            '[' => {
                bump(&mut chars);
                push(&mut out, Tok::LBracket);
            }
            ']' => {
                bump(&mut chars);
                push(&mut out, Tok::RBracket);
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() != Some(&'>') {
                    return Err(ParseError::new(l, col, "expected `->`"));
                }
                bump(&mut chars);
                push(&mut out, Tok::Implies);
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        None => return Err(ParseError::new(l, col, "unterminated quoted atom")),
                        Some('"') => break,
                        Some('\\') => match bump(&mut chars) {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(ParseError::new(l, col, "invalid escape in quoted atom")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                push(&mut out, Tok::Quoted(s));
            }
            c if is_atom_char(c) => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| is_atom_char(c)) {
                    s.push(bump(&mut chars).unwrap());
                }
                push(&mut out, Tok::Ident(s));
            }
            other => return Err(ParseError::new(l, col, format!("unexpected character `{other}`"))),
        }
        end = (line, column);
    }
    out.push(Lexeme { tok: Tok::End, line: end.0, column: end.1 });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexeme>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Lexeme {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Lexeme {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Lexeme, msg: impl std::fmt::Display) -> ParseError {
        ParseError::new(at.line, at.column, msg)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(())
        } else {
            Err(self.error(&t, format!("expected {what}")))
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek().tok == Tok::Implies {
            self.next();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while self.peek().tok == Tok::Or {
            self.next();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.peek().tok == Tok::And {
            self.next();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::LParen => {
                let f = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Quoted(s) => Ok(Formula::atom(s.clone())),
            Tok::Ident(s) => match s.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                "EX" => Ok(Formula::ex(self.unary()?)),
                "AX" => Ok(Formula::ax(self.unary()?)),
                "EF" => Ok(Formula::ef(self.unary()?)),
                "AF" => Ok(Formula::af(self.unary()?)),
                "EG" => Ok(Formula::eg(self.unary()?)),
                "AG" => Ok(Formula::ag(self.unary()?)),
                "U" => Err(self.error(&t, "`U` outside of `E[.. U ..]` or `A[.. U ..]`")),
                q @ ("E" | "A") if self.peek().tok == Tok::LBracket => {
                    let existential = q == "E";
                    self.next();
                    let lhs = self.implication()?;
                    let u = self.next();
                    if u.tok != Tok::Ident("U".into()) {
                        return Err(self.error(&u, "expected `U`"));
                    }
                    let rhs = self.implication()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    Ok(if existential { Formula::eu(lhs, rhs) } else { Formula::au(lhs, rhs) })
                }
                _ => Ok(Formula::atom(s.clone())),
            },
            Tok::End => Err(self.error(&t, "unexpected end of formula")),
            other => Err(self.error(&t, format!("unexpected {}", describe(other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::And => "`&`",
        Tok::Or => "`|`",
        Tok::Implies => "`->`",
        Tok::RParen => "`)`",
        Tok::LBracket => "`[`",
        Tok::RBracket => "`]`",
        _ => "token",
    }
}

/// Parses a CTL formula.
///
/// Precedence from tightest: `!` and the temporal prefixes, `&`, `|`, then
/// right-associative `->`. Atoms may contain `=` (as in `d_1=bot`); anything
/// else can be written as a double-quoted string.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.implication()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(p.error(&t, "trailing input after formula"));
    }
    Ok(f)
}
