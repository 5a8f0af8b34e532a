//! Concrete ASCII syntax for formulas.
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" impl)?          non-associative
//! impl    := disj ("->" impl)?           right-associative
//! disj    := conj ("|" conj)*            left-associative
//! conj    := unary ("&" unary)*          left-associative
//! unary   := "!" unary | "N" unary | "<N>" unary | "B" "{" idlist? "}" unary | atom
//! atom    := "true" | "false" | ident | "(" formula ")"
//! idlist  := ident ("," ident)*
//! ```
//!
//! `<N> f` is sugar for `!N !f`. The printer emits the same grammar with the
//! fewest parentheses that still parse back to the same tree.

use std::fmt;

use thiserror::Error;

use crate::formula::{AgentId, Coalition, Formula, Proposition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Bang,
    Nec,
    Poss,
    Blame,
    LBrace,
    RBrace,
    Comma,
    LParen,
    RParen,
    And,
    Or,
    Arrow,
    Iff,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "{s:?}"),
            Tok::True => "\"true\"",
            Tok::False => "\"false\"",
            Tok::Bang => "\"!\"",
            Tok::Nec => "\"N\"",
            Tok::Poss => "\"<N>\"",
            Tok::Blame => "\"B\"",
            Tok::LBrace => "\"{\"",
            Tok::RBrace => "\"}\"",
            Tok::Comma => "\",\"",
            Tok::LParen => "\"(\"",
            Tok::RParen => "\")\"",
            Tok::And => "\"&\"",
            Tok::Or => "\"|\"",
            Tok::Arrow => "\"->\"",
            Tok::Iff => "\"<->\"",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let word = |i: usize| {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            j
        };
        let tok = match c {
            b'!' => {
                i += 1;
                Tok::Bang
            }
            b'{' => {
                i += 1;
                Tok::LBrace
            }
            b'}' => {
                i += 1;
                Tok::RBrace
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'&' => {
                i += 1;
                Tok::And
            }
            b'|' => {
                i += 1;
                Tok::Or
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            b'<' if text[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            b'<' if text[i..].starts_with("<N>") => {
                i += 3;
                Tok::Poss
            }
            b'a'..=b'z' => {
                i = word(i);
                match &text[start..i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    s => Tok::Ident(s.to_string()),
                }
            }
            b'A'..=b'Z' => {
                i = word(i);
                match &text[start..i] {
                    "N" => Tok::Nec,
                    "B" => Tok::Blame,
                    s => {
                        return Err(ParseError {
                            position: start,
                            expected: "\"N\", \"B\" or a lowercase identifier".into(),
                            found: format!("{s:?}"),
                        })
                    }
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    position: start,
                    expected: "a token".into(),
                    found: format!("{ch:?}"),
                });
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            expected: expected.to_string(),
            found: tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            if *self.peek() == Tok::Iff {
                return Err(self.error("end of formula (\"<->\" does not chain)"));
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Nec => {
                self.bump();
                Ok(Formula::nec(self.unary()?))
            }
            Tok::Poss => {
                self.bump();
                Ok(Formula::possible(self.unary()?))
            }
            Tok::Blame => {
                self.bump();
                let coalition = self.coalition()?;
                Ok(Formula::blame(coalition, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn coalition(&mut self) -> Result<Coalition, ParseError> {
        self.expect(Tok::LBrace, "\"{\" after \"B\"")?;
        let mut members = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                match self.peek().clone() {
                    Tok::Ident(name) => {
                        self.bump();
                        // The lexer only produces valid identifiers here.
                        members
                            .push(AgentId::new(name).expect("lexer produced invalid identifier"));
                    }
                    _ => return Err(self.error("an agent identifier")),
                }
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RBrace => break,
                    _ => return Err(self.error("\",\" or \"}\"")),
                }
            }
        }
        self.expect(Tok::RBrace, "\"}\"")?;
        Ok(Coalition::new(members))
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Prop(
                    Proposition::new(name).expect("lexer produced invalid identifier"),
                ))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "\")\"")?;
                Ok(f)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses a formula from text.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}

// Binding strength of the outermost operator, higher binds tighter.
const IFF: u8 = 0;
const IMPL: u8 = 1;
const DISJ: u8 = 2;
const CONJ: u8 = 3;
const UNARY: u8 = 4;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPL,
        Formula::Or(..) => DISJ,
        Formula::And(..) => CONJ,
        _ => UNARY,
    }
}

fn write_child(out: &mut String, f: &Formula, parens: bool) {
    if parens {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_binary(out: &mut String, op: &str, own: u8, a: &Formula, b: &Formula) {
    let (left_parens, right_parens) = match own {
        IFF => (level(a) == IFF, level(b) == IFF),
        IMPL => (level(a) <= IMPL, level(b) < IMPL),
        _ => (level(a) < own, level(b) <= own),
    };
    write_child(out, a, left_parens);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_child(out, b, right_parens);
}

fn write_formula(out: &mut String, f: &Formula) {
    if let Some(g) = f.as_possible() {
        out.push_str("<N> ");
        write_child(out, g, level(g) < UNARY);
        return;
    }
    match f {
        Formula::Prop(p) => out.push_str(p.as_str()),
        Formula::Top => out.push_str("true"),
        Formula::Bottom => out.push_str("false"),
        Formula::Not(g) => {
            out.push('!');
            write_child(out, g, level(g) < UNARY);
        }
        Formula::Necessity(g) => {
            out.push_str("N ");
            write_child(out, g, level(g) < UNARY);
        }
        Formula::Blame(c, g) => {
            out.push('B');
            out.push_str(&c.to_string());
            out.push(' ');
            write_child(out, g, level(g) < UNARY);
        }
        Formula::Implies(a, b) => write_binary(out, "->", IMPL, a, b),
        Formula::Iff(a, b) => write_binary(out, "<->", IFF, a, b),
        Formula::Or(a, b) => write_binary(out, "|", DISJ, a, b),
        Formula::And(a, b) => write_binary(out, "&", CONJ, a, b),
    }
}

/// Canonical text of a formula with minimal parentheses.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}
