//! Recursive-descent parser for the ASCII LTL grammar.
//!
//! Precedence, loosest first: `->` (right), `|`, `&`, `U`/`R` (right), then
//! the unary operators `!`, `X`, `F`, `G`. A run of `X`/`F`/`G` letters written
//! without spaces (`GF a`) is read as nested unary operators.

use super::Formula;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            c if c.is_whitespace() => i += 1,
            '!' | '~' => {
                out.push((i, Tok::Not));
                i += 1;
            }
            '&' => {
                out.push((i, Tok::And));
                i += if bytes.get(i + 1) == Some(&b'&') { 2 } else { 1 };
            }
            '|' => {
                out.push((i, Tok::Or));
                i += if bytes.get(i + 1) == Some(&b'|') { 2 } else { 1 };
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::Implies));
                i += 2;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(Error::Parse {
                    position: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

fn is_unary_run(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| matches!(c, 'X' | 'F' | 'G'))
}

fn is_reserved(s: &str) -> bool {
    matches!(s, "true" | "false" | "U" | "R") || is_unary_run(s)
}

/// Identifiers that denote atomic propositions, in order of first occurrence.
pub fn collect_identifiers(text: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in lex(text)? {
        if let Tok::Ident(s) = t {
            if !is_reserved(&s) && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    aps: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.binary_temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.binary_temporal()?);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        match self.peek() {
            Some(Tok::Ident(s)) if s == "U" || s == "R" => {
                let until = s == "U";
                self.pos += 1;
                let rhs = self.binary_temporal()?;
                Ok(if until {
                    Formula::until(lhs, rhs)
                } else {
                    Formula::release(lhs, rhs)
                })
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            None => self.err("unexpected end of input"),
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(match self.unary()? {
                    Formula::Atom(i) => Formula::NegAtom(i),
                    f => Formula::not(f),
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(f)
            }
            Some(Tok::Ident(s)) => {
                if is_unary_run(&s) {
                    self.pos += 1;
                    let mut f = self.unary()?;
                    for c in s.chars().rev() {
                        f = match c {
                            'X' => Formula::next(f),
                            'F' => Formula::finally(f),
                            _ => Formula::globally(f),
                        };
                    }
                    return Ok(f);
                }
                match s.as_str() {
                    "true" => {
                        self.pos += 1;
                        Ok(Formula::True)
                    }
                    "false" => {
                        self.pos += 1;
                        Ok(Formula::False)
                    }
                    "U" | "R" => self.err(format!("`{s}` is missing its left operand")),
                    _ => {
                        let i = self.aps.iter().position(|a| *a == s).ok_or(Error::UnknownAtom(s))?;
                        self.pos += 1;
                        Ok(Formula::Atom(i))
                    }
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
        }
    }
}

/// Parses `text` over the propositions `aps` (an atom's index is its position
/// in `aps`). Implication is preserved; [`Formula::to_nnf`] removes it.
pub fn parse_ltl<S: AsRef<str>>(text: &str, aps: &[S]) -> Result<Formula> {
    if aps.is_empty() {
        return Err(Error::InvalidParameter("the proposition list must be non-empty".into()));
    }
    let aps: Vec<String> = aps.iter().map(|s| s.as_ref().to_string()).collect();
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        aps: &aps,
    };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}
