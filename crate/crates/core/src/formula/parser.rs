use std::sync::Arc;

use super::{Formula, PsiKind};
use crate::error::{Error, Result};
use crate::model::{AgentId, FeatureId};
use crate::sequence::Update;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Not,
    And,
    Or,
    Implies,
    Iff,
    Op(Update),
    LParen,
    RParen,
    Comma,
    Word(String),
    Nat(usize),
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = input.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = pos;
            while let Some(&(p, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    end = p + c.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Word(input[pos..end].to_string())));
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, c)) = it.peek() {
                if c.is_ascii_digit() {
                    end = p + 1;
                    it.next();
                } else {
                    break;
                }
            }
            let n = input[pos..end]
                .parse()
                .map_err(|_| syntax(pos, "number too large"))?;
            out.push((pos, Tok::Nat(n)));
            continue;
        }
        it.next();
        let tok = match c {
            '!' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Implies,
            '↔' => Tok::Iff,
            '△' => Tok::Op(Update::Diff),
            '□' => Tok::Op(Update::Net),
            '○' => Tok::Op(Update::Sync),
            '⊤' => Tok::Word("true".into()),
            '⊥' => Tok::Word("false".into()),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '-' => match it.next() {
                Some((_, '>')) => Tok::Implies,
                _ => return Err(syntax(pos, "expected `->`")),
            },
            '<' => match (it.next(), it.next()) {
                (Some((_, '-')), Some((_, '>'))) => Tok::Iff,
                _ => return Err(syntax(pos, "expected `<->`")),
            },
            '[' => {
                let start = pos + 1;
                let mut end = None;
                for (p, c) in it.by_ref() {
                    if c == ']' {
                        end = Some(p);
                        break;
                    }
                }
                let end = end.ok_or_else(|| syntax(pos, "unterminated `[`"))?;
                match &input[start..end] {
                    "diff" => Tok::Op(Update::Diff),
                    "net" => Tok::Op(Update::Net),
                    "sync" => Tok::Op(Update::Sync),
                    _ => {
                        return Err(Error::UnknownOperator {
                            offset: pos,
                            token: input[pos..=end].to_string(),
                        })
                    }
                }
            }
            other => {
                return Err(Error::UnknownOperator {
                    offset: pos,
                    token: other.to_string(),
                })
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<(usize, String)> {
        let offset = self.offset();
        match self.toks.get(self.pos) {
            Some((_, Tok::Word(w))) => {
                let w = w.clone();
                self.pos += 1;
                Ok((offset, w))
            }
            _ => Err(syntax(offset, "expected identifier")),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::Iff(Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::Implies(Arc::new(lhs), Arc::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::Or(Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::And(Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::Not(Arc::new(self.unary()?)))
            }
            Some(&Tok::Op(op)) => {
                self.pos += 1;
                Ok(Formula::Dyn(op, Arc::new(self.unary()?)))
            }
            _ => self.atom(),
        }
    }

    fn pair(&mut self) -> Result<(String, String)> {
        self.expect(&Tok::LParen, "`(`")?;
        let (_, a) = self.ident()?;
        self.expect(&Tok::Comma, "`,`")?;
        let (_, b) = self.ident()?;
        self.expect(&Tok::RParen, "`)`")?;
        Ok((a, b))
    }

    fn atom(&mut self) -> Result<Formula> {
        let offset = self.offset();
        match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.iff()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Word(w)) => {
                self.pos += 1;
                match w.as_str() {
                    "N" => {
                        let (a, b) = self.pair()?;
                        Ok(Formula::Edge(AgentId::new(&a)?, AgentId::new(&b)?))
                    }
                    "has" => {
                        let (a, f) = self.pair()?;
                        Ok(Formula::Has(AgentId::new(&a)?, FeatureId::new(&f)?))
                    }
                    "sim" => {
                        let (a, b) = self.pair()?;
                        Ok(Formula::Sim(AgentId::new(&a)?, AgentId::new(&b)?))
                    }
                    "pressure" => {
                        let (a, f) = self.pair()?;
                        Ok(Formula::Pressure(AgentId::new(&a)?, FeatureId::new(&f)?))
                    }
                    "psi_diff" => Ok(Formula::Psi(PsiKind::Diff)),
                    "psi_net" => Ok(Formula::Psi(PsiKind::Net)),
                    "psi_diffnet" => Ok(Formula::Psi(PsiKind::DiffNet)),
                    "psi_netdiff" => {
                        self.expect(&Tok::LParen, "`(`")?;
                        let n = match self.peek() {
                            Some(&Tok::Nat(n)) => n,
                            _ => return Err(syntax(self.offset(), "expected a number")),
                        };
                        self.pos += 1;
                        self.expect(&Tok::RParen, "`)`")?;
                        Ok(Formula::Psi(PsiKind::NetDiff(n)))
                    }
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => Err(Error::UnknownOperator { offset, token: w }),
                }
            }
            Some(_) => Err(syntax(offset, "expected a formula")),
            None => Err(syntax(offset, "unexpected end of input")),
        }
    }
}

/// Parses the concrete syntax.
///
/// Precedence from loosest to tightest: `<->` (left-associative), `->`
/// (right-associative), `|`, `&`, then the prefix operators `!`, `[diff]`,
/// `[net]`, `[sync]`. The unicode forms `↔ → ∨ ∧ ¬ △ □ ○ ⊤ ⊥` are accepted
/// too.
pub fn parse(input: &str) -> Result<Formula> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.len(),
    };
    let f = p.iff()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(f)
}
