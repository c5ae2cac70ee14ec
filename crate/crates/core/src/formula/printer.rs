use std::fmt::{self, Write};

use super::Formula;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_prec(out: &mut fmt::Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    let parens = precedence(f) < min;
    if parens {
        out.write_char('(')?;
    }
    match f {
        Formula::True => out.write_str("true")?,
        Formula::False => out.write_str("false")?,
        Formula::Edge(a, b) => write!(out, "N({a},{b})")?,
        Formula::Has(a, feat) => write!(out, "has({a},{feat})")?,
        Formula::Sim(a, b) => write!(out, "sim({a},{b})")?,
        Formula::Pressure(a, feat) => write!(out, "pressure({a},{feat})")?,
        Formula::Psi(kind) => write!(out, "{kind}")?,
        Formula::Not(x) => {
            out.write_char('!')?;
            write_prec(out, x, UNARY)?;
        }
        Formula::Dyn(op, x) => {
            write!(out, "[{op}] ")?;
            write_prec(out, x, UNARY)?;
        }
        Formula::And(l, r) => {
            write_prec(out, l, AND)?;
            out.write_str(" & ")?;
            write_prec(out, r, UNARY)?;
        }
        Formula::Or(l, r) => {
            write_prec(out, l, OR)?;
            out.write_str(" | ")?;
            write_prec(out, r, AND)?;
        }
        Formula::Implies(l, r) => {
            write_prec(out, l, OR)?;
            out.write_str(" -> ")?;
            write_prec(out, r, IMPLIES)?;
        }
        Formula::Iff(l, r) => {
            write_prec(out, l, IFF)?;
            out.write_str(" <-> ")?;
            write_prec(out, r, IMPLIES)?;
        }
    }
    if parens {
        out.write_char(')')?;
    }
    Ok(())
}

/// Canonical ASCII syntax with minimal parentheses.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(f, self, 0)
    }
}
