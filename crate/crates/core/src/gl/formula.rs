use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{end_pos, tokenize, Parser, Pos, SyntaxError, TokenKind};

/// Propositional modal formula; `Box` reads as "provable".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalFormula {
    Atom(String),
    Falsum,
    Not(Box<ModalFormula>),
    Imp(Box<ModalFormula>, Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Box(Box<ModalFormula>),
}

impl ModalFormula {
    pub fn atom(s: &str) -> Self {
        ModalFormula::Atom(s.to_string())
    }

    pub fn not(f: Self) -> Self {
        ModalFormula::Not(Box::new(f))
    }

    pub fn imp(l: Self, r: Self) -> Self {
        ModalFormula::Imp(Box::new(l), Box::new(r))
    }

    pub fn and(l: Self, r: Self) -> Self {
        ModalFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        ModalFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn boxed(f: Self) -> Self {
        ModalFormula::Box(Box::new(f))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            ModalFormula::Atom(a) => {
                out.insert(a.clone());
            }
            ModalFormula::Falsum => {}
            ModalFormula::Not(f) | ModalFormula::Box(f) => f.collect_atoms(out),
            ModalFormula::Imp(l, r) | ModalFormula::And(l, r) | ModalFormula::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            ModalFormula::Atom(_) | ModalFormula::Falsum => 0,
            ModalFormula::Not(f) => f.modal_depth(),
            ModalFormula::Box(f) => 1 + f.modal_depth(),
            ModalFormula::Imp(l, r) | ModalFormula::And(l, r) | ModalFormula::Or(l, r) => {
                l.modal_depth().max(r.modal_depth())
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ModalFormula::Atom(_) | ModalFormula::Falsum => 1,
            ModalFormula::Not(f) | ModalFormula::Box(f) => 1 + f.size(),
            ModalFormula::Imp(l, r) | ModalFormula::And(l, r) | ModalFormula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(m: &ModalFormula, min: u8, out: &mut String) {
            let bin = |prec: u8, op: &str, l: &ModalFormula, lmin: u8, r: &ModalFormula, rmin: u8, out: &mut String| {
                if prec < min {
                    out.push('(');
                }
                go(l, lmin, out);
                out.push_str(op);
                go(r, rmin, out);
                if prec < min {
                    out.push(')');
                }
            };
            match m {
                ModalFormula::Atom(a) => out.push_str(a),
                ModalFormula::Falsum => out.push_str("bot"),
                ModalFormula::Not(g) => {
                    out.push('~');
                    go(g, 4, out);
                }
                ModalFormula::Box(g) => {
                    out.push_str("[]");
                    go(g, 4, out);
                }
                ModalFormula::Imp(l, r) => bin(1, " -> ", l, 2, r, 1, out),
                ModalFormula::Or(l, r) => bin(2, " | ", l, 2, r, 3, out),
                ModalFormula::And(l, r) => bin(3, " & ", l, 3, r, 4, out),
            }
        }
        let mut s = String::new();
        go(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Parses the modal syntax: `[]` for the box, bare identifiers as atoms,
/// otherwise the connectives of the main grammar.
pub fn parse_modal(text: &str) -> Result<ModalFormula, SyntaxError> {
    let origin = Pos { line: 1, col: 1 };
    let mut p = Parser::new(tokenize(text, origin)?, end_pos(text, origin));
    let f = iff(&mut p)?;
    p.expect_end()?;
    Ok(f)
}

fn iff(p: &mut Parser) -> Result<ModalFormula, SyntaxError> {
    let l = imp(p)?;
    if p.eat(&TokenKind::Iff) {
        let r = iff(p)?;
        return Ok(ModalFormula::and(ModalFormula::imp(l.clone(), r.clone()), ModalFormula::imp(r, l)));
    }
    Ok(l)
}

fn imp(p: &mut Parser) -> Result<ModalFormula, SyntaxError> {
    let l = or(p)?;
    if p.eat(&TokenKind::Arrow) {
        return Ok(ModalFormula::imp(l, imp(p)?));
    }
    Ok(l)
}

fn or(p: &mut Parser) -> Result<ModalFormula, SyntaxError> {
    let mut l = and(p)?;
    while p.eat(&TokenKind::Bar) {
        l = ModalFormula::or(l, and(p)?);
    }
    Ok(l)
}

fn and(p: &mut Parser) -> Result<ModalFormula, SyntaxError> {
    let mut l = unary(p)?;
    while p.eat(&TokenKind::Amp) {
        l = ModalFormula::and(l, unary(p)?);
    }
    Ok(l)
}

fn unary(p: &mut Parser) -> Result<ModalFormula, SyntaxError> {
    match p.peek().cloned() {
        Some(TokenKind::Tilde) => {
            p.bump();
            Ok(ModalFormula::not(unary(p)?))
        }
        Some(TokenKind::LBracket) => {
            p.bump();
            p.expect(&TokenKind::RBracket)?;
            Ok(ModalFormula::boxed(unary(p)?))
        }
        Some(TokenKind::LParen) => {
            p.bump();
            let f = iff(p)?;
            p.expect(&TokenKind::RParen)?;
            Ok(f)
        }
        Some(TokenKind::Ident(s)) => {
            p.bump();
            Ok(if s == "bot" { ModalFormula::Falsum } else { ModalFormula::Atom(s) })
        }
        _ => Err(p.unexpected("expected modal formula")),
    }
}
