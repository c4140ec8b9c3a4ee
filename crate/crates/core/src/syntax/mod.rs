//! Terms and formulas of the object language: first-order arithmetic with a
//! templated provability operator.
//!
//! A provability node `Prov[ φ ; x := t ]` quotes the template `φ` and
//! substitutes (the numeral for the value of) `t` for the dotted variable `x`.
//! The variables of the substitution domain are bound inside the template, so
//! substitution never descends into a template, only into the range terms.

mod lexer;
mod parser;
mod printer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use lexer::{Pos, Token, TokenKind};
pub use parser::{is_variable_name, parse_formula, parse_formula_at, parse_term, Parser};
pub(crate) use lexer::tokenize;
pub(crate) use parser::end_pos;

/// Largest decimal numeral accepted by the parser. Numerals are expanded into
/// successor towers, so this bounds recursion depth.
pub const MAX_NUMERAL: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{pos}: {msg}")]
    Parse { pos: Pos, msg: String },
    #[error("template variable `{0}` is not dotted in the substitution list")]
    UnboundDotted(String),
    #[error("dotted variable `{0}` does not occur free in the template")]
    SpuriousDotted(String),
    #[error("dotted variable `{0}` listed twice")]
    DuplicateDotted(String),
}

impl SyntaxError {
    pub(crate) fn at(pos: Pos, msg: impl Into<String>) -> Self {
        SyntaxError::Parse { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    Succ(Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
    Var(String),
}

pub type Subst = Vec<(String, Term)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Falsum,
    Eq(Term, Term),
    Lt(Term, Term),
    Not(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// Quoted template with its dotted-variable substitution, ordered by the
    /// first free occurrence of each variable in the template.
    Box(Box<Formula>, Subst),
    Pred(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn plus(l: Term, r: Term) -> Term {
        Term::Plus(Box::new(l), Box::new(r))
    }

    pub fn times(l: Term, r: Term) -> Term {
        Term::Times(Box::new(l), Box::new(r))
    }

    /// The n-fold successor tower over zero.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// `Some(n)` when the term is the numeral for `n`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Succ(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Zero => true,
            Term::Var(_) => false,
            Term::Succ(t) => t.is_closed(),
            Term::Plus(l, r) | Term::Times(l, r) => l.is_closed() && r.is_closed(),
        }
    }

    pub fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Succ(t) => t.free_vars_into(out),
            Term::Plus(l, r) | Term::Times(l, r) => {
                l.free_vars_into(out);
                r.free_vars_into(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    pub fn has_var(&self, v: &str) -> bool {
        match self {
            Term::Zero => false,
            Term::Var(w) => w == v,
            Term::Succ(t) => t.has_var(v),
            Term::Plus(l, r) | Term::Times(l, r) => l.has_var(v) || r.has_var(v),
        }
    }

    /// Simultaneous substitution of terms for variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Succ(t) => Term::succ(t.substitute(map)),
            Term::Plus(l, r) => Term::plus(l.substitute(map), r.substitute(map)),
            Term::Times(l, r) => Term::times(l.substitute(map), r.substitute(map)),
        }
    }

    fn rename_vars(&self, env: &[(String, String)]) -> Term {
        match self {
            Term::Zero => Term::Zero,
            Term::Var(v) => match env.iter().rev().find(|(from, _)| from == v) {
                Some((_, to)) => Term::Var(to.clone()),
                None => self.clone(),
            },
            Term::Succ(t) => Term::succ(t.rename_vars(env)),
            Term::Plus(l, r) => Term::plus(l.rename_vars(env), r.rename_vars(env)),
            Term::Times(l, r) => Term::times(l.rename_vars(env), r.rename_vars(env)),
        }
    }
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    /// `l <-> r`, encoded as `(l -> r) & (r -> l)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ForAll(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(name.into(), args)
    }

    /// Builds a provability node, checking dotted-variable totality and
    /// putting the substitution in canonical (first-occurrence) order.
    pub fn boxed(template: Formula, subst: Subst) -> Result<Formula, SyntaxError> {
        let mut seen = BTreeSet::new();
        for (v, _) in &subst {
            if !seen.insert(v.clone()) {
                return Err(SyntaxError::DuplicateDotted(v.clone()));
            }
        }
        let order = template.free_var_order();
        for v in &order {
            if !seen.contains(v) {
                return Err(SyntaxError::UnboundDotted(v.clone()));
            }
        }
        for v in &seen {
            if !order.contains(v) {
                return Err(SyntaxError::SpuriousDotted(v.clone()));
            }
        }
        let mut subst = subst;
        subst.sort_by_key(|(v, _)| order.iter().position(|w| w == v));
        Ok(Formula::Box(Box::new(template), subst))
    }

    /// `Prov[ φ ; x := x, ... ]` over all free variables of `φ`.
    pub fn boxed_identity(template: Formula) -> Formula {
        let subst = template
            .free_var_order()
            .into_iter()
            .map(|v| {
                let t = Term::Var(v.clone());
                (v, t)
            })
            .collect();
        Formula::Box(Box::new(template), subst)
    }

    /// Recognizes the `(a -> b) & (b -> a)` encoding of a biconditional.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::And(l, r) = self {
            if let (Formula::Imp(a, b), Formula::Imp(c, d)) = (&**l, &**r) {
                if a == d && b == c {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.free_var_order().into_iter().collect()
    }

    /// Free variables in order of first occurrence (left to right).
    pub fn free_var_order(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut vs = Vec::new();
            term_var_order(t, &mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Falsum => {}
            Formula::Eq(l, r) | Formula::Lt(l, r) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            Formula::Pred(_, args) => {
                for a in args {
                    term(a, bound, out);
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Imp(l, r) | Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Box(_, subst) => {
                for (_, t) in subst {
                    term(t, bound, out);
                }
            }
        }
    }

    pub fn has_free(&self, v: &str) -> bool {
        match self {
            Formula::Falsum => false,
            Formula::Eq(l, r) | Formula::Lt(l, r) => l.has_var(v) || r.has_var(v),
            Formula::Pred(_, args) => args.iter().any(|a| a.has_var(v)),
            Formula::Not(f) => f.has_free(v),
            Formula::Imp(l, r) | Formula::And(l, r) | Formula::Or(l, r) => {
                l.has_free(v) || r.has_free(v)
            }
            Formula::ForAll(w, body) | Formula::Exists(w, body) => w != v && body.has_free(v),
            Formula::Box(_, subst) => subst.iter().any(|(_, t)| t.has_var(v)),
        }
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `v`.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(v.to_string(), t.clone());
        self.substitute_many(&map)
    }

    /// Capture-avoiding simultaneous substitution.
    pub fn substitute_many(&self, map: &BTreeMap<String, Term>) -> Formula {
        let map: BTreeMap<String, Term> = map
            .iter()
            .filter(|(v, t)| self.has_free(v) && !matches!(t, Term::Var(w) if w == *v))
            .map(|(v, t)| (v.clone(), t.clone()))
            .collect();
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Falsum => Formula::Falsum,
            Formula::Eq(l, r) => Formula::Eq(l.substitute(&map), r.substitute(&map)),
            Formula::Lt(l, r) => Formula::Lt(l.substitute(&map), r.substitute(&map)),
            Formula::Pred(name, args) => {
                Formula::Pred(name.clone(), args.iter().map(|a| a.substitute(&map)).collect())
            }
            Formula::Not(f) => Formula::not(f.substitute_many(&map)),
            Formula::Imp(l, r) => Formula::imp(l.substitute_many(&map), r.substitute_many(&map)),
            Formula::And(l, r) => Formula::and(l.substitute_many(&map), r.substitute_many(&map)),
            Formula::Or(l, r) => Formula::or(l.substitute_many(&map), r.substitute_many(&map)),
            Formula::ForAll(w, body) | Formula::Exists(w, body) => {
                let mut inner = map.clone();
                inner.remove(w);
                let (w, body) = if inner.values().any(|t| t.has_var(w)) {
                    let mut avoid = body.free_vars();
                    for (v, t) in &inner {
                        avoid.insert(v.clone());
                        t.free_vars_into(&mut avoid);
                    }
                    let fresh = fresh_name(w, &avoid);
                    let renamed = body.substitute(w, &Term::Var(fresh.clone()));
                    (fresh, renamed)
                } else {
                    (w.clone(), (**body).clone())
                };
                let body = body.substitute_many(&inner);
                match self {
                    Formula::ForAll(..) => Formula::forall(w, body),
                    _ => Formula::exists(w, body),
                }
            }
            Formula::Box(tpl, subst) => Formula::Box(
                tpl.clone(),
                subst.iter().map(|(x, s)| (x.clone(), s.substitute(&map))).collect(),
            ),
        }
    }

    /// Renames every application of predicate `from` to `to`, including
    /// occurrences inside quoted templates.
    pub fn rename_pred(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::Pred(name, args) if name == from => Formula::Pred(to.to_string(), args.clone()),
            Formula::Falsum | Formula::Eq(..) | Formula::Lt(..) | Formula::Pred(..) => self.clone(),
            Formula::Not(f) => Formula::not(f.rename_pred(from, to)),
            Formula::Imp(l, r) => Formula::imp(l.rename_pred(from, to), r.rename_pred(from, to)),
            Formula::And(l, r) => Formula::and(l.rename_pred(from, to), r.rename_pred(from, to)),
            Formula::Or(l, r) => Formula::or(l.rename_pred(from, to), r.rename_pred(from, to)),
            Formula::ForAll(v, b) => Formula::forall(v.clone(), b.rename_pred(from, to)),
            Formula::Exists(v, b) => Formula::exists(v.clone(), b.rename_pred(from, to)),
            Formula::Box(tpl, subst) => Formula::Box(Box::new(tpl.rename_pred(from, to)), subst.clone()),
        }
    }

    /// Visits every predicate application; `quoted` tells whether it sits
    /// inside a provability template.
    pub fn for_each_pred(&self, f: &mut dyn FnMut(&str, &[Term], bool)) {
        self.walk_preds(false, f)
    }

    fn walk_preds(&self, quoted: bool, f: &mut dyn FnMut(&str, &[Term], bool)) {
        match self {
            Formula::Pred(name, args) => f(name, args, quoted),
            Formula::Falsum | Formula::Eq(..) | Formula::Lt(..) => {}
            Formula::Not(g) | Formula::ForAll(_, g) | Formula::Exists(_, g) => g.walk_preds(quoted, f),
            Formula::Imp(l, r) | Formula::And(l, r) | Formula::Or(l, r) => {
                l.walk_preds(quoted, f);
                r.walk_preds(quoted, f);
            }
            Formula::Box(tpl, _) => tpl.walk_preds(true, f),
        }
    }

    /// Bound variables renamed to position-determined names, so that
    /// alpha-equivalent formulas become structurally equal.
    pub fn canonical(&self) -> Formula {
        let mut env = Vec::new();
        self.canon(&mut env)
    }

    fn canon(&self, env: &mut Vec<(String, String)>) -> Formula {
        match self {
            Formula::Falsum => Formula::Falsum,
            Formula::Eq(l, r) => Formula::Eq(l.rename_vars(env), r.rename_vars(env)),
            Formula::Lt(l, r) => Formula::Lt(l.rename_vars(env), r.rename_vars(env)),
            Formula::Pred(n, args) => {
                Formula::Pred(n.clone(), args.iter().map(|a| a.rename_vars(env)).collect())
            }
            Formula::Not(f) => Formula::not(f.canon(env)),
            Formula::Imp(l, r) => Formula::imp(l.canon(env), r.canon(env)),
            Formula::And(l, r) => Formula::and(l.canon(env), r.canon(env)),
            Formula::Or(l, r) => Formula::or(l.canon(env), r.canon(env)),
            Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                let name = format!("#{}", env.len());
                env.push((v.clone(), name.clone()));
                let body = body.canon(env);
                env.pop();
                match self {
                    Formula::ForAll(..) => Formula::forall(name, body),
                    _ => Formula::exists(name, body),
                }
            }
            Formula::Box(tpl, subst) => {
                let mut inner: Vec<(String, String)> = subst
                    .iter()
                    .enumerate()
                    .map(|(i, (v, _))| (v.clone(), format!("#{i}")))
                    .collect();
                let tpl = tpl.canon(&mut inner);
                let subst = subst
                    .iter()
                    .enumerate()
                    .map(|(i, (_, t))| (format!("#{i}"), t.rename_vars(env)))
                    .collect();
                Formula::Box(Box::new(tpl), subst)
            }
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Falsum | Formula::Eq(..) | Formula::Lt(..) | Formula::Pred(..))
    }

    /// Nesting depth of connectives, quantifiers and provability nodes;
    /// atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Falsum | Formula::Eq(..) | Formula::Lt(..) | Formula::Pred(..) => 1,
            Formula::Not(g) | Formula::ForAll(_, g) | Formula::Exists(_, g) | Formula::Box(g, _) => 1 + g.depth(),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

fn term_var_order(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Zero => {}
        Term::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Term::Succ(t) => term_var_order(t, out),
        Term::Plus(l, r) | Term::Times(l, r) => {
            term_var_order(l, out);
            term_var_order(r, out);
        }
    }
}

/// Appends the smallest numeric suffix that makes `base` avoid `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded suffix search")
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(f: &Formula, g: &Formula) -> bool {
    f == g || f.canonical() == g.canonical()
}

/// Membership in the syntactic Σ₁ class: atoms, negated atoms, provability
/// nodes, conjunction, disjunction, bounded quantifiers and unbounded `exists`.
pub fn is_sigma1(f: &Formula) -> bool {
    match f {
        Formula::Falsum | Formula::Eq(..) | Formula::Lt(..) | Formula::Box(..) => true,
        Formula::Not(g) => matches!(**g, Formula::Falsum | Formula::Eq(..) | Formula::Lt(..)),
        Formula::And(l, r) | Formula::Or(l, r) => is_sigma1(l) && is_sigma1(r),
        Formula::Exists(_, body) => is_sigma1(body),
        Formula::ForAll(v, body) => match &**body {
            Formula::Imp(guard, rest) => match &**guard {
                Formula::Lt(Term::Var(x), bound) if x == v && !bound.has_var(v) => is_sigma1(rest),
                _ => false,
            },
            _ => false,
        },
        Formula::Imp(..) | Formula::Pred(..) => false,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::print_formula(self))
    }
}
