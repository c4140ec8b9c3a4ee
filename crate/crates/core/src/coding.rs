//! Gödel numbering of terms and formulas.
//!
//! Every node is a tagged pair `<tag, payload>` under the pairing
//! `<a, b> = (a + b)(a + b + 1)/2 + b + 1`, which never yields 0. Lists are
//! `0` (nil) or `<head, tail>`. Identifiers are coded by their UTF-8 bytes read
//! as a big-endian number. Closed successor towers `S(...S(0))` with at least
//! one successor are coded as `<16, n>`; otherwise the Cantor pairing would
//! make numeral codes grow doubly exponentially.
//!
//! [`sub_code`] and the diagonal trace operate on codes directly, without going
//! through [`decode`], so that they can be checked against the syntax-level
//! operations.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::syntax::{is_variable_name, Formula, Term};

mod tag {
    pub const ZERO: u32 = 0;
    pub const SUCC: u32 = 1;
    pub const PLUS: u32 = 2;
    pub const TIMES: u32 = 3;
    pub const VAR: u32 = 4;
    pub const FALSUM: u32 = 5;
    pub const EQ: u32 = 6;
    pub const LT: u32 = 7;
    pub const NOT: u32 = 8;
    pub const IMP: u32 = 9;
    pub const AND: u32 = 10;
    pub const OR: u32 = 11;
    pub const ALL: u32 = 12;
    pub const EX: u32 = 13;
    pub const BOX: u32 = 14;
    pub const PRED: u32 = 15;
    pub const NUMERAL: u32 = 16;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GodelCode(pub BigUint);

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::str::FromStr for GodelCode {
    type Err = CodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .parse::<BigUint>()
            .map(GodelCode)
            .map_err(|_| CodingError::NotANumber(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Syntax {
    Term(Term),
    Formula(Formula),
}

impl fmt::Display for Syntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Syntax::Term(t) => t.fmt(f),
            Syntax::Formula(g) => g.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodingError {
    #[error("{0} is not a code")]
    NotACode(String),
    #[error("`{0}` is not a decimal number")]
    NotANumber(String),
    #[error("hole `{0}` occurs outside a provability template")]
    UnquotedHole(String),
    #[error("hole `{hole}` applied to {found} arguments, expected {expected}")]
    HoleArity { hole: String, expected: usize, found: usize },
    #[error("fixed-point parameter `{0}` is not a variable name")]
    BadParam(String),
    #[error("diagonal trace does not replay: {0}")]
    Replay(String),
}

fn not_a_code(c: &BigUint) -> CodingError {
    CodingError::NotACode(c.to_string())
}

pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b + 1u32
}

/// Inverse of [`pair`]; `None` for 0.
pub fn unpair(c: &BigUint) -> Option<(BigUint, BigUint)> {
    if c.is_zero() {
        return None;
    }
    let z = c - 1u32;
    let mut w = ((&z * 8u32) + 1u32).sqrt();
    w = (w - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = &z - &t;
    let a = &w - &b;
    Some((a, b))
}

fn node(t: u32, payload: BigUint) -> BigUint {
    pair(&BigUint::from(t), &payload)
}

fn split(c: &BigUint) -> Result<(u32, BigUint), CodingError> {
    let (t, p) = unpair(c).ok_or_else(|| not_a_code(c))?;
    let t = t.to_u32().filter(|t| *t <= tag::NUMERAL).ok_or_else(|| not_a_code(c))?;
    Ok((t, p))
}

fn split_pair(c: &BigUint) -> Result<(BigUint, BigUint), CodingError> {
    unpair(c).ok_or_else(|| not_a_code(c))
}

pub fn name_code(name: &str) -> BigUint {
    BigUint::from_bytes_be(name.as_bytes())
}

fn decode_name(c: &BigUint) -> Result<String, CodingError> {
    let s = String::from_utf8(c.to_bytes_be()).map_err(|_| not_a_code(c))?;
    let ok = s.starts_with(|ch: char| ch.is_ascii_alphabetic())
        && s.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
    if ok {
        Ok(s)
    } else {
        Err(not_a_code(c))
    }
}

fn list_code(items: impl DoubleEndedIterator<Item = BigUint>) -> BigUint {
    items.rev().fold(BigUint::zero(), |tail, h| pair(&h, &tail))
}

fn decode_list(mut c: BigUint) -> Result<Vec<BigUint>, CodingError> {
    let mut out = Vec::new();
    while !c.is_zero() {
        let (h, t) = split_pair(&c)?;
        out.push(h);
        c = t;
    }
    Ok(out)
}

pub fn numeral_code(n: &BigUint) -> BigUint {
    if n.is_zero() {
        node(tag::ZERO, BigUint::zero())
    } else {
        node(tag::NUMERAL, n.clone())
    }
}

pub fn encode_term(t: &Term) -> BigUint {
    if let Some(n) = t.as_numeral() {
        return numeral_code(&BigUint::from(n));
    }
    match t {
        Term::Zero => unreachable!("zero is a numeral"),
        Term::Succ(inner) => node(tag::SUCC, encode_term(inner)),
        Term::Plus(l, r) => node(tag::PLUS, pair(&encode_term(l), &encode_term(r))),
        Term::Times(l, r) => node(tag::TIMES, pair(&encode_term(l), &encode_term(r))),
        Term::Var(v) => node(tag::VAR, name_code(v)),
    }
}

pub fn encode_formula(f: &Formula) -> BigUint {
    let bin = |t, l: &Formula, r: &Formula| node(t, pair(&encode_formula(l), &encode_formula(r)));
    match f {
        Formula::Falsum => node(tag::FALSUM, BigUint::zero()),
        Formula::Eq(l, r) => node(tag::EQ, pair(&encode_term(l), &encode_term(r))),
        Formula::Lt(l, r) => node(tag::LT, pair(&encode_term(l), &encode_term(r))),
        Formula::Not(g) => node(tag::NOT, encode_formula(g)),
        Formula::Imp(l, r) => bin(tag::IMP, l, r),
        Formula::And(l, r) => bin(tag::AND, l, r),
        Formula::Or(l, r) => bin(tag::OR, l, r),
        Formula::ForAll(v, b) => node(tag::ALL, pair(&name_code(v), &encode_formula(b))),
        Formula::Exists(v, b) => node(tag::EX, pair(&name_code(v), &encode_formula(b))),
        Formula::Box(tpl, subst) => {
            let entries = subst.iter().map(|(v, t)| pair(&name_code(v), &encode_term(t)));
            node(tag::BOX, pair(&encode_formula(tpl), &list_code(entries.collect::<Vec<_>>().into_iter())))
        }
        Formula::Pred(name, args) => {
            let args: Vec<_> = args.iter().map(encode_term).collect();
            node(tag::PRED, pair(&name_code(name), &list_code(args.into_iter())))
        }
    }
}

pub fn encode(x: &Syntax) -> GodelCode {
    GodelCode(match x {
        Syntax::Term(t) => encode_term(t),
        Syntax::Formula(f) => encode_formula(f),
    })
}

pub fn decode(c: &GodelCode) -> Result<Syntax, CodingError> {
    let (t, _) = split(&c.0)?;
    if matches!(t, tag::ZERO | tag::SUCC | tag::PLUS | tag::TIMES | tag::VAR | tag::NUMERAL) {
        decode_term(&c.0).map(Syntax::Term)
    } else {
        decode_formula(&c.0).map(Syntax::Formula)
    }
}

pub fn decode_term(c: &BigUint) -> Result<Term, CodingError> {
    let (t, p) = split(c)?;
    let term = match t {
        tag::ZERO if p.is_zero() => Term::Zero,
        tag::NUMERAL if !p.is_zero() => {
            let n = p.to_u64().filter(|n| *n <= crate::syntax::MAX_NUMERAL).ok_or_else(|| not_a_code(c))?;
            Term::numeral(n)
        }
        tag::SUCC => {
            let inner = decode_term(&p)?;
            if inner.as_numeral().is_some() {
                // closed towers have the numeral form
                return Err(not_a_code(c));
            }
            Term::succ(inner)
        }
        tag::PLUS | tag::TIMES => {
            let (a, b) = split_pair(&p)?;
            let (l, r) = (decode_term(&a)?, decode_term(&b)?);
            if t == tag::PLUS {
                Term::plus(l, r)
            } else {
                Term::times(l, r)
            }
        }
        tag::VAR => {
            let v = decode_name(&p)?;
            if !is_variable_name(&v) {
                return Err(not_a_code(c));
            }
            Term::Var(v)
        }
        _ => return Err(not_a_code(c)),
    };
    Ok(term)
}

pub fn decode_formula(c: &BigUint) -> Result<Formula, CodingError> {
    let (t, p) = split(c)?;
    let terms = |p: &BigUint| -> Result<(Term, Term), CodingError> {
        let (a, b) = split_pair(p)?;
        Ok((decode_term(&a)?, decode_term(&b)?))
    };
    let formulas = |p: &BigUint| -> Result<(Formula, Formula), CodingError> {
        let (a, b) = split_pair(p)?;
        Ok((decode_formula(&a)?, decode_formula(&b)?))
    };
    let f = match t {
        tag::FALSUM if p.is_zero() => Formula::Falsum,
        tag::EQ => {
            let (l, r) = terms(&p)?;
            Formula::Eq(l, r)
        }
        tag::LT => {
            let (l, r) = terms(&p)?;
            Formula::Lt(l, r)
        }
        tag::NOT => Formula::not(decode_formula(&p)?),
        tag::IMP | tag::AND | tag::OR => {
            let (l, r) = formulas(&p)?;
            match t {
                tag::IMP => Formula::imp(l, r),
                tag::AND => Formula::and(l, r),
                _ => Formula::or(l, r),
            }
        }
        tag::ALL | tag::EX => {
            let (n, b) = split_pair(&p)?;
            let v = decode_name(&n)?;
            if !is_variable_name(&v) {
                return Err(not_a_code(c));
            }
            let body = decode_formula(&b)?;
            if t == tag::ALL {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
        tag::BOX => {
            let (tc, lc) = split_pair(&p)?;
            let tpl = decode_formula(&tc)?;
            let mut subst = Vec::new();
            for e in decode_list(lc)? {
                let (n, tm) = split_pair(&e)?;
                let v = decode_name(&n)?;
                if !is_variable_name(&v) {
                    return Err(not_a_code(c));
                }
                subst.push((v, decode_term(&tm)?));
            }
            let f = Formula::boxed(tpl, subst.clone()).map_err(|_| not_a_code(c))?;
            // only the canonical ordering is in the image of encode
            match &f {
                Formula::Box(_, s) if *s == subst => f,
                _ => return Err(not_a_code(c)),
            }
        }
        tag::PRED => {
            let (n, lc) = split_pair(&p)?;
            let name = decode_name(&n)?;
            let args = decode_list(lc)?.iter().map(decode_term).collect::<Result<_, _>>()?;
            Formula::Pred(name, args)
        }
        _ => return Err(not_a_code(c)),
    };
    Ok(f)
}

pub fn numeral_of(n: u64) -> Term {
    Term::numeral(n)
}

/// Code-level substitution of the numeral for `n` in place of the free
/// occurrences of variable `v`.
pub fn sub_code(c: &GodelCode, v: &str, n: u64) -> Result<GodelCode, CodingError> {
    let num = numeral_code(&BigUint::from(n));
    sub_rec(&c.0, &name_code(v), &num).map(GodelCode)
}

fn sub_rec(c: &BigUint, v: &BigUint, num: &BigUint) -> Result<BigUint, CodingError> {
    let (t, p) = split(c)?;
    let both = |p: &BigUint| -> Result<BigUint, CodingError> {
        let (a, b) = split_pair(p)?;
        Ok(pair(&sub_rec(&a, v, num)?, &sub_rec(&b, v, num)?))
    };
    let out = match t {
        tag::ZERO | tag::NUMERAL | tag::FALSUM => c.clone(),
        tag::VAR => {
            if &p == v {
                num.clone()
            } else {
                c.clone()
            }
        }
        tag::SUCC => {
            let inner = sub_rec(&p, v, num)?;
            let (it, ip) = split(&inner)?;
            match it {
                tag::ZERO => node(tag::NUMERAL, BigUint::one()),
                tag::NUMERAL => node(tag::NUMERAL, ip + 1u32),
                _ => node(tag::SUCC, inner),
            }
        }
        tag::PLUS | tag::TIMES | tag::EQ | tag::LT | tag::IMP | tag::AND | tag::OR => node(t, both(&p)?),
        tag::NOT => node(t, sub_rec(&p, v, num)?),
        tag::ALL | tag::EX => {
            let (n, b) = split_pair(&p)?;
            if &n == v {
                c.clone()
            } else {
                node(t, pair(&n, &sub_rec(&b, v, num)?))
            }
        }
        tag::BOX => {
            let (tc, lc) = split_pair(&p)?;
            let mut entries = Vec::new();
            for e in decode_list(lc)? {
                let (n, tm) = split_pair(&e)?;
                entries.push(pair(&n, &sub_rec(&tm, v, num)?));
            }
            node(t, pair(&tc, &list_code(entries.into_iter())))
        }
        tag::PRED => {
            let (n, lc) = split_pair(&p)?;
            let args = decode_list(lc)?
                .iter()
                .map(|a| sub_rec(a, v, num))
                .collect::<Result<Vec<_>, _>>()?;
            node(t, pair(&n, &list_code(args.into_iter())))
        }
        _ => return Err(not_a_code(c)),
    };
    Ok(out)
}

/// Code-level renaming of predicate symbol `from` to `to`, inside templates too.
pub fn sub_pred_code(c: &BigUint, from: &BigUint, to: &BigUint) -> Result<BigUint, CodingError> {
    let (t, p) = split(c)?;
    let out = match t {
        tag::FALSUM | tag::EQ | tag::LT => c.clone(),
        tag::NOT => node(t, sub_pred_code(&p, from, to)?),
        tag::IMP | tag::AND | tag::OR => {
            let (a, b) = split_pair(&p)?;
            node(t, pair(&sub_pred_code(&a, from, to)?, &sub_pred_code(&b, from, to)?))
        }
        tag::ALL | tag::EX => {
            let (n, b) = split_pair(&p)?;
            node(t, pair(&n, &sub_pred_code(&b, from, to)?))
        }
        tag::BOX => {
            let (tc, lc) = split_pair(&p)?;
            node(t, pair(&sub_pred_code(&tc, from, to)?, &lc))
        }
        tag::PRED => {
            let (n, lc) = split_pair(&p)?;
            if &n == from {
                node(t, pair(to, &lc))
            } else {
                c.clone()
            }
        }
        _ => return Err(not_a_code(c)),
    };
    Ok(out)
}

fn iff_code(a: &BigUint, b: &BigUint) -> BigUint {
    node(
        tag::AND,
        pair(&node(tag::IMP, pair(a, b)), &node(tag::IMP, pair(b, a))),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Template,
    HoleSymbol,
    NameSymbol,
    Params,
    Body,
    FixedPoint,
    Biconditional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: TraceKind,
    pub description: String,
    pub code: GodelCode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalResult {
    pub fixed_point: Formula,
    pub defining_biconditional: Formula,
    pub witness_trace: Vec<TraceStep>,
}

pub const DEFAULT_FIXED_POINT_NAME: &str = "Fix";

/// Diagonal construction with the default predicate name.
pub fn diagonalize(template: &Formula, hole: &str, params: &[String]) -> Result<DiagonalResult, CodingError> {
    diagonalize_named(template, hole, params, DEFAULT_FIXED_POINT_NAME)
}

/// Builds `name(params) <-> template[hole := name]`.
///
/// The body is computed twice: syntactically, and on codes by renaming the
/// hole symbol inside the template code. The trace records the code-level
/// route and [`replay_trace`] recomputes it.
pub fn diagonalize_named(
    template: &Formula,
    hole: &str,
    params: &[String],
    name: &str,
) -> Result<DiagonalResult, CodingError> {
    if let Some(p) = params.iter().find(|p| !is_variable_name(p)) {
        return Err(CodingError::BadParam(p.clone()));
    }
    let mut used = false;
    let mut problem = None;
    template.for_each_pred(&mut |n, args, quoted| {
        if n != hole || problem.is_some() {
            return;
        }
        used = true;
        if !quoted {
            problem = Some(CodingError::UnquotedHole(hole.to_string()));
        } else if args.len() != params.len() {
            problem = Some(CodingError::HoleArity {
                hole: hole.to_string(),
                expected: params.len(),
                found: args.len(),
            });
        }
    });
    if let Some(e) = problem {
        return Err(e);
    }
    let step = |kind, description: &str, code: BigUint| TraceStep {
        kind,
        description: description.to_string(),
        code: GodelCode(code),
    };
    let tcode = encode_formula(template);
    if !used {
        let bic = Formula::iff(template.clone(), template.clone());
        let trace = vec![
            step(TraceKind::Template, "template", tcode.clone()),
            step(TraceKind::HoleSymbol, "hole symbol (unused)", name_code(hole)),
            step(TraceKind::FixedPoint, "fixed point is the template itself", tcode.clone()),
            step(TraceKind::Biconditional, "trivial biconditional", iff_code(&tcode, &tcode)),
        ];
        return Ok(DiagonalResult { fixed_point: template.clone(), defining_biconditional: bic, witness_trace: trace });
    }
    let fixed_point = Formula::Pred(name.to_string(), params.iter().map(|p| Term::Var(p.clone())).collect());
    let body = template.rename_pred(hole, name);
    let defining_biconditional = Formula::iff(fixed_point.clone(), body);

    let hcode = name_code(hole);
    let ncode = name_code(name);
    let pcode = list_code(params.iter().map(|p| node(tag::VAR, name_code(p))).collect::<Vec<_>>().into_iter());
    let bcode = sub_pred_code(&tcode, &hcode, &ncode)?;
    let fcode = node(tag::PRED, pair(&ncode, &pcode));
    let icode = iff_code(&fcode, &bcode);
    let trace = vec![
        step(TraceKind::Template, "template", tcode),
        step(TraceKind::HoleSymbol, "hole symbol", hcode),
        step(TraceKind::NameSymbol, "fixed-point symbol", ncode),
        step(TraceKind::Params, "parameter list", pcode),
        step(TraceKind::Body, "template with hole renamed to the fixed-point symbol", bcode),
        step(TraceKind::FixedPoint, "fixed point applied to its parameters", fcode),
        step(TraceKind::Biconditional, "defining biconditional", icode),
    ];
    Ok(DiagonalResult { fixed_point, defining_biconditional, witness_trace: trace })
}

/// Recomputes every derived trace entry from the inputs recorded in the
/// trace; returns the fixed-point code on success.
pub fn replay_trace(trace: &[TraceStep]) -> Result<GodelCode, CodingError> {
    let get = |k: TraceKind| {
        trace
            .iter()
            .find(|s| s.kind == k)
            .map(|s| s.code.0.clone())
            .ok_or_else(|| CodingError::Replay(format!("missing {k:?} entry")))
    };
    let check = |k: TraceKind, expected: &BigUint| -> Result<(), CodingError> {
        if &get(k)? == expected {
            Ok(())
        } else {
            Err(CodingError::Replay(format!("{k:?} entry differs from its recomputation")))
        }
    };
    let tcode = get(TraceKind::Template)?;
    let fcode = if trace.iter().any(|s| s.kind == TraceKind::NameSymbol) {
        let bcode = sub_pred_code(&tcode, &get(TraceKind::HoleSymbol)?, &get(TraceKind::NameSymbol)?)?;
        check(TraceKind::Body, &bcode)?;
        let fcode = node(tag::PRED, pair(&get(TraceKind::NameSymbol)?, &get(TraceKind::Params)?));
        check(TraceKind::FixedPoint, &fcode)?;
        check(TraceKind::Biconditional, &iff_code(&fcode, &bcode))?;
        fcode
    } else {
        check(TraceKind::FixedPoint, &tcode)?;
        check(TraceKind::Biconditional, &iff_code(&tcode, &tcode))?;
        tcode
    };
    Ok(GodelCode(fcode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_formula};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn pairing_inverts() {
        for a in 0u32..30 {
            for b in 0u32..30 {
                let (a, b) = (BigUint::from(a), BigUint::from(b));
                let c = pair(&a, &b);
                assert!(!c.is_zero());
                assert_eq!(unpair(&c), Some((a, b)));
            }
        }
        assert_eq!(unpair(&BigUint::zero()), None);
    }

    #[test]
    fn zero_has_the_fixed_code() {
        assert_eq!(encode(&Syntax::Term(Term::Zero)).0, BigUint::from(1u32));
    }

    #[test]
    fn distinct_atoms_get_distinct_codes() {
        assert_ne!(encode_formula(&f("0 = 0")), encode_formula(&f("0 = S(0)")));
    }

    #[test]
    fn decode_rejects_zero_and_junk() {
        assert!(matches!(decode(&GodelCode(BigUint::zero())), Err(CodingError::NotACode(_))));
        // <1, <0,0>> would be S(0) in successor form, which is not canonical
        let junk = node(tag::SUCC, node(tag::ZERO, BigUint::zero()));
        assert!(decode(&GodelCode(junk)).is_err());
        assert!(decode(&GodelCode(node(99, BigUint::zero()))).is_err());
    }

    #[test]
    fn numeral_codes_increase() {
        let codes: Vec<_> = (0..=64).map(|n| encode_term(&numeral_of(n))).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(numeral_of(3), Term::succ(Term::succ(Term::succ(Term::Zero))));
    }

    #[test]
    fn sub_code_examples() {
        let c = GodelCode(encode_formula(&f("x = 0")));
        assert_eq!(sub_code(&c, "x", 0).unwrap().0, encode_formula(&f("0 = 0")));
        let c = GodelCode(encode_formula(&f("y = S(x)")));
        assert_eq!(sub_code(&c, "x", 2).unwrap().0, encode_formula(&f("y = 3")));
        let c = GodelCode(encode_formula(&f("all x. x = y")));
        assert_eq!(sub_code(&c, "x", 5).unwrap(), c);
        let c = GodelCode(encode_formula(&f("Prov[ x < y ; x := x, y := x + 1 ]")));
        assert_eq!(
            sub_code(&c, "x", 4).unwrap().0,
            encode_formula(&f("Prov[ x < y ; x := 4, y := 4 + 1 ]"))
        );
    }

    #[test]
    fn diagonal_on_yablo_template() {
        let tpl = f("all x. k < x -> Prov[ self(x) ; x := x ]");
        let d = diagonalize_named(&tpl, "self", &["k".into()], "YH").unwrap();
        let expected = f("YH(k) <-> all x. k < x -> Prov[ YH(x) ; x := x ]");
        assert!(alpha_eq(&d.defining_biconditional, &expected));
        assert_eq!(replay_trace(&d.witness_trace).unwrap().0, encode_formula(&d.fixed_point));
        let last = d.witness_trace.last().unwrap();
        assert_eq!(last.code.0, encode_formula(&d.defining_biconditional));
    }

    #[test]
    fn diagonal_degenerate_and_errors() {
        let tpl = f("0 = 0");
        let d = diagonalize(&tpl, "self", &[]).unwrap();
        assert_eq!(d.fixed_point, tpl);
        assert_eq!(d.defining_biconditional, Formula::iff(tpl.clone(), tpl));
        assert!(replay_trace(&d.witness_trace).is_ok());
        let bad = f("self(k) -> Prov[ self(k) ; k := k ]");
        assert_eq!(
            diagonalize(&bad, "self", &["k".into()]),
            Err(CodingError::UnquotedHole("self".into()))
        );
        let arity = f("Prov[ self(k, k) ; k := k ]");
        assert!(matches!(diagonalize(&arity, "self", &["k".into()]), Err(CodingError::HoleArity { .. })));
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let tpl = f("Prov[ ~self(x) ; x := x ]");
        let mut d = diagonalize(&tpl, "self", &["x".into()]).unwrap();
        d.witness_trace[4].code.0 += 1u32;
        assert!(matches!(replay_trace(&d.witness_trace), Err(CodingError::Replay(_))));
    }
}
