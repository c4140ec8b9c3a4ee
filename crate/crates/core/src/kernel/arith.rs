use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::syntax::{parse_formula, Formula, Term};

use super::KernelError;

const AXIOM_SOURCE: &str = include_str!("../../../../scripts/arith.axioms");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithAxiom {
    pub name: String,
    /// Quantifier-free; its free variables are schematic.
    pub schema: Formula,
}

/// The shipped axiom list, in file order.
pub fn arith_axioms() -> &'static [ArithAxiom] {
    static AXIOMS: OnceLock<Vec<ArithAxiom>> = OnceLock::new();
    AXIOMS.get_or_init(|| {
        crate::text::lines(AXIOM_SOURCE)
            .into_iter()
            .map(|l| {
                let (name, f) = l.text.split_once(':').expect("axiom line is `name: formula`");
                let schema = parse_formula(f.trim()).expect("axiom parses");
                assert!(quantifier_free(&schema), "axiom {name} must be quantifier-free");
                ArithAxiom { name: name.trim().to_string(), schema }
            })
            .collect()
    })
}

fn quantifier_free(f: &Formula) -> bool {
    match f {
        Formula::Falsum | Formula::Eq(..) | Formula::Lt(..) => true,
        Formula::Not(g) => quantifier_free(g),
        Formula::Imp(l, r) | Formula::And(l, r) | Formula::Or(l, r) => quantifier_free(l) && quantifier_free(r),
        _ => false,
    }
}

/// Checks that `f` is an instance of the named axiom.
pub fn match_axiom(name: &str, f: &Formula) -> Result<bool, KernelError> {
    let ax = arith_axioms()
        .iter()
        .find(|a| a.name == name)
        .ok_or_else(|| KernelError::UnknownAxiom(name.to_string()))?;
    Ok(match_formula(&ax.schema, f, &mut BTreeMap::new()))
}

fn match_formula(p: &Formula, f: &Formula, env: &mut BTreeMap<String, Term>) -> bool {
    match (p, f) {
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Eq(a, b), Formula::Eq(c, d)) | (Formula::Lt(a, b), Formula::Lt(c, d)) => {
            match_term(a, c, env) && match_term(b, d, env)
        }
        (Formula::Not(a), Formula::Not(b)) => match_formula(a, b, env),
        (Formula::Imp(a, b), Formula::Imp(c, d))
        | (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d)) => match_formula(a, c, env) && match_formula(b, d, env),
        _ => false,
    }
}

fn match_term(p: &Term, t: &Term, env: &mut BTreeMap<String, Term>) -> bool {
    match (p, t) {
        (Term::Var(v), _) => match env.get(v) {
            Some(bound) => bound == t,
            None => {
                env.insert(v.clone(), t.clone());
                true
            }
        },
        (Term::Zero, Term::Zero) => true,
        (Term::Succ(a), Term::Succ(b)) => match_term(a, b, env),
        (Term::Plus(a, b), Term::Plus(c, d)) | (Term::Times(a, b), Term::Times(c, d)) => {
            match_term(a, c, env) && match_term(b, d, env)
        }
        _ => false,
    }
}

fn eval(t: &Term) -> Option<BigUint> {
    Some(match t {
        Term::Zero => BigUint::ZERO,
        Term::Succ(a) => eval(a)? + 1u32,
        Term::Plus(a, b) => eval(a)? + eval(b)?,
        Term::Times(a, b) => eval(a)? * eval(b)?,
        Term::Var(_) => return None,
    })
}

/// Decides a closed equation or comparison.
pub fn num_eval(f: &Formula) -> Result<bool, KernelError> {
    let bad = || KernelError::NotClosedAtomic(f.to_string());
    match f {
        Formula::Eq(a, b) => Ok(eval(a).ok_or_else(bad)? == eval(b).ok_or_else(bad)?),
        Formula::Lt(a, b) => Ok(eval(a).ok_or_else(bad)? < eval(b).ok_or_else(bad)?),
        _ => Err(bad()),
    }
}
