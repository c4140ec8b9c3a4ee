//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use provkit::gl::ModalFormula;
use provkit::syntax::{Formula, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub const VARS: &[&str] = &["x", "y", "z", "k"];

pub fn term<R: Rng>(rng: &mut R, depth: u32) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return if rng.gen_bool(0.5) { Term::Zero } else { Term::var(*VARS.choose(rng).unwrap()) };
    }
    match rng.gen_range(0..3) {
        0 => Term::succ(term(rng, depth - 1)),
        1 => Term::plus(term(rng, depth - 1), term(rng, depth - 1)),
        _ => Term::Times(Box::new(term(rng, depth - 1)), Box::new(term(rng, depth - 1))),
    }
}

pub fn formula<R: Rng>(rng: &mut R, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 => Formula::Falsum,
            1 => Formula::Eq(term(rng, 2), term(rng, 2)),
            2 => Formula::Lt(term(rng, 2), term(rng, 2)),
            _ => {
                let (name, arity) = *[("P", 0), ("Q", 1), ("YJ", 1), ("R", 2)].choose(rng).unwrap();
                Formula::pred(name, (0..arity).map(|_| term(rng, 1)).collect())
            }
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..8) {
        0 => Formula::not(formula(rng, d)),
        1 => Formula::imp(formula(rng, d), formula(rng, d)),
        2 => Formula::and(formula(rng, d), formula(rng, d)),
        3 => Formula::or(formula(rng, d), formula(rng, d)),
        4 => Formula::forall(*VARS.choose(rng).unwrap(), formula(rng, d)),
        5 => Formula::exists(*VARS.choose(rng).unwrap(), formula(rng, d)),
        _ => {
            let tpl = formula(rng, d);
            let subst = tpl.free_var_order().into_iter().map(|v| (v, term(rng, 1))).collect();
            Formula::boxed(tpl, subst).expect("domain is the template's free variables")
        }
    }
}

/// Every modal formula over `p`, `q` and `bot` with at most `max_size`
/// symbols and modal depth at most `max_depth`.
pub fn modal_formulas(max_size: usize, max_depth: usize) -> Vec<ModalFormula> {
    let mut by_size: Vec<Vec<ModalFormula>> = vec![Vec::new(); max_size + 1];
    by_size[1] = vec![ModalFormula::atom("p"), ModalFormula::atom("q"), ModalFormula::Falsum];
    for n in 2..=max_size {
        let mut out = Vec::new();
        for f in &by_size[n - 1] {
            out.push(ModalFormula::not(f.clone()));
            out.push(ModalFormula::boxed(f.clone()));
        }
        for l in 1..n - 1 {
            let r = n - 1 - l;
            for a in &by_size[l] {
                for b in &by_size[r] {
                    out.push(ModalFormula::imp(a.clone(), b.clone()));
                    out.push(ModalFormula::and(a.clone(), b.clone()));
                    out.push(ModalFormula::or(a.clone(), b.clone()));
                }
            }
        }
        by_size[n] = out;
    }
    by_size.into_iter().flatten().filter(|f| f.modal_depth() <= max_depth).collect()
}
