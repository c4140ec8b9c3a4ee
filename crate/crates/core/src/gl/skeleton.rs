use std::collections::BTreeMap;

use super::ModalFormula;
use crate::syntax::{Formula, Term};

/// Propositional-modal shadow of an object formula.
///
/// Provability nodes become boxes over their instantiated template; atomic
/// and quantified subformulas become propositional atoms `a0, a1, ...`, shared
/// between alpha-equivalent occurrences. `unfold` may expand a predicate
/// application (e.g. the consistency statement) before abstraction.
pub fn skeleton(f: &Formula, unfold: &dyn Fn(&str, &[Term]) -> Option<Formula>) -> ModalFormula {
    let mut atoms = BTreeMap::new();
    go(f, unfold, &mut atoms)
}

fn go(
    f: &Formula,
    unfold: &dyn Fn(&str, &[Term]) -> Option<Formula>,
    atoms: &mut BTreeMap<String, String>,
) -> ModalFormula {
    let atom = |f: &Formula, atoms: &mut BTreeMap<String, String>| {
        let key = f.canonical().to_string();
        let n = atoms.len();
        ModalFormula::Atom(atoms.entry(key).or_insert_with(|| format!("a{n}")).clone())
    };
    match f {
        Formula::Falsum => ModalFormula::Falsum,
        Formula::Not(g) => ModalFormula::not(go(g, unfold, atoms)),
        Formula::Imp(l, r) => ModalFormula::imp(go(l, unfold, atoms), go(r, unfold, atoms)),
        Formula::And(l, r) => ModalFormula::and(go(l, unfold, atoms), go(r, unfold, atoms)),
        Formula::Or(l, r) => ModalFormula::or(go(l, unfold, atoms), go(r, unfold, atoms)),
        Formula::Box(tpl, subst) => {
            let map = subst.iter().cloned().collect();
            ModalFormula::boxed(go(&tpl.substitute_many(&map), unfold, atoms))
        }
        Formula::Pred(name, args) => match unfold(name, args) {
            Some(body) => go(&body, unfold, atoms),
            None => atom(f, atoms),
        },
        Formula::Eq(..) | Formula::Lt(..) | Formula::ForAll(..) | Formula::Exists(..) => atom(f, atoms),
    }
}
