use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{GlError, ModalFormula};

/// Finite model over a transitive, irreflexive frame. Worlds are `0..worlds`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: usize,
    pub relation: BTreeSet<(usize, usize)>,
    pub valuation: BTreeMap<usize, BTreeSet<String>>,
    pub alphabet: BTreeSet<String>,
}

/// A model together with the world at which it falsifies a formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub model: KripkeModel,
    pub world: usize,
}

impl KripkeModel {
    pub fn new(
        worlds: usize,
        relation: BTreeSet<(usize, usize)>,
        valuation: BTreeMap<usize, BTreeSet<String>>,
        alphabet: BTreeSet<String>,
    ) -> Result<Self, GlError> {
        for &(a, b) in &relation {
            if a >= worlds || b >= worlds {
                return Err(GlError::UnknownWorld(a.max(b)));
            }
            if a == b {
                return Err(GlError::BadFrame(format!("world {a} sees itself")));
            }
            for &(c, d) in relation.range((b, 0)..(b + 1, 0)) {
                debug_assert_eq!(c, b);
                if !relation.contains(&(a, d)) {
                    return Err(GlError::BadFrame(format!("{a} -> {b} -> {d} without {a} -> {d}")));
                }
            }
        }
        for (w, atoms) in &valuation {
            if *w >= worlds {
                return Err(GlError::UnknownWorld(*w));
            }
            if let Some(a) = atoms.iter().find(|a| !alphabet.contains(*a)) {
                return Err(GlError::UnknownAtom(a.clone()));
            }
        }
        Ok(KripkeModel { worlds, relation, valuation, alphabet })
    }

    pub fn successors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.relation.range((w, 0)..(w + 1, 0)).map(|&(_, b)| b)
    }

    pub fn holds_atom(&self, w: usize, a: &str) -> bool {
        self.valuation.get(&w).is_some_and(|s| s.contains(a))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "worlds": (0..self.worlds).collect::<Vec<_>>(),
            "relation": self.relation.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
            "valuation": (0..self.worlds)
                .map(|w| (w.to_string(), self.valuation.get(&w).cloned().unwrap_or_default()))
                .collect::<BTreeMap<_, _>>(),
        })
    }
}

/// Kripke forcing of `f` at world `w`.
pub fn check_model(m: &KripkeModel, w: usize, f: &ModalFormula) -> Result<bool, GlError> {
    if w >= m.worlds {
        return Err(GlError::UnknownWorld(w));
    }
    if let Some(a) = f.atoms().into_iter().find(|a| !m.alphabet.contains(a)) {
        return Err(GlError::UnknownAtom(a));
    }
    Ok(force(m, w, f))
}

fn force(m: &KripkeModel, w: usize, f: &ModalFormula) -> bool {
    match f {
        ModalFormula::Atom(a) => m.holds_atom(w, a),
        ModalFormula::Falsum => false,
        ModalFormula::Not(g) => !force(m, w, g),
        ModalFormula::Imp(l, r) => !force(m, w, l) || force(m, w, r),
        ModalFormula::And(l, r) => force(m, w, l) && force(m, w, r),
        ModalFormula::Or(l, r) => force(m, w, l) || force(m, w, r),
        ModalFormula::Box(g) => m.successors(w).all(|v| force(m, v, g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl::parse_modal;

    fn chain(n: usize) -> KripkeModel {
        let rel = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        KripkeModel::new(n, rel, BTreeMap::new(), BTreeSet::from(["p".to_string()])).unwrap()
    }

    #[test]
    fn terminal_world_forces_box_bot() {
        let m = chain(3);
        assert!(check_model(&m, 2, &parse_modal("[]bot").unwrap()).unwrap());
        assert!(!check_model(&m, 1, &parse_modal("[]bot").unwrap()).unwrap());
    }

    #[test]
    fn atoms_follow_valuation() {
        let mut val = BTreeMap::new();
        val.insert(0, BTreeSet::from(["p".to_string()]));
        let m = KripkeModel::new(2, BTreeSet::from([(0, 1)]), val, BTreeSet::from(["p".to_string()])).unwrap();
        let p = parse_modal("p").unwrap();
        assert!(check_model(&m, 0, &p).unwrap());
        assert!(!check_model(&m, 1, &p).unwrap());
        assert!(matches!(check_model(&m, 5, &p), Err(GlError::UnknownWorld(5))));
        assert!(matches!(check_model(&m, 0, &parse_modal("q").unwrap()), Err(GlError::UnknownAtom(_))));
    }

    #[test]
    fn frame_conditions_enforced() {
        let a = BTreeSet::new();
        assert!(KripkeModel::new(1, BTreeSet::from([(0, 0)]), BTreeMap::new(), a.clone()).is_err());
        assert!(KripkeModel::new(3, BTreeSet::from([(0, 1), (1, 2)]), BTreeMap::new(), a).is_err());
    }
}
