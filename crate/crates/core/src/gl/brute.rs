//! Exhaustive countermodel search over small GL frames.
//!
//! Every finite strict partial order is isomorphic to one contained in the
//! natural order on `0..n`, so frames are enumerated as transitive subsets of
//! `{(i, j) : i < j}`.

use std::collections::{BTreeMap, BTreeSet};

use super::kripke::{Countermodel, KripkeModel};
use super::ModalFormula;

pub const MAX_BRUTE_WORLDS: usize = 5;
pub const DEFAULT_BRUTE_WORLDS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteResult {
    Invalid(Countermodel),
    NoModelFound,
}

/// Transitive relations on `0..n` contained in `<`, as successor bitmasks.
pub fn frames(n: usize) -> Vec<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for bits in 0u32..(1u32 << pairs.len()) {
        let mut succ = vec![0u32; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if bits >> i & 1 == 1 {
                succ[a] |= 1 << b;
            }
        }
        let transitive = (0..n).all(|a| {
            (0..n).filter(|b| succ[a] >> b & 1 == 1).all(|b| succ[b] & !succ[a] == 0)
        });
        if transitive {
            out.push(succ);
        }
    }
    out
}

fn eval(f: &ModalFormula, n: usize, succ: &[u32], val: &BTreeMap<&str, u32>) -> u32 {
    let all = (1u32 << n) - 1;
    match f {
        ModalFormula::Atom(a) => val.get(a.as_str()).copied().unwrap_or(0),
        ModalFormula::Falsum => 0,
        ModalFormula::Not(g) => !eval(g, n, succ, val) & all,
        ModalFormula::Imp(l, r) => (!eval(l, n, succ, val) | eval(r, n, succ, val)) & all,
        ModalFormula::And(l, r) => eval(l, n, succ, val) & eval(r, n, succ, val),
        ModalFormula::Or(l, r) => eval(l, n, succ, val) | eval(r, n, succ, val),
        ModalFormula::Box(g) => {
            let m = eval(g, n, succ, val);
            (0..n).filter(|&w| succ[w] & !m == 0).fold(0, |acc, w| acc | 1 << w)
        }
    }
}

/// Searches frames of up to `max_worlds` worlds (capped at
/// [`MAX_BRUTE_WORLDS`]) and all valuations of the formula's atoms; returns
/// the first countermodel in (size, frame, valuation) order.
pub fn brute_force(f: &ModalFormula, max_worlds: usize) -> BruteResult {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    for n in 1..=max_worlds.min(MAX_BRUTE_WORLDS) {
        let all = (1u32 << n) - 1;
        for succ in frames(n) {
            let total_bits = atoms.len() * n;
            for vbits in 0u64..(1u64 << total_bits) {
                let val: BTreeMap<&str, u32> = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.as_str(), ((vbits >> (i * n)) as u32) & all))
                    .collect();
                let truth = eval(f, n, &succ, &val);
                if truth != all {
                    let world = (0..n).find(|w| truth >> w & 1 == 0).expect("some world fails");
                    return BruteResult::Invalid(Countermodel { model: to_model(n, &succ, &val, &atoms), world });
                }
            }
        }
    }
    BruteResult::NoModelFound
}

fn to_model(n: usize, succ: &[u32], val: &BTreeMap<&str, u32>, atoms: &[String]) -> KripkeModel {
    let relation = (0..n)
        .flat_map(|a| (0..n).filter(move |b| succ[a] >> b & 1 == 1).map(move |b| (a, b)))
        .collect();
    let valuation = (0..n)
        .map(|w| {
            let s: BTreeSet<String> = val
                .iter()
                .filter(|(_, m)| *m >> w & 1 == 1)
                .map(|(a, _)| a.to_string())
                .collect();
            (w, s)
        })
        .collect();
    KripkeModel::new(n, relation, valuation, atoms.iter().cloned().collect())
        .expect("enumerated frames are transitive and irreflexive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl::{check_model, parse_modal};

    #[test]
    fn frame_counts() {
        // naturally labeled posets: 1, 2, 7, 40
        let counts: Vec<usize> = (1..=4).map(|n| frames(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 40]);
    }

    #[test]
    fn examples() {
        let refl = parse_modal("[]p -> p").unwrap();
        let BruteResult::Invalid(cm) = brute_force(&refl, 1) else { panic!() };
        assert_eq!(cm.model.worlds, 1);
        assert!(!check_model(&cm.model, cm.world, &refl).unwrap());
        let lob = parse_modal("[]([]p -> p) -> []p").unwrap();
        assert_eq!(brute_force(&lob, 4), BruteResult::NoModelFound);
        let p = parse_modal("p").unwrap();
        let BruteResult::Invalid(cm) = brute_force(&p, 1) else { panic!() };
        assert!(!cm.model.holds_atom(0, "p"));
        let g2 = parse_modal("~[]bot -> ~[]~[]bot").unwrap();
        assert_eq!(brute_force(&g2, 4), BruteResult::NoModelFound);
    }
}
