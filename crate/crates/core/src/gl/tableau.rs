//! Backward proof search for GL.
//!
//! Sequents `Γ ⇒ Δ` are decomposed with the invertible propositional rules.
//! A saturated sequent (only atoms and boxes left) is closed by the GL rule:
//! for some `□A ∈ Δ`, prove `Γ♭, □Γ♭, □A ⇒ A` where `Γ♭ = {B : □B ∈ Γ}`.
//! Each application adds `□A` to the left, which cannot already be there, so
//! search terminates. Failed searches leave a tree of saturated sequents that
//! is read off as a countermodel: each node a world, the transitive closure of
//! the tree order as accessibility.

use std::collections::{BTreeMap, BTreeSet};

use super::kripke::{Countermodel, KripkeModel};
use super::{GlError, ModalFormula};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlVerdict {
    /// Rule applications of the closed proof, in search order.
    Valid(Vec<String>),
    Invalid(Countermodel),
}

impl GlVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, GlVerdict::Valid(_))
    }
}

type Side = BTreeSet<ModalFormula>;

struct RefutationTree {
    atoms: BTreeSet<String>,
    children: Vec<RefutationTree>,
}

struct Search {
    budget: usize,
    used: usize,
    trace: Vec<String>,
}

pub fn decide_gl(f: &ModalFormula) -> Result<GlVerdict, GlError> {
    decide_gl_with_budget(f, DEFAULT_BUDGET)
}

pub fn decide_gl_with_budget(f: &ModalFormula, budget: usize) -> Result<GlVerdict, GlError> {
    let mut s = Search { budget, used: 0, trace: Vec::new() };
    match s.prove(Side::new(), Side::from([f.clone()]), 0)? {
        None => Ok(GlVerdict::Valid(s.trace)),
        Some(tree) => {
            let mut worlds = Vec::new();
            let mut relation = BTreeSet::new();
            flatten(&tree, &mut Vec::new(), &mut worlds, &mut relation);
            let valuation: BTreeMap<usize, BTreeSet<String>> = worlds.into_iter().enumerate().collect();
            let n = valuation.len();
            let model = KripkeModel::new(n, relation, valuation, f.atoms())?;
            Ok(GlVerdict::Invalid(Countermodel { model, world: 0 }))
        }
    }
}

fn flatten(
    t: &RefutationTree,
    ancestors: &mut Vec<usize>,
    worlds: &mut Vec<BTreeSet<String>>,
    relation: &mut BTreeSet<(usize, usize)>,
) {
    let id = worlds.len();
    worlds.push(t.atoms.clone());
    for &a in ancestors.iter() {
        relation.insert((a, id));
    }
    ancestors.push(id);
    for c in &t.children {
        flatten(c, ancestors, worlds, relation);
    }
    ancestors.pop();
}

fn show(g: &Side, d: &Side) -> String {
    let side = |s: &Side| s.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ");
    format!("{} => {}", side(g), side(d))
}

impl Search {
    /// `Ok(None)` when the sequent is provable, otherwise a refutation.
    fn prove(&mut self, g: Side, d: Side, depth: usize) -> Result<Option<RefutationTree>, GlError> {
        self.used += 1;
        if self.used > self.budget {
            return Err(GlError::BudgetExceeded(self.budget));
        }
        let log = |s: &mut Self, rule: &str, g: &Side, d: &Side| {
            s.trace.push(format!("{}{rule}: {}", "  ".repeat(depth), show(g, d)));
        };
        if g.contains(&ModalFormula::Falsum) || g.intersection(&d).next().is_some() {
            log(self, "axiom", &g, &d);
            return Ok(None);
        }
        let left = g.iter().find(|f| !matches!(f, ModalFormula::Atom(_) | ModalFormula::Box(_))).cloned();
        if let Some(f) = left {
            log(self, "left", &g, &d);
            let mut g = g;
            g.remove(&f);
            return match f {
                ModalFormula::Not(a) => self.prove(g, with(&d, [*a]), depth + 1),
                ModalFormula::And(a, b) => self.prove(with(&g, [*a, *b]), d, depth + 1),
                ModalFormula::Or(a, b) => self.branch((with(&g, [*a]), d.clone()), (with(&g, [*b]), d), depth),
                ModalFormula::Imp(a, b) => self.branch((g.clone(), with(&d, [*a])), (with(&g, [*b]), d), depth),
                _ => unreachable!(),
            };
        }
        let right = d
            .iter()
            .find(|f| !matches!(f, ModalFormula::Atom(_) | ModalFormula::Box(_) | ModalFormula::Falsum))
            .cloned();
        if let Some(f) = right {
            log(self, "right", &g, &d);
            let mut d = d;
            d.remove(&f);
            return match f {
                ModalFormula::Not(a) => self.prove(with(&g, [*a]), d, depth + 1),
                ModalFormula::Or(a, b) => self.prove(g, with(&d, [*a, *b]), depth + 1),
                ModalFormula::Imp(a, b) => self.prove(with(&g, [*a]), with(&d, [*b]), depth + 1),
                ModalFormula::And(a, b) => self.branch((g.clone(), with(&d, [*a])), (g, with(&d, [*b])), depth),
                _ => unreachable!(),
            };
        }
        // saturated: try the GL rule on each boxed succedent
        let unboxed: Vec<ModalFormula> = g
            .iter()
            .filter_map(|f| match f {
                ModalFormula::Box(a) => Some((**a).clone()),
                _ => None,
            })
            .collect();
        let mut children = Vec::new();
        let mark = self.trace.len();
        for f in &d {
            if let ModalFormula::Box(a) = f {
                let mut g2: Side = unboxed.iter().cloned().collect();
                g2.extend(unboxed.iter().map(|b| ModalFormula::boxed(b.clone())));
                g2.insert(f.clone());
                let d2 = Side::from([(**a).clone()]);
                self.trace.truncate(mark);
                log(self, "GL", &g, &d);
                match self.prove(g2, d2, depth + 1)? {
                    None => return Ok(None),
                    Some(t) => children.push(t),
                }
            }
        }
        self.trace.truncate(mark);
        let atoms = g
            .iter()
            .filter_map(|f| match f {
                ModalFormula::Atom(a) => Some(a.clone()),
                _ => None,
            })
            .collect();
        Ok(Some(RefutationTree { atoms, children }))
    }

    fn branch(&mut self, a: (Side, Side), b: (Side, Side), depth: usize) -> Result<Option<RefutationTree>, GlError> {
        if let Some(t) = self.prove(a.0, a.1, depth + 1)? {
            return Ok(Some(t));
        }
        self.prove(b.0, b.1, depth + 1)
    }
}

fn with<const N: usize>(s: &Side, extra: [ModalFormula; N]) -> Side {
    let mut s = s.clone();
    s.extend(extra);
    s
}
