use std::collections::{BTreeMap, BTreeSet};

use crate::coding::{diagonalize_named, replay_trace, DiagonalResult};
use crate::syntax::{alpha_eq, is_variable_name, Formula, Term};

use super::KernelError;

/// The consistency sentence, a 0-ary predicate.
pub const CON: &str = "Con";

/// `Con <-> ~Prov[ bot ; ]`
pub fn consistency_axiom() -> Formula {
    Formula::iff(Formula::pred(CON, vec![]), con_body())
}

fn con_body() -> Formula {
    Formula::not(Formula::Box(Box::new(Formula::Falsum), vec![]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDef {
    pub params: Vec<String>,
    /// Definiens, with the predicate's own name in place of the hole.
    pub body: Formula,
    /// Present for fixed points; `None` for the consistency predicate.
    pub witness: Option<DiagonalResult>,
}

impl PredicateDef {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// Registered predicate symbols and their definitions. Definitions are
/// immutable once made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    preds: BTreeMap<String, PredicateDef>,
}

impl Default for Signature {
    fn default() -> Self {
        Self::standard()
    }
}

impl Signature {
    /// No predicates at all.
    pub fn empty() -> Self {
        Signature { preds: BTreeMap::new() }
    }

    /// Just the consistency predicate.
    pub fn standard() -> Self {
        let mut preds = BTreeMap::new();
        preds.insert(CON.to_string(), PredicateDef { params: vec![], body: con_body(), witness: None });
        Signature { preds }
    }

    pub fn get(&self, name: &str) -> Option<&PredicateDef> {
        self.preds.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.preds.keys().map(|s| s.as_str())
    }

    /// Defining axiom `name(params) <-> body`.
    pub fn axiom(&self, name: &str) -> Option<Formula> {
        let d = self.preds.get(name)?;
        let head = Formula::pred(name, d.params.iter().map(|p| Term::var(p.as_str())).collect());
        Some(Formula::iff(head, d.body.clone()))
    }

    /// The definiens instantiated at `args`.
    pub fn unfold(&self, name: &str, args: &[Term]) -> Option<Formula> {
        let d = self.preds.get(name)?;
        if d.params.len() != args.len() {
            return None;
        }
        let map: BTreeMap<String, Term> = d.params.iter().cloned().zip(args.iter().cloned()).collect();
        Some(d.body.substitute_many(&map))
    }

    /// Every predicate application (quoted or not) is registered with the
    /// right arity.
    pub fn check_formula(&self, f: &Formula) -> Result<(), KernelError> {
        let mut err = None;
        f.for_each_pred(&mut |name, args, _| {
            if err.is_some() {
                return;
            }
            err = match self.preds.get(name) {
                None => Some(KernelError::UnknownPredicate(name.to_string())),
                Some(d) if d.arity() != args.len() => Some(KernelError::Arity {
                    name: name.to_string(),
                    expected: d.arity(),
                    found: args.len(),
                }),
                _ => None,
            };
        });
        err.map_or(Ok(()), Err)
    }

    /// Introduces `name(params)` as the fixed point of `template` in `hole`
    /// and returns its defining axiom. The hole may only occur inside
    /// provability templates. The coding module's diagonal construction must
    /// produce the same biconditional, and its trace must replay.
    ///
    /// Re-introducing an existing name is allowed only with an alpha-equal
    /// definition.
    pub fn fix_intro(
        &mut self,
        name: &str,
        template: &Formula,
        hole: &str,
        params: &[String],
    ) -> Result<Formula, KernelError> {
        let fail = |m: String| KernelError::FixIntro(m);
        if !name.starts_with(|c: char| c.is_ascii_uppercase()) || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(fail(format!("`{name}` is not a predicate name")));
        }
        if name == hole {
            return Err(fail("the hole must differ from the defined name".into()));
        }
        if let Some(p) = params.iter().find(|p| !is_variable_name(p)) {
            return Err(fail(format!("parameter `{p}` is not a variable")));
        }
        let distinct: BTreeSet<&String> = params.iter().collect();
        if distinct.len() != params.len() {
            return Err(fail("repeated parameter".into()));
        }
        let allowed: BTreeSet<String> = params.iter().cloned().collect();
        if let Some(v) = template.free_vars().difference(&allowed).next() {
            return Err(fail(format!("template has free variable `{v}` that is not a parameter")));
        }
        let mut problem = None;
        template.for_each_pred(&mut |p, args, quoted| {
            if problem.is_some() {
                return;
            }
            if p == hole {
                if !quoted {
                    problem = Some(format!("hole `{hole}` occurs outside a provability template"));
                } else if args.len() != params.len() {
                    problem = Some(format!("hole `{hole}` applied to {} argument(s), expected {}", args.len(), params.len()));
                }
            } else if p == name {
                problem = Some(format!("template mentions `{name}` directly"));
            } else if let Some(d) = self.preds.get(p) {
                if d.arity() != args.len() {
                    problem = Some(format!("`{p}` takes {} argument(s)", d.arity()));
                }
            } else {
                problem = Some(format!("unknown predicate `{p}` in template"));
            }
        });
        if let Some(m) = problem {
            return Err(fail(m));
        }

        let body = template.rename_pred(hole, name);
        let head = Formula::pred(name, params.iter().map(|p| Term::var(p.as_str())).collect());
        let axiom = Formula::iff(head, body.clone());

        let witness = diagonalize_named(template, hole, params, name).map_err(|e| fail(format!("diagonalization failed: {e}")))?;
        if !alpha_eq(&witness.defining_biconditional, &axiom) {
            return Err(fail("diagonal biconditional differs from the defining axiom".into()));
        }
        replay_trace(&witness.witness_trace).map_err(|e| fail(format!("witness trace does not replay: {e}")))?;

        if let Some(old) = self.preds.get(name) {
            let same = old.params.len() == params.len() && {
                let map: BTreeMap<String, Term> =
                    old.params.iter().cloned().zip(params.iter().map(|p| Term::var(p.as_str()))).collect();
                alpha_eq(&old.body.substitute_many(&map), &body)
            };
            return if same { Ok(axiom) } else { Err(fail(format!("`{name}` is already defined differently"))) };
        }
        self.preds.insert(name.to_string(), PredicateDef { params: params.to_vec(), body, witness: Some(witness) });
        Ok(axiom)
    }

    /// First predicate defined in both signatures with different meanings.
    pub fn conflict_with(&self, other: &Signature) -> Option<String> {
        self.preds.iter().find_map(|(name, d)| {
            let o = other.preds.get(name)?;
            if o.params.len() != d.params.len() {
                return Some(name.clone());
            }
            let map: BTreeMap<String, Term> =
                o.params.iter().cloned().zip(d.params.iter().map(|p| Term::var(p.as_str()))).collect();
            (!alpha_eq(&o.body.substitute_many(&map), &d.body)).then(|| name.clone())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn yj_template() -> Formula {
        parse_formula("all x. k < x -> Prov[ ~self(x) ; x := x ]").unwrap()
    }

    #[test]
    fn yablo_j_axiom() {
        let mut sig = Signature::standard();
        let ax = sig.fix_intro("YJ", &yj_template(), "self", &["k".into()]).unwrap();
        let expected = parse_formula("YJ(k) <-> all x. k < x -> Prov[ ~YJ(x) ; x := x ]").unwrap();
        assert!(alpha_eq(&ax, &expected));
        assert_eq!(sig.axiom("YJ").unwrap(), ax);
        let w = &sig.get("YJ").unwrap().witness;
        assert!(w.is_some());
        assert!(alpha_eq(&w.as_ref().unwrap().defining_biconditional, &ax));
    }

    #[test]
    fn consistency_definition() {
        let sig = Signature::standard();
        assert_eq!(sig.axiom(CON).unwrap(), consistency_axiom());
        assert_eq!(consistency_axiom().to_string(), "Con <-> ~Prov[ bot ; ]");
    }

    #[test]
    fn unquoted_hole_is_rejected() {
        let mut sig = Signature::standard();
        let t = parse_formula("all x. k < x -> self(x)").unwrap();
        assert!(matches!(sig.fix_intro("Bad", &t, "self", &["k".into()]), Err(KernelError::FixIntro(_))));
        assert!(sig.get("Bad").is_none());
    }

    #[test]
    fn definitions_are_immutable() {
        let mut sig = Signature::standard();
        sig.fix_intro("YJ", &yj_template(), "self", &["k".into()]).unwrap();
        assert!(sig.fix_intro("YJ", &yj_template(), "self", &["k".into()]).is_ok());
        let other = parse_formula("all x. k < x -> Prov[ self(x) ; x := x ]").unwrap();
        assert!(sig.fix_intro("YJ", &other, "self", &["k".into()]).is_err());
    }

    #[test]
    fn unfolding_avoids_capture() {
        let mut sig = Signature::standard();
        sig.fix_intro("YJ", &yj_template(), "self", &["k".into()]).unwrap();
        let f = sig.unfold("YJ", &[Term::var("x")]).unwrap();
        let expected = parse_formula("all z. x < z -> Prov[ ~YJ(y) ; y := z ]").unwrap();
        assert!(alpha_eq(&f, &expected), "{f}");
        assert!(sig.check_formula(&parse_formula("YJ(0) & Con").unwrap()).is_ok());
        assert!(sig.check_formula(&parse_formula("YJ(0, 1)").unwrap()).is_err());
        assert!(sig.check_formula(&parse_formula("Prov[ YG(0) ; ]").unwrap()).is_err());
    }
}
