use std::collections::BTreeMap;

use crate::syntax::Formula;

use super::KernelError;

pub const MAX_TAUT_ATOMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TautOutcome {
    Valid,
    /// A falsifying assignment to the opaque atoms.
    Invalid(Vec<(String, bool)>),
}

impl TautOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, TautOutcome::Valid)
    }
}

/// Truth-table validity, treating every non-propositional subformula
/// (comparisons, predicate applications, provability nodes, quantified
/// formulas) as an opaque atom identified up to alpha-equivalence.
pub fn taut_valid(f: &Formula) -> Result<TautOutcome, KernelError> {
    let mut atoms: BTreeMap<Formula, usize> = BTreeMap::new();
    let mut shown: Vec<String> = Vec::new();
    let p = compile(f, &mut atoms, &mut shown);
    if atoms.len() > MAX_TAUT_ATOMS {
        return Err(KernelError::AtomBudget(MAX_TAUT_ATOMS));
    }
    for bits in 0u32..(1u32 << atoms.len()) {
        if !p.eval(bits) {
            let cv = shown.iter().enumerate().map(|(i, s)| (s.clone(), bits & (1 << i) != 0)).collect();
            return Ok(TautOutcome::Invalid(cv));
        }
    }
    Ok(TautOutcome::Valid)
}

enum Prop {
    Const(bool),
    Atom(usize),
    Not(Box<Prop>),
    Imp(Box<Prop>, Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn eval(&self, bits: u32) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Atom(i) => bits & (1 << i) != 0,
            Prop::Not(p) => !p.eval(bits),
            Prop::Imp(a, b) => !a.eval(bits) || b.eval(bits),
            Prop::And(a, b) => a.eval(bits) && b.eval(bits),
            Prop::Or(a, b) => a.eval(bits) || b.eval(bits),
        }
    }
}

fn compile(f: &Formula, atoms: &mut BTreeMap<Formula, usize>, shown: &mut Vec<String>) -> Prop {
    let mut go = |g: &Formula| Box::new(compile(g, atoms, shown));
    match f {
        Formula::Falsum => Prop::Const(false),
        Formula::Not(g) => Prop::Not(go(g)),
        Formula::Imp(a, b) => {
            let a = go(a);
            Prop::Imp(a, go(b))
        }
        Formula::And(a, b) => {
            let a = go(a);
            Prop::And(a, go(b))
        }
        Formula::Or(a, b) => {
            let a = go(a);
            Prop::Or(a, go(b))
        }
        _ => {
            let key = f.canonical();
            let next = atoms.len();
            let i = *atoms.entry(key).or_insert_with(|| {
                shown.push(f.to_string());
                next
            });
            Prop::Atom(i)
        }
    }
}
