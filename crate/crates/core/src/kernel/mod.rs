//! Object-level proof checking: Fitch-style natural deduction for classical
//! first-order logic, extended with the derivability schemes for the
//! templated provability operator, the Löb scheme, fixed-point definitions,
//! a small list of arithmetic axioms and closed-term evaluation.

mod arith;
mod check;
mod glt;
mod script;
mod signature;
mod taut;

pub use arith::{arith_axioms, match_axiom, num_eval, ArithAxiom};
pub use check::{check_script, check_script_with_signature, check_step, CheckContext};
pub use glt::apply_glt;
pub use script::{parse_script, Definition, ProofScript, ProofStep, Rule, HOLE};
pub(crate) use script::{parse_def, parse_vars};
pub use signature::{consistency_axiom, PredicateDef, Signature, CON};
pub use taut::{taut_valid, TautOutcome, MAX_TAUT_ATOMS};

pub use crate::report::{CheckReport, StepFailure, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("premise {0} does not refer to an earlier step")]
    MissingPremise(usize),
    #[error("premise {0} is not accessible (it lies in a closed block)")]
    InaccessiblePremise(usize),
    #[error("{rule} expects {expected} premise(s), got {found}")]
    PremiseCount { rule: String, expected: usize, found: usize },
    #[error("{rule}: bad parameters: {msg}")]
    BadParams { rule: String, msg: String },
    #[error("{rule}: {msg}")]
    Mismatch { rule: String, msg: String },
    #[error("eigenvariable condition violated: {0}")]
    Eigenvariable(String),
    #[error("gd3: `{0}` is not a Σ1 formula")]
    NotSigma1(String),
    #[error("gd1: premise {0} depends on an open assumption")]
    OpenAssumption(usize),
    #[error("fix-intro: {0}")]
    FixIntro(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` takes {expected} argument(s), got {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("variable `{0}` is not declared")]
    UndeclaredVariable(String),
    #[error("block structure: {0}")]
    Block(String),
    #[error("unknown arithmetic axiom `{0}`")]
    UnknownAxiom(String),
    #[error("`{0}` is not a closed atomic sentence")]
    NotClosedAtomic(String),
    #[error("tautology check exceeds {0} atoms")]
    AtomBudget(usize),
    #[error("not a tautology; falsified by {0}")]
    NotTautology(String),
    #[error("conclusion: {0}")]
    Conclusion(String),
    #[error("shape: {0}")]
    Shape(String),
}

fn mismatch(rule: Rule, msg: impl Into<String>) -> KernelError {
    KernelError::Mismatch { rule: rule.to_string(), msg: msg.into() }
}
