//! Propositional provability logic GL: a tableau decision procedure with
//! countermodel extraction, Kripke forcing, and a brute-force model search
//! used as an independent oracle.

mod brute;
mod formula;
mod kripke;
mod skeleton;
mod tableau;

pub use brute::{brute_force, frames, BruteResult, DEFAULT_BRUTE_WORLDS, MAX_BRUTE_WORLDS};
pub use formula::{parse_modal, ModalFormula};
pub use kripke::{check_model, Countermodel, KripkeModel};
pub use skeleton::skeleton;
pub use tableau::{decide_gl, decide_gl_with_budget, GlVerdict, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlError {
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(usize),
    #[error("unknown world {0}")]
    UnknownWorld(usize),
    #[error("atom `{0}` is not in the model's alphabet")]
    UnknownAtom(String),
    #[error("frame is not transitive and irreflexive: {0}")]
    BadFrame(String),
}
