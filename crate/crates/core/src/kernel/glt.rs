use crate::syntax::{alpha_eq, Formula};

use super::check::check_script;
use super::script::{ProofScript, ProofStep, Rule};
use super::signature::Signature;
use super::KernelError;

/// Generalized Löb: turns a derivation of `Prov[ φ ; k := k ] -> φ` into one
/// of `φ` by appending gd1, the Löb instance and two modus ponens steps.
pub fn apply_glt(sub: &ProofScript) -> Result<ProofScript, KernelError> {
    let report = check_script(sub, &Signature::standard());
    if let Some(f) = report.failure {
        return Err(KernelError::Shape(format!("sub-derivation rejected at step {}: {}", f.step, f.reason)));
    }
    let c = &sub.conclusion;
    let shape = || KernelError::Shape(format!("`{c}` is not of the form `Prov[ φ ; k := k ] -> φ`"));
    let Formula::Imp(boxed, phi) = c else { return Err(shape()) };
    if !alpha_eq(boxed, &Formula::boxed_identity((**phi).clone())) {
        return Err(shape());
    }
    let last = sub.steps.last().expect("accepted script has steps").index;
    let (n1, n2, n3, n4) = (last + 1, last + 2, last + 3, last + 4);
    let nec = Formula::boxed_identity(c.clone());
    let goal_box = Formula::boxed_identity((**phi).clone());
    let step = |index, formula, rule, premises| ProofStep { index, formula, rule, premises, params: vec![], depth: 0, line: 0 };
    let mut out = sub.clone();
    out.name = format!("{}_glt", sub.name);
    out.steps.extend([
        step(n1, nec.clone(), Rule::Gd1, vec![last]),
        step(n2, Formula::imp(nec, goal_box.clone()), Rule::Lob, vec![]),
        step(n3, goal_box, Rule::Mp, vec![n1, n2]),
        step(n4, (**phi).clone(), Rule::Mp, vec![n3, last]),
    ]);
    out.conclusion = (**phi).clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_script;

    #[test]
    fn closed_case() {
        let sub = parse_script(
            "theorem z \"\"\n1. 0 = 0 by numeval\n2. Prov[ 0 = 0 ; ] -> 0 = 0 by taut [1]\nconclusion Prov[ 0 = 0 ; ] -> 0 = 0\n",
        )
        .unwrap();
        let out = apply_glt(&sub).unwrap();
        assert_eq!(out.conclusion.to_string(), "0 = 0");
        assert!(check_script(&out, &Signature::standard()).accepted());
        let reparsed = parse_script(&out.to_string()).unwrap();
        assert!(check_script(&reparsed, &Signature::standard()).accepted());
    }

    #[test]
    fn wrong_shape() {
        let sub = parse_script("theorem z \"\"\n1. 0 = 0 by numeval\nconclusion 0 = 0\n").unwrap();
        assert!(matches!(apply_glt(&sub), Err(KernelError::Shape(_))));
        let sub = parse_script(
            "theorem z \"\"\n1. 0 = 0 by numeval\n2. Prov[ 0 = 1 ; ] -> 0 = 0 by taut [1]\nconclusion Prov[ 0 = 1 ; ] -> 0 = 0\n",
        )
        .unwrap();
        assert!(matches!(apply_glt(&sub), Err(KernelError::Shape(_))));
    }
}
