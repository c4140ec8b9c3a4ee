use std::collections::{BTreeMap, BTreeSet};

use crate::report::{CheckReport, StepFailure, Verdict};
use crate::syntax::{alpha_eq, is_sigma1, Formula, Subst, Term};
use crate::text::Param;

use super::arith::{match_axiom, num_eval};
use super::script::{ProofScript, ProofStep, Rule, HOLE};
use super::signature::{consistency_axiom, Signature};
use super::taut::{taut_valid, TautOutcome};
use super::{mismatch, KernelError};

struct Record {
    formula: Formula,
    /// Open blocks (by starting step) when the step was made.
    scope: Vec<usize>,
}

/// State threaded through [`check_step`].
pub struct CheckContext<'a> {
    sig: &'a Signature,
    vars: BTreeSet<String>,
    records: BTreeMap<usize, Record>,
    open: Vec<usize>,
    last: Option<usize>,
}

impl<'a> CheckContext<'a> {
    pub fn new(sig: &'a Signature, vars: impl IntoIterator<Item = String>) -> Self {
        CheckContext { sig, vars: vars.into_iter().collect(), records: BTreeMap::new(), open: Vec::new(), last: None }
    }

    pub fn open_blocks(&self) -> &[usize] {
        &self.open
    }

    /// Formula of step `n` if it is accessible from the current position.
    fn premise(&self, n: usize) -> Result<&Formula, KernelError> {
        let r = self.records.get(&n).ok_or(KernelError::MissingPremise(n))?;
        if self.open.starts_with(&r.scope) {
            Ok(&r.formula)
        } else {
            Err(KernelError::InaccessiblePremise(n))
        }
    }

    fn assumptions(&self) -> impl Iterator<Item = &Formula> {
        self.open.iter().map(|n| &self.records[n].formula)
    }

    fn free_in_assumptions(&self, v: &str) -> bool {
        self.assumptions().any(|a| a.has_free(v))
    }
}

fn premises<'c, const N: usize>(ctx: &'c CheckContext, step: &ProofStep) -> Result<[&'c Formula; N], KernelError> {
    if step.premises.len() != N {
        return Err(KernelError::PremiseCount { rule: step.rule.to_string(), expected: N, found: step.premises.len() });
    }
    let mut out = Vec::with_capacity(N);
    for &p in &step.premises {
        out.push(ctx.premise(p)?);
    }
    Ok(out.try_into().unwrap_or_else(|_| unreachable!()))
}

fn no_params(step: &ProofStep) -> Result<(), KernelError> {
    if step.params.is_empty() {
        Ok(())
    } else {
        Err(KernelError::BadParams { rule: step.rule.to_string(), msg: "takes no parameters".into() })
    }
}

fn term_param(step: &ProofStep) -> Result<&Term, KernelError> {
    match step.params.as_slice() {
        [Param::Term(t)] => Ok(t),
        _ => Err(KernelError::BadParams { rule: step.rule.to_string(), msg: "expects one term".into() }),
    }
}

/// Optional eigenvariable parameter, defaulting to `default`.
fn eigen_param(step: &ProofStep, default: &str) -> Result<String, KernelError> {
    match step.params.as_slice() {
        [] => Ok(default.to_string()),
        [p] => p.as_name().map(str::to_string).ok_or_else(|| KernelError::BadParams {
            rule: step.rule.to_string(),
            msg: "expects a variable".into(),
        }),
        _ => Err(KernelError::BadParams { rule: step.rule.to_string(), msg: "expects at most one variable".into() }),
    }
}

fn expect(rule: Rule, got: &Formula, want: &Formula) -> Result<(), KernelError> {
    if alpha_eq(got, want) {
        Ok(())
    } else {
        Err(mismatch(rule, format!("expected `{want}`, found `{got}`")))
    }
}

fn imp_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

fn box_parts(f: &Formula) -> Option<(&Formula, &Subst)> {
    match f {
        Formula::Box(t, s) => Some((t, s)),
        _ => None,
    }
}

/// `Prov[ φ ; s restricted to FV(φ) ]`
fn restrict(template: &Formula, s: &Subst) -> Formula {
    let fv = template.free_vars();
    let sub: Subst = s.iter().filter(|(v, _)| fv.contains(v)).cloned().collect();
    Formula::boxed(template.clone(), sub).expect("restriction covers the template's free variables")
}

fn is_identity(s: &Subst) -> bool {
    s.iter().all(|(v, t)| matches!(t, Term::Var(w) if w == v))
}

fn taut_premises(ctx: &CheckContext, step: &ProofStep) -> Result<(), KernelError> {
    no_params(step)?;
    let mut goal = step.formula.clone();
    for &p in step.premises.iter().rev() {
        goal = Formula::imp(ctx.premise(p)?.clone(), goal);
    }
    match taut_valid(&goal)? {
        TautOutcome::Valid => Ok(()),
        TautOutcome::Invalid(cv) => {
            let shown: Vec<String> = cv.iter().map(|(a, b)| format!("{a} := {}", if *b { "T" } else { "F" })).collect();
            Err(KernelError::NotTautology(shown.join(", ")))
        }
    }
}

/// Checks one step against the context and, on success, records it.
pub fn check_step(ctx: &mut CheckContext, step: &ProofStep) -> Result<(), KernelError> {
    if let Some(last) = ctx.last {
        if step.index <= last {
            return Err(KernelError::Block(format!("step {} does not follow step {last}", step.index)));
        }
    }
    ctx.sig.check_formula(&step.formula)?;
    if let Some(v) = step.formula.free_vars().into_iter().find(|v| !ctx.vars.contains(v)) {
        return Err(KernelError::UndeclaredVariable(v));
    }
    let rule = step.rule;
    let f = &step.formula;
    match rule {
        Rule::Assume => {
            no_params(step)?;
            premises::<0>(ctx, step)?;
            ctx.open.push(step.index);
        }
        Rule::QedBlock => {
            no_params(step)?;
            let [n] = step.premises[..] else {
                return Err(KernelError::PremiseCount { rule: rule.to_string(), expected: 1, found: step.premises.len() });
            };
            if ctx.open.last() != Some(&n) {
                return Err(KernelError::Block(format!("step {n} does not open the innermost block")));
            }
            let last = ctx.last.expect("an open block has a start");
            if ctx.records[&last].scope != ctx.open {
                return Err(KernelError::Block("the block's last step is not at the block's level".into()));
            }
            let want = Formula::imp(ctx.records[&n].formula.clone(), ctx.records[&last].formula.clone());
            expect(rule, f, &want)?;
            ctx.open.pop();
        }
        Rule::Reiterate => {
            no_params(step)?;
            let [a] = premises::<1>(ctx, step)?;
            expect(rule, f, a)?;
        }
        Rule::Taut => taut_premises(ctx, step)?,
        Rule::Mp => {
            no_params(step)?;
            let [a, b] = premises::<2>(ctx, step)?;
            let ok = |ant: &Formula, imp: &Formula| {
                imp_parts(imp).is_some_and(|(x, y)| alpha_eq(x, ant) && alpha_eq(y, f))
            };
            if !(ok(a, b) || ok(b, a)) {
                return Err(mismatch(rule, "premises are not `A` and `A -> B` with B the step"));
            }
        }
        Rule::AndI => {
            no_params(step)?;
            let [a, b] = premises::<2>(ctx, step)?;
            expect(rule, f, &Formula::and(a.clone(), b.clone()))?;
        }
        Rule::AndE1 | Rule::AndE2 => {
            no_params(step)?;
            let [a] = premises::<1>(ctx, step)?;
            let Formula::And(l, r) = a else { return Err(mismatch(rule, "premise is not a conjunction")) };
            expect(rule, f, if rule == Rule::AndE1 { l } else { r })?;
        }
        Rule::OrI1 | Rule::OrI2 => {
            no_params(step)?;
            let [a] = premises::<1>(ctx, step)?;
            let Formula::Or(l, r) = f else { return Err(mismatch(rule, "step is not a disjunction")) };
            expect(rule, a, if rule == Rule::OrI1 { l } else { r })?;
        }
        Rule::OrE => {
            no_params(step)?;
            let [d, p, q] = premises::<3>(ctx, step)?;
            let Formula::Or(l, r) = d else { return Err(mismatch(rule, "first premise is not a disjunction")) };
            expect(rule, p, &Formula::imp((**l).clone(), f.clone()))?;
            expect(rule, q, &Formula::imp((**r).clone(), f.clone()))?;
        }
        Rule::NegI => {
            no_params(step)?;
            let [a] = premises::<1>(ctx, step)?;
            let Formula::Not(g) = f else { return Err(mismatch(rule, "step is not a negation")) };
            expect(rule, a, &Formula::imp((**g).clone(), Formula::Falsum))?;
        }
        Rule::NegE => {
            no_params(step)?;
            let [a, b] = premises::<2>(ctx, step)?;
            expect(rule, f, &Formula::Falsum)?;
            let neg = |x: &Formula, y: &Formula| matches!(y, Formula::Not(g) if alpha_eq(g, x));
            if !(neg(a, b) || neg(b, a)) {
                return Err(mismatch(rule, "premises are not `A` and `~A`"));
            }
        }
        Rule::AllI => {
            let [a] = premises::<1>(ctx, step)?;
            let Formula::ForAll(v, body) = f else { return Err(mismatch(rule, "step is not universal")) };
            let e = eigen_param(step, v)?;
            expect(rule, a, &body.substitute(v, &Term::var(e.as_str())))?;
            if ctx.free_in_assumptions(&e) {
                return Err(KernelError::Eigenvariable(format!("`{e}` is free in an open assumption")));
            }
            if e != *v && f.has_free(&e) {
                return Err(KernelError::Eigenvariable(format!("`{e}` is free in the conclusion")));
            }
        }
        Rule::AllE => {
            let t = term_param(step)?;
            let [a] = premises::<1>(ctx, step)?;
            let Formula::ForAll(v, body) = a else { return Err(mismatch(rule, "premise is not universal")) };
            expect(rule, f, &body.substitute(v, t))?;
        }
        Rule::ExI => {
            let t = term_param(step)?;
            let [a] = premises::<1>(ctx, step)?;
            let Formula::Exists(v, body) = f else { return Err(mismatch(rule, "step is not existential")) };
            expect(rule, a, &body.substitute(v, t))?;
        }
        Rule::ExE => {
            let [ex, imp] = premises::<2>(ctx, step)?;
            let Formula::Exists(v, body) = ex else { return Err(mismatch(rule, "first premise is not existential")) };
            let e = eigen_param(step, v)?;
            expect(rule, imp, &Formula::imp(body.substitute(v, &Term::var(e.as_str())), f.clone()))?;
            if f.has_free(&e) || ex.has_free(&e) {
                return Err(KernelError::Eigenvariable(format!("`{e}` escapes its scope")));
            }
            if ctx.free_in_assumptions(&e) {
                return Err(KernelError::Eigenvariable(format!("`{e}` is free in an open assumption")));
            }
        }
        Rule::Arith => {
            premises::<0>(ctx, step)?;
            let name = match step.params.as_slice() {
                [p] => p.as_name().ok_or_else(|| KernelError::BadParams { rule: rule.to_string(), msg: "expects an axiom name".into() })?,
                _ => return Err(KernelError::BadParams { rule: rule.to_string(), msg: "expects an axiom name".into() }),
            };
            if !match_axiom(name, f)? {
                return Err(mismatch(rule, format!("not an instance of `{name}`")));
            }
        }
        Rule::NumEval => {
            no_params(step)?;
            premises::<0>(ctx, step)?;
            let ok = match f {
                Formula::Not(g) => !num_eval(g)?,
                _ => num_eval(f)?,
            };
            if !ok {
                return Err(mismatch(rule, "the sentence evaluates to false"));
            }
        }
        Rule::Unfold | Rule::Fold => {
            no_params(step)?;
            let [a] = premises::<1>(ctx, step)?;
            let (folded, unfolded) = if rule == Rule::Unfold { (a, f) } else { (f, a) };
            let Formula::Pred(name, args) = folded else {
                return Err(mismatch(rule, "expected a predicate application"));
            };
            let body = ctx.sig.unfold(name, args).ok_or_else(|| KernelError::UnknownPredicate(name.clone()))?;
            expect(rule, unfolded, &body)?;
        }
        Rule::ConDef => {
            no_params(step)?;
            premises::<0>(ctx, step)?;
            expect(rule, f, &consistency_axiom())?;
        }
        Rule::Gd1 => {
            no_params(step)?;
            let [a] = premises::<1>(ctx, step)?;
            let n = step.premises[0];
            if !ctx.records[&n].scope.is_empty() {
                return Err(KernelError::OpenAssumption(n));
            }
            expect(rule, f, &Formula::boxed_identity(a.clone()))?;
        }
        Rule::Gd2 => {
            no_params(step)?;
            premises::<0>(ctx, step)?;
            let shape = || mismatch(rule, "expected `Prov[A -> B; s] -> (Prov[A; s] -> Prov[B; s])`");
            let (lhs, _) = imp_parts(f).ok_or_else(shape)?;
            let (tpl, s) = box_parts(lhs).ok_or_else(shape)?;
            let (a, b) = imp_parts(tpl).ok_or_else(shape)?;
            let want = Formula::imp(lhs.clone(), Formula::imp(restrict(a, s), restrict(b, s)));
            expect(rule, f, &want)?;
        }
        Rule::Gd3 => {
            no_params(step)?;
            premises::<0>(ctx, step)?;
            let shape = || mismatch(rule, "expected `ψ[s] -> Prov[ψ; s]`");
            let (inst, rhs) = imp_parts(f).ok_or_else(shape)?;
            let (psi, s) = box_parts(rhs).ok_or_else(shape)?;
            if !is_sigma1(psi) {
                return Err(KernelError::NotSigma1(psi.to_string()));
            }
            let map: BTreeMap<String, Term> = s.iter().cloned().collect();
            expect(rule, inst, &psi.substitute_many(&map))?;
        }
        Rule::Lob => {
            no_params(step)?;
            premises::<0>(ctx, step)?;
            let shape = || mismatch(rule, "expected `Prov[Prov[φ] -> φ; s] -> Prov[φ; s]`");
            let (lhs, _) = imp_parts(f).ok_or_else(shape)?;
            let (tpl, s) = box_parts(lhs).ok_or_else(shape)?;
            let (inner, phi) = imp_parts(tpl).ok_or_else(shape)?;
            let (_, s1) = box_parts(inner).ok_or_else(shape)?;
            if !is_identity(s1) || !alpha_eq(inner, &Formula::boxed_identity(phi.clone())) {
                return Err(shape());
            }
            expect(rule, f, &Formula::imp(lhs.clone(), restrict(phi, s)))?;
        }
    }
    ctx.records.insert(step.index, Record { formula: f.clone(), scope: ctx.open.clone() });
    ctx.last = Some(step.index);
    Ok(())
}

fn failure(step: &ProofStep, e: impl ToString) -> StepFailure {
    StepFailure { step: step.index, line: step.line, reason: e.to_string() }
}

/// Checks every definition and step of `s` over `sig` extended by the
/// script's own definitions.
pub fn check_script(s: &ProofScript, sig: &Signature) -> CheckReport {
    check_script_with_signature(s, sig).0
}

/// Like [`check_script`], also returning the extended signature.
pub fn check_script_with_signature(s: &ProofScript, sig: &Signature) -> (CheckReport, Signature) {
    let mut sig = sig.clone();
    let mut report = CheckReport { script: s.name.clone(), verdict: Verdict::Accepted, failure: None, census: BTreeMap::new() };
    let reject = |mut r: CheckReport, f: StepFailure| {
        r.verdict = Verdict::Rejected;
        r.failure = Some(f);
        r
    };
    for d in &s.defs {
        if let Err(e) = sig.fix_intro(&d.name, &d.template, HOLE, &d.params) {
            let f = StepFailure { step: 0, line: 0, reason: format!("def {}: {e}", d.name) };
            return (reject(report, f), sig);
        }
    }
    let mut ctx = CheckContext::new(&sig, s.vars.iter().cloned());
    for step in &s.steps {
        if let Err(e) = check_step(&mut ctx, step) {
            return (reject(report, failure(step, e)), sig.clone());
        }
        *report.census.entry(step.rule.keyword().to_string()).or_default() += 1;
    }
    let end = |e: KernelError| match s.steps.last() {
        Some(st) => failure(st, e),
        None => StepFailure { step: 0, line: 0, reason: e.to_string() },
    };
    let result = if let Some(&b) = ctx.open.last() {
        Err(KernelError::Block(format!("block opened at step {b} is never closed")))
    } else {
        match s.steps.last() {
            None => Err(KernelError::Conclusion("no steps".into())),
            Some(st) if !alpha_eq(&st.formula, &s.conclusion) => {
                Err(KernelError::Conclusion(format!("last step proves `{}`, not `{}`", st.formula, s.conclusion)))
            }
            Some(_) => sig.check_formula(&s.conclusion),
        }
    };
    if let Err(e) = result {
        let f = end(e);
        drop(ctx);
        return (reject(report, f), sig);
    }
    drop(ctx);
    (report, sig)
}
