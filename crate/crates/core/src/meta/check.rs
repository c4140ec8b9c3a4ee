use std::collections::{BTreeMap, BTreeSet};

use crate::kernel::{check_script_with_signature, ProofScript, Signature, CON, HOLE};
use crate::report::{CheckReport, StepFailure, Verdict};
use crate::syntax::{alpha_eq, Formula, Term};
use crate::text::Param;

use super::script::{MetaScript, MetaStep};
use super::{Judgment, MetaAssumption, MetaRule};

struct KernelEntry {
    script: ProofScript,
    signature: Signature,
    accepted: bool,
}

struct MetaEntry {
    script: MetaScript,
    accepted: bool,
}

/// Checked kernel scripts and meta-scripts available for citation.
#[derive(Default)]
pub struct Library {
    kernel: BTreeMap<String, KernelEntry>,
    meta: BTreeMap<String, MetaEntry>,
}

impl Library {
    pub fn new() -> Self {
        Self::default()
    }

    /// Checks a kernel script over `sig` and records the outcome.
    pub fn add_kernel(&mut self, script: ProofScript, sig: &Signature) -> CheckReport {
        let (report, signature) = check_script_with_signature(&script, sig);
        let accepted = report.accepted();
        self.kernel.insert(script.name.clone(), KernelEntry { script, signature, accepted });
        report
    }

    /// Checks a meta-script against the library and records the outcome.
    pub fn add_meta(&mut self, script: MetaScript) -> CheckReport {
        let report = check_meta_script(&script, self);
        let accepted = report.accepted();
        self.meta.insert(script.name.clone(), MetaEntry { script, accepted });
        report
    }

    pub fn kernel_accepted(&self, name: &str) -> Option<bool> {
        self.kernel.get(name).map(|e| e.accepted)
    }

    pub fn meta_accepted(&self, name: &str) -> Option<bool> {
        self.meta.get(name).map(|e| e.accepted)
    }
}

struct Rec {
    judgment: Judgment,
    scope: Vec<usize>,
    /// Derived from kernel theorems alone; free variables are schematic.
    general: bool,
}

struct Fresh {
    name: String,
    scope: Vec<usize>,
}

struct Ctx<'a> {
    m: &'a MetaScript,
    lib: &'a Library,
    sig: Signature,
    recs: BTreeMap<usize, Rec>,
    open: Vec<usize>,
    fresh: Vec<Fresh>,
    last: Option<usize>,
}

fn satisfies(have: &BTreeSet<MetaAssumption>, need: MetaAssumption) -> bool {
    match need {
        MetaAssumption::Con => have.contains(&MetaAssumption::Con) || have.contains(&MetaAssumption::OneCon),
        MetaAssumption::OneCon => have.contains(&MetaAssumption::OneCon),
    }
}

impl<'a> Ctx<'a> {
    fn rec(&self, n: usize) -> Result<&Rec, String> {
        let r = self.recs.get(&n).ok_or_else(|| format!("premise {n} does not refer to an earlier step"))?;
        if self.open.starts_with(&r.scope) {
            Ok(r)
        } else {
            Err(format!("premise {n} is not accessible (it lies in a closed block)"))
        }
    }

    fn premises<const N: usize>(&self, step: &MetaStep) -> Result<[&Rec; N], String> {
        if step.premises.len() != N {
            return Err(format!("{} expects {N} premise(s), got {}", step.rule, step.premises.len()));
        }
        let v: Vec<&Rec> = step.premises.iter().map(|&p| self.rec(p)).collect::<Result<_, _>>()?;
        Ok(v.try_into().unwrap_or_else(|_| unreachable!()))
    }

    fn gate(&self, rule: &MetaRule, need: MetaAssumption) -> Result<(), String> {
        if satisfies(&self.m.assumptions, need) {
            Ok(())
        } else {
            Err(format!("{rule} requires the {need} assumption"))
        }
    }

    /// Eigenvariables plus the fresh witnesses in scope.
    fn allowed(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.m.eigen.iter().cloned().collect();
        out.extend(self.fresh.iter().filter(|f| self.open.starts_with(&f.scope)).map(|f| f.name.clone()));
        out
    }

    fn term_ok(&self, t: &Term) -> Result<(), String> {
        let allowed = self.allowed();
        match t.free_vars().into_iter().find(|v| !allowed.contains(v)) {
            Some(v) => Err(format!("`{v}` is not a meta eigenvariable")),
            None => Ok(()),
        }
    }
}

fn prv(r: &Rec) -> Result<&Formula, String> {
    match &r.judgment {
        Judgment::Prv(f) => Ok(f),
        j => Err(format!("expected a Prv judgment, found `{j}`")),
    }
}

fn expect(got: &Judgment, want: &Judgment) -> Result<(), String> {
    if got.alpha_eq(want) {
        Ok(())
    } else {
        Err(format!("expected `{want}`, found `{got}`"))
    }
}

fn bindings(ps: &[Param]) -> Result<BTreeMap<String, Term>, String> {
    let mut map = BTreeMap::new();
    for p in ps {
        let Param::Bind(v, t) = p else { return Err(format!("expected `v := t`, found `{p}`")) };
        if map.insert(v.clone(), t.clone()).is_some() {
            return Err(format!("`{v}` bound twice"));
        }
    }
    Ok(map)
}

fn no_params(step: &MetaStep) -> Result<(), String> {
    if step.params.is_empty() {
        Ok(())
    } else {
        Err(format!("{} takes no parameters", step.rule))
    }
}

fn step_rule(ctx: &mut Ctx, step: &MetaStep) -> Result<bool, String> {
    let j = &step.judgment;
    let rule = &step.rule;
    let general = match rule {
        MetaRule::Assume => {
            no_params(step)?;
            ctx.premises::<0>(step)?;
            if !matches!(j, Judgment::Prv(_)) {
                return Err("only `Prv: φ` may be assumed".into());
            }
            ctx.open.push(step.index);
            false
        }
        MetaRule::Kernel => {
            ctx.premises::<0>(step)?;
            let [p] = step.params.as_slice() else { return Err("m-kernel expects one script name".into()) };
            let name = p.as_name().ok_or("m-kernel expects a script name")?;
            let e = ctx.lib.kernel.get(name).ok_or_else(|| format!("no kernel script `{name}`"))?;
            if !e.accepted {
                return Err(format!("kernel script `{name}` is not accepted"));
            }
            if let Some(c) = e.signature.conflict_with(&ctx.sig) {
                return Err(format!("`{c}` is defined differently in `{name}`"));
            }
            expect(j, &Judgment::Prv(e.script.conclusion.clone()))?;
            true
        }
        MetaRule::Mp => {
            no_params(step)?;
            let [a, b] = ctx.premises::<2>(step)?;
            let (fa, fb) = (prv(a)?, prv(b)?);
            let Judgment::Prv(goal) = j else { return Err("m-mp concludes a Prv judgment".into()) };
            let ok = |ant: &Formula, imp: &Formula| matches!(imp, Formula::Imp(x, y) if alpha_eq(x, ant) && alpha_eq(y, goal));
            if !(ok(fa, fb) || ok(fb, fa)) {
                return Err("premises are not `Prv: A` and `Prv: A -> B` with B the step".into());
            }
            a.general && b.general
        }
        MetaRule::Inst => {
            let [a] = ctx.premises::<1>(step)?;
            if !a.general {
                return Err("m-inst applies only to judgments derived from kernel theorems alone".into());
            }
            let f = prv(a)?.clone();
            let map = bindings(&step.params)?;
            if map.is_empty() {
                return Err("m-inst needs at least one binding".into());
            }
            for t in map.values() {
                ctx.term_ok(t)?;
            }
            expect(j, &Judgment::Prv(f.substitute_many(&map)))?;
            false
        }
        MetaRule::Refl1 => {
            no_params(step)?;
            ctx.gate(rule, MetaAssumption::OneCon)?;
            let [a] = ctx.premises::<1>(step)?;
            let Formula::Box(tpl, s) = prv(a)? else { return Err("m-refl1 expects `Prv: Prov[ φ ; s ]`".into()) };
            let (tpl, s) = (tpl.clone(), s.clone());
            for (_, t) in &s {
                ctx.term_ok(t)?;
            }
            let map: BTreeMap<String, Term> = s.into_iter().collect();
            expect(j, &Judgment::Prv(tpl.substitute_many(&map)))?;
            false
        }
        MetaRule::Witness => {
            ctx.gate(rule, MetaAssumption::OneCon)?;
            let [a] = ctx.premises::<1>(step)?;
            let f = prv(a)?.clone();
            let shape = || "m-witness expects `Prv: exists x. t < x & Prov[ φ ; s ]`".to_string();
            let Formula::Exists(x, body) = &f else { return Err(shape()) };
            let Formula::And(guard, boxed) = &**body else { return Err(shape()) };
            let Formula::Lt(t, Term::Var(y)) = &**guard else { return Err(shape()) };
            if y != x || t.has_var(x) || !matches!(**boxed, Formula::Box(..)) {
                return Err(shape());
            }
            ctx.term_ok(t)?;
            let [p] = step.params.as_slice() else { return Err("m-witness expects the fresh name".into()) };
            let n = p.as_name().ok_or("m-witness expects the fresh name")?.to_string();
            if ctx.m.eigen.contains(&n) || ctx.fresh.iter().any(|w| w.name == n) || f.has_free(&n) {
                return Err(format!("`{n}` is not fresh"));
            }
            expect(j, &Judgment::Prv(boxed.substitute(x, &Term::var(n.as_str()))))?;
            ctx.fresh.push(Fresh { name: n, scope: ctx.open.clone() });
            false
        }
        MetaRule::Con => {
            no_params(step)?;
            let [a, b] = ctx.premises::<2>(step)?;
            expect(j, &Judgment::MetaBot)?;
            let neg = |x: &Formula, y: &Formula| matches!(y, Formula::Not(g) if alpha_eq(g, x));
            match (&a.judgment, &b.judgment) {
                (Judgment::Prv(x), Judgment::NotPrv(y)) | (Judgment::NotPrv(y), Judgment::Prv(x)) if alpha_eq(x, y) => {}
                (Judgment::Prv(x), Judgment::Prv(y)) if neg(x, y) || neg(y, x) => ctx.gate(rule, MetaAssumption::Con)?,
                _ => return Err("premises are neither `Prv: φ` and `Prv: ~φ` nor `Prv: φ` and `NotPrv: φ`".into()),
            }
            false
        }
        MetaRule::G2 => {
            no_params(step)?;
            ctx.gate(rule, MetaAssumption::Con)?;
            let [a] = ctx.premises::<1>(step)?;
            if !alpha_eq(prv(a)?, &Formula::pred(CON, vec![])) {
                return Err("m-g2 expects `Prv: Con`".into());
            }
            expect(j, &Judgment::MetaBot)?;
            false
        }
        MetaRule::Raa => {
            no_params(step)?;
            let [n] = step.premises[..] else { return Err("m-raa takes the block's first step".into()) };
            if ctx.open.last() != Some(&n) {
                return Err(format!("step {n} does not open the innermost block"));
            }
            let last = ctx.last.expect("open block has a start");
            let lr = &ctx.recs[&last];
            if lr.scope != ctx.open || lr.judgment != Judgment::MetaBot {
                return Err("the block does not end in meta-bot".into());
            }
            let Judgment::Prv(h) = &ctx.recs[&n].judgment else { unreachable!("assume only admits Prv") };
            expect(j, &Judgment::NotPrv(h.clone()))?;
            ctx.open.pop();
            false
        }
        MetaRule::Lemma(name) => {
            ctx.premises::<0>(step)?;
            let e = ctx.lib.meta.get(name).ok_or_else(|| format!("no meta-script `{name}`"))?;
            if !e.accepted {
                return Err(format!("meta-script `{name}` is not accepted"));
            }
            if let Some(a) = e.script.assumptions.iter().find(|a| !satisfies(&ctx.m.assumptions, **a)) {
                return Err(format!("lemma `{name}` needs the {a} assumption"));
            }
            let mut lsig = Signature::standard();
            for d in &e.script.defs {
                lsig.fix_intro(&d.name, &d.template, HOLE, &d.params).map_err(|x| x.to_string())?;
            }
            if let Some(c) = lsig.conflict_with(&ctx.sig) {
                return Err(format!("`{c}` is defined differently in `{name}`"));
            }
            let map = bindings(&step.params)?;
            if let Some(v) = map.keys().find(|v| !e.script.eigen.contains(v)) {
                return Err(format!("`{v}` is not an eigenvariable of `{name}`"));
            }
            for t in map.values() {
                ctx.term_ok(t)?;
            }
            expect(j, &e.script.conclusion.substitute_many(&map))?;
            false
        }
    };
    Ok(general)
}

fn check_step(ctx: &mut Ctx, step: &MetaStep) -> Result<(), String> {
    if let Some(last) = ctx.last {
        if step.index <= last {
            return Err(format!("step {} does not follow step {last}", step.index));
        }
    }
    if let Some(f) = step.judgment.formula() {
        ctx.sig.check_formula(f).map_err(|e| e.to_string())?;
    }
    let general = step_rule(ctx, step)?;
    if let (false, Some(f)) = (general, step.judgment.formula()) {
        let allowed = ctx.allowed();
        if let Some(v) = f.free_vars().into_iter().find(|v| !allowed.contains(v)) {
            return Err(format!("`{v}` is not a meta eigenvariable in scope"));
        }
    }
    ctx.recs.insert(step.index, Rec { judgment: step.judgment.clone(), scope: ctx.open.clone(), general });
    ctx.last = Some(step.index);
    Ok(())
}

/// Checks a meta-script against previously checked scripts in `lib`.
pub fn check_meta_script(m: &MetaScript, lib: &Library) -> CheckReport {
    let mut report = CheckReport { script: m.name.clone(), verdict: Verdict::Accepted, failure: None, census: BTreeMap::new() };
    let fail = |mut r: CheckReport, step: usize, line: usize, reason: String| {
        r.verdict = Verdict::Rejected;
        r.failure = Some(StepFailure { step, line, reason });
        r
    };
    let mut sig = Signature::standard();
    for d in &m.defs {
        if let Err(e) = sig.fix_intro(&d.name, &d.template, HOLE, &d.params) {
            return fail(report, 0, 0, format!("def {}: {e}", d.name));
        }
    }
    let mut ctx = Ctx { m, lib, sig, recs: BTreeMap::new(), open: Vec::new(), fresh: Vec::new(), last: None };
    for step in &m.steps {
        if let Err(e) = check_step(&mut ctx, step) {
            return fail(report, step.index, step.line, e);
        }
        let key = match &step.rule {
            MetaRule::Lemma(_) => "lemma".to_string(),
            r => r.keyword(),
        };
        *report.census.entry(key).or_default() += 1;
    }
    let (idx, line) = m.steps.last().map_or((0, 0), |s| (s.index, s.line));
    let end = if let Some(b) = ctx.open.last() {
        Err(format!("meta-block opened at step {b} is never discharged"))
    } else {
        match m.steps.last() {
            None => Err("no steps".to_string()),
            Some(s) if !s.judgment.alpha_eq(&m.conclusion) => {
                Err(format!("last step gives `{}`, not `{}`", s.judgment, m.conclusion))
            }
            Some(_) => match m.conclusion.formula().and_then(|f| f.free_vars().into_iter().find(|v| !m.eigen.contains(v))) {
                Some(v) => Err(format!("conclusion mentions `{v}`, which is not an eigenvariable")),
                None => Ok(()),
            },
        }
    };
    match end {
        Err(e) => fail(report, idx, line, e),
        Ok(()) => report,
    }
}
