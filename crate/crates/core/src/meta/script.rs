use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::{parse_def, parse_vars, Definition};
use crate::syntax::parse_formula_at;
use crate::text::{self, format_justification, Line, Param, ScriptParseError};

use super::{Judgment, MetaAssumption, MetaRule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaStep {
    pub index: usize,
    pub judgment: Judgment,
    pub rule: MetaRule,
    pub premises: Vec<usize>,
    pub params: Vec<Param>,
    pub depth: usize,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaScript {
    pub name: String,
    pub doc: String,
    pub assumptions: BTreeSet<MetaAssumption>,
    pub eigen: Vec<String>,
    pub defs: Vec<Definition>,
    pub steps: Vec<MetaStep>,
    pub conclusion: Judgment,
}

impl MetaScript {
    /// Kernel scripts cited by `m-kernel` and meta-scripts used as lemmas.
    pub fn dependencies(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut kernel = BTreeSet::new();
        let mut meta = BTreeSet::new();
        for s in &self.steps {
            match &s.rule {
                MetaRule::Kernel => {
                    if let Some(n) = s.params.first().and_then(Param::as_name) {
                        kernel.insert(n.to_string());
                    }
                }
                MetaRule::Lemma(n) => {
                    meta.insert(n.clone());
                }
                _ => {}
            }
        }
        (kernel, meta)
    }
}

fn judgment(line: &Line<'_>, s: &str) -> Result<Judgment, ScriptParseError> {
    let formula = |rest: &str| {
        let rest = rest.trim_start();
        parse_formula_at(rest, line.origin_of(rest)).map_err(|e| ScriptParseError::from_syntax(line.number, e))
    };
    if let Some(rest) = s.strip_prefix("Prv:") {
        Ok(Judgment::Prv(formula(rest)?))
    } else if let Some(rest) = s.strip_prefix("NotPrv:") {
        Ok(Judgment::NotPrv(formula(rest)?))
    } else if s.trim() == "meta-bot" {
        Ok(Judgment::MetaBot)
    } else {
        Err(ScriptParseError::new(line.number, format!("expected `Prv: φ`, `NotPrv: φ` or `meta-bot`, found `{s}`")))
    }
}

pub fn parse_meta_script(src: &str) -> Result<MetaScript, ScriptParseError> {
    let lines = text::lines(src);
    let first = lines.first().ok_or_else(|| ScriptParseError::new(1, "empty script"))?;
    let (name, doc) = text::header(first, "meta-theorem")?;
    let mut assumptions = BTreeSet::new();
    let mut eigen = Vec::new();
    let mut defs = Vec::new();
    let mut steps: Vec<MetaStep> = Vec::new();
    let mut conclusion = None;
    let mut open: Vec<usize> = Vec::new();

    for line in &lines[1..] {
        let t = line.text;
        let err = |m: String| ScriptParseError::new(line.number, m);
        if conclusion.is_some() {
            return Err(err("nothing may follow the conclusion".into()));
        }
        let in_header = steps.is_empty();
        if let Some(rest) = t.strip_prefix("assume-meta ") {
            if !in_header {
                return Err(err("assumptions must precede the steps".into()));
            }
            for a in rest.split(',') {
                match a.trim() {
                    "Con" => assumptions.insert(MetaAssumption::Con),
                    "OneCon" => assumptions.insert(MetaAssumption::OneCon),
                    other => return Err(err(format!("unknown meta assumption `{other}`"))),
                };
            }
        } else if let Some(rest) = t.strip_prefix("eigen ") {
            if !in_header {
                return Err(err("eigenvariables must precede the steps".into()));
            }
            eigen.extend(parse_vars(line, rest)?);
        } else if let Some(rest) = t.strip_prefix("def ") {
            if !in_header {
                return Err(err("definitions must precede the steps".into()));
            }
            defs.push(parse_def(line, rest)?);
        } else if let Some(rest) = t.strip_prefix("conclusion ") {
            conclusion = Some(judgment(line, rest.trim_start())?);
        } else if let Some((index, rest)) = text::step_number(line) {
            if let Some(prev) = steps.last() {
                if index <= prev.index {
                    return Err(err(format!("step {index} does not follow step {}", prev.index)));
                }
            }
            let step = if let Some(j) = rest.strip_prefix("assume ") {
                open.push(index);
                MetaStep {
                    index,
                    judgment: judgment(line, j.trim_start())?,
                    rule: MetaRule::Assume,
                    premises: vec![],
                    params: vec![],
                    depth: open.len(),
                    line: line.number,
                }
            } else {
                let (body, just) = text::split_by(rest).ok_or_else(|| err("expected `<judgment> by <rule>`".into()))?;
                let j = text::justification(line.number, just)?;
                let rule = MetaRule::parse(&j.rule).ok_or_else(|| err(format!("unknown rule `{}`", j.rule)))?;
                if rule == MetaRule::Assume {
                    return Err(err("write assumptions as `n. assume Prv: φ`".into()));
                }
                if rule == MetaRule::Raa {
                    match (open.pop(), j.premises.as_slice()) {
                        (Some(b), [n]) if b == *n => {}
                        _ => return Err(err("m-raa must close the innermost block".into())),
                    }
                }
                MetaStep {
                    index,
                    judgment: judgment(line, body)?,
                    rule,
                    premises: j.premises,
                    params: j.params,
                    depth: open.len(),
                    line: line.number,
                }
            };
            steps.push(step);
        } else {
            return Err(err(format!("unrecognized line `{t}`")));
        }
    }
    let conclusion =
        conclusion.ok_or_else(|| ScriptParseError::new(lines.last().map_or(1, |l| l.number), "missing `conclusion`"))?;
    Ok(MetaScript { name, doc, assumptions, eigen, defs, steps, conclusion })
}

impl fmt::Display for MetaStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let indent = "  ".repeat(match self.rule {
            MetaRule::Assume => self.depth.saturating_sub(1),
            _ => self.depth,
        });
        if self.rule == MetaRule::Assume && self.premises.is_empty() && self.params.is_empty() {
            return write!(f, "{indent}{}. assume {}", self.index, self.judgment);
        }
        write!(
            f,
            "{indent}{}. {} by {}",
            self.index,
            self.judgment,
            format_justification(&self.rule.keyword(), &self.premises, &self.params)
        )
    }
}

impl fmt::Display for MetaScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "meta-theorem {} \"{}\"", self.name, self.doc)?;
        for a in &self.assumptions {
            writeln!(f, "assume-meta {a}")?;
        }
        if !self.eigen.is_empty() {
            writeln!(f, "eigen {}", self.eigen.join(", "))?;
        }
        for d in &self.defs {
            writeln!(f, "{d}")?;
        }
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        writeln!(f, "conclusion {}", self.conclusion)
    }
}
