use std::fmt;
use std::str::FromStr;

use crate::syntax::{is_variable_name, parse_formula_at, Formula};
use crate::text::{self, format_justification, Line, Param, ScriptParseError};

/// Name of the hole in `def` templates.
pub const HOLE: &str = "self";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Taut,
    Mp,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    NegI,
    NegE,
    Assume,
    QedBlock,
    AllI,
    AllE,
    ExI,
    ExE,
    Arith,
    NumEval,
    Unfold,
    Fold,
    Gd1,
    Gd2,
    Gd3,
    Lob,
    ConDef,
    Reiterate,
}

impl Rule {
    pub const ALL: [Rule; 26] = [
        Rule::Taut,
        Rule::Mp,
        Rule::AndI,
        Rule::AndE1,
        Rule::AndE2,
        Rule::OrI1,
        Rule::OrI2,
        Rule::OrE,
        Rule::NegI,
        Rule::NegE,
        Rule::Assume,
        Rule::QedBlock,
        Rule::AllI,
        Rule::AllE,
        Rule::ExI,
        Rule::ExE,
        Rule::Arith,
        Rule::NumEval,
        Rule::Unfold,
        Rule::Fold,
        Rule::Gd1,
        Rule::Gd2,
        Rule::Gd3,
        Rule::Lob,
        Rule::ConDef,
        Rule::Reiterate,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Rule::Taut => "taut",
            Rule::Mp => "mp",
            Rule::AndI => "andI",
            Rule::AndE1 => "andE1",
            Rule::AndE2 => "andE2",
            Rule::OrI1 => "orI1",
            Rule::OrI2 => "orI2",
            Rule::OrE => "orE",
            Rule::NegI => "negI",
            Rule::NegE => "negE",
            Rule::Assume => "assume",
            Rule::QedBlock => "qed-block",
            Rule::AllI => "allI",
            Rule::AllE => "allE",
            Rule::ExI => "exI",
            Rule::ExE => "exE",
            Rule::Arith => "arith",
            Rule::NumEval => "numeval",
            Rule::Unfold => "unfold",
            Rule::Fold => "fold",
            Rule::Gd1 => "gd1",
            Rule::Gd2 => "gd2",
            Rule::Gd3 => "gd3",
            Rule::Lob => "lob",
            Rule::ConDef => "con-def",
            Rule::Reiterate => "reiterate",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Rule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Rule::ALL.into_iter().find(|r| r.keyword() == s).ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub index: usize,
    pub formula: Formula,
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub params: Vec<Param>,
    /// Number of open blocks after this step (an `assume` counts its own).
    pub depth: usize,
    /// Source line, 0 for generated steps.
    pub line: usize,
}

/// `def Name(params) := template` with the hole written as `self`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub template: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub name: String,
    pub doc: String,
    pub vars: Vec<String>,
    pub defs: Vec<Definition>,
    pub steps: Vec<ProofStep>,
    pub conclusion: Formula,
}

/// Parses `def Name(a, b) := <formula>`; shared with the meta format.
pub(crate) fn parse_def(line: &Line<'_>, rest: &str) -> Result<Definition, ScriptParseError> {
    let err = |m: String| ScriptParseError::new(line.number, m);
    let (head, body) = rest.split_once(":=").ok_or_else(|| err("expected `def Name(params) := formula`".into()))?;
    let head = head.trim();
    let (name, params) = match head.split_once('(') {
        Some((n, ps)) => {
            let ps = ps.trim().strip_suffix(')').ok_or_else(|| err("unclosed parameter list".into()))?;
            let ps: Vec<String> =
                ps.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect();
            (n.trim(), ps)
        }
        None => (head, Vec::new()),
    };
    if let Some(p) = params.iter().find(|p| !is_variable_name(p)) {
        return Err(err(format!("parameter `{p}` is not a variable name")));
    }
    let template = parse_formula_at(body.trim_start(), line.origin_of(body.trim_start()))
        .map_err(|e| ScriptParseError::from_syntax(line.number, e))?;
    Ok(Definition { name: name.to_string(), params, template })
}

pub(crate) fn parse_vars(line: &Line<'_>, rest: &str) -> Result<Vec<String>, ScriptParseError> {
    rest.split(',')
        .map(|v| {
            let v = v.trim();
            if is_variable_name(v) {
                Ok(v.to_string())
            } else {
                Err(ScriptParseError::new(line.number, format!("`{v}` is not a variable name")))
            }
        })
        .collect()
}

fn formula_of(line: &Line<'_>, s: &str) -> Result<Formula, ScriptParseError> {
    parse_formula_at(s, line.origin_of(s)).map_err(|e| ScriptParseError::from_syntax(line.number, e))
}

pub fn parse_script(src: &str) -> Result<ProofScript, ScriptParseError> {
    let lines = text::lines(src);
    let first = lines.first().ok_or_else(|| ScriptParseError::new(1, "empty script"))?;
    let (name, doc) = text::header(first, "theorem")?;
    let mut vars = Vec::new();
    let mut defs = Vec::new();
    let mut steps: Vec<ProofStep> = Vec::new();
    let mut conclusion = None;
    // (assume step index, its formula)
    let mut open: Vec<(usize, Formula)> = Vec::new();

    for line in &lines[1..] {
        let t = line.text;
        let err = |m: String| ScriptParseError::new(line.number, m);
        if conclusion.is_some() {
            return Err(err("nothing may follow the conclusion".into()));
        }
        if let Some(rest) = t.strip_prefix("var ") {
            if !steps.is_empty() {
                return Err(err("declarations must precede the steps".into()));
            }
            vars.extend(parse_vars(line, rest)?);
        } else if let Some(rest) = t.strip_prefix("def ") {
            if !steps.is_empty() {
                return Err(err("definitions must precede the steps".into()));
            }
            defs.push(parse_def(line, rest)?);
        } else if let Some(rest) = t.strip_prefix("conclusion ") {
            conclusion = Some(formula_of(line, rest.trim_start())?);
        } else if let Some((index, rest)) = text::step_number(line) {
            if let Some(prev) = steps.last() {
                if index <= prev.index {
                    return Err(err(format!("step {index} does not follow step {}", prev.index)));
                }
            }
            let step = if let Some(f) = rest.strip_prefix("assume ") {
                let formula = formula_of(line, f.trim_start())?;
                open.push((index, formula.clone()));
                ProofStep { index, formula, rule: Rule::Assume, premises: vec![], params: vec![], depth: open.len(), line: line.number }
            } else if let Some(n) = rest.strip_prefix("qed-block ") {
                let n: usize = n.trim().parse().map_err(|_| err(format!("bad block reference `{}`", n.trim())))?;
                let (start, hyp) = open.pop().ok_or_else(|| err("qed-block without an open block".into()))?;
                if start != n {
                    return Err(err(format!("qed-block {n} but the innermost open block starts at {start}")));
                }
                let last = steps.last().expect("block has a start step");
                let formula = Formula::imp(hyp, last.formula.clone());
                ProofStep { index, formula, rule: Rule::QedBlock, premises: vec![n], params: vec![], depth: open.len(), line: line.number }
            } else {
                let (body, just) = text::split_by(rest).ok_or_else(|| err("expected `<formula> by <rule>`".into()))?;
                let j = text::justification(line.number, just)?;
                let rule: Rule = j.rule.parse().map_err(err)?;
                if matches!(rule, Rule::Assume) {
                    return Err(err("write assumptions as `n. assume <formula>`".into()));
                }
                let formula = formula_of(line, body)?;
                if rule == Rule::QedBlock {
                    let [n] = j.premises[..] else { return Err(err("qed-block takes one block reference".into())) };
                    match open.pop() {
                        Some((start, _)) if start == n => {}
                        _ => return Err(err(format!("qed-block {n} does not close the innermost block"))),
                    }
                }
                ProofStep { index, formula, rule, premises: j.premises, params: j.params, depth: open.len(), line: line.number }
            };
            steps.push(step);
        } else {
            return Err(err(format!("unrecognized line `{t}`")));
        }
    }
    let conclusion = conclusion.ok_or_else(|| ScriptParseError::new(lines.last().map_or(1, |l| l.number), "missing `conclusion`"))?;
    Ok(ProofScript { name, doc, vars, defs, steps, conclusion })
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let indent = "  ".repeat(match self.rule {
            Rule::Assume => self.depth.saturating_sub(1),
            _ => self.depth,
        });
        match (self.rule, self.premises.as_slice()) {
            (Rule::Assume, []) if self.params.is_empty() => write!(f, "{indent}{}. assume {}", self.index, self.formula),
            (Rule::QedBlock, [n]) if self.params.is_empty() => write!(f, "{indent}{}. qed-block {n}", self.index),
            _ => write!(
                f,
                "{indent}{}. {} by {}",
                self.index,
                self.formula,
                format_justification(self.rule.keyword(), &self.premises, &self.params)
            ),
        }
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "def {}({}) := {}", self.name, self.params.join(", "), self.template)
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem {} \"{}\"", self.name, self.doc)?;
        if !self.vars.is_empty() {
            writeln!(f, "var {}", self.vars.join(", "))?;
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
