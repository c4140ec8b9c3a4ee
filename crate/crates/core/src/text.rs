//! Line-level scanning shared by the kernel and meta script formats.

use crate::syntax::{parse_term, Pos, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ScriptParseError {
    pub line: usize,
    pub msg: String,
}

impl ScriptParseError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        ScriptParseError { line, msg: msg.into() }
    }

    pub fn from_syntax(line: usize, e: SyntaxError) -> Self {
        match e {
            SyntaxError::Parse { pos, msg } => ScriptParseError { line: pos.line, msg: format!("column {}: {msg}", pos.col) },
            other => ScriptParseError::new(line, other.to_string()),
        }
    }
}

/// A non-blank source line with comments (`#` to end of line) removed.
#[derive(Debug, Clone)]
pub struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
    /// Column of `text`'s first character in the source line.
    pub col: usize,
}

impl<'a> Line<'a> {
    pub fn origin_of(&self, sub: &str) -> Pos {
        let offset = sub.as_ptr() as usize - self.text.as_ptr() as usize;
        Pos { line: self.number, col: self.col + self.text[..offset].chars().count() }
    }
}

pub fn lines(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let code = raw.split('#').next().unwrap_or("");
            let trimmed = code.trim_start();
            let col = code.len() - trimmed.len() + 1;
            let text = trimmed.trim_end();
            (!text.is_empty()).then_some(Line { number: i + 1, text, col })
        })
        .collect()
}

/// `theorem name "doc"` style header.
pub fn header<'a>(line: &Line<'a>, keyword: &str) -> Result<(String, String), ScriptParseError> {
    let rest = line
        .text
        .strip_prefix(keyword)
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| ScriptParseError::new(line.number, format!("expected `{keyword} <name> \"<doc>\"`")))?
        .trim();
    let (name, doc) = match rest.find('"') {
        Some(i) => {
            let doc = rest[i..].trim();
            if doc.len() < 2 || !doc.ends_with('"') {
                return Err(ScriptParseError::new(line.number, "unterminated docstring"));
            }
            (rest[..i].trim(), doc[1..doc.len() - 1].to_string())
        }
        None => (rest, String::new()),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(ScriptParseError::new(line.number, format!("bad script name `{name}`")));
    }
    Ok((name.to_string(), doc))
}

/// Splits `n. rest` into the step number and the rest.
pub fn step_number<'a>(line: &Line<'a>) -> Option<(usize, &'a str)> {
    let text = line.text;
    let digits = text.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return None;
    }
    let rest = text[digits..].strip_prefix('.')?;
    let n = text[..digits].parse().ok()?;
    Some((n, rest.trim_start()))
}

/// Splits `<body> by <rule> [..] [..]` at the last ` by `.
pub fn split_by(s: &str) -> Option<(&str, &str)> {
    let i = s.rfind(" by ")?;
    Some((s[..i].trim_end(), s[i + 4..].trim()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Term(Term),
    Bind(String, Term),
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Param::Term(t) => write!(f, "{t}"),
            Param::Bind(v, t) => write!(f, "{v} := {t}"),
        }
    }
}

impl Param {
    /// The parameter as a bare name (a variable-shaped term).
    pub fn as_name(&self) -> Option<&str> {
        match self {
            Param::Term(Term::Var(v)) => Some(v),
            _ => None,
        }
    }
}

/// Parsed justification: rule name, premises, parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    pub rule: String,
    pub premises: Vec<usize>,
    pub params: Vec<Param>,
}

pub fn justification(line: usize, s: &str) -> Result<Justification, ScriptParseError> {
    let err = |m: &str| ScriptParseError::new(line, m.to_string());
    let end = s.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(s.len());
    let (rule, mut rest) = (s[..end].to_string(), s[end..].trim_start());
    if rule.is_empty() {
        return Err(err("missing rule name"));
    }
    let mut groups = Vec::new();
    while !rest.is_empty() {
        if !rest.starts_with('[') {
            return Err(err(&format!("unexpected `{rest}` after rule")));
        }
        let close = rest.find(']').ok_or_else(|| err("unclosed `[`"))?;
        groups.push(rest[1..close].trim());
        rest = rest[close + 1..].trim_start();
    }
    if groups.len() > 2 {
        return Err(err("at most a premise list and a parameter list are allowed"));
    }
    let numeric = |g: &str| g.split(',').all(|p| !p.trim().is_empty() && p.trim().chars().all(|c| c.is_ascii_digit()));
    let (prem, params) = match groups.as_slice() {
        [] => ("", ""),
        [g] if g.is_empty() || numeric(g) => (*g, ""),
        [g] => ("", *g),
        [p, q] => (*p, *q),
        _ => unreachable!(),
    };
    let premises = if prem.is_empty() {
        Vec::new()
    } else if numeric(prem) {
        prem.split(',').map(|p| p.trim().parse().expect("digits")).collect()
    } else {
        return Err(err(&format!("premise list `{prem}` must be step numbers")));
    };
    let params = split_top(params)
        .into_iter()
        .map(|p| parse_param(line, p))
        .collect::<Result<_, _>>()?;
    Ok(Justification { rule, premises, params })
}

fn split_top(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_param(line: usize, p: &str) -> Result<Param, ScriptParseError> {
    let term = |s: &str| parse_term(s).map_err(|e| ScriptParseError::new(line, format!("parameter `{s}`: {e}")));
    match p.split_once(":=") {
        Some((v, t)) => Ok(Param::Bind(v.trim().to_string(), term(t.trim())?)),
        None => Ok(Param::Term(term(p)?)),
    }
}

pub fn format_justification(rule: &str, premises: &[usize], params: &[Param]) -> String {
    let mut s = rule.to_string();
    if !premises.is_empty() || !params.is_empty() {
        let ps: Vec<String> = premises.iter().map(|p| p.to_string()).collect();
        s.push_str(&format!(" [{}]", ps.join(", ")));
    }
    if !params.is_empty() {
        let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        s.push_str(&format!(" [{}]", ps.join(", ")));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn justification_forms() {
        let j = justification(1, "mp [3, 4]").unwrap();
        assert_eq!((j.rule.as_str(), j.premises.as_slice()), ("mp", &[3, 4][..]));
        let j = justification(1, "arith [lt_trans]").unwrap();
        assert!(j.premises.is_empty());
        assert_eq!(j.params[0].as_name(), Some("lt_trans"));
        let j = justification(1, "allE [2] [k + 1]").unwrap();
        assert_eq!(j.params, vec![Param::Term(parse_term("k + 1").unwrap())]);
        let j = justification(1, "m-inst [5] [y := k, x := S(k)]").unwrap();
        assert_eq!(j.params.len(), 2);
        let j = justification(1, "lemma(thm1_2a) [] [k := n]").unwrap();
        assert_eq!(j.rule, "lemma(thm1_2a)");
        assert!(justification(1, "mp [a, 1]").is_err() || justification(1, "mp [a, 1]").unwrap().premises.is_empty());
        assert!(justification(1, "mp [1] [2] [3]").is_err());
    }

    #[test]
    fn comments_and_columns() {
        let ls = lines("  # comment only\n  1. 0 = 0 by numeval  # trailing\n");
        assert_eq!(ls.len(), 1);
        assert_eq!((ls[0].number, ls[0].col, ls[0].text), (2, 3, "1. 0 = 0 by numeval"));
    }
}
