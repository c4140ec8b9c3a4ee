use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFailure {
    /// Step number as written in the script; 0 for header-level problems.
    pub step: usize,
    pub line: usize,
    pub reason: String,
}

/// Outcome of checking one kernel or meta script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub script: String,
    pub verdict: Verdict,
    pub failure: Option<StepFailure>,
    /// Number of accepted steps per rule.
    pub census: BTreeMap<String, usize>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "script": self.script,
            "verdict": if self.accepted() { "accepted" } else { "rejected" },
            "failure": self.failure.as_ref().map(|f| serde_json::json!({
                "step": f.step,
                "line": f.line,
                "reason": f.reason,
            })),
            "census": self.census,
        })
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => writeln!(f, "{}: accepted", self.script)?,
            Some(e) => writeln!(f, "{}: rejected at step {} (line {}): {}", self.script, e.step, e.line, e.reason)?,
        }
        let census: Vec<String> = self.census.iter().map(|(r, n)| format!("{r}={n}")).collect();
        write!(f, "  rules: {}", census.join(" "))
    }
}
