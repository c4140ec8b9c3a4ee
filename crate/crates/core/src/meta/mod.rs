//! Meta-level reasoning about provability in the object theory: judgments
//! `Prv: φ` / `NotPrv: φ` under consistency or 1-consistency assumptions.

mod check;
mod script;

use std::collections::BTreeMap;
use std::fmt;

pub use check::{check_meta_script, Library};
pub use script::{parse_meta_script, MetaScript, MetaStep};

use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaAssumption {
    Con,
    OneCon,
}

impl MetaAssumption {
    pub fn keyword(self) -> &'static str {
        match self {
            MetaAssumption::Con => "Con",
            MetaAssumption::OneCon => "OneCon",
        }
    }
}

impl fmt::Display for MetaAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgment {
    Prv(Formula),
    NotPrv(Formula),
    MetaBot,
}

impl Judgment {
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            Judgment::Prv(f) | Judgment::NotPrv(f) => Some(f),
            Judgment::MetaBot => None,
        }
    }

    pub fn substitute_many(&self, map: &BTreeMap<String, Term>) -> Judgment {
        match self {
            Judgment::Prv(f) => Judgment::Prv(f.substitute_many(map)),
            Judgment::NotPrv(f) => Judgment::NotPrv(f.substitute_many(map)),
            Judgment::MetaBot => Judgment::MetaBot,
        }
    }

    pub fn alpha_eq(&self, other: &Judgment) -> bool {
        use crate::syntax::alpha_eq;
        match (self, other) {
            (Judgment::Prv(a), Judgment::Prv(b)) | (Judgment::NotPrv(a), Judgment::NotPrv(b)) => alpha_eq(a, b),
            (Judgment::MetaBot, Judgment::MetaBot) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Prv(x) => write!(f, "Prv: {x}"),
            Judgment::NotPrv(x) => write!(f, "NotPrv: {x}"),
            Judgment::MetaBot => f.write_str("meta-bot"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaRule {
    /// Opens a block assuming `Prv: φ`.
    Assume,
    Kernel,
    Mp,
    Inst,
    Refl1,
    Witness,
    Con,
    G2,
    Raa,
    /// Instance of an accepted meta-script.
    Lemma(String),
}

impl MetaRule {
    pub fn keyword(&self) -> String {
        match self {
            MetaRule::Assume => "assume".into(),
            MetaRule::Kernel => "m-kernel".into(),
            MetaRule::Mp => "m-mp".into(),
            MetaRule::Inst => "m-inst".into(),
            MetaRule::Refl1 => "m-refl1".into(),
            MetaRule::Witness => "m-witness".into(),
            MetaRule::Con => "m-con".into(),
            MetaRule::G2 => "m-g2".into(),
            MetaRule::Raa => "m-raa".into(),
            MetaRule::Lemma(n) => format!("lemma({n})"),
        }
    }

    pub fn parse(s: &str) -> Option<MetaRule> {
        Some(match s {
            "assume" => MetaRule::Assume,
            "m-kernel" => MetaRule::Kernel,
            "m-mp" => MetaRule::Mp,
            "m-inst" => MetaRule::Inst,
            "m-refl1" => MetaRule::Refl1,
            "m-witness" => MetaRule::Witness,
            "m-con" => MetaRule::Con,
            "m-g2" => MetaRule::G2,
            "m-raa" => MetaRule::Raa,
            _ => {
                let name = s.strip_prefix("lemma(")?.strip_suffix(')')?;
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return None;
                }
                MetaRule::Lemma(name.to_string())
            }
        })
    }
}

impl fmt::Display for MetaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleDoc {
    pub name: &'static str,
    pub gate: Option<MetaAssumption>,
    pub summary: &'static str,
}

/// Version of the rule listing below; bump on any change.
pub const RULES_VERSION: u32 = 1;

const RULES: [RuleDoc; 8] = [
    RuleDoc { name: "m-kernel", gate: None, summary: "a kernel-accepted theorem φ gives Prv: φ" },
    RuleDoc { name: "m-mp", gate: None, summary: "Prv: φ and Prv: φ -> ψ give Prv: ψ" },
    RuleDoc {
        name: "m-inst",
        gate: None,
        summary: "a judgment obtained from kernel theorems alone may have its free variables instantiated by terms over eigenvariables",
    },
    RuleDoc {
        name: "m-refl1",
        gate: Some(MetaAssumption::OneCon),
        summary: "Prv: Prov[ φ ; s ] with s over eigenvariables gives Prv: φ[s]",
    },
    RuleDoc {
        name: "m-witness",
        gate: Some(MetaAssumption::OneCon),
        summary: "Prv: exists x. t < x & Prov[ φ ; ..x.. ] introduces a fresh n with t < n and gives Prv: Prov[ φ ; ..n.. ]",
    },
    RuleDoc {
        name: "m-con",
        gate: Some(MetaAssumption::Con),
        summary: "Prv: φ and Prv: ~φ give meta-bot (Prv: φ and NotPrv: φ clash without any assumption)",
    },
    RuleDoc { name: "m-g2", gate: Some(MetaAssumption::Con), summary: "Prv: Con gives meta-bot" },
    RuleDoc { name: "m-raa", gate: None, summary: "a block assuming Prv: φ that reaches meta-bot discharges to NotPrv: φ" },
];

/// The meta rule set with gating assumptions. OneCon also satisfies a Con gate.
pub fn list_rules() -> &'static [RuleDoc] {
    &RULES
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_listing() {
        let rules = list_rules();
        assert_eq!(rules.len(), 8);
        let gate = |n: &str| rules.iter().find(|r| r.name == n).unwrap().gate;
        assert_eq!(gate("m-g2"), Some(MetaAssumption::Con));
        assert_eq!(gate("m-refl1"), Some(MetaAssumption::OneCon));
        for r in rules {
            assert!(MetaRule::parse(r.name).is_some());
        }
        assert_eq!(MetaRule::parse("lemma(thm1_2a)"), Some(MetaRule::Lemma("thm1_2a".into())));
        assert_eq!(MetaRule::parse("lemma()"), None);
    }
}
