//! Loading, ordering and checking collections of kernel and meta scripts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use crate::coding::encode_formula;
use crate::kernel::{parse_script, ProofScript, Signature};
use crate::meta::{parse_meta_script, Library, MetaScript};
use crate::report::{CheckReport, StepFailure, Verdict};
use crate::syntax::Formula;
use crate::text::{self, ScriptParseError};

macro_rules! bundled {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../../../scripts/", $file)))),*]
    };
}

/// The scripts shipped with the crate, as `(file name, source)`.
pub const BUNDLED: &[(&str, &str)] = bundled![
    "lem_lt_succ.prf",
    "lem_box_explosion.prf",
    "lem_formalized_g2.prf",
    "lem_mono_YJ.prf",
    "lem_mono_YG.prf",
    "lem_YJ_next.prf",
    "lem_notYJ_con.prf",
    "lem_YG_con.prf",
    "lem_notYG_witness.prf",
    "rem1_glt_via_diagonal.prf",
    "rem2_mono_YJ.prf",
    "rem2_mono_YG.prf",
    "rem2_mono_YH.prf",
    "thm1_3_YH.prf",
    "thm2_con_iff_YG.prf",
    "thm3_con_iff_notYJ.prf",
    "thm1_1a.mprf",
    "thm1_1b.mprf",
    "thm1_2a.mprf",
    "thm1_2b.mprf",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Script {
    Kernel(ProofScript),
    Meta(MetaScript),
}

impl Script {
    pub fn name(&self) -> &str {
        match self {
            Script::Kernel(s) => &s.name,
            Script::Meta(m) => &m.name,
        }
    }

    pub fn doc(&self) -> &str {
        match self {
            Script::Kernel(s) => &s.doc,
            Script::Meta(m) => &m.doc,
        }
    }

    pub fn conclusion(&self) -> String {
        match self {
            Script::Kernel(s) => s.conclusion.to_string(),
            Script::Meta(m) => m.conclusion.to_string(),
        }
    }

    pub fn is_meta(&self) -> bool {
        matches!(self, Script::Meta(_))
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Script::Kernel(s) => s.fmt(f),
            Script::Meta(m) => m.fmt(f),
        }
    }
}

/// Parses a kernel or meta script, chosen by the header keyword.
pub fn parse_any(src: &str) -> Result<Script, ScriptParseError> {
    let lines = text::lines(src);
    let first = lines.first().ok_or_else(|| ScriptParseError::new(1, "empty script"))?;
    if first.text.starts_with("meta-theorem") {
        parse_meta_script(src).map(Script::Meta)
    } else {
        parse_script(src).map(Script::Kernel)
    }
}

/// A named source file that may or may not parse.
#[derive(Debug, Clone)]
pub struct Entry {
    pub file: String,
    pub parsed: Result<Script, ScriptParseError>,
}

impl Entry {
    pub fn new(file: impl Into<String>, src: &str) -> Self {
        Entry { file: file.into(), parsed: parse_any(src) }
    }

    /// Script name, or the file stem when parsing failed.
    pub fn name(&self) -> String {
        match &self.parsed {
            Ok(s) => s.name().to_string(),
            Err(_) => stem(&self.file),
        }
    }
}

fn stem(file: &str) -> String {
    Path::new(file).file_stem().map_or_else(|| file.to_string(), |s| s.to_string_lossy().into_owned())
}

fn is_script_file(p: &Path) -> bool {
    matches!(p.extension().and_then(|e| e.to_str()), Some("prf" | "mprf"))
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    entries: Vec<Entry>,
}

impl Corpus {
    pub fn bundled() -> Self {
        Corpus { entries: BUNDLED.iter().map(|(f, src)| Entry::new(*f, src)).collect() }
    }

    /// Every `.prf` and `.mprf` file directly inside `dir`.
    pub fn from_dir(dir: &Path) -> std::io::Result<Self> {
        let mut files: Vec<_> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|p| p.is_file() && is_script_file(p))
            .collect();
        files.sort();
        let mut entries = Vec::new();
        for p in files {
            let src = std::fs::read_to_string(&p)?;
            entries.push(Entry::new(p.file_name().unwrap().to_string_lossy(), &src));
        }
        Ok(Corpus { entries })
    }

    pub fn from_sources<'a>(files: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Corpus { entries: files.into_iter().map(|(f, src)| Entry::new(f, src)).collect() }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Entries of `top` replace same-named entries of `self`.
    pub fn overlay(mut self, top: Corpus) -> Self {
        let names: BTreeSet<String> = top.entries.iter().map(Entry::name).collect();
        self.entries.retain(|e| !names.contains(&e.name()));
        self.entries.extend(top.entries);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name() == name)
    }

    /// Kernel scripts by name, then meta-scripts so that every lemma
    /// precedes its users (ties by name). Unparsed entries come last.
    pub fn ordered(&self) -> Vec<&Entry> {
        let mut kernel: Vec<&Entry> = Vec::new();
        let mut meta: BTreeMap<String, &Entry> = BTreeMap::new();
        let mut broken: Vec<&Entry> = Vec::new();
        for e in &self.entries {
            match &e.parsed {
                Ok(Script::Kernel(_)) => kernel.push(e),
                Ok(Script::Meta(m)) => {
                    meta.insert(m.name.clone(), e);
                }
                Err(_) => broken.push(e),
            }
        }
        kernel.sort_by_key(|e| e.name());
        let mut out = kernel;
        let mut placed: BTreeSet<String> = BTreeSet::new();
        while !meta.is_empty() {
            let ready = meta
                .iter()
                .find(|(_, e)| {
                    let Ok(Script::Meta(m)) = &e.parsed else { unreachable!() };
                    m.dependencies().1.iter().all(|d| placed.contains(d) || !meta.contains_key(d))
                })
                .map(|(n, _)| n.clone());
            // a dependency cycle: fall back to name order, the checker rejects the cited lemma
            let next = ready.unwrap_or_else(|| meta.keys().next().unwrap().clone());
            let e = meta.remove(&next).unwrap();
            out.push(e);
            placed.insert(next);
        }
        broken.sort_by_key(|e| e.file.clone());
        out.extend(broken);
        out
    }

    /// Checks every entry in dependency order.
    pub fn prove_all(&self) -> ProveAllReport {
        self.run().0
    }

    /// The library that results from checking every entry.
    pub fn library(&self) -> Library {
        self.run().1
    }

    fn run(&self) -> (ProveAllReport, Library) {
        let start = Instant::now();
        let mut lib = Library::new();
        let mut rows = Vec::new();
        for e in self.ordered() {
            let t0 = Instant::now();
            let (kind, doc, conclusion, report) = match &e.parsed {
                Ok(Script::Kernel(s)) => ("kernel", s.doc.clone(), s.conclusion.to_string(), lib.add_kernel(s.clone(), &Signature::standard())),
                Ok(Script::Meta(m)) => ("meta", m.doc.clone(), m.conclusion.to_string(), lib.add_meta(m.clone())),
                Err(err) => ("?", String::new(), String::new(), parse_failure(&e.name(), err)),
            };
            rows.push(Row { file: e.file.clone(), kind, doc, conclusion, report, elapsed: t0.elapsed() });
        }
        (ProveAllReport { rows, elapsed: start.elapsed() }, lib)
    }

    /// Checks `target` after the scripts it depends on, transitively.
    /// Dependencies are looked up in `self`.
    pub fn check_with_dependencies(&self, target: &Script) -> CheckReport {
        match target {
            Script::Kernel(s) => crate::kernel::check_script(s, &Signature::standard()),
            Script::Meta(m) => {
                let mut lib = Library::new();
                let mut seen = BTreeSet::new();
                self.load_deps(m, &mut lib, &mut seen);
                crate::meta::check_meta_script(m, &lib)
            }
        }
    }

    fn load_deps(&self, m: &MetaScript, lib: &mut Library, seen: &mut BTreeSet<String>) {
        let (kernel, meta) = m.dependencies();
        for k in kernel {
            if !seen.insert(k.clone()) {
                continue;
            }
            if let Some(Entry { parsed: Ok(Script::Kernel(s)), .. }) = self.get(&k) {
                lib.add_kernel(s.clone(), &Signature::standard());
            }
        }
        for d in meta {
            if !seen.insert(d.clone()) {
                continue;
            }
            if let Some(Entry { parsed: Ok(Script::Meta(dm)), .. }) = self.get(&d) {
                self.load_deps(dm, lib, seen);
                lib.add_meta(dm.clone());
            }
        }
    }
}

/// Formulas deeper than this are left out of the golden code table: every
/// pairing level roughly doubles the length of a code.
pub const MAX_GOLDEN_DEPTH: usize = 5;

impl Corpus {
    /// Distinct step formulas and conclusions of the kernel scripts, in
    /// order of appearance, up to [`MAX_GOLDEN_DEPTH`].
    pub fn golden_formulas(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in &self.entries {
            let Ok(Script::Kernel(s)) = &e.parsed else { continue };
            for f in s.steps.iter().map(|st| &st.formula).chain([&s.conclusion]) {
                if f.depth() <= MAX_GOLDEN_DEPTH && seen.insert(f.to_string()) {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    /// `<printed formula> TAB <decimal code>` per golden formula.
    pub fn golden_codes(&self) -> String {
        self.golden_formulas().iter().map(|f| format!("{f}\t{}\n", encode_formula(f))).collect()
    }
}

pub fn parse_failure(name: &str, e: &ScriptParseError) -> CheckReport {
    CheckReport {
        script: name.to_string(),
        verdict: Verdict::Rejected,
        failure: Some(StepFailure { step: 0, line: e.line, reason: format!("parse error: {}", e.msg) }),
        census: BTreeMap::new(),
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub file: String,
    pub kind: &'static str,
    pub doc: String,
    pub conclusion: String,
    pub report: CheckReport,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct ProveAllReport {
    pub rows: Vec<Row>,
    pub elapsed: Duration,
}

impl ProveAllReport {
    pub fn all_accepted(&self) -> bool {
        self.rows.iter().all(|r| r.report.accepted())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.report.accepted())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "all_accepted": self.all_accepted(),
            "scripts": self.rows.iter().map(|r| {
                let mut v = r.report.to_json();
                v["file"] = r.file.clone().into();
                v["kind"] = r.kind.into();
                v["doc"] = r.doc.clone().into();
                v["conclusion"] = r.conclusion.clone().into();
                v
            }).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ProveAllReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().map(|r| r.report.script.len()).max().unwrap_or(0);
        for r in &self.rows {
            let verdict = if r.report.accepted() { "accepted" } else { "REJECTED" };
            writeln!(f, "{verdict:<8}  {:<6} {:<width$}  {}", r.kind, r.report.script, r.doc)?;
            if !r.conclusion.is_empty() {
                writeln!(f, "{:18}{:width$}  ⊢ {}", "", "", r.conclusion)?;
            }
            if let Some(e) = &r.report.failure {
                writeln!(f, "{:18}step {} (line {}): {}", "", e.step, e.line, e.reason)?;
            }
        }
        let ok = self.rows.iter().filter(|r| r.report.accepted()).count();
        write!(f, "{ok}/{} scripts accepted", self.rows.len())
    }
}
