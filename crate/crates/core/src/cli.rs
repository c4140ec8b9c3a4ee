//! Command-line front end. [`run`] returns the process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::coding::{self, GodelCode, Syntax};
use crate::corpus::{parse_any, Corpus};
use crate::gl::{self, BruteResult, GlVerdict};
use crate::syntax::{parse_formula, parse_term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "provkit", version, about = "Proof kernel and GL oracle for arithmetized Yablo sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check one kernel (.prf) or meta (.mprf) script.
    Check {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check every script of the bundled corpus, or of a directory.
    ProveAll {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Decide a propositional modal formula in GL.
    Gl {
        formula: String,
        /// Tableau node budget.
        #[arg(long, default_value_t = gl::DEFAULT_BUDGET)]
        budget: usize,
        /// Also search frames of up to K worlds and compare.
        #[arg(long, value_name = "K")]
        brute: Option<usize>,
    },
    /// Goedel coding utilities.
    Code {
        #[command(subcommand)]
        op: CodeOp,
    },
}

#[derive(Subcommand, Debug)]
enum CodeOp {
    /// Print the code of a formula or term.
    Encode { text: String },
    /// Print the formula or term with the given code.
    Decode { code: String },
    /// Print the golden code table of the bundled corpus.
    Golden,
    /// Print the fixed point of a template: `diag <template> <hole> <p1,p2,..>`.
    Diag {
        template: String,
        hole: String,
        #[arg(default_value = "")]
        params: String,
    },
}

pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Check { path, json } => check(&path, json, out),
        Command::ProveAll { dir, json } => prove_all(dir.as_deref(), json, out, err),
        Command::Gl { formula, budget, brute } => decide(&formula, budget, brute, out),
        Command::Code { op } => code(op, out),
    };
    match result {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

type CmdResult = Result<i32, String>;

fn verdict_code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

fn check(path: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let script = parse_any(&src).map_err(|e| format!("{}: {e}", path.display()))?;
    // dependencies come from the script's directory first, then the bundled corpus
    let mut corpus = Corpus::bundled();
    if let Some(dir) = path.parent().filter(|d| d.is_dir() || d.as_os_str().is_empty()) {
        let dir = if dir.as_os_str().is_empty() { Path::new(".") } else { dir };
        if let Ok(local) = Corpus::from_dir(dir) {
            corpus = corpus.overlay(local);
        }
    }
    let report = corpus.check_with_dependencies(&script);
    if json {
        writeln!(out, "{}", report.to_json()).map_err(|e| e.to_string())?;
    } else {
        writeln!(out, "{report}").map_err(|e| e.to_string())?;
    }
    Ok(verdict_code(report.accepted()))
}

fn prove_all(dir: Option<&Path>, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let corpus = match dir {
        Some(d) => Corpus::from_dir(d).map_err(|e| format!("{}: {e}", d.display()))?,
        None => Corpus::bundled(),
    };
    if corpus.entries().is_empty() {
        return Err("no scripts found".into());
    }
    let report = corpus.prove_all();
    // timing goes to stderr so that stdout is reproducible
    let _ = writeln!(err, "checked in {:.2?}", report.elapsed);
    if json {
        writeln!(out, "{}", report.to_json()).map_err(|e| e.to_string())?;
    } else {
        writeln!(out, "{report}").map_err(|e| e.to_string())?;
    }
    Ok(verdict_code(report.all_accepted()))
}

fn decide(text: &str, budget: usize, brute: Option<usize>, out: &mut dyn Write) -> CmdResult {
    let f = gl::parse_modal(text).map_err(|e| e.to_string())?;
    let verdict = gl::decide_gl_with_budget(&f, budget).map_err(|e| e.to_string())?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| e.to_string());
    match &verdict {
        GlVerdict::Valid(trace) => w(out, format!("Valid ({} rule applications)", trace.len()))?,
        GlVerdict::Invalid(cm) => {
            w(out, "Invalid".into())?;
            let v = serde_json::json!({ "world": cm.world, "model": cm.model.to_json() });
            w(out, v.to_string())?;
        }
    }
    if let Some(k) = brute {
        if k > gl::MAX_BRUTE_WORLDS {
            return Err(format!("--brute is limited to {} worlds", gl::MAX_BRUTE_WORLDS));
        }
        let found = matches!(gl::brute_force(&f, k), BruteResult::Invalid(_));
        w(out, format!("brute force up to {k} worlds: {}", if found { "countermodel found" } else { "no countermodel" }))?;
        if found && verdict.is_valid() {
            w(out, "warning: brute force refutes a formula the tableau proved".into())?;
        }
    }
    Ok(verdict_code(verdict.is_valid()))
}

fn code(op: CodeOp, out: &mut dyn Write) -> CmdResult {
    let line = match op {
        CodeOp::Encode { text } => {
            let syn = match parse_formula(&text) {
                Ok(f) => Syntax::Formula(f),
                Err(fe) => Syntax::Term(parse_term(&text).map_err(|_| fe.to_string())?),
            };
            coding::encode(&syn).to_string()
        }
        CodeOp::Decode { code } => {
            let c: GodelCode = code.parse().map_err(|e: coding::CodingError| e.to_string())?;
            coding::decode(&c).map_err(|e| e.to_string())?.to_string()
        }
        CodeOp::Golden => {
            write!(out, "{}", Corpus::bundled().golden_codes()).map_err(|e| e.to_string())?;
            return Ok(EXIT_OK);
        }
        CodeOp::Diag { template, hole, params } => {
            let t = parse_formula(&template).map_err(|e| e.to_string())?;
            let ps: Vec<String> = params.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect();
            coding::diagonalize(&t, &hole, &ps).map_err(|e| e.to_string())?.defining_biconditional.to_string()
        }
    };
    writeln!(out, "{line}").map_err(|e| e.to_string())?;
    Ok(EXIT_OK)
}
