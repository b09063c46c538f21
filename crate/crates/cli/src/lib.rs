//! The `cbc` command line: each subcommand reads a proof or term document,
//! writes its result to stdout and exits with 0 (accepted), 1 (rejected or
//! out of fuel) or 2 (malformed input).

use cbc_bounds::{synthesize_bound, synthesize_program, verify_bound, verify_program};
use cbc_checker::{classify, Class};
use cbc_format::{export_dot, parse_proof, parse_terms, serialize_proof, serialize_terms, Report};
use cbc_interp::{eval_pp, eval_proof, EvalConfig, EvalError, GuardMode, PPProgram, Term};
use cbc_kernel::{validate_graph, Allowed, ProofGraph, Value};
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const ACCEPTED: u8 = 0;
pub const REJECTED: u8 = 1;
pub const INPUT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "cbc", version, about = "Circular proofs for safe recursion")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Validate a proof and test membership in a system.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "cb")]
        system: System,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate the root of a proof.
    Eval {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        normals: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        safes: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
    },
    /// Evaluate a function of a term document.
    EvalPp {
        file: PathBuf,
        /// Defaults to the document's main function.
        #[arg(long)]
        function: Option<String>,
        #[arg(long, value_delimiter = ',')]
        normals: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        safes: Vec<String>,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
        #[arg(long, value_enum, default_value = "zero")]
        guard_mode: Guard,
    },
    /// Compile the main term of a term document into a proof.
    Compile {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "circular")]
        target: Target,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Translate a safe progressing proof into a guarded recursion program.
    Translate {
        file: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print the cycle normal form of a proof.
    Cyclenf {
        file: PathBuf,
        /// Also write it as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the growth bound of the main term.
    Bound { file: PathBuf },
    /// Check the growth bound on random inputs.
    VerifyBound {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a proof as DOT.
    ExportDot {
        file: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    Cb,
    Cnb,
    Bminus,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Derivation,
    Circular,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    Zero,
    Strict,
}

/// Exit code plus a message for stderr.
struct Fail(u8, String);

type Res = Result<u8, Fail>;

fn input<E: std::fmt::Display>(e: E) -> Fail {
    Fail(INPUT_ERROR, e.to_string())
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail(INPUT_ERROR, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail(INPUT_ERROR, format!("{}: {e}", path.display())))
}

fn load_proof(path: &Path) -> Result<ProofGraph, Fail> {
    let g = parse_proof(&read(path)?).map_err(|e| Fail(INPUT_ERROR, format!("{}: {e}", path.display())))?;
    validate_graph(&g, Allowed::DERIVATION).map_err(|errs| {
        let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        Fail(INPUT_ERROR, format!("{}: invalid proof: {}", path.display(), msgs.join("; ")))
    })?;
    Ok(g)
}

fn load_terms(path: &Path) -> Result<PPProgram, Fail> {
    parse_terms(&read(path)?).map_err(|e| Fail(INPUT_ERROR, format!("{}: {e}", path.display())))
}

fn values(xs: &[String]) -> Result<Vec<Value>, Fail> {
    xs.iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<Value>()
                .map_err(|_| Fail(INPUT_ERROR, format!("`{s}` is not a natural number")))
        })
        .collect()
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(input),
    }
}

fn eval_result(out: &mut dyn Write, r: Result<Value, EvalError>) -> Res {
    match r {
        Ok(v) => {
            writeln!(out, "{v}").map_err(input)?;
            Ok(ACCEPTED)
        }
        Err(EvalError::FuelExhausted) => {
            writeln!(out, "fuel-exhausted").map_err(input)?;
            Ok(REJECTED)
        }
        Err(e @ EvalError::GuardViolation { .. }) => Err(Fail(REJECTED, e.to_string())),
        Err(e) => Err(input(e)),
    }
}

/// Runs one command. Everything meant for stdout goes to `out`; errors go
/// to stderr.
pub fn run(cli: &Cli, out: &mut dyn Write) -> u8 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            eprintln!("cbc: {msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Res {
    match &cli.cmd {
        Cmd::Check { file, system, json } => check(file, *system, json.as_deref(), out),
        Cmd::Eval {
            file,
            normals,
            safes,
            fuel,
        } => {
            let g = load_proof(file)?;
            let (xs, ys) = (values(normals)?, values(safes)?);
            eval_result(out, eval_proof(&g, g.root, &xs, &ys, EvalConfig::with_fuel(*fuel)))
        }
        Cmd::EvalPp {
            file,
            function,
            normals,
            safes,
            fuel,
            guard_mode,
        } => {
            let p = load_terms(file)?;
            let (xs, ys) = (values(normals)?, values(safes)?);
            let mut cfg = EvalConfig::with_fuel(*fuel);
            cfg.guard_mode = match guard_mode {
                Guard::Zero => GuardMode::ReturnZero,
                Guard::Strict => GuardMode::StrictError,
            };
            let name = function.clone().unwrap_or_else(|| p.main.clone());
            eval_result(out, eval_pp(&p, &name, &cbc_interp::OracleEnv::new(), &xs, &ys, cfg))
        }
        Cmd::Compile { file, target, out: path } => {
            let p = load_terms(file)?;
            let t = p
                .main_term()
                .ok_or_else(|| Fail(INPUT_ERROR, "empty term document".into()))?;
            let r = match target {
                Target::Derivation => cbc_compile::term_to_derivation(t),
                Target::Circular => cbc_compile::compile_circular(t),
            };
            let mut g = r.map_err(|e| Fail(REJECTED, e.to_string()))?;
            g.name = p.main.clone();
            emit(out, path.as_deref(), &serialize_proof(&g))?;
            Ok(ACCEPTED)
        }
        Cmd::Translate { file, out: path } => {
            let g = load_proof(file)?;
            let p = cbc_translate::translate(&g).map_err(|e| Fail(REJECTED, e.to_string()))?;
            emit(out, path.as_deref(), &serialize_terms(&p))?;
            Ok(ACCEPTED)
        }
        Cmd::Cyclenf { file, dot } => {
            let g = load_proof(file)?;
            let cnf = cbc_transform::cycle_normal_form(&g);
            emit(out, None, &serialize_proof(&cnf.tree))?;
            if let Some(p) = dot {
                write_file(p, &export_dot(&cnf.tree))?;
            }
            Ok(ACCEPTED)
        }
        Cmd::Bound { file } => {
            let p = load_terms(file)?;
            let b = if p.defs.len() == 1 && !has_refs(&p) {
                synthesize_bound(p.main_term().unwrap())
            } else {
                synthesize_program(&p)
                    .into_iter()
                    .find(|(n, _)| *n == p.main)
                    .map(|(_, b)| b)
                    .ok_or_else(|| Fail(INPUT_ERROR, "empty term document".into()))?
            };
            writeln!(out, "e(n) = {}", b.e).map_err(input)?;
            writeln!(out, "d = {}", b.d).map_err(input)?;
            writeln!(out, "polynomial = {}", b.is_polynomial).map_err(input)?;
            Ok(ACCEPTED)
        }
        Cmd::VerifyBound {
            file,
            samples,
            seed,
            json,
        } => {
            let p = load_terms(file)?;
            let r = if p.defs.len() == 1 && !has_refs(&p) {
                verify_bound(&p.main, p.main_term().unwrap(), *samples, *seed)
            } else {
                verify_program(&p.main, &p, *samples, *seed)
            }
            .map_err(input)?;
            writeln!(
                out,
                "{}: {} samples, {} violations, slack {}..{}",
                r.name,
                r.samples,
                r.violations.len(),
                r.min_slack.as_deref().unwrap_or("-"),
                r.max_slack.as_deref().unwrap_or("-")
            )
            .map_err(input)?;
            if let Some(path) = json {
                write_file(path, &r.to_json())?;
            }
            Ok(if r.violations.is_empty() { ACCEPTED } else { REJECTED })
        }
        Cmd::ExportDot { file, out: path } => {
            let g = load_proof(file)?;
            emit(out, path.as_deref(), &export_dot(&g))?;
            Ok(ACCEPTED)
        }
    }
}

fn has_refs(p: &PPProgram) -> bool {
    fn go(t: &Term) -> bool {
        matches!(t, Term::Ref { .. }) || t.children().into_iter().any(|c| go(c))
    }
    p.defs.iter().any(|(_, t)| go(t))
}

fn check(file: &Path, system: System, json: Option<&Path>, out: &mut dyn Write) -> Res {
    let text = read(file)?;
    let g = parse_proof(&text).map_err(|e| Fail(INPUT_ERROR, format!("{}: {e}", file.display())))?;
    let name = g.name.clone();
    if let Err(errs) = validate_graph(&g, Allowed::CIRCULAR) {
        let diagnostics: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        if let Some(p) = json {
            let r = Report {
                name,
                valid: false,
                safe: false,
                left_leaning: false,
                progressing: None,
                class: Class::None.to_string(),
                diagnostics: diagnostics.clone(),
            };
            write_file(p, &r.to_json())?;
        }
        return Err(Fail(INPUT_ERROR, format!("invalid proof: {}", diagnostics.join("; "))));
    }
    let c = classify(&g);
    let accepted = match system {
        System::Bminus => true,
        System::Cnb => matches!(c.class, Class::CB | Class::CNB),
        System::Cb => c.class == Class::CB,
    };
    let reasons = if accepted { Vec::new() } else { c.reasons(system == System::Cb) };
    let report = Report {
        name,
        valid: true,
        safe: c.safe,
        left_leaning: c.left_leaning,
        progressing: c.progressing,
        class: c.class.to_string(),
        diagnostics: reasons.clone(),
    };
    writeln!(out, "{}: {}", if accepted { "accepted" } else { "rejected" }, report.class).map_err(input)?;
    for r in &reasons {
        writeln!(out, "  {r}").map_err(input)?;
    }
    if let Some(p) = json {
        write_file(p, &report.to_json())?;
    }
    Ok(if accepted { ACCEPTED } else { REJECTED })
}
