//! Command-line driver.
//!
//! Exit codes: 0 success, satisfied or realizable; 1 violated or
//! unrealizable; 2 usage or input error; 3 unknown verdict.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::ast::{Specification, Variant};
use crate::diagnostic::Diagnostic;
use crate::elaborate::{elaborate, ElabOptions, ElaboratedSpec, DEFAULT_RECURSION_LIMIT};
use crate::export::{flat_formula, simplify, write_ast_dump, write_basic_tlsf, Dialect};
use crate::ltlf::{evaluate, parse_trace};
use crate::parser::{parse_spec_with, Mode, ParseOptions};
use crate::realizability::{solve, Outcome, DEFAULT_STATE_CAP};
use crate::semantics::{compose, strict_to_standard};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tlsf", version, about = "Check, convert, evaluate and solve TLSF specifications")]
pub struct Cli {
    /// Read the input in the basic format.
    #[arg(long, global = true)]
    pub basic: bool,

    /// Maximum nesting of function applications during elaboration.
    #[arg(long, global = true, default_value_t = DEFAULT_RECURSION_LIMIT)]
    pub recursion_limit: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and elaborate, reporting diagnostics.
    Check {
        file: PathBuf,
        #[arg(short = 'p', value_name = "NAME=VALUE", value_parser = parse_override)]
        params: Vec<(String, BigUint)>,
    },
    /// Print the specification in another format.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(short = 'p', value_name = "NAME=VALUE", value_parser = parse_override)]
        params: Vec<(String, BigUint)>,
        /// Fold constants before printing.
        #[arg(long)]
        simplify: bool,
        /// Rewrite a Strict specification to Standard semantics first.
        #[arg(long)]
        strict_to_standard: bool,
    },
    /// Evaluate the composed formula on a finite trace.
    Eval {
        file: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(short = 'p', value_name = "NAME=VALUE", value_parser = parse_override)]
        params: Vec<(String, BigUint)>,
    },
    /// Decide realizability of a Finite specification.
    Solve {
        file: PathBuf,
        #[arg(short = 'p', value_name = "NAME=VALUE", value_parser = parse_override)]
        params: Vec<(String, BigUint)>,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
        /// Write the winning strategy as a state table.
        #[arg(long)]
        strategy_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Basic TLSF, buses flattened, fully parenthesized.
    Basic,
    /// Composed formula, LTLf dialect.
    FlatFin,
    /// Composed formula, LTL dialect.
    FlatInf,
    /// JSON dump of the parsed specification.
    Ast,
}

fn parse_override(s: &str) -> Result<(String, BigUint), String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let name = name.trim();
    if name.is_empty() {
        return Err("empty parameter name".into());
    }
    let value = value
        .trim()
        .parse::<BigUint>()
        .map_err(|_| format!("`{value}` is not a natural number"))?;
    Ok((name.to_string(), value))
}

/// A failure that ends the command with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Session<'a> {
    basic: bool,
    recursion_limit: usize,
    err: &'a mut dyn Write,
}

impl Session<'_> {
    fn read(&self, path: &Path) -> Result<String, Failure> {
        std::fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
    }

    fn report(&mut self, file: &Path, source: &str, d: &Diagnostic) {
        let _ = writeln!(self.err, "{}", d.render(&file.display().to_string(), source));
    }

    fn parse(&mut self, file: &Path) -> Result<(Specification, String), Failure> {
        let source = self.read(file)?;
        let mode = if self.basic { Mode::Basic } else { Mode::Full };
        match parse_spec_with(&source, ParseOptions { mode }) {
            Ok(spec) => Ok((spec, source)),
            Err(diags) => {
                for d in &diags {
                    self.report(file, &source, d);
                }
                Err(Failure(String::new()))
            }
        }
    }

    fn elaborate(&mut self, file: &Path, params: &[(String, BigUint)]) -> Result<(Specification, ElaboratedSpec), Failure> {
        let (spec, source) = self.parse(file)?;
        let mut options = ElabOptions {
            recursion_limit: self.recursion_limit,
            ..ElabOptions::default()
        };
        for (name, value) in params {
            if options.overrides.insert(name.clone(), value.clone()).is_some() {
                return Err(Failure(format!("parameter `{name}` is given twice")));
            }
        }
        match elaborate(&spec, &options) {
            Ok(e) => Ok((spec, e)),
            Err(e) => {
                self.report(file, &source, &e.into());
                Err(Failure(String::new()))
            }
        }
    }
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let _ = writeln!(err, "{line}");
            return EXIT_ERROR;
        }
    };
    let mut session = Session {
        basic: cli.basic,
        recursion_limit: cli.recursion_limit,
        err,
    };
    match execute(cli.command, &mut session, out) {
        Ok(code) => code,
        Err(Failure(message)) => {
            if !message.is_empty() {
                let _ = writeln!(session.err, "error: {message}");
            }
            EXIT_ERROR
        }
    }
}

fn execute(command: Command, s: &mut Session, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check { file, params } => {
            let (_, e) = s.elaborate(&file, &params)?;
            let entries: usize = crate::ast::Section::ALL.iter().map(|&sec| e.buckets.get(sec).len()).sum();
            writeln!(
                out,
                "ok: {} inputs, {} outputs, {entries} property entries",
                e.inputs.len(),
                e.outputs.len()
            )?;
            Ok(EXIT_OK)
        }
        Command::Convert {
            file,
            format,
            params,
            simplify: fold,
            strict_to_standard: to_standard,
        } => {
            if format == Format::Ast && (fold || to_standard) {
                return Err(Failure("--format ast prints the parsed file and takes no rewriting flags".into()));
            }
            let (spec, mut e) = s.elaborate(&file, &params)?;
            if to_standard {
                if e.semantics.variant != Variant::Strict {
                    return Err(Failure("--strict-to-standard needs a Strict specification".into()));
                }
                e = strict_to_standard(&e)?;
            }
            let text = match format {
                Format::Ast => write_ast_dump(&spec)?,
                Format::Basic => {
                    if fold {
                        for section in crate::ast::Section::ALL {
                            for f in e.buckets.get_mut(section) {
                                *f = simplify(f);
                            }
                        }
                    }
                    write_basic_tlsf(&e)
                }
                Format::FlatFin | Format::FlatInf => {
                    let composed = compose(&e)?;
                    let f = if fold { simplify(&composed.formula) } else { composed.formula };
                    let dialect = if format == Format::FlatFin {
                        Dialect::Finite
                    } else {
                        Dialect::Infinite
                    };
                    let mut line = flat_formula(&f, dialect)?;
                    line.push('\n');
                    line
                }
            };
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Eval { file, trace, params } => {
            let (_, mut e) = s.elaborate(&file, &params)?;
            let text = s.read(&trace)?;
            let universe: Vec<String> = e.inputs.iter().chain(&e.outputs).cloned().collect();
            let word = parse_trace(&text, Some(&universe)).map_err(|err| Failure(format!("{}: {err}", trace.display())))?;
            if e.semantics.variant != Variant::Strict {
                e.semantics.variant = Variant::Finite;
            }
            let composed = compose(&e)?;
            if evaluate(&composed.formula, &word) {
                writeln!(out, "satisfied")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "violated")?;
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Solve {
            file,
            params,
            state_cap,
            strategy_out,
        } => {
            let (_, e) = s.elaborate(&file, &params)?;
            let verdict = solve(&e, state_cap)?;
            match verdict.outcome {
                Outcome::Realizable => {
                    writeln!(out, "realizable ({} states)", verdict.states)?;
                    if let (Some(path), Some(strategy)) = (strategy_out, &verdict.strategy) {
                        std::fs::write(&path, strategy.to_table())
                            .map_err(|err| Failure(format!("cannot write {}: {err}", path.display())))?;
                    }
                    Ok(EXIT_OK)
                }
                Outcome::Unrealizable => {
                    writeln!(out, "unrealizable ({} states)", verdict.states)?;
                    Ok(EXIT_NEGATIVE)
                }
                Outcome::Unknown => {
                    writeln!(out, "unknown (state cap of {state_cap} exceeded)")?;
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
    }
}
