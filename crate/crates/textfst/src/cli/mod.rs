//! Argument parsing and dispatch.
//!
//! Every command reads its inputs in the formats of [`crate::formats`] and
//! writes its result to standard output or the `-o` file. Exit status is 0
//! on success, 1 for a usage error and 2 when an input cannot be used.

mod app;
mod fst;
mod models;
mod ngram;
mod rule;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand};

use crate::formats::{ParseError, Parsed};

#[derive(Debug, Parser)]
#[command(name = "textfst", version, about = "Weighted finite-state text processing")]
pub struct Cli {
    /// Seed for randomized steps such as fold shuffling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result to this file instead of standard output.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Build, combine and search automata.
    #[command(subcommand)]
    Fst(fst::FstCmd),
    /// Count, train and apply n-gram models.
    #[command(subcommand)]
    Ngram(ngram::NgramCmd),
    /// Grow, prune and apply classification and regression trees.
    #[command(subcommand)]
    Tree(models::TreeCmd),
    /// Learn, prune and apply decision lists.
    #[command(subcommand)]
    Dlist(models::DlistCmd),
    /// Parse, compile and apply rewrite rules.
    #[command(subcommand)]
    Rule(rule::RuleCmd),
    /// Text-analysis pipelines built from the above.
    #[command(subcommand)]
    App(app::AppCmd),
}

/// Why a command failed; decides the exit status.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0:#}")]
    Data(#[from] anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

pub type Outcome = Result<String, Failure>;

/// Parses `args`, runs the command and reports on the given streams.
/// Returns the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let result = run(&cli).and_then(|out| match &cli.output {
        Some(p) => fs::write(p, out).with_context(|| format!("cannot write {}", p.display())).map_err(Failure::Data),
        None => stdout.write_all(out.as_bytes()).context("cannot write output").map_err(Failure::Data),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let kind = if e.code() == 1 { "usage" } else { "error" };
            let _ = writeln!(stderr, "textfst: {kind}: {e}");
            e.code()
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Group::Fst(c) => fst::run(c),
        Group::Ngram(c) => ngram::run(c),
        Group::Tree(c) => models::run_tree(c, cli.seed),
        Group::Dlist(c) => models::run_dlist(c),
        Group::Rule(c) => rule::run(c),
        Group::App(c) => app::run(c),
    }
}

/// File contents, `-` meaning standard input.
pub(crate) fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("cannot read standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Reads and parses a file, locating parse errors as `file:line`.
pub(crate) fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Parsed<T>) -> anyhow::Result<T> {
    let text = read_text(path)?;
    parse(&text).map_err(|ParseError { line, msg }| match line {
        0 => anyhow::anyhow!("{}: {msg}", path.display()),
        _ => anyhow::anyhow!("{}:{line}: {msg}", path.display()),
    })
}

/// Lifts a core error into a data failure.
pub(crate) fn data<T>(r: textfst_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Data(e.into()))
}

/// Whitespace-tokenized non-empty lines.
pub(crate) fn token_lines(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| l.split_whitespace().map(str::to_string).collect()).collect()
}

/// `name=value` argument pairs.
pub(crate) fn key_value(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("expected NAME=VALUE, got `{s}`")),
    }
}
