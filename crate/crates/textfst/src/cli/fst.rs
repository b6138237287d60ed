use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use textfst_core::wfst::{self, ProjectSide};
use textfst_core::{Semiring, SymbolTable, Wfst};

use super::{data, load, Failure, Outcome};
use crate::formats::fst::{fmt_weight, read_fst, read_symbols, write_compiled, write_text};

#[derive(Debug, Args)]
pub struct SemiringArg {
    /// Semiring of text input: tropical, prob or boolean.
    #[arg(long, value_parser = parse_semiring)]
    pub semiring: Option<Semiring>,
}

fn parse_semiring(s: &str) -> Result<Semiring, String> {
    s.parse().map_err(|_| format!("unknown semiring `{s}`; use tropical, prob or boolean"))
}

#[derive(Debug, Subcommand)]
pub enum FstCmd {
    /// Text automaton to the self-describing compiled form.
    Compile {
        input: PathBuf,
        /// Input symbol table (`symbol id` lines).
        #[arg(long)]
        isymbols: Option<PathBuf>,
        /// Output symbol table; defaults to the input table when that is given.
        #[arg(long)]
        osymbols: Option<PathBuf>,
        #[command(flatten)]
        sr: SemiringArg,
    },
    /// Automaton as text.
    Print {
        input: PathBuf,
        #[command(flatten)]
        sr: SemiringArg,
    },
    /// Union of two machines.
    Sum { a: PathBuf, b: PathBuf, #[command(flatten)] sr: SemiringArg },
    /// Concatenation of two machines.
    Concat { a: PathBuf, b: PathBuf, #[command(flatten)] sr: SemiringArg },
    /// Kleene star.
    Closure { input: PathBuf, #[command(flatten)] sr: SemiringArg },
    /// Composition; the middle tapes are matched by symbol name.
    Compose { a: PathBuf, b: PathBuf, #[command(flatten)] sr: SemiringArg },
    /// Swaps the tapes.
    Invert { input: PathBuf, #[command(flatten)] sr: SemiringArg },
    /// Keeps one tape.
    Project {
        input: PathBuf,
        /// Keep the output tape instead of the input tape.
        #[arg(long)]
        output_side: bool,
        #[command(flatten)]
        sr: SemiringArg,
    },
    /// Drops states off every accepting path.
    Connect { input: PathBuf, #[command(flatten)] sr: SemiringArg },
    /// The n best paths, one per line: input, output, weight.
    Bestpath {
        input: PathBuf,
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        sr: SemiringArg,
    },
    /// Keeps paths within `beam` of the best (tropical, acyclic).
    Prune {
        input: PathBuf,
        #[arg(long)]
        beam: f64,
        #[command(flatten)]
        sr: SemiringArg,
    },
    /// Sum of all path weights of an acyclic machine.
    Total { input: PathBuf, #[command(flatten)] sr: SemiringArg },
}

pub(crate) fn load_fst(path: &Path, sr: Option<Semiring>) -> Result<Wfst, Failure> {
    Ok(load(path, |t| read_fst(t, sr, None, None))?)
}

/// Both machines over the union of their tables (`middle` unifies only the
/// composed tapes).
fn unify(a: &Wfst, b: &Wfst, middle: bool) -> Result<(Wfst, Wfst), Failure> {
    if middle {
        let mid = a.osyms().union(b.isyms());
        Ok((data(a.relabel(a.isyms(), &mid))?, data(b.relabel(&mid, b.osyms()))?))
    } else {
        let (i, o) = (a.isyms().union(b.isyms()), a.osyms().union(b.osyms()));
        Ok((data(a.relabel(&i, &o))?, data(b.relabel(&i, &o))?))
    }
}

pub(crate) fn path_line(f: &Wfst, p: &textfst_core::Path) -> String {
    format!("{}\t{}\t{}", p.input_symbols(f).join(" "), p.output_symbols(f).join(" "), fmt_weight(p.weight))
}

pub fn run(c: &FstCmd) -> Outcome {
    let one = |p: &PathBuf, sr: &SemiringArg| load_fst(p, sr.semiring);
    let two = |a: &PathBuf, b: &PathBuf, sr: &SemiringArg, middle: bool| -> Result<(Wfst, Wfst), Failure> { unify(&one(a, sr)?, &one(b, sr)?, middle) };
    let out = match c {
        FstCmd::Compile { input, isymbols, osymbols, sr } => {
            let table = |p: &Option<PathBuf>| -> Result<Option<SymbolTable>, Failure> { p.as_ref().map(|p| load(p, read_symbols)).transpose().map_err(Failure::Data) };
            let i = table(isymbols)?;
            let o = table(osymbols)?.or_else(|| i.clone());
            let f = load(input, |t| read_fst(t, sr.semiring, i.as_ref(), o.as_ref()))?;
            return Ok(write_compiled(&f));
        }
        FstCmd::Print { input, sr } => return Ok(write_text(&one(input, sr)?)),
        FstCmd::Sum { a, b, sr } => {
            let (a, b) = two(a, b, sr, false)?;
            data(wfst::sum(&a, &b))?
        }
        FstCmd::Concat { a, b, sr } => {
            let (a, b) = two(a, b, sr, false)?;
            data(wfst::concat(&a, &b))?
        }
        FstCmd::Closure { input, sr } => wfst::closure(&one(input, sr)?),
        FstCmd::Compose { a, b, sr } => {
            let (a, b) = two(a, b, sr, true)?;
            data(wfst::compose(&a, &b))?
        }
        FstCmd::Invert { input, sr } => wfst::invert(&one(input, sr)?),
        FstCmd::Project { input, output_side, sr } => {
            wfst::project(&one(input, sr)?, if *output_side { ProjectSide::Output } else { ProjectSide::Input })
        }
        FstCmd::Connect { input, sr } => wfst::connect(&one(input, sr)?),
        FstCmd::Bestpath { input, n, sr } => {
            let f = one(input, sr)?;
            let mut s = String::new();
            for p in data(wfst::shortest_path(&f, *n))? {
                let _ = writeln!(s, "{}", path_line(&f, &p));
            }
            return Ok(s);
        }
        FstCmd::Prune { input, beam, sr } => data(wfst::prune(&one(input, sr)?, *beam))?,
        FstCmd::Total { input, sr } => return Ok(format!("{}\n", fmt_weight(data(wfst::total_weight(&one(input, sr)?))?))),
    };
    Ok(write_compiled(&out))
}
