use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use textfst_core::pipelines::split_symbols;
use textfst_core::rewrite::{apply, compile_ruleset, parse_ruleset, render_symbol};
use textfst_core::Wfst;

use super::{data, read_text, Failure, Outcome};
use crate::formats::fst::{fmt_weight, read_fst, write_compiled, MAGIC};

#[derive(Debug, Subcommand)]
pub enum RuleCmd {
    /// Checks a rule file and lists its alphabet, macros and rules.
    Parse { rules: PathBuf },
    /// The rules composed into one transducer.
    Compile { rules: PathBuf },
    /// Every rewrite of each input line, with its cost in bits.
    Apply {
        /// A rule file or a compiled transducer.
        rules: PathBuf,
        /// One string per line; `{Name}` is a single symbol.
        input: PathBuf,
    },
}

/// Symbols in the notation of [`split_symbols`]: multi-character symbols
/// in braces.
pub(crate) fn notation(syms: &[String]) -> String {
    syms.iter().map(|s| if s.chars().count() == 1 { s.clone() } else { format!("{{{s}}}") }).collect()
}

/// A rule file compiled on the fly, or an already compiled machine.
pub(crate) fn load_rules(path: &Path) -> Result<Wfst, Failure> {
    let text = read_text(path)?;
    if text.starts_with(MAGIC) {
        return read_fst(&text, None, None, None).map_err(|e| Failure::Data(anyhow::anyhow!("{}:{}: {}", path.display(), e.line, e.msg)));
    }
    let rs = parse_ruleset(&text).map_err(|e| Failure::Data(anyhow::anyhow!("{}: {e}", path.display())))?;
    data(compile_ruleset(&rs))
}

pub fn run(c: &RuleCmd) -> Outcome {
    match c {
        RuleCmd::Parse { rules } => {
            let text = read_text(rules)?;
            let rs = parse_ruleset(&text).map_err(|e| Failure::Data(anyhow::anyhow!("{}: {e}", rules.display())))?;
            let mut out = String::new();
            let alphabet: Vec<String> = rs.alphabet().iter().map(|s| render_symbol(s)).collect();
            let _ = writeln!(out, "alphabet\t{}", alphabet.join(" "));
            for name in &rs.macro_order {
                let members: Vec<String> = rs.macros[name].iter().map(|s| render_symbol(s)).collect();
                let _ = writeln!(out, "macro\t{name}\t{}", members.join(" "));
            }
            for (i, r) in rs.rules.iter().enumerate() {
                let part = if i < rs.prolog_end { "prolog" } else { "rule" };
                let _ = writeln!(out, "{part}\t{r}");
            }
            Ok(out)
        }
        RuleCmd::Compile { rules } => Ok(write_compiled(&load_rules(rules)?)),
        RuleCmd::Apply { rules, input } => {
            let fst = load_rules(rules)?;
            let mut out = String::new();
            for line in read_text(input)?.lines().filter(|l| !l.trim().is_empty()) {
                let syms = data(split_symbols(line))?;
                let results = data(apply(&fst, &syms))?;
                let mut ranked: Vec<(Vec<String>, f64)> = results.into_iter().collect();
                ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
                if ranked.is_empty() {
                    let _ = writeln!(out, "{line}\t-");
                }
                for (o, w) in ranked {
                    let _ = writeln!(out, "{line}\t{}\t{}", notation(&o), fmt_weight(w / std::f64::consts::LN_2));
                }
            }
            Ok(out)
        }
    }
}
