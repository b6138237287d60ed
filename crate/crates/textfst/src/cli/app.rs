use std::fmt::Write;
use std::path::PathBuf;

use clap::Subcommand;
use textfst_core::cart::{FeatureKind, Value};
use textfst_core::pipelines::{
    accent_word, align_phonemes, analyze_morph, build_dictionary_fst, eos_features, eos_schema, pronounce, recognize, segmentations, split_symbols, string_set, BoundaryProbs, EditCosts,
};
use textfst_core::{Semiring, SymbolTable};

use super::fst::load_fst;
use super::rule::{load_rules, notation};
use super::{data, load, read_text, token_lines, Outcome};
use crate::formats::app::{read_abbrevs, read_edit_costs, read_forms, read_lexicon, read_morph_grammar, read_pairs, read_words};
use crate::formats::fst::{fmt_weight, write_compiled};

/// CSV-safe names for the punctuation categories.
fn punct_name(p: &str) -> &str {
    match p {
        "," => "comma",
        ";" => "semicolon",
        ":" => "colon",
        "\"" => "dquote",
        "'" => "squote",
        ")" => "rparen",
        "!" => "bang",
        "?" => "question",
        p => p,
    }
}

/// A period that can end a sentence: nothing alphanumeric follows it.
fn is_candidate(tok: &str) -> bool {
    tok.rfind('.').is_some_and(|i| !tok[i + 1..].chars().any(char::is_alphanumeric))
}

/// App costs are shown to two decimals.
fn cost(w: f64) -> String {
    format!("{w:.2}")
}

#[derive(Debug, Subcommand)]
pub enum AppCmd {
    /// Compiles a word lexicon into a dictionary transducer.
    Dict {
        lexicon: PathBuf,
        /// The value column holds costs rather than probabilities.
        #[arg(long)]
        costs: bool,
    },
    /// Cheapest segmentation of each line into dictionary words.
    Segment {
        dict: PathBuf,
        sentences: PathBuf,
        /// Cost of reading an uncovered character as a word by itself.
        #[arg(long)]
        fallback: Option<f64>,
        /// Segmentations per line.
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
    },
    /// Pronunciations of each word through lexicon, orthography and
    /// pronunciation stages.
    Pronounce {
        /// Underlying forms, one per line.
        #[arg(long)]
        lexicon: PathBuf,
        /// Orthographic rules or their compiled transducer.
        #[arg(long)]
        orthography: PathBuf,
        /// Pronunciation rules or their compiled transducer.
        #[arg(long)]
        pronunciation: PathBuf,
        words: PathBuf,
    },
    /// Best word string of a phone lattice under a dictionary and a
    /// language model.
    Recognize { lattice: PathBuf, dict: PathBuf, lm: PathBuf },
    /// Cheapest alignment of each phoneme/phone pair.
    Align {
        pairs: PathBuf,
        /// Edit costs; all 1 by default.
        #[arg(long)]
        costs: Option<PathBuf>,
    },
    /// Boundary features of every period token, labeled from the line
    /// breaks, as a dataset for `tree train`.
    EosFeatures {
        /// One sentence per line.
        text: PathBuf,
        #[arg(long)]
        abbrevs: PathBuf,
        /// Sentences for the end/begin probabilities; defaults to the text.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Accent decision and deciding clause per word.
    Accent { words: PathBuf },
    /// Morphological analyses of each word, most probable first.
    Morph { grammar: PathBuf, words: PathBuf },
}

pub fn run(c: &AppCmd) -> Outcome {
    let mut out = String::new();
    match c {
        AppCmd::Dict { lexicon, costs } => {
            let lex = load(lexicon, |t| read_lexicon(t, *costs))?;
            return Ok(write_compiled(&data(build_dictionary_fst(&lex))?));
        }
        AppCmd::Segment { dict, sentences, fallback, n } => {
            let d = load_fst(dict, Some(Semiring::Tropical))?;
            for line in read_text(sentences)?.lines().map(str::trim).filter(|l| !l.is_empty()) {
                for (words, w) in data(segmentations(&d, line, *fallback, *n))? {
                    let _ = writeln!(out, "{}\t{}", words.join(" "), cost(w));
                }
            }
        }
        AppCmd::Pronounce { lexicon, orthography, pronunciation, words } => {
            let forms = load(lexicon, read_forms)?;
            let syms = SymbolTable::from_symbols(forms.iter().flat_map(|f| &f.0));
            let lex = data(string_set(Semiring::Tropical, &syms, &forms))?;
            let (o, p) = (load_rules(orthography)?, load_rules(pronunciation)?);
            for line in read_text(words)?.lines().map(str::trim).filter(|l| !l.is_empty()) {
                let word = data(split_symbols(line))?;
                let prons = data(pronounce(&lex, &o, &p, &word))?;
                if prons.is_empty() {
                    let _ = writeln!(out, "{line}\t-");
                }
                for (pron, w) in prons {
                    let _ = writeln!(out, "{line}\t{}\t{}", notation(&pron), cost(w));
                }
            }
        }
        AppCmd::Recognize { lattice, dict, lm } => {
            let sr = Some(Semiring::Tropical);
            let r = data(recognize(&load_fst(lattice, sr)?, &load_fst(dict, sr)?, &load_fst(lm, sr)?))?;
            let _ = writeln!(out, "{}\t{}\t{}", r.words.join(" "), r.phones.join(" "), cost(r.cost));
        }
        AppCmd::Align { pairs, costs } => {
            let costs = match costs {
                Some(p) => load(p, read_edit_costs)?,
                None => EditCosts::default(),
            };
            for (i, (a, b)) in load(pairs, read_pairs)?.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let al = data(align_phonemes(a, b, &costs))?;
                for step in &al.steps {
                    let _ = writeln!(out, "{step}");
                }
                let _ = writeln!(out, "cost\t{}", cost(al.cost));
            }
        }
        AppCmd::EosFeatures { text, abbrevs, corpus } => {
            let abbrevs = load(abbrevs, read_abbrevs)?;
            let sentences = token_lines(&read_text(text)?);
            let probs = match corpus {
                Some(p) => BoundaryProbs::estimate(&token_lines(&read_text(p)?)),
                None => BoundaryProbs::estimate(&sentences),
            };
            let schema = eos_schema();
            let header: Vec<String> = schema
                .iter()
                .map(|f| match &f.kind {
                    FeatureKind::Continuous => format!("{}:num", f.name),
                    FeatureKind::Categorical(vs) => {
                        let vs: Vec<&str> = vs.iter().map(|v| punct_name(v)).collect();
                        format!("{}:cat={}", f.name, vs.join("|"))
                    }
                })
                .collect();
            let _ = writeln!(out, "{},boundary:cat=no|yes", header.join(","));
            let mut tokens = Vec::new();
            let mut ends = Vec::new();
            for s in &sentences {
                tokens.extend(s.iter().cloned());
                ends.push(tokens.len() - 1);
            }
            for i in (0..tokens.len()).filter(|&i| is_candidate(&tokens[i])) {
                let row = data(eos_features(&tokens, i, &abbrevs, &probs))?;
                let cells: Vec<String> = row
                    .iter()
                    .zip(&schema)
                    .map(|(v, f)| match (v, &f.kind) {
                        (Value::Num(x), _) => fmt_weight(*x),
                        (Value::Cat(c), FeatureKind::Categorical(vs)) => punct_name(&vs[*c]).to_string(),
                        (Value::Cat(c), FeatureKind::Continuous) => c.to_string(),
                    })
                    .collect();
                let label = if ends.contains(&i) { "yes" } else { "no" };
                let _ = writeln!(out, "{},{label}", cells.join(","));
            }
        }
        AppCmd::Accent { words } => {
            for w in load(words, read_words)? {
                let (a, clause) = accent_word(&w);
                let _ = writeln!(out, "{}\t{a}\t{clause}", w.token);
            }
        }
        AppCmd::Morph { grammar, words } => {
            let g = load(grammar, read_morph_grammar)?;
            for w in read_text(words)?.split_whitespace() {
                let analyses = data(analyze_morph(&g, w))?;
                if analyses.is_empty() {
                    let _ = writeln!(out, "{w}\t-");
                }
                for (d, p) in analyses {
                    let _ = writeln!(out, "{w}\t{p:e}\t{d}");
                }
            }
        }
    }
    Ok(out)
}
