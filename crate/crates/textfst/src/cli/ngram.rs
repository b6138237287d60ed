use std::fmt::Write;
use std::path::PathBuf;

use clap::Subcommand;
use textfst_core::ngram::{compile_lm_fsa, count_ngrams, langid_score, letter_corpus, Averaging, BackoffLm, NGramModel, OovPolicy, TaggerModel};

use super::{data, key_value, load, read_text, token_lines, Failure, Outcome};
use crate::formats::fst::write_compiled;
use crate::formats::lm::{read_lm, write_counts, write_lm};

#[derive(Debug, Subcommand)]
pub enum NgramCmd {
    /// Padded n-gram counts of a corpus (one sentence per line).
    Count {
        corpus: PathBuf,
        #[arg(short = 'n', long, default_value_t = 3)]
        order: usize,
    },
    /// Katz back-off model of a corpus.
    Train {
        corpus: PathBuf,
        #[arg(short = 'n', long, default_value_t = 3)]
        order: usize,
        /// Counts above this are trusted as is.
        #[arg(short = 'k', long, default_value_t = 5)]
        k: u64,
        /// Map singletons to <unk>.
        #[arg(long)]
        unk: bool,
    },
    /// Natural-log probability of each sentence.
    Score { lm: PathBuf, corpus: PathBuf },
    /// The model as a weighted acceptor with back-off arcs.
    CompileFsa { lm: PathBuf },
    /// Ranks languages for each word (one per line) by letter n-grams.
    Langid {
        words: PathBuf,
        /// NAME=WORDLIST, repeated per language.
        #[arg(long = "lang", value_parser = key_value, required = true)]
        langs: Vec<(String, String)>,
        #[arg(short = 'n', long, default_value_t = 3)]
        order: usize,
        #[arg(short = 'k', long, default_value_t = 5)]
        k: u64,
        /// Average log probabilities instead of probabilities.
        #[arg(long)]
        log: bool,
        /// Map singleton letters to <unk> so unseen letters can be scored.
        #[arg(long)]
        unk: bool,
    },
    /// Most probable tag sequence per sentence.
    Tag {
        sentences: PathBuf,
        /// Training corpus of word/TAG tokens.
        #[arg(long)]
        train: PathBuf,
        /// Added to every transition count.
        #[arg(long, default_value_t = 0.0)]
        smoothing: f64,
        /// Emission probability for unknown words; without it they are errors.
        #[arg(long)]
        oov: Option<f64>,
    },
}

fn model(corpus: &[Vec<String>], order: usize, k: u64, unk: bool) -> Result<NGramModel, Failure> {
    data(NGramModel::train(corpus, order, k, unk))
}

pub fn run(c: &NgramCmd) -> Outcome {
    match c {
        NgramCmd::Count { corpus, order } => {
            let corpus = token_lines(&read_text(corpus)?);
            Ok(write_counts(&data(count_ngrams(&corpus, *order))?))
        }
        NgramCmd::Train { corpus, order, k, unk } => {
            let corpus = token_lines(&read_text(corpus)?);
            Ok(write_lm(&BackoffLm::from_model(&model(&corpus, *order, *k, *unk)?)))
        }
        NgramCmd::Score { lm, corpus } => {
            let lm = load(lm, read_lm)?;
            let mut out = String::new();
            let mut total = 0.0;
            for s in token_lines(&read_text(corpus)?) {
                let lp = data(lm.score_sequence(&s))?;
                total += lp;
                let _ = writeln!(out, "{lp:.6}\t{}", s.join(" "));
            }
            let _ = writeln!(out, "{total:.6}\ttotal");
            Ok(out)
        }
        NgramCmd::CompileFsa { lm } => Ok(write_compiled(&compile_lm_fsa(&load(lm, read_lm)?))),
        NgramCmd::Langid { words, langs, order, k, log, unk } => {
            let mut models = Vec::new();
            for (name, path) in langs {
                let list: Vec<String> = read_text(path.as_ref())?.split_whitespace().map(str::to_string).collect();
                models.push((name.clone(), model(&letter_corpus(&list), *order, *k, *unk)?));
            }
            let avg = if *log { Averaging::Log } else { Averaging::Arithmetic };
            let mut out = String::new();
            for w in read_text(words)?.split_whitespace() {
                let ranked = data(langid_score(&models, w, avg))?;
                let cols: Vec<String> = ranked.iter().map(|(l, s)| format!("{l} {s:.4}")).collect();
                let _ = writeln!(out, "{w}\t{}", cols.join("\t"));
            }
            Ok(out)
        }
        NgramCmd::Tag { sentences, train, smoothing, oov } => {
            let mut corpus = Vec::new();
            for (i, s) in token_lines(&read_text(train)?).into_iter().enumerate() {
                let mut pairs = Vec::new();
                for t in s {
                    let Some((w, tag)) = t.rsplit_once('/') else {
                        return Err(Failure::Data(anyhow::anyhow!("{}:{}: token `{t}` is not word/TAG", train.display(), i + 1)));
                    };
                    pairs.push((w.to_string(), tag.to_string()));
                }
                corpus.push(pairs);
            }
            let mut m = data(TaggerModel::train(&corpus, *smoothing))?;
            if let Some(p) = oov {
                m = m.with_oov(OovPolicy::Uniform(*p));
            }
            let mut out = String::new();
            for s in token_lines(&read_text(sentences)?) {
                match data(m.viterbi_tag(&s))? {
                    Some((tags, score)) => {
                        let tagged: Vec<String> = s.iter().zip(&tags).map(|(w, t)| format!("{w}/{t}")).collect();
                        let _ = writeln!(out, "{}\t{score:.6}", tagged.join(" "));
                    }
                    None => {
                        let _ = writeln!(out, "{}\t-inf", s.join(" "));
                    }
                }
            }
            Ok(out)
        }
    }
}
