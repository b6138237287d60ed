//! N-gram counting and estimation.
//!
//! Sentences are padded with `n − 1` copies of [`BOS`] and one [`EOS`]. Every
//! position after the start padding is a predicted position, and at each one
//! the grams of length `1..=n` ending there are counted. The start marker is
//! therefore never predicted, and the count of a history is the sum of the
//! counts of its one-symbol continuations.

mod backoff;
mod langid;
mod lmfsa;
mod tagger;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

pub use backoff::{BackoffLm, BackoffModel};
pub use langid::{langid_score, letter_corpus, mean_table_score, Averaging};
pub use lmfsa::compile_lm_fsa;
pub use tagger::{OovPolicy, TaggerModel};

use crate::error::{Error, Result};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
/// Token standing in for out-of-vocabulary words when declared.
pub const UNK: &str = "<unk>";

pub type Gram = Vec<String>;

#[derive(Clone, Debug, PartialEq)]
pub struct CountTable {
    order: usize,
    counts: BTreeMap<Gram, u64>,
    history: BTreeMap<Gram, u64>,
}

/// Pads and counts a corpus of token sequences.
pub fn count_ngrams<S: AsRef<str>>(corpus: &[Vec<S>], n: usize) -> Result<CountTable> {
    if n == 0 {
        return Err(Error::Invalid("n-gram order must be at least 1".into()));
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counts = BTreeMap::new();
    let mut history = BTreeMap::new();
    for sentence in corpus {
        let mut padded: Vec<String> = vec![BOS.to_string(); n - 1];
        padded.extend(sentence.iter().map(|t| t.as_ref().to_string()));
        padded.push(EOS.to_string());
        for i in n - 1..padded.len() {
            for len in 1..=n {
                let gram = padded[i + 1 - len..=i].to_vec();
                *history.entry(gram[..len - 1].to_vec()).or_insert(0) += 1;
                *counts.entry(gram).or_insert(0) += 1;
            }
        }
    }
    Ok(CountTable { order: n, counts, history })
}

impl CountTable {
    /// Rebuilds a table from explicit gram counts (e.g. read from a file).
    /// History counts are derived as sums over continuations.
    pub fn from_counts(order: usize, grams: impl IntoIterator<Item = (Gram, u64)>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("n-gram order must be at least 1".into()));
        }
        let mut counts = BTreeMap::new();
        let mut history = BTreeMap::new();
        for (g, c) in grams {
            if g.is_empty() || g.len() > order {
                return Err(Error::Invalid(alloc::format!("gram of length {} in order-{order} table", g.len())));
            }
            if c == 0 {
                continue;
            }
            *history.entry(g[..g.len() - 1].to_vec()).or_insert(0) += c;
            *counts.entry(g).or_insert(0) += c;
        }
        if counts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(CountTable { order, counts, history })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn count<S: AsRef<str>>(&self, gram: &[S]) -> u64 {
        let g: Gram = gram.iter().map(|s| s.as_ref().to_string()).collect();
        self.counts.get(&g).copied().unwrap_or(0)
    }

    /// Number of times `h` occurred as the history of a predicted symbol.
    pub fn history_count<S: AsRef<str>>(&self, h: &[S]) -> u64 {
        let g: Gram = h.iter().map(|s| s.as_ref().to_string()).collect();
        self.history.get(&g).copied().unwrap_or(0)
    }

    /// N: the number of full-length n-grams observed.
    pub fn total(&self) -> u64 {
        self.grams(self.order).map(|(_, c)| c).sum()
    }

    /// All grams of the given length with their counts.
    pub fn grams(&self, len: usize) -> impl Iterator<Item = (&Gram, u64)> + '_ {
        self.counts.iter().filter(move |(g, _)| g.len() == len).map(|(g, &c)| (g, c))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gram, u64)> + '_ {
        self.counts.iter().map(|(g, &c)| (g, c))
    }

    /// n_r for grams of length `len`: how many distinct grams occurred r times.
    pub fn count_of_counts(&self, len: usize) -> BTreeMap<u64, u64> {
        let mut n = BTreeMap::new();
        for (_, c) in self.grams(len) {
            *n.entry(c).or_insert(0) += 1;
        }
        n
    }

    /// Symbols that occur in predicted position (includes [`EOS`]).
    pub fn vocabulary(&self) -> BTreeSet<String> {
        self.grams(1).map(|(g, _)| g[0].clone()).collect()
    }
}

/// Result of a maximum-likelihood query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mle {
    pub prob: f64,
    /// Set when the conditional form was asked for a history never seen; the
    /// probability is then reported as 0.
    pub undefined_history: bool,
}

/// Joint form `c(gram) / N` for a full-length gram, conditional form
/// `c(gram) / c(history)` otherwise.
pub fn mle_prob<S: AsRef<str>>(t: &CountTable, gram: &[S], conditional: bool) -> Mle {
    let c = t.count(gram) as f64;
    if !conditional {
        let n = t.total() as f64;
        return Mle { prob: if n > 0.0 { c / n } else { 0.0 }, undefined_history: false };
    }
    if gram.is_empty() {
        return Mle { prob: 0.0, undefined_history: true };
    }
    let h = t.history_count(&gram[..gram.len() - 1]);
    if h == 0 {
        Mle { prob: 0.0, undefined_history: true }
    } else {
        Mle { prob: c / h as f64, undefined_history: false }
    }
}

/// Good-Turing adjusted count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Adjusted {
    pub count: f64,
    /// The formula could not be applied (`n_{c+1} = 0`, or it would raise the
    /// count) and the raw count was kept.
    pub fallback: bool,
}

/// Per-length Good-Turing tables: count → adjusted count, for `1 ≤ c ≤ k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodTuring {
    threshold: u64,
    tables: Vec<BTreeMap<u64, Adjusted>>,
}

pub fn good_turing_adjust(t: &CountTable, k: u64) -> GoodTuring {
    let mut tables = Vec::with_capacity(t.order);
    for len in 1..=t.order {
        let n = t.count_of_counts(len);
        let mut table = BTreeMap::new();
        for (&c, &nc) in n.iter().filter(|(&c, _)| (1..=k).contains(&c)) {
            let next = n.get(&(c + 1)).copied().unwrap_or(0);
            let star = (c + 1) as f64 * next as f64 / nc as f64;
            let adj = if next == 0 || star > c as f64 {
                Adjusted { count: c as f64, fallback: true }
            } else {
                Adjusted { count: star, fallback: false }
            };
            table.insert(c, adj);
        }
        tables.push(table);
    }
    GoodTuring { threshold: k, tables }
}

impl GoodTuring {
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// c* for a gram of length `len` seen `c` times.
    pub fn adjust(&self, len: usize, c: u64) -> Adjusted {
        if c == 0 || c > self.threshold {
            return Adjusted { count: c as f64, fallback: false };
        }
        self.tables
            .get(len - 1)
            .and_then(|t| t.get(&c).copied())
            .unwrap_or(Adjusted { count: c as f64, fallback: false })
    }
}

#[derive(Clone, Debug, PartialEq)]
struct HistoryInfo {
    alpha: f64,
    /// Multiplier on discounted probabilities of seen continuations; differs
    /// from one only when no mass can be passed down.
    scale: f64,
}

/// Katz back-off model over Good-Turing discounted counts.
#[derive(Clone, Debug, PartialEq)]
pub struct NGramModel {
    counts: CountTable,
    gt: GoodTuring,
    vocab: BTreeSet<String>,
    unk: bool,
    unigram_total: f64,
    /// Leftover unigram mass per unseen vocabulary item.
    unigram_unseen: f64,
    unigram_scale: f64,
    histories: BTreeMap<Gram, HistoryInfo>,
}

impl NGramModel {
    /// Estimates a model with discount threshold `k` (`0` disables
    /// discounting). With `unk` set, [`UNK`] joins the vocabulary and absorbs
    /// the unigram leftover mass; any unknown word is scored as [`UNK`].
    pub fn new(counts: CountTable, k: u64, unk: bool) -> Self {
        let gt = good_turing_adjust(&counts, k);
        let mut vocab = counts.vocabulary();
        if unk {
            vocab.insert(UNK.to_string());
        }
        let mut m = NGramModel {
            unigram_total: counts.grams(1).map(|(_, c)| c as f64).sum(),
            counts,
            gt,
            vocab,
            unk,
            unigram_unseen: 0.0,
            unigram_scale: 1.0,
            histories: BTreeMap::new(),
        };
        let seen: f64 = m.counts.grams(1).map(|(_, c)| m.gt.adjust(1, c).count).sum::<f64>() / m.unigram_total;
        let unseen = m.vocab.len() - m.counts.grams(1).count();
        if unseen > 0 && seen < 1.0 {
            m.unigram_unseen = (1.0 - seen) / unseen as f64;
        } else {
            m.unigram_scale = 1.0 / seen;
        }
        for len in 2..=m.counts.order {
            let mut by_history: BTreeMap<Gram, Vec<(String, u64)>> = BTreeMap::new();
            for (g, c) in m.counts.grams(len) {
                by_history.entry(g[..len - 1].to_vec()).or_default().push((g[len - 1].clone(), c));
            }
            for (h, conts) in by_history {
                let hc = m.counts.history_count(&h) as f64;
                let seen: f64 = conts.iter().map(|(_, c)| m.gt.adjust(len, *c).count).sum::<f64>() / hc;
                let lower: f64 = conts.iter().map(|(w, _)| m.prob_known(w, &h[1..])).sum();
                let info = if 1.0 - lower > 1e-12 {
                    HistoryInfo { alpha: ((1.0 - seen) / (1.0 - lower)).max(0.0), scale: 1.0 }
                } else {
                    HistoryInfo { alpha: 0.0, scale: 1.0 / seen }
                };
                m.histories.insert(h, info);
            }
        }
        m
    }

    /// Counts and estimates in one step.
    pub fn train<S: AsRef<str>>(corpus: &[Vec<S>], order: usize, k: u64, unk: bool) -> Result<Self> {
        Ok(Self::new(count_ngrams(corpus, order)?, k, unk))
    }

    pub fn order(&self) -> usize {
        self.counts.order
    }

    pub fn counts(&self) -> &CountTable {
        &self.counts
    }

    /// Every predictable symbol, including [`EOS`] and, if declared, [`UNK`].
    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocab
    }

    pub fn has_unk(&self) -> bool {
        self.unk
    }

    fn normalize<'a>(&self, w: &'a str) -> Result<&'a str> {
        if self.vocab.contains(w) {
            Ok(w)
        } else if self.unk {
            Ok(UNK)
        } else {
            Err(Error::OutOfVocabulary(w.to_string()))
        }
    }

    /// P[w | h]. Only the last `n − 1` history symbols matter.
    pub fn katz_prob<S: AsRef<str>>(&self, w: &str, h: &[S]) -> Result<f64> {
        let w = self.normalize(w)?;
        let keep = h.len().saturating_sub(self.order() - 1);
        let h: Gram = h[keep..]
            .iter()
            .map(|s| {
                let s = s.as_ref();
                if s == BOS || self.vocab.contains(s) || !self.unk { s.to_string() } else { UNK.to_string() }
            })
            .collect();
        Ok(self.prob_known(w, &h))
    }

    fn prob_known(&self, w: &str, h: &[String]) -> f64 {
        if h.is_empty() {
            let c = self.count1(w);
            return if c > 0 {
                self.gt.adjust(1, c).count / self.unigram_total * self.unigram_scale
            } else {
                self.unigram_unseen
            };
        }
        let Some(info) = self.histories.get(h) else {
            return self.prob_known(w, &h[1..]);
        };
        let mut gram = h.to_vec();
        gram.push(w.to_string());
        let c = self.counts.counts.get(&gram).copied().unwrap_or(0);
        if c > 0 {
            let hc = self.counts.history[h] as f64;
            self.gt.adjust(gram.len(), c).count / hc * info.scale
        } else if info.alpha == 0.0 {
            0.0
        } else {
            info.alpha * self.prob_known(w, &h[1..])
        }
    }

    fn count1(&self, w: &str) -> u64 {
        self.counts.counts.get(&alloc::vec![w.to_string()]).copied().unwrap_or(0)
    }

    /// Back-off weight α(h); one for histories never observed.
    pub fn backoff<S: AsRef<str>>(&self, h: &[S]) -> f64 {
        let h: Gram = h.iter().map(|s| s.as_ref().to_string()).collect();
        self.histories.get(&h).map_or(1.0, |i| i.alpha)
    }

    /// Histories (length ≥ 1) that have observed continuations.
    pub fn histories(&self) -> impl Iterator<Item = &Gram> + '_ {
        self.histories.keys()
    }

    /// Natural-log probability of a sentence, including the end marker.
    pub fn score_sequence<S: AsRef<str>>(&self, seq: &[S]) -> Result<f64> {
        let n = self.order();
        let mut ctx: Vec<String> = vec![BOS.to_string(); n - 1];
        let mut total = 0.0;
        for w in seq.iter().map(|s| s.as_ref()).chain(core::iter::once(EOS)) {
            total += libm::log(self.katz_prob(w, &ctx)?);
            ctx.push(self.normalize(w)?.to_string());
            if ctx.len() > n - 1 {
                ctx.remove(0);
            }
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn bigram_counts_with_padding() {
        let t = count_ngrams(&[toks("a b a")], 2).unwrap();
        assert_eq!(t.count(&["a", "b"]), 1);
        assert_eq!(t.count(&["b", "a"]), 1);
        assert_eq!(t.count(&["<s>", "a"]), 1);
        assert_eq!(t.count(&["a", "</s>"]), 1);
        assert_eq!(t.total(), 4);
        assert_eq!(t.history_count(&["a"]), 2);
    }

    #[test]
    fn unigram_counts_include_end_marker() {
        let t = count_ngrams(&[toks("a")], 1).unwrap();
        assert_eq!(t.total(), 2);
        assert_eq!(t.count(&["</s>"]), 1);
        assert!(count_ngrams::<&str>(&[], 1).is_err());
    }

    #[test]
    fn mle_forms() {
        let t = count_ngrams(&[toks("a b"), toks("a c")], 2).unwrap();
        assert_eq!(mle_prob(&t, &["a", "b"], true).prob, 0.5);
        assert_eq!(mle_prob(&t, &["b", "a"], true).prob, 0.0);
        assert!(mle_prob(&t, &["z", "a"], true).undefined_history);
        let u = CountTable::from_counts(1, [(vec!["x".to_string()], 5), (vec!["y".to_string()], 15)]).unwrap();
        assert_eq!(mle_prob(&u, &["x"], false).prob, 0.25);
    }

    #[test]
    fn good_turing_spot_values() {
        let grams = [("a", 1), ("b", 1), ("c", 1), ("d", 2), ("e", 7)];
        let t = CountTable::from_counts(1, grams.iter().map(|(g, c)| (vec![g.to_string()], *c))).unwrap();
        let gt = good_turing_adjust(&t, 5);
        assert_eq!(gt.adjust(1, 1), Adjusted { count: 2.0 / 3.0, fallback: false });
        assert_eq!(gt.adjust(1, 7).count, 7.0);
        // n_3 = 0: the count of 2 keeps its raw value.
        assert_eq!(gt.adjust(1, 2), Adjusted { count: 2.0, fallback: true });
    }

    #[test]
    fn katz_sums_to_one_on_small_corpus() {
        let corpus = [toks("a b c"), toks("a b"), toks("b c a"), toks("c c")];
        let m = NGramModel::train(&corpus, 2, 5, true).unwrap();
        let mut hs: Vec<Gram> = m.histories().cloned().collect();
        hs.push(Vec::new());
        for h in hs {
            let s: f64 = m.vocabulary().iter().map(|w| m.katz_prob(w, &h).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-9, "{h:?}: {s}");
        }
    }

    #[test]
    fn oov_without_unk_is_error() {
        let m = NGramModel::train(&[toks("a b")], 2, 5, false).unwrap();
        assert_eq!(m.katz_prob("q", &["a"]), Err(Error::OutOfVocabulary("q".into())));
        let m = NGramModel::train(&[toks("a b")], 2, 5, true).unwrap();
        assert!(m.katz_prob("q", &["a"]).is_ok());
    }

    #[test]
    fn score_of_seen_bigrams_without_discount() {
        let m = NGramModel::train(&[toks("a b"), toks("a c")], 2, 0, false).unwrap();
        // P(a|<s>) = 1, P(b|a) = 1/2, P(</s>|b) = 1.
        let s = m.score_sequence(&["a", "b"]).unwrap();
        assert!((s - libm::log(0.5)).abs() < 1e-12);
    }
}
