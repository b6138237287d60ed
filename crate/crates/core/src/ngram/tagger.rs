//! Trigram part-of-speech tagger.
//!
//! The best tag sequence maximizes `∏ p(wᵢ|tᵢ) p(tᵢ|tᵢ₋₂tᵢ₋₁)`. Dividing by
//! `p(wᵢ)` scales every candidate at position `i` by the same constant, so
//! it is left out. Positions before the sentence use the [`BOS`] tag; there
//! is no end-of-sentence transition.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::BOS;
use crate::error::{Error, Result};

/// What to do with a word absent from the lexical table.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum OovPolicy {
    #[default]
    Error,
    /// Every tag emits an unknown word with this probability.
    Uniform(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaggerModel {
    tags: Vec<String>,
    /// word → (tag index → p(word|tag)).
    lexical: BTreeMap<String, BTreeMap<usize, f64>>,
    /// (t₋₂, t₋₁, t) → p(t | t₋₂ t₋₁); index `tags.len()` is [`BOS`].
    transitions: BTreeMap<(usize, usize, usize), f64>,
    oov: OovPolicy,
}

impl TaggerModel {
    /// Builds a model from explicit tables. Missing entries are zero.
    pub fn new(
        tags: &[&str],
        lexical: &BTreeMap<(String, String), f64>,
        transitions: &BTreeMap<(String, String, String), f64>,
    ) -> Result<Self> {
        let tags: Vec<String> = tags.iter().map(|t| t.to_string()).collect();
        let index = |t: &str| -> Result<usize> {
            if t == BOS {
                return Ok(tags.len());
            }
            tags.iter().position(|x| x == t).ok_or_else(|| Error::UnknownSymbol(t.to_string()))
        };
        let mut lex: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
        for ((w, t), &p) in lexical {
            if p > 0.0 {
                lex.entry(w.clone()).or_default().insert(index(t)?, p);
            }
        }
        let mut tr = BTreeMap::new();
        for ((a, b, c), &p) in transitions {
            if p > 0.0 {
                tr.insert((index(a)?, index(b)?, index(c)?), p);
            }
        }
        Ok(TaggerModel { tags, lexical: lex, transitions: tr, oov: OovPolicy::Error })
    }

    /// Relative-frequency estimates from a tagged corpus. Transition counts
    /// get `smoothing` added to every cell; a context never seen with zero
    /// smoothing falls back to a uniform row.
    pub fn train<S: AsRef<str>>(corpus: &[Vec<(S, S)>], smoothing: f64) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let tagset: BTreeSet<&str> = corpus.iter().flatten().map(|(_, t)| t.as_ref()).collect();
        let tags: Vec<String> = tagset.iter().map(|t| t.to_string()).collect();
        let k = tags.len();
        let idx = |t: &str| tags.iter().position(|x| x == t).unwrap();
        let mut emit: BTreeMap<(String, usize), f64> = BTreeMap::new();
        let mut tag_total = vec![0.0; k];
        let mut tri: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        let mut ctx: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for sent in corpus {
            let (mut a, mut b) = (k, k);
            for (w, t) in sent {
                let t = idx(t.as_ref());
                *emit.entry((w.as_ref().to_string(), t)).or_insert(0.0) += 1.0;
                tag_total[t] += 1.0;
                *tri.entry((a, b, t)).or_insert(0.0) += 1.0;
                *ctx.entry((a, b)).or_insert(0.0) += 1.0;
                (a, b) = (b, t);
            }
        }
        let mut lexical: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
        for ((w, t), c) in emit {
            lexical.entry(w).or_default().insert(t, c / tag_total[t]);
        }
        let mut transitions = BTreeMap::new();
        for a in 0..=k {
            for b in 0..=k {
                // BOS can only be followed by BOS in the history slot.
                if a != k && b == k {
                    continue;
                }
                let total = ctx.get(&(a, b)).copied().unwrap_or(0.0);
                for t in 0..k {
                    let c = tri.get(&(a, b, t)).copied().unwrap_or(0.0);
                    let p = if total + smoothing * k as f64 > 0.0 {
                        (c + smoothing) / (total + smoothing * k as f64)
                    } else {
                        1.0 / k as f64
                    };
                    if p > 0.0 {
                        transitions.insert((a, b, t), p);
                    }
                }
            }
        }
        Ok(TaggerModel { tags, lexical, transitions, oov: OovPolicy::Error })
    }

    pub fn with_oov(mut self, oov: OovPolicy) -> Self {
        self.oov = oov;
        self
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    /// p(word | tag) from the lexical table; zero for unknown words or tags.
    pub fn lexical_prob(&self, word: &str, tag: &str) -> f64 {
        let Some(t) = self.tags.iter().position(|x| x == tag) else {
            return 0.0;
        };
        self.lexical.get(word).and_then(|m| m.get(&t)).copied().unwrap_or(0.0)
    }

    /// p(tag | t₋₂ t₋₁), with [`BOS`] allowed in the context.
    pub fn transition_prob(&self, t2: &str, t1: &str, tag: &str) -> f64 {
        let idx = |t: &str| if t == BOS { Some(self.tags.len()) } else { self.tags.iter().position(|x| x == t) };
        match (idx(t2), idx(t1), self.tags.iter().position(|x| x == tag)) {
            (Some(a), Some(b), Some(c)) => self.transitions.get(&(a, b, c)).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }

    fn emissions(&self, word: &str) -> Result<Vec<(usize, f64)>> {
        match (self.lexical.get(word), self.oov) {
            (Some(m), _) => Ok(m.iter().map(|(&t, &p)| (t, p)).collect()),
            (None, OovPolicy::Uniform(p)) => Ok((0..self.tags.len()).map(|t| (t, p)).collect()),
            (None, OovPolicy::Error) => Err(Error::OutOfVocabulary(word.to_string())),
        }
    }

    /// Best tag sequence and its natural-log score. Returns `None` for the
    /// sequence when every tagging has probability zero.
    pub fn viterbi_tag<S: AsRef<str>>(&self, sentence: &[S]) -> Result<Option<(Vec<String>, f64)>> {
        let bos = self.tags.len();
        // Trellis over (t₋₁, t) pairs, with back-pointers to t₋₂.
        let mut layer: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        layer.insert((bos, bos), 0.0);
        let mut back: Vec<BTreeMap<(usize, usize), usize>> = Vec::with_capacity(sentence.len());
        for w in sentence {
            let em = self.emissions(w.as_ref())?;
            let mut next: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            let mut ptr = BTreeMap::new();
            for (&(a, b), &score) in &layer {
                for &(t, pe) in &em {
                    let Some(&pt) = self.transitions.get(&(a, b, t)) else { continue };
                    let s = score + libm::log(pt) + libm::log(pe);
                    let better = next.get(&(b, t)).is_none_or(|&old| s > old);
                    if better {
                        next.insert((b, t), s);
                        ptr.insert((b, t), a);
                    }
                }
            }
            if next.is_empty() {
                return Ok(None);
            }
            layer = next;
            back.push(ptr);
        }
        let Some((&(mut b, mut t), &best)) = layer.iter().max_by(|x, y| x.1.total_cmp(y.1).then(y.0.cmp(x.0))) else {
            return Ok(None);
        };
        let mut seq = Vec::with_capacity(sentence.len());
        for ptr in back.iter().rev() {
            seq.push(t);
            let a = ptr[&(b, t)];
            (b, t) = (a, b);
        }
        seq.reverse();
        Ok(Some((seq.into_iter().map(|i| self.tags[i].clone()).collect(), best)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tagged(s: &str) -> Vec<(&str, &str)> {
        s.split_whitespace().map(|x| x.split_once('/').unwrap()).collect()
    }

    #[test]
    fn single_tag_word() {
        let m = TaggerModel::train(&[tagged("dog/NN")], 0.0).unwrap();
        assert_eq!(m.viterbi_tag(&["dog"]).unwrap().unwrap().0, ["NN"]);
        assert_eq!(m.viterbi_tag(&["cat"]), Err(Error::OutOfVocabulary("cat".into())));
        let m = m.with_oov(OovPolicy::Uniform(1e-3));
        assert_eq!(m.viterbi_tag(&["cat"]).unwrap().unwrap().0, ["NN"]);
    }

    #[test]
    fn modal_context_selects_verb_reading() {
        let corpus = [
            tagged("He/PRP will/MD table/VB the/DT motion/NN"),
            tagged("They/PRP will/MD run/VB the/DT race/NN"),
            tagged("She/PRP will/MD go/VB"),
            tagged("the/DT table/NN is/VBZ big/JJ"),
            tagged("a/DT table/NN and/CC a/DT chair/NN"),
        ];
        let m = TaggerModel::train(&corpus, 0.1).unwrap();
        let (tags, _) = m.viterbi_tag(&["He", "will", "table", "the", "motion"]).unwrap().unwrap();
        assert_eq!(tags, ["PRP", "MD", "VB", "DT", "NN"]);
    }
}
