//! Explicit back-off tables: the listed-probability form of a model, as
//! written to and read from LM files.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Gram, NGramModel, BOS, EOS, UNK};
use crate::error::{Error, Result};

/// What the acceptor compiler needs from a back-off model.
pub trait BackoffModel {
    fn order(&self) -> usize;
    /// Predictable symbols, end marker included.
    fn predictable(&self) -> BTreeSet<String>;
    /// Histories (length ≥ 1) with explicitly listed continuations.
    fn history_list(&self) -> Vec<Gram>;
    /// Whether `g` (length ≥ 2) is listed rather than backed off.
    fn listed(&self, g: &[String]) -> bool;
    /// P[w | h] for a predictable `w` and an already normalized history.
    fn cond_prob(&self, w: &str, h: &[String]) -> f64;
    /// α(h); one for histories without listed continuations.
    fn alpha(&self, h: &[String]) -> f64;
}

impl BackoffModel for NGramModel {
    fn order(&self) -> usize {
        NGramModel::order(self)
    }
    fn predictable(&self) -> BTreeSet<String> {
        self.vocabulary().clone()
    }
    fn history_list(&self) -> Vec<Gram> {
        self.histories().cloned().collect()
    }
    fn listed(&self, g: &[String]) -> bool {
        self.counts().count(g) > 0
    }
    fn cond_prob(&self, w: &str, h: &[String]) -> f64 {
        self.katz_prob(w, h).unwrap_or(0.0)
    }
    fn alpha(&self, h: &[String]) -> f64 {
        self.backoff(h)
    }
}

/// Natural-log probabilities of listed grams and natural-log back-off
/// weights of histories. `P[w | h]` is the listed value of `h w` when there is
/// one and `α(h) · P[w | h′]` otherwise, `h′` dropping the oldest symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct BackoffLm {
    pub order: usize,
    pub logprobs: BTreeMap<Gram, f64>,
    pub backoffs: BTreeMap<Gram, f64>,
}

impl BackoffLm {
    pub fn new(order: usize, logprobs: BTreeMap<Gram, f64>, backoffs: BTreeMap<Gram, f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("order must be at least 1".into()));
        }
        if let Some(g) = logprobs.keys().chain(backoffs.keys()).find(|g| g.is_empty() || g.len() > order) {
            return Err(Error::Invalid(alloc::format!("gram of length {} in an order-{order} model", g.len())));
        }
        if !logprobs.keys().any(|g| g.len() == 1) {
            return Err(Error::EmptyCorpus);
        }
        Ok(BackoffLm { order, logprobs, backoffs })
    }

    /// The listed form of a trained model; it scores identically up to
    /// rounding.
    pub fn from_model(m: &NGramModel) -> Self {
        let mut logprobs = BTreeMap::new();
        for w in m.vocabulary() {
            let p = m.katz_prob::<&str>(w, &[]).unwrap_or(0.0);
            logprobs.insert(vec![w.clone()], libm::log(p));
        }
        for len in 2..=m.order() {
            for (g, _) in m.counts().grams(len) {
                let p = m.katz_prob(&g[len - 1], &g[..len - 1]).unwrap_or(0.0);
                logprobs.insert(g.clone(), libm::log(p));
            }
        }
        let backoffs = m.histories().map(|h| (h.clone(), libm::log(m.backoff(h)))).collect();
        BackoffLm { order: m.order(), logprobs, backoffs }
    }

    fn has_unk(&self) -> bool {
        self.logprobs.contains_key(&vec![UNK.to_string()])
    }

    fn normalize(&self, w: &str) -> Result<String> {
        if self.logprobs.contains_key(&vec![w.to_string()]) || w == BOS {
            Ok(w.to_string())
        } else if self.has_unk() {
            Ok(UNK.to_string())
        } else {
            Err(Error::OutOfVocabulary(w.to_string()))
        }
    }

    fn logprob_known(&self, w: &str, h: &[String]) -> f64 {
        let mut g = h.to_vec();
        g.push(w.to_string());
        if let Some(&lp) = self.logprobs.get(&g) {
            return lp;
        }
        if h.is_empty() {
            return f64::NEG_INFINITY;
        }
        self.backoffs.get(h).copied().unwrap_or(0.0) + self.logprob_known(w, &h[1..])
    }

    /// ln P[w | h]; only the last `n − 1` history symbols matter.
    pub fn logprob<S: AsRef<str>>(&self, w: &str, h: &[S]) -> Result<f64> {
        let w = self.normalize(w)?;
        let keep = h.len().saturating_sub(self.order - 1);
        let h: Vec<String> = h[keep..].iter().map(|s| self.normalize(s.as_ref()).unwrap_or_else(|_| s.as_ref().to_string())).collect();
        Ok(self.logprob_known(&w, &h))
    }

    /// Natural-log probability of a sentence, end marker included.
    pub fn score_sequence<S: AsRef<str>>(&self, seq: &[S]) -> Result<f64> {
        let mut ctx: Vec<String> = vec![BOS.to_string(); self.order - 1];
        let mut total = 0.0;
        for w in seq.iter().map(|s| s.as_ref()).chain(core::iter::once(EOS)) {
            total += self.logprob(w, &ctx)?;
            ctx.push(self.normalize(w)?);
            if ctx.len() > self.order - 1 {
                ctx.remove(0);
            }
        }
        Ok(total)
    }
}

impl BackoffModel for BackoffLm {
    fn order(&self) -> usize {
        self.order
    }
    fn predictable(&self) -> BTreeSet<String> {
        self.logprobs.keys().filter(|g| g.len() == 1 && g[0] != BOS).map(|g| g[0].clone()).collect()
    }
    fn history_list(&self) -> Vec<Gram> {
        self.backoffs.keys().cloned().collect()
    }
    fn listed(&self, g: &[String]) -> bool {
        self.logprobs.contains_key(g)
    }
    fn cond_prob(&self, w: &str, h: &[String]) -> f64 {
        let keep = h.len().saturating_sub(self.order - 1);
        libm::exp(self.logprob_known(w, &h[keep..]))
    }
    fn alpha(&self, h: &[String]) -> f64 {
        libm::exp(self.backoffs.get(h).copied().unwrap_or(0.0))
    }
}
