//! Back-off language model as a weighted acceptor.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{BackoffModel, Gram, BOS, EOS};
use crate::semiring::Semiring;
use crate::symbols::SymbolTable;
use crate::wfst::{Arc, StateId, Wfst};

fn cost(p: f64) -> f64 {
    -libm::log(p)
}

/// Tropical acceptor with one state per observed history (plus the empty
/// history). Seen words leave a history state with their discounted
/// probability; an epsilon arc weighted by α(h) leads to the next shorter
/// history. Final weights carry the end-of-sentence probability. Start and
/// end markers do not appear as arcs.
///
/// Epsilon back-off admits extra paths besides the exact one, so the best
/// path cost never exceeds the exact negative log probability.
pub fn compile_lm_fsa<M: BackoffModel>(m: &M) -> Wfst {
    let n = m.order();
    let vocab = m.predictable();
    let words: Vec<&String> = vocab.iter().filter(|w| *w != EOS && *w != BOS).collect();
    let syms = SymbolTable::from_symbols(words.iter().map(|w| w.as_str()));
    let mut f = Wfst::acceptor(Semiring::Tropical, syms.clone());

    let mut ids: BTreeMap<Gram, StateId> = BTreeMap::new();
    ids.insert(Vec::new(), f.add_state());
    for h in m.history_list() {
        ids.insert(h, f.add_state());
    }
    // Longest suffix of `h` (at most n − 1 long) that has a state.
    let state_of = |h: &[String]| -> StateId {
        let mut h = &h[h.len().saturating_sub(n - 1)..];
        loop {
            if let Some(&s) = ids.get(h) {
                return s;
            }
            h = &h[1..];
        }
    };
    f.set_start(state_of(&vec![String::from(BOS); n - 1])).unwrap();

    for (h, &s) in &ids {
        let pe = m.cond_prob(EOS, h);
        if pe > 0.0 {
            f.set_final(s, cost(pe)).unwrap();
        }
        let mut arcs = Vec::new();
        for w in &words {
            let mut g = h.clone();
            g.push((*w).clone());
            if !h.is_empty() && !m.listed(&g) {
                continue;
            }
            let p = m.cond_prob(w, h);
            if p > 0.0 {
                let label = syms.find(w).unwrap();
                arcs.push(Arc::new(label, label, cost(p), state_of(&g)));
            }
        }
        if !h.is_empty() {
            let a = m.alpha(h);
            if a > 0.0 {
                arcs.push(Arc::new(0, 0, cost(a), state_of(&h[1..])));
            }
        }
        for a in arcs {
            f.add_arc(s, a).unwrap();
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unigram_model_is_single_state_loop() {
        let m = super::super::NGramModel::train(&[vec!["a", "b"], vec!["a"]], 1, 0, false).unwrap();
        let f = compile_lm_fsa(&m);
        assert_eq!(f.num_states(), 1);
        assert_eq!(f.num_arcs(), 2);
        assert!(f.arcs(0).iter().all(|a| a.nextstate == 0));
        assert!(f.is_final(0));
    }
}
