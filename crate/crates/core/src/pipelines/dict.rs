//! Pronunciation and word dictionaries as transducers, and dictionary-driven
//! segmentation of unspaced text.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::semiring::{Semiring, Weight};
use crate::symbols::{SymbolTable, EPSILON};
use crate::wfst::{compose, shortest_path, Arc, Wfst};

/// Cost of consuming a character no dictionary word covers.
pub const DEFAULT_FALLBACK: f64 = 20.0;

#[derive(Clone, Debug, PartialEq)]
pub struct LexEntry {
    pub surface: Vec<String>,
    pub output: Vec<String>,
    /// Negative natural log probability.
    pub cost: Weight,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lexicon {
    pub entries: Vec<LexEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry with probability `p ∈ (0, 1]`.
    pub fn add_prob<S: AsRef<str>>(&mut self, surface: &[S], output: &[S], p: f64) -> Result<()> {
        if p == 0.0 {
            return Err(Error::ZeroProbability(join(surface)));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Invalid(alloc::format!("probability {p} for `{}` is outside (0, 1]", join(surface))));
        }
        self.add_cost(surface, output, -libm::log(p))
    }

    /// Adds an entry with a nonnegative cost.
    pub fn add_cost<S: AsRef<str>>(&mut self, surface: &[S], output: &[S], cost: Weight) -> Result<()> {
        if surface.is_empty() {
            return Err(Error::Invalid("lexicon entry with empty surface".into()));
        }
        if !(cost >= 0.0 && cost.is_finite()) {
            return Err(Error::InvalidWeight(cost, "lexicon cost"));
        }
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect();
        self.entries.push(LexEntry { surface: own(surface), output: own(output), cost });
        Ok(())
    }

    /// A word spelled with one symbol per character, writing itself.
    pub fn add_word(&mut self, word: &str, cost: Weight) -> Result<()> {
        let chars: Vec<String> = word.chars().map(String::from).collect();
        self.add_cost(&chars, &[word.to_string()], cost)
    }

    pub fn input_symbols(&self) -> SymbolTable {
        SymbolTable::from_symbols(self.entries.iter().flat_map(|e| &e.surface))
    }

    pub fn output_symbols(&self) -> SymbolTable {
        SymbolTable::from_symbols(self.entries.iter().flat_map(|e| &e.output))
    }
}

fn join<S: AsRef<str>>(v: &[S]) -> String {
    v.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(" ")
}

/// `(Σ_w D_w)*` over the tropical semiring.
///
/// Built directly rather than through `sum` and `closure`: one hub state,
/// start and final, and for every entry a chain leaving and re-entering it.
/// The output goes on the first arcs and the cost on the first arc, so a
/// one-symbol entry is a single loop.
pub fn build_dictionary_fst(lex: &Lexicon) -> Result<Wfst> {
    if lex.entries.is_empty() {
        return Err(Error::Invalid("empty lexicon".into()));
    }
    let sr = Semiring::Tropical;
    let isyms = lex.input_symbols();
    let osyms = lex.output_symbols();
    let mut f = Wfst::new(sr, isyms.clone(), osyms.clone());
    let hub = f.add_state();
    f.set_start(hub)?;
    f.set_final(hub, sr.one())?;
    for e in &lex.entries {
        let i = isyms.encode(&e.surface)?;
        let o = osyms.encode(&e.output)?;
        let len = i.len().max(o.len());
        let mut q = hub;
        for k in 0..len {
            let n = if k + 1 == len { hub } else { f.add_state() };
            let w = if k == 0 { e.cost } else { sr.one() };
            let il = i.get(k).copied().unwrap_or(EPSILON);
            let ol = o.get(k).copied().unwrap_or(EPSILON);
            f.add_arc(q, Arc::new(il, ol, w, n))?;
            q = n;
        }
    }
    Ok(f)
}

/// The cheapest segmentation of `sentence` and its cost. See
/// [`segmentations`].
pub fn segment(dict: &Wfst, sentence: &str, fallback: Option<Weight>) -> Result<(Vec<String>, Weight)> {
    let mut v = segmentations(dict, sentence, fallback, 1)?;
    Ok(v.remove(0))
}

/// Up to `n` distinct segmentations, cheapest first.
///
/// Every character is one input symbol. With a fallback cost, each character
/// may also be read as a one-character word at that cost, so segmentation
/// never fails; the fallback arcs leave every final state of `dict` for its
/// start, which suits closure-shaped dictionaries. Without one, a character
/// missing from the dictionary's input table is an error.
pub fn segmentations(dict: &Wfst, sentence: &str, fallback: Option<Weight>, n: usize) -> Result<Vec<(Vec<String>, Weight)>> {
    let chars: Vec<String> = sentence.chars().filter(|c| !c.is_whitespace()).map(String::from).collect();
    if chars.is_empty() {
        return Err(Error::EmptyText);
    }
    let sr = dict.semiring();
    let machine = match fallback {
        None => {
            if let Some(c) = chars.iter().find(|c| !dict.isyms().contains(c)) {
                return Err(Error::Uncoverable(c.clone()));
            }
            dict.clone()
        }
        Some(cost) => {
            sr.check(cost)?;
            let distinct: BTreeSet<&String> = chars.iter().collect();
            let isyms = dict.isyms().union(&SymbolTable::from_symbols(&distinct));
            let osyms = dict.osyms().union(&SymbolTable::from_symbols(&distinct));
            let mut m = dict.relabel(&isyms, &osyms)?;
            let start = m.start().ok_or(Error::NoPath)?;
            let finals: Vec<_> = m.states().filter(|&q| m.is_final(q)).collect();
            for q in finals {
                let w = sr.times(m.final_weight(q), cost);
                for c in &distinct {
                    let (i, o) = (isyms.find(c).unwrap(), osyms.find(c).unwrap());
                    m.add_arc(q, Arc::new(i, o, w, start))?;
                }
            }
            m
        }
    };
    let input = Wfst::from_string(sr, machine.isyms(), &chars)?;
    let lattice = compose(&input, &machine)?;

    // Several paths can spell the same word sequence; widen the search until
    // `n` distinct sequences are found or the lattice is exhausted.
    let mut k = n.max(1);
    loop {
        let ps = shortest_path(&lattice, k)?;
        let mut seen: BTreeMap<Vec<String>, ()> = BTreeMap::new();
        let mut out = Vec::new();
        for p in &ps {
            let words = p.output_symbols(&lattice);
            if seen.insert(words.clone(), ()).is_none() {
                out.push((words, p.weight));
            }
        }
        if out.len() >= n || ps.len() < k {
            out.truncate(n);
            if out.is_empty() {
                return Err(Error::NoPath);
            }
            return Ok(out);
        }
        k *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_is_a_loop() {
        let mut lex = Lexicon::new();
        lex.add_prob(&["a"], &["W"], 1.0).unwrap();
        let d = build_dictionary_fst(&lex).unwrap();
        assert_eq!(d.num_states(), 1);
        assert_eq!(d.arcs(0).len(), 1);
        assert_eq!(d.arcs(0)[0].nextstate, 0);
        assert_eq!(d.arcs(0)[0].weight, 0.0);
    }

    #[test]
    fn zero_probability_rejected() {
        let mut lex = Lexicon::new();
        assert_eq!(lex.add_prob(&["a"], &["W"], 0.0), Err(Error::ZeroProbability("a".into())));
        assert!(build_dictionary_fst(&lex).is_err());
    }

    #[test]
    fn unknown_character_named() {
        let mut lex = Lexicon::new();
        lex.add_word("ab", 1.0).unwrap();
        let d = build_dictionary_fst(&lex).unwrap();
        assert_eq!(segment(&d, "abc", None), Err(Error::Uncoverable("c".into())));
        let (w, c) = segment(&d, "abc", Some(DEFAULT_FALLBACK)).unwrap();
        assert_eq!(w, ["ab", "c"]);
        assert_eq!(c, 21.0);
    }
}
