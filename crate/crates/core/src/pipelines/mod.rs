//! End-to-end applications built from the other modules: dictionaries and
//! segmentation, pronunciation and recognition cascades, alignment, sentence
//! boundary features, accent rules and morphological parsing.

mod accent;
mod align;
mod dict;
mod eos;
mod morph;
mod pronounce;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

pub use accent::{accent_rules, accent_word, Accent, AccentClass, WordRecord};
pub use align::{align_phonemes, AlignStep, Alignment, EditCosts};
pub use dict::{build_dictionary_fst, segment, segmentations, LexEntry, Lexicon, DEFAULT_FALLBACK};
pub use eos::{case_class, eos_features, eos_schema, AbbrevLexicon, BoundaryProbs, CaseClass, ABBREV_CLASSES};
pub use morph::{analyze_morph, Category, Derivation, MorphEntry, MorphGrammar, Schema};
pub use pronounce::{pronounce, recognize, stress_introducer, Recognition, STRESS};

use crate::error::{Error, Result};
use crate::semiring::{Semiring, Weight};
use crate::symbols::SymbolTable;
use crate::wfst::{compose, paths, shortest_path, Arc, Wfst};

/// Splits a string into symbols: `{Name}` is one symbol `Name`, any other
/// character is a symbol by itself. Whitespace is skipped.
pub fn split_symbols(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '{' {
            let mut name = String::new();
            let mut closed = false;
            for c in chars.by_ref() {
                if c == '}' {
                    closed = true;
                    break;
                }
                name.push(c);
            }
            if name.is_empty() || !closed {
                return Err(Error::Invalid(alloc::format!("empty or unclosed brace in `{s}`")));
            }
            out.push(name);
        } else if !c.is_whitespace() {
            out.push(c.into());
        }
    }
    Ok(out)
}

/// Acceptor for a finite weighted set of strings, built as a trie-free union
/// of chains from a shared start state.
pub fn string_set<S: AsRef<str>>(semiring: Semiring, syms: &SymbolTable, strings: &[(Vec<S>, Weight)]) -> Result<Wfst> {
    let mut f = Wfst::acceptor(semiring, syms.clone());
    let start = f.add_state();
    f.set_start(start)?;
    for (s, w) in strings {
        semiring.check(*w)?;
        let labels = syms.encode(s)?;
        let mut q = start;
        for (k, &l) in labels.iter().enumerate() {
            let n = f.add_state();
            let aw = if k == 0 { *w } else { semiring.one() };
            f.add_arc(q, Arc::new(l, l, aw, n))?;
            q = n;
        }
        let fw = if labels.is_empty() { semiring.plus(f.final_weight(start), *w) } else { semiring.one() };
        f.set_final(q, fw)?;
    }
    Ok(f)
}

/// Composes the machines left to right. Adjacent tapes are first relabeled
/// onto the union of their symbol tables, so stages built separately chain
/// as long as the symbol names agree.
pub fn cascade(stages: &[&Wfst]) -> Result<Wfst> {
    let (first, rest) = stages.split_first().ok_or_else(|| Error::Invalid("empty cascade".into()))?;
    let mut acc = (*first).clone();
    for &next in rest {
        let mid = acc.osyms().union(next.isyms());
        let left = acc.relabel(&acc.isyms().clone(), &mid)?;
        let right = next.relabel(&mid, &next.osyms().clone())?;
        acc = compose(&left, &right)?;
    }
    Ok(acc)
}

/// Distinct output strings of a machine with their best weights, cheapest
/// first (ties by output). Acyclic machines are enumerated exactly; cyclic
/// ones fall back to the `limit` best paths.
pub(crate) fn ranked_outputs(x: &Wfst, limit: usize) -> Result<Vec<(Vec<String>, Weight)>> {
    let ps = match paths(x) {
        Ok(ps) => ps,
        Err(Error::Cyclic(_)) => shortest_path(x, limit)?,
        Err(e) => return Err(e),
    };
    let mut best: BTreeMap<Vec<String>, Weight> = BTreeMap::new();
    for p in ps {
        let out = p.output_symbols(x);
        let w = best.entry(out).or_insert(f64::INFINITY);
        if p.weight < *w {
            *w = p.weight;
        }
    }
    let mut v: Vec<_> = best.into_iter().collect();
    v.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braces_make_one_symbol() {
        assert_eq!(split_symbols("oт\"{E1}ц").unwrap(), ["o", "т", "\"", "E1", "ц"]);
        assert!(split_symbols("a{").is_err());
    }

    #[test]
    fn string_set_weights() {
        let t = SymbolTable::from_symbols(["a", "b"]);
        let f = string_set(Semiring::Tropical, &t, &[(alloc::vec!["a", "b"], 1.0), (alloc::vec!["a"], 2.0)]).unwrap();
        let r = ranked_outputs(&f, 10).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0], (alloc::vec![String::from("a"), "b".into()], 1.0));
    }
}
