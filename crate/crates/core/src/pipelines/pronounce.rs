//! Pronunciation and recognition cascades.

use alloc::string::String;
use alloc::vec::Vec;

use super::{cascade, ranked_outputs};
use crate::error::{Error, Result};
use crate::semiring::Weight;
use crate::symbols::{SymbolTable, EPSILON};
use crate::wfst::{invert, shortest_path, Arc, Wfst};

/// The stress mark the introducer inserts.
pub const STRESS: &str = "\"";

/// One-state transducer copying every symbol of `syms` except the stress mark
/// and inserting stress marks anywhere, at no cost.
pub fn stress_introducer(semiring: crate::Semiring, syms: &SymbolTable) -> Result<Wfst> {
    let mut t = syms.clone();
    let mark = t.add(STRESS);
    let mut f = Wfst::acceptor(semiring, t.clone());
    let q = f.add_state();
    f.set_start(q)?;
    f.set_final(q, semiring.one())?;
    for l in t.labels().filter(|&l| l != EPSILON && l != mark) {
        f.add_arc(q, Arc::new(l, l, semiring.one(), q))?;
    }
    f.add_arc(q, Arc::new(EPSILON, mark, semiring.one(), q))?;
    Ok(f)
}

/// Ranked pronunciations of an orthographic word.
///
/// `lexicon` accepts legal underlying forms, `orthography` maps underlying
/// forms to stress-annotated spellings and `pronunciation` maps underlying
/// forms to phonological ones. The word is stress-annotated freely, mapped
/// back to underlying forms through the inverse of `lexicon ∘ orthography`,
/// and then pronounced. An empty result means the word is not a spelling of
/// any lexicon entry.
pub fn pronounce<S: AsRef<str>>(lexicon: &Wfst, orthography: &Wfst, pronunciation: &Wfst, word: &[S]) -> Result<Vec<(Vec<String>, Weight)>> {
    let sr = lexicon.semiring();
    let spelled = invert(&cascade(&[lexicon, orthography])?);
    let surface = spelled.isyms();
    if word.iter().any(|s| !surface.contains(s.as_ref()) || s.as_ref() == STRESS) {
        return Ok(Vec::new());
    }
    let input = Wfst::from_string(sr, surface, word)?;
    let stress = stress_introducer(sr, surface)?;
    let full = cascade(&[&input, &stress, &spelled, pronunciation])?;
    ranked_outputs(&full, 64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recognition {
    pub words: Vec<String>,
    pub phones: Vec<String>,
    /// Acoustic, pronunciation and language model costs summed.
    pub cost: Weight,
}

/// Best word string of `lattice ∘ dict ∘ lm`.
///
/// The lattice is a phone acceptor standing for the observation and acoustic
/// stages, `dict` maps phone strings to words and `lm` accepts word strings.
pub fn recognize(lattice: &Wfst, dict: &Wfst, lm: &Wfst) -> Result<Recognition> {
    let words = cascade(&[lattice, dict, lm])?;
    let best = shortest_path(&words, 1)?;
    let p = best.into_iter().next().ok_or(Error::NoPath)?;
    Ok(Recognition { words: p.output_symbols(&words), phones: p.input_symbols(&words), cost: p.weight })
}
