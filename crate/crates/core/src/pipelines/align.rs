//! Minimum-cost phoneme-to-phone alignment through an edit transducer.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::semiring::{Semiring, Weight};
use crate::symbols::{SymbolTable, EPSILON};
use crate::wfst::{compose, shortest_path, Arc, Wfst};

/// Edit costs. Pairs missing from the tables cost 0 for identical symbols
/// and the matching default otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct EditCosts {
    pub sub: BTreeMap<(String, String), Weight>,
    pub ins: BTreeMap<String, Weight>,
    pub del: BTreeMap<String, Weight>,
    pub default_sub: Weight,
    pub default_ins: Weight,
    pub default_del: Weight,
}

impl Default for EditCosts {
    fn default() -> Self {
        EditCosts { sub: BTreeMap::new(), ins: BTreeMap::new(), del: BTreeMap::new(), default_sub: 1.0, default_ins: 1.0, default_del: 1.0 }
    }
}

impl EditCosts {
    pub fn substitution(&self, phoneme: &str, phone: &str) -> Weight {
        match self.sub.get(&(phoneme.to_string(), phone.to_string())) {
            Some(&c) => c,
            None if phoneme == phone => 0.0,
            None => self.default_sub,
        }
    }

    pub fn insertion(&self, phone: &str) -> Weight {
        self.ins.get(phone).copied().unwrap_or(self.default_ins)
    }

    pub fn deletion(&self, phoneme: &str) -> Weight {
        self.del.get(phoneme).copied().unwrap_or(self.default_del)
    }

    fn check(&self) -> Result<()> {
        let all = self.sub.values().chain(self.ins.values()).chain(self.del.values());
        for &c in all.chain([self.default_sub, self.default_ins, self.default_del].iter()) {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::InvalidWeight(c, "edit cost"));
            }
        }
        Ok(())
    }
}

/// One alignment row; `None` is the gap written `-`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignStep {
    pub phoneme: Option<String>,
    pub phone: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    pub steps: Vec<AlignStep>,
    pub cost: Weight,
}

impl fmt::Display for AlignStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.phoneme.as_deref().unwrap_or("-"), self.phone.as_deref().unwrap_or("-"))
    }
}

/// Best path of `phonemes ∘ E ∘ phones`, where the one-state edit transducer
/// `E` substitutes, deletes and inserts at the given costs.
pub fn align_phonemes<S: AsRef<str>>(phonemes: &[S], phones: &[S], costs: &EditCosts) -> Result<Alignment> {
    costs.check()?;
    let sr = Semiring::Tropical;
    let a = SymbolTable::from_symbols(phonemes);
    let b = SymbolTable::from_symbols(phones);
    let mut edit = Wfst::new(sr, a.clone(), b.clone());
    let q = edit.add_state();
    edit.set_start(q)?;
    edit.set_final(q, sr.one())?;
    for (x, xs) in a.iter().filter(|p| p.0 != EPSILON) {
        for (y, ys) in b.iter().filter(|p| p.0 != EPSILON) {
            edit.add_arc(q, Arc::new(x, y, costs.substitution(xs, ys), q))?;
        }
        edit.add_arc(q, Arc::new(x, EPSILON, costs.deletion(xs), q))?;
    }
    for (y, ys) in b.iter().filter(|p| p.0 != EPSILON) {
        edit.add_arc(q, Arc::new(EPSILON, y, costs.insertion(ys), q))?;
    }
    let left = Wfst::from_string(sr, &a, phonemes)?;
    let right = Wfst::from_string(sr, &b, phones)?;
    let lattice = compose(&compose(&left, &edit)?, &right)?;
    let best = shortest_path(&lattice, 1)?.into_iter().next().ok_or(Error::NoPath)?;
    let name = |t: &SymbolTable, l| (l != EPSILON).then(|| t.symbol(l).unwrap_or("").to_string());
    let steps = best
        .arcs
        .iter()
        .filter(|arc| arc.ilabel != EPSILON || arc.olabel != EPSILON)
        .map(|arc| AlignStep { phoneme: name(&a, arc.ilabel), phone: name(&b, arc.olabel) })
        .collect();
    Ok(Alignment { steps, cost: best.weight })
}
