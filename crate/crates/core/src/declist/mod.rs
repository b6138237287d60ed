//! Decision lists: ordered (feature, label) tests where the first matching
//! entry decides.
//!
//! An instance is the set of atomic features that hold for it, written as
//! strings (`x3=1`, `+1:level/N`, `win:zinc`). A list feature is a
//! conjunction of atoms. Two learners build lists: Separate-and-Conquer on
//! boolean data, and log-likelihood-ratio sorting of candidate collocations.

mod colloc;
mod llr;
mod sac;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use colloc::{extract_collocations, instance_of, Collocation, Templates};
pub use llr::{learn_llr, LlrParams};
pub use sac::{learn_sac, BoolDataset, Retain};

/// The atoms that hold for one instance.
pub type Instance = BTreeSet<String>;

/// A labeled instance.
pub type Example = (Instance, String);

/// A conjunction of atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Feature(pub Vec<String>);

impl Feature {
    pub fn atom(a: impl Into<String>) -> Self {
        Feature(alloc::vec![a.into()])
    }

    pub fn matches(&self, x: &Instance) -> bool {
        self.0.iter().all(|a| x.contains(a))
    }

    /// Parses the ` & `-separated form written by `Display`.
    pub fn parse(s: &str) -> Self {
        Feature(s.split('&').map(str::trim).filter(|a| !a.is_empty()).map(String::from).collect())
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "true");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub feature: Feature,
    pub label: String,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionList {
    /// Sorted by nonincreasing score.
    pub entries: Vec<Entry>,
    pub default: String,
}

impl DecisionList {
    pub fn is_sorted(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].score >= w[1].score)
    }

    /// Label and index of the first matching entry; `None` means the
    /// default decided.
    pub fn classify(&self, x: &Instance) -> (&str, Option<usize>) {
        match self.entries.iter().position(|e| e.feature.matches(x)) {
            Some(i) => (&self.entries[i].label, Some(i)),
            None => (&self.default, None),
        }
    }

    /// Fraction of examples classified correctly (1 for no examples).
    pub fn accuracy(&self, data: &[Example]) -> f64 {
        if data.is_empty() {
            return 1.0;
        }
        let hits = data.iter().filter(|(x, y)| self.classify(x).0 == y).count();
        hits as f64 / data.len() as f64
    }
}

/// Majority label, ties to the lexicographically least.
fn majority<'a>(labels: impl Iterator<Item = &'a str>) -> Option<String> {
    let mut counts: alloc::collections::BTreeMap<&str, usize> = alloc::collections::BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    let mut best: Option<(&str, usize)> = None;
    for (l, c) in counts {
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((l, c));
        }
    }
    best.map(|(l, _)| l.into())
}

/// Subsumption pruning on `training`, then held-out pruning.
pub fn prune_list(l: &DecisionList, heldout: &[Example], training: &[Example]) -> DecisionList {
    prune_heldout(&prune_subsumed(l, training), heldout)
}

/// Drops every entry for which some earlier entry with the same label
/// matches all the training instances it matches.
pub fn prune_subsumed(l: &DecisionList, training: &[Example]) -> DecisionList {
    let matched: Vec<BTreeSet<usize>> = l
        .entries
        .iter()
        .map(|e| training.iter().enumerate().filter(|(_, (x, _))| e.feature.matches(x)).map(|(i, _)| i).collect())
        .collect();
    let mut keep: Vec<usize> = Vec::new();
    for (j, e) in l.entries.iter().enumerate() {
        let subsumed = keep.iter().any(|&i| l.entries[i].label == e.label && matched[j].is_subset(&matched[i]));
        if !subsumed {
            keep.push(j);
        }
    }
    DecisionList { entries: keep.iter().map(|&i| l.entries[i].clone()).collect(), default: l.default.clone() }
}

/// Repeatedly drops the lowest-ranked entry whose removal does not lower
/// accuracy on `heldout`. Surviving entries keep their order.
pub fn prune_heldout(l: &DecisionList, heldout: &[Example]) -> DecisionList {
    let mut out = l.clone();
    let mut acc = out.accuracy(heldout);
    'outer: loop {
        for j in (0..out.entries.len()).rev() {
            let mut trial = out.clone();
            trial.entries.remove(j);
            let a = trial.accuracy(heldout);
            if a >= acc {
                out = trial;
                acc = a;
                continue 'outer;
            }
        }
        return out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn inst(atoms: &[&str]) -> Instance {
        atoms.iter().map(|s| String::from(*s)).collect()
    }

    fn entry(a: &str, label: &str, score: f64) -> Entry {
        Entry { feature: Feature::atom(a), label: label.into(), score }
    }

    #[test]
    fn first_match_decides() {
        let l = DecisionList { entries: vec![entry("a", "x", 2.0), entry("b", "y", 1.0)], default: "z".into() };
        assert_eq!(l.classify(&inst(&["a", "b"])), ("x", Some(0)));
        assert_eq!(l.classify(&inst(&["b"])), ("y", Some(1)));
        assert_eq!(l.classify(&inst(&["c"])), ("z", None));
    }

    #[test]
    fn needed_entries_survive_pruning() {
        let l = DecisionList { entries: vec![entry("a", "x", 2.0), entry("b", "y", 1.0)], default: "z".into() };
        let data: Vec<Example> = vec![(inst(&["a"]), "x".into()), (inst(&["b"]), "y".into()), (inst(&[]), "z".into())];
        assert_eq!(prune_list(&l, &data, &data), l);
    }

    #[test]
    fn feature_text_round_trip() {
        let f = Feature(vec!["x1=1".into(), "x2=1".into()]);
        assert_eq!(f.to_string(), "x1=1 & x2=1");
        assert_eq!(Feature::parse(&f.to_string()), f);
    }
}
