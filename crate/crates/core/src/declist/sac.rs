//! Separate-and-Conquer learning on boolean features.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{majority, DecisionList, Entry, Example, Feature};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BoolDataset {
    pub names: Vec<String>,
    pub rows: Vec<Vec<bool>>,
    pub labels: Vec<String>,
}

impl BoolDataset {
    pub fn new(names: Vec<String>, rows: Vec<Vec<bool>>, labels: Vec<String>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Invalid(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != names.len()) {
            return Err(Error::Invalid(format!("row has {} values for {} features", r.len(), names.len())));
        }
        Ok(BoolDataset { names, rows, labels })
    }

    /// The atom written for feature `i` taking value `v`.
    pub fn atom(&self, i: usize, v: bool) -> String {
        format!("{}={}", self.names[i], v as u8)
    }

    pub fn instances(&self) -> Vec<Example> {
        self.rows
            .iter()
            .zip(&self.labels)
            .map(|(r, y)| (r.iter().enumerate().map(|(i, &v)| self.atom(i, v)).collect(), y.clone()))
            .collect()
    }
}

/// Which half of a split stays in S.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Retain {
    /// The half with the larger share of the round's target class, the
    /// least frequent label in S when the round starts.
    #[default]
    TargetShare,
    /// The half with lower entropy.
    LowerEntropy,
}

fn entropy(d: &BoolDataset, rows: &[usize]) -> f64 {
    let mut counts: alloc::collections::BTreeMap<&str, f64> = alloc::collections::BTreeMap::new();
    for &i in rows {
        *counts.entry(&d.labels[i]).or_default() += 1.0;
    }
    let n = rows.len() as f64;
    counts.values().map(|&c| -c / n * libm::log2(c / n)).sum()
}

fn labels_of<'a>(d: &'a BoolDataset, rows: &[usize]) -> BTreeSet<&'a str> {
    rows.iter().map(|&i| d.labels[i].as_str()).collect()
}

/// Least frequent label, ties to the lexicographically least.
fn minority(d: &BoolDataset, rows: &[usize]) -> String {
    let mut counts: alloc::collections::BTreeMap<&str, usize> = alloc::collections::BTreeMap::new();
    for &i in rows {
        *counts.entry(&d.labels[i]).or_default() += 1;
    }
    let mut best: Option<(&str, usize)> = None;
    for (l, c) in counts {
        if best.is_none_or(|(_, b)| c < b) {
            best = Some((l, c));
        }
    }
    best.map(|(l, _)| l.into()).unwrap_or_default()
}

/// Runs the Separate-and-Conquer loop:
///
/// 1. split S on the primitive feature that leaves the least entropy;
/// 2. keep one half in S and move the other to the pot P, repeating 1 until
///    S is pure;
/// 3. emit the conjunction of the chosen literals with S's label;
/// 4. stop with P's label as default if P is pure, else restart with S = P.
///
/// Entry scores are the number of examples still in play when the entry
/// was learned, so they never increase down the list. Data where identical
/// feature vectors carry different labels ends the loop early with a
/// majority-label entry.
pub fn learn_sac(d: &BoolDataset, retain: Retain) -> Result<DecisionList> {
    if d.rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut s: Vec<usize> = (0..d.rows.len()).collect();
    let mut pot: Vec<usize> = Vec::new();
    let mut entries = Vec::new();
    if labels_of(d, &s).len() == 1 {
        return Ok(DecisionList { entries, default: d.labels[0].clone() });
    }
    loop {
        let target = minority(d, &s);
        let pool = (s.len() + pot.len()) as f64;
        let mut conj = Vec::new();
        while labels_of(d, &s).len() > 1 {
            let mut best: Option<(f64, usize)> = None;
            for f in 0..d.names.len() {
                let ones = s.iter().filter(|&&i| d.rows[i][f]).count();
                if ones == 0 || ones == s.len() {
                    continue;
                }
                let (a, b): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&i| d.rows[i][f]);
                let h = (a.len() as f64 * entropy(d, &a) + b.len() as f64 * entropy(d, &b)) / s.len() as f64;
                if best.is_none_or(|(bh, _)| h < bh - 1e-12) {
                    best = Some((h, f));
                }
            }
            let Some((_, f)) = best else {
                // Identical features, mixed labels.
                let label = majority(s.iter().map(|&i| d.labels[i].as_str())).unwrap();
                entries.push(Entry { feature: Feature(conj), label, score: pool });
                let rest = if pot.is_empty() { &s } else { &pot };
                let default = majority(rest.iter().map(|&i| d.labels[i].as_str())).unwrap();
                return Ok(DecisionList { entries, default });
            };
            let (ones, zeros): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&i| d.rows[i][f]);
            let key = |half: &[usize]| -> f64 {
                match retain {
                    Retain::TargetShare => half.iter().filter(|&&i| d.labels[i] == target).count() as f64 / half.len() as f64,
                    Retain::LowerEntropy => -entropy(d, half),
                }
            };
            let (k1, k0) = (key(&ones), key(&zeros));
            let keep_ones = k1 > k0 + 1e-12 || ((k1 - k0).abs() <= 1e-12 && ones.len() >= zeros.len());
            let (kept, moved, value) = if keep_ones { (ones, zeros, true) } else { (zeros, ones, false) };
            conj.push(d.atom(f, value));
            pot.extend(moved);
            s = kept;
        }
        entries.push(Entry { feature: Feature(conj), label: d.labels[s[0]].clone(), score: pool });
        let left = labels_of(d, &pot);
        if left.len() <= 1 {
            let default = left.into_iter().next().map_or_else(|| d.labels[s[0]].clone(), String::from);
            return Ok(DecisionList { entries, default });
        }
        s = core::mem::take(&mut pot);
    }
}
