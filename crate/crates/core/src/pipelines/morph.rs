//! Probabilistic categorial morphology.
//!
//! Morphs carry atomic categories (`N`), prefix categories `B/A` (combine
//! with a following `A` into `B`) or suffix categories `A\B` (combine with a
//! preceding `A` into `B`); two atomic categories compound into the right
//! one. A derivation's probability is the start probability of its root
//! category times every production and lexical probability in the tree.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Atom(String),
    /// `result/arg`.
    Prefix { result: String, arg: String },
    /// `arg\result`.
    Suffix { arg: String, result: String },
}

impl Category {
    pub fn atom(s: &str) -> Self {
        Category::Atom(s.into())
    }
}

impl FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(alloc::format!("bad category `{s}`"));
        let ok = |x: &str| !x.is_empty() && !x.contains(['/', '\\']) && !x.contains(char::is_whitespace);
        if let Some((b, a)) = s.split_once('/') {
            if ok(b) && ok(a) {
                return Ok(Category::Prefix { result: b.into(), arg: a.into() });
            }
        } else if let Some((a, b)) = s.split_once('\\') {
            if ok(a) && ok(b) {
                return Ok(Category::Suffix { arg: a.into(), result: b.into() });
            }
        } else if ok(s) {
            return Ok(Category::Atom(s.into()));
        }
        Err(bad())
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Atom(a) => f.write_str(a),
            Category::Prefix { result, arg } => write!(f, "{result}/{arg}"),
            Category::Suffix { arg, result } => write!(f, "{arg}\\{result}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Schema {
    Prefixation,
    Suffixation,
    Compounding,
}

/// A spelling of a morph; spelling variants of one morph are separate
/// entries sharing `morph`, `category` and `prob`.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphEntry {
    pub surface: String,
    pub morph: String,
    pub category: Category,
    /// `p(category → morph)`.
    pub prob: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MorphGrammar {
    pub lexicon: Vec<MorphEntry>,
    /// `p(result → left right)`.
    pub productions: BTreeMap<(String, Category, Category), f64>,
    /// Used for combinations missing from `productions`; a schema without a
    /// probability licenses nothing beyond the listed productions.
    pub schema_probs: BTreeMap<Schema, f64>,
    /// `p(word → C)` for atomic root categories.
    pub start: BTreeMap<String, f64>,
}

fn unit(p: f64) -> bool {
    p > 0.0 && p <= 1.0
}

impl MorphGrammar {
    pub fn add_morph(&mut self, surface: &str, morph: &str, category: Category, prob: f64) {
        self.lexicon.push(MorphEntry { surface: surface.into(), morph: morph.into(), category, prob });
    }

    pub fn add_production(&mut self, result: &str, left: Category, right: Category, prob: f64) {
        self.productions.insert((result.into(), left, right), prob);
    }

    pub fn validate(&self) -> Result<()> {
        let mut mass: BTreeMap<&Category, BTreeMap<&str, f64>> = BTreeMap::new();
        for e in &self.lexicon {
            if e.surface.is_empty() || !unit(e.prob) {
                return Err(Error::Invalid(alloc::format!("bad lexicon entry `{}`", e.surface)));
            }
            mass.entry(&e.category).or_default().insert(&e.morph, e.prob);
        }
        for (c, m) in &mass {
            if m.values().sum::<f64>() > 1.0 + 1e-9 {
                return Err(Error::Invalid(alloc::format!("morph probabilities of {c} sum above 1")));
            }
        }
        let probs = self.productions.values().chain(self.schema_probs.values()).chain(self.start.values());
        if let Some(p) = probs.into_iter().find(|&&p| !unit(p)) {
            return Err(Error::Invalid(alloc::format!("probability {p} outside (0, 1]")));
        }
        Ok(())
    }

    fn combine(&self, l: &Category, r: &Category) -> Option<(String, Schema, f64)> {
        let (result, schema) = match (l, r) {
            (Category::Prefix { result, arg }, Category::Atom(a)) if arg == a => (result, Schema::Prefixation),
            (Category::Atom(a), Category::Suffix { arg, result }) if arg == a => (result, Schema::Suffixation),
            (Category::Atom(_), Category::Atom(b)) => (b, Schema::Compounding),
            _ => return None,
        };
        let key = (result.clone(), l.clone(), r.clone());
        let p = self.productions.get(&key).or_else(|| self.schema_probs.get(&schema))?;
        Some((result.clone(), schema, *p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Derivation {
    Leaf { surface: String, morph: String, category: Category, prob: f64 },
    Node { category: String, schema: Schema, prob: f64, left: Box<Derivation>, right: Box<Derivation> },
}

impl Derivation {
    pub fn category(&self) -> Category {
        match self {
            Derivation::Leaf { category, .. } => category.clone(),
            Derivation::Node { category, .. } => Category::Atom(category.clone()),
        }
    }

    /// Product of the lexical and production probabilities in the tree.
    pub fn inner_prob(&self) -> f64 {
        match self {
            Derivation::Leaf { prob, .. } => *prob,
            Derivation::Node { prob, left, right, .. } => prob * left.inner_prob() * right.inner_prob(),
        }
    }

    /// Every factor of [`Derivation::inner_prob`], in prefix order.
    pub fn factors(&self) -> Vec<f64> {
        match self {
            Derivation::Leaf { prob, .. } => alloc::vec![*prob],
            Derivation::Node { prob, left, right, .. } => {
                let mut v = alloc::vec![*prob];
                v.extend(left.factors());
                v.extend(right.factors());
                v
            }
        }
    }

    pub fn leaves(&self) -> Vec<&str> {
        match self {
            Derivation::Leaf { surface, .. } => alloc::vec![surface.as_str()],
            Derivation::Node { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Leaf { morph, category, .. } => write!(f, "[{category} {morph}]"),
            Derivation::Node { category, left, right, .. } => write!(f, "[{category}{left}{right}]"),
        }
    }
}

/// Every segmentation of `word` into lexicon spellings.
fn segmentations<'g>(g: &'g MorphGrammar, word: &str) -> Vec<Vec<&'g MorphEntry>> {
    // ends[i]: segmentations of word[i..].
    let mut ends: BTreeMap<usize, Vec<Vec<&MorphEntry>>> = BTreeMap::new();
    ends.insert(word.len(), alloc::vec![Vec::new()]);
    for i in (0..word.len()).rev().filter(|&i| word.is_char_boundary(i)) {
        let mut here = Vec::new();
        for e in g.lexicon.iter().filter(|e| word[i..].starts_with(e.surface.as_str())) {
            if let Some(rest) = ends.get(&(i + e.surface.len())) {
                for r in rest {
                    let mut v = alloc::vec![e];
                    v.extend(r.iter().copied());
                    here.push(v);
                }
            }
        }
        ends.insert(i, here);
    }
    ends.remove(&0).unwrap_or_default()
}

/// Every derivation over one segmentation, by CKY over morph positions.
fn derivations(g: &MorphGrammar, seg: &[&MorphEntry]) -> Vec<Derivation> {
    let n = seg.len();
    let mut chart: BTreeMap<(usize, usize), Vec<Derivation>> = BTreeMap::new();
    for (i, e) in seg.iter().enumerate() {
        let leaf = Derivation::Leaf { surface: e.surface.clone(), morph: e.morph.clone(), category: e.category.clone(), prob: e.prob };
        chart.insert((i, i + 1), alloc::vec![leaf]);
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut cell = Vec::new();
            for k in i + 1..j {
                for l in &chart[&(i, k)] {
                    for r in &chart[&(k, j)] {
                        if let Some((category, schema, prob)) = g.combine(&l.category(), &r.category()) {
                            cell.push(Derivation::Node { category, schema, prob, left: Box::new(l.clone()), right: Box::new(r.clone()) });
                        }
                    }
                }
            }
            chart.insert((i, j), cell);
        }
    }
    chart.remove(&(0, n)).unwrap_or_default()
}

/// All category-legal analyses of `word` with their probabilities, most
/// probable first. Ties go to fewer morphs, then to the longer first morph.
/// An empty result means no analysis exists.
pub fn analyze_morph(g: &MorphGrammar, word: &str) -> Result<Vec<(Derivation, f64)>> {
    g.validate()?;
    let mut out = Vec::new();
    for seg in segmentations(g, word) {
        for d in derivations(g, &seg) {
            let Category::Atom(root) = d.category() else { continue };
            if let Some(p) = g.start.get(&root) {
                let prob = p * d.inner_prob();
                out.push((d, prob));
            }
        }
    }
    out.sort_by(|(a, pa), (b, pb)| {
        let (la, lb) = (a.leaves(), b.leaves());
        pb.total_cmp(pa)
            .then(la.len().cmp(&lb.len()))
            .then(lb[0].len().cmp(&la[0].len()))
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn categories_round_trip() {
        for s in ["N", "V/N", "V\\N"] {
            assert_eq!(s.parse::<Category>().unwrap().to_string(), s);
        }
        assert!("V/".parse::<Category>().is_err());
        assert!("a/b/c".parse::<Category>().is_err());
    }

    #[test]
    fn single_morph() {
        let mut g = MorphGrammar::default();
        g.add_morph("mist", "mist", Category::atom("N"), 0.25);
        g.start.insert("N".into(), 0.5);
        let a = analyze_morph(&g, "mist").unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].1, 0.125);
        assert_eq!(a[0].0.to_string(), "[N mist]");
        assert!(analyze_morph(&g, "mists").unwrap().is_empty());
    }
}
