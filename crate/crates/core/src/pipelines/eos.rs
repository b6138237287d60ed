//! Features for deciding whether a period ends a declarative sentence.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cart::{FeatureSpec, Value};
use crate::error::{Error, Result};

/// Abbreviation classes; words outside the lexicon get `none`, lexicon
/// classes not listed here get `other`.
pub const ABBREV_CLASSES: [&str; 6] = ["none", "month", "unit", "title", "address", "other"];
const CASES: [&str; 5] = ["Upper", "Lower", "Cap", "Numbers", "None"];
const PUNCT: [&str; 10] = ["none", ",", ";", ":", "\"", "'", ")", "!", "?", "other"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseClass {
    Upper,
    Lower,
    Cap,
    Numbers,
}

/// No letters: `Numbers`. Two or more letters, all capitals: `Upper`.
/// Capital first letter: `Cap`. Anything else: `Lower`.
pub fn case_class(word: &str) -> CaseClass {
    let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
    match letters.first() {
        None => CaseClass::Numbers,
        Some(_) if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) => CaseClass::Upper,
        Some(c) if c.is_uppercase() => CaseClass::Cap,
        Some(_) => CaseClass::Lower,
    }
}

/// Abbreviations keyed by lowercased spelling, period included.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AbbrevLexicon {
    pub classes: BTreeMap<String, String>,
}

impl AbbrevLexicon {
    pub fn insert(&mut self, word: &str, class: &str) {
        self.classes.insert(word.to_lowercase(), class.to_string());
    }

    pub fn class_of(&self, word: &str) -> &str {
        match self.classes.get(&word.to_lowercase()) {
            None => "none",
            Some(c) if ABBREV_CLASSES.contains(&c.as_str()) => c,
            Some(_) => "other",
        }
    }
}

/// P[word ends a sentence] and P[word begins one], keyed by lowercased word.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryProbs {
    pub end: BTreeMap<String, f64>,
    pub begin: BTreeMap<String, f64>,
    /// Used for words absent from a table.
    pub unseen: f64,
}

impl Default for BoundaryProbs {
    fn default() -> Self {
        BoundaryProbs { end: BTreeMap::new(), begin: BTreeMap::new(), unseen: 0.5 }
    }
}

impl BoundaryProbs {
    /// Relative frequencies from a corpus of tokenized sentences.
    pub fn estimate<S: AsRef<str>>(sentences: &[Vec<S>]) -> Self {
        let mut total: BTreeMap<String, f64> = BTreeMap::new();
        let mut end: BTreeMap<String, f64> = BTreeMap::new();
        let mut begin: BTreeMap<String, f64> = BTreeMap::new();
        for s in sentences {
            for (k, w) in s.iter().enumerate() {
                let w = w.as_ref().to_lowercase();
                *total.entry(w.clone()).or_default() += 1.0;
                if k == 0 {
                    *begin.entry(w.clone()).or_default() += 1.0;
                }
                if k + 1 == s.len() {
                    *end.entry(w).or_default() += 1.0;
                }
            }
        }
        let rel = |m: &BTreeMap<String, f64>| total.iter().map(|(w, n)| (w.clone(), m.get(w).copied().unwrap_or(0.0) / n)).collect();
        BoundaryProbs { end: rel(&end), begin: rel(&begin), ..Self::default() }
    }

    fn lookup(table: &BTreeMap<String, f64>, w: &str, unseen: f64) -> f64 {
        table.get(&w.to_lowercase()).copied().unwrap_or(unseen)
    }
}

/// Column layout of [`eos_features`] rows, usable as a CART dataset schema.
pub fn eos_schema() -> Vec<FeatureSpec> {
    alloc::vec![
        FeatureSpec::continuous("p_end"),
        FeatureSpec::continuous("p_begin"),
        FeatureSpec::continuous("len"),
        FeatureSpec::continuous("next_len"),
        FeatureSpec::categorical("case", &CASES[..4]),
        FeatureSpec::categorical("next_case", &CASES),
        FeatureSpec::categorical("punct", &PUNCT),
        FeatureSpec::categorical("abbrev", &ABBREV_CLASSES),
    ]
}

fn is_word(t: &str) -> bool {
    t.chars().any(char::is_alphanumeric)
}

fn cat(list: &[&str], v: &str) -> Value {
    Value::Cat(list.iter().position(|x| *x == v).unwrap_or(list.len() - 1))
}

/// The eight boundary features for token `i`, which must contain a period.
///
/// The following word is the next token with a letter or digit. Following
/// punctuation is whatever trails the last period inside token `i`, or else
/// an all-punctuation token directly after it; a missing next word has case
/// `None` and length 0.
pub fn eos_features<S: AsRef<str>>(tokens: &[S], i: usize, abbrevs: &AbbrevLexicon, probs: &BoundaryProbs) -> Result<Vec<Value>> {
    let tok = tokens.get(i).ok_or(Error::IndexOutOfRange { index: i, len: tokens.len() })?.as_ref();
    let dot = tok.rfind('.').ok_or_else(|| Error::Invalid(alloc::format!("token `{tok}` has no period")))?;
    let word = &tok[..=dot];
    let trailing = &tok[dot + 1..];
    let next = tokens[i + 1..].iter().map(AsRef::as_ref).find(|t| is_word(t));
    let punct = if !trailing.is_empty() {
        trailing.chars().next().map(String::from).unwrap()
    } else {
        match tokens.get(i + 1).map(AsRef::as_ref) {
            Some(t) if !t.is_empty() && !is_word(t) => t.chars().next().map(String::from).unwrap(),
            _ => "none".into(),
        }
    };
    let bare = word.trim_end_matches('.');
    let case_name = |c: CaseClass| match c {
        CaseClass::Upper => "Upper",
        CaseClass::Lower => "Lower",
        CaseClass::Cap => "Cap",
        CaseClass::Numbers => "Numbers",
    };
    Ok(alloc::vec![
        Value::Num(BoundaryProbs::lookup(&probs.end, word, probs.unseen)),
        Value::Num(next.map_or(0.0, |n| BoundaryProbs::lookup(&probs.begin, n, probs.unseen))),
        Value::Num(bare.chars().count() as f64),
        Value::Num(next.map_or(0.0, |n| n.chars().count() as f64)),
        cat(&CASES[..4], case_name(case_class(bare))),
        cat(&CASES, next.map_or("None", |n| case_name(case_class(n)))),
        cat(&PUNCT, &punct),
        cat(&ABBREV_CLASSES, abbrevs.class_of(word)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_rules() {
        assert_eq!(case_class("U.S"), CaseClass::Upper);
        assert_eq!(case_class("Mr"), CaseClass::Cap);
        assert_eq!(case_class("A"), CaseClass::Cap);
        assert_eq!(case_class("end"), CaseClass::Lower);
        assert_eq!(case_class("1.5"), CaseClass::Numbers);
    }

    #[test]
    fn index_checked() {
        let r = eos_features(&["a."], 3, &AbbrevLexicon::default(), &BoundaryProbs::default());
        assert_eq!(r, Err(Error::IndexOutOfRange { index: 3, len: 1 }));
    }
}
