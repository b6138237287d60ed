//! Ordered hand-written rules assigning pitch accent status to words.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccentClass {
    ClosedCliticized,
    ClosedDeaccented,
    ClosedAccented,
    Open,
}

impl FromStr for AccentClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed-cliticized" => Ok(AccentClass::ClosedCliticized),
            "closed-deaccented" => Ok(AccentClass::ClosedDeaccented),
            "closed-accented" => Ok(AccentClass::ClosedAccented),
            "open" => Ok(AccentClass::Open),
            _ => Err(Error::Invalid(alloc::format!("unknown accent class `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Accent {
    Deaccent,
    Cliticize,
    Accent,
    Emphatic,
}

impl fmt::Display for Accent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Accent::Deaccent => "deaccent",
            Accent::Cliticize => "cliticize",
            Accent::Accent => "accent",
            Accent::Emphatic => "emphatic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordRecord {
    pub token: String,
    pub pos: String,
    pub class: AccentClass,
    pub phrasal_verb: bool,
    pub contrastive: bool,
    pub prefixed: bool,
    pub preposed: bool,
    /// In local focus.
    pub given_local: bool,
    /// In global focus.
    pub given_global: bool,
    pub proper_nominal: bool,
    pub complex_nominal: bool,
    /// Accented in citation form by a noun-phrase accent predictor.
    pub citation_accent: bool,
}

impl WordRecord {
    /// An open-class word with every flag off.
    pub fn new(token: &str, pos: &str, class: AccentClass) -> Self {
        WordRecord {
            token: token.into(),
            pos: pos.into(),
            class,
            phrasal_verb: false,
            contrastive: false,
            prefixed: false,
            preposed: false,
            given_local: false,
            given_global: false,
            proper_nominal: false,
            complex_nominal: false,
            citation_accent: false,
        }
    }
}

/// The decision and the 1-based number of the clause that made it. Nested
/// branches count as separate clauses, in reading order, giving twelve.
pub fn accent_word(w: &WordRecord) -> (Accent, usize) {
    if w.phrasal_verb {
        (Accent::Deaccent, 1)
    } else if w.class == AccentClass::ClosedCliticized {
        (Accent::Cliticize, 2)
    } else if w.class == AccentClass::ClosedDeaccented {
        (Accent::Deaccent, 3)
    } else if w.contrastive || w.prefixed || w.preposed {
        (Accent::Emphatic, 4)
    } else if w.proper_nominal {
        if w.given_local {
            (Accent::Emphatic, 5)
        } else {
            (Accent::Accent, 6)
        }
    } else if w.given_global && !w.given_local {
        (Accent::Emphatic, 7)
    } else if w.class == AccentClass::ClosedAccented {
        (Accent::Accent, 8)
    } else if w.given_local {
        (Accent::Deaccent, 9)
    } else if w.complex_nominal {
        if w.citation_accent {
            (Accent::Accent, 10)
        } else {
            (Accent::Deaccent, 11)
        }
    } else {
        (Accent::Accent, 12)
    }
}

pub fn accent_rules(words: &[WordRecord]) -> Vec<Accent> {
    words.iter().map(|w| accent_word(w).0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phrasal_verb_beats_everything() {
        let mut w = WordRecord::new("up", "RP", AccentClass::ClosedCliticized);
        w.phrasal_verb = true;
        w.contrastive = true;
        assert_eq!(accent_word(&w), (Accent::Deaccent, 1));
    }
}
