//! Weighted context-dependent rewrite rules `φ → ψ / λ __ ρ`.
//!
//! Rules are obligatory and apply left to right: every non-overlapping site
//! where the focus matches with both contexts satisfied on the input string
//! must be rewritten, one weighted alternative per site. Rule weights are
//! written as base-2 costs and converted to natural-log tropical weights.

mod compile;
mod parse;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use compile::{apply, compile_rule, compile_ruleset};
pub use parse::{parse_ruleset, render_symbol};

use crate::symbols::SymbolTable;

/// Word boundary symbol, matching only at the string edges.
pub const BOUNDARY: &str = "#";

/// Converts a base-2 rule weight to a natural-log tropical weight.
pub fn bits_to_nat(w: f64) -> f64 {
    w * core::f64::consts::LN_2
}

/// One position of a focus or context: a symbol set, optionally starred
/// (contexts only).
#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    /// Source spelling, `a` or `{Vowel}`.
    pub name: String,
    pub set: BTreeSet<String>,
    pub star: bool,
}

impl Item {
    pub fn symbol(s: &str) -> Self {
        Item { name: render_symbol(s), set: [String::from(s)].into_iter().collect(), star: false }
    }

    pub fn set<S: AsRef<str>>(name: &str, members: &[S]) -> Self {
        Item { name: alloc::format!("{{{name}}}"), set: members.iter().map(|s| s.as_ref().into()).collect(), star: false }
    }

    pub fn starred(mut self) -> Self {
        self.star = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRule {
    pub focus: Vec<Item>,
    /// Output strings with base-2 weights; an empty string deletes the focus.
    pub alternatives: Vec<(Vec<String>, f64)>,
    pub left: Vec<Item>,
    pub right: Vec<Item>,
}

impl RewriteRule {
    /// Symbols the rule can write.
    pub fn output_symbols(&self) -> BTreeSet<&str> {
        self.alternatives.iter().flat_map(|(o, _)| o.iter().map(String::as_str)).collect()
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = |v: &[Item]| -> String {
            v.iter().map(|i| if i.star { alloc::format!("{}*", i.name) } else { i.name.clone() }).collect()
        };
        write!(f, "{} -> (", items(&self.focus))?;
        for (k, (o, w)) in self.alternatives.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if o.is_empty() {
                write!(f, "{{DEL}}")?;
            }
            for s in o {
                write!(f, "{}", render_symbol(s))?;
            }
            write!(f, "<{w}>")?;
        }
        write!(f, ") /")?;
        for side in [items(&self.left), "__".into(), items(&self.right)] {
            if !side.is_empty() {
                write!(f, " {side}")?;
            }
        }
        write!(f, " ;;")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ruleset {
    /// Expanded macro definitions.
    pub macros: BTreeMap<String, Vec<String>>,
    /// Macro names in definition order.
    pub macro_order: Vec<String>,
    /// Number of rules that precede the `End Prolog` line.
    pub prolog_end: usize,
    pub rules: Vec<RewriteRule>,
}

impl Ruleset {
    /// The `{All}` symbols in declaration order.
    pub fn alphabet(&self) -> &[String] {
        self.macros.get("All").map_or(&[], Vec::as_slice)
    }

    /// `{All}` followed by every output symbol of every rule: the tape
    /// alphabet of the compiled cascade.
    pub fn symbols(&self) -> SymbolTable {
        let mut t = SymbolTable::from_symbols(self.alphabet());
        for r in &self.rules {
            for s in r.output_symbols() {
                t.add(s);
            }
        }
        t
    }
}

/// Whether some prefix of `seq` matches the item sequence.
fn matches_prefix<S: AsRef<str>>(items: &[Item], seq: &[S]) -> bool {
    let Some((first, rest)) = items.split_first() else {
        return true;
    };
    let here = seq.first().is_some_and(|s| first.set.contains(s.as_ref()));
    if first.star {
        matches_prefix(rest, seq) || (here && matches_prefix(items, &seq[1..]))
    } else {
        here && matches_prefix(rest, &seq[1..])
    }
}

/// Reference implementation: rewrites `input` directly and returns every
/// outcome with its best (natural-log) weight.
pub fn apply_direct<S: AsRef<str>>(r: &RewriteRule, input: &[S]) -> BTreeMap<Vec<String>, f64> {
    let mut padded: Vec<&str> = Vec::with_capacity(input.len() + 2);
    padded.push(BOUNDARY);
    padded.extend(input.iter().map(AsRef::as_ref));
    padded.push(BOUNDARY);
    let reversed: Vec<&str> = padded.iter().rev().copied().collect();
    let left: Vec<Item> = r.left.iter().rev().cloned().collect();
    let len = r.focus.len();
    let eligible = |i: usize| -> bool {
        i + len < padded.len()
            && r.focus.iter().zip(&padded[i..i + len]).all(|(it, s)| it.set.contains(*s))
            && matches_prefix(&left, &reversed[padded.len() - i..])
            && matches_prefix(&r.right, &padded[i + len..])
    };

    // Partial outcomes: output so far -> weight.
    let mut outcomes: BTreeMap<Vec<String>, f64> = BTreeMap::new();
    outcomes.insert(Vec::new(), 0.0);
    let mut i = 1;
    while i + 1 < padded.len() {
        if len > 0 && eligible(i) {
            let mut next = BTreeMap::new();
            for (out, w) in &outcomes {
                for (alt, aw) in &r.alternatives {
                    let mut o = out.clone();
                    o.extend(alt.iter().cloned());
                    let w = w + bits_to_nat(*aw);
                    let e = next.entry(o).or_insert(f64::INFINITY);
                    if w < *e {
                        *e = w;
                    }
                }
            }
            outcomes = next;
            i += len;
        } else {
            outcomes = core::mem::take(&mut outcomes)
                .into_iter()
                .map(|(mut o, w)| {
                    o.push(padded[i].into());
                    (o, w)
                })
                .collect();
            i += 1;
        }
    }
    outcomes
}

/// Applies the rules in order, each to every outcome of the previous one.
pub fn apply_ruleset_direct<S: AsRef<str>>(rules: &[RewriteRule], input: &[S]) -> BTreeMap<Vec<String>, f64> {
    let mut outcomes: BTreeMap<Vec<String>, f64> = BTreeMap::new();
    outcomes.insert(input.iter().map(|s| s.as_ref().into()).collect(), 0.0);
    for r in rules {
        let mut next = BTreeMap::new();
        for (s, w) in &outcomes {
            for (o, v) in apply_direct(r, s) {
                let e = next.entry(o).or_insert(f64::INFINITY);
                if w + v < *e {
                    *e = w + v;
                }
            }
        }
        outcomes = next;
    }
    outcomes
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn strs(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn unconditional_everywhere() {
        let r = RewriteRule { focus: vec![Item::symbol("a")], alternatives: vec![(strs("b"), 0.0)], left: vec![], right: vec![] };
        let out = apply_direct(&r, &strs("aaa"));
        assert_eq!(out.into_iter().collect::<Vec<_>>(), vec![(strs("bbb"), 0.0)]);
    }

    #[test]
    fn final_k_only() {
        let r = RewriteRule {
            focus: vec![Item::symbol("k")],
            alternatives: vec![(vec!["??".into()], 0.15), (vec!["kk".into()], 3.32)],
            left: vec![],
            right: vec![Item::symbol(BOUNDARY)],
        };
        let out = apply_direct(&r, &strs("kak"));
        let mut a = strs("ka");
        a.push("??".into());
        let mut b = strs("ka");
        b.push("kk".into());
        assert_eq!(out.len(), 2);
        assert!((out[&a] - bits_to_nat(0.15)).abs() < 1e-12);
        assert!((out[&b] - bits_to_nat(3.32)).abs() < 1e-12);
    }

    #[test]
    fn leftmost_sites_do_not_overlap() {
        let r = RewriteRule { focus: vec![Item::symbol("a"), Item::symbol("a")], alternatives: vec![(strs("x"), 0.0)], left: vec![], right: vec![] };
        assert_eq!(apply_direct(&r, &strs("aaa")).into_keys().collect::<Vec<_>>(), vec![strs("xa")]);
    }

    #[test]
    fn contexts_read_the_input() {
        // a -> b / a __ : in "aaa" every a after an input a is rewritten.
        let r = RewriteRule { focus: vec![Item::symbol("a")], alternatives: vec![(strs("b"), 0.0)], left: vec![Item::symbol("a")], right: vec![] };
        assert_eq!(apply_direct(&r, &strs("aaa")).into_keys().collect::<Vec<_>>(), vec![strs("abb")]);
    }
}
