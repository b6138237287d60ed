//! Export of context-feature classification trees as weighted rewrite rules.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{FeatureKind, Stats, Test, Tree};
use crate::error::{Error, Result};
use crate::rewrite::render_symbol;

/// One leaf as a rule `focus -> (alternatives) / left __ right`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExportedRule {
    pub focus: String,
    /// Output symbols and weight in bits (−log₂ relative frequency).
    pub alternatives: Vec<(Vec<String>, f64)>,
    /// Allowed symbols per position, nearest position last.
    pub left: Vec<BTreeSet<String>>,
    /// Allowed symbols per position, nearest position first.
    pub right: Vec<BTreeSet<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExportedRules {
    /// Input alphabet (focus plus all context-feature values except `#`).
    pub alphabet: BTreeSet<String>,
    pub rules: Vec<ExportedRule>,
}

/// Weight text: three significant digits, at least two decimals.
pub fn format_rule_weight(bits: f64) -> String {
    let bits = if bits.abs() < 5e-13 { 0.0 } else { bits };
    let int_digits = if bits < 1.0 { 0 } else { libm::floor(libm::log10(bits)) as i32 + 1 };
    let decimals = if bits == 0.0 { 2 } else { (3 - int_digits).max(2) as usize };
    alloc::format!("{bits:.decimals$}")
}

/// Class names split into output symbols on whitespace and `+`.
fn output_symbols(class: &str) -> Vec<String> {
    class.split(|c: char| c.is_whitespace() || c == '+').filter(|s| !s.is_empty()).map(String::from).collect()
}

/// Turns every leaf of a classification tree into one weighted rule.
///
/// `contexts` maps feature names to positions relative to the focus
/// (negative = left). A feature at position 0 restricts which leaves apply
/// to `focus` at all. Each split on the root-to-leaf path narrows the set of
/// symbols allowed at its position; a path through any other feature is an
/// error.
pub fn export_rules(t: &Tree, focus: &str, contexts: &[(&str, i32)]) -> Result<ExportedRules> {
    let Some(classes) = &t.classes else {
        return Err(Error::NotClassification);
    };
    let position = |f: usize| -> Result<(i32, &Vec<String>)> {
        let spec = &t.features[f];
        match (&spec.kind, contexts.iter().find(|(n, _)| *n == spec.name)) {
            (FeatureKind::Categorical(inv), Some(&(_, p))) => Ok((p, inv)),
            _ => Err(Error::NoContextPosition(spec.name.clone())),
        }
    };
    let mut alphabet: BTreeSet<String> = BTreeSet::new();
    alphabet.insert(focus.to_string());
    for (name, _) in contexts {
        if let Some(spec) = t.features.iter().find(|s| s.name == *name) {
            if let FeatureKind::Categorical(inv) = &spec.kind {
                alphabet.extend(inv.iter().filter(|v| *v != "#").cloned());
            }
        }
    }

    let mut rules = Vec::new();
    'leaves: for leaf in t.descendants(0) {
        let node = &t.nodes[leaf];
        if node.split.is_some() {
            continue;
        }
        let mut allowed: BTreeMap<i32, (BTreeSet<usize>, &Vec<String>)> = BTreeMap::new();
        for (anc, left) in t.path_to(leaf) {
            let (split, _, _) = t.nodes[anc].split.as_ref().unwrap();
            let (pos, inv) = position(split.feature)?;
            let Test::Subset(a) = &split.test else {
                return Err(Error::NoContextPosition(t.features[split.feature].name.clone()));
            };
            let entry = allowed.entry(pos).or_insert_with(|| ((0..inv.len()).collect(), inv));
            entry.0.retain(|c| a.contains(c) == left);
        }
        let to_names = |(set, inv): &(BTreeSet<usize>, &Vec<String>)| -> Option<BTreeSet<String>> {
            (set.len() < inv.len()).then(|| set.iter().map(|&c| inv[c].clone()).collect())
        };
        let full = |inv: &Vec<String>| -> BTreeSet<String> { inv.iter().cloned().collect() };
        if let Some(s) = allowed.get(&0) {
            if !s.0.iter().any(|&c| s.1[c] == focus) {
                continue 'leaves;
            }
        }
        let inventory_at = |p: i32| -> BTreeSet<String> {
            contexts
                .iter()
                .filter(|(_, q)| *q == p)
                .find_map(|(n, _)| t.features.iter().find(|s| s.name == *n))
                .map(|s| match &s.kind {
                    FeatureKind::Categorical(inv) => full(inv),
                    FeatureKind::Continuous => BTreeSet::new(),
                })
                .unwrap_or_else(|| alphabet.clone())
        };
        let constrained = |p: i32| allowed.get(&p).and_then(to_names);
        let far_left = allowed.keys().filter(|&&p| p < 0 && constrained(p).is_some()).min().copied();
        let far_right = allowed.keys().filter(|&&p| p > 0 && constrained(p).is_some()).max().copied();
        let left = far_left.map_or(Vec::new(), |m| (m..0).map(|p| constrained(p).unwrap_or_else(|| inventory_at(p))).collect());
        let right =
            far_right.map_or(Vec::new(), |m| (1..=m).map(|p| constrained(p).unwrap_or_else(|| inventory_at(p))).collect());

        let Stats::Class(counts) = &node.stats else {
            return Err(Error::NotClassification);
        };
        let n: f64 = counts.iter().sum();
        let mut alts: Vec<(usize, f64)> = counts.iter().copied().enumerate().filter(|&(_, c)| c > 0.0).collect();
        alts.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let alternatives = alts.into_iter().map(|(c, k)| (output_symbols(&classes[c]), -libm::log2(k / n))).collect();
        rules.push(ExportedRule { focus: focus.to_string(), alternatives, left, right });
    }
    Ok(ExportedRules { alphabet, rules })
}

impl ExportedRules {
    /// Ruleset text in the rewrite module's format. Context sets with more
    /// than one member become generated macros `{C1}`, `{C2}`, ….
    pub fn to_text(&self) -> String {
        let mut macros: Vec<&BTreeSet<String>> = Vec::new();
        for r in &self.rules {
            for s in r.left.iter().chain(&r.right) {
                if s.len() > 1 && !macros.contains(&s) {
                    macros.push(s);
                }
            }
        }
        let set_text = |s: &BTreeSet<String>| -> String {
            if s.len() == 1 {
                let sym = s.iter().next().unwrap();
                return if sym == "#" { "#".to_string() } else { render_symbol(sym) };
            }
            let i = macros.iter().position(|m| *m == s).unwrap();
            alloc::format!("{{C{}}}", i + 1)
        };
        let mut out = String::new();
        let all: String = self.alphabet.iter().map(|s| render_symbol(s)).collect();
        let _ = writeln!(out, "{{All}} := {all} ;;");
        for (i, m) in macros.iter().enumerate() {
            let body: String = m.iter().map(|s| if s == "#" { "#".to_string() } else { render_symbol(s) }).collect();
            let _ = writeln!(out, "{{C{}}} := {body} ;;", i + 1);
        }
        let _ = writeln!(out, "End Prolog");
        for r in &self.rules {
            let alts: Vec<String> = r
                .alternatives
                .iter()
                .map(|(o, w)| {
                    let o: String = if o.is_empty() {
                        "{DEL}".into()
                    } else {
                        o.iter().map(|s| alloc::format!("{{{s}}}")).collect()
                    };
                    alloc::format!("{o}<{}>", format_rule_weight(*w))
                })
                .collect();
            let left: String = r.left.iter().map(set_text).collect();
            let right: String = r.right.iter().map(set_text).collect();
            let sep_l = if left.is_empty() { "" } else { " " };
            let sep_r = if right.is_empty() { "" } else { " " };
            let _ = writeln!(
                out,
                "{} -> ({}) /{sep_l}{left} __{sep_r}{right} ;;",
                render_symbol(&r.focus),
                alts.join(", ")
            );
        }
        out
    }
}
