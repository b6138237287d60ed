//! Decision lists, boolean tables and disambiguation contexts.
//!
//! A list file has one `score<TAB>feature<TAB>label` row per entry, the
//! feature written as ` & `-joined atoms (`true` for the empty conjunction),
//! and ends with `default<TAB>label`. Boolean tables are comma-separated
//! with a header of feature names, 0/1 cells and the label last. Context
//! files hold `label<TAB>index<TAB>tokens`, where `index` points at the
//! target token and `?` stands for an unknown label.

use std::fmt::Write;

use textfst_core::declist::{extract_collocations, instance_of, BoolDataset, DecisionList, Entry, Example, Feature, Templates};

use super::fst::fmt_weight;
use super::{content_lines, err, num, ParseError, Parsed};

pub fn feature_text(f: &Feature) -> String {
    f.to_string()
}

pub fn parse_feature(s: &str) -> Feature {
    match s.trim() {
        "true" => Feature(Vec::new()),
        s => Feature::parse(s),
    }
}

pub fn write_list(l: &DecisionList) -> String {
    let mut out = String::new();
    for e in &l.entries {
        let _ = writeln!(out, "{}\t{}\t{}", fmt_weight(e.score), feature_text(&e.feature), e.label);
    }
    let _ = writeln!(out, "default\t{}", l.default);
    out
}

pub fn read_list(text: &str) -> Parsed<DecisionList> {
    let mut entries = Vec::new();
    let mut default = None;
    for (n, l) in content_lines(text) {
        if default.is_some() {
            return err(n, "entry after the default");
        }
        let f: Vec<&str> = l.split('\t').collect();
        match f[..] {
            ["default", label] => default = Some(label.trim().to_string()),
            [score, feature, label] => entries.push(Entry { feature: parse_feature(feature), label: label.trim().to_string(), score: num(n, score)? }),
            _ => return err(n, "expected `score<TAB>feature<TAB>label` or `default<TAB>label`"),
        }
    }
    let Some(default) = default else { return err(0, "missing `default` line") };
    let l = DecisionList { entries, default };
    if !l.is_sorted() {
        return err(0, "entries are not sorted by score");
    }
    Ok(l)
}

pub fn read_bool_table(text: &str) -> Parsed<BoolDataset> {
    let mut lines = content_lines(text);
    let Some((_, head)) = lines.next() else { return err(1, "empty file") };
    let mut names: Vec<String> = head.split(',').map(|s| s.trim().to_string()).collect();
    if names.len() < 2 {
        return err(1, "need at least one feature and a label column");
    }
    names.pop();
    let (mut rows, mut labels) = (Vec::new(), Vec::new());
    for (n, l) in lines {
        let cells: Vec<&str> = l.split(',').map(str::trim).collect();
        if cells.len() != names.len() + 1 {
            return err(n, format!("{} cells, header has {}", cells.len(), names.len() + 1));
        }
        let row = cells[..names.len()]
            .iter()
            .map(|c| match *c {
                "1" | "true" => Ok(true),
                "0" | "false" => Ok(false),
                c => err(n, format!("`{c}` is not 0 or 1")),
            })
            .collect::<Parsed<Vec<bool>>>()?;
        rows.push(row);
        labels.push(cells[names.len()].to_string());
    }
    BoolDataset::new(names, rows, labels).or_else(|e| err(0, e.to_string()))
}

/// One line of a context file.
#[derive(Clone, Debug, PartialEq)]
pub struct Context {
    pub label: Option<String>,
    pub index: usize,
    pub tokens: Vec<String>,
}

impl Context {
    /// Collocation atoms of the target occurrence.
    pub fn instance(&self, templates: &Templates, window: usize) -> Example {
        let target = self.tokens[self.index].rsplit_once('/').map_or(self.tokens[self.index].as_str(), |(w, _)| w);
        let feats = extract_collocations(&self.tokens, target, templates, window).into_iter().find(|(i, _)| *i == self.index).map(|(_, f)| f).unwrap_or_default();
        (instance_of(&feats), self.label.clone().unwrap_or_default())
    }
}

pub fn read_contexts(text: &str) -> Parsed<Vec<Context>> {
    content_lines(text)
        .map(|(n, l)| {
            let f: Vec<&str> = l.splitn(3, '\t').collect();
            let [label, index, sentence] = f[..] else { return err(n, "expected `label<TAB>index<TAB>tokens`") };
            let tokens: Vec<String> = sentence.split_whitespace().map(str::to_string).collect();
            let index: usize = index.trim().parse().or_else(|_| err(n, format!("bad index `{index}`")))?;
            if index >= tokens.len() {
                return Err(ParseError { line: n, msg: format!("index {index} past the {} tokens", tokens.len()) });
            }
            let label = (label != "?").then(|| label.to_string());
            Ok(Context { label, index, tokens })
        })
        .collect()
}

/// Every atom seen in `data`, each as a one-atom candidate.
pub fn atom_candidates(data: &[Example]) -> Vec<Feature> {
    let atoms: std::collections::BTreeSet<&String> = data.iter().flat_map(|(x, _)| x).collect();
    atoms.into_iter().map(|a| Feature::atom(a.clone())).collect()
}

pub fn read_candidates(text: &str) -> Vec<Feature> {
    content_lines(text).map(|(_, l)| parse_feature(l)).collect()
}
