//! Classification and regression trees.
//!
//! Splits are chosen by minimizing the weighted impurity of the two children
//! (entropy or resubstitution error for classification, squared error for
//! regression). Trees are grown until nodes are pure or cannot be split, then
//! cut back by cost-complexity pruning.

mod export;
mod prune;
mod split;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use export::{export_rules, format_rule_weight, ExportedRule, ExportedRules};
pub use prune::{cv_select, prune_sequence, CvSelection, PruneStep};
pub use split::{best_split, Split, Test};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum FeatureKind {
    Continuous,
    /// Categorical with a fixed inventory; values are indices into it.
    Categorical(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

impl FeatureSpec {
    pub fn continuous(name: &str) -> Self {
        FeatureSpec { name: name.into(), kind: FeatureKind::Continuous }
    }

    pub fn categorical<S: AsRef<str>>(name: &str, values: &[S]) -> Self {
        FeatureSpec { name: name.into(), kind: FeatureKind::Categorical(values.iter().map(|v| v.as_ref().into()).collect()) }
    }

    /// Index of a category name.
    pub fn category(&self, value: &str) -> Option<usize> {
        match &self.kind {
            FeatureKind::Categorical(v) => v.iter().position(|x| x == value),
            FeatureKind::Continuous => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Cat(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Classes { names: Vec<String>, labels: Vec<usize> },
    Values(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub features: Vec<FeatureSpec>,
    pub rows: Vec<Vec<Value>>,
    pub target: Target,
}

impl Dataset {
    /// Checks every row against the schema.
    pub fn new(features: Vec<FeatureSpec>, rows: Vec<Vec<Value>>, target: Target) -> Result<Self> {
        let n = match &target {
            Target::Classes { names, labels } => {
                if let Some(&l) = labels.iter().find(|&&l| l >= names.len()) {
                    return Err(Error::Invalid(alloc::format!("class index {l} out of range")));
                }
                labels.len()
            }
            Target::Values(v) => {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Invalid("non-finite regression target".into()));
                }
                v.len()
            }
        };
        if n != rows.len() {
            return Err(Error::Invalid(alloc::format!("{} rows but {n} targets", rows.len())));
        }
        for row in &rows {
            check_row(&features, row)?;
        }
        Ok(Dataset { features, rows, target })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_classification(&self) -> bool {
        matches!(self.target, Target::Classes { .. })
    }

    /// The rows at the given indices, same schema.
    pub fn subset(&self, idx: &[usize]) -> Dataset {
        let rows = idx.iter().map(|&i| self.rows[i].clone()).collect();
        let target = match &self.target {
            Target::Classes { names, labels } => {
                Target::Classes { names: names.clone(), labels: idx.iter().map(|&i| labels[i]).collect() }
            }
            Target::Values(v) => Target::Values(idx.iter().map(|&i| v[i]).collect()),
        };
        Dataset { features: self.features.clone(), rows, target }
    }

    fn stats(&self, idx: &[usize]) -> Stats {
        match &self.target {
            Target::Classes { names, labels } => {
                let mut c = vec![0.0; names.len()];
                for &i in idx {
                    c[labels[i]] += 1.0;
                }
                Stats::Class(c)
            }
            Target::Values(v) => Stats::from_values(idx.iter().map(|&i| v[i])),
        }
    }
}

fn check_row(features: &[FeatureSpec], row: &[Value]) -> Result<()> {
    if row.len() != features.len() {
        return Err(Error::Invalid(alloc::format!("row has {} values for {} features", row.len(), features.len())));
    }
    for (f, v) in features.iter().zip(row) {
        match (&f.kind, v) {
            (FeatureKind::Continuous, Value::Num(x)) if !x.is_nan() => {}
            (FeatureKind::Categorical(inv), Value::Cat(c)) => {
                if *c >= inv.len() {
                    return Err(Error::UnseenCategory(f.name.clone()));
                }
            }
            _ => return Err(Error::FeatureKind(f.name.clone())),
        }
    }
    Ok(())
}

/// Summary of the training rows at a node.
#[derive(Clone, Debug, PartialEq)]
pub enum Stats {
    /// Per-class counts.
    Class(Vec<f64>),
    Value { n: f64, mean: f64, sse: f64 },
}

impl Stats {
    fn from_values(it: impl Iterator<Item = f64> + Clone) -> Stats {
        let n = it.clone().count() as f64;
        let mean = if n > 0.0 { it.clone().sum::<f64>() / n } else { 0.0 };
        let sse = it.map(|y| (y - mean) * (y - mean)).sum();
        Stats::Value { n, mean, sse }
    }

    pub fn n(&self) -> f64 {
        match self {
            Stats::Class(c) => c.iter().sum(),
            Stats::Value { n, .. } => *n,
        }
    }

    /// Plurality class (lowest index on ties).
    pub fn majority(&self) -> Option<usize> {
        match self {
            Stats::Class(c) => {
                let mut best = 0;
                for (i, &x) in c.iter().enumerate() {
                    if x > c[best] {
                        best = i;
                    }
                }
                Some(best)
            }
            Stats::Value { .. } => None,
        }
    }

    /// Resubstitution cost: misclassified rows, or squared error.
    pub fn error(&self) -> f64 {
        match self {
            Stats::Class(c) => self.n() - c[self.majority().unwrap()],
            Stats::Value { sse, .. } => *sse,
        }
    }

    fn is_pure(&self) -> bool {
        match self {
            Stats::Class(c) => c.iter().filter(|&&x| x > 0.0).count() <= 1,
            Stats::Value { sse, .. } => *sse <= 1e-12,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Criterion {
    /// Weighted entropy of the children (classification; regression falls
    /// back to squared error).
    #[default]
    Entropy,
    /// Resubstitution error of the children.
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowParams {
    /// Minimum number of rows in each child of a split.
    pub min_leaf: usize,
    pub criterion: Criterion,
}

impl Default for GrowParams {
    fn default() -> Self {
        GrowParams { min_leaf: 1, criterion: Criterion::Entropy }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub stats: Stats,
    /// Split with left (test true) and right child indices.
    pub split: Option<(Split, usize, usize)>,
}

/// A binary tree stored as an arena; node 0 is the root.
#[derive(Clone, Debug, PartialEq)]
pub struct Tree {
    pub features: Vec<FeatureSpec>,
    /// Class names for classification trees.
    pub classes: Option<Vec<String>>,
    pub nodes: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Prediction {
    Class { label: usize, name: String, distribution: Vec<f64> },
    Value(f64),
}

pub fn grow_tree(d: &Dataset, params: GrowParams) -> Result<Tree> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let classes = match &d.target {
        Target::Classes { names, .. } => Some(names.clone()),
        Target::Values(_) => None,
    };
    let mut tree = Tree { features: d.features.clone(), classes, nodes: Vec::new() };
    let all: Vec<usize> = (0..d.len()).collect();
    tree.nodes.push(Node { stats: d.stats(&all), split: None });
    let mut stack = vec![(0usize, all)];
    while let Some((id, rows)) = stack.pop() {
        if tree.nodes[id].stats.is_pure() {
            continue;
        }
        let Some(split) = best_split(d, &rows, params.criterion, params.min_leaf)? else {
            continue;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| split.goes_left(&d.rows[i]));
        let l = tree.nodes.len();
        tree.nodes.push(Node { stats: d.stats(&left), split: None });
        tree.nodes.push(Node { stats: d.stats(&right), split: None });
        tree.nodes[id].split = Some((split, l, l + 1));
        stack.push((l + 1, right));
        stack.push((l, left));
    }
    Ok(tree)
}

impl Tree {
    pub fn is_classification(&self) -> bool {
        self.classes.is_some()
    }

    /// Leaf reached by a row.
    pub fn leaf_of(&self, row: &[Value]) -> Result<usize> {
        check_row(&self.features, row)?;
        let mut id = 0;
        while let Some((s, l, r)) = &self.nodes[id].split {
            id = if s.goes_left(row) { *l } else { *r };
        }
        Ok(id)
    }

    pub fn predict(&self, row: &[Value]) -> Result<Prediction> {
        let leaf = &self.nodes[self.leaf_of(row)?];
        Ok(match (&leaf.stats, &self.classes) {
            (Stats::Class(c), Some(names)) => {
                let label = leaf.stats.majority().unwrap();
                let n = leaf.stats.n();
                Prediction::Class { label, name: names[label].clone(), distribution: c.iter().map(|x| x / n).collect() }
            }
            (Stats::Value { mean, .. }, _) => Prediction::Value(*mean),
            _ => unreachable!("class stats without class names"),
        })
    }

    /// Nodes reachable from `root`, preorder.
    pub fn descendants(&self, root: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            out.push(id);
            if let Some((_, l, r)) = &self.nodes[id].split {
                stack.push(*r);
                stack.push(*l);
            }
        }
        out
    }

    pub fn leaves(&self) -> usize {
        self.subtree_leaves(0)
    }

    fn subtree_leaves(&self, id: usize) -> usize {
        self.descendants(id).iter().filter(|&&i| self.nodes[i].split.is_none()).count()
    }

    fn subtree_error(&self, id: usize) -> f64 {
        self.descendants(id).iter().filter(|&&i| self.nodes[i].split.is_none()).map(|&i| self.nodes[i].stats.error()).sum()
    }

    /// Resubstitution cost R(T): leaf errors over the root's row count.
    pub fn cost(&self) -> f64 {
        self.subtree_error(0) / self.nodes[0].stats.n()
    }

    /// Path from the root to `node` as (ancestor, went-left) pairs.
    pub fn path_to(&self, node: usize) -> Vec<(usize, bool)> {
        let mut parent = vec![None; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some((_, l, r)) = &n.split {
                parent[*l] = Some((i, true));
                parent[*r] = Some((i, false));
            }
        }
        let mut path = Vec::new();
        let mut cur = node;
        while let Some((p, left)) = parent[cur] {
            path.push((p, left));
            cur = p;
        }
        path.reverse();
        path
    }

    /// Copy with the subtrees under `collapse` turned into leaves and
    /// unreachable nodes dropped (preorder renumbering).
    pub(crate) fn collapsed(&self, collapse: &[usize]) -> Tree {
        let mut nodes = Vec::new();
        let mut stack = vec![(0usize, None::<(usize, bool)>)];
        while let Some((old, parent)) = stack.pop() {
            let id = nodes.len();
            nodes.push(Node { stats: self.nodes[old].stats.clone(), split: None });
            if let Some((p, left)) = parent {
                if let Some((_, l, r)) = &mut nodes[p].split {
                    if left {
                        *l = id;
                    } else {
                        *r = id;
                    }
                }
            }
            if collapse.contains(&old) {
                continue;
            }
            if let Some((s, l, r)) = &self.nodes[old].split {
                nodes[id].split = Some((s.clone(), usize::MAX, usize::MAX));
                stack.push((*r, Some((id, false))));
                stack.push((*l, Some((id, true))));
            }
        }
        Tree { features: self.features.clone(), classes: self.classes.clone(), nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bool_dataset(rows: &[(&[u8], usize)]) -> Dataset {
        let k = rows[0].0.len();
        let features = (0..k).map(|i| FeatureSpec::categorical(&alloc::format!("x{}", i + 1), &["0", "1"])).collect();
        let data = rows.iter().map(|(r, _)| r.iter().map(|&b| Value::Cat(b as usize)).collect()).collect();
        let target = Target::Classes { names: vec!["0".into(), "1".into()], labels: rows.iter().map(|r| r.1).collect() };
        Dataset::new(features, data, target).unwrap()
    }

    #[test]
    fn single_class_is_leaf() {
        let d = bool_dataset(&[(&[0, 1], 1), (&[1, 1], 1)]);
        let t = grow_tree(&d, GrowParams::default()).unwrap();
        assert_eq!(t.nodes.len(), 1);
    }

    #[test]
    fn copies_feature() {
        let d = bool_dataset(&[(&[0, 1], 0), (&[1, 1], 1), (&[0, 0], 0), (&[1, 0], 1)]);
        let t = grow_tree(&d, GrowParams::default()).unwrap();
        assert_eq!(t.leaves(), 2);
        assert_eq!(t.nodes[0].split.as_ref().unwrap().0.feature, 0);
        assert_eq!(t.cost(), 0.0);
    }

    #[test]
    fn unseen_category_named() {
        let d = bool_dataset(&[(&[0], 0), (&[1], 1)]);
        let t = grow_tree(&d, GrowParams::default()).unwrap();
        assert_eq!(t.predict(&[Value::Cat(2)]), Err(Error::UnseenCategory("x1".into())));
        assert_eq!(t.predict(&[Value::Num(0.0)]), Err(Error::FeatureKind("x1".into())));
    }

    #[test]
    fn empty_dataset_rejected() {
        let d = Dataset::new(vec![], vec![], Target::Values(vec![])).unwrap();
        assert_eq!(grow_tree(&d, GrowParams::default()), Err(Error::EmptyDataset));
    }
}
