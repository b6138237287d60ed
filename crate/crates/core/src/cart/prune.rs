//! Cost-complexity pruning and cross-validated subtree selection.

use alloc::vec::Vec;

use super::{grow_tree, Dataset, GrowParams, Prediction, Target, Tree};
use crate::error::{Error, Result};

const TOL: f64 = 1e-12;

/// One member of the nested pruning sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct PruneStep {
    /// Smallest complexity parameter at which this subtree is optimal.
    pub alpha: f64,
    pub tree: Tree,
    /// Resubstitution cost R(T).
    pub cost: f64,
    pub leaves: usize,
}

/// g(t) = (R(t) − R(T_t)) / (|T_t| − 1) for every internal node, in units of
/// the root's row count.
fn link_strengths(t: &Tree) -> Vec<(usize, f64)> {
    let n = t.nodes[0].stats.n();
    t.descendants(0)
        .into_iter()
        .filter(|&i| t.nodes[i].split.is_some())
        .map(|i| {
            let gain = t.nodes[i].stats.error() - t.subtree_error(i);
            (i, gain / n / (t.subtree_leaves(i) - 1) as f64)
        })
        .collect()
}

fn step(alpha: f64, tree: Tree) -> PruneStep {
    PruneStep { alpha, cost: tree.cost(), leaves: tree.leaves(), tree }
}

/// Weakest-link pruning from the full tree down to the root.
///
/// The first entry (α = 0) is the smallest subtree with the full tree's
/// cost: links that buy no reduction in R are cut first.
pub fn prune_sequence(t: &Tree) -> Vec<PruneStep> {
    let mut cur = t.clone();
    loop {
        let zero: Vec<usize> = link_strengths(&cur).into_iter().filter(|&(_, g)| g <= TOL).map(|(i, _)| i).collect();
        if zero.is_empty() {
            break;
        }
        cur = cur.collapsed(&zero);
    }
    let mut seq = alloc::vec![step(0.0, cur.clone())];
    while cur.nodes[0].split.is_some() {
        let links = link_strengths(&cur);
        let alpha = links.iter().map(|&(_, g)| g).fold(f64::INFINITY, f64::min);
        let weakest: Vec<usize> = links.iter().filter(|&&(_, g)| g <= alpha + TOL).map(|&(i, _)| i).collect();
        cur = cur.collapsed(&weakest);
        seq.push(step(alpha, cur.clone()));
    }
    seq
}

/// The member of `seq` that is optimal at complexity `alpha`.
fn subtree_at(seq: &[PruneStep], alpha: f64) -> &Tree {
    let k = seq.iter().rposition(|s| s.alpha <= alpha + TOL).unwrap_or(0);
    &seq[k].tree
}

/// Outcome of cross-validated selection.
#[derive(Clone, Debug, PartialEq)]
pub struct CvSelection {
    pub tree: Tree,
    pub alpha: f64,
    /// Index of the chosen member of `sequence`.
    pub index: usize,
    pub sequence: Vec<PruneStep>,
    /// Cross-validated error per member of `sequence` (misclassification
    /// rate, or mean squared error for regression).
    pub cv_errors: Vec<f64>,
}

/// Grows on all rows, estimates each pruned subtree's honest error by
/// `folds`-fold cross-validation (row `i` is held out in fold `i mod folds`),
/// and returns the subtree with the lowest estimate; ties go to the smaller
/// tree. Fold trees are compared at the geometric mean of consecutive α.
pub fn cv_select(d: &Dataset, params: GrowParams, folds: usize) -> Result<CvSelection> {
    if folds < 2 || d.len() < folds {
        return Err(Error::TooFewRows { rows: d.len(), folds });
    }
    let full = grow_tree(d, params)?;
    let sequence = prune_sequence(&full);
    let betas: Vec<f64> = (0..sequence.len())
        .map(|k| match sequence.get(k + 1) {
            Some(next) => libm::sqrt(sequence[k].alpha * next.alpha),
            None => f64::INFINITY,
        })
        .collect();
    let mut errors = alloc::vec![0.0; sequence.len()];
    for fold in 0..folds {
        let (test, train): (Vec<usize>, Vec<usize>) = (0..d.len()).partition(|i| i % folds == fold);
        let fold_seq = prune_sequence(&grow_tree(&d.subset(&train), params)?);
        for (k, &beta) in betas.iter().enumerate() {
            let t = subtree_at(&fold_seq, beta);
            for &i in &test {
                errors[k] += loss(t.predict(&d.rows[i])?, &d.target, i);
            }
        }
    }
    for e in &mut errors {
        *e /= d.len() as f64;
    }
    let mut index = 0;
    for k in 1..errors.len() {
        if errors[k] <= errors[index] + TOL {
            index = k;
        }
    }
    Ok(CvSelection { tree: sequence[index].tree.clone(), alpha: sequence[index].alpha, index, sequence, cv_errors: errors })
}

fn loss(p: Prediction, target: &Target, i: usize) -> f64 {
    match (p, target) {
        (Prediction::Class { label, .. }, Target::Classes { labels, .. }) => (label != labels[i]) as u8 as f64,
        (Prediction::Value(v), Target::Values(ys)) => (v - ys[i]) * (v - ys[i]),
        _ => unreachable!("prediction kind follows the dataset target"),
    }
}
