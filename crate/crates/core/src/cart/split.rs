//! Candidate split enumeration.

use alloc::vec;
use alloc::vec::Vec;

use super::{Criterion, Dataset, FeatureKind, Target, Value};
use crate::error::{Error, Result};

/// Inventories up to this size are searched exhaustively.
const EXHAUSTIVE_LIMIT: usize = 12;
const TIE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Test {
    /// `x ≤ k` goes left.
    Threshold(f64),
    /// `x ∈ A` goes left; `A` is sorted.
    Subset(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub test: Test,
    /// Weighted mean impurity of the two children.
    pub impurity: f64,
}

impl Split {
    pub fn goes_left(&self, row: &[Value]) -> bool {
        match (&self.test, row[self.feature]) {
            (Test::Threshold(k), Value::Num(x)) => x <= *k,
            (Test::Subset(a), Value::Cat(c)) => a.binary_search(&c).is_ok(),
            _ => false,
        }
    }
}

fn entropy_bits(counts: &[f64]) -> f64 {
    let n: f64 = counts.iter().sum();
    if n == 0.0 {
        return 0.0;
    }
    -counts.iter().filter(|&&c| c > 0.0).map(|&c| c / n * libm::log2(c / n)).sum::<f64>()
}

/// Total (not averaged) impurity of a set of rows.
fn impurity(d: &Dataset, rows: &[usize], criterion: Criterion) -> f64 {
    match &d.target {
        Target::Classes { names, labels } => {
            let mut c = vec![0.0; names.len()];
            for &i in rows {
                c[labels[i]] += 1.0;
            }
            let n = rows.len() as f64;
            match criterion {
                Criterion::Entropy => n * entropy_bits(&c),
                Criterion::Error => n - c.iter().copied().fold(0.0, f64::max),
            }
        }
        Target::Values(v) => {
            let n = rows.len() as f64;
            if n == 0.0 {
                return 0.0;
            }
            let mean = rows.iter().map(|&i| v[i]).sum::<f64>() / n;
            rows.iter().map(|&i| (v[i] - mean) * (v[i] - mean)).sum()
        }
    }
}

/// Best split of the node holding `rows`, or `None` when no admissible split
/// lowers the impurity. Ties go to the lowest feature index, then the
/// smallest threshold or the lexicographically least subset.
pub fn best_split(d: &Dataset, rows: &[usize], criterion: Criterion, min_leaf: usize) -> Result<Option<Split>> {
    let n = rows.len() as f64;
    if rows.len() < 2 {
        return Ok(None);
    }
    let parent = impurity(d, rows, criterion);
    let mut best: Option<(f64, usize, Test)> = None;
    let min_leaf = min_leaf.max(1);
    for (f, spec) in d.features.iter().enumerate() {
        let tests = candidates(d, rows, f, &spec.kind, &spec.name)?;
        for test in tests {
            let probe = Split { feature: f, test, impurity: 0.0 };
            let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| probe.goes_left(&d.rows[i]));
            if l.len() < min_leaf || r.len() < min_leaf {
                continue;
            }
            let imp = impurity(d, &l, criterion) + impurity(d, &r, criterion);
            if best.as_ref().is_none_or(|(b, _, _)| imp < b - TIE) {
                best = Some((imp, f, probe.test));
            }
        }
    }
    Ok(best.filter(|(imp, _, _)| *imp < parent - TIE).map(|(imp, feature, test)| Split { feature, test, impurity: imp / n }))
}

/// Candidate tests for one feature, in tie-break order.
fn candidates(d: &Dataset, rows: &[usize], f: usize, kind: &FeatureKind, name: &str) -> Result<Vec<Test>> {
    match kind {
        FeatureKind::Continuous => {
            let mut xs: Vec<f64> = rows
                .iter()
                .map(|&i| match d.rows[i][f] {
                    Value::Num(x) => x,
                    Value::Cat(_) => f64::NAN,
                })
                .collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            Ok(xs
                .windows(2)
                .map(|w| {
                    let mid = (w[0] + w[1]) / 2.0;
                    Test::Threshold(if mid < w[1] { mid } else { w[0] })
                })
                .collect())
        }
        FeatureKind::Categorical(_) => {
            let mut present: Vec<usize> = rows
                .iter()
                .filter_map(|&i| match d.rows[i][f] {
                    Value::Cat(c) => Some(c),
                    Value::Num(_) => None,
                })
                .collect();
            present.sort_unstable();
            present.dedup();
            let m = present.len();
            if m < 2 {
                return Ok(Vec::new());
            }
            if m <= EXHAUSTIVE_LIMIT {
                // Each partition once: A always holds the lowest present category.
                let mut subsets: Vec<Vec<usize>> = (0u32..1 << (m - 1))
                    .map(|mask| {
                        let mut a = vec![present[0]];
                        a.extend((1..m).filter(|j| mask & (1 << (j - 1)) != 0).map(|j| present[j]));
                        a
                    })
                    .filter(|a| a.len() < m)
                    .collect();
                subsets.sort();
                return Ok(subsets.into_iter().map(Test::Subset).collect());
            }
            // Large inventories: order categories by class-1 share (two
            // classes) or mean (regression) and try each prefix.
            let key = |c: usize| -> Result<f64> {
                let sel: Vec<usize> = rows.iter().copied().filter(|&i| d.rows[i][f] == Value::Cat(c)).collect();
                match &d.target {
                    Target::Classes { names, labels } if names.len() <= 2 => {
                        Ok(sel.iter().filter(|&&i| labels[i] == 1).count() as f64 / sel.len() as f64)
                    }
                    Target::Classes { .. } => Err(Error::TooManyCategories(name.into())),
                    Target::Values(v) => Ok(sel.iter().map(|&i| v[i]).sum::<f64>() / sel.len() as f64),
                }
            };
            let mut keyed = Vec::with_capacity(m);
            for &c in &present {
                keyed.push((key(c)?, c));
            }
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut out: Vec<Vec<usize>> = (1..m)
                .map(|k| {
                    let mut a: Vec<usize> = keyed[..k].iter().map(|x| x.1).collect();
                    a.sort_unstable();
                    a
                })
                .collect();
            out.sort();
            Ok(out.into_iter().map(Test::Subset).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cart::FeatureSpec;

    #[test]
    fn threshold_at_midpoint() {
        let features = vec![FeatureSpec::continuous("x")];
        let xs = [0.1, 0.3, 0.7, 0.9];
        let rows = xs.iter().map(|&x| vec![Value::Num(x)]).collect();
        let d = Dataset::new(features, rows, Target::Values(vec![0.0, 0.0, 1.0, 1.0])).unwrap();
        let s = best_split(&d, &[0, 1, 2, 3], Criterion::Entropy, 1).unwrap().unwrap();
        assert_eq!(s.test, Test::Threshold(0.5));
        assert_eq!(s.impurity, 0.0);
    }

    #[test]
    fn pure_node_has_no_split() {
        let features = vec![FeatureSpec::continuous("x")];
        let rows = vec![vec![Value::Num(1.0)], vec![Value::Num(2.0)]];
        let d = Dataset::new(features, rows, Target::Values(vec![3.0, 3.0])).unwrap();
        assert_eq!(best_split(&d, &[0, 1], Criterion::Entropy, 1).unwrap(), None);
    }

    #[test]
    fn multiclass_large_inventory_refused() {
        let inv: Vec<alloc::string::String> = (0..14).map(|i| alloc::format!("c{i}")).collect();
        let features = vec![FeatureSpec::categorical("x", &inv)];
        let rows = (0..14).map(|i| vec![Value::Cat(i)]).collect();
        let labels = (0..14).map(|i| i % 3).collect();
        let names = vec!["a".into(), "b".into(), "c".into()];
        let d = Dataset::new(features, rows, Target::Classes { names, labels }).unwrap();
        let all: Vec<usize> = (0..14).collect();
        assert_eq!(best_split(&d, &all, Criterion::Entropy, 1), Err(Error::TooManyCategories("x".into())));
    }
}
