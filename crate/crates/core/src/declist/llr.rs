//! Log-likelihood-ratio decision lists over candidate collocations.

use alloc::string::String;
use alloc::vec::Vec;

use super::{majority, DecisionList, Entry, Example, Feature};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LlrParams {
    /// Added to both counts before taking the ratio.
    pub epsilon: f64,
    /// Rescale each label's counts to the size of the rarer label first, so
    /// the score compares Pr(collocation | label) rather than the posterior.
    pub prior_scaled: bool,
    /// Report scores in bits instead of nats.
    pub base2: bool,
    /// Weight of counts over all data against counts over the data not yet
    /// claimed by earlier entries: 1 is purely global, 0 purely residual.
    pub global_weight: f64,
}

impl Default for LlrParams {
    fn default() -> Self {
        LlrParams { epsilon: 0.1, prior_scaled: false, base2: false, global_weight: 1.0 }
    }
}

/// Scores every candidate by `|log((c₁ + ε)/(c₂ + ε))|`, labels it with the
/// label it co-occurs with more often, and sorts by score. Candidates that
/// match nothing are dropped. The default is the corpus majority.
///
/// With `global_weight < 1` entries are chosen greedily and each choice
/// removes its matches from the residual counts; a score that would rise
/// above its predecessor's is capped at it.
pub fn learn_llr(candidates: &[Feature], data: &[Example], params: LlrParams) -> Result<DecisionList> {
    let labels: Vec<&str> = {
        let mut v: Vec<&str> = data.iter().map(|(_, y)| y.as_str()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    if labels.len() != 2 {
        return Err(Error::Invalid(alloc::format!("learn_llr needs exactly two labels, found {}", labels.len())));
    }
    let default = majority(data.iter().map(|(_, y)| y.as_str())).unwrap();
    let totals = [0, 1].map(|k| data.iter().filter(|(_, y)| y == labels[k]).count() as f64);
    let scale = if params.prior_scaled {
        let m = totals[0].min(totals[1]);
        [m / totals[0], m / totals[1]]
    } else {
        [1.0, 1.0]
    };
    let log = |x: f64| if params.base2 { libm::log2(x) } else { libm::log(x) };
    let count = |f: &Feature, live: &[bool]| -> [f64; 2] {
        let mut c = [0.0; 2];
        for ((x, y), &on) in data.iter().zip(live) {
            if on && f.matches(x) {
                c[(y != labels[0]) as usize] += 1.0;
            }
        }
        c
    };
    let score = |c: [f64; 2]| -> (f64, String) {
        let (a, b) = (c[0] * scale[0], c[1] * scale[1]);
        let label = if a > b {
            labels[0].into()
        } else if b > a {
            labels[1].into()
        } else {
            default.clone()
        };
        (libm::fabs(log((a + params.epsilon) / (b + params.epsilon))), label)
    };

    let all = alloc::vec![true; data.len()];
    let global: Vec<[f64; 2]> = candidates.iter().map(|f| count(f, &all)).collect();
    let mut entries = Vec::new();
    if params.global_weight >= 1.0 {
        let mut scored: Vec<(usize, f64, String)> = global
            .iter()
            .enumerate()
            .filter(|(_, c)| c[0] + c[1] > 0.0)
            .map(|(i, &c)| {
                let (s, l) = score(c);
                (i, s, l)
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        entries = scored.into_iter().map(|(i, score, label)| Entry { feature: candidates[i].clone(), label, score }).collect();
    } else {
        let lambda = params.global_weight.max(0.0);
        let mut live = all;
        let mut used = alloc::vec![false; candidates.len()];
        let mut cap = f64::INFINITY;
        loop {
            let mut best: Option<(usize, f64, String)> = None;
            for (i, f) in candidates.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let r = count(f, &live);
                let c = [0, 1].map(|k| lambda * global[i][k] + (1.0 - lambda) * r[k]);
                if c[0] + c[1] <= 0.0 {
                    continue;
                }
                let (s, l) = score(c);
                if best.as_ref().is_none_or(|b| s > b.1) {
                    best = Some((i, s, l));
                }
            }
            let Some((i, s, label)) = best else { break };
            used[i] = true;
            for (on, (x, _)) in live.iter_mut().zip(data) {
                if candidates[i].matches(x) {
                    *on = false;
                }
            }
            cap = cap.min(s);
            entries.push(Entry { feature: candidates[i].clone(), label, score: cap });
        }
    }
    Ok(DecisionList { entries, default })
}
