//! Language identification by averaged letter n-gram probabilities.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::NGramModel;
use crate::error::{Error, Result};

/// Word-boundary marker added at both ends of a name.
pub const BOUNDARY: &str = "#";

/// How per-window probabilities are combined into one score.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Averaging {
    /// Arithmetic mean of the probabilities.
    #[default]
    Arithmetic,
    /// Mean of the natural-log probabilities.
    Log,
}

/// Turns words into letter sequences `# c₁ … c_k #` for training.
pub fn letter_corpus<S: AsRef<str>>(words: &[S]) -> Vec<Vec<String>> {
    words.iter().map(|w| padded_letters(w.as_ref())).collect()
}

fn padded_letters(text: &str) -> Vec<String> {
    let mut v = Vec::with_capacity(text.chars().count() + 2);
    v.push(BOUNDARY.to_string());
    v.extend(text.chars().map(|c| c.to_string()));
    v.push(BOUNDARY.to_string());
    v
}

fn combine(probs: &[f64], avg: Averaging) -> f64 {
    let n = probs.len() as f64;
    match avg {
        Averaging::Arithmetic => probs.iter().sum::<f64>() / n,
        Averaging::Log => probs.iter().map(|&p| libm::log(p)).sum::<f64>() / n,
    }
}

/// Letter windows of length `n` over `#text#`; shorter texts give one window.
fn windows(text: &str, n: usize) -> Vec<Vec<String>> {
    let letters = padded_letters(text);
    if letters.len() <= n {
        return alloc::vec![letters];
    }
    letters.windows(n).map(<[String]>::to_vec).collect()
}

/// Scores `text` under each model and ranks languages best first (ties by
/// name). Each window `c₁…c_n` contributes `P[c_n | c₁…c_{n−1}]`.
pub fn langid_score(models: &[(String, NGramModel)], text: &str, avg: Averaging) -> Result<Vec<(String, f64)>> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    if models.is_empty() {
        return Err(Error::Invalid("no language models given".into()));
    }
    let mut out = Vec::with_capacity(models.len());
    for (name, m) in models {
        let mut probs = Vec::new();
        for w in windows(text, m.order()) {
            let (last, hist) = w.split_last().unwrap();
            probs.push(m.katz_prob(last, hist)?);
        }
        out.push((name.clone(), combine(&probs, avg)));
    }
    rank(&mut out);
    Ok(out)
}

/// Same scoring against explicit tables of trigram probabilities, for
/// published per-trigram figures. Unlisted trigrams count as zero.
pub fn mean_table_score(
    tables: &[(String, BTreeMap<String, f64>)],
    text: &str,
    avg: Averaging,
) -> Result<Vec<(String, f64)>> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut out = Vec::with_capacity(tables.len());
    for (name, table) in tables {
        let probs: Vec<f64> = windows(text, 3).iter().map(|w| table.get(&w.concat()).copied().unwrap_or(0.0)).collect();
        out.push((name.clone(), combine(&probs, avg)));
    }
    rank(&mut out);
    Ok(out)
}

fn rank(v: &mut [(String, f64)]) {
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_cover_padded_name() {
        let w: Vec<String> = windows("vitale", 3).iter().map(|w| w.concat()).collect();
        assert_eq!(w, ["#vi", "vit", "ita", "tal", "ale", "le#"]);
        assert_eq!(windows("a", 5).len(), 1);
    }

    #[test]
    fn single_model_ranks_first() {
        let m = NGramModel::train(&letter_corpus(&["abc", "abd"]), 2, 0, true).unwrap();
        let r = langid_score(&[("x".into(), m)], "ab", Averaging::Arithmetic).unwrap();
        assert_eq!(r[0].0, "x");
        assert!(langid_score(&[], "ab", Averaging::Log).is_err());
    }
}
