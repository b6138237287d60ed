use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::Rng;
use textfst_core::ngram::{TaggerModel, BOS};

/// Random tagger with `k` tags over a small vocabulary; each conditional row
/// is normalized.
pub fn random_tagger(r: &mut StdRng, k: usize, vocab: usize) -> TaggerModel {
    let tags: Vec<String> = (0..k).map(|i| format!("T{i}")).collect();
    let mut lex = BTreeMap::new();
    for t in &tags {
        let ws: Vec<f64> = (0..vocab).map(|_| if r.gen_bool(0.3) { 0.0 } else { r.gen_range(0.05..1.0) }).collect();
        let z: f64 = ws.iter().sum::<f64>().max(1e-9);
        for (i, w) in ws.iter().enumerate() {
            lex.insert((format!("w{i}"), t.clone()), w / z);
        }
    }
    let mut ctx: Vec<String> = tags.clone();
    ctx.push(BOS.to_string());
    let mut tr = BTreeMap::new();
    for a in &ctx {
        for b in &ctx {
            let ws: Vec<f64> = (0..k).map(|_| if r.gen_bool(0.2) { 0.0 } else { r.gen_range(0.05..1.0) }).collect();
            let z: f64 = ws.iter().sum::<f64>().max(1e-9);
            for (t, w) in tags.iter().zip(&ws) {
                tr.insert((a.clone(), b.clone(), t.clone()), w / z);
            }
        }
    }
    let names: Vec<&str> = tags.iter().map(String::as_str).collect();
    TaggerModel::new(&names, &lex, &tr).unwrap()
}

/// Exhaustive argmax over all tag sequences of `∏ p(w|t) p(t|t₋₂t₋₁) / d(w)`.
pub fn brute_force_tag(m: &TaggerModel, words: &[String], divisor: &dyn Fn(&str) -> f64) -> Option<f64> {
    let k = m.tags().len();
    let mut best: Option<f64> = None;
    let total = k.pow(words.len() as u32);
    for code in 0..total {
        let mut c = code;
        let seq: Vec<&str> = (0..words.len())
            .map(|_| {
                let t = c % k;
                c /= k;
                m.tags()[t].as_str()
            })
            .collect();
        let mut p = 1.0;
        let (mut a, mut b) = (BOS, BOS);
        for (w, t) in words.iter().zip(&seq) {
            p *= m.lexical_prob(w, t) * m.transition_prob(a, b, t) / divisor(w);
            (a, b) = (b, t);
        }
        if p > 0.0 && best.is_none_or(|b| p > b) {
            best = Some(p);
        }
    }
    best
}
