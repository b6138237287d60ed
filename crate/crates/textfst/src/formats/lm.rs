//! Back-off language model and count files.
//!
//! A model file starts with `order N` and then lists one section per gram
//! length, headed `K-grams`, with rows `logprob<TAB>gram[<TAB>backoff]`.
//! Both numbers are natural logs and `-inf` marks an impossible gram; a `-`
//! logprob lists a history that only carries a back-off weight. Count
//! files are `count<TAB>gram` rows under the same `order N` header.

use std::collections::BTreeMap;
use std::fmt::Write;

use textfst_core::ngram::{BackoffLm, CountTable, Gram};

use super::{content_lines, err, num, Parsed};

fn fmt_log(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.6}")
    }
}

fn parse_log(line: usize, s: &str) -> Parsed<f64> {
    match s {
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => num(line, s),
    }
}

fn gram(s: &str) -> Gram {
    s.split_whitespace().map(str::to_string).collect()
}

fn header(text: &str) -> Parsed<(usize, Vec<(usize, &str)>)> {
    let mut lines = content_lines(text);
    let Some((n, first)) = lines.next() else { return err(1, "empty file") };
    let order = first.strip_prefix("order").and_then(|o| o.trim().parse().ok()).filter(|&o: &usize| o > 0);
    let Some(order) = order else { return err(n, "expected `order N`") };
    Ok((order, lines.collect()))
}

pub fn write_lm(lm: &BackoffLm) -> String {
    let mut out = format!("order {}\n", lm.order);
    for len in 1..=lm.order {
        let _ = writeln!(out, "{len}-grams");
        let grams: std::collections::BTreeSet<&Gram> = lm.logprobs.keys().chain(lm.backoffs.keys()).filter(|g| g.len() == len).collect();
        for g in grams {
            let lp = lm.logprobs.get(g).map_or_else(|| "-".into(), |&lp| fmt_log(lp));
            let _ = write!(out, "{lp}\t{}", g.join(" "));
            if let Some(&b) = lm.backoffs.get(g) {
                let _ = write!(out, "\t{}", fmt_log(b));
            }
            out.push('\n');
        }
    }
    out
}

pub fn read_lm(text: &str) -> Parsed<BackoffLm> {
    let (order, lines) = header(text)?;
    let mut logprobs = BTreeMap::new();
    let mut backoffs = BTreeMap::new();
    let mut section = 0;
    for (n, l) in lines {
        if let Some(k) = l.strip_suffix("-grams") {
            section = k.trim().parse().or_else(|_| err(n, format!("bad section `{l}`")))?;
            continue;
        }
        let f: Vec<&str> = l.split('\t').collect();
        if !(2..=3).contains(&f.len()) {
            return err(n, "expected `logprob<TAB>gram[<TAB>backoff]`");
        }
        let g = gram(f[1]);
        if g.len() != section {
            return err(n, format!("{}-gram in the {section}-grams section", g.len()));
        }
        if let Some(b) = f.get(2) {
            backoffs.insert(g.clone(), parse_log(n, b)?);
        }
        if f[0] != "-" {
            logprobs.insert(g, parse_log(n, f[0])?);
        }
    }
    BackoffLm::new(order, logprobs, backoffs).or_else(|e| err(1, e.to_string()))
}

pub fn write_counts(t: &CountTable) -> String {
    let mut out = format!("order {}\n", t.order());
    for len in 1..=t.order() {
        for (g, c) in t.grams(len) {
            let _ = writeln!(out, "{c}\t{}", g.join(" "));
        }
    }
    out
}

pub fn read_counts(text: &str) -> Parsed<CountTable> {
    let (order, lines) = header(text)?;
    let mut grams = Vec::new();
    for (n, l) in lines {
        let Some((c, g)) = l.split_once('\t') else { return err(n, "expected `count<TAB>gram`") };
        let c: u64 = c.trim().parse().or_else(|_| err(n, format!("bad count `{c}`")))?;
        grams.push((gram(g), c));
    }
    CountTable::from_counts(order, grams).or_else(|e| err(1, e.to_string()))
}
