//! Collocational evidence around occurrences of a target word.
//!
//! Tokens are written `word` or `word/TAG`; tags starting with `V` mark
//! verbs.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::Instance;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Collocation {
    /// Token at a fixed offset (±1 bigrams, ±2 positional).
    At { offset: i8, token: String },
    /// Words on both sides: `of lead in`.
    Around { left: String, right: String },
    /// Nearest verb to the left within the window: `follow/V + lead`.
    PredArg { verb: String },
    /// Any word within the window: `zinc ↔ lead`.
    Window { word: String },
    Capitalized,
}

impl fmt::Display for Collocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Collocation::At { offset, token } => write!(f, "{offset:+}:{token}"),
            Collocation::Around { left, right } => write!(f, "around:{left},{right}"),
            Collocation::PredArg { verb } => write!(f, "pred:{verb}"),
            Collocation::Window { word } => write!(f, "win:{word}"),
            Collocation::Capitalized => write!(f, "cap"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Templates {
    pub bigrams: bool,
    pub positional: bool,
    pub pred_arg: bool,
    pub wide: bool,
    pub capitalization: bool,
}

impl Default for Templates {
    fn default() -> Self {
        Templates { bigrams: true, positional: true, pred_arg: true, wide: true, capitalization: true }
    }
}

fn split_tag(tok: &str) -> (String, Option<&str>) {
    match tok.rsplit_once('/') {
        Some((w, t)) if !w.is_empty() && !t.is_empty() => (w.to_lowercase(), Some(t)),
        _ => (tok.to_lowercase(), None),
    }
}

/// Features of every occurrence of `target` in `sentence`, as
/// (token index, features) in sentence order. `window` bounds the wide
/// context and the verb search.
pub fn extract_collocations<S: AsRef<str>>(
    sentence: &[S],
    target: &str,
    templates: &Templates,
    window: usize,
) -> Vec<(usize, Vec<Collocation>)> {
    let toks: Vec<(String, Option<&str>)> = sentence.iter().map(|t| split_tag(t.as_ref())).collect();
    let target = target.to_lowercase();
    let mut out = Vec::new();
    for (t, (w, _)) in toks.iter().enumerate() {
        if *w != target {
            continue;
        }
        let mut feats: Vec<Collocation> = Vec::new();
        let mut push = |c: Collocation| {
            if !feats.contains(&c) {
                feats.push(c);
            }
        };
        let at = |o: isize| -> Option<&(String, Option<&str>)> {
            let i = t as isize + o;
            (i >= 0).then(|| toks.get(i as usize)).flatten()
        };
        let offsets: &[isize] = match (templates.bigrams, templates.positional) {
            (true, true) => &[-2, -1, 1, 2],
            (true, false) => &[-1, 1],
            (false, true) => &[-2, 2],
            (false, false) => &[],
        };
        for &o in offsets {
            if let Some((word, tag)) = at(o) {
                if let Some(tag) = tag {
                    push(Collocation::At { offset: o as i8, token: alloc::format!("{word}/{tag}") });
                }
                push(Collocation::At { offset: o as i8, token: word.clone() });
            }
        }
        if templates.positional {
            if let (Some(l), Some(r)) = (at(-1), at(1)) {
                push(Collocation::Around { left: l.0.clone(), right: r.0.clone() });
            }
        }
        if templates.pred_arg {
            let verb = (1..=window as isize).filter_map(|o| at(-o)).find(|(_, tag)| tag.is_some_and(|x| x.starts_with('V')));
            if let Some((word, tag)) = verb {
                push(Collocation::PredArg { verb: alloc::format!("{word}/{}", tag.unwrap()) });
            }
        }
        if templates.wide {
            let lo = t.saturating_sub(window);
            let hi = (t + window).min(toks.len() - 1);
            for i in lo..=hi {
                if i != t {
                    push(Collocation::Window { word: toks[i].0.clone() });
                }
            }
        }
        if templates.capitalization && sentence[t].as_ref().chars().next().is_some_and(char::is_uppercase) {
            push(Collocation::Capitalized);
        }
        out.push((t, feats));
    }
    out
}

/// The atoms of a feature list.
pub fn instance_of(feats: &[Collocation]) -> Instance {
    feats.iter().map(ToString::to_string).collect()
}
