//! Decision tree text format.
//!
//! ```text
//! classes no|yes
//! feature x num
//! feature pos cat=N|V
//! 0 split x <= 1 impurity=0.459148 -> 1 2 counts=2,1
//!   1 leaf counts=0,1
//!   2 split pos in N -> 3 4 ...
//! ```
//!
//! Nodes are listed depth first and indented by depth; the indentation is
//! only for reading, structure comes from the explicit child ids. Numbers are
//! written at full precision so a tree reads back unchanged.

use std::fmt::Write;

use textfst_core::cart::{FeatureKind, FeatureSpec, Node, Split, Stats, Test, Tree};

use super::{content_lines, err, num, ParseError, Parsed};

fn write_stats(s: &Stats) -> String {
    match s {
        Stats::Class(c) => format!("counts={}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        Stats::Value { n, mean, sse } => format!("n={n} mean={mean} sse={sse}"),
    }
}

fn write_test(t: &Tree, s: &Split) -> String {
    let f = &t.features[s.feature];
    match (&s.test, &f.kind) {
        (Test::Threshold(k), _) => format!("{} <= {k}", f.name),
        (Test::Subset(a), FeatureKind::Categorical(vs)) => format!("{} in {}", f.name, a.iter().map(|&c| vs[c].as_str()).collect::<Vec<_>>().join("|")),
        (Test::Subset(a), FeatureKind::Continuous) => format!("{} in {a:?}", f.name),
    }
}

pub fn write_tree(t: &Tree) -> String {
    let mut out = match &t.classes {
        Some(c) => format!("classes {}\n", c.join("|")),
        None => "regression\n".into(),
    };
    for f in &t.features {
        match &f.kind {
            FeatureKind::Continuous => {
                let _ = writeln!(out, "feature {} num", f.name);
            }
            FeatureKind::Categorical(vs) => {
                let _ = writeln!(out, "feature {} cat={}", f.name, vs.join("|"));
            }
        }
    }
    let mut stack = vec![(0usize, 0usize)];
    while let Some((id, depth)) = stack.pop() {
        let node = &t.nodes[id];
        let _ = write!(out, "{:w$}{id} ", "", w = 2 * depth);
        match &node.split {
            Some((s, l, r)) => {
                let _ = writeln!(out, "split {} impurity={} -> {l} {r} {}", write_test(t, s), s.impurity + 0.0, write_stats(&node.stats));
                stack.push((*r, depth + 1));
                stack.push((*l, depth + 1));
            }
            None => {
                let _ = writeln!(out, "leaf {}", write_stats(&node.stats));
            }
        }
    }
    out
}

fn kv<'a>(n: usize, tok: Option<&&'a str>, key: &str) -> Parsed<&'a str> {
    tok.and_then(|t| t.strip_prefix(key)).and_then(|t| t.strip_prefix('=')).ok_or(ParseError { line: n, msg: format!("expected `{key}=`") })
}

fn read_stats(n: usize, toks: &[&str], classes: Option<usize>) -> Parsed<Stats> {
    match classes {
        Some(k) => {
            let c = kv(n, toks.first(), "counts")?.split(',').map(|x| num(n, x)).collect::<Parsed<Vec<f64>>>()?;
            if c.len() != k {
                return err(n, format!("{} counts for {k} classes", c.len()));
            }
            Ok(Stats::Class(c))
        }
        None => Ok(Stats::Value {
            n: num(n, kv(n, toks.first(), "n")?)?,
            mean: num(n, kv(n, toks.get(1), "mean")?)?,
            sse: num(n, kv(n, toks.get(2), "sse")?)?,
        }),
    }
}

pub fn read_tree(text: &str) -> Parsed<Tree> {
    let mut lines = content_lines(text).peekable();
    let Some((n, head)) = lines.next() else { return err(1, "empty file") };
    let classes: Option<Vec<String>> = match head.trim() {
        "regression" => None,
        h => match h.strip_prefix("classes ") {
            Some(c) => Some(c.trim().split('|').map(str::to_string).collect()),
            None => return err(n, "expected `classes a|b` or `regression`"),
        },
    };
    let mut features = Vec::new();
    while let Some((n, l)) = lines.next_if(|(_, l)| l.starts_with("feature ")) {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f[..] {
            [_, name, "num"] => features.push(FeatureSpec::continuous(name)),
            [_, name, kind] if kind.starts_with("cat=") => {
                let vs: Vec<&str> = kind[4..].split('|').collect();
                features.push(FeatureSpec::categorical(name, &vs));
            }
            _ => return err(n, "expected `feature name num|cat=...`"),
        }
    }
    let mut nodes: Vec<Option<Node>> = Vec::new();
    let k = classes.as_ref().map(Vec::len);
    for (n, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let id: usize = toks[0].parse().or_else(|_| err(n, format!("bad node id `{}`", toks[0])))?;
        let node = match toks.get(1) {
            Some(&"leaf") => Node { stats: read_stats(n, &toks[2..], k)?, split: None },
            Some(&"split") if toks.len() >= 9 => {
                let Some(fi) = features.iter().position(|f| f.name == toks[2]) else { return err(n, format!("unknown feature `{}`", toks[2])) };
                let test = match (toks[3], &features[fi].kind) {
                    ("<=", FeatureKind::Continuous) => Test::Threshold(num(n, toks[4])?),
                    ("in", FeatureKind::Categorical(_)) => {
                        let mut a = toks[4].split('|').map(|v| features[fi].category(v).ok_or(ParseError { line: n, msg: format!("unknown category `{v}`") })).collect::<Parsed<Vec<usize>>>()?;
                        a.sort_unstable();
                        Test::Subset(a)
                    }
                    _ => return err(n, "test does not fit the feature kind"),
                };
                let impurity = num(n, kv(n, toks.get(5), "impurity")?)?;
                if toks[6] != "->" {
                    return err(n, "expected `->`");
                }
                let child = |s: &str| s.parse::<usize>().or_else(|_| err(n, format!("bad child `{s}`")));
                let (l, r) = (child(toks[7])?, child(toks[8])?);
                Node { stats: read_stats(n, &toks[9..], k)?, split: Some((Split { feature: fi, test, impurity }, l, r)) }
            }
            _ => return err(n, "expected `ID leaf ...` or `ID split ...`"),
        };
        if nodes.len() <= id {
            nodes.resize(id + 1, None);
        }
        if nodes[id].replace(node).is_some() {
            return err(n, format!("node {id} listed twice"));
        }
    }
    let nodes: Vec<Node> = nodes.into_iter().enumerate().map(|(i, x)| x.ok_or(ParseError { line: 0, msg: format!("node {i} missing") })).collect::<Parsed<_>>()?;
    if nodes.is_empty() {
        return err(0, "no nodes");
    }
    for node in &nodes {
        if let Some((_, l, r)) = node.split {
            if l >= nodes.len() || r >= nodes.len() {
                return err(0, "child id out of range");
            }
        }
    }
    Ok(Tree { features, classes, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::dataset::read_dataset;
    use textfst_core::cart::{grow_tree, GrowParams};

    #[test]
    fn classification_round_trip() {
        let d = read_dataset("x:num,pos:cat,y:cat\n0.1,N,a\n0.9,V,b\n0.2,V,b\n0.3,N,a\n0.7,A,b\n").unwrap();
        let t = grow_tree(&d, GrowParams::default()).unwrap();
        let text = write_tree(&t);
        assert_eq!(read_tree(&text).unwrap(), t);
    }

    #[test]
    fn regression_round_trip() {
        let d = read_dataset("x:num,y:num\n1,1\n2,1.5\n3,7\n4,8\n").unwrap();
        let t = grow_tree(&d, GrowParams::default()).unwrap();
        assert!(write_tree(&t).starts_with("regression\nfeature x num\n0 split x <= 2.5"));
        assert_eq!(read_tree(&write_tree(&t)).unwrap(), t);
    }

    #[test]
    fn missing_node_rejected() {
        assert!(read_tree("classes a|b\nfeature x num\n0 split x <= 1 impurity=0 -> 1 2 counts=1,1\n1 leaf counts=1,0\n").is_err());
    }
}
