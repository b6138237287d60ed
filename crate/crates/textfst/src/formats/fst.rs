//! Automaton text format.
//!
//! One arc per line, `src dst isym osym [weight]`, and one line per final
//! state, `state [weight]`; weights equal to the semiring one are omitted and
//! state 0 is the start. The compiled form prefixes the same body with a
//! header naming the semiring and both symbol tables, and keeps weights at
//! full precision so machines pass between commands losslessly.
//!
//! Printing lists each state's arcs, then its final line, state by state.
//! Text already in that order with weights in printed form reads and prints
//! back byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write;

use textfst_core::{Arc, Semiring, SymbolTable, Weight, Wfst};

use super::{err, num, ParseError, Parsed};

pub const MAGIC: &str = "textfst-fst";

/// Up to six decimals, trailing zeros dropped.
pub fn fmt_weight(w: Weight) -> String {
    if w.is_infinite() {
        return if w > 0.0 { "Infinity".into() } else { "-Infinity".into() };
    }
    let s = format!("{w:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn fmt_exact(w: Weight) -> String {
    if w.is_infinite() {
        fmt_weight(w)
    } else {
        format!("{w}")
    }
}

/// States in output order: the start first, the rest in id order.
fn numbering(f: &Wfst) -> Vec<usize> {
    let mut order: Vec<usize> = Vec::with_capacity(f.num_states());
    if let Some(s) = f.start() {
        order.push(s);
    }
    order.extend(f.states().filter(|&q| Some(q) != f.start()));
    order
}

fn body(f: &Wfst, exact: bool) -> String {
    let fmt = if exact { fmt_exact } else { fmt_weight };
    let sr = f.semiring();
    let order = numbering(f);
    let mut new_id = vec![0; f.num_states()];
    for (i, &q) in order.iter().enumerate() {
        new_id[q] = i;
    }
    let name = |t: &SymbolTable, l| t.symbol(l).map_or_else(|| format!("#{l}"), str::to_string);
    let mut out = String::new();
    if f.start().is_none() {
        return out;
    }
    for &q in &order {
        for a in f.arcs(q) {
            let _ = write!(out, "{} {} {} {}", new_id[q], new_id[a.nextstate], name(f.isyms(), a.ilabel), name(f.osyms(), a.olabel));
            if !sr.is_one(a.weight) {
                let _ = write!(out, " {}", fmt(a.weight));
            }
            out.push('\n');
        }
        if f.is_final(q) {
            let w = f.final_weight(q);
            if sr.is_one(w) {
                let _ = writeln!(out, "{}", new_id[q]);
            } else {
                let _ = writeln!(out, "{} {}", new_id[q], fmt(w));
            }
        }
    }
    out
}

/// The printable form, weights rounded for display.
pub fn write_text(f: &Wfst) -> String {
    body(f, false)
}

pub fn write_symbols(t: &SymbolTable) -> String {
    t.iter().map(|(l, s)| format!("{s} {l}\n")).collect()
}

pub fn write_compiled(f: &Wfst) -> String {
    let mut out = format!("{MAGIC} {}\n", f.semiring().name());
    for (tag, t) in [("isymbols", f.isyms()), ("osymbols", f.osyms())] {
        let _ = writeln!(out, "{tag} {}", t.len());
        out.push_str(&write_symbols(t));
    }
    out.push_str("arcs\n");
    out.push_str(&body(f, true));
    out
}

pub fn read_symbols(text: &str) -> Parsed<SymbolTable> {
    read_symbol_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty()))
}

fn read_symbol_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Parsed<SymbolTable> {
    let mut t = SymbolTable::new();
    for (n, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        let [s, id] = f[..] else { return err(n, "expected `symbol id`") };
        let id = id.parse().or_else(|_| err(n, format!("bad id `{id}`")))?;
        t.insert(s, id).or_else(|e| err(n, e.to_string()))?;
    }
    Ok(t)
}

/// Reads either form. For plain text, missing tables are built from the
/// symbols in order of appearance and `semiring` defaults to tropical; for
/// compiled input an explicit `semiring` must agree with the header.
pub fn read_fst(text: &str, semiring: Option<Semiring>, isyms: Option<&SymbolTable>, osyms: Option<&SymbolTable>) -> Parsed<Wfst> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r'))).collect();
    match lines.first() {
        Some((_, l)) if l.starts_with(MAGIC) => read_compiled(&lines, semiring),
        _ => read_body(&lines, semiring.unwrap_or(Semiring::Tropical), isyms.cloned(), osyms.cloned(), false),
    }
}

fn read_compiled(lines: &[(usize, &str)], semiring: Option<Semiring>) -> Parsed<Wfst> {
    let (n, head) = lines[0];
    let name = head[MAGIC.len()..].trim();
    let sr: Semiring = name.parse().or_else(|_| err(n, format!("unknown semiring `{name}`")))?;
    if semiring.is_some_and(|s| s != sr) {
        return err(n, format!("file holds a {} machine", sr.name()));
    }
    let mut at = 1;
    let mut table = |tag: &str| -> Parsed<SymbolTable> {
        let (n, l) = *lines.get(at).ok_or(ParseError { line: at + 1, msg: format!("missing {tag}") })?;
        let count: usize = l.strip_prefix(tag).and_then(|c| c.trim().parse().ok()).ok_or(ParseError { line: n, msg: format!("expected `{tag} N`") })?;
        let rows = lines.get(at + 1..at + 1 + count).ok_or(ParseError { line: n, msg: "truncated symbol table".into() })?;
        at += 1 + count;
        read_symbol_lines(rows.iter().copied())
    };
    let isyms = table("isymbols")?;
    let osyms = table("osymbols")?;
    match lines.get(at) {
        Some((_, "arcs")) => {}
        _ => return err(at + 1, "expected `arcs`"),
    }
    read_body(&lines[at + 1..], sr, Some(isyms), Some(osyms), true)
}

fn read_body(lines: &[(usize, &str)], sr: Semiring, isyms: Option<SymbolTable>, osyms: Option<SymbolTable>, closed: bool) -> Parsed<Wfst> {
    let (fixed_i, fixed_o) = (isyms.is_some(), osyms.is_some());
    let mut isyms = isyms.unwrap_or_default();
    let mut osyms = osyms.unwrap_or_default();
    let mut arcs: Vec<(usize, usize, usize, u32, u32, Weight)> = Vec::new();
    let mut finals: BTreeMap<usize, Weight> = BTreeMap::new();
    let mut max_state = None;
    let state = |n: usize, s: &str| -> Parsed<usize> { s.parse().or_else(|_| err(n, format!("bad state `{s}`"))) };
    let weight = |n: usize, s: Option<&&str>| -> Parsed<Weight> {
        let w = match s {
            None => sr.one(),
            Some(s) => num(n, s)?,
        };
        sr.check(w).or_else(|e| err(n, e.to_string()))
    };
    for &(n, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split_whitespace().collect();
        match f.len() {
            4 | 5 => {
                let (src, dst) = (state(n, f[0])?, state(n, f[1])?);
                let label = |t: &mut SymbolTable, fixed: bool, s: &str| -> Parsed<u32> {
                    match t.find(s) {
                        Some(l) => Ok(l),
                        None if fixed || closed => err(n, format!("symbol `{s}` not in table")),
                        None => Ok(t.add(s)),
                    }
                };
                let il = label(&mut isyms, fixed_i, f[2])?;
                let ol = label(&mut osyms, fixed_o, f[3])?;
                arcs.push((n, src, dst, il, ol, weight(n, f.get(4))?));
                max_state = max_state.max(Some(src.max(dst)));
            }
            1 | 2 => {
                let q = state(n, f[0])?;
                if finals.insert(q, weight(n, f.get(1))?).is_some() {
                    return err(n, format!("state {q} is final twice"));
                }
                max_state = max_state.max(Some(q));
            }
            _ => return err(n, "expected `src dst isym osym [weight]` or `state [weight]`"),
        }
    }
    let mut fst = Wfst::new(sr, isyms, osyms);
    let Some(max) = max_state else { return Ok(fst) };
    for _ in 0..=max {
        fst.add_state();
    }
    fst.set_start(0).expect("state 0 exists");
    for (n, src, dst, il, ol, w) in arcs {
        fst.add_arc(src, Arc::new(il, ol, w, dst)).or_else(|e| err(n, e.to_string()))?;
    }
    for (q, w) in finals {
        fst.set_final(q, w).expect("state exists");
    }
    Ok(fst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_formatting() {
        assert_eq!(fmt_weight(0.5), "0.5");
        assert_eq!(fmt_weight(34.6), "34.6");
        assert_eq!(fmt_weight(1.0 / 3.0), "0.333333");
        assert_eq!(fmt_weight(2.0), "2");
        assert_eq!(fmt_weight(-1e-9), "0");
        assert_eq!(fmt_weight(f64::INFINITY), "Infinity");
    }

    #[test]
    fn text_round_trip() {
        let text = "0 1 a b 0.5\n0 2 <eps> c\n1 2 c c\n1 1.5\n2\n";
        let f = read_fst(text, None, None, None).unwrap();
        assert_eq!(f.num_states(), 3);
        assert_eq!(write_text(&f), text);
        let g = read_fst(&write_compiled(&f), None, None, None).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn errors_carry_lines() {
        let e = read_fst("0 1 a a\n0 1 a\n", None, None, None).unwrap_err();
        assert_eq!(e.line, 2);
        let e = read_fst("0 1 a a -1\n", Some(Semiring::Probability), None, None).unwrap_err();
        assert_eq!(e.line, 1);
    }
}
