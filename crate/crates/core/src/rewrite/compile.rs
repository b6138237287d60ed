//! Rule compilation as a composition chain
//! `Prologue ∘ Obligatory ∘ Right ∘ Left ∘ Replace ∘ Prologue⁻¹`.
//!
//! The prologue pads the input with `#` and may insert, in every gap before
//! a symbol or the final `#`, any subset of three markers in the fixed order
//! `⟨l ⟨r ⟨s`. Each identity filter then admits exactly one marking: `⟨l`
//! where the text so far ends in λ, `⟨r` where the remaining text starts
//! with ρ, and `⟨s` at the sites chosen by leftmost obligatory application.
//! All filters read the input side, so contexts see the unrewritten string.
//! Replace rewrites the focus after each `⟨s` and the inverse prologue erases
//! markers and boundaries.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{bits_to_nat, Item, RewriteRule, Ruleset, BOUNDARY};
use crate::error::{Error, Result};
use crate::semiring::Semiring;
use crate::symbols::{Label, SymbolTable, EPSILON};
use crate::wfst::{compose, paths, reverse, Arc, Wfst};

const MARKERS: [&str; 3] = ["<rewrite:l>", "<rewrite:r>", "<rewrite:s>"];
const L: usize = 0;
const R: usize = 1;
const S: usize = 2;

/// Label layout shared by all stages.
struct Tape {
    table: SymbolTable,
    /// Copyable symbols.
    gamma: Vec<Label>,
    hash: Label,
    markers: [Label; 3],
}

impl Tape {
    fn new(alphabet: &SymbolTable) -> Result<Tape> {
        let mut table = alphabet.clone();
        if let Some(m) = MARKERS.iter().chain([&BOUNDARY]).find(|m| table.contains(m)) {
            return Err(Error::Invalid(alloc::format!("reserved symbol `{m}` in rule alphabet")));
        }
        let gamma: Vec<Label> = table.labels().filter(|&l| l != EPSILON).collect();
        let hash = table.add(BOUNDARY);
        let markers = MARKERS.map(|m| table.add(m));
        Ok(Tape { table, gamma, hash, markers })
    }

    fn labels_of(&self, item: &Item) -> Result<BTreeSet<Label>> {
        item.set.iter().map(|s| self.table.find(s).ok_or_else(|| Error::UndeclaredSymbol(s.clone()))).collect()
    }

    fn machine(&self) -> Wfst {
        Wfst::acceptor(Semiring::Tropical, self.table.clone())
    }

    fn text_symbols(&self) -> impl Iterator<Item = Label> + '_ {
        self.gamma.iter().copied().chain([self.hash])
    }
}

/// Deterministic automaton for `Σ* items`, over labels.
struct Dfa {
    trans: Vec<BTreeMap<Label, usize>>,
    accept: Vec<bool>,
}

impl Dfa {
    fn new(items: &[(BTreeSet<Label>, bool)], symbols: &[Label]) -> Dfa {
        let k = items.len();
        let closure = |mut set: BTreeSet<usize>| {
            let mut j = 0;
            while j < k {
                if set.contains(&j) && items[j].1 {
                    set.insert(j + 1);
                }
                j += 1;
            }
            set
        };
        let init = closure([0].into_iter().collect());
        let mut ids: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut sets = vec![init.clone()];
        ids.insert(init, 0);
        let mut dfa = Dfa { trans: Vec::new(), accept: Vec::new() };
        let mut q = 0;
        while q < sets.len() {
            let cur = sets[q].clone();
            let mut row = BTreeMap::new();
            for &a in symbols {
                let mut next: BTreeSet<usize> = [0].into_iter().collect();
                for &p in &cur {
                    if p < k && items[p].0.contains(&a) {
                        next.insert(if items[p].1 { p } else { p + 1 });
                    }
                }
                let next = closure(next);
                let n = sets.len();
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    n
                });
                row.insert(a, id);
            }
            dfa.accept.push(cur.contains(&k));
            dfa.trans.push(row);
            q += 1;
        }
        dfa
    }
}

/// Builds an acceptor by exploring a deterministic transition function.
fn explore<St: Ord + Clone>(
    tape: &Tape,
    start: St,
    labels: &[Label],
    step: impl Fn(&St, Label) -> Option<St>,
    is_final: impl Fn(&St) -> bool,
) -> Wfst {
    let mut out = tape.machine();
    let mut ids: BTreeMap<St, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let s0 = out.add_state();
    out.set_start(s0).unwrap();
    ids.insert(start.clone(), s0);
    queue.push_back(start);
    while let Some(st) = queue.pop_front() {
        let id = ids[&st];
        if is_final(&st) {
            out.set_final(id, 0.0).unwrap();
        }
        for &a in labels {
            if let Some(n) = step(&st, a) {
                let nid = match ids.get(&n) {
                    Some(&x) => x,
                    None => {
                        let x = out.add_state();
                        ids.insert(n.clone(), x);
                        queue.push_back(n);
                        x
                    }
                };
                out.add_arc(id, Arc::new(a, a, 0.0, nid)).unwrap();
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Phase<T> {
    /// Before the leading `#`.
    Before,
    Inside(T),
    /// After the trailing `#`.
    Done,
}

/// Identity filter requiring `markers[order[m]]` in exactly the gaps where
/// `dfa` accepts. `order` is the marker order within a gap on the tape the
/// filter reads.
fn marker_filter(tape: &Tape, dfa: &Dfa, order: [usize; 3], m: usize) -> Wfst {
    let labels: Vec<Label> = tape.text_symbols().chain(tape.markers).collect();
    let order_labels = order.map(|i| tape.markers[i]);
    let start = Phase::Inside((dfa.trans[0][&tape.hash], 0usize));
    let step = |st: &Phase<(usize, usize)>, x: Label| -> Option<Phase<(usize, usize)>> {
        let (q, k) = match st {
            Phase::Before => return (x == tape.hash).then(|| start.clone()),
            Phase::Inside(v) => *v,
            Phase::Done => return None,
        };
        let need = dfa.accept[q] && k <= m;
        if let Some(j) = order_labels.iter().position(|&l| l == x) {
            if j < k || (j == m && !dfa.accept[q]) || (j > m && need) {
                return None;
            }
            return Some(Phase::Inside((q, j + 1)));
        }
        if need {
            None
        } else if x == tape.hash {
            Some(Phase::Done)
        } else {
            Some(Phase::Inside((dfa.trans[q][&x], 0)))
        }
    };
    explore(tape, Phase::Before, &labels, step, |s| *s == Phase::Done)
}

fn context_items(tape: &Tape, items: &[Item]) -> Result<Vec<(BTreeSet<Label>, bool)>> {
    items.iter().map(|i| Ok((tape.labels_of(i)?, i.star))).collect()
}

fn left_filter(tape: &Tape, left: &[Item]) -> Result<Wfst> {
    let symbols: Vec<Label> = tape.text_symbols().collect();
    let dfa = Dfa::new(&context_items(tape, left)?, &symbols);
    Ok(marker_filter(tape, &dfa, [L, R, S], 0))
}

/// Built as a left filter on the reversed tape, then reversed.
fn right_filter(tape: &Tape, right: &[Item]) -> Result<Wfst> {
    let symbols: Vec<Label> = tape.text_symbols().collect();
    let mut items = context_items(tape, right)?;
    items.reverse();
    let dfa = Dfa::new(&items, &symbols);
    Ok(reverse(&marker_filter(tape, &dfa, [S, R, L], 1)))
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Sites {
    /// Symbols still covered by the last chosen site.
    blocked: usize,
    /// Focus matches in progress: (symbols matched, chosen).
    cands: Vec<(usize, bool)>,
    /// Next marker slot in the current gap.
    slot: usize,
    seen: [bool; 3],
}

/// Identity filter admitting `⟨s` exactly at the leftmost non-overlapping
/// eligible sites, given correct `⟨l` and `⟨r` markings.
fn obligatory_filter(tape: &Tape, focus: &[BTreeSet<Label>]) -> Wfst {
    let labels: Vec<Label> = tape.text_symbols().chain(tape.markers).collect();
    let n = focus.len();
    let empty = Sites { blocked: 0, cands: Vec::new(), slot: 0, seen: [false; 3] };
    let step = |st: &Phase<Sites>, x: Label| -> Option<Phase<Sites>> {
        let st = match st {
            Phase::Before => return (x == tape.hash).then(|| Phase::Inside(empty.clone())),
            Phase::Inside(v) => v,
            Phase::Done => return None,
        };
        if let Some(j) = tape.markers.iter().position(|&l| l == x) {
            if j < st.slot {
                return None;
            }
            let mut next = st.clone();
            next.slot = j + 1;
            next.seen[j] = true;
            return Some(Phase::Inside(next));
        }
        // Close the gap.
        let mut cands = Vec::with_capacity(st.cands.len() + 1);
        for &(p, chosen) in &st.cands {
            if p == n {
                if chosen != st.seen[R] {
                    return None;
                }
            } else {
                cands.push((p, chosen));
            }
        }
        let mut blocked = st.blocked;
        let open = blocked == 0 && st.seen[L];
        if st.seen[S] {
            if !open {
                return None;
            }
            cands.push((0, true));
            blocked = n;
        } else if open {
            cands.push((0, false));
        }
        // Read the symbol.
        let mut next = Vec::with_capacity(cands.len());
        for (p, chosen) in cands {
            if focus[p].contains(&x) {
                next.push((p + 1, chosen));
            } else if chosen {
                return None;
            }
        }
        if x == tape.hash {
            return Some(Phase::Done);
        }
        Some(Phase::Inside(Sites { blocked: blocked.saturating_sub(1), cands: next, slot: 0, seen: [false; 3] }))
    };
    explore(tape, Phase::Before, &labels, step, |s| *s == Phase::Done)
}

fn prologue(tape: &Tape) -> Wfst {
    let mut p = tape.machine();
    let s0 = p.add_state();
    let gaps: Vec<usize> = (0..4).map(|_| p.add_state()).collect();
    let end = p.add_state();
    p.set_start(s0).unwrap();
    p.set_final(end, 0.0).unwrap();
    p.add_arc(s0, Arc::new(EPSILON, tape.hash, 0.0, gaps[0])).unwrap();
    for k in 0..4 {
        for j in k..3 {
            p.add_arc(gaps[k], Arc::new(EPSILON, tape.markers[j], 0.0, gaps[j + 1])).unwrap();
        }
        for &a in &tape.gamma {
            p.add_arc(gaps[k], Arc::new(a, a, 0.0, gaps[0])).unwrap();
        }
        p.add_arc(gaps[k], Arc::new(EPSILON, tape.hash, 0.0, end)).unwrap();
    }
    p
}

/// Erases markers and boundaries.
fn epilogue(tape: &Tape) -> Wfst {
    let mut p = tape.machine();
    let s = p.add_state();
    p.set_start(s).unwrap();
    p.set_final(s, 0.0).unwrap();
    for &a in &tape.gamma {
        p.add_arc(s, Arc::new(a, a, 0.0, s)).unwrap();
    }
    for x in tape.markers.into_iter().chain([tape.hash]) {
        p.add_arc(s, Arc::new(x, EPSILON, 0.0, s)).unwrap();
    }
    p
}

/// Copies everything except at `⟨s`, where it reads the focus and writes one
/// alternative.
fn replace(tape: &Tape, focus: &[BTreeSet<Label>], alternatives: &[(Vec<Label>, f64)]) -> Wfst {
    let mut p = tape.machine();
    let s = p.add_state();
    p.set_start(s).unwrap();
    p.set_final(s, 0.0).unwrap();
    for x in tape.text_symbols().chain([tape.markers[L], tape.markers[R]]) {
        p.add_arc(s, Arc::new(x, x, 0.0, s)).unwrap();
    }
    let sm = tape.markers[S];
    for (out, w) in alternatives {
        let mut cur = p.add_state();
        p.add_arc(s, Arc::new(sm, sm, *w, cur)).unwrap();
        for (k, set) in focus.iter().enumerate() {
            if k > 0 {
                // Markers of the gaps inside the site pass through.
                for m in [tape.markers[L], tape.markers[R]] {
                    p.add_arc(cur, Arc::new(m, m, 0.0, cur)).unwrap();
                }
            }
            let last = k + 1 == focus.len() && out.len() <= focus.len();
            let next = if last { s } else { p.add_state() };
            let o = out.get(k).copied().unwrap_or(EPSILON);
            for &a in set {
                p.add_arc(cur, Arc::new(a, o, 0.0, next)).unwrap();
            }
            cur = next;
        }
        for k in focus.len()..out.len() {
            let next = if k + 1 == out.len() { s } else { p.add_state() };
            p.add_arc(cur, Arc::new(EPSILON, out[k], 0.0, next)).unwrap();
            cur = next;
        }
    }
    p
}

/// Compiles one rule over `alphabet`, the symbols copied unchanged outside
/// rewrite sites. Both tapes of the result use `alphabet` extended with the
/// rule's output symbols.
pub fn compile_rule(r: &RewriteRule, alphabet: &SymbolTable) -> Result<Wfst> {
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    if r.focus.is_empty() || r.alternatives.is_empty() {
        return Err(Error::Invalid("rule needs a focus and at least one alternative".into()));
    }
    let mut table = alphabet.clone();
    for s in r.output_symbols() {
        table.add(s);
    }
    let tape = Tape::new(&table)?;
    let focus: Vec<BTreeSet<Label>> = r.focus.iter().map(|i| tape.labels_of(i)).collect::<Result<_>>()?;
    if let Some(s) = r.focus.iter().flat_map(|i| &i.set).find(|s| *s == BOUNDARY) {
        return Err(Error::Invalid(alloc::format!("focus may not contain `{s}`")));
    }
    let alternatives: Vec<(Vec<Label>, f64)> = r
        .alternatives
        .iter()
        .map(|(o, w)| {
            if !(*w >= 0.0) {
                return Err(Error::InvalidWeight(*w, "rule"));
            }
            Ok((tape.table.encode(o)?, bits_to_nat(*w)))
        })
        .collect::<Result<_>>()?;

    let chain = [
        obligatory_filter(&tape, &focus),
        right_filter(&tape, &r.right)?,
        left_filter(&tape, &r.left)?,
        replace(&tape, &focus, &alternatives),
        epilogue(&tape),
    ];
    let mut m = prologue(&tape);
    for stage in &chain {
        m = compose(&m, stage)?;
    }
    m.relabel(&table, &table)
}

/// Composes the rules in order over the ruleset's full tape alphabet.
pub fn compile_ruleset(rs: &Ruleset) -> Result<Wfst> {
    let table = rs.symbols();
    if table.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let mut m = Wfst::acceptor(Semiring::Tropical, table.clone());
    let s = m.add_state();
    m.set_start(s)?;
    m.set_final(s, 0.0)?;
    for l in table.labels().filter(|&l| l != EPSILON) {
        m.add_arc(s, Arc::new(l, l, 0.0, s))?;
    }
    for r in &rs.rules {
        m = compose(&m, &compile_rule(r, &table)?)?;
    }
    Ok(m)
}

/// Every output of `fst` for `input`, with its best weight.
pub fn apply<S: AsRef<str>>(fst: &Wfst, input: &[S]) -> Result<BTreeMap<Vec<String>, f64>> {
    let x = Wfst::from_string(fst.semiring(), fst.isyms(), input)?;
    let y = compose(&x, fst)?;
    let mut out: BTreeMap<Vec<String>, f64> = BTreeMap::new();
    for p in paths(&y)? {
        let e = out.entry(p.output_symbols(&y)).or_insert(f64::INFINITY);
        if p.weight < *e {
            *e = p.weight;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::apply_direct;
    use super::*;

    fn strs(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn sch_to_esh() {
        let letters = SymbolTable::from_symbols(strs("schein"));
        let r = RewriteRule {
            focus: vec![Item::symbol("s"), Item::symbol("c"), Item::symbol("h")],
            alternatives: vec![(vec!["ʃ".into()], 0.0)],
            left: vec![],
            right: vec![],
        };
        let m = compile_rule(&r, &letters).unwrap();
        let out = apply(&m, &strs("schein")).unwrap();
        assert_eq!(out.into_iter().collect::<Vec<_>>(), vec![(strs("ʃein"), 0.0)]);
    }

    #[test]
    fn matches_oracle_with_contexts() {
        let abc = SymbolTable::from_symbols(["a", "b", "c"]);
        let r = RewriteRule {
            focus: vec![Item::symbol("a")],
            alternatives: vec![(strs("b"), 1.0), (vec![], 2.0)],
            left: vec![Item::set("X", &["a", "b"]).starred(), Item::symbol("c")],
            right: vec![Item::symbol("b").starred(), Item::symbol(BOUNDARY)],
        };
        let m = compile_rule(&r, &abc).unwrap();
        for s in ["", "ca", "cab", "caab", "acab", "ccaa", "ca", "cacab"] {
            assert_eq!(apply(&m, &strs(s)).unwrap(), apply_direct(&r, &strs(s)), "{s}");
        }
    }
}
