//! Shared brute-force oracles for the integration tests.
#![allow(dead_code)]

pub mod recognition;
pub mod rules;
pub mod tagging;

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use textfst_core::symbols::Label;
use textfst_core::{Arc, Semiring, SymbolTable, Wfst};

pub type Pair = (Vec<Label>, Vec<Label>);

pub fn alphabet() -> SymbolTable {
    SymbolTable::from_symbols(["a", "b", "c"])
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A weight from a small grid so tropical arithmetic stays exact.
pub fn random_weight(rng: &mut StdRng, sr: Semiring) -> f64 {
    match sr {
        Semiring::Tropical => rng.gen_range(0..8) as f64 * 0.5,
        Semiring::Probability => rng.gen_range(1..=8) as f64 / 8.0,
        Semiring::Boolean => 1.0,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub states: usize,
    pub arcs: usize,
    /// Allow epsilon on either tape.
    pub epsilons: bool,
    /// Arcs only go forward, so the machine is acyclic.
    pub acyclic: bool,
    pub transducer: bool,
    /// Keep the start state non-final (so X(ε) = 0 when there are no epsilons).
    pub nonfinal_start: bool,
}

pub fn random_machine(rng: &mut StdRng, sr: Semiring, shape: Shape) -> Wfst {
    let syms = alphabet();
    let mut f = Wfst::acceptor(sr, syms);
    for _ in 0..shape.states {
        f.add_state();
    }
    f.set_start(0).unwrap();
    let label = |rng: &mut StdRng| -> Label {
        let lo = if shape.epsilons { 0 } else { 1 };
        rng.gen_range(lo..=3)
    };
    for _ in 0..shape.arcs {
        let src = rng.gen_range(0..shape.states);
        let dst = if shape.acyclic {
            if src + 1 >= shape.states {
                continue;
            }
            rng.gen_range(src + 1..shape.states)
        } else {
            rng.gen_range(0..shape.states)
        };
        let il = label(rng);
        let ol = if shape.transducer { label(rng) } else { il };
        // Epsilon self-loops would make the language sums infinite.
        if !shape.acyclic && (il == 0 || ol == 0) && src == dst {
            continue;
        }
        let w = random_weight(rng, sr);
        f.add_arc(src, Arc::new(il, ol, w, dst)).unwrap();
    }
    for s in 0..shape.states {
        if shape.nonfinal_start && s == 0 {
            continue;
        }
        if rng.gen_bool(0.4) || s + 1 == shape.states {
            f.set_final(s, random_weight(rng, sr)).unwrap();
        }
    }
    f
}

/// Every (input, output) pair with both sides at most `max_len` long, mapped
/// to the semiring sum of the weights of the paths producing it. Every cycle
/// must emit at least one label on some tape.
pub fn enumerate(x: &Wfst, max_len: usize) -> BTreeMap<Pair, f64> {
    let sr = x.semiring();
    let mut out = BTreeMap::new();
    let Some(start) = x.start() else { return out };
    let mut stack = vec![(start, Vec::new(), Vec::new(), sr.one(), 0usize)];
    while let Some((s, i, o, w, depth)) = stack.pop() {
        assert!(depth < 10_000, "unbounded epsilon cycle");
        if x.is_final(s) {
            let e = out.entry((i.clone(), o.clone())).or_insert(sr.zero());
            *e = sr.plus(*e, sr.times(w, x.final_weight(s)));
        }
        for a in x.arcs(s) {
            let mut ni = i.clone();
            let mut no = o.clone();
            if a.ilabel != 0 {
                ni.push(a.ilabel);
            }
            if a.olabel != 0 {
                no.push(a.olabel);
            }
            if ni.len() > max_len || no.len() > max_len {
                continue;
            }
            stack.push((a.nextstate, ni, no, sr.times(w, a.weight), depth + 1));
        }
    }
    out.retain(|_, w| !sr.is_zero(*w));
    out
}

pub fn weight(map: &BTreeMap<Pair, f64>, sr: Semiring, p: &Pair) -> f64 {
    map.get(p).copied().unwrap_or(sr.zero())
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

/// Asserts two weighted relations agree on every pair.
pub fn assert_same(sr: Semiring, got: &BTreeMap<Pair, f64>, want: &BTreeMap<Pair, f64>, rel: f64) {
    for k in got.keys().chain(want.keys()) {
        let (g, w) = (weight(got, sr, k), weight(want, sr, k));
        assert!(close(g, w, rel), "pair {k:?}: got {g}, want {w}");
    }
}

/// All strings over labels 1..=3 of length at most `n`.
pub fn strings(n: usize) -> Vec<Vec<Label>> {
    let mut all = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &frontier {
            for l in 1..=3 {
                let mut t: Vec<Label> = s.clone();
                t.push(l);
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Weights of every accepting path emitting at most `max_len` labels per tape.
pub fn path_weights(x: &Wfst, max_len: usize) -> Vec<f64> {
    let sr = x.semiring();
    let mut out = Vec::new();
    let Some(start) = x.start() else { return out };
    let mut stack = vec![(start, 0usize, 0usize, sr.one())];
    while let Some((s, i, o, w)) = stack.pop() {
        if x.is_final(s) {
            out.push(sr.times(w, x.final_weight(s)));
        }
        for a in x.arcs(s) {
            let ni = i + (a.ilabel != 0) as usize;
            let no = o + (a.olabel != 0) as usize;
            if ni <= max_len && no <= max_len {
                stack.push((a.nextstate, ni, no, sr.times(w, a.weight)));
            }
        }
    }
    out
}

/// One-state identity transducer over labels 1..=3.
pub fn identity(sr: Semiring) -> Wfst {
    let mut f = Wfst::acceptor(sr, alphabet());
    let s = f.add_state();
    f.set_start(s).unwrap();
    f.set_final(s, sr.one()).unwrap();
    for l in 1..=3 {
        f.add_arc(s, Arc::new(l, l, sr.one(), s)).unwrap();
    }
    f
}
