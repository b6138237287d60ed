//! Generalized composition `(S ∘ T)(r, t) = ⊕_s S(r, s) ⊗ T(s, t)`.
//!
//! Application, reverse application and intersection are the cases where one
//! or both operands are acceptors; they go through the same code.
//!
//! Epsilons are handled with the three-state epsilon filter. Filter state 0
//! allows any move; after `S` moves alone on an output epsilon the filter sits
//! in state 1, where only further `S`-alone moves or a real match are allowed;
//! state 2 is the mirror image for `T`. Simultaneous epsilon moves are only
//! allowed from state 0. Each interleaving of intermediate epsilons therefore
//! corresponds to exactly one path, which keeps sums exact in non-idempotent
//! semirings.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use super::{Arc, StateId, Wfst};
use crate::error::{Error, Result};
use crate::symbols::EPSILON;

type Filter = u8;
type Key = (StateId, StateId, Filter);

pub fn compose(s: &Wfst, t: &Wfst) -> Result<Wfst> {
    s.same_semiring(t)?;
    if s.osyms() != t.isyms() {
        return Err(Error::SymbolTableMismatch("compose"));
    }
    let sr = s.semiring();
    let mut out = Wfst::new(sr, s.isyms().clone(), t.osyms().clone());
    let (Some(s0), Some(t0)) = (s.start(), t.start()) else {
        return Ok(out);
    };

    // T's arcs per state, sorted by input label for range lookup.
    let t_sorted: Vec<Vec<&Arc>> = t
        .states()
        .map(|q| {
            let mut v: Vec<&Arc> = t.arcs(q).iter().collect();
            v.sort_by_key(|a| a.ilabel);
            v
        })
        .collect();

    let mut ids: BTreeMap<Key, StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |key: Key, out: &mut Wfst, queue: &mut VecDeque<(Key, StateId)>| -> StateId {
        *ids.entry(key).or_insert_with(|| {
            let id = out.add_state();
            queue.push_back((key, id));
            id
        })
    };

    let start = intern((s0, t0, 0), &mut out, &mut queue);
    out.start = Some(start);

    while let Some(((q1, q2, f), id)) = queue.pop_front() {
        let fw = sr.times(s.final_weight(q1), t.final_weight(q2));
        out.states[id].final_weight = fw;

        let mut new_arcs = Vec::new();
        for a1 in s.arcs(q1) {
            if a1.olabel == EPSILON {
                // S moves alone; T stays put.
                if f != 2 {
                    let n = intern((a1.nextstate, q2, 1), &mut out, &mut queue);
                    new_arcs.push(Arc::new(a1.ilabel, EPSILON, a1.weight, n));
                }
                // Both move on epsilon.
                if f == 0 {
                    let eps = &t_sorted[q2][..t_sorted[q2].partition_point(|a| a.ilabel == EPSILON)];
                    for a2 in eps {
                        let n = intern((a1.nextstate, a2.nextstate, 0), &mut out, &mut queue);
                        new_arcs.push(Arc::new(a1.ilabel, a2.olabel, sr.times(a1.weight, a2.weight), n));
                    }
                }
            } else {
                let row = &t_sorted[q2];
                let lo = row.partition_point(|a| a.ilabel < a1.olabel);
                let hi = row.partition_point(|a| a.ilabel <= a1.olabel);
                for a2 in &row[lo..hi] {
                    let n = intern((a1.nextstate, a2.nextstate, 0), &mut out, &mut queue);
                    new_arcs.push(Arc::new(a1.ilabel, a2.olabel, sr.times(a1.weight, a2.weight), n));
                }
            }
        }
        if f != 1 {
            // T moves alone on an input epsilon; S stays put.
            for a2 in t_sorted[q2].iter().take_while(|a| a.ilabel == EPSILON) {
                let n = intern((q1, a2.nextstate, 2), &mut out, &mut queue);
                new_arcs.push(Arc::new(EPSILON, a2.olabel, a2.weight, n));
            }
        }
        out.states[id].arcs = new_arcs;
    }
    Ok(out.connected())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;
    use crate::symbols::SymbolTable;
    use crate::wfst::{paths, singleton, sum};

    #[test]
    fn application_maps_string() {
        let t = SymbolTable::from_symbols(["a", "b"]);
        let x = Wfst::from_string(Semiring::Tropical, &t, &["a"]).unwrap();
        let ab = singleton(Semiring::Tropical, &t, &t, &["a"], &["b"], 1.5).unwrap();
        let y = compose(&x, &ab).unwrap();
        let ps = paths(&y).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].output, vec![2]);
        assert_eq!(ps[0].weight, 1.5);
    }

    #[test]
    fn epsilon_interleavings_counted_once() {
        // S: a -> ε ε (two output epsilons), T: ε -> b (one input epsilon).
        let t = SymbolTable::from_symbols(["a", "b"]);
        let s = singleton(Semiring::Probability, &t, &t, &["a"], &[] as &[&str], 0.5).unwrap();
        let s = crate::wfst::concat(&s, &singleton(Semiring::Probability, &t, &t, &[] as &[&str], &[], 1.0).unwrap()).unwrap();
        let tt = singleton(Semiring::Probability, &t, &t, &[] as &[&str], &["b"], 0.25).unwrap();
        let st = compose(&s, &tt).unwrap();
        let total: f64 = paths(&st).unwrap().iter().map(|p| p.weight).sum();
        assert!((total - 0.125).abs() < 1e-15, "got {total}");
    }

    #[test]
    fn mismatched_tables_rejected() {
        let a = SymbolTable::from_symbols(["a"]);
        let b = SymbolTable::from_symbols(["b"]);
        let x = Wfst::from_string(Semiring::Tropical, &a, &["a"]).unwrap();
        let y = Wfst::from_string(Semiring::Tropical, &b, &["b"]).unwrap();
        assert_eq!(compose(&x, &y), Err(Error::SymbolTableMismatch("compose")));
        let z = Wfst::from_string(Semiring::Probability, &a, &["a"]).unwrap();
        assert!(matches!(compose(&x, &z), Err(Error::SemiringMismatch(..))));
        let _ = sum(&x, &x).unwrap();
    }
}
