//! Trimming, best-path search, beam pruning and path sums.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{Arc, Path, StateId, Wfst};
use crate::error::{Error, Result};
use crate::semiring::Weight;

fn accessible(x: &Wfst) -> Vec<bool> {
    let mut seen = vec![false; x.num_states()];
    let mut stack: Vec<StateId> = x.start().into_iter().collect();
    while let Some(s) = stack.pop() {
        if core::mem::replace(&mut seen[s], true) {
            continue;
        }
        stack.extend(x.arcs(s).iter().map(|a| a.nextstate).filter(|&n| !seen[n]));
    }
    seen
}

fn coaccessible(x: &Wfst) -> Vec<bool> {
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); x.num_states()];
    for s in x.states() {
        for a in x.arcs(s) {
            if !x.semiring().is_zero(a.weight) {
                rev[a.nextstate].push(s);
            }
        }
    }
    let mut seen = vec![false; x.num_states()];
    let mut stack: Vec<StateId> = x.states().filter(|&s| x.is_final(s)).collect();
    while let Some(s) = stack.pop() {
        if core::mem::replace(&mut seen[s], true) {
            continue;
        }
        stack.extend(rev[s].iter().copied().filter(|&p| !seen[p]));
    }
    seen
}

/// Keeps only states lying on some start→final path; ids are renumbered in
/// their original order. Arcs with weight zero are dropped.
pub fn connect(x: &Wfst) -> Wfst {
    let acc = accessible(x);
    let coacc = coaccessible(x);
    let sr = x.semiring();
    let mut map = vec![usize::MAX; x.num_states()];
    let mut n = 0;
    for s in x.states() {
        if acc[s] && coacc[s] {
            map[s] = n;
            n += 1;
        }
    }
    let mut finals = Vec::with_capacity(n);
    let mut arcs = Vec::with_capacity(n);
    for s in x.states().filter(|&s| map[s] != usize::MAX) {
        finals.push(x.final_weight(s));
        arcs.push(
            x.arcs(s)
                .iter()
                .filter(|a| map[a.nextstate] != usize::MAX && !sr.is_zero(a.weight))
                .map(|a| Arc { nextstate: map[a.nextstate], ..a.clone() })
                .collect(),
        );
    }
    let start = x.start().and_then(|s| (map[s] != usize::MAX).then_some(map[s]));
    Wfst::from_parts(sr, x.isyms().clone(), x.osyms().clone(), start, finals, arcs)
}

/// A topological order of all states, or an error if the machine has a cycle.
pub fn topological_order(x: &Wfst) -> Result<Vec<StateId>> {
    let mut indeg = vec![0usize; x.num_states()];
    for s in x.states() {
        for a in x.arcs(s) {
            indeg[a.nextstate] += 1;
        }
    }
    let mut ready: Vec<StateId> = x.states().filter(|&s| indeg[s] == 0).rev().collect();
    let mut order = Vec::with_capacity(x.num_states());
    while let Some(s) = ready.pop() {
        order.push(s);
        for a in x.arcs(s) {
            indeg[a.nextstate] -= 1;
            if indeg[a.nextstate] == 0 {
                ready.push(a.nextstate);
            }
        }
    }
    if order.len() == x.num_states() {
        Ok(order)
    } else {
        Err(Error::Cyclic("topological_order"))
    }
}

/// ⊕ over all accepting paths. Only defined for acyclic machines (after
/// trimming), where the sum is finite.
pub fn total_weight(x: &Wfst) -> Result<Weight> {
    let x = connect(x);
    let sr = x.semiring();
    let order = topological_order(&x).map_err(|_| Error::Cyclic("total_weight"))?;
    let Some(start) = x.start() else {
        return Ok(sr.zero());
    };
    let mut alpha = vec![sr.zero(); x.num_states()];
    alpha[start] = sr.one();
    let mut total = sr.zero();
    for s in order {
        if sr.is_zero(alpha[s]) {
            continue;
        }
        total = sr.plus(total, sr.times(alpha[s], x.final_weight(s)));
        for a in x.arcs(s) {
            alpha[a.nextstate] = sr.plus(alpha[a.nextstate], sr.times(alpha[s], a.weight));
        }
    }
    Ok(total)
}

/// Every accepting path of an acyclic machine, in depth-first order.
pub fn paths(x: &Wfst) -> Result<Vec<Path>> {
    let trimmed = connect(x);
    topological_order(&trimmed).map_err(|_| Error::Cyclic("paths"))?;
    let coacc = coaccessible(x);
    let sr = x.semiring();
    let mut out = Vec::new();
    let Some(start) = x.start() else {
        return Ok(out);
    };
    if !coacc[start] {
        return Ok(out);
    }
    // Explicit stack of (state, next arc index); `trail` holds the arcs taken.
    let mut stack: Vec<(StateId, usize)> = vec![(start, 0)];
    let mut trail: Vec<Arc> = Vec::new();
    if x.is_final(start) {
        out.push(Path::from_arcs(sr, start, Vec::new(), x.final_weight(start)));
    }
    while let Some(&mut (s, ref mut i)) = stack.last_mut() {
        let arcs = x.arcs(s);
        if *i == arcs.len() {
            stack.pop();
            trail.pop();
            continue;
        }
        let a = arcs[*i].clone();
        *i += 1;
        if sr.is_zero(a.weight) || !coacc[a.nextstate] {
            continue;
        }
        let n = a.nextstate;
        trail.push(a);
        stack.push((n, 0));
        if x.is_final(n) {
            out.push(Path::from_arcs(sr, start, trail.clone(), x.final_weight(n)));
        }
    }
    Ok(out)
}

#[derive(Debug)]
struct Entry {
    /// Priority: cost so far plus remaining distance.
    cost: Weight,
    g: Weight,
    seq: u64,
    node: usize,
    complete: bool,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // Reversed: BinaryHeap is a max-heap and we want the cheapest first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then(other.seq.cmp(&self.seq))
    }
}

fn require_ordered(x: &Wfst, op: &'static str) -> Result<()> {
    if x.semiring().is_ordered() {
        Ok(())
    } else {
        Err(Error::UnorderedSemiring(op))
    }
}

fn reject_negative(x: &Wfst, op: &'static str) -> Result<()> {
    for s in x.states() {
        if x.final_weight(s) < 0.0 {
            return Err(Error::NegativeWeight(x.final_weight(s), op));
        }
        if let Some(a) = x.arcs(s).iter().find(|a| a.weight < 0.0) {
            return Err(Error::NegativeWeight(a.weight, op));
        }
    }
    Ok(())
}

/// The `n` best accepting paths in nondecreasing weight order.
///
/// Best-first search over partial paths, ordered by cost so far plus the
/// exact remaining distance to a final state; each state is expanded at most
/// `n` times. Negative weights are accepted only on acyclic machines.
pub fn shortest_path(x: &Wfst, n: usize) -> Result<Vec<Path>> {
    require_ordered(x, "shortest_path")?;
    let beta = distances(x, false, "shortest_path")?;
    if n == 0 {
        return Err(Error::Invalid("shortest_path needs n >= 1".into()));
    }
    let sr = x.semiring();
    let mut results = Vec::new();
    let Some(start) = x.start() else {
        return Ok(results);
    };
    // Arena of partial paths: (state, parent node, arc taken into state).
    let mut nodes: Vec<(StateId, Option<usize>, Option<Arc>)> = vec![(start, None, None)];
    let mut pops = vec![0usize; x.num_states()];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    if beta[start] == f64::INFINITY {
        return Ok(results);
    }
    heap.push(Entry { cost: beta[start], g: sr.one(), seq, node: 0, complete: false });

    while let Some(Entry { g, node, complete, .. }) = heap.pop() {
        let s = nodes[node].0;
        if complete {
            let mut arcs = Vec::new();
            let mut cur = Some(node);
            while let Some(c) = cur {
                if let Some(a) = &nodes[c].2 {
                    arcs.push(a.clone());
                }
                cur = nodes[c].1;
            }
            arcs.reverse();
            results.push(Path::from_arcs(sr, start, arcs, x.final_weight(s)));
            if results.len() == n {
                break;
            }
            continue;
        }
        if pops[s] >= n {
            continue;
        }
        pops[s] += 1;
        if x.is_final(s) {
            seq += 1;
            let total = sr.times(g, x.final_weight(s));
            heap.push(Entry { cost: total, g: total, seq, node, complete: true });
        }
        for a in x.arcs(s) {
            if sr.is_zero(a.weight) || beta[a.nextstate] == f64::INFINITY {
                continue;
            }
            nodes.push((a.nextstate, Some(node), Some(a.clone())));
            seq += 1;
            let g = sr.times(g, a.weight);
            heap.push(Entry { cost: g + beta[a.nextstate], g, seq, node: nodes.len() - 1, complete: false });
        }
    }
    Ok(results)
}

#[derive(Debug)]
struct DistEntry(Weight, StateId);
impl PartialEq for DistEntry {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for DistEntry {}
impl PartialOrd for DistEntry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for DistEntry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

fn dijkstra(n: usize, sources: &[(StateId, Weight)], edges: &[Vec<(StateId, Weight)>]) -> Vec<Weight> {
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for &(s, w) in sources {
        if w < dist[s] {
            dist[s] = w;
            heap.push(DistEntry(w, s));
        }
    }
    while let Some(DistEntry(d, s)) = heap.pop() {
        if d > dist[s] {
            continue;
        }
        for &(t, w) in &edges[s] {
            let nd = d + w;
            if nd < dist[t] {
                dist[t] = nd;
                heap.push(DistEntry(nd, t));
            }
        }
    }
    dist
}

/// Best-path distances from the start (`forward = true`) or to a final state
/// (`forward = false`, final weights included), tropical semiring.
pub fn shortest_distance(x: &Wfst, forward: bool) -> Result<Vec<Weight>> {
    require_ordered(x, "shortest_distance")?;
    distances(x, forward, "shortest_distance")
}

/// Dynamic programming in topological order when acyclic (any weights),
/// Dijkstra otherwise (nonnegative weights only).
fn distances(x: &Wfst, forward: bool, op: &'static str) -> Result<Vec<Weight>> {
    let n = x.num_states();
    if let Ok(order) = topological_order(x) {
        let mut d = vec![f64::INFINITY; n];
        if forward {
            if let Some(s) = x.start() {
                d[s] = 0.0;
            }
            for s in order {
                for a in x.arcs(s) {
                    d[a.nextstate] = d[a.nextstate].min(d[s] + a.weight);
                }
            }
        } else {
            for s in order.into_iter().rev() {
                let via = x.arcs(s).iter().map(|a| a.weight + d[a.nextstate]);
                d[s] = via.fold(x.final_weight(s), f64::min);
            }
        }
        return Ok(d);
    }
    reject_negative(x, op)?;
    let mut edges = vec![Vec::new(); n];
    for s in x.states() {
        for a in x.arcs(s) {
            if forward {
                edges[s].push((a.nextstate, a.weight));
            } else {
                edges[a.nextstate].push((s, a.weight));
            }
        }
    }
    let sources: Vec<(StateId, Weight)> = if forward {
        x.start().map(|s| (s, 0.0)).into_iter().collect()
    } else {
        x.states().filter(|&s| x.is_final(s)).map(|s| (s, x.final_weight(s))).collect()
    };
    Ok(dijkstra(n, &sources, &edges))
}

/// Keeps the states and arcs lying on some accepting path whose weight is
/// within `beam` of the best path weight (additive slack in the tropical
/// semiring).
pub fn prune(x: &Wfst, beam: Weight) -> Result<Wfst> {
    require_ordered(x, "prune")?;
    if beam.is_nan() || beam < 0.0 {
        return Err(Error::Invalid(alloc::format!("beam {beam} must be >= 0")));
    }
    let alpha = distances(x, true, "prune")?;
    let beta = distances(x, false, "prune")?;
    let Some(start) = x.start() else {
        return Ok(connect(x));
    };
    let best = beta[start];
    if best == f64::INFINITY {
        return Ok(connect(x));
    }
    let limit = best + beam;
    let tol = 1e-9 * (1.0 + best.abs());
    let keep = |cost: Weight| cost.is_finite() && cost <= limit + tol;
    let sr = x.semiring();
    let mut finals = Vec::with_capacity(x.num_states());
    let mut arcs = Vec::with_capacity(x.num_states());
    for s in x.states() {
        let fw = x.final_weight(s);
        finals.push(if keep(alpha[s] + fw) { fw } else { sr.zero() });
        arcs.push(
            x.arcs(s)
                .iter()
                .filter(|a| keep(alpha[s] + a.weight + beta[a.nextstate]))
                .cloned()
                .collect(),
        );
    }
    let pruned = Wfst::from_parts(sr, x.isyms().clone(), x.osyms().clone(), x.start(), finals, arcs);
    Ok(connect(&pruned))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;
    use crate::symbols::SymbolTable;

    fn chain(weights: &[f64]) -> Wfst {
        let t = SymbolTable::from_symbols(["a"]);
        let mut f = Wfst::acceptor(Semiring::Tropical, t);
        let mut s = f.add_state();
        f.set_start(s).unwrap();
        for &w in weights {
            let n = f.add_state();
            f.add_arc(s, Arc::new(1, 1, w, n)).unwrap();
            s = n;
        }
        f.set_final(s, 0.0).unwrap();
        f
    }

    #[test]
    fn single_chain_best_path() {
        let f = chain(&[1.0, 2.5, 0.5]);
        let p = shortest_path(&f, 1).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].weight, 4.0);
        assert_eq!(p[0].input, vec![1, 1, 1]);
    }

    #[test]
    fn shortest_path_rejects_unordered_and_negative() {
        let t = SymbolTable::from_symbols(["a"]);
        let f = Wfst::from_string(Semiring::Probability, &t, &["a"]).unwrap();
        assert_eq!(shortest_path(&f, 1).unwrap_err().to_string(), "shortest_path requires ordered semiring");
        let mut g = chain(&[1.0, -0.5]);
        assert_eq!(shortest_path(&g, 1).unwrap()[0].weight, 0.5);
        g.add_arc(2, Arc::new(1, 1, 1.0, 0)).unwrap();
        assert!(matches!(shortest_path(&g, 1), Err(Error::NegativeWeight(..))));
    }

    #[test]
    fn connect_drops_dangling_state() {
        let mut f = chain(&[1.0]);
        let d = f.add_state();
        f.add_arc(0, Arc::new(1, 1, 0.0, d)).unwrap();
        assert_eq!(f.num_states(), 3);
        let c = connect(&f);
        assert_eq!(c.num_states(), 2);
        assert_eq!(connect(&c), c);
    }

    #[test]
    fn total_weight_cases() {
        let t = SymbolTable::from_symbols(["a"]);
        let empty = Wfst::acceptor(Semiring::Probability, t.clone());
        assert_eq!(total_weight(&empty).unwrap(), 0.0);
        let f = chain(&[1.5, 2.0]);
        assert_eq!(total_weight(&f).unwrap(), 3.5);
        let mut cyc = chain(&[1.0]);
        cyc.add_arc(1, Arc::new(1, 1, 1.0, 0)).unwrap();
        assert_eq!(total_weight(&cyc).unwrap_err().to_string(), "total_weight requires acyclic automaton");
    }

    /// Three parallel paths of cost 3, 5 and 9 through a 5-state machine.
    fn three_paths() -> Wfst {
        let t = SymbolTable::from_symbols(["a", "b", "c"]);
        let mut f = Wfst::acceptor(Semiring::Tropical, t);
        for _ in 0..5 {
            f.add_state();
        }
        f.set_start(0).unwrap();
        f.set_final(4, 0.0).unwrap();
        f.add_arc(0, Arc::new(1, 1, 1.0, 1)).unwrap();
        f.add_arc(1, Arc::new(1, 1, 2.0, 4)).unwrap(); // 3
        f.add_arc(0, Arc::new(2, 2, 4.0, 2)).unwrap();
        f.add_arc(2, Arc::new(2, 2, 1.0, 4)).unwrap(); // 5
        f.add_arc(0, Arc::new(3, 3, 4.0, 3)).unwrap();
        f.add_arc(3, Arc::new(3, 3, 5.0, 4)).unwrap(); // 9
        f
    }

    fn costs(f: &Wfst) -> Vec<f64> {
        paths(f).unwrap().iter().map(|p| p.weight).collect()
    }

    #[test]
    fn prune_keeps_paths_within_beam() {
        let f = three_paths();
        assert_eq!(costs(&prune(&f, 3.0).unwrap()), vec![3.0, 5.0]);
        assert_eq!(costs(&prune(&f, 0.0).unwrap()), vec![3.0]);
        assert_eq!(prune(&f, f64::INFINITY).unwrap(), connect(&f));
    }

    #[test]
    fn n_best_in_order() {
        let f = three_paths();
        let w: Vec<f64> = shortest_path(&f, 5).unwrap().iter().map(|p| p.weight).collect();
        assert_eq!(w, vec![3.0, 5.0, 9.0]);
    }

    #[test]
    fn n_best_on_cyclic_machine_terminates() {
        let mut f = chain(&[1.0]);
        f.add_arc(1, Arc::new(1, 1, 1.0, 0)).unwrap();
        let w: Vec<f64> = shortest_path(&f, 3).unwrap().iter().map(|p| p.weight).collect();
        assert_eq!(w, vec![1.0, 3.0, 5.0]);
    }
}
