//! Rational operations: singleton, scaling, sum, concatenation, power and
//! closure, plus the label-level operations invert and project.

use super::{Arc, Wfst};
use crate::error::{Error, Result};
use crate::semiring::{Semiring, Weight};
use crate::symbols::{SymbolTable, EPSILON};

/// The machine assigning `weight` to exactly the pair `(input, output)`.
///
/// With equal tables and `input == output` this is the singleton language
/// `{u}` scaled by `weight`.
pub fn singleton<S: AsRef<str>>(
    semiring: Semiring,
    isyms: &SymbolTable,
    osyms: &SymbolTable,
    input: &[S],
    output: &[S],
    weight: Weight,
) -> Result<Wfst> {
    semiring.check(weight)?;
    let i = isyms.encode(input)?;
    let o = osyms.encode(output)?;
    Ok(Wfst::from_labels(semiring, isyms.clone(), osyms.clone(), &i, &o, weight))
}

/// `(kX)(u) = k ⊗ X(u)`.
pub fn scale(x: &Wfst, k: Weight) -> Result<Wfst> {
    let sr = x.semiring();
    sr.check(k)?;
    let mut out = x.clone();
    for st in &mut out.states {
        st.final_weight = sr.times(k, st.final_weight);
    }
    Ok(out)
}

fn check_tables(x: &Wfst, y: &Wfst, op: &'static str) -> Result<()> {
    x.same_semiring(y)?;
    if x.isyms != y.isyms || x.osyms != y.osyms {
        return Err(Error::SymbolTableMismatch(op));
    }
    Ok(())
}

/// Copies every state of `y` into `out`, returning the id offset.
fn append(out: &mut Wfst, y: &Wfst) -> usize {
    let offset = out.states.len();
    for st in &y.states {
        let mut st = st.clone();
        for a in &mut st.arcs {
            a.nextstate += offset;
        }
        out.states.push(st);
    }
    offset
}

/// `(X + Y)(u) = X(u) ⊕ Y(u)`, via a fresh start state with epsilon arcs into
/// both operands.
pub fn sum(x: &Wfst, y: &Wfst) -> Result<Wfst> {
    check_tables(x, y, "sum")?;
    let sr = x.semiring();
    let mut out = Wfst::new(sr, x.isyms.clone(), x.osyms.clone());
    let start = out.add_state();
    out.start = Some(start);
    for m in [x, y] {
        let off = append(&mut out, m);
        if let Some(s) = m.start {
            out.states[start].arcs.push(Arc::new(EPSILON, EPSILON, sr.one(), s + off));
        }
    }
    Ok(out)
}

/// `(XY)(w) = ⊕_{u·v=w} X(u) ⊗ Y(v)`: every final state of `X` gets an
/// epsilon arc, weighted by its final weight, into the start of `Y`.
pub fn concat(x: &Wfst, y: &Wfst) -> Result<Wfst> {
    check_tables(x, y, "concat")?;
    let sr = x.semiring();
    let mut out = x.clone();
    let off = append(&mut out, y);
    for s in 0..x.states.len() {
        let fw = out.states[s].final_weight;
        out.states[s].final_weight = sr.zero();
        if let Some(ys) = y.start {
            if !sr.is_zero(fw) {
                out.states[s].arcs.push(Arc::new(EPSILON, EPSILON, fw, ys + off));
            }
        }
    }
    Ok(out)
}

/// `X⁰ = {ε}`, `Xⁿ⁺¹ = X·Xⁿ`.
pub fn power(x: &Wfst, n: usize) -> Result<Wfst> {
    let sr = x.semiring();
    let mut acc = Wfst::from_labels(sr, x.isyms.clone(), x.osyms.clone(), &[], &[], sr.one());
    for _ in 0..n {
        acc = concat(x, &acc)?;
    }
    Ok(acc)
}

/// `X* = ⊕_{k≥0} Xᵏ`: a new initial state, final with weight one, and
/// epsilon loops from every final state of `X` back to its start.
pub fn closure(x: &Wfst) -> Wfst {
    let sr = x.semiring();
    let mut out = Wfst::new(sr, x.isyms.clone(), x.osyms.clone());
    let start = out.add_state();
    out.start = Some(start);
    out.states[start].final_weight = sr.one();
    let off = append(&mut out, x);
    if let Some(xs) = x.start {
        out.states[start].arcs.push(Arc::new(EPSILON, EPSILON, sr.one(), xs + off));
        for s in 0..x.states.len() {
            let fw = x.states[s].final_weight;
            if !sr.is_zero(fw) {
                out.states[s + off].arcs.push(Arc::new(EPSILON, EPSILON, fw, xs + off));
            }
        }
    }
    out
}

/// Swaps input and output on every arc, and the two symbol tables.
pub fn invert(t: &Wfst) -> Wfst {
    let mut out = t.clone();
    core::mem::swap(&mut out.isyms, &mut out.osyms);
    for st in &mut out.states {
        for a in &mut st.arcs {
            core::mem::swap(&mut a.ilabel, &mut a.olabel);
        }
    }
    out
}

/// `Xᴿ(u) = X(reverse u)`: arcs flipped, with a fresh start state joined by
/// epsilon arcs (carrying the old final weights) to the old final states.
pub fn reverse(x: &Wfst) -> Wfst {
    let sr = x.semiring();
    let mut out = Wfst::new(sr, x.isyms.clone(), x.osyms.clone());
    let start = out.add_state();
    out.start = Some(start);
    for _ in 0..x.states.len() {
        out.add_state();
    }
    for (s, st) in x.states.iter().enumerate() {
        for a in &st.arcs {
            out.states[a.nextstate + 1].arcs.push(Arc::new(a.ilabel, a.olabel, a.weight, s + 1));
        }
        if !sr.is_zero(st.final_weight) {
            out.states[start].arcs.push(Arc::new(EPSILON, EPSILON, st.final_weight, s + 1));
        }
    }
    if let Some(s) = x.start {
        out.states[s + 1].final_weight = sr.one();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectSide {
    Input,
    Output,
}

/// Acceptor over one tape of `t`.
pub fn project(t: &Wfst, side: ProjectSide) -> Wfst {
    let mut out = t.clone();
    let syms = match side {
        ProjectSide::Input => t.isyms.clone(),
        ProjectSide::Output => t.osyms.clone(),
    };
    out.isyms = syms.clone();
    out.osyms = syms;
    for st in &mut out.states {
        for a in &mut st.arcs {
            match side {
                ProjectSide::Input => a.olabel = a.ilabel,
                ProjectSide::Output => a.ilabel = a.olabel,
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wfst::paths;

    fn syms() -> SymbolTable {
        SymbolTable::from_symbols(["a", "b"])
    }

    fn weight_of(f: &Wfst, s: &[&str]) -> Weight {
        let sr = f.semiring();
        let want = f.isyms().encode(s).unwrap();
        sr.sum(paths(f).unwrap().into_iter().filter(|p| p.input == want).map(|p| p.weight))
    }

    #[test]
    fn singleton_and_scaling() {
        let t = syms();
        let one = singleton(Semiring::Probability, &t, &t, &["a", "b"], &["a", "b"], 1.0).unwrap();
        assert_eq!(weight_of(&one, &["a", "b"]), 1.0);
        assert_eq!(weight_of(&one, &["a"]), 0.0);
        let k = scale(&one, 0.3).unwrap();
        assert_eq!(weight_of(&k, &["a", "b"]), 0.3);
    }

    #[test]
    fn singleton_names_unknown_symbol() {
        let t = syms();
        let err = singleton(Semiring::Tropical, &t, &t, &["a", "q"], &["a"], 0.0).unwrap_err();
        assert_eq!(err, Error::UnknownSymbol("q".into()));
    }

    #[test]
    fn tropical_sum_takes_min() {
        let t = syms();
        let x = singleton(Semiring::Tropical, &t, &t, &["a"], &["a"], 2.0).unwrap();
        let y = singleton(Semiring::Tropical, &t, &t, &["a"], &["a"], 3.0).unwrap();
        assert_eq!(weight_of(&sum(&x, &y).unwrap(), &["a"]), 2.0);
    }

    #[test]
    fn sum_rejects_mixed_semirings() {
        let t = syms();
        let x = singleton(Semiring::Tropical, &t, &t, &["a"], &["a"], 2.0).unwrap();
        let y = singleton(Semiring::Probability, &t, &t, &["a"], &["a"], 0.5).unwrap();
        assert!(matches!(sum(&x, &y), Err(Error::SemiringMismatch(..))));
        assert!(matches!(concat(&x, &y), Err(Error::SemiringMismatch(..))));
    }

    #[test]
    fn concat_multiplies_single_split() {
        let t = syms();
        let x = singleton(Semiring::Probability, &t, &t, &["a"], &["a"], 0.5).unwrap();
        let y = singleton(Semiring::Probability, &t, &t, &["b"], &["b"], 0.25).unwrap();
        assert_eq!(weight_of(&concat(&x, &y).unwrap(), &["a", "b"]), 0.125);
    }

    #[test]
    fn power_zero_is_epsilon() {
        let t = syms();
        let x = singleton(Semiring::Tropical, &t, &t, &["a"], &["a"], 2.0).unwrap();
        let p0 = power(&x, 0).unwrap();
        assert_eq!(weight_of(&p0, &[]), 0.0);
        assert_eq!(weight_of(&p0, &["a"]), f64::INFINITY);
        assert_eq!(weight_of(&power(&x, 3).unwrap(), &["a", "a", "a"]), 6.0);
    }

    #[test]
    fn invert_swaps_pair() {
        let t = syms();
        let ab = singleton(Semiring::Tropical, &t, &t, &["a"], &["b"], 0.0).unwrap();
        let ba = singleton(Semiring::Tropical, &t, &t, &["b"], &["a"], 0.0).unwrap();
        assert_eq!(invert(&ab), ba);
        assert_eq!(invert(&invert(&ab)), ab);
    }

    #[test]
    fn reverse_reads_backwards() {
        let t = syms();
        let ab = singleton(Semiring::Tropical, &t, &t, &["a", "b"], &["a", "b"], 1.5).unwrap();
        let r = reverse(&ab);
        assert_eq!(weight_of(&r, &["b", "a"]), 1.5);
        assert_eq!(weight_of(&r, &["a", "b"]), f64::INFINITY);
    }

    #[test]
    fn project_output_of_pair() {
        let t = syms();
        let ab = singleton(Semiring::Tropical, &t, &t, &["a"], &["b"], 0.0).unwrap();
        let p = project(&ab, ProjectSide::Output);
        assert!(p.is_acceptor());
        assert_eq!(weight_of(&p, &["b"]), 0.0);
        assert_eq!(project(&p, ProjectSide::Input), p);
    }
}
