//! Weighted finite-state acceptors and transducers.
//!
//! A [`Wfst`] is a semiring-parameterized automaton whose arcs carry an input
//! label, an output label, a weight and a destination. Label `0` is epsilon on
//! both tapes. An acceptor is simply a transducer whose arcs all have equal
//! input and output labels.
//!
//! Machines are values: every operation in this module returns a fresh
//! machine and leaves its arguments untouched.

mod compose;
mod rational;
mod search;

use alloc::string::String;
use alloc::vec::Vec;

pub use compose::compose;
pub use rational::{closure, concat, invert, power, project, reverse, scale, singleton, sum, ProjectSide};
pub use search::{connect, paths, prune, shortest_distance, shortest_path, topological_order, total_weight};

use crate::error::{Error, Result};
use crate::semiring::{Semiring, Weight};
use crate::symbols::{Label, SymbolTable, EPSILON};

pub type StateId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub ilabel: Label,
    pub olabel: Label,
    pub weight: Weight,
    pub nextstate: StateId,
}

impl Arc {
    pub fn new(ilabel: Label, olabel: Label, weight: Weight, nextstate: StateId) -> Self {
        Arc { ilabel, olabel, weight, nextstate }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct State {
    arcs: Vec<Arc>,
    final_weight: Weight,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Wfst {
    semiring: Semiring,
    start: Option<StateId>,
    states: Vec<State>,
    isyms: SymbolTable,
    osyms: SymbolTable,
}

/// One accepting path through a machine.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    /// Visited states, `arcs.len() + 1` long.
    pub states: Vec<StateId>,
    pub arcs: Vec<Arc>,
    /// Non-epsilon input labels in order.
    pub input: Vec<Label>,
    /// Non-epsilon output labels in order.
    pub output: Vec<Label>,
    /// ⊗ of the arc weights and the final weight.
    pub weight: Weight,
}

impl Path {
    pub(crate) fn from_arcs(semiring: Semiring, start: StateId, arcs: Vec<Arc>, final_weight: Weight) -> Self {
        let mut states = Vec::with_capacity(arcs.len() + 1);
        states.push(start);
        let mut input = Vec::new();
        let mut output = Vec::new();
        let mut weight = semiring.one();
        for a in &arcs {
            states.push(a.nextstate);
            if a.ilabel != EPSILON {
                input.push(a.ilabel);
            }
            if a.olabel != EPSILON {
                output.push(a.olabel);
            }
            weight = semiring.times(weight, a.weight);
        }
        weight = semiring.times(weight, final_weight);
        Path { states, arcs, input, output, weight }
    }

    pub fn input_symbols(&self, fst: &Wfst) -> Vec<String> {
        fst.isyms().decode(&self.input)
    }

    pub fn output_symbols(&self, fst: &Wfst) -> Vec<String> {
        fst.osyms().decode(&self.output)
    }
}

impl Wfst {
    /// An empty machine (no states, empty language).
    pub fn new(semiring: Semiring, isyms: SymbolTable, osyms: SymbolTable) -> Self {
        Wfst { semiring, start: None, states: Vec::new(), isyms, osyms }
    }

    /// An empty acceptor: input and output share `syms`.
    pub fn acceptor(semiring: Semiring, syms: SymbolTable) -> Self {
        Self::new(semiring, syms.clone(), syms)
    }

    /// Linear-chain acceptor for a symbol string, weight one.
    pub fn from_string<S: AsRef<str>>(semiring: Semiring, syms: &SymbolTable, symbols: &[S]) -> Result<Self> {
        let labels = syms.encode(symbols)?;
        Ok(Self::from_labels(semiring, syms.clone(), syms.clone(), &labels, &labels, semiring.one()))
    }

    /// Linear chain reading `input` and writing `output`, padding the shorter
    /// side with epsilons. The weight sits on the final state.
    pub fn from_labels(
        semiring: Semiring,
        isyms: SymbolTable,
        osyms: SymbolTable,
        input: &[Label],
        output: &[Label],
        weight: Weight,
    ) -> Self {
        let mut f = Wfst::new(semiring, isyms, osyms);
        let mut s = f.add_state();
        f.start = Some(s);
        let len = input.len().max(output.len());
        for i in 0..len {
            let n = f.add_state();
            let il = input.get(i).copied().unwrap_or(EPSILON);
            let ol = output.get(i).copied().unwrap_or(EPSILON);
            f.states[s].arcs.push(Arc::new(il, ol, semiring.one(), n));
            s = n;
        }
        f.states[s].final_weight = weight;
        f
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn isyms(&self) -> &SymbolTable {
        &self.isyms
    }

    pub fn osyms(&self) -> &SymbolTable {
        &self.osyms
    }

    pub fn start(&self) -> Option<StateId> {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.states.iter().map(|s| s.arcs.len()).sum()
    }

    pub fn states(&self) -> core::ops::Range<StateId> {
        0..self.states.len()
    }

    pub fn arcs(&self, s: StateId) -> &[Arc] {
        &self.states[s].arcs
    }

    pub fn final_weight(&self, s: StateId) -> Weight {
        self.states[s].final_weight
    }

    pub fn is_final(&self, s: StateId) -> bool {
        !self.semiring.is_zero(self.states[s].final_weight)
    }

    /// True iff every arc has equal input and output labels.
    pub fn is_acceptor(&self) -> bool {
        self.states.iter().flat_map(|s| &s.arcs).all(|a| a.ilabel == a.olabel)
    }

    pub fn add_state(&mut self) -> StateId {
        self.states.push(State { arcs: Vec::new(), final_weight: self.semiring.zero() });
        self.states.len() - 1
    }

    pub fn set_start(&mut self, s: StateId) -> Result<()> {
        self.check_state(s)?;
        self.start = Some(s);
        Ok(())
    }

    pub fn set_final(&mut self, s: StateId, w: Weight) -> Result<()> {
        self.check_state(s)?;
        self.semiring.check(w)?;
        self.states[s].final_weight = w;
        Ok(())
    }

    pub fn add_arc(&mut self, s: StateId, arc: Arc) -> Result<()> {
        self.check_state(s)?;
        self.check_state(arc.nextstate)?;
        self.semiring.check(arc.weight)?;
        self.states[s].arcs.push(arc);
        Ok(())
    }

    fn check_state(&self, s: StateId) -> Result<()> {
        if s < self.states.len() {
            Ok(())
        } else {
            Err(Error::InvalidState(s))
        }
    }

    /// Replaces both symbol tables, translating every label by name. Fails if
    /// a used symbol is missing from the new tables.
    pub fn relabel(&self, isyms: &SymbolTable, osyms: &SymbolTable) -> Result<Wfst> {
        let imap = label_map(&self.isyms, isyms, self.used_labels(true))?;
        let omap = label_map(&self.osyms, osyms, self.used_labels(false))?;
        let mut out = self.clone();
        out.isyms = isyms.clone();
        out.osyms = osyms.clone();
        for st in &mut out.states {
            for a in &mut st.arcs {
                a.ilabel = imap(a.ilabel);
                a.olabel = omap(a.olabel);
            }
        }
        Ok(out)
    }

    fn used_labels(&self, input: bool) -> Vec<Label> {
        let mut v: Vec<Label> = self
            .states
            .iter()
            .flat_map(|s| &s.arcs)
            .map(|a| if input { a.ilabel } else { a.olabel })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Removes states not reachable from the start and not co-reachable from a
    /// final state. See [`connect`].
    pub fn connected(&self) -> Wfst {
        connect(self)
    }

    pub(crate) fn same_semiring(&self, other: &Wfst) -> Result<()> {
        if self.semiring == other.semiring {
            Ok(())
        } else {
            Err(Error::SemiringMismatch(self.semiring.name(), other.semiring.name()))
        }
    }

    pub(crate) fn from_parts(
        semiring: Semiring,
        isyms: SymbolTable,
        osyms: SymbolTable,
        start: Option<StateId>,
        finals: Vec<Weight>,
        arcs: Vec<Vec<Arc>>,
    ) -> Wfst {
        let states = finals.into_iter().zip(arcs).map(|(final_weight, arcs)| State { arcs, final_weight }).collect();
        Wfst { semiring, start, states, isyms, osyms }
    }
}

fn label_map(
    from: &SymbolTable,
    to: &SymbolTable,
    used: Vec<Label>,
) -> Result<impl Fn(Label) -> Label> {
    let mut map = alloc::collections::BTreeMap::new();
    for l in used {
        let sym = from.symbol(l).ok_or_else(|| Error::UnknownSymbol(alloc::format!("#{l}")))?;
        let id = to.find(sym).ok_or_else(|| Error::UnknownSymbol(sym.into()))?;
        map.insert(l, id);
    }
    Ok(move |l: Label| map[&l])
}
