use textfst_core::pipelines::{build_dictionary_fst, Lexicon};
use textfst_core::{Semiring, SymbolTable, Wfst};

/// Acceptor from `(from, to, symbol, weight)` arcs; state 0 starts, the last
/// state is final.
pub fn acceptor(syms: &SymbolTable, n: usize, arcs: &[(usize, usize, &str, f64)]) -> Wfst {
    let mut f = Wfst::acceptor(Semiring::Tropical, syms.clone());
    for _ in 0..n {
        f.add_state();
    }
    f.set_start(0).unwrap();
    f.set_final(n - 1, 0.0).unwrap();
    for &(a, b, s, w) in arcs {
        let l = syms.find(s).unwrap();
        f.add_arc(a, textfst_core::Arc::new(l, l, w, b)).unwrap();
    }
    f
}

pub struct Bigram {
    pub words: Vec<String>,
    /// cost[i][j]: word j after word i; row 0 is the sentence start.
    pub cost: Vec<Vec<f64>>,
}

impl Bigram {
    pub fn score(&self, ws: &[String]) -> f64 {
        let mut prev = 0;
        let mut total = 0.0;
        for w in ws {
            let j = self.words.iter().position(|x| x == w).unwrap();
            total += self.cost[prev][j];
            prev = j + 1;
        }
        total
    }

    pub fn acceptor(&self) -> Wfst {
        let syms = SymbolTable::from_symbols(&self.words);
        let mut f = Wfst::acceptor(Semiring::Tropical, syms.clone());
        for _ in 0..=self.words.len() {
            f.add_state();
        }
        f.set_start(0).unwrap();
        for q in 1..=self.words.len() {
            f.set_final(q, 0.0).unwrap();
        }
        for (i, row) in self.cost.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let l = syms.find(&self.words[j]).unwrap();
                f.add_arc(i, textfst_core::Arc::new(l, l, c, j + 1)).unwrap();
            }
        }
        f
    }
}

pub fn hostile_battle() -> (Wfst, Wfst, Vec<(String, Vec<String>, f64)>) {
    let phones = SymbolTable::from_symbols(["hh", "aa", "s", "tcl", "t", "el", "b", "ae", "dx"]);
    let lattice = acceptor(
        &phones,
        11,
        &[
            (0, 1, "hh", 0.25),
            (1, 2, "aa", 0.5),
            (2, 3, "s", 0.25),
            (3, 4, "tcl", 0.125),
            (4, 5, "t", 0.125),
            (5, 6, "el", 0.5),
            (6, 7, "b", 0.25),
            (7, 8, "ae", 0.75),
            (7, 8, "aa", 0.5),
            (8, 9, "dx", 0.25),
            (8, 9, "tcl", 1.0),
            (9, 10, "el", 0.0),
        ],
    );
    let entries = vec![
        ("hostile".to_string(), vec!["hh", "aa", "s", "tcl", "t", "el"], 0.125),
        ("battle".into(), vec!["b", "ae", "dx", "el"], 0.5),
        ("bottle".into(), vec!["b", "aa", "dx", "el"], 0.5),
    ];
    let mut lex = Lexicon::new();
    for (w, p, c) in &entries {
        lex.add_cost(p, &[w.as_str()], *c).unwrap();
    }
    let entries = entries.into_iter().map(|(w, p, c)| (w, p.into_iter().map(String::from).collect(), c)).collect();
    (lattice, build_dictionary_fst(&lex).unwrap(), entries)
}

pub fn bigram(battle_after_hostile: f64, bottle_after_hostile: f64) -> Bigram {
    let words: Vec<String> = ["hostile", "battle", "bottle"].map(String::from).to_vec();
    let mut cost = vec![vec![2.0; 3]; 4];
    cost[0][0] = 0.5;
    cost[1][1] = battle_after_hostile;
    cost[1][2] = bottle_after_hostile;
    Bigram { words, cost }
}

/// Cheapest (phone string, word string) pair by brute force: every lattice
/// path, every way of covering its phones with dictionary entries.
pub fn oracle_recognize(lattice: &Wfst, entries: &[(String, Vec<String>, f64)], lm: &Bigram) -> Option<(Vec<String>, f64)> {
    fn covers(p: &[String], entries: &[(String, Vec<String>, f64)], acc: (Vec<String>, f64), out: &mut Vec<(Vec<String>, f64)>) {
        if p.is_empty() {
            out.push(acc);
            return;
        }
        for (w, pr, c) in entries {
            if p.starts_with(pr) {
                let mut ws = acc.0.clone();
                ws.push(w.clone());
                covers(&p[pr.len()..], entries, (ws, acc.1 + c), out);
            }
        }
    }
    let mut best: Option<(Vec<String>, f64)> = None;
    for path in textfst_core::wfst::paths(lattice).unwrap() {
        let phones = path.input_symbols(lattice);
        let mut out = Vec::new();
        covers(&phones, entries, (Vec::new(), path.weight), &mut out);
        for (ws, c) in out {
            let total = c + lm.score(&ws);
            if best.as_ref().is_none_or(|b| total < b.1) {
                best = Some((ws, total));
            }
        }
    }
    best
}
