mod common;

use std::collections::BTreeMap;

use common::rng;
use common::tagging::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;
use textfst_core::ngram::*;
use textfst_core::wfst::{compose, shortest_path};
use textfst_core::{Semiring, Wfst};

fn random_corpus(r: &mut StdRng, vocab: usize, sentences: usize) -> Vec<Vec<String>> {
    (0..sentences)
        .map(|_| {
            let len = r.gen_range(1..=6);
            (0..len).map(|_| format!("w{}", r.gen_range(0..vocab))).collect()
        })
        .collect()
}

fn all_histories(m: &NGramModel) -> Vec<Gram> {
    let mut hs: Vec<Gram> = m.histories().cloned().collect();
    hs.push(Vec::new());
    hs
}

#[test]
fn katz_normalizes_on_random_corpora() {
    let mut r = rng(2024);
    for case in 0..50 {
        let vocab = r.gen_range(2..=12);
        let order = r.gen_range(1..=3);
        let corpus = random_corpus(&mut r, vocab, 20);
        let m = NGramModel::train(&corpus, order, 5, case % 2 == 0).unwrap();
        for h in all_histories(&m) {
            let s: f64 = m.vocabulary().iter().map(|w| m.katz_prob(w, &h).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-6, "case {case} history {h:?}: {s}");
            for w in m.vocabulary() {
                let p = m.katz_prob(w, &h).unwrap();
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }
}

#[test]
fn mle_joint_sums_to_one() {
    let mut r = rng(5);
    for order in 1..=3 {
        let t = count_ngrams(&random_corpus(&mut r, 5, 10), order).unwrap();
        let s: f64 = t.grams(order).map(|(g, _)| mle_prob(&t, g, false).prob).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn count_table_invariants() {
    let mut r = rng(6);
    let t = count_ngrams(&random_corpus(&mut r, 4, 15), 3).unwrap();
    assert_eq!(t.total(), t.grams(3).map(|(_, c)| c).sum::<u64>());
    for (g, c) in t.iter() {
        assert!(t.history_count(&g[..g.len() - 1]) >= c);
        if g.len() > 1 {
            assert!(t.count(&g[1..]) >= c);
        }
    }
}

#[test]
fn good_turing_releases_mass() {
    let mut r = rng(8);
    for _ in 0..20 {
        let t = count_ngrams(&random_corpus(&mut r, 6, 12), 2).unwrap();
        let gt = good_turing_adjust(&t, 5);
        for len in 1..=2 {
            if t.count_of_counts(len).get(&1).is_none() {
                continue;
            }
            let raw: f64 = t.grams(len).map(|(_, c)| c as f64).sum();
            let adj: f64 = t.grams(len).map(|(_, c)| gt.adjust(len, c).count).sum();
            assert!(adj <= raw + 1e-12);
        }
    }
}

#[test]
fn good_turing_hand_value() {
    let grams = [("a", 1), ("b", 1), ("c", 1), ("d", 2), ("e", 3)];
    let t = CountTable::from_counts(1, grams.iter().map(|(g, c)| (vec![g.to_string()], *c))).unwrap();
    let gt = good_turing_adjust(&t, 5);
    assert_eq!(gt.adjust(1, 1).count, 2.0 / 3.0);
    assert_eq!(gt.adjust(1, 6).count, 6.0);
}

fn lm_cost(fsa: &Wfst, words: &[&str]) -> f64 {
    let s = Wfst::from_string(Semiring::Tropical, fsa.isyms(), words).unwrap();
    shortest_path(&compose(&s, fsa).unwrap(), 1).unwrap()[0].weight
}

#[test]
fn lm_acceptor_matches_exact_score_on_seen_grams() {
    let corpus: Vec<Vec<&str>> = ["the cat sat", "the dog sat", "a cat ran", "the cat ran"]
        .iter()
        .map(|s| s.split_whitespace().collect())
        .collect();
    let m = NGramModel::train(&corpus, 2, 0, false).unwrap();
    let fsa = compile_lm_fsa(&m);
    for s in [["the", "cat", "sat"], ["a", "cat", "ran"], ["the", "dog", "sat"]] {
        let exact = -m.score_sequence(&s).unwrap();
        assert!((lm_cost(&fsa, &s) - exact).abs() < 1e-9, "{s:?}");
    }
}

#[test]
fn lm_acceptor_never_worse_than_exact() {
    let mut r = rng(13);
    for _ in 0..10 {
        let corpus = random_corpus(&mut r, 5, 25);
        let m = NGramModel::train(&corpus, 3, 5, false).unwrap();
        let fsa = compile_lm_fsa(&m);
        for s in random_corpus(&mut r, 5, 5) {
            let words: Vec<&str> = s.iter().map(String::as_str).collect();
            let Ok(score) = m.score_sequence(&words) else { continue };
            if score == f64::NEG_INFINITY || words.iter().any(|w| fsa.isyms().find(w).is_none()) {
                continue;
            }
            assert!(lm_cost(&fsa, &words) <= -score + 1e-9);
        }
    }
}

fn vitale_tables() -> Vec<(String, BTreeMap<String, f64>)> {
    let grams = ["#vi", "vit", "ita", "tal", "ale", "le#"];
    let italian = [0.4659, 0.4145, 0.7851, 0.4422, 0.2602, 0.3181];
    let other = [0.06792093, 0.02630000, 0.04900564, 0.10132384, 0.08672892, 0.18840688];
    let table = |ps: &[f64]| grams.iter().map(|g| g.to_string()).zip(ps.iter().copied()).collect();
    vec![("Italian".into(), table(&italian)), ("Other".into(), table(&other))]
}

#[test]
fn vitale_means() {
    let r = mean_table_score(&vitale_tables(), "vitale", Averaging::Arithmetic).unwrap();
    assert_eq!(r[0].0, "Italian");
    assert!((r[0].1 - 0.4477).abs() < 1e-4);
    assert!((r[1].1 - 0.08661437).abs() < 1e-8);
    let logs = mean_table_score(&vitale_tables(), "vitale", Averaging::Log).unwrap();
    assert_eq!(logs[0].0, "Italian");
}

#[test]
fn disjoint_alphabets_rank_own_language_first() {
    let a = NGramModel::train(&letter_corpus(&["abab", "baba", "aabb"]), 3, 0, true).unwrap();
    let x = NGramModel::train(&letter_corpus(&["xyxy", "yxyx", "xxyy"]), 3, 0, true).unwrap();
    let models = vec![("A".to_string(), a), ("X".to_string(), x)];
    assert_eq!(langid_score(&models, "abba", Averaging::Arithmetic).unwrap()[0].0, "A");
    assert_eq!(langid_score(&models, "yxxy", Averaging::Arithmetic).unwrap()[0].0, "X");
    assert!(langid_score(&models, "", Averaging::Arithmetic).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// With maximum-likelihood estimates, duplicating a training corpus leaves
    /// every probability, and therefore the ranking, unchanged.
    #[test]
    fn langid_invariant_under_duplication(seed in any::<u64>()) {
        let mut r = rng(seed);
        let word = |r: &mut StdRng| -> String {
            (0..r.gen_range(2..6)).map(|_| ['a', 'b', 'c', 'd'][r.gen_range(0..4)]).collect()
        };
        let l1: Vec<String> = (0..6).map(|_| word(&mut r)).collect();
        let l2: Vec<String> = (0..6).map(|_| word(&mut r)).collect();
        let text = word(&mut r);
        let build = |ws: &[String]| NGramModel::train(&letter_corpus(ws), 3, 0, true).unwrap();
        let doubled: Vec<String> = l1.iter().chain(l1.iter()).cloned().collect();
        let base = langid_score(&[("1".into(), build(&l1)), ("2".into(), build(&l2))], &text, Averaging::Arithmetic).unwrap();
        let dup = langid_score(&[("1".into(), build(&doubled)), ("2".into(), build(&l2))], &text, Averaging::Arithmetic).unwrap();
        prop_assert_eq!(base.iter().map(|x| &x.0).collect::<Vec<_>>(), dup.iter().map(|x| &x.0).collect::<Vec<_>>());
        for (a, b) in base.iter().zip(&dup) {
            prop_assert!((a.1 - b.1).abs() < 1e-12);
        }
    }
}


#[test]
fn viterbi_equals_brute_force() {
    let mut r = rng(99);
    for _ in 0..100 {
        let k = r.gen_range(1..=4);
        let m = random_tagger(&mut r, k, 5);
        let len = r.gen_range(1..=6);
        let words: Vec<String> = (0..len).map(|_| format!("w{}", r.gen_range(0..5))).collect();
        let got = match m.viterbi_tag(&words) {
            Ok(g) => g,
            Err(textfst_core::Error::OutOfVocabulary(_)) => None,
            Err(e) => panic!("{e}"),
        };
        let want = brute_force_tag(&m, &words, &|_| 1.0);
        match (got, want) {
            (None, None) => {}
            (Some((tags, score)), Some(p)) => {
                assert!((score - p.ln()).abs() < 1e-9);
                // The returned sequence really has the optimal probability.
                let mut q = 1.0;
                let (mut a, mut b) = (BOS.to_string(), BOS.to_string());
                for (w, t) in words.iter().zip(&tags) {
                    q *= m.lexical_prob(w, t) * m.transition_prob(&a, &b, t);
                    (a, b) = (b, t.clone());
                }
                assert!((q.ln() - p.ln()).abs() < 1e-9);
            }
            (g, w) => panic!("viterbi {g:?} vs brute force {w:?}"),
        }
    }
}

#[test]
fn word_probability_divisor_does_not_change_argmax() {
    let mut r = rng(17);
    for _ in 0..50 {
        let m = random_tagger(&mut r, 3, 4);
        let words: Vec<String> = (0..r.gen_range(1..=5)).map(|_| format!("w{}", r.gen_range(0..4))).collect();
        let divisor = |w: &str| 0.1 + w.len() as f64 * 0.07 + (w.as_bytes()[1] - b'0') as f64 * 0.13;
        let plain = brute_force_tag(&m, &words, &|_| 1.0);
        let divided = brute_force_tag(&m, &words, &divisor);
        let scale: f64 = words.iter().map(|w| divisor(w)).product();
        match (plain, divided) {
            (Some(a), Some(b)) => assert!((a / scale - b).abs() <= 1e-12 * a / scale),
            (a, b) => assert_eq!(a.is_none(), b.is_none()),
        }
        if let Ok(Some((tags, _))) = m.viterbi_tag(&words) {
            let mut q = 1.0;
            let (mut a, mut b) = (BOS.to_string(), BOS.to_string());
            for (w, t) in words.iter().zip(&tags) {
                q *= m.lexical_prob(w, t) * m.transition_prob(&a, &b, t) / divisor(w);
                (a, b) = (b, t.clone());
            }
            assert!((q - divided.unwrap()).abs() <= 1e-12 * q);
        }
    }
}

#[test]
fn listed_tables_score_like_the_model() {
    let mut r = rng(77);
    for case in 0..30 {
        let order = r.gen_range(1..=3);
        let vocab = r.gen_range(2..=8);
        let corpus = random_corpus(&mut r, vocab, 15);
        let m = NGramModel::train(&corpus, order, 5, case % 2 == 0).unwrap();
        let lm = BackoffLm::from_model(&m);
        for s in random_corpus(&mut r, 8, 10) {
            match (m.score_sequence(&s), lm.score_sequence(&s)) {
                (Ok(a), Ok(b)) if a.is_finite() => assert!((a - b).abs() < 1e-9, "case {case}: {a} vs {b}"),
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(a), Err(b)) => assert_eq!(a, b),
                other => panic!("case {case}: {other:?}"),
            }
        }
        let (f, g) = (compile_lm_fsa(&m), compile_lm_fsa(&lm));
        assert_eq!((f.num_states(), f.num_arcs()), (g.num_states(), g.num_arcs()));
        for q in f.states() {
            assert!((f.final_weight(q) - g.final_weight(q)).abs() < 1e-9 || f.final_weight(q) == g.final_weight(q));
            for (a, b) in f.arcs(q).iter().zip(g.arcs(q)) {
                assert_eq!((a.ilabel, a.nextstate), (b.ilabel, b.nextstate));
                assert!((a.weight - b.weight).abs() < 1e-9);
            }
        }
    }
}
