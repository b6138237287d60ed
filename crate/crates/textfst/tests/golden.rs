//! Golden-file tests: every subcommand on the fixtures, compared with the
//! saved output in `tests/golden`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_textfst");

fn dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

fn textfst(args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir("fixtures")).output().expect("binary runs")
}

/// Runs each `;`-separated command line (with `$T` naming a scratch
/// directory) and checks the last one's output against `golden/NAME.out`.
fn golden(name: &str, script: &str) {
    let tmp = tempfile::tempdir().unwrap();
    let script = script.replace("$T", tmp.path().to_str().unwrap());
    let mut last = None;
    for cmd in script.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let args: Vec<&str> = cmd.split_whitespace().collect();
        let out = textfst(&args);
        assert!(out.status.success(), "`{cmd}` failed: {}", String::from_utf8_lossy(&out.stderr));
        last = Some(out.stdout);
    }
    let got = String::from_utf8(last.unwrap()).unwrap();
    let path = dir("golden").join(format!("{name}.out"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(got, want, "output of {name} changed");
}

macro_rules! goldens {
    ($($name:ident: $script:expr;)*) => {$(
        #[test]
        fn $name() {
            golden(stringify!($name), $script);
        }
    )*};
}

goldens! {
    fst_compile: "fst compile ab.txt";
    fst_print: "fst compile ab.txt -o $T/ab.fst; fst print $T/ab.fst";
    fst_sum: "fst sum ab.txt cd.txt";
    fst_concat: "fst concat ab.txt cd.txt";
    fst_closure: "fst closure cd.txt";
    fst_compose: "fst compose ab.txt xy.txt";
    fst_invert: "fst invert xy.txt";
    fst_project: "fst project xy.txt --output-side";
    fst_connect: "fst connect xy.txt";
    fst_bestpath: "fst compose ab.txt xy.txt -o $T/abxy.fst; fst sum $T/abxy.fst cd.txt -o $T/u.fst; fst bestpath $T/u.fst -n 3";
    fst_prune: "fst sum ab.txt cd.txt -o $T/u.fst; fst prune $T/u.fst --beam 1";
    fst_total: "fst total cd.txt --semiring prob";

    ngram_count: "ngram count corpus.txt -n 2";
    ngram_train: "ngram train corpus.txt -n 2";
    ngram_score: "ngram train corpus.txt -n 2 -o $T/lm.txt; ngram score $T/lm.txt score.txt";
    ngram_compile_fsa: "ngram train corpus.txt -n 2 -o $T/lm.txt; ngram compile-fsa $T/lm.txt";
    ngram_langid: "ngram langid words.txt --lang it=italian.txt --lang es=spanish.txt -n 2";
    ngram_tag: "ngram tag untagged.txt --train tagged.txt";

    tree_train: "tree train weather.csv";
    tree_cv: "tree cv weather.csv --folds 5";
    tree_cv_shuffled: "tree cv weather.csv --folds 5 --shuffle --seed 7";
    tree_prune_seq: "tree train weather.csv -o $T/t.txt; tree prune-seq $T/t.txt";
    tree_predict: "tree train weather.csv -o $T/t.txt; tree predict $T/t.txt weather_new.csv";
    tree_export_rules: "tree train flap.csv --min-leaf 2 -o $T/t.txt; tree export-rules $T/t.txt --focus t --context prev=-1 --context next=1";

    dlist_learn_sac: "dlist learn-sac dnf.csv";
    dlist_learn_llr: "dlist learn-llr lead_train.tsv --window 3";
    dlist_prune: "dlist learn-llr lead_train.tsv --window 3 -o $T/l.txt; dlist prune $T/l.txt --train lead_train.tsv --heldout lead_train.tsv --window 3";
    dlist_classify: "dlist learn-llr lead_train.tsv --window 3 -o $T/l.txt; dlist classify $T/l.txt lead_test.tsv --window 3";

    rule_parse: "rule parse russian_pronunciation.rules";
    rule_compile: "rule compile toy.rules";
    rule_apply: "rule apply toy.rules toy_input.txt";
    rule_apply_exported: "tree train flap.csv --min-leaf 2 -o $T/t.txt; tree export-rules $T/t.txt --focus t --context prev=-1 --context next=1 -o $T/r.rules; rule apply $T/r.rules flap_input.txt";

    app_dict: "app dict chinese.lex --costs";
    app_segment: "app dict chinese.lex --costs -o $T/dict.fst; app segment $T/dict.fst sentence.txt -n 3";
    app_pronounce: "app pronounce --lexicon russian_lexicon.txt --orthography russian_orthography.rules --pronunciation russian_pronunciation.rules russian_words.txt";
    app_recognize: "app dict phones.lex -o $T/dict.fst; ngram train lm_corpus.txt -n 1 -o $T/lm.txt; ngram compile-fsa $T/lm.txt -o $T/lm.fst; fst compile lattice.txt -o $T/lat.fst; app recognize $T/lat.fst $T/dict.fst $T/lm.fst";
    app_align: "app align pairs.tsv --costs edit.costs";
    app_eos_features: "app eos-features eos.txt --abbrevs abbrev.tsv";
    app_eos_tree: "app eos-features eos.txt --abbrevs abbrev.tsv -o $T/eos.csv; tree train $T/eos.csv";
    app_accent: "app accent words.tsv";
    app_morph: "app morph dutch.morph morph_words.txt";
}

#[test]
fn segment_reproduces_the_worked_costs() {
    let tmp = tempfile::tempdir().unwrap();
    let dict = tmp.path().join("dict.fst");
    assert!(textfst(&["app", "dict", "chinese.lex", "--costs", "-o", dict.to_str().unwrap()]).status.success());
    let out = textfst(&["app", "segment", dict.to_str().unwrap(), "sentence.txt"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "我 忘不了 解放大道 在哪里\t34.60\n");
}

#[test]
fn sac_prints_the_three_line_list() {
    let out = textfst(&["dlist", "learn-sac", "dnf.csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][1..], ["x1=1 & x2=1", "1"]);
    assert_eq!(&rows[1][1..], ["x3=1 & x4=0 & x5=1", "1"]);
    assert_eq!(rows[2], ["default", "0"]);
}

#[test]
fn compile_then_print_is_identity() {
    let tmp = tempfile::tempdir().unwrap();
    for name in ["ab.txt", "cd.txt", "xy.txt", "lattice.txt"] {
        let fst = tmp.path().join("x.fst");
        assert!(textfst(&["fst", "compile", name, "-o", fst.to_str().unwrap()]).status.success());
        let out = textfst(&["fst", "print", fst.to_str().unwrap()]);
        assert_eq!(out.stdout, std::fs::read(dir("fixtures").join(name)).unwrap(), "{name}");
    }
}

#[test]
fn exit_statuses() {
    assert_eq!(textfst(&["fst", "frobnicate"]).status.code(), Some(1));
    assert_eq!(textfst(&[]).status.code(), Some(1));
    assert_eq!(textfst(&["fst", "total", "cd.txt", "--semiring", "real"]).status.code(), Some(1));
    assert_eq!(textfst(&["tree", "export-rules", "weather.csv", "--focus", "t", "--context", "prev"]).status.code(), Some(1));
    assert_eq!(textfst(&["--help"]).status.code(), Some(0));
    assert_eq!(textfst(&["--version"]).status.code(), Some(0));
    // Data errors.
    assert_eq!(textfst(&["fst", "total", "missing.txt"]).status.code(), Some(2));
    assert_eq!(textfst(&["tree", "train", "corpus.txt"]).status.code(), Some(2));
    assert_eq!(textfst(&["fst", "total", "cd.txt", "--semiring", "prob", "--seed", "3"]).status.code(), Some(0));
    let bad = textfst(&["tree", "train", "dnf.csv"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("dnf.csv:1"), "{}", String::from_utf8_lossy(&bad.stderr));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = textfst(&["ngram", "frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage:"));
}
