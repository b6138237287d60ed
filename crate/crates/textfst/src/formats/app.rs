//! Inputs of the `app` pipelines.
//!
//! All are line oriented, tab separated and allow `#` comments:
//!
//! * lexicon: `surface<TAB>prob` (the word is its own output) or
//!   `surface<TAB>output<TAB>prob`; with costs the last field is a cost.
//!   Surfaces split into characters, `{Name}` being one symbol; outputs are
//!   space separated.
//! * forms: one underlying form per line in the same character notation,
//!   optionally followed by `<TAB>cost`.
//! * words: `token<TAB>pos<TAB>class<TAB>flags`, flags comma separated or `-`.
//! * morph grammar: `[lexicon]` rows `surface morph category prob`,
//!   `[productions]` rows `result left right prob`, `[schemas]` rows
//!   `schema prob`, `[start]` rows `category prob`.
//! * edit costs: `sub a b c`, `ins b c`, `del a c`, `default sub|ins|del c`.
//! * abbreviations: `word<TAB>class`.
//! * alignment pairs: `phonemes<TAB>phones`, both space separated.

use textfst_core::pipelines::{split_symbols, AbbrevLexicon, Category, EditCosts, Lexicon, MorphGrammar, Schema, WordRecord};
use textfst_core::Weight;

use super::{content_lines, err, num, Parsed};

fn core<T>(line: usize, r: textfst_core::Result<T>) -> Parsed<T> {
    r.or_else(|e| err(line, e.to_string()))
}

pub fn read_lexicon(text: &str, costs: bool) -> Parsed<Lexicon> {
    let mut lex = Lexicon::new();
    for (n, l) in content_lines(text) {
        let f: Vec<&str> = l.split('\t').collect();
        let (surface, output, value) = match f[..] {
            [s, v] => (s, None, v),
            [s, o, v] => (s, Some(o), v),
            _ => return err(n, "expected `surface<TAB>[output<TAB>]value`"),
        };
        let surface = core(n, split_symbols(surface))?;
        let output: Vec<String> = match output {
            Some(o) => o.split_whitespace().map(str::to_string).collect(),
            None => vec![surface.concat()],
        };
        let v = num(n, value)?;
        core(n, if costs { lex.add_cost(&surface, &output, v) } else { lex.add_prob(&surface, &output, v) })?;
    }
    Ok(lex)
}

pub fn read_forms(text: &str) -> Parsed<Vec<(Vec<String>, Weight)>> {
    content_lines(text)
        .map(|(n, l)| {
            let (form, cost) = match l.split_once('\t') {
                Some((f, c)) => (f, num(n, c)?),
                None => (l, 0.0),
            };
            Ok((core(n, split_symbols(form))?, cost))
        })
        .collect()
}

pub const FLAGS: [&str; 9] = [
    "phrasal-verb",
    "contrastive",
    "prefixed",
    "preposed",
    "given-local",
    "given-global",
    "proper-nominal",
    "complex-nominal",
    "citation-accent",
];

pub fn read_words(text: &str) -> Parsed<Vec<WordRecord>> {
    content_lines(text)
        .map(|(n, l)| {
            let f: Vec<&str> = l.split('\t').collect();
            let [token, pos, class, flags] = f[..] else { return err(n, "expected `token<TAB>pos<TAB>class<TAB>flags`") };
            let mut w = WordRecord::new(token, pos, core(n, class.parse())?);
            for flag in flags.split(',').map(str::trim).filter(|f| !f.is_empty() && *f != "-") {
                let slot = match flag {
                    "phrasal-verb" => &mut w.phrasal_verb,
                    "contrastive" => &mut w.contrastive,
                    "prefixed" => &mut w.prefixed,
                    "preposed" => &mut w.preposed,
                    "given-local" => &mut w.given_local,
                    "given-global" => &mut w.given_global,
                    "proper-nominal" => &mut w.proper_nominal,
                    "complex-nominal" => &mut w.complex_nominal,
                    "citation-accent" => &mut w.citation_accent,
                    _ => return err(n, format!("unknown flag `{flag}`; known: {}", FLAGS.join(", "))),
                };
                *slot = true;
            }
            Ok(w)
        })
        .collect()
}

pub fn read_morph_grammar(text: &str) -> Parsed<MorphGrammar> {
    let mut g = MorphGrammar::default();
    let mut section = "";
    let cat = |n: usize, s: &str| -> Parsed<Category> { core(n, s.parse()) };
    for (n, l) in content_lines(text) {
        let l = l.trim();
        if let Some(s) = l.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match s {
                "lexicon" | "productions" | "schemas" | "start" => s,
                _ => return err(n, format!("unknown section `{s}`")),
            };
            continue;
        }
        let f: Vec<&str> = l.split_whitespace().collect();
        match (section, &f[..]) {
            ("lexicon", [surface, morph, c, p]) => g.add_morph(surface, morph, cat(n, c)?, num(n, p)?),
            ("productions", [result, left, right, p]) => g.add_production(result, cat(n, left)?, cat(n, right)?, num(n, p)?),
            ("schemas", [s, p]) => {
                let schema = match *s {
                    "prefixation" => Schema::Prefixation,
                    "suffixation" => Schema::Suffixation,
                    "compounding" => Schema::Compounding,
                    _ => return err(n, format!("unknown schema `{s}`")),
                };
                g.schema_probs.insert(schema, num(n, p)?);
            }
            ("start", [c, p]) => {
                g.start.insert(c.to_string(), num(n, p)?);
            }
            ("", _) => return err(n, "row before any section"),
            (s, _) => return err(n, format!("malformed row in [{s}]")),
        }
    }
    core(0, g.validate())?;
    Ok(g)
}

pub fn read_edit_costs(text: &str) -> Parsed<EditCosts> {
    let mut c = EditCosts::default();
    for (n, l) in content_lines(text) {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f[..] {
            ["sub", a, b, w] => {
                c.sub.insert((a.into(), b.into()), num(n, w)?);
            }
            ["ins", b, w] => {
                c.ins.insert(b.into(), num(n, w)?);
            }
            ["del", a, w] => {
                c.del.insert(a.into(), num(n, w)?);
            }
            ["default", "sub", w] => c.default_sub = num(n, w)?,
            ["default", "ins", w] => c.default_ins = num(n, w)?,
            ["default", "del", w] => c.default_del = num(n, w)?,
            _ => return err(n, "expected `sub a b c`, `ins b c`, `del a c` or `default kind c`"),
        }
    }
    Ok(c)
}

pub fn read_abbrevs(text: &str) -> Parsed<AbbrevLexicon> {
    let mut a = AbbrevLexicon::default();
    for (n, l) in content_lines(text) {
        let Some((w, class)) = l.split_once('\t') else { return err(n, "expected `word<TAB>class`") };
        a.insert(w.trim(), class.trim());
    }
    Ok(a)
}

pub fn read_pairs(text: &str) -> Parsed<Vec<(Vec<String>, Vec<String>)>> {
    let words = |s: &str| s.split_whitespace().map(str::to_string).collect();
    content_lines(text)
        .map(|(n, l)| match l.split_once('\t') {
            Some((a, b)) => Ok((words(a), words(b))),
            None => err(n, "expected `phonemes<TAB>phones`"),
        })
        .collect()
}
