//! Ruleset text format.
//!
//! ```text
//! {All} := ptkdaeiou\&R012 ;;
//! {Cons} := ptkd ;;
//! End Prolog
//! t -> ({DD}<0.20>, {tt}<4.32>) / {Stress}{Cons}*{Vowel} __ 0{Vowel} ;;
//! ```
//!
//! Statements end with `;;`. A single character is a symbol; `{Name}` is a
//! macro when one is defined under that name and a multi-character symbol
//! otherwise. Inside alternatives `{Name}` is always a symbol and `{DEL}` is
//! the empty output. `\x` escapes a special character, `#` is the word
//! boundary and `<w>` is a base-2 weight.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Item, Ruleset, RewriteRule, BOUNDARY};
use crate::error::{Error, Result};

const SPECIAL: &str = "()<>,/*;#_\\{}-:";

/// How one symbol is written in ruleset text.
pub fn render_symbol(s: &str) -> String {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if SPECIAL.contains(c) || c.is_whitespace() => format!("\\{c}"),
        (Some(_), None) => s.to_string(),
        _ => format!("{{{s}}}"),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Sym(String),
    Brace(String),
    Boundary,
    Open,
    Close,
    Comma,
    Slash,
    Star,
    Slot,
    Arrow,
    Define,
    Weight(f64),
}

#[derive(Clone, Copy)]
struct Pos {
    line: usize,
    col: usize,
}

fn syntax(p: Pos, msg: impl Into<String>) -> Error {
    Error::Syntax { line: p.line, col: p.col, msg: msg.into() }
}

type Statement = (Pos, Pos, Vec<(Pos, Tok)>);

/// Splits the text into `;;`-terminated statements of positioned tokens.
/// `End Prolog` comes back as an empty statement marker (`None`).
fn lex(text: &str) -> Result<Vec<Option<Statement>>> {
    let mut out = Vec::new();
    let mut cur: Vec<(Pos, Tok)> = Vec::new();
    let mut start: Option<Pos> = None;
    for (ln, line) in text.lines().enumerate() {
        if line.trim() == "End Prolog" {
            if !cur.is_empty() {
                return Err(syntax(start.unwrap(), "unterminated statement before End Prolog"));
            }
            out.push(None);
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let p = Pos { line: ln + 1, col: i + 1 };
            let c = chars[i];
            let next = chars.get(i + 1).copied();
            let tok = match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                ';' if next == Some(';') => {
                    i += 2;
                    out.push(Some((start.take().unwrap_or(p), p, core::mem::take(&mut cur))));
                    continue;
                }
                '\\' => {
                    let Some(e) = next else { return Err(syntax(p, "dangling escape")) };
                    i += 2;
                    cur.push((p, Tok::Sym(e.to_string())));
                    start.get_or_insert(p);
                    continue;
                }
                '{' => {
                    let Some(len) = chars[i + 1..].iter().position(|&c| c == '}') else {
                        return Err(syntax(p, "unclosed `{`"));
                    };
                    let name: String = chars[i + 1..i + 1 + len].iter().collect();
                    if name.is_empty() {
                        return Err(syntax(p, "empty `{}`"));
                    }
                    i += len + 2;
                    cur.push((p, Tok::Brace(name)));
                    start.get_or_insert(p);
                    continue;
                }
                '<' => {
                    let Some(len) = chars[i + 1..].iter().position(|&c| c == '>') else {
                        return Err(syntax(p, "unclosed weight"));
                    };
                    let body: String = chars[i + 1..i + 1 + len].iter().collect();
                    let w: f64 = body.trim().parse().map_err(|_| syntax(p, format!("bad weight `{body}`")))?;
                    if !(w >= 0.0) || !w.is_finite() {
                        return Err(syntax(p, format!("weight `{body}` must be finite and non-negative")));
                    }
                    i += len + 2;
                    cur.push((p, Tok::Weight(w)));
                    start.get_or_insert(p);
                    continue;
                }
                '-' if next == Some('>') => {
                    i += 1;
                    Tok::Arrow
                }
                ':' if next == Some('=') => {
                    i += 1;
                    Tok::Define
                }
                '_' if next == Some('_') => {
                    i += 1;
                    Tok::Slot
                }
                '#' => Tok::Boundary,
                '(' => Tok::Open,
                ')' => Tok::Close,
                ',' => Tok::Comma,
                '/' => Tok::Slash,
                '*' => Tok::Star,
                '>' | ';' => return Err(syntax(p, format!("unexpected `{c}`"))),
                c => Tok::Sym(c.to_string()),
            };
            i += 1;
            cur.push((p, tok));
            start.get_or_insert(p);
        }
    }
    if let Some(p) = start {
        return Err(syntax(p, "statement not terminated by `;;`"));
    }
    Ok(out)
}

pub fn parse_ruleset(text: &str) -> Result<Ruleset> {
    let mut macros: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut macro_order = Vec::new();
    let mut raw_rules = Vec::new();
    let mut prolog_end = None;
    for stmt in lex(text)? {
        let Some((p, end, toks)) = stmt else {
            prolog_end.get_or_insert(raw_rules.len());
            continue;
        };
        if let [(_, Tok::Brace(name)), (_, Tok::Define), rest @ ..] = toks.as_slice() {
            let mut members: Vec<String> = Vec::new();
            for (q, t) in rest {
                let add: Vec<String> = match t {
                    Tok::Sym(s) => alloc::vec![s.clone()],
                    Tok::Boundary => alloc::vec![BOUNDARY.to_string()],
                    Tok::Brace(b) => macros.get(b).cloned().unwrap_or_else(|| alloc::vec![b.clone()]),
                    _ => return Err(syntax(*q, "expected symbols in macro definition")),
                };
                for s in add {
                    if !members.contains(&s) {
                        members.push(s);
                    }
                }
            }
            if members.is_empty() {
                return Err(syntax(p, format!("macro `{name}` is empty")));
            }
            if !macros.contains_key(name) {
                macro_order.push(name.clone());
            }
            macros.insert(name.clone(), members);
        } else {
            raw_rules.push((end, toks));
        }
    }
    let all: BTreeSet<String> = macros.get("All").ok_or(Error::MissingAll)?.iter().cloned().collect();
    if all.contains(BOUNDARY) {
        return Err(Error::Invalid("{All} may not contain the boundary `#`".into()));
    }
    for (name, members) in &macros {
        if let Some(s) = members.iter().find(|s| *s != BOUNDARY && !all.contains(*s)) {
            return Err(Error::Invalid(format!("macro `{name}` member `{s}` is not in {{All}}")));
        }
    }
    let rules = raw_rules
        .into_iter()
        .map(|(end, toks)| parse_rule(end, &toks, &macros, &all))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ruleset { macros, macro_order, prolog_end: prolog_end.unwrap_or(0), rules })
}

struct Cursor<'a> {
    toks: &'a [(Pos, Tok)],
    i: usize,
    end: Pos,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }
    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }
}

fn parse_rule(end: Pos, toks: &[(Pos, Tok)], macros: &BTreeMap<String, Vec<String>>, all: &BTreeSet<String>) -> Result<RewriteRule> {
    let mut c = Cursor { toks, i: 0, end };
    let resolve = |p: Pos, t: &Tok, allow_boundary: bool| -> Result<Item> {
        let set: Vec<String> = match t {
            Tok::Sym(s) => alloc::vec![s.clone()],
            Tok::Brace(b) => macros.get(b).cloned().unwrap_or_else(|| alloc::vec![b.clone()]),
            Tok::Boundary if allow_boundary => alloc::vec![BOUNDARY.to_string()],
            _ => return Err(syntax(p, "expected a symbol or macro")),
        };
        if let Some(s) = set.iter().find(|s| !all.contains(*s) && !(allow_boundary && *s == BOUNDARY)) {
            return Err(Error::UndeclaredSymbol(s.clone()));
        }
        Ok(Item { name: render_tok(t), set: set.into_iter().collect(), star: false })
    };

    let mut focus = Vec::new();
    while let Some(t) = c.peek() {
        if *t == Tok::Arrow {
            break;
        }
        focus.push(resolve(c.pos(), t, false)?);
        c.i += 1;
    }
    if focus.is_empty() {
        return Err(syntax(c.pos(), "expected focus"));
    }
    if c.peek() != Some(&Tok::Arrow) {
        return Err(syntax(c.pos(), "expected `->`"));
    }
    c.i += 1;

    let mut alternatives = Vec::new();
    if c.peek() == Some(&Tok::Open) {
        c.i += 1;
        loop {
            alternatives.push(parse_alt(&mut c)?);
            match c.peek() {
                Some(Tok::Comma) => c.i += 1,
                Some(Tok::Close) => {
                    c.i += 1;
                    break;
                }
                _ => return Err(syntax(c.pos(), "expected `,` or `)`")),
            }
        }
    } else {
        alternatives.push(parse_alt(&mut c)?);
    }

    let (mut left, mut right) = (Vec::new(), Vec::new());
    match c.peek() {
        None => {}
        Some(Tok::Slash) => {
            c.i += 1;
            let mut side = &mut left;
            let mut seen_slot = false;
            while let Some(t) = c.peek() {
                let p = c.pos();
                match t {
                    Tok::Slot if !seen_slot => {
                        seen_slot = true;
                        side = &mut right;
                    }
                    Tok::Star => match side.last_mut() {
                        Some(Item { star: s @ false, .. }) => *s = true,
                        _ => return Err(syntax(p, "`*` must follow a context item")),
                    },
                    t => side.push(resolve(p, t, true)?),
                }
                c.i += 1;
            }
            if !seen_slot {
                return Err(syntax(c.pos(), "expected `__` in context"));
            }
        }
        Some(_) => return Err(syntax(c.pos(), "expected `/` or `;;`")),
    }
    Ok(RewriteRule { focus, alternatives, left, right })
}

fn parse_alt(c: &mut Cursor) -> Result<(Vec<String>, f64)> {
    let p = c.pos();
    let mut out = Vec::new();
    let mut deleted = false;
    while let Some(t) = c.peek() {
        match t {
            Tok::Sym(s) => out.push(s.clone()),
            Tok::Brace(b) if b == "DEL" => deleted = true,
            Tok::Brace(b) => out.push(b.clone()),
            _ => break,
        }
        c.i += 1;
    }
    if out.is_empty() && !deleted {
        return Err(syntax(p, "expected an alternative"));
    }
    let w = match c.peek() {
        Some(Tok::Weight(w)) => {
            let w = *w;
            c.i += 1;
            w
        }
        _ => 0.0,
    };
    Ok((out, w))
}

fn render_tok(t: &Tok) -> String {
    match t {
        Tok::Sym(s) => render_symbol(s),
        Tok::Brace(b) => format!("{{{b}}}"),
        _ => BOUNDARY.to_string(),
    }
}
