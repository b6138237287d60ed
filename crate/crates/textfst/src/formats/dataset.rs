//! Comma-separated datasets.
//!
//! The header names every column as `name:kind`, where the kind is `num`,
//! `cat` (inventory taken from the data, sorted) or `cat=a|b|c` (explicit
//! order). The last column is the target: `cat` for classification, `num`
//! for regression. There are no comment lines, since `#` is a common
//! category name.

use textfst_core::cart::{Dataset, FeatureKind, FeatureSpec, Target, Value};

use super::{data_lines, err, num, Parsed};

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Num,
    Cat(Option<Vec<String>>),
}

fn parse_header(line: usize, l: &str) -> Parsed<Vec<(String, Kind)>> {
    l.split(',')
        .map(|col| {
            let col = col.trim();
            let Some((name, kind)) = col.split_once(':') else { return err(line, format!("column `{col}` needs `name:kind`")) };
            if name.is_empty() || name.contains(char::is_whitespace) {
                return err(line, format!("bad column name `{name}`"));
            }
            let kind = match kind {
                "num" => Kind::Num,
                "cat" => Kind::Cat(None),
                k => match k.strip_prefix("cat=") {
                    Some(vs) => Kind::Cat(Some(vs.split('|').map(str::to_string).collect())),
                    None => return err(line, format!("unknown kind `{k}`")),
                },
            };
            Ok((name.to_string(), kind))
        })
        .collect()
}

fn cells(text: &str) -> Parsed<(Vec<(String, Kind)>, Vec<(usize, Vec<&str>)>)> {
    let mut lines = data_lines(text);
    let Some((n, head)) = lines.next() else { return err(1, "empty file") };
    let header = parse_header(n, head)?;
    let mut rows = Vec::new();
    for (n, l) in lines {
        let row: Vec<&str> = l.split(',').map(str::trim).collect();
        if row.len() != header.len() {
            return err(n, format!("{} cells, header has {}", row.len(), header.len()));
        }
        rows.push((n, row));
    }
    Ok((header, rows))
}

fn inventory(kind: &Kind, rows: &[(usize, Vec<&str>)], col: usize) -> Vec<String> {
    match kind {
        Kind::Cat(Some(vs)) => vs.clone(),
        _ => {
            let mut vs: Vec<String> = rows.iter().map(|(_, r)| r[col].to_string()).collect();
            vs.sort();
            vs.dedup();
            vs
        }
    }
}

fn cell(n: usize, spec: &FeatureSpec, s: &str) -> Parsed<Value> {
    match &spec.kind {
        FeatureKind::Continuous => Ok(Value::Num(num(n, s)?)),
        FeatureKind::Categorical(_) => match spec.category(s) {
            Some(c) => Ok(Value::Cat(c)),
            None => err(n, format!("`{s}` is not a category of {}", spec.name)),
        },
    }
}

pub fn read_dataset(text: &str) -> Parsed<Dataset> {
    let (header, rows) = cells(text)?;
    if header.len() < 2 {
        return err(1, "need at least one feature and a target");
    }
    let last = header.len() - 1;
    let features: Vec<FeatureSpec> = header[..last]
        .iter()
        .enumerate()
        .map(|(i, (name, kind))| match kind {
            Kind::Num => FeatureSpec::continuous(name),
            Kind::Cat(_) => FeatureSpec::categorical(name, &inventory(kind, &rows, i)),
        })
        .collect();
    let mut data = Vec::with_capacity(rows.len());
    for (n, r) in &rows {
        data.push(features.iter().zip(r).map(|(f, s)| cell(*n, f, s)).collect::<Parsed<Vec<_>>>()?);
    }
    let target = match &header[last].1 {
        Kind::Num => Target::Values(rows.iter().map(|(n, r)| num(*n, r[last])).collect::<Parsed<_>>()?),
        kind => {
            let names = inventory(kind, &rows, last);
            let labels = rows
                .iter()
                .map(|(n, r)| names.iter().position(|c| c == r[last]).ok_or(super::ParseError { line: *n, msg: format!("unknown class `{}`", r[last]) }))
                .collect::<Parsed<_>>()?;
            Target::Classes { names, labels }
        }
    };
    Dataset::new(features, data, target).or_else(|e| err(1, e.to_string()))
}

/// Rows laid out for a trained model's features, matched by column name;
/// other columns (such as the target) are ignored.
pub fn read_rows(text: &str, features: &[FeatureSpec]) -> Parsed<Vec<Vec<Value>>> {
    let (header, rows) = cells(text)?;
    let cols = features
        .iter()
        .map(|f| header.iter().position(|(h, _)| *h == f.name).ok_or(super::ParseError { line: 1, msg: format!("missing column `{}`", f.name) }))
        .collect::<Parsed<Vec<usize>>>()?;
    rows.iter().map(|(n, r)| features.iter().zip(&cols).map(|(f, &c)| cell(*n, f, r[c])).collect()).collect()
}
