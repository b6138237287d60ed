use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Label = u32;

/// Label id reserved for the empty string on either tape.
pub const EPSILON: Label = 0;
pub const EPSILON_SYMBOL: &str = "<eps>";

/// Bidirectional symbol ↔ id mapping. Id 0 is always epsilon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    by_id: BTreeMap<Label, String>,
    by_symbol: BTreeMap<String, Label>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        let mut t = SymbolTable { by_id: BTreeMap::new(), by_symbol: BTreeMap::new() };
        t.by_id.insert(EPSILON, EPSILON_SYMBOL.to_string());
        t.by_symbol.insert(EPSILON_SYMBOL.to_string(), EPSILON);
        t
    }

    /// Builds a table assigning consecutive ids (from 1) to the given symbols,
    /// skipping duplicates.
    pub fn from_symbols<I, S>(symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut t = Self::new();
        for s in symbols {
            t.add(s.as_ref());
        }
        t
    }

    /// Adds `symbol` with the next free id, or returns its existing id.
    pub fn add(&mut self, symbol: &str) -> Label {
        if let Some(&id) = self.by_symbol.get(symbol) {
            return id;
        }
        let id = self.by_id.keys().next_back().map_or(1, |&k| k + 1);
        self.by_id.insert(id, symbol.to_string());
        self.by_symbol.insert(symbol.to_string(), id);
        id
    }

    /// Inserts an explicit pair, as read from a symbol file.
    pub fn insert(&mut self, symbol: &str, id: Label) -> Result<()> {
        if (id == EPSILON) != (symbol == EPSILON_SYMBOL) {
            return Err(Error::Invalid(alloc::format!(
                "id 0 is reserved for {EPSILON_SYMBOL}, got `{symbol}` {id}"
            )));
        }
        match (self.by_id.get(&id), self.by_symbol.get(symbol)) {
            (None, None) => {
                self.by_id.insert(id, symbol.to_string());
                self.by_symbol.insert(symbol.to_string(), id);
                Ok(())
            }
            (Some(s), Some(&i)) if s == symbol && i == id => Ok(()),
            _ => Err(Error::Invalid(alloc::format!(
                "symbol table entry `{symbol}` {id} conflicts with an existing entry"
            ))),
        }
    }

    pub fn find(&self, symbol: &str) -> Option<Label> {
        self.by_symbol.get(symbol).copied()
    }

    pub fn symbol(&self, id: Label) -> Option<&str> {
        self.by_id.get(&id).map(String::as_str)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.by_symbol.contains_key(symbol)
    }

    /// Number of entries including epsilon.
    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.len() <= 1
    }

    /// `(id, symbol)` pairs in id order, epsilon first.
    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> + '_ {
        self.by_id.iter().map(|(&id, s)| (id, s.as_str()))
    }

    /// Non-epsilon labels in id order.
    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.by_id.keys().copied().filter(|&l| l != EPSILON)
    }

    pub fn encode<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Vec<Label>> {
        symbols
            .iter()
            .map(|s| self.find(s.as_ref()).ok_or_else(|| Error::UnknownSymbol(s.as_ref().to_string())))
            .collect()
    }

    /// Decodes labels, dropping epsilons.
    pub fn decode(&self, labels: &[Label]) -> Vec<String> {
        labels
            .iter()
            .filter(|&&l| l != EPSILON)
            .map(|&l| self.symbol(l).map_or_else(|| alloc::format!("#{l}"), ToString::to_string))
            .collect()
    }

    /// A table holding every symbol of `self` (same ids) followed by the
    /// symbols of `other` that `self` lacks.
    pub fn union(&self, other: &SymbolTable) -> SymbolTable {
        let mut t = self.clone();
        for (_, s) in other.iter() {
            t.add(s);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_zero() {
        let t = SymbolTable::from_symbols(["a", "b"]);
        assert_eq!(t.find(EPSILON_SYMBOL), Some(0));
        assert_eq!(t.find("a"), Some(1));
        assert_eq!(t.symbol(2), Some("b"));
    }

    #[test]
    fn encode_reports_unknown_symbol() {
        let t = SymbolTable::from_symbols(["a"]);
        assert_eq!(t.encode(&["a", "z"]), Err(Error::UnknownSymbol("z".into())));
    }

    #[test]
    fn explicit_ids_must_be_consistent() {
        let mut t = SymbolTable::new();
        t.insert("x", 7).unwrap();
        assert_eq!(t.add("y"), 8);
        assert!(t.insert("x", 9).is_err());
        assert!(t.insert("<eps>", 3).is_err());
    }
}
