use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Symbol = String;
pub type Word = Vec<Symbol>;

/// Ordered list of distinct symbols. The order drives every canonical construction.
#[derive(Clone)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, u32>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("empty".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// Distinct labels in lexicographic order.
    pub fn sorted<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        let mut v: Vec<Symbol> = labels.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        Alphabet::new(v)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, i: u32) -> &str {
        &self.symbols[i as usize]
    }

    pub fn index_of(&self, s: &str) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &str) -> bool {
        self.index.contains_key(s)
    }

    pub fn encode(&self, w: &[Symbol]) -> Option<Vec<u32>> {
        w.iter().map(|s| self.index_of(s)).collect()
    }

    pub fn decode(&self, w: &[u32]) -> Word {
        w.iter().map(|&i| self.symbols[i as usize].clone()).collect()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}

/// Name of a block of symbols when it is used as a single symbol.
///
/// Single-character symbols are concatenated (`["0","1"]` becomes `"01"`),
/// anything else is bracketed so distinct blocks get distinct names.
pub fn block_name<S: AsRef<str>>(parts: &[S]) -> Symbol {
    let simple = parts.iter().all(|p| {
        let p = p.as_ref();
        p.chars().count() == 1 && !p.contains(['[', ']', ','])
    });
    if simple {
        parts.iter().map(|p| p.as_ref()).collect()
    } else {
        let inner: Vec<&str> = parts.iter().map(|p| p.as_ref()).collect();
        format!("[{}]", inner.join(","))
    }
}

/// One symbol per character: `word("0110")`.
pub fn word(s: &str) -> Word {
    s.chars().map(|c| c.to_string()).collect()
}

/// Checks whether `needle` occurs in `hay` as a contiguous subword.
pub fn contains_subword<T: PartialEq>(hay: &[T], needle: &[T]) -> bool {
    if needle.is_empty() {
        return true;
    }
    hay.windows(needle.len()).any(|w| w == needle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_names() {
        assert_eq!(block_name(&["0", "1"]), "01");
        assert_eq!(block_name(&["ab", "c"]), "[ab,c]");
        assert_eq!(block_name::<&str>(&[]), "");
    }

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(Alphabet::new(vec!["a".into(), "a".into()]).is_err());
        assert!(Alphabet::new(vec![]).is_err());
    }
}
