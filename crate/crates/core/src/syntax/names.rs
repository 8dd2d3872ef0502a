//! Variable names.
//!
//! Variables are identified by a natural-number index; the surface name is a
//! bijective rendering of that index: `a`..`z` for 0..25, then `a1`..`z1`
//! for 26..51, and so on. Fresh variables are always `1 + max index`, which
//! is also the discipline used by the tree encodings.

use std::fmt;
use std::sync::Arc;

pub fn name_of(index: u32) -> String {
    let letter = (b'a' + (index % 26) as u8) as char;
    match index / 26 {
        0 => letter.to_string(),
        n => format!("{letter}{n}"),
    }
}

/// Inverse of [`name_of`]; `None` when `name` is not a variable name.
pub fn index_of(name: &str) -> Option<u32> {
    let mut chars = name.chars();
    let first = chars.next()?;
    if !first.is_ascii_lowercase() {
        return None;
    }
    let rest = chars.as_str();
    let base = (first as u8 - b'a') as u32;
    if rest.is_empty() {
        return Some(base);
    }
    if rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: u32 = rest.parse().ok()?;
    n.checked_mul(26)?.checked_add(base)
}

/// A symbol of a signature (sort, function or predicate name).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Sort = Symbol;

/// A term variable: an index together with its sort.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermVar {
    pub id: u32,
    pub sort: Sort,
}

impl TermVar {
    pub fn new(id: u32, sort: Sort) -> Self {
        TermVar { id, sort }
    }

    pub fn named(name: &str, sort: &str) -> Self {
        let id = index_of(name).unwrap_or_else(|| panic!("`{name}` is not a variable name"));
        TermVar { id, sort: Sort::new(sort) }
    }

    pub fn name(&self) -> String {
        name_of(self.id)
    }
}

impl fmt::Debug for TermVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", name_of(self.id), self.sort)
    }
}

impl fmt::Display for TermVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&name_of(self.id))
    }
}

/// A proof variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PVar(pub u32);

impl PVar {
    pub fn named(name: &str) -> Self {
        PVar(index_of(name).unwrap_or_else(|| panic!("`{name}` is not a variable name")))
    }
}

impl fmt::Debug for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&name_of(self.0))
    }
}

impl fmt::Display for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&name_of(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_indices_are_single_letters() {
        assert_eq!(name_of(0), "a");
        assert_eq!(name_of(23), "x");
        assert_eq!(name_of(26), "a1");
        assert_eq!(index_of("z2"), Some(77));
        assert_eq!(index_of("x01"), None);
        assert_eq!(index_of("nat"), None);
        assert_eq!(index_of("P"), None);
    }

    proptest! {
        #[test]
        fn naming_is_a_bijection(i in 0u32..1_000_000) {
            prop_assert_eq!(index_of(&name_of(i)), Some(i));
        }
    }
}
