//! The language of trees: a finite ordered set of constructors and the
//! closed terms they generate.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sexpr::{self, SExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of constructors containing `0` (arity 0) and `s`
/// (arity 1).
#[derive(Clone, Debug)]
pub struct TreeLang {
    ctors: Vec<Constructor>,
    index: HashMap<String, usize>,
    zero: usize,
    succ: usize,
}

impl PartialEq for TreeLang {
    fn eq(&self, other: &Self) -> bool {
        self.ctors == other.ctors
    }
}

/// Constructor names of the standard language, in order.
pub const STANDARD: [(&str, usize); 24] = [
    ("0", 0),
    ("s", 1),
    ("Axiom", 1),
    ("ImpI", 2),
    ("ImpE", 2),
    ("AndI", 2),
    ("AndE1", 1),
    ("AndE2", 1),
    ("OrI1", 1),
    ("OrI2", 1),
    ("OrE", 5),
    ("TopI", 0),
    ("BotE", 1),
    ("ForallI", 2),
    ("ForallE", 2),
    ("ExistsI", 2),
    ("ExistsE", 2),
    ("ExBind", 3),
    ("Sortc", 1),
    ("TVar", 2),
    ("Fun", 2),
    ("Nil", 0),
    ("Cons", 2),
    ("Pair", 2),
];

impl TreeLang {
    pub fn new(ctors: &[(&str, usize)]) -> Result<Self> {
        let mut index = HashMap::new();
        let mut list = Vec::new();
        for (i, (name, arity)) in ctors.iter().enumerate() {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || "();".contains(c)) {
                return Err(Error::ill_formed(*name, "not a valid constructor name"));
            }
            if index.insert(name.to_string(), i).is_some() {
                return Err(Error::ill_formed(*name, "constructor declared twice"));
            }
            list.push(Constructor { name: name.to_string(), arity: *arity });
        }
        let zero = match index.get("0") {
            Some(&i) if list[i].arity == 0 => i,
            _ => return Err(Error::ill_formed("0", "the language needs a constructor 0 of arity 0")),
        };
        let succ = match index.get("s") {
            Some(&i) if list[i].arity == 1 => i,
            _ => return Err(Error::ill_formed("s", "the language needs a constructor s of arity 1")),
        };
        Ok(TreeLang { ctors: list, index, zero, succ })
    }

    /// The language used for encoding proof-terms.
    pub fn standard() -> Self {
        TreeLang::new(&STANDARD).unwrap()
    }

    pub fn ctors(&self) -> &[Constructor] {
        &self.ctors
    }

    pub fn len(&self) -> usize {
        self.ctors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ctors.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Index of a constructor that must exist.
    pub fn id(&self, name: &str) -> usize {
        self.find(name).unwrap_or_else(|| panic!("no constructor `{name}`"))
    }

    pub fn name(&self, c: usize) -> &str {
        &self.ctors[c].name
    }

    pub fn arity(&self, c: usize) -> usize {
        self.ctors[c].arity
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn succ(&self) -> usize {
        self.succ
    }

    pub fn make(&self, name: &str, kids: Vec<Tree>) -> Tree {
        let c = self.id(name);
        assert_eq!(kids.len(), self.arity(c), "arity of `{name}`");
        Tree::new(c as u16, kids)
    }

    pub fn num(&self, n: u32) -> Tree {
        let mut t = Tree::leaf(self.zero as u16);
        for _ in 0..n {
            t = Tree::new(self.succ as u16, vec![t]);
        }
        t
    }

    pub fn as_num(&self, t: &Tree) -> Option<u32> {
        let mut n = 0;
        let mut cur = t;
        loop {
            if cur.ctor() == self.zero {
                return Some(n);
            }
            if cur.ctor() != self.succ {
                return None;
            }
            n += 1;
            cur = &cur.kids()[0];
        }
    }

    pub fn bool(&self, b: bool) -> Tree {
        self.num(b as u32)
    }

    pub fn print(&self, t: &Tree) -> String {
        let mut out = String::new();
        self.write(t, &mut out);
        out
    }

    fn write(&self, t: &Tree, out: &mut String) {
        if let Some(n) = self.as_num(t) {
            out.push_str(&n.to_string());
            return;
        }
        if t.kids().is_empty() {
            out.push_str(self.name(t.ctor()));
            return;
        }
        out.push('(');
        out.push_str(self.name(t.ctor()));
        for k in t.kids() {
            out.push(' ');
            self.write(k, out);
        }
        out.push(')');
    }

    /// Reads a tree; decimal literals stand for numerals.
    pub fn parse(&self, text: &str) -> Result<Tree> {
        self.parse_sexpr(&sexpr::parse_one(text)?)
    }

    pub fn parse_sexpr(&self, sx: &SExpr) -> Result<Tree> {
        let (name, args) = match sx {
            SExpr::Atom(a, _) => {
                if let Some(n) = decimal(a) {
                    if self.find(a).is_none() {
                        return Ok(self.num(n));
                    }
                }
                (a.as_str(), &[][..])
            }
            SExpr::List(items, pos) => {
                let (h, rest) = items.split_first().ok_or_else(|| Error::syntax(*pos, "empty tree"))?;
                (h.expect_atom("constructor")?, rest)
            }
        };
        let c = self
            .find(name)
            .ok_or_else(|| Error::syntax(sx.pos(), format!("unknown constructor `{name}`")))?;
        if args.len() != self.arity(c) {
            return Err(Error::syntax(
                sx.pos(),
                format!("`{name}` has arity {}, given {} arguments", self.arity(c), args.len()),
            ));
        }
        let kids = args.iter().map(|a| self.parse_sexpr(a)).collect::<Result<Vec<_>>>()?;
        Ok(Tree::new(c as u16, kids))
    }
}

/// A decimal literal without leading zeros.
pub(crate) fn decimal(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

struct Node {
    ctor: u16,
    size: u32,
    hash: u64,
    kids: Box<[Tree]>,
}

/// A closed tree, shared structurally. Constructors are indices into a
/// [`TreeLang`].
#[derive(Clone)]
pub struct Tree(Arc<Node>);

impl Tree {
    pub fn new(ctor: u16, kids: Vec<Tree>) -> Tree {
        let size = 1 + kids.iter().map(|k| k.0.size).sum::<u32>();
        let mut h = (ctor as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        for k in &kids {
            h = (h.rotate_left(7) ^ k.0.hash).wrapping_mul(0x100_0000_01B3);
        }
        Tree(Arc::new(Node { ctor, size, hash: h, kids: kids.into_boxed_slice() }))
    }

    pub fn leaf(ctor: u16) -> Tree {
        Tree::new(ctor, Vec::new())
    }

    pub fn ctor(&self) -> usize {
        self.0.ctor as usize
    }

    pub fn kids(&self) -> &[Tree] {
        &self.0.kids
    }

    /// Number of constructor occurrences.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    pub fn height(&self) -> usize {
        1 + self.kids().iter().map(Tree::height).max().unwrap_or(0)
    }

    pub fn with_kid(&self, i: usize, k: Tree) -> Tree {
        let mut kids = self.kids().to_vec();
        kids[i] = k;
        Tree::new(self.0.ctor, kids)
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.ctor == other.0.ctor
                && self.0.size == other.0.size
                && self.0.kids == other.0.kids)
    }
}

impl Eq for Tree {}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.ctor.cmp(&other.0.ctor).then_with(|| self.kids().cmp(other.kids()))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0.ctor)?;
        if !self.kids().is_empty() {
            f.debug_list().entries(self.kids()).finish()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals_round_trip() {
        let l = TreeLang::standard();
        assert_eq!(l.as_num(&l.num(7)), Some(7));
        assert_eq!(l.print(&l.num(3)), "3");
        assert_eq!(l.parse("(s (s 0))").unwrap(), l.num(2));
    }

    #[test]
    fn arity_is_enforced_when_reading() {
        let l = TreeLang::standard();
        assert!(l.parse("(ImpI 0)").is_err());
        let t = l.parse("(ImpI 0 (Axiom 0))").unwrap();
        assert_eq!(l.print(&t), "(ImpI 0 (Axiom 0))");
        assert_eq!(t.size(), 4);
    }

    #[test]
    fn language_needs_zero_and_successor() {
        assert!(TreeLang::new(&[("0", 0)]).is_err());
        assert!(TreeLang::new(&[("0", 0), ("s", 1), ("s", 2)]).is_err());
        assert_eq!(TreeLang::standard().len(), 24);
    }
}
