//! Encodings `⌜·⌝` of variables, terms and proof-terms as trees.
//!
//! Proof variables are numerals; a term variable is `TVar(n, Sortc(k))`
//! where `k` is the position of its sort in the signature; an application
//! is `Fun(k, [args])` with `k` the position of the function symbol and the
//! arguments in a `Nil`/`Cons` list. `exelim π (x.α.π′)` is
//! `ExistsE(⌜π⌝, ExBind(⌜x⌝, ⌜α⌝, ⌜π′⌝))`.

use super::tree::{Tree, TreeLang};
use crate::error::{Error, Result};
use crate::proof::ProofTerm;
use crate::syntax::{PVar, Signature, Term, TermVar};

#[derive(Clone, Copy, Debug)]
struct Ids {
    axiom: usize,
    impi: usize,
    impe: usize,
    andi: usize,
    ande1: usize,
    ande2: usize,
    ori1: usize,
    ori2: usize,
    ore: usize,
    topi: usize,
    bote: usize,
    foralli: usize,
    foralle: usize,
    existsi: usize,
    existse: usize,
    exbind: usize,
    sortc: usize,
    tvar: usize,
    fun: usize,
    nil: usize,
    cons: usize,
}

/// Encoder/decoder for one signature over the standard tree language.
#[derive(Clone, Debug)]
pub struct Codec {
    lang: TreeLang,
    sig: Signature,
    ids: Ids,
}

impl Codec {
    pub fn new(sig: &Signature) -> Self {
        let lang = TreeLang::standard();
        let ids = Ids {
            axiom: lang.id("Axiom"),
            impi: lang.id("ImpI"),
            impe: lang.id("ImpE"),
            andi: lang.id("AndI"),
            ande1: lang.id("AndE1"),
            ande2: lang.id("AndE2"),
            ori1: lang.id("OrI1"),
            ori2: lang.id("OrI2"),
            ore: lang.id("OrE"),
            topi: lang.id("TopI"),
            bote: lang.id("BotE"),
            foralli: lang.id("ForallI"),
            foralle: lang.id("ForallE"),
            existsi: lang.id("ExistsI"),
            existse: lang.id("ExistsE"),
            exbind: lang.id("ExBind"),
            sortc: lang.id("Sortc"),
            tvar: lang.id("TVar"),
            fun: lang.id("Fun"),
            nil: lang.id("Nil"),
            cons: lang.id("Cons"),
        };
        Codec { lang, sig: sig.clone(), ids }
    }

    pub fn lang(&self) -> &TreeLang {
        &self.lang
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    fn node(&self, c: usize, kids: Vec<Tree>) -> Tree {
        Tree::new(c as u16, kids)
    }

    pub fn list(&self, items: Vec<Tree>) -> Tree {
        items
            .into_iter()
            .rev()
            .fold(Tree::leaf(self.ids.nil as u16), |acc, t| self.node(self.ids.cons, vec![t, acc]))
    }

    pub fn list_items(&self, t: &Tree) -> Option<Vec<Tree>> {
        let mut out = Vec::new();
        let mut cur = t;
        loop {
            match cur.ctor() {
                c if c == self.ids.nil => return Some(out),
                c if c == self.ids.cons => {
                    out.push(cur.kids()[0].clone());
                    cur = &cur.kids()[1];
                }
                _ => return None,
            }
        }
    }

    pub fn encode_pvar(&self, a: PVar) -> Tree {
        self.lang.num(a.0)
    }

    pub fn encode_sort(&self, s: &crate::syntax::Sort) -> Tree {
        let k = self.sig.sort_index(s).unwrap_or_else(|| panic!("sort `{s}` is not in the signature"));
        self.node(self.ids.sortc, vec![self.lang.num(k as u32)])
    }

    pub fn encode_tvar(&self, x: &TermVar) -> Tree {
        self.node(self.ids.tvar, vec![self.lang.num(x.id), self.encode_sort(&x.sort)])
    }

    pub fn encode_term(&self, t: &Term) -> Tree {
        match t {
            Term::Var(x) => self.encode_tvar(x),
            Term::App(f, args) => {
                let k = self.sig.fun_index(f).unwrap_or_else(|| panic!("function `{f}` is not in the signature"));
                let args = args.iter().map(|a| self.encode_term(a)).collect();
                self.node(self.ids.fun, vec![self.lang.num(k as u32), self.list(args)])
            }
        }
    }

    pub fn encode_proof(&self, p: &ProofTerm) -> Tree {
        use ProofTerm::*;
        let i = &self.ids;
        let e = |q: &ProofTerm| self.encode_proof(q);
        match p {
            Axiom(a) => self.node(i.axiom, vec![self.encode_pvar(*a)]),
            Lam(a, q) => self.node(i.impi, vec![self.encode_pvar(*a), e(q)]),
            App(q, r) => self.node(i.impe, vec![e(q), e(r)]),
            Pair(q, r) => self.node(i.andi, vec![e(q), e(r)]),
            Fst(q) => self.node(i.ande1, vec![e(q)]),
            Snd(q) => self.node(i.ande2, vec![e(q)]),
            InjL(q) => self.node(i.ori1, vec![e(q)]),
            InjR(q) => self.node(i.ori2, vec![e(q)]),
            Case(s, a, q, b, r) => {
                self.node(i.ore, vec![e(s), self.encode_pvar(*a), e(q), self.encode_pvar(*b), e(r)])
            }
            TopI => Tree::leaf(i.topi as u16),
            BotE(q) => self.node(i.bote, vec![e(q)]),
            TLam(x, q) => self.node(i.foralli, vec![self.encode_tvar(x), e(q)]),
            TApp(q, t) => self.node(i.foralle, vec![e(q), self.encode_term(t)]),
            Witness(t, q) => self.node(i.existsi, vec![self.encode_term(t), e(q)]),
            ExElim(s, x, a, q) => {
                let bind = self.node(i.exbind, vec![self.encode_tvar(x), self.encode_pvar(*a), e(q)]);
                self.node(i.existse, vec![e(s), bind])
            }
        }
    }

    fn malformed(&self, t: &Tree, msg: impl Into<String>) -> Error {
        Error::MalformedEncoding { subtree: self.lang.print(t), msg: msg.into() }
    }

    pub fn decode_pvar(&self, t: &Tree) -> Result<PVar> {
        self.lang.as_num(t).map(PVar).ok_or_else(|| self.malformed(t, "expected a numeral"))
    }

    pub fn decode_sort(&self, t: &Tree) -> Result<crate::syntax::Sort> {
        if t.ctor() != self.ids.sortc {
            return Err(self.malformed(t, "expected Sortc(n)"));
        }
        let k = self.lang.as_num(&t.kids()[0]).ok_or_else(|| self.malformed(t, "expected a numeral"))?;
        self.sig
            .sorts()
            .get(k as usize)
            .cloned()
            .ok_or_else(|| self.malformed(t, format!("no sort number {k}")))
    }

    pub fn decode_tvar(&self, t: &Tree) -> Result<TermVar> {
        if t.ctor() != self.ids.tvar {
            return Err(self.malformed(t, "expected TVar(n, sort)"));
        }
        let id = self.lang.as_num(&t.kids()[0]).ok_or_else(|| self.malformed(t, "expected a numeral"))?;
        Ok(TermVar::new(id, self.decode_sort(&t.kids()[1])?))
    }

    /// Decodes a well-sorted term.
    pub fn decode_term(&self, t: &Tree) -> Result<Term> {
        let term = self.decode_term_raw(t)?;
        self.sig.sort_of(&term).map_err(|e| self.malformed(t, e.to_string()))?;
        Ok(term)
    }

    fn decode_term_raw(&self, t: &Tree) -> Result<Term> {
        match t.ctor() {
            c if c == self.ids.tvar => Ok(Term::Var(self.decode_tvar(t)?)),
            c if c == self.ids.fun => {
                let k = self.lang.as_num(&t.kids()[0]).ok_or_else(|| self.malformed(t, "expected a numeral"))?;
                let decl = self
                    .sig
                    .funs()
                    .get(k as usize)
                    .ok_or_else(|| self.malformed(t, format!("no function symbol number {k}")))?;
                let items = self.list_items(&t.kids()[1]).ok_or_else(|| self.malformed(t, "expected an argument list"))?;
                let args = items.iter().map(|a| self.decode_term_raw(a)).collect::<Result<Vec<_>>>()?;
                Ok(Term::App(decl.name.clone(), args))
            }
            _ => Err(self.malformed(t, "expected a term")),
        }
    }

    pub fn decode_proof(&self, t: &Tree) -> Result<ProofTerm> {
        use ProofTerm::*;
        let i = &self.ids;
        let k = t.kids();
        let d = |q: &Tree| self.decode_proof(q).map(Box::new);
        Ok(match t.ctor() {
            c if c == i.axiom => Axiom(self.decode_pvar(&k[0])?),
            c if c == i.impi => Lam(self.decode_pvar(&k[0])?, d(&k[1])?),
            c if c == i.impe => App(d(&k[0])?, d(&k[1])?),
            c if c == i.andi => Pair(d(&k[0])?, d(&k[1])?),
            c if c == i.ande1 => Fst(d(&k[0])?),
            c if c == i.ande2 => Snd(d(&k[0])?),
            c if c == i.ori1 => InjL(d(&k[0])?),
            c if c == i.ori2 => InjR(d(&k[0])?),
            c if c == i.ore => {
                Case(d(&k[0])?, self.decode_pvar(&k[1])?, d(&k[2])?, self.decode_pvar(&k[3])?, d(&k[4])?)
            }
            c if c == i.topi => TopI,
            c if c == i.bote => BotE(d(&k[0])?),
            c if c == i.foralli => TLam(self.decode_tvar(&k[0])?, d(&k[1])?),
            c if c == i.foralle => TApp(d(&k[0])?, self.decode_term(&k[1])?),
            c if c == i.existsi => Witness(self.decode_term(&k[0])?, d(&k[1])?),
            c if c == i.existse => {
                let b = &k[1];
                if b.ctor() != i.exbind {
                    return Err(self.malformed(b, "expected ExBind(x, a, proof)"));
                }
                let bk = b.kids();
                ExElim(d(&k[0])?, self.decode_tvar(&bk[0])?, self.decode_pvar(&bk[1])?, d(&bk[2])?)
            }
            _ => return Err(self.malformed(t, "not a proof-term constructor")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::term::*;
    use crate::syntax::parse_theory;

    fn codec() -> Codec {
        Codec::new(&parse_theory("(theory (sort i) (fun c () i) (fun f (i) i))").unwrap().signature)
    }

    #[test]
    fn top_intro_is_a_leaf() {
        let c = codec();
        assert_eq!(c.lang().print(&c.encode_proof(&ProofTerm::TopI)), "TopI");
        assert_eq!(c.decode_proof(&c.lang().parse("TopI").unwrap()).unwrap(), ProofTerm::TopI);
    }

    #[test]
    fn encodes_binders_and_terms() {
        let c = codec();
        let x = TermVar::named("x", "i");
        let p = exelim(witness(Term::app("f", vec![Term::constant("c")]), var("a")), x.clone(), "b", var("b"));
        let t = c.encode_proof(&p);
        assert_eq!(
            c.lang().print(&t),
            "(ExistsE (ExistsI (Fun 1 (Cons (Fun 0 Nil) Nil)) (Axiom 0)) (ExBind (TVar 23 (Sortc 0)) 1 (Axiom 1)))"
        );
        assert_eq!(c.decode_proof(&t).unwrap(), p);
    }

    #[test]
    fn malformed_trees_are_located() {
        let c = codec();
        let t = c.lang().parse("(ImpI TopI (Axiom 0))").unwrap();
        match c.decode_proof(&t) {
            Err(Error::MalformedEncoding { subtree, .. }) => assert_eq!(subtree, "TopI"),
            other => panic!("{other:?}"),
        }
        let ill_sorted = c.lang().parse("(ExistsI (Fun 1 Nil) TopI)").unwrap();
        assert!(c.decode_proof(&ill_sorted).is_err());
    }
}
