//! The builtin primitive recursive relations on encoded proofs.
//!
//! Relations are characteristic functions returning the numerals `0`/`1`.
//! Helpers that depend only on the constructor list (`is_C`, `kid<i>`,
//! `eq`, `replace<i>`, `wrap<i>`) and the signature tables (`nsorts`,
//! `nfuns`, `funres`, `funargs`) are generated; the rest is read from a
//! bundled definition file.

use std::fmt::Write as _;

use super::encode::Codec;
use super::pr::PrEnv;
use super::tree::TreeLang;
use crate::error::Result;
use crate::syntax::Signature;

const SOURCE: &str = include_str!("builtins.prdef");
const EQ_MARKER: &str = ";; @generated-eq";

/// Largest constructor arity of the standard language.
const MAX_KIDS: usize = 5;

/// Relation names and the definitions computing their characteristic
/// functions.
pub const RELATIONS: [(&str, &str, usize); 10] = [
    ("Nat", "nat", 1),
    ("Le", "le", 2),
    ("Sort", "sort", 1),
    ("TermVar", "termvar", 2),
    ("Term", "term", 2),
    ("ProofVar", "proofvar", 1),
    ("Proof", "proof", 1),
    ("Elim", "elim", 1),
    ("Red", "red", 2),
    ("Redn", "redn", 3),
];

/// Function names and their definitions.
pub const FUNCTIONS: [(&str, &str, usize); 2] = [("TSubst", "tsubst", 3), ("PSubst", "psubst", 3)];

/// The definition computing relation or function `name`.
pub fn definition_of(name: &str) -> Option<&'static str> {
    RELATIONS.iter().chain(FUNCTIONS.iter()).find(|(n, _, _)| *n == name).map(|(_, d, _)| *d)
}

/// Builtin definitions for one signature.
#[derive(Debug)]
pub struct BuiltinRelationSet {
    codec: Codec,
    env: PrEnv,
}

impl BuiltinRelationSet {
    pub fn new(sig: &Signature) -> Result<Self> {
        let codec = Codec::new(sig);
        let lang = codec.lang().clone();
        let mut env = PrEnv::new(lang.clone());
        env.load(&structural_defs(&lang))?;
        env.load(&signature_defs(&codec))?;
        let (head, tail) = SOURCE.split_once(EQ_MARKER).expect("marker in builtin source");
        env.load(head)?;
        env.load(&equality_defs(&lang))?;
        env.load(tail)?;
        Ok(BuiltinRelationSet { codec, env })
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    pub fn env(&self) -> &PrEnv {
        &self.env
    }

    pub fn env_mut(&mut self) -> &mut PrEnv {
        &mut self.env
    }

    pub fn into_env(self) -> PrEnv {
        self.env
    }
}

fn structural_defs(lang: &TreeLang) -> String {
    let mut out = String::new();
    for c in lang.ctors() {
        writeln!(out, "(prdef is_{0} 1 (rec 0) (clause {0} 1) (clause _ 0))", c.name).unwrap();
    }
    for i in 0..MAX_KIDS {
        write!(out, "(prdef kid{i} 1 (rec 0)").unwrap();
        for c in lang.ctors().iter().filter(|c| c.arity > i) {
            write!(out, " (clause {} (child {i}))", c.name).unwrap();
        }
        writeln!(out, " (clause _ 0))").unwrap();
    }
    out
}

fn signature_defs(codec: &Codec) -> String {
    let sig = codec.signature();
    let l = codec.lang();
    let sort_list = |sorts: Vec<String>| sorts.iter().rev().fold("Nil".to_string(), |acc, s| format!("(Cons {s} {acc})"));
    let sortc = |s| l.print(&codec.encode_sort(s));
    let res = sort_list(sig.funs().iter().map(|f| sortc(&f.result)).collect());
    let args = sort_list(sig.funs().iter().map(|f| sort_list(f.args.iter().map(sortc).collect())).collect());
    format!(
        "(prdef nsorts 0 (clause _ {}))\n(prdef nfuns 0 (clause _ {}))\n(prdef funres 0 (clause _ {res}))\n(prdef funargs 0 (clause _ {args}))\n",
        sig.sorts().len(),
        sig.funs().len()
    )
}

fn equality_defs(lang: &TreeLang) -> String {
    let mut out = String::from("(prdef eq 2 (rec 0)");
    for c in lang.ctors() {
        let mut conj: Vec<String> = (0..c.arity).map(|i| format!("(rec {i} (call kid{i} (arg 1)))")).collect();
        conj.insert(0, format!("(call is_{} (arg 1))", c.name));
        let last = conj.pop().unwrap();
        let body = conj.iter().rev().fold(last, |acc, x| format!("(call band {x} {acc})"));
        write!(out, "\n  (clause {} {body})", c.name).unwrap();
    }
    out.push_str(")\n(prdef neq 2 (rec 0) (clause _ (call neg (call eq (arg 0) (arg 1)))))\n");
    for i in 0..MAX_KIDS {
        write!(out, "(prdef replace{i} 2 (rec 0)").unwrap();
        for c in lang.ctors().iter().filter(|c| c.arity > i) {
            let kids: Vec<String> =
                (0..c.arity).map(|j| if j == i { "(arg 1)".to_string() } else { format!("(child {j})") }).collect();
            write!(out, " (clause {} ({} {}))", c.name, c.name, kids.join(" ")).unwrap();
        }
        writeln!(out, " (clause _ (arg 0)))").unwrap();
        writeln!(
            out,
            "(prdef wrap{i} 2 (rec 0) (clause Cons (Cons (call replace{i} (arg 1) (child 0)) (rec 1))) (clause _ Nil))"
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::term::*;
    use crate::syntax::{parse_theory, Sort, Term, TermVar};

    fn builtins() -> BuiltinRelationSet {
        let th = parse_theory("(theory (sort i) (sort o) (fun c () i) (fun f (i o) i) (fun d () o))").unwrap();
        BuiltinRelationSet::new(&th.signature).unwrap()
    }

    #[test]
    fn arithmetic_relations() {
        let b = builtins();
        let l = b.codec().lang().clone();
        let env = b.env();
        assert!(env.holds("le", &[l.num(1), l.num(2)]).unwrap());
        assert!(!env.holds("le", &[l.num(3), l.num(2)]).unwrap());
        assert!(!env.holds("nat", &[l.parse("TopI").unwrap()]).unwrap());
        assert!(env.holds("nat", &[l.num(4)]).unwrap());
        assert!(env.holds("eq", &[l.parse("(Pair 1 Nil)").unwrap(), l.parse("(Pair 1 Nil)").unwrap()]).unwrap());
        assert!(!env.holds("eq", &[l.parse("(Pair 1 Nil)").unwrap(), l.parse("(Pair 2 Nil)").unwrap()]).unwrap());
    }

    #[test]
    fn terms_are_sort_checked() {
        let b = builtins();
        let c = b.codec();
        let t = Term::app("f", vec![Term::constant("c"), Term::constant("d")]);
        let i = c.encode_sort(&Sort::new("i"));
        let o = c.encode_sort(&Sort::new("o"));
        assert!(b.env().holds("term", &[c.encode_term(&t), i.clone()]).unwrap());
        assert!(!b.env().holds("term", &[c.encode_term(&t), o.clone()]).unwrap());
        let bad = Term::app("f", vec![Term::constant("d"), Term::constant("c")]);
        assert!(!b.env().holds("term", &[c.encode_term(&bad), i.clone()]).unwrap());
        let x = Term::var(&TermVar::named("x", "o"));
        assert!(b.env().holds("term", &[c.encode_term(&x), o]).unwrap());
        assert!(!b.env().holds("term", &[c.encode_term(&x), i]).unwrap());
    }

    #[test]
    fn proofs_and_eliminations() {
        let b = builtins();
        let c = b.codec();
        let x = TermVar::named("x", "i");
        let good = exelim(var("a"), x.clone(), "b", tapp(var("b"), Term::var(&x)));
        assert!(b.env().holds("proof", &[c.encode_proof(&good)]).unwrap());
        assert!(b.env().holds("elim", &[c.encode_proof(&good)]).unwrap());
        assert!(!b.env().holds("elim", &[c.encode_proof(&lam("a", var("a")))]).unwrap());
        let l = c.lang();
        assert!(!b.env().holds("proof", &[l.parse("(ImpI 0 (Pair 0 0))").unwrap()]).unwrap());
        assert!(!b.env().holds("proof", &[l.parse("(ExBind (TVar 0 (Sortc 0)) 0 TopI)").unwrap()]).unwrap());
        assert!(!b.env().holds("proof", &[l.parse("(ForallI (TVar 0 (Sortc 7)) TopI)").unwrap()]).unwrap());
    }

    #[test]
    fn projection_reduces_in_one_step() {
        let b = builtins();
        let c = b.codec();
        let l = c.lang();
        let p = c.encode_proof(&fst(pair(var("a"), var("b"))));
        let a = c.encode_proof(&var("a"));
        assert!(b.env().holds("red", &[p.clone(), a.clone()]).unwrap());
        assert!(b.env().holds("redn", &[p.clone(), l.num(1), a.clone()]).unwrap());
        assert!(!b.env().holds("redn", &[p.clone(), l.num(0), a.clone()]).unwrap());
        assert!(b.env().holds("redn", &[p.clone(), l.num(0), p]).unwrap());
    }

    #[test]
    fn substitution_renames_like_the_direct_one() {
        let b = builtins();
        let c = b.codec();
        let body = lam("b", app(var("a"), var("b")));
        let direct = subst_proof(&body, crate::syntax::PVar::named("a"), &var("b"));
        let pr = b
            .env()
            .eval_by_name("psubst", &[c.encode_proof(&body), c.encode_pvar(crate::syntax::PVar::named("a")), c.encode_proof(&var("b"))])
            .unwrap();
        assert_eq!(c.decode_proof(&pr).unwrap(), direct);
    }

    #[test]
    fn relation_names_resolve() {
        let b = builtins();
        for (_, d, arity) in RELATIONS.iter().chain(FUNCTIONS.iter()) {
            assert_eq!(b.env().get(d).unwrap().arity, *arity);
        }
        assert_eq!(definition_of("Redn"), Some("redn"));
    }
}
