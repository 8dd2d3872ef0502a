//! The theory of syntactic constructions: a mono-sorted theory whose
//! function symbols are the constructors of a tree language and the
//! primitive recursive definitions over it, with equality as its only
//! predicate.

use std::collections::BTreeSet;

use super::builtins::RELATIONS;
use super::pr::{PrEnv, PrimRecDef};
use super::tree::{Tree, TreeLang};
use crate::error::{Error, Result};
use crate::syntax::{
    fresh_index, index_of, FunDecl, Formula, PredDecl, RewriteRule, Signature, Sort, Symbol, Template, Term,
    TermVar, Theory,
};

/// Name of the unique sort.
pub const S_SORT: &str = "L";

pub fn s_sort() -> Sort {
    Sort::new(S_SORT)
}

fn var(name: &str) -> TermVar {
    TermVar::new(index_of(name).unwrap(), s_sort())
}

fn vars(prefix: &str, n: usize) -> Vec<TermVar> {
    (1..=n).map(|i| var(&format!("{prefix}{i}"))).collect()
}

fn eq(a: Term, b: Term) -> Formula {
    Formula::atom("=", vec![a, b])
}

/// The closed term of S denoting a tree.
pub fn tree_to_term(lang: &TreeLang, t: &Tree) -> Term {
    Term::App(Symbol::new(lang.name(t.ctor())), t.kids().iter().map(|k| tree_to_term(lang, k)).collect())
}

/// The tree denoted by a closed constructor term, if it is one.
pub fn term_to_tree(lang: &TreeLang, t: &Term) -> Option<Tree> {
    match t {
        Term::Var(_) => None,
        Term::App(f, args) => {
            let c = lang.find(f.as_str())?;
            if lang.arity(c) != args.len() {
                return None;
            }
            let kids = args.iter().map(|a| term_to_tree(lang, a)).collect::<Option<Vec<_>>>()?;
            Some(Tree::new(c as u16, kids))
        }
    }
}

/// Sort `L`, the constructors and definitions as function symbols, and `=`.
pub fn s_signature(lang: &TreeLang, defs: &[PrimRecDef]) -> Result<Signature> {
    let mut sig = Signature::new();
    sig.add_sort(S_SORT)?;
    let l = s_sort();
    for c in lang.ctors() {
        sig.add_fun_decl(FunDecl { name: Symbol::new(&c.name), args: vec![l.clone(); c.arity], result: l.clone() })?;
    }
    for d in defs {
        sig.add_fun_decl(FunDecl { name: Symbol::new(&d.name), args: vec![l.clone(); d.arity], result: l.clone() })?;
    }
    sig.add_pred("=", &[S_SORT, S_SORT])?;
    Ok(sig)
}

/// The axioms of S: equality, injectivity and non-confusion of
/// constructors, the equations of each definition and one induction axiom
/// per instance (each instance has exactly one hole).
pub fn emit_s_axioms(lang: &TreeLang, defs: &[PrimRecDef], induction_instances: &[Template]) -> Result<Theory> {
    let mut env = PrEnv::new(lang.clone());
    for d in defs {
        env.add(d.clone())?;
    }
    let sig = s_signature(lang, defs)?;
    let mut th = Theory::new(sig);
    let (x, y, z) = (var("x"), var("y"), var("z"));
    th.axioms.push(Formula::forall(x.clone(), eq(Term::var(&x), Term::var(&x))));
    th.axioms.push(Formula::forall_many(
        [x.clone(), y.clone(), z.clone()],
        Formula::imp(
            Formula::and(eq(Term::var(&x), Term::var(&y)), eq(Term::var(&x), Term::var(&z))),
            eq(Term::var(&y), Term::var(&z)),
        ),
    ));
    for f in th.signature.funs().to_vec() {
        let n = f.args.len();
        if n == 0 {
            continue;
        }
        let (xs, ys) = (vars("x", n), vars("y", n));
        let hyps = xs.iter().zip(&ys).map(|(a, b)| eq(Term::var(a), Term::var(b)));
        let concl = eq(
            Term::App(f.name.clone(), xs.iter().map(Term::var).collect()),
            Term::App(f.name.clone(), ys.iter().map(Term::var).collect()),
        );
        th.axioms.push(Formula::forall_many(xs.iter().chain(&ys).cloned(), Formula::imp(Formula::conj(hyps), concl)));
    }
    let app = |name: &str, vs: &[TermVar]| Term::App(Symbol::new(name), vs.iter().map(Term::var).collect());
    for c in lang.ctors() {
        let (xs, ys) = (vars("x", c.arity), vars("y", c.arity));
        let concl = Formula::conj(xs.iter().zip(&ys).map(|(a, b)| eq(Term::var(a), Term::var(b))));
        th.axioms.push(Formula::forall_many(
            xs.iter().chain(&ys).cloned(),
            Formula::imp(eq(app(&c.name, &xs), app(&c.name, &ys)), concl),
        ));
    }
    for ci in lang.ctors() {
        for cj in lang.ctors() {
            if ci == cj {
                continue;
            }
            let (xs, ys) = (vars("x", ci.arity), vars("y", cj.arity));
            th.axioms.push(Formula::forall_many(
                xs.iter().chain(&ys).cloned(),
                Formula::not(eq(app(&ci.name, &xs), app(&cj.name, &ys))),
            ));
        }
    }
    for d in defs {
        th.axioms.extend(d.equations(lang, &s_sort()));
    }
    for inst in induction_instances {
        th.axioms.push(induction_axiom(lang, inst)?);
    }
    Ok(th)
}

/// `⋀_i (∀y1…∀yk A(c_i(y1,…,yk))) → ∀x A(x)`, closed over the remaining
/// free variables of `A`.
pub fn induction_axiom(lang: &TreeLang, a: &Template) -> Result<Formula> {
    let [h] = a.holes.as_slice() else {
        return Err(Error::ill_formed("induction", "an induction instance has exactly one hole"));
    };
    if h.sort != s_sort() {
        return Err(Error::sort(h.name(), format!("the induction variable must have sort {S_SORT}")));
    }
    let params: BTreeSet<TermVar> = a.body.free_vars().into_iter().filter(|v| v != h).collect();
    let cases = lang.ctors().iter().map(|c| {
        let mut ys = vars("y", c.arity);
        if ys.iter().any(|y| params.contains(y) || y == h) {
            let base = fresh_index(params.iter().map(|v| Some(v.id)).chain([Some(h.id)]));
            ys = (0..c.arity as u32).map(|i| TermVar::new(base + i, s_sort())).collect();
        }
        let t = Term::App(Symbol::new(&c.name), ys.iter().map(Term::var).collect());
        Formula::forall_many(ys, a.instantiate(&[t]))
    });
    let body = Formula::imp(Formula::conj(cases), Formula::forall(h.clone(), a.body.clone()));
    Ok(Formula::forall_many(params, body))
}

/// `1` as a term of S.
pub fn one() -> Term {
    Term::app("s", vec![Term::constant("0")])
}

/// `R(x1,…,xn) ≡ f(x1,…,xn) = 1` for a builtin relation `R` computed by `f`.
pub fn relation_template(name: &str) -> Option<Template> {
    let (_, f, n) = RELATIONS.iter().find(|(r, _, _)| *r == name)?;
    let xs = vars("x", *n);
    let body = eq(Term::App(Symbol::new(f), xs.iter().map(Term::var).collect()), one());
    Some(Template::new(xs, body))
}

fn rel(name: &str, args: Vec<Term>) -> Formula {
    Formula::atom(name, args)
}

/// `Red*` and `SN`, written with the relation predicates `Nat`, `Redn` and
/// `Proof`.
pub fn derived_relation(name: &str) -> Option<Template> {
    let (x, y, n) = (var("x"), var("y"), var("n"));
    match name {
        "Red*" => Some(Template::new(
            vec![x.clone(), y.clone()],
            Formula::exists(
                n.clone(),
                Formula::and(
                    rel("Nat", vec![Term::var(&n)]),
                    rel("Redn", vec![Term::var(&x), Term::var(&n), Term::var(&y)]),
                ),
            ),
        )),
        "SN" => Some(Template::new(
            vec![x.clone()],
            Formula::and(
                rel("Proof", vec![Term::var(&x)]),
                Formula::exists(
                    n.clone(),
                    Formula::and(
                        rel("Nat", vec![Term::var(&n)]),
                        Formula::forall(
                            y.clone(),
                            Formula::imp(
                                rel("Proof", vec![Term::var(&y)]),
                                Formula::not(rel("Redn", vec![Term::var(&x), Term::var(&n), Term::var(&y)])),
                            ),
                        ),
                    ),
                ),
            ),
        )),
        _ => None,
    }
}

/// Declares the relation predicates, `Red*` and `SN` and adds the rewrite
/// rules unfolding them. The theory must contain the builtin definitions.
pub fn add_notation(th: &mut Theory) -> Result<()> {
    let names = RELATIONS.iter().map(|(r, _, _)| *r).chain(["Red*", "SN"]);
    for name in names {
        let t = relation_template(name).or_else(|| derived_relation(name)).unwrap();
        th.signature.add_pred_decl(PredDecl { name: Symbol::new(name), args: vec![s_sort(); t.holes.len()] })?;
        th.rules.push(RewriteRule::Prop {
            pred: Symbol::new(name),
            args: t.holes.iter().map(Term::var).collect(),
            rhs: t.body,
        });
    }
    th.check()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::BuiltinRelationSet;
    use crate::syntax::print_formula;

    fn nat_lang() -> TreeLang {
        TreeLang::new(&[("0", 0), ("s", 1)]).unwrap()
    }

    fn conclusion(a: &Formula) -> &Formula {
        let mut f = a;
        while let Formula::Forall(_, b) = f {
            f = b;
        }
        match f {
            Formula::Imp(_, c) => c,
            _ => f,
        }
    }

    #[test]
    fn constructor_axioms_are_counted() {
        let lang = TreeLang::new(&[("0", 0), ("s", 1), ("leaf", 0), ("node", 2), ("tri", 3)]).unwrap();
        let th = emit_s_axioms(&lang, &[], &[]).unwrap();
        th.check().unwrap();
        // reflexivity, transitivity, congruence for s, node and tri
        assert_eq!(th.axioms.len(), 2 + 3 + 5 + 20);
        let bot = th.axioms.iter().filter(|a| *conclusion(a) == Formula::Bot).count();
        assert_eq!(bot, 20);
        assert!(th.axioms[5..10].iter().all(|a| *conclusion(a) != Formula::Bot));
    }

    #[test]
    fn zero_is_not_a_successor() {
        let th = emit_s_axioms(&nat_lang(), &[], &[]).unwrap();
        let text: Vec<String> = th.axioms.iter().map(print_formula).collect();
        assert!(text.contains(&"(forall (y1 L) (not (= 0 (s y1))))".to_string()), "{text:#?}");
        assert!(text.contains(&"(imp (= 0 0) top)".to_string()));
    }

    #[test]
    fn definitions_contribute_their_equations() {
        let lang = nat_lang();
        let mut env = PrEnv::new(lang.clone());
        env.load("(prdef le 2 (rec 0) (clause 0 1) (clause s (rec 0 (s (arg 1)))))").unwrap();
        let th = emit_s_axioms(&lang, env.defs(), &[]).unwrap();
        let eqs = env.defs()[0].equations(&lang, &s_sort());
        assert_eq!(&th.axioms[th.axioms.len() - 2..], &eqs[..]);
        assert!(emit_s_axioms(&lang, &[PrimRecDef { name: "f".into(), arity: 1, rec: None, clauses: vec![] }], &[]).is_err());
    }

    #[test]
    fn induction_axiom_shape() {
        let lang = nat_lang();
        let x = var("x");
        let p = Template::new(vec![x.clone()], eq(Term::var(&x), Term::var(&x)));
        let ax = induction_axiom(&lang, &p).unwrap();
        assert_eq!(
            print_formula(&ax),
            "(imp (and (= 0 0) (forall (y1 L) (= (s y1) (s y1)))) (forall (x L) (= x x)))"
        );
    }

    #[test]
    fn notation_unfolds_to_definitions() {
        let th0 = crate::syntax::parse_theory("(theory (sort i))").unwrap();
        let b = BuiltinRelationSet::new(&th0.signature).unwrap();
        let mut th = emit_s_axioms(b.codec().lang(), b.env().defs(), &[]).unwrap();
        add_notation(&mut th).unwrap();
        let sn = derived_relation("SN").unwrap();
        let top = tree_to_term(b.codec().lang(), &b.codec().encode_proof(&crate::proof::ProofTerm::TopI));
        assert_eq!(print_formula(&sn.instantiate(&[top])), "(and (Proof TopI) (exists (n L) (and (Nat n) (forall (y L) (imp (Proof y) (not (Redn TopI n y)))))))");
        assert_eq!(term_to_tree(b.codec().lang(), &one()), Some(b.codec().lang().num(1)));
    }
}
