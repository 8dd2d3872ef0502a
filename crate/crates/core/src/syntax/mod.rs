//! Sorted first-order syntax: terms, formulas, signatures, rewrite-presented
//! theories and sequents.

mod names;
mod subst;
mod template;
mod text;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use names::{index_of, name_of, PVar, Sort, Symbol, TermVar};
pub use subst::{fresh_index, subst_formula, subst_in_formula, subst_term};
pub use template::{Template, TermTemplate};
pub use text::{
    parse_formula, parse_formula_sexpr, parse_term, parse_theory, print_formula, print_term,
    print_theory, FormulaParser,
};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(TermVar),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(v: &TermVar) -> Term {
        Term::Var(v.clone())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(f), args)
    }

    pub fn constant(c: &str) -> Term {
        Term::App(Symbol::new(c), Vec::new())
    }

    pub fn free_vars(&self) -> BTreeSet<TermVar> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<TermVar>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn max_var_index(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.id),
            Term::App(_, args) => args.iter().filter_map(Term::max_var_index).max(),
        }
    }

    pub fn has_var(&self, x: &TermVar) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::App(_, args) => args.iter().any(|a| a.has_var(x)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

/// First-order formulas. Negation is not primitive: `not A` is `A -> bot`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Atom(Symbol, Vec<Term>),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(TermVar, Box<Formula>),
    Exists(TermVar, Box<Formula>),
}

impl Formula {
    pub fn atom(p: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Symbol::new(p), args)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn forall(x: TermVar, body: Formula) -> Formula {
        Formula::Forall(x, Box::new(body))
    }

    pub fn exists(x: TermVar, body: Formula) -> Formula {
        Formula::Exists(x, Box::new(body))
    }

    /// `a1 ∧ (a2 ∧ (... ∧ an))`; `⊤` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Top;
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Guarded implication `conj(guards) → body`, or just `body` when there
    /// are no guards.
    pub fn guarded(guards: Vec<Formula>, body: Formula) -> Formula {
        if guards.is_empty() {
            body
        } else {
            Formula::imp(Formula::conj(guards), body)
        }
    }

    pub fn forall_many(vars: impl IntoIterator<Item = TermVar>, body: Formula) -> Formula {
        let vars: Vec<_> = vars.into_iter().collect();
        vars.into_iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    /// Universal closure over the free variables, in index order.
    pub fn universal_closure(self) -> Formula {
        let fv = self.free_vars();
        Formula::forall_many(fv, self)
    }

    pub fn free_vars(&self) -> BTreeSet<TermVar> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<TermVar>, out: &mut BTreeSet<TermVar>) {
        match self {
            Formula::Atom(_, args) => {
                for a in args {
                    let mut vs = BTreeSet::new();
                    a.collect_vars(&mut vs);
                    out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
                }
            }
            Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Largest variable index occurring anywhere (free or bound).
    pub fn max_var_index(&self) -> Option<u32> {
        match self {
            Formula::Atom(_, args) => args.iter().filter_map(Term::max_var_index).max(),
            Formula::Top | Formula::Bot => None,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.max_var_index().max(b.max_var_index())
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                Some(x.id).max(body.max_var_index())
            }
        }
    }

    /// Number of connectives, quantifiers and atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Top | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.size(),
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

fn alpha_eq_term(a: &Term, b: &Term, env: &[(TermVar, TermVar)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, env))
        }
        _ => false,
    }
}

fn alpha_eq_in(a: &Formula, b: &Formula, env: &mut Vec<(TermVar, TermVar)>) -> bool {
    use Formula::*;
    match (a, b) {
        (Atom(p, xs), Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, env))
        }
        (Top, Top) | (Bot, Bot) => true,
        (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Imp(a1, a2), Imp(b1, b2)) => {
            alpha_eq_in(a1, b1, env) && alpha_eq_in(a2, b2, env)
        }
        (Forall(x, a1), Forall(y, b1)) | (Exists(x, a1), Exists(y, b1)) => {
            if x.sort != y.sort {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha_eq_in(a1, b1, env);
            env.pop();
            r
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunDecl {
    pub name: Symbol,
    pub args: Vec<Sort>,
    pub result: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredDecl {
    pub name: Symbol,
    pub args: Vec<Sort>,
}

/// Sorts, function symbols and predicate symbols, kept in declaration order
/// (the order fixes the numbering used by the tree encodings).
#[derive(Clone, Debug, Default)]
pub struct Signature {
    sorts: Vec<Sort>,
    funs: Vec<FunDecl>,
    preds: Vec<PredDecl>,
    fun_ix: HashMap<Symbol, usize>,
    pred_ix: HashMap<Symbol, usize>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.sorts == other.sorts && self.funs == other.funs && self.preds == other.preds
    }
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, name: &str) -> Result<()> {
        let s = Sort::new(name);
        if self.sorts.contains(&s) {
            return Err(Error::sort(name, "sort declared twice"));
        }
        self.sorts.push(s);
        Ok(())
    }

    fn check_declared_sorts(&self, name: &str, sorts: &[Sort]) -> Result<()> {
        match sorts.iter().find(|s| !self.sorts.contains(s)) {
            Some(s) => Err(Error::sort(name, format!("undeclared sort `{s}` in rank"))),
            None => Ok(()),
        }
    }

    fn check_fresh_symbol(&self, name: &str) -> Result<()> {
        let sym = Symbol::new(name);
        if self.fun_ix.contains_key(&sym) || self.pred_ix.contains_key(&sym) {
            return Err(Error::sort(name, "symbol declared twice"));
        }
        if matches!(name, "top" | "bot" | "and" | "or" | "imp" | "not" | "forall" | "exists") {
            return Err(Error::sort(name, "reserved word used as a symbol"));
        }
        Ok(())
    }

    pub fn add_fun(&mut self, name: &str, args: &[&str], result: &str) -> Result<()> {
        let args: Vec<Sort> = args.iter().map(|s| Sort::new(s)).collect();
        self.add_fun_decl(FunDecl { name: Symbol::new(name), args, result: Sort::new(result) })
    }

    pub fn add_fun_decl(&mut self, decl: FunDecl) -> Result<()> {
        let name = decl.name.to_string();
        self.check_fresh_symbol(&name)?;
        self.check_declared_sorts(&name, &decl.args)?;
        self.check_declared_sorts(&name, std::slice::from_ref(&decl.result))?;
        self.fun_ix.insert(decl.name.clone(), self.funs.len());
        self.funs.push(decl);
        Ok(())
    }

    pub fn add_pred(&mut self, name: &str, args: &[&str]) -> Result<()> {
        let args: Vec<Sort> = args.iter().map(|s| Sort::new(s)).collect();
        self.add_pred_decl(PredDecl { name: Symbol::new(name), args })
    }

    pub fn add_pred_decl(&mut self, decl: PredDecl) -> Result<()> {
        let name = decl.name.to_string();
        self.check_fresh_symbol(&name)?;
        self.check_declared_sorts(&name, &decl.args)?;
        self.pred_ix.insert(decl.name.clone(), self.preds.len());
        self.preds.push(decl);
        Ok(())
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn funs(&self) -> &[FunDecl] {
        &self.funs
    }

    pub fn preds(&self) -> &[PredDecl] {
        &self.preds
    }

    pub fn has_sort(&self, s: &Sort) -> bool {
        self.sorts.contains(s)
    }

    pub fn sort_index(&self, s: &Sort) -> Option<usize> {
        self.sorts.iter().position(|x| x == s)
    }

    pub fn fun(&self, name: &Symbol) -> Option<&FunDecl> {
        self.fun_ix.get(name).map(|&i| &self.funs[i])
    }

    pub fn fun_index(&self, name: &Symbol) -> Option<usize> {
        self.fun_ix.get(name).copied()
    }

    pub fn pred(&self, name: &Symbol) -> Option<&PredDecl> {
        self.pred_ix.get(name).map(|&i| &self.preds[i])
    }

    /// Sort of a term, checking every application against its rank.
    pub fn sort_of(&self, t: &Term) -> Result<Sort> {
        match t {
            Term::Var(v) => {
                if self.has_sort(&v.sort) {
                    Ok(v.sort.clone())
                } else {
                    Err(Error::sort(v.name(), format!("undeclared sort `{}`", v.sort)))
                }
            }
            Term::App(f, args) => {
                let decl = self.fun(f).ok_or_else(|| Error::sort(f.as_str(), "undeclared function symbol"))?;
                self.check_args(f.as_str(), &decl.args, args)?;
                Ok(decl.result.clone())
            }
        }
    }

    fn check_args(&self, sym: &str, expected: &[Sort], args: &[Term]) -> Result<()> {
        if expected.len() != args.len() {
            return Err(Error::sort(
                sym,
                format!("expects {} arguments, got {}", expected.len(), args.len()),
            ));
        }
        for (want, a) in expected.iter().zip(args) {
            let got = self.sort_of(a)?;
            if &got != want {
                return Err(Error::sort(sym, format!("argument `{a}` has sort {got}, expected {want}")));
            }
        }
        Ok(())
    }

    pub fn check_formula(&self, f: &Formula) -> Result<()> {
        match f {
            Formula::Atom(p, args) => {
                let decl = self.pred(p).ok_or_else(|| Error::sort(p.as_str(), "undeclared predicate symbol"))?;
                self.check_args(p.as_str(), &decl.args, args)
            }
            Formula::Top | Formula::Bot => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                if !self.has_sort(&x.sort) {
                    return Err(Error::sort(x.name(), format!("undeclared sort `{}`", x.sort)));
                }
                self.check_formula(body)
            }
        }
    }
}

/// A rewrite rule generating the congruence of a theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteRule {
    Term { lhs: Term, rhs: Term },
    Prop { pred: Symbol, args: Vec<Term>, rhs: Formula },
}

impl RewriteRule {
    pub fn lhs_vars(&self) -> BTreeSet<TermVar> {
        match self {
            RewriteRule::Term { lhs, .. } => lhs.free_vars(),
            RewriteRule::Prop { args, .. } => {
                let mut out = BTreeSet::new();
                args.iter().for_each(|a| a.collect_vars(&mut out));
                out
            }
        }
    }

    /// The rule's two sides as formulas (for term rules, `None`).
    pub fn as_formulas(&self) -> Option<(Formula, Formula)> {
        match self {
            RewriteRule::Prop { pred, args, rhs } => Some((Formula::Atom(pred.clone(), args.clone()), rhs.clone())),
            RewriteRule::Term { .. } => None,
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        let rhs_vars = match self {
            RewriteRule::Term { lhs, rhs } => {
                if let Term::Var(v) = lhs {
                    return Err(Error::sort(v.name(), "rule left-hand side is a bare variable"));
                }
                let ls = sig.sort_of(lhs)?;
                let rs = sig.sort_of(rhs)?;
                if ls != rs {
                    return Err(Error::sort(rhs.to_string(), format!("rule sides have sorts {ls} and {rs}")));
                }
                rhs.free_vars()
            }
            RewriteRule::Prop { pred, args, rhs } => {
                sig.check_formula(&Formula::Atom(pred.clone(), args.clone()))?;
                sig.check_formula(rhs)?;
                rhs.free_vars()
            }
        };
        let lhs_vars = self.lhs_vars();
        if let Some(v) = rhs_vars.iter().find(|v| !lhs_vars.contains(v)) {
            return Err(Error::sort(v.name(), "variable of the right-hand side does not occur on the left"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Theory {
    pub signature: Signature,
    pub rules: Vec<RewriteRule>,
    pub axioms: Vec<Formula>,
}

impl Theory {
    pub fn new(signature: Signature) -> Self {
        Theory { signature, rules: Vec::new(), axioms: Vec::new() }
    }

    pub fn check(&self) -> Result<()> {
        for r in &self.rules {
            r.check(&self.signature)?;
        }
        for a in &self.axioms {
            self.signature.check_formula(a)?;
            if let Some(v) = a.free_vars().into_iter().next() {
                return Err(Error::sort(v.name(), format!("axiom `{a}` is not closed")));
            }
        }
        Ok(())
    }

    /// Structural equality with axioms compared up to bound renaming.
    pub fn equiv(&self, other: &Theory) -> bool {
        self.signature == other.signature
            && self.rules.len() == other.rules.len()
            && self.rules.iter().zip(&other.rules).all(|(a, b)| match (a, b) {
                (RewriteRule::Prop { pred: p, args: xs, rhs: r1 }, RewriteRule::Prop { pred: q, args: ys, rhs: r2 }) => {
                    p == q && xs == ys && r1.alpha_eq(r2)
                }
                _ => a == b,
            })
            && self.axioms.len() == other.axioms.len()
            && self.axioms.iter().zip(&other.axioms).all(|(a, b)| a.alpha_eq(b))
    }
}

/// `α1: A1, …, αk: Ak ⊢ B` with pairwise distinct proof variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequent {
    pub hyps: Vec<(PVar, Formula)>,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(hyps: Vec<(PVar, Formula)>, goal: Formula) -> Result<Self> {
        for (i, (a, _)) in hyps.iter().enumerate() {
            if hyps[..i].iter().any(|(b, _)| b == a) {
                return Err(Error::Scope(format!("proof variable `{a}` declared twice")));
            }
        }
        Ok(Sequent { hyps, goal })
    }

    pub fn free_vars(&self) -> BTreeSet<TermVar> {
        let mut fv = self.goal.free_vars();
        for (_, h) in &self.hyps {
            fv.extend(h.free_vars());
        }
        fv
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// `A1 → … → Ak → B`.
    pub fn folded(&self) -> Formula {
        self.hyps.iter().rev().fold(self.goal.clone(), |acc, (_, h)| Formula::imp(h.clone(), acc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> TermVar {
        TermVar::named("x", "i")
    }
    fn y() -> TermVar {
        TermVar::named("y", "i")
    }

    #[test]
    fn free_vars_of_top_is_empty() {
        assert!(Formula::Top.free_vars().is_empty());
    }

    #[test]
    fn binder_removes_its_variable() {
        let f = Formula::forall(x(), Formula::atom("P", vec![Term::var(&x()), Term::var(&y())]));
        assert_eq!(f.free_vars(), [y()].into_iter().collect());
    }

    #[test]
    fn free_and_bound_occurrences_are_distinguished() {
        let f = Formula::and(
            Formula::atom("P", vec![Term::var(&x())]),
            Formula::exists(x(), Formula::atom("Q", vec![Term::var(&x())])),
        );
        assert_eq!(f.free_vars(), [x()].into_iter().collect());
    }

    #[test]
    fn alpha_equality_ignores_bound_names_only() {
        let px = |v: &TermVar| Formula::atom("P", vec![Term::var(v)]);
        assert!(Formula::forall(x(), px(&x())).alpha_eq(&Formula::forall(y(), px(&y()))));
        assert!(!Formula::forall(x(), px(&y())).alpha_eq(&Formula::forall(y(), px(&y()))));
        assert!(!px(&x()).alpha_eq(&px(&y())));
    }

    #[test]
    fn signature_rejects_shared_names_and_unknown_sorts() {
        let mut sig = Signature::new();
        sig.add_sort("i").unwrap();
        sig.add_fun("f", &["i"], "i").unwrap();
        assert!(sig.add_pred("f", &["i"]).is_err());
        assert!(sig.add_pred("P", &["nat"]).is_err());
    }

    #[test]
    fn sequent_rejects_duplicate_hypothesis_names() {
        let a = PVar::named("a");
        assert!(Sequent::new(vec![(a, Formula::Top), (a, Formula::Bot)], Formula::Top).is_err());
    }
}
