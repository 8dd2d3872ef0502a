use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{fresh_index, subst_term, PVar, Term, TermVar};

/// Untyped proof-terms. Each constructor corresponds to one natural
/// deduction rule; ill-typed terms are legitimate values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProofTerm {
    Axiom(PVar),
    Lam(PVar, Box<ProofTerm>),
    App(Box<ProofTerm>, Box<ProofTerm>),
    Pair(Box<ProofTerm>, Box<ProofTerm>),
    Fst(Box<ProofTerm>),
    Snd(Box<ProofTerm>),
    InjL(Box<ProofTerm>),
    InjR(Box<ProofTerm>),
    /// `case p of (α. q) (β. r)`
    Case(Box<ProofTerm>, PVar, Box<ProofTerm>, PVar, Box<ProofTerm>),
    TopI,
    BotE(Box<ProofTerm>),
    TLam(TermVar, Box<ProofTerm>),
    TApp(Box<ProofTerm>, Term),
    Witness(Term, Box<ProofTerm>),
    /// `exelim p (x. α. q)`; binder order is fixed to (term, proof).
    ExElim(Box<ProofTerm>, TermVar, PVar, Box<ProofTerm>),
}

use ProofTerm::*;

pub fn var(a: &str) -> ProofTerm {
    Axiom(PVar::named(a))
}

pub fn lam(a: &str, p: ProofTerm) -> ProofTerm {
    Lam(PVar::named(a), Box::new(p))
}

pub fn app(p: ProofTerm, q: ProofTerm) -> ProofTerm {
    App(Box::new(p), Box::new(q))
}

pub fn pair(p: ProofTerm, q: ProofTerm) -> ProofTerm {
    Pair(Box::new(p), Box::new(q))
}

pub fn fst(p: ProofTerm) -> ProofTerm {
    Fst(Box::new(p))
}

pub fn snd(p: ProofTerm) -> ProofTerm {
    Snd(Box::new(p))
}

pub fn inl(p: ProofTerm) -> ProofTerm {
    InjL(Box::new(p))
}

pub fn inr(p: ProofTerm) -> ProofTerm {
    InjR(Box::new(p))
}

pub fn case(p: ProofTerm, a: &str, q: ProofTerm, b: &str, r: ProofTerm) -> ProofTerm {
    Case(Box::new(p), PVar::named(a), Box::new(q), PVar::named(b), Box::new(r))
}

pub fn bot_e(p: ProofTerm) -> ProofTerm {
    BotE(Box::new(p))
}

pub fn tlam(x: TermVar, p: ProofTerm) -> ProofTerm {
    TLam(x, Box::new(p))
}

pub fn tapp(p: ProofTerm, t: Term) -> ProofTerm {
    TApp(Box::new(p), t)
}

pub fn witness(t: Term, p: ProofTerm) -> ProofTerm {
    Witness(t, Box::new(p))
}

pub fn exelim(p: ProofTerm, x: TermVar, a: &str, q: ProofTerm) -> ProofTerm {
    ExElim(Box::new(p), x, PVar::named(a), Box::new(q))
}

/// `(λα. α α) (λα. α α)`
pub fn omega() -> ProofTerm {
    let half = lam("a", app(var("a"), var("a")));
    app(half.clone(), half)
}

impl ProofTerm {
    /// Immediate proof-term children, left to right.
    pub fn children(&self) -> Vec<&ProofTerm> {
        match self {
            Axiom(_) | TopI => vec![],
            Lam(_, p) | Fst(p) | Snd(p) | InjL(p) | InjR(p) | BotE(p) | TLam(_, p) | TApp(p, _) | Witness(_, p) => {
                vec![p]
            }
            App(p, q) | Pair(p, q) | ExElim(p, _, _, q) => vec![p, q],
            Case(p, _, q, _, r) => vec![p, q, r],
        }
    }

    /// Rebuilds this node with child `i` replaced.
    pub fn with_child(&self, i: usize, c: ProofTerm) -> ProofTerm {
        let b = Box::new(c);
        match (self, i) {
            (Lam(a, _), 0) => Lam(*a, b),
            (Fst(_), 0) => Fst(b),
            (Snd(_), 0) => Snd(b),
            (InjL(_), 0) => InjL(b),
            (InjR(_), 0) => InjR(b),
            (BotE(_), 0) => BotE(b),
            (TLam(x, _), 0) => TLam(x.clone(), b),
            (TApp(_, t), 0) => TApp(b, t.clone()),
            (Witness(t, _), 0) => Witness(t.clone(), b),
            (App(_, q), 0) => App(b, q.clone()),
            (App(p, _), 1) => App(p.clone(), b),
            (Pair(_, q), 0) => Pair(b, q.clone()),
            (Pair(p, _), 1) => Pair(p.clone(), b),
            (ExElim(_, x, a, q), 0) => ExElim(b, x.clone(), *a, q.clone()),
            (ExElim(p, x, a, _), 1) => ExElim(p.clone(), x.clone(), *a, b),
            (Case(_, a, q, c, r), 0) => Case(b, *a, q.clone(), *c, r.clone()),
            (Case(p, a, _, c, r), 1) => Case(p.clone(), *a, b, *c, r.clone()),
            (Case(p, a, q, c, _), 2) => Case(p.clone(), *a, q.clone(), *c, b),
            _ => panic!("child index {i} out of range"),
        }
    }

    /// Number of proof-term constructors plus the sizes of embedded terms.
    pub fn size(&self) -> usize {
        let own = match self {
            TApp(_, t) | Witness(t, _) => t.size(),
            _ => 0,
        };
        1 + own + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn is_introduction(&self) -> bool {
        matches!(self, Lam(..) | Pair(..) | InjL(_) | InjR(_) | TopI | TLam(..) | Witness(..))
    }

    pub fn is_elimination(&self) -> bool {
        matches!(self, App(..) | Fst(_) | Snd(_) | Case(..) | BotE(_) | TApp(..) | ExElim(..))
    }

    pub fn free_pvars(&self) -> BTreeSet<PVar> {
        let mut out = BTreeSet::new();
        self.collect_free_pvars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_pvars(&self, bound: &mut Vec<PVar>, out: &mut BTreeSet<PVar>) {
        let under = |a: &PVar, p: &ProofTerm, bound: &mut Vec<PVar>, out: &mut BTreeSet<PVar>| {
            bound.push(*a);
            p.collect_free_pvars(bound, out);
            bound.pop();
        };
        match self {
            Axiom(a) => {
                if !bound.contains(a) {
                    out.insert(*a);
                }
            }
            Lam(a, p) => under(a, p, bound, out),
            Case(p, a, q, b, r) => {
                p.collect_free_pvars(bound, out);
                under(a, q, bound, out);
                under(b, r, bound, out);
            }
            ExElim(p, _, a, q) => {
                p.collect_free_pvars(bound, out);
                under(a, q, bound, out);
            }
            _ => self.children().into_iter().for_each(|c| c.collect_free_pvars(bound, out)),
        }
    }

    pub fn has_free_pvar(&self, a: PVar) -> bool {
        self.free_pvars().contains(&a)
    }

    pub fn free_tvars(&self) -> BTreeSet<TermVar> {
        let mut out = BTreeSet::new();
        self.collect_free_tvars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_tvars(&self, bound: &mut Vec<TermVar>, out: &mut BTreeSet<TermVar>) {
        let term = |t: &Term, bound: &Vec<TermVar>, out: &mut BTreeSet<TermVar>| {
            out.extend(t.free_vars().into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            TLam(x, p) => {
                bound.push(x.clone());
                p.collect_free_tvars(bound, out);
                bound.pop();
            }
            ExElim(p, x, _, q) => {
                p.collect_free_tvars(bound, out);
                bound.push(x.clone());
                q.collect_free_tvars(bound, out);
                bound.pop();
            }
            TApp(p, t) => {
                p.collect_free_tvars(bound, out);
                term(t, bound, out);
            }
            Witness(t, p) => {
                term(t, bound, out);
                p.collect_free_tvars(bound, out);
            }
            _ => self.children().into_iter().for_each(|c| c.collect_free_tvars(bound, out)),
        }
    }

    /// Largest proof-variable index occurring anywhere, binders included.
    pub fn max_pvar(&self) -> Option<u32> {
        let own = match self {
            Axiom(a) | Lam(a, _) | ExElim(_, _, a, _) => Some(a.0),
            Case(_, a, _, b, _) => Some(a.0.max(b.0)),
            _ => None,
        };
        self.children().into_iter().filter_map(ProofTerm::max_pvar).chain(own).max()
    }

    /// Largest term-variable index occurring anywhere, binders included.
    pub fn max_tvar(&self) -> Option<u32> {
        let own = match self {
            TLam(x, _) | ExElim(_, x, _, _) => Some(x.id),
            TApp(_, t) | Witness(t, _) => t.max_var_index(),
            _ => None,
        };
        self.children().into_iter().filter_map(ProofTerm::max_tvar).chain(own).max()
    }
}

/// Simultaneous capture-avoiding substitution of proofs for proof variables
/// and terms for term variables.
///
/// Environments are searched front to back. Every binder pushes an entry for
/// itself (the identity, or a renaming when capture would occur), so inner
/// binders shadow outer entries. A proof binder `α` is renamed when some
/// entry `(v, r)` with `v ≠ α` has `α` free in `r`; a term binder `x` is
/// renamed when `x` is free in a term entry `(v, r)` with `v ≠ x` or in any
/// proof entry. The fresh index is `1 +` the maximum over the binder, every
/// variable occurring in the body, and every entry (key and replacement).
/// The tree encoding's `PSubst`/`TSubst` follow exactly this discipline.
pub fn subst(p: &ProofTerm, penv: &[(PVar, ProofTerm)], tenv: &[(TermVar, Term)]) -> ProofTerm {
    match p {
        Axiom(a) => penv.iter().find(|(v, _)| v == a).map_or_else(|| p.clone(), |(_, r)| r.clone()),
        TopI => TopI,
        Lam(a, body) => {
            let (a2, body2) = under_pbinder(*a, body, penv, tenv);
            Lam(a2, Box::new(body2))
        }
        App(x, y) => app(subst(x, penv, tenv), subst(y, penv, tenv)),
        Pair(x, y) => pair(subst(x, penv, tenv), subst(y, penv, tenv)),
        Fst(x) => fst(subst(x, penv, tenv)),
        Snd(x) => snd(subst(x, penv, tenv)),
        InjL(x) => inl(subst(x, penv, tenv)),
        InjR(x) => inr(subst(x, penv, tenv)),
        BotE(x) => bot_e(subst(x, penv, tenv)),
        Case(s, a, q, b, r) => {
            let s2 = subst(s, penv, tenv);
            let (a2, q2) = under_pbinder(*a, q, penv, tenv);
            let (b2, r2) = under_pbinder(*b, r, penv, tenv);
            Case(Box::new(s2), a2, Box::new(q2), b2, Box::new(r2))
        }
        TLam(x, body) => {
            let (x2, tenv2) = enter_tbinder(x, body, penv, tenv);
            TLam(x2, Box::new(subst(body, penv, &tenv2)))
        }
        TApp(x, t) => tapp(subst(x, penv, tenv), subst_term(t, tenv)),
        Witness(t, x) => witness(subst_term(t, tenv), subst(x, penv, tenv)),
        ExElim(s, x, a, q) => {
            let s2 = subst(s, penv, tenv);
            let (x2, tenv2) = enter_tbinder(x, q, penv, tenv);
            let (a2, q2) = under_pbinder(*a, q, penv, &tenv2);
            ExElim(Box::new(s2), x2, a2, Box::new(q2))
        }
    }
}

fn under_pbinder(
    a: PVar,
    body: &ProofTerm,
    penv: &[(PVar, ProofTerm)],
    tenv: &[(TermVar, Term)],
) -> (PVar, ProofTerm) {
    let capture = penv.iter().any(|(v, r)| *v != a && r.has_free_pvar(a));
    let a2 = if capture {
        PVar(fresh_index(
            [Some(a.0), body.max_pvar()]
                .into_iter()
                .chain(penv.iter().flat_map(|(v, r)| [Some(v.0), r.max_pvar()])),
        ))
    } else {
        a
    };
    let mut penv2 = Vec::with_capacity(penv.len() + 1);
    penv2.push((a, Axiom(a2)));
    penv2.extend_from_slice(penv);
    (a2, subst(body, &penv2, tenv))
}

fn enter_tbinder(
    x: &TermVar,
    body: &ProofTerm,
    penv: &[(PVar, ProofTerm)],
    tenv: &[(TermVar, Term)],
) -> (TermVar, Vec<(TermVar, Term)>) {
    let capture = tenv.iter().any(|(v, r)| v != x && r.has_var(x))
        || penv.iter().any(|(_, r)| r.free_tvars().contains(x));
    let x2 = if capture {
        TermVar::new(
            fresh_index(
                [Some(x.id), body.max_tvar()]
                    .into_iter()
                    .chain(tenv.iter().flat_map(|(v, r)| [Some(v.id), r.max_var_index()]))
                    .chain(penv.iter().map(|(_, r)| r.max_tvar())),
            ),
            x.sort.clone(),
        )
    } else {
        x.clone()
    };
    let mut tenv2 = Vec::with_capacity(tenv.len() + 1);
    tenv2.push((x.clone(), Term::Var(x2.clone())));
    tenv2.extend_from_slice(tenv);
    (x2, tenv2)
}

/// `π[α ← ρ]`
pub fn subst_proof(p: &ProofTerm, a: PVar, r: &ProofTerm) -> ProofTerm {
    subst(p, &[(a, r.clone())], &[])
}

/// `π[x := t]`
pub fn subst_term_in_proof(p: &ProofTerm, x: &TermVar, t: &Term) -> ProofTerm {
    subst(p, &[], &[(x.clone(), t.clone())])
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::print_proof(self))
    }
}

impl fmt::Debug for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
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
    fn substitutes_every_free_occurrence() {
        let r = subst_proof(&app(var("a"), var("a")), PVar::named("a"), &TopI);
        assert_eq!(r, app(TopI, TopI));
    }

    #[test]
    fn bound_occurrence_is_untouched() {
        let p = lam("a", var("a"));
        assert_eq!(subst_proof(&p, PVar::named("a"), &TopI), p);
    }

    #[test]
    fn proof_binder_is_renamed_on_capture() {
        // (λb. a)[a ← b]: the oracle picks the first index above every name in sight.
        let r = subst_proof(&lam("b", var("a")), PVar::named("a"), &var("b"));
        let fresh = PVar::named("b").0 + 1;
        assert_eq!(r, Lam(PVar(fresh), Box::new(var("b"))));
    }

    #[test]
    fn term_substitution_reaches_embedded_terms() {
        let r = subst_term_in_proof(&witness(Term::var(&x()), var("a")), &x(), &Term::constant("c"));
        assert_eq!(r, witness(Term::constant("c"), var("a")));
    }

    #[test]
    fn term_binder_blocks_substitution() {
        let p = tlam(x(), var("a"));
        assert_eq!(subst_term_in_proof(&p, &x(), &Term::constant("c")), p);
    }

    #[test]
    fn term_binder_is_renamed_on_capture() {
        // (λy. ⟨x, a⟩)[x := f(y)]
        let p = tlam(y(), witness(Term::var(&x()), var("a")));
        let fy = Term::app("f", vec![Term::var(&y())]);
        let r = subst_term_in_proof(&p, &x(), &fy);
        let y2 = TermVar::new(y().id + 1, y().sort);
        assert_eq!(r, tlam(y2, witness(fy, var("a"))));
    }

    #[test]
    fn proof_substitution_avoids_term_capture() {
        // (λx. a)[a ← ⟨x, TopI⟩] must not capture x.
        let p = tlam(x(), var("a"));
        let r = subst_proof(&p, PVar::named("a"), &witness(Term::var(&x()), TopI));
        match r {
            TLam(x2, body) => {
                assert_ne!(x2, x());
                assert_eq!(*body, witness(Term::var(&x()), TopI));
            }
            other => panic!("{other}"),
        }
    }
}
