//! Bidirectional checker for natural deduction modulo a congruence.
//!
//! Introductions are checked against a goal; variables and eliminations
//! have their formula inferred and are then compared with the goal modulo
//! the congruence. A few cut shapes whose formulas cannot be reconstructed
//! locally (an injection or witness pair scrutinized directly with no
//! annotation) are handled by inferring the injected proof, leaving the
//! dead branch's hypothesis untyped.

use std::collections::BTreeSet;
use std::fmt;

use super::congruence::{congruent, normal_form};
use super::term::{subst_term_in_proof, ProofTerm, ProofTerm::*};
use crate::error::{Error, Result};
use crate::syntax::{subst_formula, Formula, PVar, Sequent, Term, TermVar, Theory};

pub const DEFAULT_FUEL: usize = 10_000;

/// A natural-deduction derivation tree recovered from a proof-term.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub rule: &'static str,
    pub conclusion: Formula,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    fn leaf(rule: &'static str, conclusion: Formula) -> Self {
        Derivation { rule, conclusion, premises: Vec::new() }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(f, "{:indent$}{}  {}", "", self.rule, self.conclusion, indent = depth * 2)?;
        self.premises.iter().try_for_each(|p| p.write(f, depth + 1))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

struct Checker<'t> {
    theory: &'t Theory,
    fuel: usize,
    ctx: Vec<(PVar, Option<Formula>)>,
}

fn node(p: &ProofTerm) -> String {
    let s = p.to_string();
    if s.chars().count() > 80 {
        let cut: String = s.chars().take(77).collect();
        format!("{cut}...")
    } else {
        s
    }
}

fn mismatch(p: &ProofTerm, expected: impl fmt::Display, actual: impl fmt::Display) -> Error {
    Error::RuleMismatch { node: node(p), expected: expected.to_string(), actual: actual.to_string() }
}

impl<'t> Checker<'t> {
    fn view(&self, a: &Formula) -> Result<Formula> {
        normal_form(a, &self.theory.rules, self.fuel)
    }

    fn same(&self, a: &Formula, b: &Formula) -> Result<bool> {
        congruent(a, b, &self.theory.rules, self.fuel)
    }

    fn with_hyp<T>(&mut self, a: PVar, f: Option<Formula>, k: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.ctx.push((a, f));
        let r = k(self);
        self.ctx.pop();
        r
    }

    fn ctx_free_vars(&self) -> BTreeSet<TermVar> {
        self.ctx.iter().filter_map(|(_, f)| f.as_ref()).flat_map(Formula::free_vars).collect()
    }

    fn sort_check(&self, t: &Term, x: &TermVar) -> Result<()> {
        let s = self.theory.signature.sort_of(t)?;
        if s != x.sort {
            return Err(Error::sort(t.to_string(), format!("has sort {s}, expected {}", x.sort)));
        }
        Ok(())
    }

    fn eigen(&self, p: &ProofTerm, x: &TermVar, extra: &[&Formula]) -> Result<()> {
        let mut fv = self.ctx_free_vars();
        for f in extra {
            fv.extend(f.free_vars());
        }
        if fv.contains(x) {
            return Err(Error::Eigenvariable(format!("`{x}` occurs free in an open formula at {}", node(p))));
        }
        Ok(())
    }

    fn check(&mut self, p: &ProofTerm, goal: &Formula) -> Result<Derivation> {
        let d = match p {
            Lam(a, body) => {
                let Formula::Imp(x, y) = self.view(goal)? else { return Err(mismatch(p, goal, "an implication")) };
                let d = self.with_hyp(*a, Some((*x).clone()), |c| c.check(body, &y))?;
                Derivation { rule: "imp-intro", conclusion: goal.clone(), premises: vec![d] }
            }
            Pair(l, r) => {
                let Formula::And(x, y) = self.view(goal)? else { return Err(mismatch(p, goal, "a conjunction")) };
                let dl = self.check(l, &x)?;
                let dr = self.check(r, &y)?;
                Derivation { rule: "and-intro", conclusion: goal.clone(), premises: vec![dl, dr] }
            }
            InjL(q) | InjR(q) => {
                let Formula::Or(x, y) = self.view(goal)? else { return Err(mismatch(p, goal, "a disjunction")) };
                let (side, rule) = if matches!(p, InjL(_)) { (x, "or-intro-left") } else { (y, "or-intro-right") };
                let d = self.check(q, &side)?;
                Derivation { rule, conclusion: goal.clone(), premises: vec![d] }
            }
            TopI => {
                if self.view(goal)? != Formula::Top {
                    return Err(mismatch(p, goal, "top"));
                }
                Derivation::leaf("top-intro", goal.clone())
            }
            BotE(q) => {
                let d = self.check(q, &Formula::Bot)?;
                Derivation { rule: "bot-elim", conclusion: goal.clone(), premises: vec![d] }
            }
            TLam(x, body) => {
                let g = self.view(goal)?;
                let Formula::Forall(y, a) = &g else { return Err(mismatch(p, goal, "a universal formula")) };
                if x.sort != y.sort {
                    return Err(Error::sort(x.name(), format!("binder of sort {}, expected {}", x.sort, y.sort)));
                }
                self.eigen(p, x, &[&g])?;
                let inst = subst_formula(a, &[(y.clone(), Term::Var(x.clone()))]);
                let d = self.check(body, &inst)?;
                Derivation { rule: "forall-intro", conclusion: goal.clone(), premises: vec![d] }
            }
            Witness(t, q) => {
                let Formula::Exists(y, a) = self.view(goal)? else {
                    return Err(mismatch(p, goal, "an existential formula"));
                };
                self.sort_check(t, &y)?;
                let d = self.check(q, &subst_formula(&a, &[(y.clone(), t.clone())]))?;
                Derivation { rule: "exists-intro", conclusion: goal.clone(), premises: vec![d] }
            }
            Case(s, a, l, b, r) => {
                let (ds, ha, hb) = self.scrutinize_or(s)?;
                let dl = self.with_hyp(*a, ha, |c| c.check(l, goal))?;
                let dr = self.with_hyp(*b, hb, |c| c.check(r, goal))?;
                Derivation { rule: "or-elim", conclusion: goal.clone(), premises: vec![ds, dl, dr] }
            }
            ExElim(s, x, a, q) if matches!(**s, Witness(..)) => {
                let (ds, hyp, q) = self.open_witness(s, x, q)?;
                let dq = self.with_hyp(*a, Some(hyp), |c| c.check(&q, goal))?;
                Derivation { rule: "exists-elim", conclusion: goal.clone(), premises: vec![ds, dq] }
            }
            ExElim(s, x, a, q) => {
                let (ds, sf) = self.infer(s)?;
                let ex = self.view(&sf)?;
                let Formula::Exists(y, body) = &ex else { return Err(mismatch(s, "an existential formula", sf)) };
                if x.sort != y.sort {
                    return Err(Error::sort(x.name(), format!("binder of sort {}, expected {}", x.sort, y.sort)));
                }
                self.eigen(p, x, &[goal, &ex])?;
                let hyp = subst_formula(body, &[(y.clone(), Term::Var(x.clone()))]);
                let dq = self.with_hyp(*a, Some(hyp), |c| c.check(q, goal))?;
                Derivation { rule: "exists-elim", conclusion: goal.clone(), premises: vec![ds, dq] }
            }
            App(f, arg) if matches!(**f, Lam(..)) => {
                let (da, af) = self.infer(arg)?;
                let df = self.check(f, &Formula::imp(af, goal.clone()))?;
                Derivation { rule: "imp-elim", conclusion: goal.clone(), premises: vec![df, da] }
            }
            _ => {
                let (d, found) = self.infer(p)?;
                if !self.same(&found, goal)? {
                    return Err(mismatch(p, goal, found));
                }
                d
            }
        };
        Ok(d)
    }

    /// A witness pair scrutinized directly: the hypothesis is typed at the
    /// witness instance and the body is read with the witness in place of
    /// the eigenvariable.
    fn open_witness(&mut self, s: &ProofTerm, x: &TermVar, q: &ProofTerm) -> Result<(Derivation, Formula, ProofTerm)> {
        let Witness(t, inner) = s else { unreachable!() };
        self.sort_check(t, x)?;
        let (d, b) = self.infer(inner)?;
        Ok((d, b, subst_term_in_proof(q, x, t)))
    }

    /// Infers the scrutinee of a case. An injection is accepted directly,
    /// with the unused side's hypothesis left untyped.
    fn scrutinize_or(&mut self, s: &ProofTerm) -> Result<(Derivation, Option<Formula>, Option<Formula>)> {
        match s {
            InjL(q) => {
                let (d, a) = self.infer(q)?;
                Ok((d, Some(a), None))
            }
            InjR(q) => {
                let (d, b) = self.infer(q)?;
                Ok((d, None, Some(b)))
            }
            _ => {
                let (d, f) = self.infer(s)?;
                let Formula::Or(a, b) = self.view(&f)? else { return Err(mismatch(s, "a disjunction", f)) };
                Ok((d, Some(*a), Some(*b)))
            }
        }
    }

    fn infer(&mut self, p: &ProofTerm) -> Result<(Derivation, Formula)> {
        let (d, f) = match p {
            Axiom(a) => match self.ctx.iter().rev().find(|(b, _)| b == a) {
                None => return Err(Error::Scope(format!("proof variable `{a}` is not bound"))),
                Some((_, None)) => {
                    return Err(Error::CannotInfer(format!("`{a}`, bound in a branch that is never taken")))
                }
                Some((_, Some(f))) => {
                    let f = f.clone();
                    (Derivation::leaf("axiom", f.clone()), f)
                }
            },
            App(f, arg) => {
                if let Lam(a, body) = &**f {
                    let (da, af) = self.infer(arg)?;
                    let (db, bf) = self.with_hyp(*a, Some(af.clone()), |c| c.infer(body))?;
                    let imp = Formula::imp(af, bf.clone());
                    let df = Derivation { rule: "imp-intro", conclusion: imp, premises: vec![db] };
                    (Derivation { rule: "imp-elim", conclusion: bf.clone(), premises: vec![df, da] }, bf)
                } else {
                    let (df, ff) = self.infer(f)?;
                    let Formula::Imp(a, b) = self.view(&ff)? else { return Err(mismatch(f, "an implication", ff)) };
                    let da = self.check(arg, &a)?;
                    (Derivation { rule: "imp-elim", conclusion: (*b).clone(), premises: vec![df, da] }, *b)
                }
            }
            Fst(q) | Snd(q) => {
                let (dq, qf) = self.infer(q)?;
                let Formula::And(a, b) = self.view(&qf)? else { return Err(mismatch(q, "a conjunction", qf)) };
                let (res, rule) = if matches!(p, Fst(_)) { (*a, "and-elim-left") } else { (*b, "and-elim-right") };
                (Derivation { rule, conclusion: res.clone(), premises: vec![dq] }, res)
            }
            TApp(q, t) => {
                let (dq, qf) = self.infer(q)?;
                let Formula::Forall(y, a) = self.view(&qf)? else {
                    return Err(mismatch(q, "a universal formula", qf));
                };
                self.sort_check(t, &y)?;
                let res = subst_formula(&a, &[(y, t.clone())]);
                (Derivation { rule: "forall-elim", conclusion: res.clone(), premises: vec![dq] }, res)
            }
            Pair(l, r) => {
                let (dl, lf) = self.infer(l)?;
                let (dr, rf) = self.infer(r)?;
                let res = Formula::and(lf, rf);
                (Derivation { rule: "and-intro", conclusion: res.clone(), premises: vec![dl, dr] }, res)
            }
            TopI => (Derivation::leaf("top-intro", Formula::Top), Formula::Top),
            TLam(x, body) => {
                self.eigen(p, x, &[])?;
                let (db, bf) = self.infer(body)?;
                let res = Formula::forall(x.clone(), bf);
                (Derivation { rule: "forall-intro", conclusion: res.clone(), premises: vec![db] }, res)
            }
            Case(s, a, l, b, r) => {
                let (ds, ha, hb) = self.scrutinize_or(s)?;
                let (dl, dr, res) = if ha.is_some() {
                    let (dl, lf) = self.with_hyp(*a, ha, |c| c.infer(l))?;
                    let dr = self.with_hyp(*b, hb, |c| c.check(r, &lf))?;
                    (dl, dr, lf)
                } else {
                    let (dr, rf) = self.with_hyp(*b, hb, |c| c.infer(r))?;
                    let dl = self.with_hyp(*a, ha, |c| c.check(l, &rf))?;
                    (dl, dr, rf)
                };
                (Derivation { rule: "or-elim", conclusion: res.clone(), premises: vec![ds, dl, dr] }, res)
            }
            ExElim(s, x, a, q) if matches!(**s, Witness(..)) => {
                let (ds, hyp, q) = self.open_witness(s, x, q)?;
                let (dq, qf) = self.with_hyp(*a, Some(hyp), |c| c.infer(&q))?;
                (Derivation { rule: "exists-elim", conclusion: qf.clone(), premises: vec![ds, dq] }, qf)
            }
            ExElim(s, x, a, q) => {
                let (ds, sf) = self.infer(s)?;
                let ex = self.view(&sf)?;
                let Formula::Exists(y, body) = &ex else { return Err(mismatch(s, "an existential formula", sf)) };
                if x.sort != y.sort {
                    return Err(Error::sort(x.name(), format!("binder of sort {}, expected {}", x.sort, y.sort)));
                }
                self.eigen(p, x, &[&ex])?;
                let hyp = subst_formula(body, &[(y.clone(), Term::Var(x.clone()))]);
                let (dq, qf) = self.with_hyp(*a, Some(hyp), |c| c.infer(q))?;
                if qf.free_vars().contains(x) {
                    return Err(Error::Eigenvariable(format!("`{x}` escapes into the conclusion at {}", node(p))));
                }
                (Derivation { rule: "exists-elim", conclusion: qf.clone(), premises: vec![ds, dq] }, qf)
            }
            Lam(..) | InjL(_) | InjR(_) | Witness(..) | BotE(_) => return Err(Error::CannotInfer(node(p))),
        };
        Ok((d, f))
    }
}

/// Checks `π` against `seq` in `theory`, matching formulas modulo the
/// theory's congruence. Returns the recovered derivation.
pub fn check(theory: &Theory, seq: &Sequent, p: &ProofTerm) -> Result<Derivation> {
    check_with_fuel(theory, seq, p, DEFAULT_FUEL)
}

pub fn check_with_fuel(theory: &Theory, seq: &Sequent, p: &ProofTerm, fuel: usize) -> Result<Derivation> {
    let mut c = Checker { theory, fuel, ctx: seq.hyps.iter().map(|(a, f)| (*a, Some(f.clone()))).collect() };
    for a in p.free_pvars() {
        if !seq.hyps.iter().any(|(b, _)| *b == a) {
            return Err(Error::Scope(format!("proof variable `{a}` is not declared in the context")));
        }
    }
    c.check(p, &seq.goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::term::*;
    use crate::syntax::{parse_formula, parse_theory};

    fn theory() -> Theory {
        parse_theory(
            "(theory (sort nat) (fun 0 () nat) (fun + (nat nat) nat) (pred P (nat)) (pred Q (nat))
             (rule term (+ x 0) x))",
        )
        .unwrap()
    }

    fn seq(th: &Theory, goal: &str) -> Sequent {
        Sequent::new(vec![], parse_formula(&th.signature, goal).unwrap()).unwrap()
    }

    #[test]
    fn identity_is_accepted() {
        let th = theory();
        let d = check(&th, &seq(&th, "(imp (P 0) (P 0))"), &lam("a", var("a"))).unwrap();
        assert_eq!(d.rule, "imp-intro");
        assert_eq!(d.size(), 2);
    }

    #[test]
    fn identity_modulo_congruence() {
        let th = theory();
        assert!(check(&th, &seq(&th, "(imp (P (+ y 0)) (P y))"), &lam("a", var("a"))).is_ok());
        let bare = Theory { rules: vec![], ..th.clone() };
        let err = check(&bare, &seq(&th, "(imp (P (+ y 0)) (P y))"), &lam("a", var("a"))).unwrap_err();
        assert!(matches!(err, Error::RuleMismatch { .. }));
    }

    #[test]
    fn unrelated_formulas_mismatch() {
        let th = theory();
        let err = check(&th, &seq(&th, "(imp (P 0) (Q 0))"), &lam("a", var("a"))).unwrap_err();
        assert!(matches!(err, Error::RuleMismatch { .. }));
    }

    #[test]
    fn undeclared_variable_is_a_scope_error() {
        let th = theory();
        assert!(matches!(check(&th, &seq(&th, "top"), &var("a")), Err(Error::Scope(_))));
    }

    #[test]
    fn eigenvariable_must_be_fresh() {
        let th = theory();
        let x = TermVar::named("x", "nat");
        let hyp = parse_formula(&th.signature, "(P x)").unwrap();
        let goal = parse_formula(&th.signature, "(forall (y nat) (P y))").unwrap();
        let s = Sequent::new(vec![(PVar::named("a"), hyp)], goal).unwrap();
        let err = check(&th, &s, &tlam(x, var("a"))).unwrap_err();
        assert!(matches!(err, Error::Eigenvariable(_)));
    }

    #[test]
    fn injected_case_keeps_dead_branch_untyped() {
        let th = theory();
        let p = case(inl(TopI), "a", var("a"), "b", TopI);
        assert!(check(&th, &seq(&th, "top"), &p).is_ok());
        let bad = case(inl(TopI), "a", var("a"), "b", var("b"));
        assert!(check(&th, &seq(&th, "top"), &bad).is_err());
    }

    #[test]
    fn witness_pair_types_its_body_at_the_witness() {
        let th = theory();
        let x = TermVar::named("x", "nat");
        let zero = Term::constant("0");
        let hyp = parse_formula(&th.signature, "(P 0)").unwrap();
        let s = Sequent::new(vec![(PVar::named("h"), hyp)], parse_formula(&th.signature, "(P 0)").unwrap()).unwrap();
        let p = exelim(witness(zero.clone(), var("h")), x.clone(), "a", var("a"));
        assert_eq!(check(&th, &s, &p).unwrap().rule, "exists-elim");
        let wrong = exelim(witness(zero, TopI), x, "a", var("a"));
        assert!(check(&th, &s, &wrong).is_err());
    }
}
