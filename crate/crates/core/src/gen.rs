//! Seeded random formulas and random checked proofs.
//!
//! Generated proofs are built goal-directed and sprinkled with cuts of every
//! reduction shape, so they exercise both the checker and the reduction
//! engine. Hypotheses that cannot be discharged locally are added to the
//! sequent's context.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::proof::ProofTerm::{self, *};
use crate::syntax::{subst_formula, Formula, PVar, RewriteRule, Sequent, Sort, Term, TermVar, Theory};

/// Free variables per sort in generated formulas.
const POOL: u32 = 2;

pub struct Generator<'t> {
    theory: &'t Theory,
    rng: StdRng,
    next_tvar: u32,
    next_pvar: u32,
}

#[derive(Clone, Debug)]
pub struct GenProof {
    pub sequent: Sequent,
    pub term: ProofTerm,
}

struct State {
    globals: Vec<(PVar, Formula)>,
    eigen: BTreeSet<TermVar>,
}

impl<'t> Generator<'t> {
    pub fn new(theory: &'t Theory, seed: u64) -> Self {
        let nsorts = theory.signature.sorts().len() as u32;
        Generator { theory, rng: StdRng::seed_from_u64(seed), next_tvar: POOL * nsorts, next_pvar: 0 }
    }

    /// The free variables generated formulas draw on.
    pub fn pool(&self) -> Vec<TermVar> {
        let sorts = self.theory.signature.sorts();
        (0..POOL)
            .flat_map(|k| sorts.iter().enumerate().map(move |(i, s)| TermVar::new(k * sorts.len() as u32 + i as u32, s.clone())))
            .collect()
    }

    fn fresh_tvar(&mut self, sort: &Sort) -> TermVar {
        self.next_tvar += 1;
        TermVar::new(self.next_tvar, sort.clone())
    }

    fn fresh_pvar(&mut self) -> PVar {
        self.next_pvar += 1;
        PVar(self.next_pvar)
    }

    fn random_sort(&mut self) -> Option<Sort> {
        self.theory.signature.sorts().choose(&mut self.rng).cloned()
    }

    /// A term of sort `sort` over `vars`, at most `depth` applications deep.
    pub fn term(&mut self, sort: &Sort, depth: usize, vars: &[TermVar]) -> Option<Term> {
        let vs: Vec<&TermVar> = vars.iter().filter(|v| &v.sort == sort).collect();
        let funs: Vec<_> = self
            .theory
            .signature
            .funs()
            .iter()
            .filter(|f| &f.result == sort && (depth > 0 || f.args.is_empty()))
            .cloned()
            .collect();
        let pick_var = !vs.is_empty() && (funs.is_empty() || self.rng.gen_bool(0.5));
        if pick_var {
            return Some(Term::Var((*vs.choose(&mut self.rng).unwrap()).clone()));
        }
        let f = funs.choose(&mut self.rng)?.clone();
        let mut args = Vec::new();
        for s in &f.args {
            args.push(self.term(s, depth.saturating_sub(1), vars)?);
        }
        Some(Term::App(f.name, args))
    }

    fn atom(&mut self, vars: &[TermVar]) -> Formula {
        let preds = self.theory.signature.preds().to_vec();
        if let Some(p) = preds.choose(&mut self.rng) {
            let args: Option<Vec<Term>> = p.args.iter().map(|s| self.term(s, 2, vars)).collect();
            if let Some(args) = args {
                return Formula::Atom(p.name.clone(), args);
            }
        }
        if self.rng.gen_bool(0.5) {
            Formula::Top
        } else {
            Formula::Bot
        }
    }

    /// A formula of the given connective depth over the pool variables.
    pub fn formula(&mut self, depth: usize) -> Formula {
        let mut scope = self.pool();
        self.formula_in(depth, &mut scope)
    }

    fn formula_in(&mut self, depth: usize, scope: &mut Vec<TermVar>) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return match self.rng.gen_range(0..6) {
                0 => Formula::Top,
                1 => Formula::Bot,
                _ => self.atom(scope),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => Formula::and(self.formula_in(d, scope), self.formula_in(d, scope)),
            1 => Formula::or(self.formula_in(d, scope), self.formula_in(d, scope)),
            2 => Formula::imp(self.formula_in(d, scope), self.formula_in(d, scope)),
            k => {
                let Some(s) = self.random_sort() else { return Formula::Top };
                let x = self.fresh_tvar(&s);
                scope.push(x.clone());
                let body = self.formula_in(d, scope);
                scope.pop();
                if k == 3 {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                }
            }
        }
    }

    /// Rewrites some subterms backwards along collapsing term rules
    /// (`l → x`), giving a formula congruent to `a`.
    pub fn variant(&mut self, a: &Formula) -> Formula {
        let collapsing: Vec<(Term, TermVar)> = self
            .theory
            .rules
            .iter()
            .filter_map(|r| match r {
                RewriteRule::Term { lhs, rhs: Term::Var(x) } if lhs.free_vars().len() == 1 => Some((lhs.clone(), x.clone())),
                _ => None,
            })
            .collect();
        if collapsing.is_empty() {
            return a.clone();
        }
        self.map_terms(a, &mut |g, t| g.expand(t, &collapsing))
    }

    fn expand(&mut self, t: &Term, rules: &[(Term, TermVar)]) -> Term {
        let t = match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.expand(a, rules)).collect()),
        };
        let sort = self.theory.signature.sort_of(&t).ok();
        let fits: Vec<&(Term, TermVar)> = rules.iter().filter(|(_, x)| Some(&x.sort) == sort.as_ref()).collect();
        match fits.choose(&mut self.rng) {
            Some((lhs, x)) if self.rng.gen_bool(0.3) => crate::syntax::subst_term(lhs, &[(x.clone(), t)]),
            _ => t,
        }
    }

    fn map_terms(&mut self, a: &Formula, f: &mut dyn FnMut(&mut Self, &Term) -> Term) -> Formula {
        match a {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| f(self, t)).collect()),
            Formula::Top | Formula::Bot => a.clone(),
            Formula::And(x, y) => Formula::and(self.map_terms(x, f), self.map_terms(y, f)),
            Formula::Or(x, y) => Formula::or(self.map_terms(x, f), self.map_terms(y, f)),
            Formula::Imp(x, y) => Formula::imp(self.map_terms(x, f), self.map_terms(y, f)),
            Formula::Forall(x, b) => Formula::forall(x.clone(), self.map_terms(b, f)),
            Formula::Exists(x, b) => Formula::exists(x.clone(), self.map_terms(b, f)),
        }
    }

    /// A random goal of depth at most `depth` with a proof containing cuts.
    /// The proof is accepted by the checker against the returned sequent.
    pub fn proof(&mut self, depth: usize) -> GenProof {
        let goal = self.formula(depth);
        self.proof_of(goal, depth)
    }

    pub fn proof_of(&mut self, goal: Formula, depth: usize) -> GenProof {
        let mut st = State { globals: Vec::new(), eigen: BTreeSet::new() };
        let term = self.prove(&mut st, &[], &goal, depth).expect("closed goals always have a proof");
        let sequent = Sequent::new(st.globals, goal).expect("generated hypotheses are distinct");
        GenProof { sequent, term }
    }

    fn assume(&mut self, st: &mut State, goal: &Formula) -> Option<ProofTerm> {
        if goal.free_vars().iter().any(|x| st.eigen.contains(x)) {
            return None;
        }
        let h = self.fresh_pvar();
        let hyp = self.variant(goal);
        st.globals.push((h, hyp));
        Some(Axiom(h))
    }

    fn local(&self, ctx: &[(PVar, Formula)], goal: &Formula) -> Option<ProofTerm> {
        let rules = &self.theory.rules;
        ctx.iter()
            .rev()
            .find(|(_, f)| crate::proof::congruent(f, goal, rules, 1000).unwrap_or(false))
            .map(|(a, _)| Axiom(*a))
    }

    fn prove(&mut self, st: &mut State, ctx: &[(PVar, Formula)], goal: &Formula, depth: usize) -> Option<ProofTerm> {
        if depth > 0 && self.rng.gen_bool(0.3) {
            if let Some(p) = self.cut(st, ctx, goal, depth - 1) {
                return Some(p);
            }
        }
        if let Some(p) = self.local(ctx, goal) {
            if self.rng.gen_bool(0.7) {
                return Some(p);
            }
        }
        let d = depth.saturating_sub(1);
        let intro = match goal {
            Formula::Top => Some(TopI),
            Formula::Imp(x, y) => {
                let a = self.fresh_pvar();
                let mut inner = ctx.to_vec();
                inner.push((a, (**x).clone()));
                self.prove(st, &inner, y, d).map(|b| Lam(a, Box::new(b)))
            }
            Formula::And(x, y) => {
                let l = self.prove(st, ctx, x, d);
                let r = l.as_ref().and_then(|_| self.prove(st, ctx, y, d));
                l.zip(r).map(|(l, r)| Pair(Box::new(l), Box::new(r)))
            }
            Formula::Or(x, y) => {
                if self.rng.gen_bool(0.5) {
                    self.prove(st, ctx, x, d).map(|p| InjL(Box::new(p)))
                } else {
                    self.prove(st, ctx, y, d).map(|p| InjR(Box::new(p)))
                }
            }
            Formula::Forall(x, body) => {
                let y = self.fresh_tvar(&x.sort);
                st.eigen.insert(y.clone());
                let inst = subst_formula(body, &[(x.clone(), Term::Var(y.clone()))]);
                self.prove(st, ctx, &inst, d).map(|p| TLam(y, Box::new(p)))
            }
            Formula::Exists(x, body) => {
                let pool = self.pool();
                self.term(&x.sort, 2, &pool).and_then(|t| {
                    let inst = subst_formula(body, &[(x.clone(), t.clone())]);
                    self.prove(st, ctx, &inst, d).map(|p| Witness(t, Box::new(p)))
                })
            }
            Formula::Atom(..) | Formula::Bot => None,
        };
        intro.or_else(|| self.local(ctx, goal)).or_else(|| self.assume(st, goal))
    }

    /// A proof whose formula the checker can infer.
    fn prove_inferable(&mut self, st: &mut State, ctx: &[(PVar, Formula)], goal: &Formula, depth: usize) -> Option<ProofTerm> {
        match self.prove(st, ctx, goal, depth) {
            Some(p) if inferable(&p) => Some(p),
            _ => self.local(ctx, goal).or_else(|| self.assume(st, goal)),
        }
    }

    fn side_formula(&mut self) -> Formula {
        let d = self.rng.gen_range(0..3);
        self.formula(d)
    }

    fn cut(&mut self, st: &mut State, ctx: &[(PVar, Formula)], goal: &Formula, depth: usize) -> Option<ProofTerm> {
        let b = |p: ProofTerm| Box::new(p);
        match self.rng.gen_range(0..7) {
            0 => {
                let side = self.side_formula();
                let arg = self.prove_inferable(st, ctx, &side, depth)?;
                let a = self.fresh_pvar();
                let mut inner = ctx.to_vec();
                inner.push((a, side));
                let body = self.prove(st, &inner, goal, depth)?;
                Some(App(b(Lam(a, b(body))), b(arg)))
            }
            k @ (1 | 2) => {
                let side = self.side_formula();
                let main = self.prove_inferable(st, ctx, goal, depth)?;
                let other = self.prove_inferable(st, ctx, &side, depth)?;
                Some(if k == 1 { Fst(b(Pair(b(main), b(other)))) } else { Snd(b(Pair(b(other), b(main)))) })
            }
            k @ (3 | 4) => {
                let side = self.side_formula();
                let q = self.prove_inferable(st, ctx, &side, depth)?;
                let a = self.fresh_pvar();
                let dead = self.fresh_pvar();
                let mut inner = ctx.to_vec();
                inner.push((a, side));
                let live = self.prove(st, &inner, goal, depth)?;
                let other = self.prove(st, ctx, goal, depth)?;
                Some(if k == 3 {
                    Case(b(InjL(b(q))), a, b(live), dead, b(other))
                } else {
                    Case(b(InjR(b(q))), dead, b(other), a, b(live))
                })
            }
            5 => {
                let s = self.random_sort()?;
                let pool = self.pool();
                let t = self.term(&s, 2, &pool)?;
                let y = self.fresh_tvar(&s);
                st.eigen.insert(y.clone());
                let body = self.prove_inferable(st, ctx, goal, depth)?;
                Some(TApp(b(TLam(y, b(body))), t))
            }
            _ => {
                let s = self.random_sort()?;
                let pool = self.pool();
                let t = self.term(&s, 2, &pool)?;
                let x = self.fresh_tvar(&s);
                let mut scope = pool;
                scope.push(x.clone());
                let body = self.formula_in(1, &mut scope);
                let at_t = subst_formula(&body, &[(x.clone(), t.clone())]);
                let q = self.prove_inferable(st, ctx, &at_t, depth)?;
                let a = self.fresh_pvar();
                let mut inner = ctx.to_vec();
                inner.push((a, at_t));
                let rest = self.prove(st, &inner, goal, depth)?;
                // the body is read at the witness, so the eigenvariable is unused
                Some(ExElim(b(Witness(t, b(q))), x, a, b(rest)))
            }
        }
    }
}

/// Proof-terms whose formula the checker infers rather than checks.
pub fn inferable(p: &ProofTerm) -> bool {
    match p {
        Axiom(_) | TopI => true,
        App(f, arg) => match &**f {
            Lam(_, body) => inferable(body) && inferable(arg),
            f => inferable(f),
        },
        Fst(q) | Snd(q) | TApp(q, _) | TLam(_, q) => inferable(q),
        Pair(l, r) => inferable(l) && inferable(r),
        Case(s, _, l, _, r) => match &**s {
            InjL(q) => inferable(q) && inferable(l),
            InjR(q) => inferable(q) && inferable(r),
            s => inferable(s) && inferable(l),
        },
        ExElim(s, _, _, q) => {
            let scrut = match &**s {
                Witness(_, w) => inferable(w),
                s => inferable(s),
            };
            scrut && inferable(q)
        }
        Lam(..) | InjL(_) | InjR(_) | Witness(..) | BotE(_) => false,
    }
}

/// `count` generated proofs from consecutive seeds.
pub fn proofs(theory: &Theory, seed: u64, count: usize, depth: usize) -> Vec<GenProof> {
    (0..count as u64).map(|i| Generator::new(theory, seed.wrapping_add(i)).proof(depth)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check;
    use crate::syntax::parse_theory;

    fn theory() -> Theory {
        parse_theory(
            "(theory (sort nat) (fun 0 () nat) (fun + (nat nat) nat) (pred P (nat)) (pred Q (nat nat))
             (rule term (+ x 0) x))",
        )
        .unwrap()
    }

    #[test]
    fn generated_proofs_check() {
        let th = theory();
        let mut with_cuts = 0;
        for (i, g) in proofs(&th, 7, 300, 4).iter().enumerate() {
            if let Err(e) = check(&th, &g.sequent, &g.term) {
                panic!("seed {i}: {e}\n{}\n{}", g.sequent.folded(), g.term);
            }
            with_cuts += usize::from(!crate::proof::reducts(&g.term).is_empty());
        }
        assert!(with_cuts > 100, "{with_cuts}");
    }

    #[test]
    fn same_seed_same_output() {
        let th = theory();
        let a = Generator::new(&th, 3).proof(4);
        let b = Generator::new(&th, 3).proof(4);
        assert_eq!(a.term, b.term);
        assert_eq!(a.sequent.folded(), b.sequent.folded());
        let f = Generator::new(&th, 9).formula(6);
        assert_eq!(f, Generator::new(&th, 9).formula(6));
        th.signature.check_formula(&f).unwrap();
    }

    #[test]
    fn variants_are_congruent() {
        let th = theory();
        let mut g = Generator::new(&th, 1);
        let mut changed = 0;
        for _ in 0..50 {
            let f = g.formula(3);
            let v = g.variant(&f);
            changed += usize::from(v != f);
            assert!(crate::proof::congruent(&f, &v, &th.rules, 1000).unwrap());
        }
        assert!(changed > 0);
    }
}
