//! Exhaustive enumeration of proof-terms by size.

use super::term::ProofTerm;
use crate::syntax::{PVar, Term, TermVar};

/// The variables and terms that enumerated proof-terms may mention.
#[derive(Clone, Debug)]
pub struct Alphabet {
    pub pvars: Vec<PVar>,
    /// Term variables usable as binders.
    pub tvars: Vec<TermVar>,
    /// Terms usable in `TApp` and `Witness`.
    pub terms: Vec<Term>,
}

impl Alphabet {
    /// Proof variables `a`, `b`; binder `x : sort`; terms `x` and `c`.
    pub fn small(sort: &str, constant: &str) -> Self {
        let x = TermVar::named("x", sort);
        Alphabet {
            pvars: vec![PVar::named("a"), PVar::named("b")],
            tvars: vec![x.clone()],
            terms: vec![Term::var(&x), Term::constant(constant)],
        }
    }
}

/// All proof-terms over `alpha` of size at most `max`, ordered by size.
pub fn enumerate(alpha: &Alphabet, max: usize) -> Vec<ProofTerm> {
    by_size(alpha, max).into_iter().flatten().collect()
}

/// `out[n]` holds the proof-terms of size exactly `n`.
pub fn by_size(alpha: &Alphabet, max: usize) -> Vec<Vec<ProofTerm>> {
    use ProofTerm::*;
    let b = |p: &ProofTerm| Box::new(p.clone());
    let mut out: Vec<Vec<ProofTerm>> = vec![Vec::new(); max + 1];
    for n in 1..=max {
        let mut level = Vec::new();
        if n == 1 {
            level.extend(alpha.pvars.iter().map(|a| Axiom(*a)));
            level.push(TopI);
        }
        let m = n - 1;
        for p in &out[m] {
            for a in &alpha.pvars {
                level.push(Lam(*a, b(p)));
            }
            level.push(Fst(b(p)));
            level.push(Snd(b(p)));
            level.push(InjL(b(p)));
            level.push(InjR(b(p)));
            level.push(BotE(b(p)));
            for x in &alpha.tvars {
                level.push(TLam(x.clone(), b(p)));
            }
        }
        for t in &alpha.terms {
            let k = t.size();
            if k < m {
                for p in &out[m - k] {
                    level.push(TApp(b(p), t.clone()));
                    level.push(Witness(t.clone(), b(p)));
                }
            }
        }
        for i in 1..m {
            for p in &out[i] {
                for q in &out[m - i] {
                    level.push(App(b(p), b(q)));
                    level.push(Pair(b(p), b(q)));
                    for x in &alpha.tvars {
                        for a in &alpha.pvars {
                            level.push(ExElim(b(p), x.clone(), *a, b(q)));
                        }
                    }
                }
            }
        }
        for i in 1..m {
            for j in 1..m - i {
                let k = m - i - j;
                for p in &out[i] {
                    for q in &out[j] {
                        for r in &out[k] {
                            for a in &alpha.pvars {
                                for c in &alpha.pvars {
                                    level.push(Case(b(p), *a, b(q), *c, b(r)));
                                }
                            }
                        }
                    }
                }
            }
        }
        out[n] = level;
    }
    out
}
