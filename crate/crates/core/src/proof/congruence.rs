//! The congruence generated by a theory's rewrite rules, decided by
//! comparing innermost normal forms.

use crate::error::{Error, Result};
use crate::syntax::{subst_formula, subst_term, Formula, RewriteRule, Term, TermVar};

/// Matches `pat` against `t`, extending `sigma`. Repeated pattern variables
/// must match equal subterms.
fn matches(pat: &Term, t: &Term, sigma: &mut Vec<(TermVar, Term)>) -> bool {
    match pat {
        Term::Var(v) => match sigma.iter().find(|(x, _)| x == v) {
            Some((_, bound)) => bound == t,
            None => {
                sigma.push((v.clone(), t.clone()));
                true
            }
        },
        Term::App(f, ps) => match t {
            Term::App(g, ts) if f == g && ps.len() == ts.len() => {
                ps.iter().zip(ts).all(|(p, u)| matches(p, u, sigma))
            }
            _ => false,
        },
    }
}

/// Rewriting engine with a shared step budget.
pub struct Rewriter<'r> {
    rules: &'r [RewriteRule],
    fuel: usize,
    used: usize,
}

impl<'r> Rewriter<'r> {
    pub fn new(rules: &'r [RewriteRule], fuel: usize) -> Self {
        Rewriter { rules, fuel, used: 0 }
    }

    pub fn steps_used(&self) -> usize {
        self.used
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.fuel {
            return Err(Error::FuelExhausted(self.fuel));
        }
        Ok(())
    }

    pub fn term(&mut self, t: &Term) -> Result<Term> {
        let mut cur = match t {
            Term::Var(_) => return Ok(t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect::<Result<_>>()?),
        };
        loop {
            let mut fired = None;
            for r in self.rules {
                if let RewriteRule::Term { lhs, rhs } = r {
                    let mut sigma = Vec::new();
                    if matches(lhs, &cur, &mut sigma) {
                        fired = Some(subst_term(rhs, &sigma));
                        break;
                    }
                }
            }
            match fired {
                None => return Ok(cur),
                Some(next) => {
                    self.tick()?;
                    cur = self.term(&next)?;
                }
            }
        }
    }

    pub fn formula(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Atom(p, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.term(a)).collect::<Result<_>>()?;
                let atom = Term::App(p.clone(), args);
                for r in self.rules {
                    if let RewriteRule::Prop { pred, args: pats, rhs } = r {
                        let pat = Term::App(pred.clone(), pats.clone());
                        let mut sigma = Vec::new();
                        if matches(&pat, &atom, &mut sigma) {
                            self.tick()?;
                            return self.formula(&subst_formula(rhs, &sigma));
                        }
                    }
                }
                let Term::App(p, args) = atom else { unreachable!() };
                Formula::Atom(p, args)
            }
            Formula::Top | Formula::Bot => f.clone(),
            Formula::And(a, b) => Formula::and(self.formula(a)?, self.formula(b)?),
            Formula::Or(a, b) => Formula::or(self.formula(a)?, self.formula(b)?),
            Formula::Imp(a, b) => Formula::imp(self.formula(a)?, self.formula(b)?),
            Formula::Forall(x, b) => Formula::forall(x.clone(), self.formula(b)?),
            Formula::Exists(x, b) => Formula::exists(x.clone(), self.formula(b)?),
        })
    }
}

pub fn normal_form(f: &Formula, rules: &[RewriteRule], fuel: usize) -> Result<Formula> {
    Rewriter::new(rules, fuel).formula(f)
}

/// `A ≡ B` under `rules`: the normal forms coincide up to bound renaming.
pub fn congruent(a: &Formula, b: &Formula, rules: &[RewriteRule], fuel: usize) -> Result<bool> {
    if a.alpha_eq(b) {
        return Ok(true);
    }
    let mut rw = Rewriter::new(rules, fuel);
    let na = rw.formula(a)?;
    let nb = rw.formula(b)?;
    Ok(na.alpha_eq(&nb))
}
