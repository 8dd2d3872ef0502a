//! Capture-avoiding simultaneous substitution of terms for term variables.

use super::{Formula, Term, TermVar};
use crate::error::{Error, Result};

/// `1 + ` the largest index among `indices`, or 0.
pub fn fresh_index(indices: impl IntoIterator<Item = Option<u32>>) -> u32 {
    indices.into_iter().flatten().max().map_or(0, |m| m + 1)
}

pub fn subst_term(t: &Term, sigma: &[(TermVar, Term)]) -> Term {
    match t {
        Term::Var(v) => sigma
            .iter()
            .find(|(x, _)| x == v)
            .map_or_else(|| t.clone(), |(_, r)| r.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, sigma)).collect()),
    }
}

/// Simultaneous substitution; bound variables that would capture a free
/// variable of a replacement are renamed to `1 + max index` in scope.
pub fn subst_formula(f: &Formula, sigma: &[(TermVar, Term)]) -> Formula {
    if sigma.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| subst_term(a, sigma)).collect()),
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::And(a, b) => Formula::and(subst_formula(a, sigma), subst_formula(b, sigma)),
        Formula::Or(a, b) => Formula::or(subst_formula(a, sigma), subst_formula(b, sigma)),
        Formula::Imp(a, b) => Formula::imp(subst_formula(a, sigma), subst_formula(b, sigma)),
        Formula::Forall(x, body) => {
            let (x2, body2) = subst_binder(x, body, sigma);
            Formula::forall(x2, body2)
        }
        Formula::Exists(x, body) => {
            let (x2, body2) = subst_binder(x, body, sigma);
            Formula::exists(x2, body2)
        }
    }
}

fn subst_binder(x: &TermVar, body: &Formula, sigma: &[(TermVar, Term)]) -> (TermVar, Formula) {
    let body_fv = body.free_vars();
    let live: Vec<(TermVar, Term)> = sigma
        .iter()
        .filter(|(v, _)| v != x && body_fv.contains(v))
        .cloned()
        .collect();
    if live.is_empty() {
        return (x.clone(), body.clone());
    }
    if live.iter().any(|(_, r)| r.has_var(x)) {
        let fresh = fresh_index(
            std::iter::once(Some(x.id))
                .chain(std::iter::once(body.max_var_index()))
                .chain(live.iter().flat_map(|(v, r)| [Some(v.id), r.max_var_index()])),
        );
        let x2 = TermVar::new(fresh, x.sort.clone());
        let mut sigma2 = live;
        sigma2.push((x.clone(), Term::Var(x2.clone())));
        (x2, subst_formula(body, &sigma2))
    } else {
        (x.clone(), subst_formula(body, &live))
    }
}

/// `A[x := t]`, requiring `t` to have the sort of `x` when `t` is a variable
/// or its sort is otherwise known. Use [`crate::syntax::Signature::sort_of`]
/// beforehand for full checking of applications.
pub fn subst_in_formula(a: &Formula, x: &TermVar, t: &Term, t_sort: &super::Sort) -> Result<Formula> {
    if &x.sort != t_sort {
        return Err(Error::sort(t.to_string(), format!("has sort {t_sort}, variable `{x}` has sort {}", x.sort)));
    }
    Ok(subst_formula(a, &[(x.clone(), t.clone())]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Sort;

    fn v(n: &str) -> TermVar {
        TermVar::named(n, "i")
    }
    fn p(args: Vec<Term>) -> Formula {
        Formula::atom("P", args)
    }

    #[test]
    fn replaces_free_occurrence() {
        let r = subst_formula(&p(vec![Term::var(&v("x"))]), &[(v("x"), Term::constant("c"))]);
        assert_eq!(r, p(vec![Term::constant("c")]));
    }

    #[test]
    fn leaves_bound_occurrence() {
        let f = Formula::forall(v("x"), p(vec![Term::var(&v("x"))]));
        assert_eq!(subst_formula(&f, &[(v("x"), Term::constant("c"))]), f);
    }

    #[test]
    fn renames_capturing_binder() {
        // (∀y P(x,y))[x := f(y)]
        let f = Formula::forall(v("y"), p(vec![Term::var(&v("x")), Term::var(&v("y"))]));
        let fy = Term::app("f", vec![Term::var(&v("y"))]);
        let r = subst_formula(&f, &[(v("x"), fy.clone())]);
        // Independent oracle: the first name not occurring in the inputs.
        let used = [v("x").id, v("y").id];
        let fresh = (0..).find(|i| *i > *used.iter().max().unwrap()).unwrap();
        let y2 = TermVar::new(fresh, Sort::new("i"));
        assert_eq!(r, Formula::forall(y2.clone(), p(vec![fy, Term::Var(y2)])));
        assert_eq!(r.free_vars(), [v("y")].into_iter().collect());
    }

    #[test]
    fn sort_mismatch_is_rejected() {
        let x = v("x");
        let err = subst_in_formula(&Formula::Top, &x, &Term::constant("z"), &Sort::new("nat")).unwrap_err();
        assert!(matches!(err, Error::Sort { .. }));
    }
}
