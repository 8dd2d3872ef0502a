//! Structural interpretations of one theory in another and the proof
//! obligations that make them interpretations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::sexpr::{self, SExpr};
use crate::syntax::{
    index_of, print_formula, FormulaParser, Formula, RewriteRule, Signature, Sort, Symbol, Template, Term,
    TermTemplate, TermVar, Theory,
};

/// Image of a sort: the target sort and the relativization predicate
/// `s*(x)` (a template with one hole of the target sort).
#[derive(Clone, Debug, PartialEq)]
pub struct SortImage {
    pub target: Sort,
    pub rel: Template,
}

impl SortImage {
    pub fn guard(&self, t: &Term) -> Formula {
        self.rel.instantiate(std::slice::from_ref(t))
    }
}

/// A structural translation of the theory `T` into `U`.
#[derive(Clone, Debug, Default)]
pub struct InterpretationSpec {
    sorts: Vec<(Sort, SortImage)>,
    funs: HashMap<Symbol, TermTemplate>,
    preds: HashMap<Symbol, Template>,
}

impl InterpretationSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, s: Sort, image: SortImage) -> Result<()> {
        if image.rel.holes.len() != 1 || image.rel.holes[0].sort != image.target {
            return Err(Error::sort(s.as_str(), "the relativization predicate needs one variable of the target sort"));
        }
        if self.sorts.iter().any(|(t, _)| *t == s) {
            return Err(Error::sort(s.as_str(), "sort mapped twice"));
        }
        check_template_vars(s.as_str(), &image.rel.body.free_vars(), &image.rel.holes)?;
        self.sorts.push((s, image));
        Ok(())
    }

    pub fn add_fun(&mut self, f: &str, m: TermTemplate) -> Result<()> {
        check_template_vars(f, &m.body.free_vars(), &m.params)?;
        if self.funs.insert(Symbol::new(f), m).is_some() {
            return Err(Error::sort(f, "function mapped twice"));
        }
        Ok(())
    }

    pub fn add_pred(&mut self, p: &str, t: Template) -> Result<()> {
        check_template_vars(p, &t.body.free_vars(), &t.holes)?;
        if self.preds.insert(Symbol::new(p), t).is_some() {
            return Err(Error::sort(p, "predicate mapped twice"));
        }
        Ok(())
    }

    pub fn sorts(&self) -> &[(Sort, SortImage)] {
        &self.sorts
    }

    pub fn sort_image(&self, s: &Sort) -> Result<&SortImage> {
        self.sorts.iter().find(|(t, _)| t == s).map(|(_, i)| i).ok_or_else(|| Error::Unmapped(s.to_string()))
    }

    pub fn fun_macro(&self, f: &Symbol) -> Option<&TermTemplate> {
        self.funs.get(f)
    }

    pub fn pred_template(&self, p: &Symbol) -> Option<&Template> {
        self.preds.get(p)
    }

    /// Source sorts sharing a target sort are told apart by renumbering.
    fn renumbered(&self) -> bool {
        let targets: BTreeSet<&Sort> = self.sorts.iter().map(|(_, i)| &i.target).collect();
        targets.len() < self.sorts.len()
    }

    /// `x*`: same index and target sort, unless two source sorts share a
    /// target, in which case index `n` of the `i`-th sort becomes
    /// `n·k + i` for `k` mapped sorts.
    pub fn star_var(&self, x: &TermVar) -> Result<TermVar> {
        let i = self.sorts.iter().position(|(s, _)| *s == x.sort).ok_or_else(|| Error::Unmapped(x.sort.to_string()))?;
        let target = self.sorts[i].1.target.clone();
        let id = if self.renumbered() { x.id * self.sorts.len() as u32 + i as u32 } else { x.id };
        Ok(TermVar::new(id, target))
    }

    /// `s*(x*)`
    pub fn guard(&self, x: &TermVar) -> Result<Formula> {
        Ok(self.sort_image(&x.sort)?.guard(&Term::Var(self.star_var(x)?)))
    }

    /// Symbols of `sig` without an image.
    pub fn unmapped(&self, sig: &Signature) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(sig.sorts().iter().filter(|s| self.sort_image(s).is_err()).map(|s| format!("sort {s}")));
        out.extend(sig.funs().iter().filter(|f| !self.funs.contains_key(&f.name)).map(|f| format!("function {}", f.name)));
        out.extend(sig.preds().iter().filter(|p| !self.preds.contains_key(&p.name)).map(|p| format!("predicate {}", p.name)));
        out
    }
}

fn check_template_vars(what: &str, free: &BTreeSet<TermVar>, params: &[TermVar]) -> Result<()> {
    if let Some(v) = free.iter().find(|v| !params.contains(v)) {
        return Err(Error::sort(what, format!("template mentions `{}` which is not a parameter", v.name())));
    }
    let distinct: BTreeSet<&TermVar> = params.iter().collect();
    if distinct.len() != params.len() {
        return Err(Error::sort(what, "template parameters are not distinct"));
    }
    Ok(())
}

/// `t*`
pub fn translate_term(spec: &InterpretationSpec, t: &Term) -> Result<Term> {
    match t {
        Term::Var(x) => Ok(Term::Var(spec.star_var(x)?)),
        Term::App(f, args) => {
            let m = spec.fun_macro(f).ok_or_else(|| Error::Unmapped(f.to_string()))?;
            if m.params.len() != args.len() {
                return Err(Error::sort(f.as_str(), format!("macro has {} parameters", m.params.len())));
            }
            let args = args.iter().map(|a| translate_term(spec, a)).collect::<Result<Vec<_>>>()?;
            Ok(m.instantiate(&args))
        }
    }
}

/// `A*`
pub fn translate_formula(spec: &InterpretationSpec, a: &Formula) -> Result<Formula> {
    let tr = |f: &Formula| translate_formula(spec, f);
    Ok(match a {
        Formula::Atom(p, args) => {
            let t = spec.pred_template(p).ok_or_else(|| Error::Unmapped(p.to_string()))?;
            if t.holes.len() != args.len() {
                return Err(Error::sort(p.as_str(), format!("template has {} holes", t.holes.len())));
            }
            let args = args.iter().map(|x| translate_term(spec, x)).collect::<Result<Vec<_>>>()?;
            t.instantiate(&args)
        }
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::And(l, r) => Formula::and(tr(l)?, tr(r)?),
        Formula::Or(l, r) => Formula::or(tr(l)?, tr(r)?),
        Formula::Imp(l, r) => Formula::imp(tr(l)?, tr(r)?),
        Formula::Forall(x, body) => Formula::forall(spec.star_var(x)?, Formula::imp(spec.guard(x)?, tr(body)?)),
        Formula::Exists(x, body) => Formula::exists(spec.star_var(x)?, Formula::and(spec.guard(x)?, tr(body)?)),
    })
}

/// `∀x1*…∀xn* (s1*(x1*) ∧ … ∧ sn*(xn*) → A*)` over the free variables of `A`.
pub fn theorem_statement(spec: &InterpretationSpec, a: &Formula) -> Result<Formula> {
    guarded_closure(spec, &a.free_vars(), translate_formula(spec, a)?)
}

pub(crate) fn guarded_closure(spec: &InterpretationSpec, vars: &BTreeSet<TermVar>, body: Formula) -> Result<Formula> {
    let guards = vars.iter().map(|x| spec.guard(x)).collect::<Result<Vec<_>>>()?;
    let stars = vars.iter().map(|x| spec.star_var(x)).collect::<Result<Vec<_>>>()?;
    Ok(Formula::forall_many(stars, Formula::guarded(guards, body)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObligationTag {
    /// `∃x s*(x)`
    NonEmpty,
    /// `s1*(z1) ∧ … → s*(f*(z1,…,zn))`
    FunctionClosure,
    /// `A*` for an axiom `A`.
    Axiom,
    /// A rewrite rule of `T` holds in `U`.
    Rule,
    /// An instance of the connective equivalences.
    Connective,
    /// `CR_π(π ⊩ p(z1,…,zn))` under the guards of the arguments.
    Candidate,
}

impl fmt::Display for ObligationTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObligationTag::NonEmpty => "non-empty",
            ObligationTag::FunctionClosure => "function-closure",
            ObligationTag::Axiom => "axiom",
            ObligationTag::Rule => "rule",
            ObligationTag::Connective => "connective",
            ObligationTag::Candidate => "candidate",
        })
    }
}

/// A closed formula of `U` that must be provable there.
#[derive(Clone, Debug, PartialEq)]
pub struct Obligation {
    pub tag: ObligationTag,
    pub formula: Formula,
    /// The object of `T` it comes from.
    pub provenance: String,
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; tag: {} ; from: {}", print_formula(&self.formula), self.tag, self.provenance)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ObligationOptions {
    /// Also emit the connective equivalences, instantiated at ⊤, ⊥ and at
    /// every compound subformula of the axioms and rules of `T`.
    pub connectives: bool,
}

pub fn emit_interpretation_obligations(spec: &InterpretationSpec, t: &Theory, u: &Theory) -> Result<Vec<Obligation>> {
    emit_obligations_with(spec, t, u, ObligationOptions::default())
}

pub fn emit_obligations_with(
    spec: &InterpretationSpec,
    t: &Theory,
    u: &Theory,
    opts: ObligationOptions,
) -> Result<Vec<Obligation>> {
    let missing = spec.unmapped(&t.signature);
    if !missing.is_empty() {
        return Err(Error::Coverage(missing));
    }
    let mut out = Vec::new();
    for s in t.signature.sorts() {
        let img = spec.sort_image(s)?;
        let h = img.rel.holes[0].clone();
        out.push(Obligation {
            tag: ObligationTag::NonEmpty,
            formula: Formula::exists(h, img.rel.body.clone()),
            provenance: format!("sort {s}"),
        });
    }
    for f in t.signature.funs() {
        let m = spec.fun_macro(&f.name).unwrap();
        if m.params.len() != f.args.len() {
            return Err(Error::sort(f.name.as_str(), format!("macro has {} parameters", m.params.len())));
        }
        let guards =
            f.args.iter().zip(&m.params).map(|(s, z)| Ok(spec.sort_image(s)?.guard(&Term::var(z)))).collect::<Result<Vec<_>>>()?;
        let concl = spec.sort_image(&f.result)?.guard(&m.body);
        out.push(Obligation {
            tag: ObligationTag::FunctionClosure,
            formula: Formula::forall_many(m.params.clone(), Formula::guarded(guards, concl)),
            provenance: format!("function {}", f.name),
        });
    }
    for a in &t.axioms {
        let closed = a.clone().universal_closure();
        out.push(Obligation {
            tag: ObligationTag::Axiom,
            formula: theorem_statement(spec, &closed)?,
            provenance: format!("axiom {}", print_formula(a)),
        });
    }
    for r in &t.rules {
        let (vars, body) = match r {
            RewriteRule::Prop { pred, args, rhs } => {
                let lhs = Formula::Atom(pred.clone(), args.clone());
                (r.lhs_vars(), Formula::iff(translate_formula(spec, &lhs)?, translate_formula(spec, rhs)?))
            }
            RewriteRule::Term { lhs, rhs } => {
                let sort = t.signature.sort_of(lhs)?;
                let target = &spec.sort_image(&sort)?.target;
                let has_eq = u
                    .signature
                    .pred(&Symbol::new("="))
                    .is_some_and(|p| p.args.len() == 2 && p.args.iter().all(|s| s == target));
                if !has_eq {
                    return Err(Error::Unmapped(format!("= on sort {target} (needed to state rule {} --> {})", lhs, rhs)));
                }
                let eq = Formula::atom("=", vec![translate_term(spec, lhs)?, translate_term(spec, rhs)?]);
                (r.lhs_vars(), eq)
            }
        };
        let provenance = match r {
            RewriteRule::Term { lhs, rhs } => format!("rule {lhs} --> {rhs}"),
            RewriteRule::Prop { pred, args, rhs } => {
                format!("rule {} --> {}", print_formula(&Formula::Atom(pred.clone(), args.clone())), print_formula(rhs))
            }
        };
        out.push(Obligation { tag: ObligationTag::Rule, formula: guarded_closure(spec, &vars, body)?, provenance });
    }
    if opts.connectives {
        out.extend(connective_obligations(spec, t)?);
    }
    for o in &out {
        u.signature.check_formula(&o.formula)?;
        if !o.formula.is_closed() {
            return Err(Error::sort(o.provenance.clone(), "obligation is not closed"));
        }
    }
    Ok(out)
}

fn connective_obligations(spec: &InterpretationSpec, t: &Theory) -> Result<Vec<Obligation>> {
    let mut out = vec![
        Obligation {
            tag: ObligationTag::Connective,
            formula: Formula::iff(translate_formula(spec, &Formula::Bot)?, Formula::Bot),
            provenance: "bot".into(),
        },
        Obligation {
            tag: ObligationTag::Connective,
            formula: Formula::iff(translate_formula(spec, &Formula::Top)?, Formula::Top),
            provenance: "top".into(),
        },
    ];
    let mut roots: Vec<Formula> = t.axioms.clone();
    for r in &t.rules {
        if let Some((l, rhs)) = r.as_formulas() {
            roots.push(l);
            roots.push(rhs);
        }
    }
    let mut seen = Vec::new();
    for root in &roots {
        collect_compound(root, &mut seen);
    }
    for f in seen {
        let (vars, lhs, rhs) = match &f {
            Formula::And(a, b) => (f.free_vars(), translate_formula(spec, &f)?, Formula::and(translate_formula(spec, a)?, translate_formula(spec, b)?)),
            Formula::Or(a, b) => (f.free_vars(), translate_formula(spec, &f)?, Formula::or(translate_formula(spec, a)?, translate_formula(spec, b)?)),
            Formula::Imp(a, b) => (f.free_vars(), translate_formula(spec, &f)?, Formula::imp(translate_formula(spec, a)?, translate_formula(spec, b)?)),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let g = spec.guard(x)?;
                let body = translate_formula(spec, a)?;
                let rhs = if matches!(f, Formula::Forall(..)) {
                    Formula::forall(spec.star_var(x)?, Formula::imp(g, body))
                } else {
                    Formula::exists(spec.star_var(x)?, Formula::and(g, body))
                };
                (f.free_vars(), translate_formula(spec, &f)?, rhs)
            }
            _ => unreachable!(),
        };
        out.push(Obligation {
            tag: ObligationTag::Connective,
            formula: guarded_closure(spec, &vars, Formula::iff(lhs, rhs))?,
            provenance: format!("subformula {}", print_formula(&f)),
        });
    }
    Ok(out)
}

fn collect_compound(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Atom(..) | Formula::Top | Formula::Bot => return,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect_compound(a, out);
            collect_compound(b, out);
        }
        Formula::Forall(_, a) | Formula::Exists(_, a) => collect_compound(a, out),
    }
    if !out.contains(f) {
        out.push(f.clone());
    }
}

/// Reads
/// `(interp (sort s s_* (rel (x) A)) … (fun f (z1 …) t) … (pred p (z1 …) A) …)`.
/// Parameters may be bare names (their sorts follow from the declaration
/// in `T`) or `(z sort)`.
pub fn parse_interpretation(text: &str, t: &Signature, u: &Signature) -> Result<InterpretationSpec> {
    let doc = sexpr::parse_one(text)?;
    parse_entries(doc.expect_form("interp")?, t, u)
}

pub(crate) fn parse_entries(forms: &[SExpr], t: &Signature, u: &Signature) -> Result<InterpretationSpec> {
    let mut spec = InterpretationSpec::new();
    for form in forms.iter().filter(|f| f.head() == Some("sort")) {
        let items = form.expect_form("sort")?;
        let [s, target, rel] = items else {
            return Err(Error::syntax(form.pos(), "(sort <s> <target sort> (rel (<x>) <formula>))"));
        };
        let s = Sort::new(s.expect_atom("sort")?);
        if !t.has_sort(&s) {
            return Err(Error::sort(s.as_str(), "not a sort of the source theory"));
        }
        let target = Sort::new(target.expect_atom("target sort")?);
        if !u.has_sort(&target) {
            return Err(Error::sort(target.as_str(), "not a sort of the target theory"));
        }
        let r = rel.expect_form("rel")?;
        let [params, body] = r else {
            return Err(Error::syntax(rel.pos(), "(rel (<x>) <formula>)"));
        };
        let holes = params_of(params, std::slice::from_ref(&target), u)?;
        let body = parse_with(u, &holes, body)?;
        spec.add_sort(s, SortImage { target, rel: Template::new(holes, body) })?;
    }
    for form in forms.iter().filter(|f| f.head() != Some("sort")) {
        let head = form.head().unwrap_or_default();
        let items = form.expect_form(head)?;
        let [name, params, body] = items else {
            return Err(Error::syntax(form.pos(), format!("({head} <name> (<params>) <body>)")));
        };
        let name = name.expect_atom("symbol")?;
        match head {
            "fun" => {
                let decl = t.fun(&Symbol::new(name)).ok_or_else(|| Error::sort(name, "not a function of the source theory"))?;
                let sorts = decl.args.iter().map(|s| spec.sort_image(s).map(|i| i.target.clone())).collect::<Result<Vec<_>>>()?;
                let ps = params_of(params, &sorts, u)?;
                let mut fp = FormulaParser::new(u);
                for p in &ps {
                    fp = fp.with_var(p.clone());
                }
                let res = spec.sort_image(&decl.result)?.target.clone();
                let body = fp.term(body, Some(&res))?;
                spec.add_fun(name, TermTemplate::new(ps, body))?;
            }
            "pred" => {
                let decl = t.pred(&Symbol::new(name)).ok_or_else(|| Error::sort(name, "not a predicate of the source theory"))?;
                let sorts = decl.args.iter().map(|s| spec.sort_image(s).map(|i| i.target.clone())).collect::<Result<Vec<_>>>()?;
                let ps = params_of(params, &sorts, u)?;
                let body = parse_with(u, &ps, body)?;
                spec.add_pred(name, Template::new(ps, body))?;
            }
            other => return Err(Error::syntax(form.pos(), format!("unknown interpretation entry `{other}`"))),
        }
    }
    Ok(spec)
}

pub(crate) fn params_of(sx: &SExpr, sorts: &[Sort], u: &Signature) -> Result<Vec<TermVar>> {
    let items = sx.expect_list("parameter list")?;
    if items.len() != sorts.len() {
        return Err(Error::syntax(sx.pos(), format!("expected {} parameters", sorts.len())));
    }
    items
        .iter()
        .zip(sorts)
        .map(|(p, s)| match p {
            SExpr::Atom(name, pos) => {
                let id = index_of(name).ok_or_else(|| Error::syntax(*pos, format!("`{name}` is not a variable name")))?;
                Ok(TermVar::new(id, s.clone()))
            }
            SExpr::List(..) => {
                let v = FormulaParser::new(u).binder(p)?;
                if v.sort != *s {
                    return Err(Error::sort(v.name(), format!("parameter must have sort {s}")));
                }
                Ok(v)
            }
        })
        .collect()
}

pub(crate) fn parse_with(u: &Signature, vars: &[TermVar], sx: &SExpr) -> Result<Formula> {
    let mut fp = FormulaParser::new(u);
    for v in vars {
        fp = fp.with_var(v.clone());
    }
    fp.formula(sx)
}

pub fn print_interpretation(spec: &InterpretationSpec, t: &Signature) -> String {
    let mut out = String::from("(interp");
    let params = |vs: &[TermVar]| vs.iter().map(|v| format!("({} {})", v.name(), v.sort)).collect::<Vec<_>>().join(" ");
    for (s, img) in &spec.sorts {
        out.push_str(&format!(
            "\n  (sort {s} {} (rel ({}) {}))",
            img.target,
            params(&img.rel.holes),
            print_formula(&img.rel.body)
        ));
    }
    for f in t.funs() {
        if let Some(m) = spec.fun_macro(&f.name) {
            out.push_str(&format!("\n  (fun {} ({}) {})", f.name, params(&m.params), crate::syntax::print_term(&m.body)));
        }
    }
    for p in t.preds() {
        if let Some(tm) = spec.pred_template(&p.name) {
            out.push_str(&format!("\n  (pred {} ({}) {})", p.name, params(&tm.holes), print_formula(&tm.body)));
        }
    }
    out.push(')');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_term, parse_theory};

    fn t_theory() -> Theory {
        parse_theory(
            "(theory (sort nat) (fun z () nat) (fun succ (nat) nat) (pred even (nat))
               (axiom (even z))
               (axiom (forall (x nat) (imp (even x) (even (succ (succ x)))))))",
        )
        .unwrap()
    }

    fn u_theory() -> Theory {
        parse_theory("(theory (sort d) (fun k () d) (fun g (d) d) (pred N (d)) (pred E (d)) (pred = (d d)))").unwrap()
    }

    fn spec() -> InterpretationSpec {
        parse_interpretation(
            "(interp (sort nat d (rel (x) (N x)))
                     (fun z () k)
                     (fun succ (y) (g (g y)))
                     (pred even (y) (E y)))",
            &t_theory().signature,
            &u_theory().signature,
        )
        .unwrap()
    }

    #[test]
    fn terms_are_translated_by_macros() {
        let s = spec();
        let t = parse_term(&t_theory().signature, "(succ z)").unwrap();
        assert_eq!(translate_term(&s, &t).unwrap(), parse_term(&u_theory().signature, "(g (g k))").unwrap());
        let x = TermVar::named("x", "nat");
        assert_eq!(translate_term(&s, &Term::var(&x)).unwrap(), Term::var(&TermVar::named("x", "d")));
    }

    #[test]
    fn quantifiers_are_relativized() {
        let s = spec();
        let a = parse_formula(&t_theory().signature, "(forall (x nat) (even x))").unwrap();
        let expected = parse_formula(&u_theory().signature, "(forall (x d) (imp (N x) (E x)))").unwrap();
        assert_eq!(translate_formula(&s, &a).unwrap(), expected);
        let e = parse_formula(&t_theory().signature, "(exists (x nat) (and (even x) top))").unwrap();
        let expected = parse_formula(&u_theory().signature, "(exists (x d) (and (N x) (and (E x) top)))").unwrap();
        assert_eq!(translate_formula(&s, &e).unwrap(), expected);
        assert_eq!(translate_formula(&s, &Formula::Bot).unwrap(), Formula::Bot);
    }

    #[test]
    fn obligations_cover_sorts_functions_and_axioms() {
        let obs = emit_interpretation_obligations(&spec(), &t_theory(), &u_theory()).unwrap();
        let text: Vec<String> = obs.iter().map(|o| print_formula(&o.formula)).collect();
        assert_eq!(
            text,
            [
                "(exists (x d) (N x))",
                "(N k)",
                "(forall (y d) (imp (N y) (N (g (g y)))))",
                "(E k)",
                "(forall (x d) (imp (N x) (imp (E x) (E (g (g (g (g x))))))))",
            ]
        );
        let mut partial = spec();
        partial.preds.clear();
        assert_eq!(
            emit_interpretation_obligations(&partial, &t_theory(), &u_theory()),
            Err(Error::Coverage(vec!["predicate even".into()]))
        );
    }

    #[test]
    fn theorem_statement_guards_free_variables() {
        let s = spec();
        let a = parse_formula(&t_theory().signature, "(even x)").unwrap();
        let st = theorem_statement(&s, &a).unwrap();
        assert_eq!(print_formula(&st), "(forall (x d) (imp (N x) (E x)))");
        let closed = parse_formula(&t_theory().signature, "(even z)").unwrap();
        assert_eq!(print_formula(&theorem_statement(&s, &closed).unwrap()), "(E k)");
    }

    #[test]
    fn connective_instances_are_optional() {
        let opts = ObligationOptions { connectives: true };
        let obs = emit_obligations_with(&spec(), &t_theory(), &u_theory(), opts).unwrap();
        let conn: Vec<_> = obs.iter().filter(|o| o.tag == ObligationTag::Connective).collect();
        // bot, top, the implication and the universal of the second axiom
        assert_eq!(conn.len(), 4);
    }

    #[test]
    fn shared_targets_renumber_variables() {
        let t = parse_theory("(theory (sort a) (sort b))").unwrap();
        let u = parse_theory("(theory (sort d) (pred P (d)) (pred Q (d)))").unwrap();
        let s = parse_interpretation("(interp (sort a d (rel (x) (P x))) (sort b d (rel (x) (Q x))))", &t.signature, &u.signature)
            .unwrap();
        let xa = s.star_var(&TermVar::named("x", "a")).unwrap();
        let xb = s.star_var(&TermVar::named("x", "b")).unwrap();
        assert_ne!(xa, xb);
    }
}
