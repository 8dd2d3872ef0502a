//! The realizability translation `π ⊩ A` into a theory of syntactic
//! constructions, its obligations and statements, and a desk-scale
//! evaluator over the standard tree model.

mod domains;
mod eval;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::codec::{add_notation, emit_s_axioms, s_sort, tree_to_term, BuiltinRelationSet, Codec, RELATIONS};
use crate::error::{Error, Result};
use crate::proof::ProofTerm;
use crate::relativize::{
    guarded_closure, params_of, parse_entries, parse_with, translate_term, InterpretationSpec, Obligation,
    ObligationTag,
};
use crate::sexpr::{self, SExpr};
use crate::syntax::{
    fresh_index, print_formula, Formula, RewriteRule, Sequent, Signature, Sort, Symbol, Template, Term,
    TermVar, Theory,
};

pub use domains::Domains;
pub use eval::{eval_formula, Bounds, EvalVerdict, Evaluator};

/// A realizability translation of `T`: the sort and function parts of an
/// interpretation plus, for each predicate, the formula
/// `π ⊩ p(z1,…,zn)` with holes `[π, z1, …, zn]`.
#[derive(Clone, Debug)]
pub struct RealizabilitySpec {
    interp: InterpretationSpec,
    realpreds: HashMap<Symbol, Template>,
    codec: Codec,
}

impl RealizabilitySpec {
    pub fn new(source: &Signature, interp: InterpretationSpec) -> Self {
        RealizabilitySpec { interp, realpreds: HashMap::new(), codec: Codec::new(source) }
    }

    pub fn add_realpred(&mut self, p: &str, t: Template) -> Result<()> {
        let decl = self.source().pred(&Symbol::new(p)).ok_or_else(|| Error::sort(p, "not a predicate of the source theory"))?;
        if t.holes.len() != decl.args.len() + 1 {
            return Err(Error::sort(p, format!("expected a realizer variable and {} parameters", decl.args.len())));
        }
        if t.holes[0].sort != s_sort() {
            return Err(Error::sort(p, format!("the realizer variable must have sort {}", s_sort())));
        }
        for (z, s) in t.holes[1..].iter().zip(&decl.args) {
            if z.sort != self.interp.sort_image(s)?.target {
                return Err(Error::sort(p, format!("parameter `{}` must have the image sort of {s}", z.name())));
            }
        }
        if let Some(v) = t.body.free_vars().iter().find(|v| !t.holes.contains(v)) {
            return Err(Error::sort(p, format!("template mentions `{}` which is not a parameter", v.name())));
        }
        if self.realpreds.insert(Symbol::new(p), t).is_some() {
            return Err(Error::sort(p, "predicate mapped twice"));
        }
        Ok(())
    }

    pub fn interp(&self) -> &InterpretationSpec {
        &self.interp
    }

    pub fn source(&self) -> &Signature {
        self.codec.signature()
    }

    pub fn realpred(&self, p: &Symbol) -> Option<&Template> {
        self.realpreds.get(p)
    }

    /// `⌜s⌝` as a closed term.
    pub fn sort_code(&self, s: &Sort) -> Term {
        tree_to_term(self.codec.lang(), &self.codec.encode_sort(s))
    }

    /// `⌜π⌝` as a closed term.
    pub fn proof_code(&self, p: &ProofTerm) -> Term {
        tree_to_term(self.codec.lang(), &self.codec.encode_proof(p))
    }

    fn unmapped(&self) -> Vec<String> {
        let sig = self.source();
        let mut out: Vec<String> =
            self.interp.unmapped(sig).into_iter().filter(|m| !m.starts_with("predicate ")).collect();
        out.extend(sig.preds().iter().filter(|p| !self.realpreds.contains_key(&p.name)).map(|p| format!("predicate {}", p.name)));
        out
    }
}

/// The theory `S` over the standard language with the builtin definitions
/// for `source`, plus the relation notation (`Proof`, `Red*`, `SN`, …).
pub fn realizability_target(source: &Signature) -> Result<Theory> {
    let b = BuiltinRelationSet::new(source)?;
    let mut th = emit_s_axioms(b.codec().lang(), b.env().defs(), &[])?;
    add_notation(&mut th)?;
    Ok(th)
}

/// Reads `(realize <interp entries> … (realpred p (z1 …) (pi) A) …)`;
/// the head `interp` is accepted too.
pub fn parse_realizability(text: &str, t: &Signature, u: &Signature) -> Result<RealizabilitySpec> {
    let doc = sexpr::parse_one(text)?;
    let forms = match doc.head() {
        Some("interp") => doc.expect_form("interp")?,
        _ => doc.expect_form("realize")?,
    };
    let (real, rest): (Vec<SExpr>, Vec<SExpr>) = forms.iter().cloned().partition(|f| f.head() == Some("realpred"));
    let mut spec = RealizabilitySpec::new(t, parse_entries(&rest, t, u)?);
    for form in &real {
        let items = form.expect_form("realpred")?;
        let [name, params, pi, body] = items else {
            return Err(Error::syntax(form.pos(), "(realpred <p> (<z1> …) (<pi>) <formula>)"));
        };
        let name = name.expect_atom("predicate")?;
        let decl = t.pred(&Symbol::new(name)).ok_or_else(|| Error::sort(name, "not a predicate of the source theory"))?;
        let sorts = decl.args.iter().map(|s| spec.interp.sort_image(s).map(|i| i.target.clone())).collect::<Result<Vec<_>>>()?;
        let mut holes = params_of(pi, &[s_sort()], u)?;
        holes.extend(params_of(params, &sorts, u)?);
        let body = parse_with(u, &holes, body)?;
        spec.add_realpred(name, Template::new(holes, body))?;
    }
    Ok(spec)
}

pub fn print_realizability(spec: &RealizabilitySpec) -> String {
    let base = crate::relativize::print_interpretation(&spec.interp, spec.source());
    let mut out = base.replacen("(interp", "(realize", 1);
    out.pop();
    let params = |vs: &[TermVar]| vs.iter().map(|v| format!("({} {})", v.name(), v.sort)).collect::<Vec<_>>().join(" ");
    for p in spec.source().preds() {
        if let Some(t) = spec.realpred(&p.name) {
            out.push_str(&format!(
                "\n  (realpred {} ({}) ({}) {})",
                p.name,
                params(&t.holes[1..]),
                params(&t.holes[..1]),
                print_formula(&t.body)
            ));
        }
    }
    out.push(')');
    out
}

fn atom(p: &str, args: Vec<Term>) -> Formula {
    Formula::atom(p, args)
}

fn sn(t: &Term) -> Formula {
    atom("SN", vec![t.clone()])
}

fn red_star(a: &Term, b: Term) -> Formula {
    atom("Red*", vec![a.clone(), b])
}

fn code_var(id: u32) -> TermVar {
    TermVar::new(id, s_sort())
}

fn all_vars(f: &Formula, out: &mut BTreeSet<TermVar>) {
    match f {
        Formula::Atom(_, args) => args.iter().for_each(|a| out.extend(a.free_vars())),
        Formula::Top | Formula::Bot => {}
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            all_vars(a, out);
            all_vars(b, out);
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            out.insert(x.clone());
            all_vars(a, out);
        }
    }
}

struct Realizer<'s> {
    spec: &'s RealizabilitySpec,
    base: u32,
}

impl Realizer<'_> {
    fn fresh(&self, depth: u32, slot: u32) -> TermVar {
        code_var(self.base + 3 * depth + slot)
    }

    fn go(&self, a: &Formula, pi: &Term, depth: u32) -> Result<Formula> {
        let spec = self.spec;
        let v = |slot| self.fresh(depth, slot);
        let t = |x: &TermVar| Term::var(x);
        Ok(match a {
            Formula::Atom(p, args) => {
                let tm = spec.realpred(p).ok_or_else(|| Error::Unmapped(p.to_string()))?;
                let mut inst = vec![pi.clone()];
                for arg in args {
                    inst.push(translate_term(&spec.interp, arg)?);
                }
                if inst.len() != tm.holes.len() {
                    return Err(Error::sort(p.as_str(), format!("template has {} parameters", tm.holes.len() - 1)));
                }
                tm.instantiate(&inst)
            }
            Formula::Top | Formula::Bot => sn(pi),
            Formula::Imp(l, r) => {
                let (alpha, pi1, phi) = (v(0), v(1), v(2));
                let inner = Formula::forall(
                    phi.clone(),
                    Formula::imp(
                        self.go(l, &t(&phi), depth + 1)?,
                        self.go(r, &Term::app("psubst", vec![t(&pi1), t(&alpha), t(&phi)]), depth + 1)?,
                    ),
                );
                let guard = red_star(pi, Term::app("ImpI", vec![t(&alpha), t(&pi1)]));
                Formula::and(sn(pi), Formula::forall_many([alpha, pi1], Formula::imp(guard, inner)))
            }
            Formula::And(l, r) => {
                let (p1, p2) = (v(0), v(1));
                let guard = red_star(pi, Term::app("AndI", vec![t(&p1), t(&p2)]));
                let body = Formula::and(self.go(l, &t(&p1), depth + 1)?, self.go(r, &t(&p2), depth + 1)?);
                Formula::and(sn(pi), Formula::forall_many([p1, p2], Formula::imp(guard, body)))
            }
            Formula::Or(l, r) => {
                let (p1, p2) = (v(0), v(1));
                let left = Formula::forall(
                    p1.clone(),
                    Formula::imp(red_star(pi, Term::app("OrI1", vec![t(&p1)])), self.go(l, &t(&p1), depth + 1)?),
                );
                let right = Formula::forall(
                    p2.clone(),
                    Formula::imp(red_star(pi, Term::app("OrI2", vec![t(&p2)])), self.go(r, &t(&p2), depth + 1)?),
                );
                Formula::conj([sn(pi), left, right])
            }
            Formula::Forall(x, body) => {
                let (vv, pi1, tt) = (v(0), v(1), v(2));
                let xs = spec.interp.star_var(x)?;
                let guard = red_star(pi, Term::app("ForallI", vec![t(&vv), t(&pi1)]));
                let hyp = Formula::and(spec.interp.guard(x)?, atom("Term", vec![t(&tt), spec.sort_code(&x.sort)]));
                let sub = Term::app("tsubst", vec![t(&pi1), t(&vv), t(&tt)]);
                let inner = Formula::forall_many([xs, tt], Formula::imp(hyp, self.go(body, &sub, depth + 1)?));
                Formula::and(sn(pi), Formula::forall_many([vv, pi1], Formula::imp(guard, inner)))
            }
            Formula::Exists(x, body) => {
                let (pi1, tt) = (v(0), v(1));
                let xs = spec.interp.star_var(x)?;
                let guard = red_star(pi, Term::app("ExistsI", vec![t(&tt), t(&pi1)]));
                let inner = Formula::exists(xs, Formula::and(spec.interp.guard(x)?, self.go(body, &t(&pi1), depth + 1)?));
                Formula::and(sn(pi), Formula::forall_many([pi1, tt], Formula::imp(guard, inner)))
            }
        })
    }
}

fn realizer_base(spec: &RealizabilitySpec, a: &Formula, extra: impl IntoIterator<Item = Option<u32>>) -> Result<u32> {
    let mut vars = BTreeSet::new();
    all_vars(a, &mut vars);
    let stars = vars.iter().map(|x| spec.interp.star_var(x).map(|v| Some(v.id))).collect::<Result<Vec<_>>>()?;
    Ok(fresh_index(stars.into_iter().chain(extra)))
}

/// `π ⊩ A`. Bound variables introduced by the clauses are drawn above every
/// variable of `A*` and `π`, three per nesting level.
pub fn realize(spec: &RealizabilitySpec, a: &Formula, pi: &Term) -> Result<Formula> {
    spec.source().check_formula(a)?;
    let base = realizer_base(spec, a, [pi.max_var_index()])?;
    Realizer { spec, base }.go(a, pi, 0)
}

/// `CR_π(A(π))` for a formula with one hole of the code sort.
pub fn cr_formula(a: &Template) -> Result<Formula> {
    let [pi] = a.holes.as_slice() else {
        return Err(Error::ill_formed("CR", "the candidate formula has exactly one hole"));
    };
    if pi.sort != s_sort() {
        return Err(Error::sort(pi.name(), format!("the hole must have sort {}", s_sort())));
    }
    let base = fresh_index([a.body.max_var_index(), Some(pi.id)]);
    let (alpha, pi1) = (code_var(base), code_var(base + 1));
    let at = |t: Term| a.instantiate(&[t]);
    let (p, p1) = (Term::var(pi), Term::var(&pi1));
    let member = Formula::forall(
        pi.clone(),
        Formula::imp(at(p.clone()), Formula::and(atom("Proof", vec![p.clone()]), sn(&p))),
    );
    let vars = Formula::forall(
        alpha.clone(),
        Formula::imp(atom("ProofVar", vec![Term::var(&alpha)]), at(Term::app("Axiom", vec![Term::var(&alpha)]))),
    );
    let closure = Formula::forall_many(
        [pi.clone(), pi1.clone()],
        Formula::imp(Formula::and(at(p.clone()), atom("Red", vec![p.clone(), p1.clone()])), at(p1.clone())),
    );
    let elim = Formula::forall(
        pi.clone(),
        Formula::imp(
            Formula::and(
                atom("Elim", vec![p.clone()]),
                Formula::forall(pi1.clone(), Formula::imp(atom("Red", vec![p.clone(), p1.clone()]), at(p1))),
            ),
            at(p),
        ),
    );
    Ok(Formula::conj([member, vars, closure, elim]))
}

/// `⌜ImpI⌝(⌜α1⌝, … ⌜ImpI⌝(⌜αk⌝, π)…) ⊩ A1 → … → Ak → B`
pub fn realize_sequent(spec: &RealizabilitySpec, seq: &Sequent, pi: &Term) -> Result<Formula> {
    let lang = spec.codec.lang();
    let code = seq
        .hyps
        .iter()
        .rev()
        .fold(pi.clone(), |acc, (a, _)| Term::app("ImpI", vec![tree_to_term(lang, &lang.num(a.0)), acc]));
    realize(spec, &seq.folded(), &code)
}

/// A realizer variable of the code sort above the images of every variable
/// of `fs`.
pub fn realizer_var(spec: &RealizabilitySpec, fs: &[&Formula]) -> Result<TermVar> {
    let mut vars = BTreeSet::new();
    for f in fs {
        all_vars(f, &mut vars);
    }
    let stars = vars.iter().map(|x| spec.interp.star_var(x).map(|v| Some(v.id))).collect::<Result<Vec<_>>>()?;
    Ok(code_var(fresh_index(stars)))
}

/// The four conditions making the translation a realizability
/// interpretation: non-emptiness, function closure, one candidate condition
/// per predicate and one equivalence per rewrite rule. A term rule
/// `l → r` is instantiated at every argument position of every predicate
/// whose sort matches.
pub fn emit_realizability_obligations(spec: &RealizabilitySpec, t: &Theory, u: &Theory) -> Result<Vec<Obligation>> {
    let missing = spec.unmapped();
    if !missing.is_empty() {
        return Err(Error::Coverage(missing));
    }
    let interp = &spec.interp;
    let mut out = Vec::new();
    for s in t.signature.sorts() {
        let img = interp.sort_image(s)?;
        out.push(Obligation {
            tag: ObligationTag::NonEmpty,
            formula: Formula::exists(img.rel.holes[0].clone(), img.rel.body.clone()),
            provenance: format!("sort {s}"),
        });
    }
    for f in t.signature.funs() {
        let m = interp.fun_macro(&f.name).unwrap();
        let guards = f
            .args
            .iter()
            .zip(&m.params)
            .map(|(s, z)| Ok(interp.sort_image(s)?.guard(&Term::var(z))))
            .collect::<Result<Vec<_>>>()?;
        out.push(Obligation {
            tag: ObligationTag::FunctionClosure,
            formula: Formula::forall_many(m.params.clone(), Formula::guarded(guards, interp.sort_image(&f.result)?.guard(&m.body))),
            provenance: format!("function {}", f.name),
        });
    }
    for p in t.signature.preds() {
        let tm = spec.realpred(&p.name).unwrap();
        let zs = tm.holes[1..].to_vec();
        let guards = p
            .args
            .iter()
            .zip(&zs)
            .map(|(s, z)| Ok(interp.sort_image(s)?.guard(&Term::var(z))))
            .collect::<Result<Vec<_>>>()?;
        let cr = cr_formula(&Template::new(tm.holes[..1].to_vec(), tm.body.clone()))?;
        out.push(Obligation {
            tag: ObligationTag::Candidate,
            formula: Formula::forall_many(zs, Formula::guarded(guards, cr)),
            provenance: format!("predicate {}", p.name),
        });
    }
    for r in &t.rules {
        for (a, b) in congruent_pairs(r, &t.signature)? {
            out.push(Obligation {
                tag: ObligationTag::Rule,
                formula: congruence_obligation(spec, &a, &b)?,
                provenance: format!("rule {} --> {}", print_formula(&a), print_formula(&b)),
            });
        }
    }
    for o in &out {
        u.signature.check_formula(&o.formula)?;
        if !o.formula.is_closed() {
            return Err(Error::sort(o.provenance.clone(), "obligation is not closed"));
        }
    }
    Ok(out)
}

/// `∀x̄* (guards → ∀π (π ⊩ A ↔ π ⊩ A′))` over the free variables of both.
pub fn congruence_obligation(spec: &RealizabilitySpec, a: &Formula, b: &Formula) -> Result<Formula> {
    let pi = realizer_var(spec, &[a, b])?;
    let p = Term::var(&pi);
    let body = Formula::forall(pi, Formula::iff(realize(spec, a, &p)?, realize(spec, b, &p)?));
    let mut vars = a.free_vars();
    vars.extend(b.free_vars());
    guarded_closure(&spec.interp, &vars, body)
}

fn congruent_pairs(r: &RewriteRule, sig: &Signature) -> Result<Vec<(Formula, Formula)>> {
    match r {
        RewriteRule::Prop { .. } => Ok(vec![r.as_formulas().unwrap()]),
        RewriteRule::Term { lhs, rhs } => {
            let sort = sig.sort_of(lhs)?;
            let base = fresh_index([lhs.max_var_index(), rhs.max_var_index()]);
            let mut out = Vec::new();
            for p in sig.preds() {
                for (i, s) in p.args.iter().enumerate() {
                    if *s != sort {
                        continue;
                    }
                    let args = |t: &Term| -> Vec<Term> {
                        p.args
                            .iter()
                            .enumerate()
                            .map(|(j, sj)| if j == i { t.clone() } else { Term::Var(TermVar::new(base + j as u32, sj.clone())) })
                            .collect()
                    };
                    out.push((Formula::Atom(p.name.clone(), args(lhs)), Formula::Atom(p.name.clone(), args(rhs))));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StatementKind {
    /// `s*(t*)` for a term, `CR_π(π ⊩ A)` for a formula.
    Typing,
    /// `π ⊩ A → SN(π)`
    Normalization,
    /// `π ⊩ (Γ ⊢ A) → SN(π)`
    SequentRealizer,
    /// `⌜π⌝ ⊩ (Γ ⊢ B)`
    Existence,
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StatementKind::Typing => "typing",
            StatementKind::Normalization => "normalization",
            StatementKind::SequentRealizer => "sequent-realizer",
            StatementKind::Existence => "existence",
        })
    }
}

impl std::str::FromStr for StatementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "typing" => StatementKind::Typing,
            "normalization" => StatementKind::Normalization,
            "sequent-realizer" => StatementKind::SequentRealizer,
            "existence" => StatementKind::Existence,
            other => return Err(Error::KindMismatch { kind: other.into(), subject: "any subject".into() }),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Subject {
    Term(Term),
    Formula(Formula),
    Sequent(Sequent),
    Proof(Sequent, ProofTerm),
}

impl Subject {
    fn describe(&self) -> &'static str {
        match self {
            Subject::Term(_) => "a term",
            Subject::Formula(_) => "a formula",
            Subject::Sequent(_) => "a sequent",
            Subject::Proof(..) => "a proof",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealStatement {
    pub kind: StatementKind,
    pub formula: Formula,
    pub provenance: String,
}

impl fmt::Display for RealStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; kind: {} ; from: {}", print_formula(&self.formula), self.kind, self.provenance)
    }
}

fn stars_and_guards(spec: &RealizabilitySpec, vars: &BTreeSet<TermVar>) -> Result<(Vec<TermVar>, Vec<Formula>)> {
    let stars = vars.iter().map(|x| spec.interp.star_var(x)).collect::<Result<Vec<_>>>()?;
    let guards = vars.iter().map(|x| spec.interp.guard(x)).collect::<Result<Vec<_>>>()?;
    Ok((stars, guards))
}

/// The closed statement of the given kind about `subject`.
pub fn statement(kind: StatementKind, spec: &RealizabilitySpec, subject: &Subject) -> Result<RealStatement> {
    let mismatch = || Error::KindMismatch { kind: kind.to_string(), subject: subject.describe().into() };
    let (formula, provenance) = match (kind, subject) {
        (StatementKind::Typing, Subject::Term(t)) => {
            let s = spec.source().sort_of(t)?;
            let (stars, guards) = stars_and_guards(spec, &t.free_vars())?;
            let concl = spec.interp.sort_image(&s)?.guard(&translate_term(&spec.interp, t)?);
            (Formula::forall_many(stars, Formula::guarded(guards, concl)), format!("term {t}"))
        }
        (StatementKind::Typing, Subject::Formula(a)) => {
            let pi = realizer_var(spec, &[a])?;
            let cr = cr_formula(&Template::new(vec![pi.clone()], realize(spec, a, &Term::var(&pi))?))?;
            let (stars, guards) = stars_and_guards(spec, &a.free_vars())?;
            (Formula::forall_many(stars, Formula::guarded(guards, cr)), format!("formula {}", print_formula(a)))
        }
        (StatementKind::Normalization, Subject::Formula(a)) => {
            let pi = realizer_var(spec, &[a])?;
            let p = Term::var(&pi);
            let (mut stars, mut guards) = stars_and_guards(spec, &a.free_vars())?;
            guards.push(realize(spec, a, &p)?);
            stars.push(pi);
            (Formula::forall_many(stars, Formula::guarded(guards, sn(&p))), format!("formula {}", print_formula(a)))
        }
        (StatementKind::SequentRealizer, Subject::Sequent(seq)) => {
            let folded = seq.folded();
            let pi = realizer_var(spec, &[&folded])?;
            let p = Term::var(&pi);
            let (mut stars, mut guards) = stars_and_guards(spec, &seq.free_vars())?;
            guards.push(realize_sequent(spec, seq, &p)?);
            stars.push(pi);
            (Formula::forall_many(stars, Formula::guarded(guards, sn(&p))), format!("sequent {}", print_formula(&folded)))
        }
        (StatementKind::Existence, Subject::Proof(seq, proof)) => {
            let (stars, guards) = stars_and_guards(spec, &seq.free_vars())?;
            let body = realize_sequent(spec, seq, &spec.proof_code(proof))?;
            (
                Formula::forall_many(stars, Formula::guarded(guards, body)),
                format!("proof {} of {}", crate::proof::print_proof(proof), print_formula(&seq.folded())),
            )
        }
        _ => return Err(mismatch()),
    };
    debug_assert!(formula.is_closed());
    Ok(RealStatement { kind, formula, provenance })
}

/// Evaluates a builtin relation (by relation or definition name) on
/// candidate trees.
pub fn verify_witness(b: &BuiltinRelationSet, relation: &str, args: &[crate::codec::Tree]) -> Result<bool> {
    let def = RELATIONS
        .iter()
        .find(|(r, d, _)| *r == relation || *d == relation)
        .map(|(_, d, _)| *d)
        .or_else(|| b.env().find(relation).map(|_| relation))
        .ok_or_else(|| Error::Unregistered(relation.into()))?;
    let arity = b.env().get(def).unwrap().arity;
    if arity != args.len() {
        return Err(Error::sort(relation, format!("expects {arity} arguments")));
    }
    b.env().holds(def, args)
}
