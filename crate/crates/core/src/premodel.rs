//! Pre-models over finite carriers, three-valued membership oracles for
//! the interpretation of formulas as sets of proof-terms, and corpus checks
//! of the reducibility-candidate axioms and of congruence preservation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::proof::{
    print_proof, reachable, reducts, sn_check, subst_proof, subst_term_in_proof, ProofTerm, SnVerdict,
};
use crate::sexpr::{self, SExpr};
use crate::syntax::{
    parse_formula_sexpr, print_formula, print_term, Formula, RewriteRule, Signature, Sort, Symbol, Term, TermVar,
};

pub type Elem = Symbol;

/// Values of term variables in the carriers.
pub type Assignment = BTreeMap<TermVar, Elem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Member,
    NonMember,
    Unknown,
}

impl Membership {
    fn from_bool(b: bool) -> Self {
        if b {
            Membership::Member
        } else {
            Membership::NonMember
        }
    }

    pub fn and(self, other: Membership) -> Membership {
        use Membership::*;
        match (self, other) {
            (NonMember, _) | (_, NonMember) => NonMember,
            (Member, Member) => Member,
            _ => Unknown,
        }
    }

    pub fn or(self, other: Membership) -> Membership {
        use Membership::*;
        match (self, other) {
            (Member, _) | (_, Member) => Member,
            (NonMember, NonMember) => NonMember,
            _ => Unknown,
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Member => "member",
            Membership::NonMember => "non-member",
            Membership::Unknown => "unknown",
        })
    }
}

/// Bounds for the oracles.
#[derive(Clone, Debug)]
pub struct LabBounds {
    /// Depth bound handed to `sn_check`.
    pub sn: usize,
    /// Largest term substituted in the universal clause.
    pub term_size: usize,
    /// Most reducts explored from one proof-term.
    pub reach: usize,
    /// Arguments tried in the implication clause.
    pub probes: Vec<ProofTerm>,
}

impl LabBounds {
    pub fn new(sn: usize) -> Self {
        LabBounds { sn, ..Default::default() }
    }
}

impl Default for LabBounds {
    fn default() -> Self {
        LabBounds { sn: 50, term_size: 3, reach: 20_000, probes: default_probes() }
    }
}

/// The proof-terms of size at most 2 over the variables `a`, `b`.
pub fn default_probes() -> Vec<ProofTerm> {
    use crate::proof::{by_size, Alphabet};
    let alpha = Alphabet {
        pvars: vec![crate::syntax::PVar::named("a"), crate::syntax::PVar::named("b")],
        tvars: Vec::new(),
        terms: Vec::new(),
    };
    by_size(&alpha, 2).into_iter().flatten().collect()
}

/// A set of proof-terms, given by a membership test.
#[derive(Clone, Debug, PartialEq)]
pub enum Candidate {
    /// Strongly normalizable terms.
    Sn,
    /// Terms without reducts.
    Normal,
    /// Proof variables only.
    EmptyPlusVars,
    /// The interpretation of a closed formula.
    Interp(Formula),
    /// An explicit finite set. Not a candidate in general; useful as a foil.
    Finite(BTreeSet<ProofTerm>),
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Candidate::Sn => f.write_str("sn"),
            Candidate::Normal => f.write_str("normal"),
            Candidate::EmptyPlusVars => f.write_str("empty-plus-vars"),
            Candidate::Interp(a) => write!(f, "interp {}", print_formula(a)),
            Candidate::Finite(set) => {
                let items: Vec<String> = set.iter().map(print_proof).collect();
                write!(f, "set {{{}}}", items.join(", "))
            }
        }
    }
}

fn sn_membership(p: &ProofTerm, bound: usize) -> Membership {
    match sn_check(p, bound) {
        SnVerdict::StronglyNormalizing(_) => Membership::Member,
        SnVerdict::CycleFound(_) => Membership::NonMember,
        SnVerdict::BoundExceeded(_) => Membership::Unknown,
    }
}

impl Candidate {
    pub fn membership(&self, m: &PreModel, p: &ProofTerm, bounds: &LabBounds) -> Result<Membership> {
        Lab::new(m, bounds).candidate(self, p, 0)
    }
}

#[derive(Clone, Debug)]
pub struct PreModel {
    sig: Signature,
    carriers: HashMap<Sort, Vec<Elem>>,
    funs: HashMap<Symbol, HashMap<Vec<Elem>, Elem>>,
    preds: HashMap<Symbol, HashMap<Vec<Elem>, Candidate>>,
}

impl PreModel {
    pub fn new(sig: Signature) -> Self {
        PreModel { sig, carriers: HashMap::new(), funs: HashMap::new(), preds: HashMap::new() }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn add_carrier(&mut self, sort: &str, elems: &[&str]) -> Result<()> {
        let s = Sort::new(sort);
        if !self.sig.has_sort(&s) {
            return Err(Error::sort(sort, "undeclared sort"));
        }
        self.carriers.entry(s).or_default().extend(elems.iter().map(|e| Symbol::new(e)));
        Ok(())
    }

    pub fn set_fun(&mut self, f: &str, args: &[&str], value: &str) -> Result<()> {
        let decl = self.sig.fun(&Symbol::new(f)).ok_or_else(|| Error::Unmapped(f.to_string()))?.clone();
        let args = self.elems_of(f, &decl.args, args)?;
        let value = self.elem_of(f, &decl.result, value)?;
        self.funs.entry(decl.name).or_default().insert(args, value);
        Ok(())
    }

    pub fn set_pred(&mut self, p: &str, args: &[&str], c: Candidate) -> Result<()> {
        let decl = self.sig.pred(&Symbol::new(p)).ok_or_else(|| Error::Unmapped(p.to_string()))?.clone();
        let args = self.elems_of(p, &decl.args, args)?;
        if let Candidate::Interp(a) = &c {
            self.sig.check_formula(a)?;
            if !a.is_closed() {
                return Err(Error::sort(print_formula(a), "candidate formula must be closed"));
            }
        }
        self.preds.entry(decl.name).or_default().insert(args, c);
        Ok(())
    }

    fn elem_of(&self, owner: &str, sort: &Sort, e: &str) -> Result<Elem> {
        let e = Symbol::new(e);
        if self.carrier(sort).contains(&e) {
            Ok(e)
        } else {
            Err(Error::sort(owner, format!("`{e}` is not an element of the carrier of {sort}")))
        }
    }

    fn elems_of(&self, owner: &str, sorts: &[Sort], es: &[&str]) -> Result<Vec<Elem>> {
        if sorts.len() != es.len() {
            return Err(Error::sort(owner, format!("expected {} arguments, found {}", sorts.len(), es.len())));
        }
        sorts.iter().zip(es).map(|(s, e)| self.elem_of(owner, s, e)).collect()
    }

    pub fn carrier(&self, sort: &Sort) -> &[Elem] {
        self.carriers.get(sort).map_or(&[], |v| v.as_slice())
    }

    /// All tuples over the carriers of `sorts`.
    fn tuples(&self, sorts: &[Sort]) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new()];
        for s in sorts {
            out = out
                .into_iter()
                .flat_map(|t| {
                    self.carrier(s).iter().map(move |e| {
                        let mut t = t.clone();
                        t.push(e.clone());
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Nonempty carriers and total function and predicate tables.
    pub fn validate(&self) -> Result<()> {
        for s in self.sig.sorts() {
            if self.carrier(s).is_empty() {
                return Err(Error::sort(s.to_string(), "empty carrier"));
            }
        }
        for f in self.sig.funs() {
            let table = self.funs.get(&f.name);
            for t in self.tuples(&f.args) {
                if table.and_then(|m| m.get(&t)).is_none() {
                    return Err(Error::sort(f.name.to_string(), format!("no value at ({})", join(&t))));
                }
            }
        }
        for p in self.sig.preds() {
            let table = self.preds.get(&p.name);
            for t in self.tuples(&p.args) {
                if table.and_then(|m| m.get(&t)).is_none() {
                    return Err(Error::sort(p.name.to_string(), format!("no candidate at ({})", join(&t))));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, t: &Term, phi: &Assignment) -> Result<Elem> {
        match t {
            Term::Var(x) => phi.get(x).cloned().ok_or_else(|| Error::Scope(format!("unassigned variable {}", x.name()))),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.value(a, phi)).collect::<Result<Vec<_>>>()?;
                self.funs
                    .get(f)
                    .and_then(|m| m.get(&vals))
                    .cloned()
                    .ok_or_else(|| Error::sort(f.to_string(), format!("no value at ({})", join(&vals))))
            }
        }
    }

    pub fn pred(&self, p: &Symbol, args: &[Elem]) -> Option<&Candidate> {
        self.preds.get(p).and_then(|m| m.get(args))
    }
}

fn join(es: &[Elem]) -> String {
    es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

const MAX_DEPTH: usize = 48;

/// A model together with bounds and the terms used by the universal clause.
struct Lab<'a> {
    m: &'a PreModel,
    bounds: &'a LabBounds,
    terms: HashMap<Sort, Vec<Term>>,
}

impl<'a> Lab<'a> {
    fn new(m: &'a PreModel, bounds: &'a LabBounds) -> Self {
        Lab { m, bounds, terms: closed_terms(&m.sig, bounds.term_size) }
    }

    fn candidate(&self, c: &Candidate, p: &ProofTerm, depth: usize) -> Result<Membership> {
        Ok(match c {
            Candidate::Sn => sn_membership(p, self.bounds.sn),
            Candidate::Normal => Membership::from_bool(reducts(p).is_empty()),
            Candidate::EmptyPlusVars => Membership::from_bool(matches!(p, ProofTerm::Axiom(_))),
            Candidate::Finite(set) => Membership::from_bool(set.contains(p)),
            Candidate::Interp(a) => {
                if depth > MAX_DEPTH {
                    return Ok(Membership::Unknown);
                }
                self.member(a, &Assignment::new(), p, depth + 1)?
            }
        })
    }

    fn member(&self, a: &Formula, phi: &Assignment, p: &ProofTerm, depth: usize) -> Result<Membership> {
        use Membership::*;
        if let Formula::Atom(pred, args) = a {
            let vals = args.iter().map(|t| self.m.value(t, phi)).collect::<Result<Vec<_>>>()?;
            let c = self.m.pred(pred, &vals).ok_or_else(|| Error::Unmapped(pred.to_string()))?;
            return self.candidate(c, p, depth);
        }
        let sn = sn_membership(p, self.bounds.sn);
        if sn != Member {
            return Ok(sn);
        }
        if matches!(a, Formula::Top | Formula::Bot) {
            return Ok(Member);
        }
        let Some(reach) = reachable(p, self.bounds.reach) else { return Ok(Unknown) };
        let mut reach: Vec<ProofTerm> = reach.into_iter().collect();
        reach.sort();
        let mut verdict = Member;
        for q in &reach {
            let v = match (a, q) {
                (Formula::Imp(x, y), ProofTerm::Lam(alpha, body)) => self.implication(x, y, phi, *alpha, body, depth)?,
                (Formula::And(x, y), ProofTerm::Pair(l, r)) => {
                    self.member(x, phi, l, depth)?.and(self.member(y, phi, r, depth)?)
                }
                (Formula::Or(x, _), ProofTerm::InjL(l)) => self.member(x, phi, l, depth)?,
                (Formula::Or(_, y), ProofTerm::InjR(r)) => self.member(y, phi, r, depth)?,
                (Formula::Forall(x, body), ProofTerm::TLam(y, inner)) => {
                    let mut v = Member;
                    for t in self.terms.get(&x.sort).into_iter().flatten() {
                        let q1 = subst_term_in_proof(inner, y, t);
                        for e in self.m.carrier(&x.sort) {
                            let mut psi = phi.clone();
                            psi.insert(x.clone(), e.clone());
                            v = v.and(self.member(body, &psi, &q1, depth)?);
                            if v == NonMember {
                                return Ok(NonMember);
                            }
                        }
                    }
                    v
                }
                (Formula::Exists(x, body), ProofTerm::Witness(_, inner)) => {
                    let mut v = NonMember;
                    for e in self.m.carrier(&x.sort) {
                        let mut psi = phi.clone();
                        psi.insert(x.clone(), e.clone());
                        v = v.or(self.member(body, &psi, inner, depth)?);
                        if v == Member {
                            break;
                        }
                    }
                    v
                }
                _ => Member,
            };
            verdict = verdict.and(v);
            if verdict == NonMember {
                break;
            }
        }
        Ok(verdict)
    }

    /// Only the probes that are members of the antecedent are tried, so a
    /// clean run is reported as unknown.
    fn implication(
        &self,
        x: &Formula,
        y: &Formula,
        phi: &Assignment,
        alpha: crate::syntax::PVar,
        body: &ProofTerm,
        depth: usize,
    ) -> Result<Membership> {
        let mut v = Membership::Unknown;
        for arg in &self.bounds.probes {
            if self.member(x, phi, arg, depth)? != Membership::Member {
                continue;
            }
            match self.member(y, phi, &subst_proof(body, alpha, arg), depth)? {
                Membership::NonMember => return Ok(Membership::NonMember),
                _ => v = Membership::Unknown,
            }
        }
        Ok(v)
    }
}

fn arg_tuples(
    sorts: &[Sort],
    by_size: &[HashMap<Sort, Vec<Term>>],
    acc: &mut Vec<Term>,
    budget: usize,
    found: &mut Vec<Vec<Term>>,
) {
    let Some((s, rest)) = sorts.split_first() else {
        if budget == 0 {
            found.push(acc.clone());
        }
        return;
    };
    for k in 1..=budget {
        for t in by_size[k].get(s).into_iter().flatten() {
            acc.push(t.clone());
            arg_tuples(rest, by_size, acc, budget - k, found);
            acc.pop();
        }
    }
}

/// Closed terms of each sort up to `max` symbols, plus one variable per sort.
fn closed_terms(sig: &Signature, max: usize) -> HashMap<Sort, Vec<Term>> {
    let mut by_size: Vec<HashMap<Sort, Vec<Term>>> = vec![HashMap::new(); max + 1];
    for n in 1..=max {
        for f in sig.funs() {
            let mut found = Vec::new();
            arg_tuples(&f.args, &by_size, &mut Vec::new(), n - 1, &mut found);
            let terms = found.into_iter().map(|args| Term::App(f.name.clone(), args));
            by_size[n].entry(f.result.clone()).or_default().extend(terms);
        }
    }
    let mut out: HashMap<Sort, Vec<Term>> = HashMap::new();
    for (i, s) in sig.sorts().iter().enumerate() {
        let v = out.entry(s.clone()).or_default();
        v.push(Term::Var(TermVar::new(i as u32, s.clone())));
        for level in &by_size {
            v.extend(level.get(s).into_iter().flatten().cloned());
        }
    }
    out
}

/// Membership of `p` in the interpretation of `a` under `phi`.
pub fn interp_membership(
    m: &PreModel,
    a: &Formula,
    phi: &Assignment,
    p: &ProofTerm,
    bounds: &LabBounds,
) -> Result<Membership> {
    Lab::new(m, bounds).member(a, phi, p, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateAxiom {
    /// Members are strongly normalizable.
    Sn,
    /// Proof variables are members.
    Variables,
    /// Members reduce to members.
    Reduction,
    /// An elimination whose one-step reducts are all members is a member.
    Elimination,
}

impl CandidateAxiom {
    pub const ALL: [CandidateAxiom; 4] =
        [CandidateAxiom::Sn, CandidateAxiom::Variables, CandidateAxiom::Reduction, CandidateAxiom::Elimination];
}

impl fmt::Display for CandidateAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateAxiom::Sn => "sn",
            CandidateAxiom::Variables => "variables",
            CandidateAxiom::Reduction => "reduction",
            CandidateAxiom::Elimination => "elimination",
        })
    }
}

const KEEP: usize = 5;

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub axiom: CandidateAxiom,
    pub checked: usize,
    pub unknown: usize,
    /// The first few offending terms, in corpus order.
    pub counterexamples: Vec<ProofTerm>,
    pub violations: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug)]
pub struct CandidateReport {
    pub candidate: String,
    pub corpus: usize,
    pub axioms: Vec<AxiomReport>,
}

impl CandidateReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(AxiomReport::passed)
    }

    pub fn axiom(&self, a: CandidateAxiom) -> &AxiomReport {
        self.axioms.iter().find(|r| r.axiom == a).unwrap()
    }

    pub fn unknown(&self) -> usize {
        self.axioms.iter().map(|r| r.unknown).sum()
    }
}

impl fmt::Display for CandidateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "candidate {} over {} terms", self.candidate, self.corpus)?;
        for r in &self.axioms {
            let status = if r.passed() { "pass" } else { "FAIL" };
            write!(f, "  {:<12} {status}  checked {} unknown {}", r.axiom.to_string(), r.checked, r.unknown)?;
            if !r.passed() {
                let ces: Vec<String> = r.counterexamples.iter().map(print_proof).collect();
                write!(f, "  violations {}: {}", r.violations, ces.join(", "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    unknown: usize,
    violations: usize,
    ces: Vec<ProofTerm>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.unknown += other.unknown;
        self.violations += other.violations;
        self.ces.extend(other.ces);
        self.ces.truncate(KEEP);
        self
    }

    fn report(self, axiom: CandidateAxiom) -> AxiomReport {
        AxiomReport { axiom, checked: self.checked, unknown: self.unknown, counterexamples: self.ces, violations: self.violations }
    }
}

/// Per-term outcome for the four axioms.
type Outcome = [Tally; 4];

fn merge4(a: Outcome, b: Outcome) -> Outcome {
    let [a0, a1, a2, a3] = a;
    let [b0, b1, b2, b3] = b;
    [a0.merge(b0), a1.merge(b1), a2.merge(b2), a3.merge(b3)]
}

/// Tests the four candidate axioms for `c` on every term of `corpus`.
pub fn check_candidate_axioms(
    m: &PreModel,
    c: &Candidate,
    corpus: &[ProofTerm],
    bounds: &LabBounds,
) -> Result<CandidateReport> {
    let lab = Lab::new(m, bounds);
    let mem = |p: &ProofTerm| lab.candidate(c, p, 0);

    let mut vars: BTreeSet<crate::syntax::PVar> = corpus.iter().flat_map(|p| p.free_pvars()).collect();
    if vars.is_empty() {
        vars.insert(crate::syntax::PVar::named("a"));
    }
    let mut var_tally = Tally::default();
    for v in vars {
        let p = ProofTerm::Axiom(v);
        var_tally.checked += 1;
        match mem(&p)? {
            Membership::Member => {}
            Membership::Unknown => var_tally.unknown += 1,
            Membership::NonMember => {
                var_tally.violations += 1;
                if var_tally.ces.len() < KEEP {
                    var_tally.ces.push(p);
                }
            }
        }
    }

    let per_term = |p: &ProofTerm| -> Result<Outcome> {
        let mut out: Outcome = Default::default();
        let here = mem(p)?;
        let flag = |t: &mut Tally, q: &ProofTerm| {
            t.violations += 1;
            t.ces.push(q.clone());
        };
        if here == Membership::Member {
            out[0].checked += 1;
            match sn_check(p, bounds.sn) {
                SnVerdict::StronglyNormalizing(_) => {}
                SnVerdict::BoundExceeded(_) => out[0].unknown += 1,
                SnVerdict::CycleFound(_) => flag(&mut out[0], p),
            }
        }
        let rs = reducts(p);
        if here == Membership::Member && !rs.is_empty() {
            out[2].checked += 1;
            let mut worst = Membership::Member;
            for r in &rs {
                worst = worst.and(mem(r)?);
                if worst == Membership::NonMember {
                    break;
                }
            }
            match worst {
                Membership::NonMember => flag(&mut out[2], p),
                Membership::Unknown => out[2].unknown += 1,
                Membership::Member => {}
            }
        }
        if p.is_elimination() {
            let mut all = Membership::Member;
            for r in &rs {
                all = all.and(mem(r)?);
                if all != Membership::Member {
                    break;
                }
            }
            if all == Membership::Member {
                out[3].checked += 1;
                match here {
                    Membership::NonMember => flag(&mut out[3], p),
                    Membership::Unknown => out[3].unknown += 1,
                    Membership::Member => {}
                }
            }
        }
        Ok(out)
    };

    let results: Vec<Result<Outcome>> = corpus.par_iter().map(per_term).collect();
    let mut total: Outcome = Default::default();
    for r in results {
        total = merge4(total, r?);
    }
    let [t0, _, t2, t3] = total;
    Ok(CandidateReport {
        candidate: c.to_string(),
        corpus: corpus.len(),
        axioms: vec![
            t0.report(CandidateAxiom::Sn),
            var_tally.report(CandidateAxiom::Variables),
            t2.report(CandidateAxiom::Reduction),
            t3.report(CandidateAxiom::Elimination),
        ],
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub assignment: String,
    /// `None` for term rules, whose sides denote different elements.
    pub proof: Option<ProofTerm>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug)]
pub struct RuleReport {
    pub rule: String,
    pub instances: usize,
    pub unknown: usize,
    pub counterexample: Option<Mismatch>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, Default)]
pub struct CongruenceReport {
    pub rules: Vec<RuleReport>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.rules.iter().all(RuleReport::passed)
    }

    pub fn unknown(&self) -> usize {
        self.rules.iter().map(|r| r.unknown).sum()
    }
}

impl fmt::Display for CongruenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rules.is_empty() {
            return writeln!(f, "no rules");
        }
        for r in &self.rules {
            let status = if r.passed() { "pass" } else { "FAIL" };
            write!(f, "rule {}  {status}  instances {} unknown {}", r.rule, r.instances, r.unknown)?;
            if let Some(c) = &r.counterexample {
                write!(f, "  at {}", c.assignment)?;
                if let Some(p) = &c.proof {
                    write!(f, " on {}", print_proof(p))?;
                }
                write!(f, ": {} vs {}", c.lhs, c.rhs)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn rule_text(r: &RewriteRule) -> String {
    match r {
        RewriteRule::Term { lhs, rhs } => format!("{} -> {}", print_term(lhs), print_term(rhs)),
        RewriteRule::Prop { .. } => {
            let (a, b) = r.as_formulas().unwrap();
            format!("{} -> {}", print_formula(&a), print_formula(&b))
        }
    }
}

fn show_assignment(phi: &Assignment) -> String {
    let parts: Vec<String> = phi.iter().map(|(x, e)| format!("{}={e}", x.name())).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Checks that both sides of every rule denote the same element, or the
/// same set of proof-terms on the corpus, under every assignment of the
/// rule's variables.
pub fn check_premodel_congruence(
    m: &PreModel,
    rules: &[RewriteRule],
    corpus: &[ProofTerm],
    bounds: &LabBounds,
) -> Result<CongruenceReport> {
    let lab = Lab::new(m, bounds);
    let mut report = CongruenceReport::default();
    for rule in rules {
        let vars: Vec<TermVar> = rule.lhs_vars().into_iter().collect();
        let sorts: Vec<Sort> = vars.iter().map(|v| v.sort.clone()).collect();
        let mut rr = RuleReport { rule: rule_text(rule), instances: 0, unknown: 0, counterexample: None };
        for tuple in m.tuples(&sorts) {
            let phi: Assignment = vars.iter().cloned().zip(tuple).collect();
            match rule {
                RewriteRule::Term { lhs, rhs } => {
                    rr.instances += 1;
                    let (l, r) = (m.value(lhs, &phi)?, m.value(rhs, &phi)?);
                    if l != r {
                        rr.counterexample = Some(Mismatch {
                            assignment: show_assignment(&phi),
                            proof: None,
                            lhs: l.to_string(),
                            rhs: r.to_string(),
                        });
                    }
                }
                RewriteRule::Prop { .. } => {
                    let (a, b) = rule.as_formulas().unwrap();
                    let outcomes: Vec<Result<(Membership, Membership)>> = corpus
                        .par_iter()
                        .map(|p| Ok((lab.member(&a, &phi, p, 0)?, lab.member(&b, &phi, p, 0)?)))
                        .collect();
                    for (p, o) in corpus.iter().zip(outcomes) {
                        let (x, y) = o?;
                        rr.instances += 1;
                        if x == Membership::Unknown || y == Membership::Unknown {
                            rr.unknown += 1;
                        } else if x != y {
                            rr.counterexample = Some(Mismatch {
                                assignment: show_assignment(&phi),
                                proof: Some(p.clone()),
                                lhs: x.to_string(),
                                rhs: y.to_string(),
                            });
                            break;
                        }
                    }
                }
            }
            if rr.counterexample.is_some() {
                break;
            }
        }
        report.rules.push(rr);
    }
    Ok(report)
}

fn atoms(items: &[SExpr], what: &str) -> Result<Vec<String>> {
    items.iter().map(|s| s.expect_atom(what).map(str::to_string)).collect()
}

fn parse_candidate(sig: &Signature, items: &[SExpr]) -> Result<Candidate> {
    let pos = items.first().map(SExpr::pos).unwrap_or_default();
    let tag = |s: &str| -> Result<Candidate> {
        match s {
            "sn" => Ok(Candidate::Sn),
            "normal" => Ok(Candidate::Normal),
            "empty-plus-vars" => Ok(Candidate::EmptyPlusVars),
            other => Err(Error::syntax(pos, format!("unknown candidate tag `{other}`"))),
        }
    };
    match items {
        [one] if one.as_atom().is_some() => tag(one.as_atom().unwrap()),
        [one] if one.head() == Some("interp") => parse_candidate(sig, one.as_list().unwrap()),
        [kw, f] if kw.as_atom() == Some("interp") => Ok(Candidate::Interp(parse_formula_sexpr(sig, f)?)),
        _ => Err(Error::syntax(pos, "candidate: sn | normal | empty-plus-vars | interp <formula>")),
    }
}

/// Reads `(premodel (carrier s e…) (fun f ((e…) e)…) (pred p ((e…) tag)…))`.
pub fn parse_premodel(text: &str, sig: &Signature) -> Result<PreModel> {
    let doc = sexpr::parse_one(text)?;
    let forms = doc.expect_form("premodel")?;
    let mut m = PreModel::new(sig.clone());
    for form in forms {
        let items = form.expect_list("premodel entry")?;
        let pos = form.pos();
        let name = items.get(1).ok_or_else(|| Error::syntax(pos, "missing name"))?.expect_atom("name")?;
        match form.head() {
            Some("carrier") => {
                let elems = atoms(&items[2..], "element")?;
                let refs: Vec<&str> = elems.iter().map(String::as_str).collect();
                m.add_carrier(name, &refs)?;
            }
            Some(kind @ ("fun" | "pred")) => {
                for entry in &items[2..] {
                    let parts = entry.expect_list("table entry")?;
                    let Some((args, rest)) = parts.split_first() else {
                        return Err(Error::syntax(entry.pos(), "((<elems>) <value>)"));
                    };
                    let args = atoms(args.expect_list("argument tuple")?, "element")?;
                    let args: Vec<&str> = args.iter().map(String::as_str).collect();
                    if kind == "fun" {
                        let [v] = rest else { return Err(Error::syntax(entry.pos(), "((<elems>) <elem>)")) };
                        m.set_fun(name, &args, v.expect_atom("element")?)?;
                    } else {
                        m.set_pred(name, &args, parse_candidate(sig, rest)?)?;
                    }
                }
            }
            _ => return Err(Error::syntax(pos, "expected carrier, fun or pred")),
        }
    }
    m.validate()?;
    Ok(m)
}

pub fn print_premodel(m: &PreModel) -> String {
    let mut out = String::from("(premodel");
    for s in m.sig.sorts() {
        out.push_str(&format!("\n  (carrier {s}"));
        for e in m.carrier(s) {
            out.push_str(&format!(" {e}"));
        }
        out.push(')');
    }
    for f in m.sig.funs() {
        out.push_str(&format!("\n  (fun {}", f.name));
        for t in m.tuples(&f.args) {
            if let Some(v) = m.funs.get(&f.name).and_then(|tab| tab.get(&t)) {
                out.push_str(&format!(" (({}) {v})", join(&t)));
            }
        }
        out.push(')');
    }
    for p in m.sig.preds() {
        out.push_str(&format!("\n  (pred {}", p.name));
        for t in m.tuples(&p.args) {
            if let Some(c) = m.pred(&p.name, &t) {
                out.push_str(&format!(" (({}) {c})", join(&t)));
            }
        }
        out.push(')');
    }
    out.push_str(")\n");
    out
}
