//! Three-valued evaluation of formulas of S in the standard tree model.
//!
//! Builtin relations are computed by their definitions except `Red`,
//! `Redn`, `Red*` and `SN`, which go through the reduction engine.
//! Quantifiers are decided exactly when a guard pins the bound variable to
//! a finite set (an equation, the reducts of a tree, the sort codes), by a
//! symbolic check when the body holds for an unknown value, and otherwise
//! by enumeration up to the tree bound.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::domains::Domains;
use crate::codec::{s_sort, BuiltinRelationSet, Tree, RELATIONS};
use crate::error::{Error, Result};
use crate::proof::{reducts, redn, sn_check, ProofTerm, SnVerdict};
use crate::syntax::{print_formula, subst_formula, Formula, Signature, Symbol, Term, TermVar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EvalVerdict {
    True,
    False,
    /// The bound that was hit.
    Unknown(String),
}

impl EvalVerdict {
    fn of(b: bool) -> Self {
        if b {
            EvalVerdict::True
        } else {
            EvalVerdict::False
        }
    }

    pub fn is_true(&self) -> bool {
        *self == EvalVerdict::True
    }

    pub fn is_false(&self) -> bool {
        *self == EvalVerdict::False
    }

    pub fn and(self, other: EvalVerdict) -> EvalVerdict {
        use EvalVerdict::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (Unknown(r), _) | (_, Unknown(r)) => Unknown(r),
            _ => True,
        }
    }

    pub fn or(self, other: EvalVerdict) -> EvalVerdict {
        use EvalVerdict::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (Unknown(r), _) | (_, Unknown(r)) => Unknown(r),
            _ => False,
        }
    }

    pub fn not(self) -> EvalVerdict {
        use EvalVerdict::*;
        match self {
            True => False,
            False => True,
            u => u,
        }
    }
}

impl fmt::Display for EvalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalVerdict::True => f.write_str("True"),
            EvalVerdict::False => f.write_str("False"),
            EvalVerdict::Unknown(r) => write!(f, "Unknown ({r})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest tree enumerated for a quantifier.
    pub tree: usize,
    /// Bound passed to the strong normalization check.
    pub sn: usize,
    /// Largest reduct set explored for `Red*`.
    pub reach: usize,
}

impl Bounds {
    pub fn new(tree: usize, sn: usize) -> Self {
        Bounds { tree, sn, reach: 20_000 }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(6, 50)
    }
}

const OPAQUE_BASE: u16 = 0xF000;
const OPAQUE_VAR: u32 = 3_000_000;
const CANON_VAR: u32 = 4_000_000;
/// Enumerations longer than this are split across threads.
const PAR_CHUNK: usize = 64;
const MAX_ATOMS: usize = 16;

type Env = Vec<(TermVar, Tree)>;

enum Val {
    Tree(Tree),
    /// The value depends on an opaque tree; the residual term.
    Stuck(Term),
}

enum Atomic {
    Known(EvalVerdict),
    /// Depends on an opaque tree, keyed by its residual form.
    Opaque(Key),
}

/// A propositional variable of the symbolic check.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Key {
    Atom(String, Vec<String>),
    Other(String),
}

impl Key {
    /// Atoms made true by this one: every relation on proofs implies
    /// `Proof` of its proof arguments.
    fn implied(&self) -> Vec<Key> {
        let Key::Atom(p, a) = self else { return Vec::new() };
        let k = |p: &str, x: &String| Key::Atom(p.into(), vec![x.clone()]);
        match (p.as_str(), a.as_slice()) {
            ("SN" | "Elim", [x]) => vec![k("Proof", x)],
            ("ProofVar", [x]) => vec![k("Nat", x)],
            ("Red" | "Red*", [x, y]) => vec![k("Proof", x), k("Proof", y)],
            ("Redn", [x, n, y]) => vec![k("Proof", x), k("Nat", n), k("Proof", y)],
            _ => Vec::new(),
        }
    }
}

struct Reach {
    trees: Vec<Tree>,
    set: HashSet<Tree>,
    complete: bool,
}

enum Domain {
    /// Every value making the guard true is listed.
    Exact(Vec<Tree>),
    /// Every value up to a bound; the reason names it.
    Bounded(Vec<Tree>, String),
}

enum Prop {
    Const(bool),
    Var(usize),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Imp(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn eval(&self, asg: u32) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Var(i) => asg >> i & 1 == 1,
            Prop::And(a, b) => a.eval(asg) && b.eval(asg),
            Prop::Or(a, b) => a.eval(asg) || b.eval(asg),
            Prop::Imp(a, b) => !a.eval(asg) || b.eval(asg),
        }
    }
}

/// Evaluator for formulas of S over the builtin definitions of a source
/// signature.
pub struct Evaluator {
    b: BuiltinRelationSet,
    bounds: Bounds,
    domains: Domains,
    sn_cache: Mutex<HashMap<Tree, EvalVerdict>>,
    reach_cache: Mutex<HashMap<Tree, Arc<Reach>>>,
}

/// Evaluates a closed formula of S.
pub fn eval_formula(source: &Signature, f: &Formula, bounds: Bounds) -> Result<EvalVerdict> {
    Evaluator::new(source, bounds)?.eval(f)
}

impl Evaluator {
    pub fn new(source: &Signature, bounds: Bounds) -> Result<Self> {
        let b = BuiltinRelationSet::new(source)?;
        let domains = Domains::new(b.codec(), bounds.tree);
        Ok(Evaluator {
            b,
            bounds,
            domains,
            sn_cache: Mutex::new(HashMap::new()),
            reach_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn builtins(&self) -> &BuiltinRelationSet {
        &self.b
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn domains(&self) -> &Domains {
        &self.domains
    }

    pub fn eval(&self, f: &Formula) -> Result<EvalVerdict> {
        self.eval_at(f, &[])
    }

    /// Evaluates `f` with its free variables bound to trees.
    pub fn eval_at(&self, f: &Formula, assignment: &[(TermVar, Tree)]) -> Result<EvalVerdict> {
        if let Some(x) = f.free_vars().into_iter().find(|x| !assignment.iter().any(|(y, _)| y == x)) {
            return Err(Error::Scope(format!("free variable `{}` has no value", x.name())));
        }
        let mut env = assignment.to_vec();
        self.formula(f, &mut env)
    }

    fn lang_len(&self) -> usize {
        self.b.codec().lang().len()
    }

    fn opaque(&self, t: &Tree) -> bool {
        t.ctor() >= self.lang_len() || t.kids().iter().any(|k| self.opaque(k))
    }

    fn tree_term(&self, t: &Tree) -> Term {
        if t.ctor() >= self.lang_len() {
            return Term::Var(TermVar::new(OPAQUE_VAR + (t.ctor() as u32 - OPAQUE_BASE as u32), s_sort()));
        }
        let lang = self.b.codec().lang();
        Term::App(Symbol::new(lang.name(t.ctor())), t.kids().iter().map(|k| self.tree_term(k)).collect())
    }

    fn residual(&self, v: &Val) -> Term {
        match v {
            Val::Tree(t) => self.tree_term(t),
            Val::Stuck(t) => t.clone(),
        }
    }

    fn term(&self, t: &Term, env: &Env) -> Result<Val> {
        match t {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, v)| Val::Tree(v.clone()))
                .ok_or_else(|| Error::Scope(format!("free variable `{}` has no value", x.name()))),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>>>()?;
                let stuck = vals.iter().any(|v| matches!(v, Val::Stuck(_)));
                let residual = || Val::Stuck(Term::App(f.clone(), vals.iter().map(|v| self.residual(v)).collect()));
                let lang = self.b.codec().lang();
                if let Some(c) = lang.find(f.as_str()) {
                    if lang.arity(c) != args.len() {
                        return Err(Error::sort(f.as_str(), format!("constructor has arity {}", lang.arity(c))));
                    }
                    if stuck {
                        return Ok(residual());
                    }
                    let kids = vals.into_iter().map(|v| if let Val::Tree(t) = v { t } else { unreachable!() }).collect();
                    return Ok(Val::Tree(Tree::new(c as u16, kids)));
                }
                let env_pr = self.b.env();
                let d = env_pr.find(f.as_str()).ok_or_else(|| Error::Unregistered(f.to_string()))?;
                if env_pr.defs()[d].arity != args.len() {
                    return Err(Error::sort(f.as_str(), format!("definition has arity {}", env_pr.defs()[d].arity)));
                }
                if stuck {
                    return Ok(residual());
                }
                let trees: Vec<Tree> = vals.iter().map(|v| if let Val::Tree(t) = v { t.clone() } else { unreachable!() }).collect();
                Ok(match env_pr.eval_partial(d, &trees) {
                    Some(t) => Val::Tree(t),
                    None => residual(),
                })
            }
        }
    }

    fn decode(&self, t: &Tree) -> Option<ProofTerm> {
        if !self.b.env().holds("proof", std::slice::from_ref(t)).ok()? {
            return None;
        }
        self.b.codec().decode_proof(t).ok()
    }

    fn sn(&self, t: &Tree) -> EvalVerdict {
        if let Some(v) = self.sn_cache.lock().unwrap().get(t) {
            return v.clone();
        }
        let v = match self.decode(t) {
            None => EvalVerdict::False,
            Some(p) => match sn_check(&p, self.bounds.sn) {
                SnVerdict::StronglyNormalizing(_) => EvalVerdict::True,
                SnVerdict::CycleFound(_) => EvalVerdict::False,
                SnVerdict::BoundExceeded(b) => EvalVerdict::Unknown(format!("sn-bound {b}")),
            },
        };
        self.sn_cache.lock().unwrap().insert(t.clone(), v.clone());
        v
    }

    /// Proofs reachable from `t` in any number of steps; empty when `t` is
    /// not a proof.
    fn reach(&self, t: &Tree) -> Arc<Reach> {
        if let Some(r) = self.reach_cache.lock().unwrap().get(t) {
            return r.clone();
        }
        let r = match self.decode(t) {
            None => Reach { trees: Vec::new(), set: HashSet::new(), complete: true },
            Some(p) => {
                let codec = self.b.codec();
                let mut seen: HashSet<ProofTerm> = HashSet::from([p.clone()]);
                let mut order = vec![p];
                let mut i = 0;
                let mut complete = true;
                while i < order.len() {
                    for q in reducts(&order[i]) {
                        if !seen.contains(&q) {
                            if seen.len() >= self.bounds.reach {
                                complete = false;
                                break;
                            }
                            seen.insert(q.clone());
                            order.push(q);
                        }
                    }
                    if !complete {
                        break;
                    }
                    i += 1;
                }
                let trees: Vec<Tree> = order.iter().map(|q| codec.encode_proof(q)).collect();
                Reach { set: trees.iter().cloned().collect(), trees, complete }
            }
        };
        let r = Arc::new(r);
        self.reach_cache.lock().unwrap().insert(t.clone(), r.clone());
        r
    }

    fn reach_reason(&self) -> String {
        format!("reach-bound {}", self.bounds.reach)
    }

    fn relation(&self, p: &str, args: &[Tree]) -> Result<EvalVerdict> {
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::sort(p, format!("expects {n} arguments")))
            }
        };
        Ok(match p {
            "=" => {
                arity(2)?;
                EvalVerdict::of(args[0] == args[1])
            }
            "SN" => {
                arity(1)?;
                self.sn(&args[0])
            }
            "Red*" => {
                arity(2)?;
                let r = self.reach(&args[0]);
                if r.set.contains(&args[1]) {
                    EvalVerdict::True
                } else if r.complete {
                    EvalVerdict::False
                } else {
                    EvalVerdict::Unknown(self.reach_reason())
                }
            }
            "Red" => {
                arity(2)?;
                match (self.decode(&args[0]), self.decode(&args[1])) {
                    (Some(a), Some(b)) => EvalVerdict::of(reducts(&a).contains(&b)),
                    _ => EvalVerdict::False,
                }
            }
            "Redn" => {
                arity(3)?;
                let n = self.b.codec().lang().as_num(&args[1]);
                match (self.decode(&args[0]), n, self.decode(&args[2])) {
                    (Some(a), Some(n), Some(b)) => EvalVerdict::of(redn(&a, n as usize).contains(&b)),
                    _ => EvalVerdict::False,
                }
            }
            _ => {
                let (_, def, n) =
                    RELATIONS.iter().find(|(r, _, _)| *r == p).ok_or_else(|| Error::Unregistered(p.to_string()))?;
                arity(*n)?;
                EvalVerdict::of(self.b.env().holds(def, args)?)
            }
        })
    }

    fn atom(&self, p: &Symbol, args: &[Term], env: &Env) -> Result<Atomic> {
        let vals = args.iter().map(|a| self.term(a, env)).collect::<Result<Vec<_>>>()?;
        let concrete: Option<Vec<Tree>> = vals
            .iter()
            .map(|v| match v {
                Val::Tree(t) if !self.opaque(t) => Some(t.clone()),
                _ => None,
            })
            .collect();
        if let Some(trees) = concrete {
            return Ok(Atomic::Known(self.relation(p.as_str(), &trees)?));
        }
        if p.as_str() == "=" {
            if let [Val::Tree(a), Val::Tree(b)] = vals.as_slice() {
                if a == b {
                    return Ok(Atomic::Known(EvalVerdict::True));
                }
            }
        }
        let args = vals.iter().map(|v| crate::syntax::print_term(&self.residual(v))).collect();
        Ok(Atomic::Opaque(Key::Atom(p.to_string(), args)))
    }

    fn formula(&self, f: &Formula, env: &mut Env) -> Result<EvalVerdict> {
        use EvalVerdict::*;
        Ok(match f {
            Formula::Atom(p, args) => match self.atom(p, args, env)? {
                Atomic::Known(v) => v,
                Atomic::Opaque(_) => Unknown("opaque value".into()),
            },
            Formula::Top => True,
            Formula::Bot => False,
            Formula::And(a, b) => match self.formula(a, env)? {
                False => False,
                l => l.and(self.formula(b, env)?),
            },
            Formula::Or(a, b) => match self.formula(a, env)? {
                True => True,
                l => l.or(self.formula(b, env)?),
            },
            Formula::Imp(a, b) => match self.formula(a, env)? {
                False => True,
                l => l.not().or(self.formula(b, env)?),
            },
            Formula::Forall(x, body) => self.quantifier(true, x, body, env)?,
            Formula::Exists(x, body) => self.quantifier(false, x, body, env)?,
        })
    }

    fn bound_in(&self, t: &Term, env: &Env) -> bool {
        t.free_vars().iter().all(|v| env.iter().any(|(y, _)| y == v))
    }

    fn quantifier(&self, universal: bool, x: &TermVar, body: &Formula, env: &mut Env) -> Result<EvalVerdict> {
        if x.sort != s_sort() {
            return Err(Error::sort(x.name(), format!("quantified variables range over {}", s_sort())));
        }
        if universal {
            if let Some(v) = self.guarded_chain(x, body, env)? {
                return Ok(v);
            }
        }
        let domain = self.domain(universal, x, body, env)?;
        let (values, reason) = match domain {
            Domain::Exact(vs) => (vs, None),
            Domain::Bounded(vs, r) => (vs, Some(r)),
        };
        if universal && reason.is_some() && self.symbolic(x, body, env)? {
            return Ok(EvalVerdict::True);
        }
        let v = self.sweep(universal, x, body, env, &values)?;
        Ok(match (reason, v) {
            (None, v) => v,
            (Some(_), EvalVerdict::False) if universal => EvalVerdict::False,
            (Some(_), EvalVerdict::True) if !universal => EvalVerdict::True,
            (Some(r), EvalVerdict::Unknown(inner)) => EvalVerdict::Unknown(inner.min(r)),
            (Some(r), _) => EvalVerdict::Unknown(r),
        })
    }

    /// Folds the body over `values`, stopping at the first decisive one.
    fn sweep(&self, universal: bool, x: &TermVar, body: &Formula, env: &Env, values: &[Tree]) -> Result<EvalVerdict> {
        let decisive = if universal { EvalVerdict::False } else { EvalVerdict::True };
        let neutral = if universal { EvalVerdict::True } else { EvalVerdict::False };
        let one = |t: &Tree| -> Result<EvalVerdict> {
            let mut e = env.clone();
            e.push((x.clone(), t.clone()));
            self.formula(body, &mut e)
        };
        let mut acc = neutral;
        for chunk in values.chunks(PAR_CHUNK) {
            let results: Vec<Result<EvalVerdict>> = if values.len() > PAR_CHUNK {
                chunk.par_iter().map(one).collect()
            } else {
                chunk.iter().map(one).collect()
            };
            for r in results {
                let v = r?;
                if v == decisive {
                    return Ok(v);
                }
                if let EvalVerdict::Unknown(_) = v {
                    if !matches!(acc, EvalVerdict::Unknown(_)) {
                        acc = v;
                    }
                }
            }
        }
        Ok(acc)
    }

    /// `∀x1…∀xk (… ∧ Red*(s, pat) ∧ … → B)` with every `xi` occurring in
    /// `pat`: the `xi` range over the matches of `pat` among the reducts
    /// of `s`.
    fn guarded_chain(&self, x: &TermVar, body: &Formula, env: &mut Env) -> Result<Option<EvalVerdict>> {
        let mut chain = vec![x.clone()];
        let mut inner = body;
        while let Formula::Forall(y, b) = inner {
            chain.push(y.clone());
            inner = b;
        }
        let Formula::Imp(ante, _) = inner else { return Ok(None) };
        let mut guards = Vec::new();
        conjuncts(ante, &mut guards);
        for g in guards {
            let Formula::Atom(p, args) = g else { continue };
            if p.as_str() != "Red*" || !self.bound_in(&args[0], env) {
                continue;
            }
            let pat = &args[1];
            let pv = pat.free_vars();
            if !chain.iter().all(|c| pv.contains(c)) || !pv.iter().all(|v| chain.contains(v) || env.iter().any(|(y, _)| y == v)) {
                continue;
            }
            let Val::Tree(s) = self.term(&args[0], env)? else { continue };
            if self.opaque(&s) {
                continue;
            }
            let reach = self.reach(&s);
            let mut acc = EvalVerdict::True;
            for r in &reach.trees {
                let mut binds = Vec::new();
                match self.match_pattern(pat, r, &chain, env, &mut binds)? {
                    None => return Ok(None),
                    Some(false) => continue,
                    Some(true) => {}
                }
                let n = env.len();
                env.extend(binds);
                let v = self.formula(inner, env);
                env.truncate(n);
                acc = acc.and(v?);
                if acc.is_false() {
                    return Ok(Some(acc));
                }
            }
            if !reach.complete && acc.is_true() {
                acc = EvalVerdict::Unknown(self.reach_reason());
            }
            return Ok(Some(acc));
        }
        Ok(None)
    }

    /// `None` when the pattern cannot be matched syntactically.
    fn match_pattern(
        &self,
        pat: &Term,
        t: &Tree,
        chain: &[TermVar],
        env: &Env,
        binds: &mut Vec<(TermVar, Tree)>,
    ) -> Result<Option<bool>> {
        match pat {
            Term::Var(v) if chain.contains(v) => {
                if let Some((_, b)) = binds.iter().find(|(w, _)| w == v) {
                    return Ok(Some(b == t));
                }
                binds.push((v.clone(), t.clone()));
                Ok(Some(true))
            }
            _ if pat.free_vars().iter().all(|v| !chain.contains(v)) => Ok(match self.term(pat, env)? {
                Val::Tree(p) => Some(p == *t),
                Val::Stuck(_) => None,
            }),
            Term::App(f, args) => {
                let Some(c) = self.b.codec().lang().find(f.as_str()) else { return Ok(None) };
                if t.ctor() != c || t.kids().len() != args.len() {
                    return Ok(Some(false));
                }
                for (a, k) in args.iter().zip(t.kids()) {
                    match self.match_pattern(a, k, chain, env, binds)? {
                        Some(true) => {}
                        other => return Ok(other),
                    }
                }
                Ok(Some(true))
            }
            Term::Var(_) => Ok(None),
        }
    }

    /// The values of `x` worth trying: guards of the form `G(…x…)` among
    /// the hypotheses (for `∀`) or conjuncts (for `∃`) of the body, looking
    /// through further quantifiers of the same kind.
    fn domain(&self, universal: bool, x: &TermVar, body: &Formula, env: &Env) -> Result<Domain> {
        let mut inner = body;
        loop {
            match inner {
                Formula::Forall(_, b) if universal => inner = b,
                Formula::Exists(_, b) if !universal => inner = b,
                _ => break,
            }
        }
        let mut guards = Vec::new();
        match inner {
            Formula::Imp(a, _) if universal => conjuncts(a, &mut guards),
            Formula::And(..) if !universal => conjuncts(inner, &mut guards),
            Formula::Atom(..) if !universal => guards.push(inner),
            _ => {}
        }
        let bound_tree = |t: &Term| -> Result<Option<Tree>> {
            if !self.bound_in(t, env) {
                return Ok(None);
            }
            Ok(match self.term(t, env)? {
                Val::Tree(v) if !self.opaque(&v) => Some(v),
                _ => None,
            })
        };
        let is_x = |t: &Term| matches!(t, Term::Var(v) if v == x);
        let tb = format!("tree-bound {}", self.bounds.tree);
        let mut best: Option<(u8, Domain)> = None;
        let mut offer = |rank: u8, d: Domain| {
            if best.as_ref().is_none_or(|(r, _)| rank < *r) {
                best = Some((rank, d));
            }
        };
        for g in guards {
            let Formula::Atom(p, args) = g else { continue };
            match (p.as_str(), args.as_slice()) {
                ("=", [a, b]) if is_x(a) || is_x(b) => {
                    let other = if is_x(a) { b } else { a };
                    if let Some(v) = bound_tree(other)? {
                        offer(0, Domain::Exact(vec![v]));
                    }
                }
                ("Red*", [s, y]) if is_x(y) => {
                    if let Some(s) = bound_tree(s)? {
                        let r = self.reach(&s);
                        if r.complete {
                            offer(1, Domain::Exact(r.trees.clone()));
                        } else {
                            offer(5, Domain::Bounded(r.trees.clone(), self.reach_reason()));
                        }
                    }
                }
                ("Red", [s, y]) if is_x(y) => {
                    if let Some(s) = bound_tree(s)? {
                        let codec = self.b.codec();
                        let vs = self.decode(&s).map_or_else(Vec::new, |p| reducts(&p).iter().map(|q| codec.encode_proof(q)).collect());
                        offer(1, Domain::Exact(vs));
                    }
                }
                ("Sort", [y]) if is_x(y) => offer(2, Domain::Exact(self.domains.sorts().to_vec())),
                ("Nat" | "ProofVar", [y]) if is_x(y) => offer(3, Domain::Bounded(self.domains.numerals().to_vec(), tb.clone())),
                ("TermVar" | "Term", [y, c]) if is_x(y) => {
                    if let Some(c) = bound_tree(c)? {
                        let k = self.domains.sorts().iter().position(|s| *s == c);
                        let vs = match (k, p.as_str()) {
                            (Some(k), "TermVar") => self.domains.tvars(k),
                            (Some(k), _) => self.domains.terms(k),
                            (None, _) => Vec::new(),
                        };
                        offer(4, Domain::Bounded(vs, tb.clone()));
                    }
                }
                ("Proof" | "SN" | "Elim", [y]) if is_x(y) => offer(6, Domain::Bounded(self.domains.proofs(), tb.clone())),
                _ => {}
            }
        }
        Ok(best.map_or_else(|| Domain::Bounded(self.domains.all(), tb), |(_, d)| d))
    }

    /// Whether `∀x body` holds for an opaque `x`: atoms and quantified
    /// subformulas depending on `x` become propositional variables keyed by
    /// their residual form, and the result must be a tautology.
    fn symbolic(&self, x: &TermVar, body: &Formula, env: &mut Env) -> Result<bool> {
        let level = env.iter().filter(|(_, t)| self.opaque(t)).count() as u16;
        env.push((x.clone(), Tree::leaf(OPAQUE_BASE + level)));
        let mut keys = Vec::new();
        let p = self.abstract_formula(body, env, &mut keys);
        env.pop();
        let p = p?;
        if keys.len() > MAX_ATOMS {
            return Ok(false);
        }
        let mut links = Vec::new();
        for (i, k) in keys.iter().enumerate() {
            for j in k.implied().iter().filter_map(|m| keys.iter().position(|n| n == m)) {
                links.push((i, j));
            }
        }
        let consistent = |asg: u32| links.iter().all(|&(i, j)| asg >> i & 1 == 0 || asg >> j & 1 == 1);
        Ok((0..1u32 << keys.len()).filter(|&a| consistent(a)).all(|asg| p.eval(asg)))
    }

    fn key(&self, k: Key, keys: &mut Vec<Key>) -> Prop {
        let i = keys.iter().position(|s| *s == k).unwrap_or_else(|| {
            keys.push(k);
            keys.len() - 1
        });
        Prop::Var(i)
    }

    fn known(&self, v: EvalVerdict, keys: &mut Vec<Key>) -> Prop {
        match v {
            EvalVerdict::True => Prop::Const(true),
            EvalVerdict::False => Prop::Const(false),
            EvalVerdict::Unknown(_) => {
                let k = Key::Other(format!("?{}", keys.len()));
                self.key(k, keys)
            }
        }
    }

    fn abstract_formula(&self, f: &Formula, env: &mut Env, keys: &mut Vec<Key>) -> Result<Prop> {
        let bin = |a: &Formula, b: &Formula, env: &mut Env, keys: &mut Vec<Key>| -> Result<(Box<Prop>, Box<Prop>)> {
            Ok((Box::new(self.abstract_formula(a, env, keys)?), Box::new(self.abstract_formula(b, env, keys)?)))
        };
        Ok(match f {
            Formula::Top => Prop::Const(true),
            Formula::Bot => Prop::Const(false),
            Formula::Atom(p, args) => match self.atom(p, args, env)? {
                Atomic::Known(v) => self.known(v, keys),
                Atomic::Opaque(k) => self.key(k, keys),
            },
            Formula::And(a, b) => {
                let (a, b) = bin(a, b, env, keys)?;
                Prop::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b, env, keys)?;
                Prop::Or(a, b)
            }
            Formula::Imp(a, b) => {
                let (a, b) = bin(a, b, env, keys)?;
                Prop::Imp(a, b)
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                let fv = f.free_vars();
                let vals: Vec<(TermVar, Tree)> = fv
                    .iter()
                    .map(|v| env.iter().rev().find(|(y, _)| y == v).cloned())
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Scope("free variable without a value".into()))?;
                if vals.iter().all(|(_, t)| !self.opaque(t)) {
                    let v = self.formula(f, env)?;
                    return Ok(self.known(v, keys));
                }
                let sigma: Vec<(TermVar, Term)> = vals.iter().map(|(v, t)| (v.clone(), self.tree_term(t))).collect();
                let k = Key::Other(canonical(&subst_formula(f, &sigma)));
                self.key(k, keys)
            }
        })
    }
}

fn conjuncts<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(f),
    }
}

/// Printed form with bound variables renamed in binding order.
fn canonical(f: &Formula) -> String {
    fn rename(t: &Term, sigma: &[(TermVar, Term)]) -> Term {
        match t {
            Term::Var(x) => sigma.iter().rev().find(|(y, _)| y == x).map_or_else(|| t.clone(), |(_, r)| r.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| rename(a, sigma)).collect()),
        }
    }
    fn go(f: &Formula, sigma: &mut Vec<(TermVar, Term)>, next: &mut u32) -> Formula {
        match f {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| rename(a, sigma)).collect()),
            Formula::Top | Formula::Bot => f.clone(),
            Formula::And(a, b) => Formula::and(go(a, sigma, next), go(b, sigma, next)),
            Formula::Or(a, b) => Formula::or(go(a, sigma, next), go(b, sigma, next)),
            Formula::Imp(a, b) => Formula::imp(go(a, sigma, next), go(b, sigma, next)),
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                let y = TermVar::new(CANON_VAR + *next, x.sort.clone());
                *next += 1;
                sigma.push((x.clone(), Term::Var(y.clone())));
                let body = go(a, sigma, next);
                sigma.pop();
                if matches!(f, Formula::Forall(..)) {
                    Formula::forall(y, body)
                } else {
                    Formula::exists(y, body)
                }
            }
        }
    }
    print_formula(&go(f, &mut Vec::new(), &mut 0))
}
