//! One-step cut elimination, n-step reducts and bounded strong
//! normalization analysis.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::term::{subst, subst_proof, subst_term_in_proof, ProofTerm, ProofTerm::*};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    /// `(λα.π1) π2 ▷ π1[α ← π2]`
    Beta,
    /// `fst ⟨π1, π2⟩ ▷ π1`
    Fst,
    /// `snd ⟨π1, π2⟩ ▷ π2`
    Snd,
    /// `case (i1 π1) (α.π2) (β.π3) ▷ π2[α ← π1]`
    CaseL,
    /// `case (i2 π1) (α.π2) (β.π3) ▷ π3[β ← π1]`
    CaseR,
    /// `(λx.π) t ▷ π[x := t]`
    TBeta,
    /// `exelim ⟨t, π1⟩ (x.α.π2) ▷ π2[x := t, α ← π1]`
    ExElim,
}

impl RuleTag {
    pub const ALL: [RuleTag; 7] =
        [RuleTag::Beta, RuleTag::Fst, RuleTag::Snd, RuleTag::CaseL, RuleTag::CaseR, RuleTag::TBeta, RuleTag::ExElim];
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleTag::Beta => "beta",
            RuleTag::Fst => "fst",
            RuleTag::Snd => "snd",
            RuleTag::CaseL => "case-left",
            RuleTag::CaseR => "case-right",
            RuleTag::TBeta => "term-beta",
            RuleTag::ExElim => "exelim",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub source: ProofTerm,
    pub target: ProofTerm,
    pub rule: RuleTag,
    /// Child indices from the root of `source` to the contracted redex.
    pub position: Vec<usize>,
}

/// Fires the matching rule at the root, if `p` is a redex.
pub fn contract(p: &ProofTerm) -> Option<(RuleTag, ProofTerm)> {
    match p {
        App(f, arg) => match &**f {
            Lam(a, body) => Some((RuleTag::Beta, subst_proof(body, *a, arg))),
            _ => None,
        },
        Fst(q) => match &**q {
            Pair(l, _) => Some((RuleTag::Fst, (**l).clone())),
            _ => None,
        },
        Snd(q) => match &**q {
            Pair(_, r) => Some((RuleTag::Snd, (**r).clone())),
            _ => None,
        },
        Case(s, a, l, b, r) => match &**s {
            InjL(v) => Some((RuleTag::CaseL, subst_proof(l, *a, v))),
            InjR(v) => Some((RuleTag::CaseR, subst_proof(r, *b, v))),
            _ => None,
        },
        TApp(f, t) => match &**f {
            TLam(x, body) => Some((RuleTag::TBeta, subst_term_in_proof(body, x, t))),
            _ => None,
        },
        ExElim(s, x, a, body) => match &**s {
            Witness(t, q) => Some((RuleTag::ExElim, subst(body, &[(*a, (**q).clone())], &[(x.clone(), t.clone())]))),
            _ => None,
        },
        _ => None,
    }
}

pub fn is_redex(p: &ProofTerm) -> bool {
    matches!(
        p,
        App(f, _) if matches!(**f, Lam(..))
    ) || matches!(p, Fst(q) | Snd(q) if matches!(**q, Pair(..)))
        || matches!(p, Case(s, ..) if matches!(**s, InjL(_) | InjR(_)))
        || matches!(p, TApp(f, _) if matches!(**f, TLam(..)))
        || matches!(p, ExElim(s, ..) if matches!(**s, Witness(..)))
}

pub fn is_normal(p: &ProofTerm) -> bool {
    !is_redex(p) && p.children().into_iter().all(is_normal)
}

/// Every one-step reduct, root first, then children left to right.
pub fn step(p: &ProofTerm) -> Vec<ReductionStep> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_steps(p, &mut path, &mut |pos, rule, target| {
        out.push(ReductionStep { source: p.clone(), target, rule, position: pos.to_vec() });
    });
    out
}

/// Targets of [`step`], without the bookkeeping.
pub fn reducts(p: &ProofTerm) -> Vec<ProofTerm> {
    let mut out = Vec::new();
    if let Some((_, t)) = contract(p) {
        out.push(t);
    }
    for (i, c) in p.children().into_iter().enumerate() {
        for r in reducts(c) {
            out.push(p.with_child(i, r));
        }
    }
    out
}

fn collect_steps(p: &ProofTerm, path: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize], RuleTag, ProofTerm)) {
    if let Some((rule, t)) = contract(p) {
        emit(path, rule, t);
    }
    for (i, c) in p.children().into_iter().enumerate() {
        path.push(i);
        collect_steps(c, path, &mut |pos, rule, t| emit(pos, rule, p.with_child(i, t)));
        path.pop();
    }
}

/// Terms reachable in exactly `n` steps.
pub fn redn(p: &ProofTerm, n: usize) -> BTreeSet<ProofTerm> {
    let mut frontier: BTreeSet<ProofTerm> = [p.clone()].into();
    for _ in 0..n {
        frontier = frontier.iter().flat_map(reducts).collect();
        if frontier.is_empty() {
            break;
        }
    }
    frontier
}

/// Terms reachable in any number of steps, or `None` if more than `limit`
/// distinct terms are reachable.
pub fn reachable(p: &ProofTerm, limit: usize) -> Option<HashSet<ProofTerm>> {
    let mut seen: HashSet<ProofTerm> = [p.clone()].into();
    let mut todo = vec![p.clone()];
    while let Some(q) = todo.pop() {
        for r in reducts(&q) {
            if seen.insert(r.clone()) {
                if seen.len() > limit {
                    return None;
                }
                todo.push(r);
            }
        }
    }
    Some(seen)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SnVerdict {
    StronglyNormalizing(usize),
    /// A closed reduction path, first element repeated at the end.
    CycleFound(Vec<ProofTerm>),
    BoundExceeded(usize),
}

impl SnVerdict {
    pub fn is_sn(&self) -> bool {
        matches!(self, SnVerdict::StronglyNormalizing(_))
    }
}

impl fmt::Display for SnVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnVerdict::StronglyNormalizing(m) => write!(f, "StronglyNormalizing {m}"),
            SnVerdict::CycleFound(c) => write!(f, "CycleFound (length {})", c.len().saturating_sub(1)),
            SnVerdict::BoundExceeded(b) => write!(f, "BoundExceeded {b}"),
        }
    }
}

enum Explore {
    Done(usize),
    Cycle(Vec<ProofTerm>),
    Truncated,
}

struct Search {
    bound: usize,
    done: HashMap<ProofTerm, usize>,
    stack: Vec<ProofTerm>,
    on_stack: HashSet<ProofTerm>,
}

impl Search {
    fn visit(&mut self, p: &ProofTerm) -> Explore {
        if let Some(&m) = self.done.get(p) {
            return Explore::Done(m);
        }
        if self.on_stack.contains(p) {
            let start = self.stack.iter().position(|q| q == p).unwrap();
            let mut cycle = self.stack[start..].to_vec();
            cycle.push(p.clone());
            return Explore::Cycle(cycle);
        }
        let mut rs = reducts(p);
        if rs.is_empty() {
            self.done.insert(p.clone(), 0);
            return Explore::Done(0);
        }
        if self.stack.len() >= self.bound {
            return Explore::Truncated;
        }
        self.stack.push(p.clone());
        self.on_stack.insert(p.clone());
        let mut longest = 0;
        let mut cut = false;
        rs.sort();
        rs.dedup();
        for r in &rs {
            match self.visit(r) {
                Explore::Done(m) => longest = longest.max(m + 1),
                Explore::Cycle(c) => {
                    self.on_stack.remove(p);
                    self.stack.pop();
                    return Explore::Cycle(c);
                }
                Explore::Truncated => cut = true,
            }
        }
        self.stack.pop();
        self.on_stack.remove(p);
        if cut {
            return Explore::Truncated;
        }
        self.done.insert(p.clone(), longest);
        Explore::Done(longest)
    }
}

/// Exhaustive reduction-graph search from `p`. Paths are followed to depth
/// `bound`; a repeated term on a path is reported as a cycle, and is
/// preferred over a bound-exceeded verdict when both occur.
pub fn sn_check(p: &ProofTerm, bound: usize) -> SnVerdict {
    let mut s = Search { bound, done: HashMap::new(), stack: Vec::new(), on_stack: HashSet::new() };
    match s.visit(p) {
        Explore::Done(m) if m <= bound => SnVerdict::StronglyNormalizing(m),
        Explore::Done(_) => SnVerdict::BoundExceeded(bound),
        Explore::Cycle(c) => SnVerdict::CycleFound(c),
        Explore::Truncated => SnVerdict::BoundExceeded(bound),
    }
}

/// Leftmost-outermost normalization trace, at most `fuel` steps.
pub fn normalize_trace(p: &ProofTerm, fuel: usize) -> (Vec<ReductionStep>, bool) {
    let mut trace = Vec::new();
    let mut cur = p.clone();
    for _ in 0..fuel {
        let Some(s) = leftmost_step(&cur) else { return (trace, true) };
        cur = s.target.clone();
        trace.push(s);
    }
    let normal = is_normal(&cur);
    (trace, normal)
}

fn leftmost_step(p: &ProofTerm) -> Option<ReductionStep> {
    fn go(p: &ProofTerm, path: &mut Vec<usize>) -> Option<(Vec<usize>, RuleTag, ProofTerm)> {
        if let Some((rule, t)) = contract(p) {
            return Some((path.clone(), rule, t));
        }
        for (i, c) in p.children().into_iter().enumerate() {
            path.push(i);
            let found = go(c, path);
            path.pop();
            if let Some((pos, rule, t)) = found {
                return Some((pos, rule, p.with_child(i, t)));
            }
        }
        None
    }
    go(p, &mut Vec::new()).map(|(position, rule, target)| ReductionStep { source: p.clone(), target, rule, position })
}
