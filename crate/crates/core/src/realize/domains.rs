//! Finite slices of the standard tree model: the trees of each syntactic
//! category up to a size bound.

use std::sync::OnceLock;

use crate::codec::{Codec, Tree, TreeLang};

/// Trees of size at most `max`, grouped by category and listed by
/// increasing size.
#[derive(Debug)]
pub struct Domains {
    max: usize,
    lang: TreeLang,
    nums: Vec<Tree>,
    sorts: Vec<Tree>,
    /// `tvars[s][n]`, `terms[s][n]`: variables and terms of sort `s` and size `n`.
    tvars: Vec<Vec<Vec<Tree>>>,
    terms: Vec<Vec<Vec<Tree>>>,
    proofs: Vec<Vec<Tree>>,
    all: OnceLock<Vec<Vec<Tree>>>,
}

fn flat(levels: &[Vec<Tree>]) -> Vec<Tree> {
    levels.iter().flatten().cloned().collect()
}

/// Every way of writing `total` as an ordered sum of `parts` positive sizes.
fn splits(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(rest: usize, parts: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if parts == 0 {
            if rest == 0 {
                f(acc);
            }
            return;
        }
        for k in 1..=rest.saturating_sub(parts - 1) {
            acc.push(k);
            go(rest - k, parts - 1, acc, f);
            acc.pop();
        }
    }
    go(total, parts, &mut Vec::new(), f)
}

/// All combinations with one element from each list.
fn product(lists: &[&[Tree]], f: &mut dyn FnMut(Vec<Tree>)) {
    fn go(lists: &[&[Tree]], acc: &mut Vec<Tree>, f: &mut dyn FnMut(Vec<Tree>)) {
        match lists.split_first() {
            None => f(acc.clone()),
            Some((head, tail)) => {
                for t in head.iter() {
                    acc.push(t.clone());
                    go(tail, acc, f);
                    acc.pop();
                }
            }
        }
    }
    go(lists, &mut Vec::new(), f)
}

impl Domains {
    pub fn new(codec: &Codec, max: usize) -> Self {
        let lang = codec.lang().clone();
        let sig = codec.signature();
        let nsorts = sig.sorts().len();
        let num_at = |n: usize| -> Vec<Tree> { if n >= 1 { vec![lang.num(n as u32 - 1)] } else { vec![] } };
        let nums: Vec<Vec<Tree>> = (0..=max).map(num_at).collect();
        let sortc = |k: usize| lang.make("Sortc", vec![lang.num(k as u32)]);

        let mut tvars = vec![vec![Vec::new(); max + 1]; nsorts];
        for (k, by_size) in tvars.iter_mut().enumerate() {
            let sc = sortc(k);
            for (n, slot) in by_size.iter_mut().enumerate() {
                if n > 1 + sc.size() {
                    slot.push(lang.make("TVar", vec![lang.num((n - 2 - sc.size()) as u32), sc.clone()]));
                }
            }
        }

        let cons = |h: Tree, t: Tree| lang.make("Cons", vec![h, t]);
        let nil = lang.make("Nil", vec![]);
        let mut terms = tvars.clone();
        for n in 1..=max {
            for (fi, f) in sig.funs().iter().enumerate() {
                let code = lang.num(fi as u32);
                let Some(budget) = n.checked_sub(1 + code.size()) else { continue };
                let arg_sorts: Vec<usize> = f.args.iter().map(|s| sig.sort_index(s).unwrap()).collect();
                let res = sig.sort_index(&f.result).unwrap();
                // the argument list costs one node per Cons plus the Nil
                let Some(args_budget) = budget.checked_sub(arg_sorts.len() + 1) else { continue };
                let mut found = Vec::new();
                if arg_sorts.is_empty() {
                    if args_budget == 0 {
                        found.push(lang.make("Fun", vec![code.clone(), nil.clone()]));
                    }
                } else {
                    splits(args_budget, arg_sorts.len(), &mut |sizes| {
                        let lists: Vec<&[Tree]> = sizes.iter().zip(&arg_sorts).map(|(&m, &s)| terms[s][m].as_slice()).collect();
                        product(&lists, &mut |args| {
                            let list = args.into_iter().rev().fold(nil.clone(), |acc, a| cons(a, acc));
                            found.push(lang.make("Fun", vec![code.clone(), list]));
                        });
                    });
                }
                terms[res][n].extend(found);
            }
        }

        let any_tvar = |n: usize| -> Vec<Tree> { tvars.iter().flat_map(|by| by[n].clone()).collect() };
        let any_term = |n: usize| -> Vec<Tree> { terms.iter().flat_map(|by| by[n].clone()).collect() };
        let mut proofs: Vec<Vec<Tree>> = vec![Vec::new(); max + 1];
        for n in 1..=max {
            let mut level = Vec::new();
            let mk = |c: &str, kids: Vec<Tree>| lang.make(c, kids);
            if n == 1 {
                level.push(mk("TopI", vec![]));
            }
            let m = n - 1;
            level.extend(nums[m].iter().map(|a| mk("Axiom", vec![a.clone()])));
            for c in ["AndE1", "AndE2", "OrI1", "OrI2", "BotE"] {
                level.extend(proofs[m].iter().map(|p| mk(c, vec![p.clone()])));
            }
            let mut two = |c: &str, left: &dyn Fn(usize) -> Vec<Tree>, right: &dyn Fn(usize) -> Vec<Tree>| {
                splits(m, 2, &mut |s| {
                    for a in left(s[0]) {
                        for b in right(s[1]) {
                            level.push(mk(c, vec![a.clone(), b]));
                        }
                    }
                });
            };
            let pf = |k: usize| proofs[k].clone();
            let nm = |k: usize| nums[k].clone();
            two("ImpI", &nm, &pf);
            two("ImpE", &pf, &pf);
            two("AndI", &pf, &pf);
            two("ForallI", &any_tvar, &pf);
            two("ForallE", &pf, &any_term);
            two("ExistsI", &any_term, &pf);
            splits(m, 5, &mut |s| {
                product(&[&proofs[s[0]], &nums[s[1]], &proofs[s[2]], &nums[s[3]], &proofs[s[4]]], &mut |kids| {
                    level.push(mk("OrE", kids));
                });
            });
            // ExistsE(p, ExBind(x, a, q)): the binder node costs one
            if m >= 2 {
                splits(m - 1, 4, &mut |s| {
                    let xs = any_tvar(s[1]);
                    product(&[&proofs[s[0]], &xs, &nums[s[2]], &proofs[s[3]]], &mut |k| {
                        let bind = mk("ExBind", vec![k[1].clone(), k[2].clone(), k[3].clone()]);
                        level.push(mk("ExistsE", vec![k[0].clone(), bind]));
                    });
                });
            }
            proofs[n] = level;
        }

        Domains {
            max,
            nums: flat(&nums),
            sorts: (0..nsorts).map(sortc).collect(),
            tvars,
            terms,
            proofs,
            all: OnceLock::new(),
            lang,
        }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    /// Numerals of size at most the bound.
    pub fn numerals(&self) -> &[Tree] {
        &self.nums
    }

    /// `Sortc(k)` for each sort: a complete list.
    pub fn sorts(&self) -> &[Tree] {
        &self.sorts
    }

    pub fn proofs(&self) -> Vec<Tree> {
        flat(&self.proofs)
    }

    pub fn proofs_of_size(&self, n: usize) -> &[Tree] {
        self.proofs.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn tvars(&self, sort: usize) -> Vec<Tree> {
        self.tvars.get(sort).map_or_else(Vec::new, |v| flat(v))
    }

    pub fn terms(&self, sort: usize) -> Vec<Tree> {
        self.terms.get(sort).map_or_else(Vec::new, |v| flat(v))
    }

    /// Every tree of the language up to the bound.
    pub fn all(&self) -> Vec<Tree> {
        flat(self.all.get_or_init(|| {
            let lang = &self.lang;
            let mut levels: Vec<Vec<Tree>> = vec![Vec::new(); self.max + 1];
            for n in 1..=self.max {
                let mut level = Vec::new();
                for (c, ctor) in lang.ctors().iter().enumerate() {
                    if ctor.arity == 0 {
                        if n == 1 {
                            level.push(Tree::leaf(c as u16));
                        }
                        continue;
                    }
                    splits(n - 1, ctor.arity, &mut |s| {
                        let lists: Vec<&[Tree]> = s.iter().map(|&k| levels[k].as_slice()).collect();
                        product(&lists, &mut |kids| level.push(Tree::new(c as u16, kids)));
                    });
                }
                levels[n] = level;
            }
            levels
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::BuiltinRelationSet;
    use crate::syntax::parse_theory;

    #[test]
    fn categories_agree_with_the_builtin_relations() {
        let th = parse_theory("(theory (sort i) (sort o) (fun c () i) (fun f (i o) i) (fun d () o))").unwrap();
        let b = BuiltinRelationSet::new(&th.signature).unwrap();
        let d = Domains::new(b.codec(), 6);
        let all = d.all();
        let env = b.env();
        let proofs: Vec<&Tree> = all.iter().filter(|t| env.holds("proof", &[(*t).clone()]).unwrap()).collect();
        let mut mine = d.proofs();
        assert_eq!(mine.len(), proofs.len());
        mine.sort();
        let mut theirs: Vec<Tree> = proofs.into_iter().cloned().collect();
        theirs.sort();
        assert_eq!(mine, theirs);
        for (k, sc) in d.sorts().iter().enumerate() {
            let terms: Vec<&Tree> = all.iter().filter(|t| env.holds("term", &[(*t).clone(), sc.clone()]).unwrap()).collect();
            assert_eq!(d.terms(k).len(), terms.len());
            assert!(d.terms(k).iter().all(|t| env.holds("term", &[t.clone(), sc.clone()]).unwrap()));
            let vars = all.iter().filter(|t| env.holds("termvar", &[(*t).clone(), sc.clone()]).unwrap()).count();
            assert_eq!(d.tvars(k).len(), vars);
        }
        assert_eq!(d.numerals().len(), 6);
    }
}
