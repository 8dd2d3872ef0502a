//! Parenthesized text format for terms, formulas and theories.

use std::collections::HashMap;

use super::{index_of, Formula, FunDecl, PredDecl, RewriteRule, Signature, Sort, Symbol, Term, TermVar, Theory};
use crate::error::{Error, Result};
use crate::sexpr::{self, SExpr};

/// Parses terms and formulas against a signature, inferring the sorts of
/// free variables from the argument positions they occur in.
pub struct FormulaParser<'s> {
    sig: &'s Signature,
    scope: Vec<TermVar>,
    fixed: HashMap<u32, TermVar>,
    free: HashMap<u32, Sort>,
    default_sort: Option<Sort>,
}

impl<'s> FormulaParser<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        FormulaParser { sig, scope: Vec::new(), fixed: HashMap::new(), free: HashMap::new(), default_sort: None }
    }

    /// Pre-declares a variable with a fixed sort.
    pub fn with_var(mut self, v: TermVar) -> Self {
        self.fixed.insert(v.id, v);
        self
    }

    /// Sort given to free variables whose position does not determine one.
    pub fn with_default_sort(mut self, s: Option<Sort>) -> Self {
        self.default_sort = s;
        self
    }

    pub fn push_scope(&mut self, v: TermVar) {
        self.scope.push(v);
    }

    pub fn pop_scope(&mut self) {
        self.scope.pop();
    }

    pub fn declare(&mut self, v: TermVar) {
        self.fixed.insert(v.id, v);
    }

    /// Free variables met so far, with their inferred sorts.
    pub fn free_vars(&self) -> Vec<TermVar> {
        let mut out: Vec<_> = self.free.iter().map(|(id, s)| TermVar::new(*id, s.clone())).collect();
        out.sort();
        out
    }

    fn check_expected(&self, what: &str, got: &Sort, expected: Option<&Sort>) -> Result<()> {
        match expected {
            Some(e) if e != got => Err(Error::sort(what, format!("has sort {got}, expected {e}"))),
            _ => Ok(()),
        }
    }

    fn variable(&mut self, name: &str, expected: Option<&Sort>) -> Result<Option<Term>> {
        let Some(id) = index_of(name) else { return Ok(None) };
        if let Some(v) = self.scope.iter().rev().find(|v| v.id == id) {
            self.check_expected(name, &v.sort, expected)?;
            return Ok(Some(Term::Var(v.clone())));
        }
        if matches!(self.sig.fun(&Symbol::new(name)), Some(d) if d.args.is_empty()) {
            return Ok(None);
        }
        if let Some(v) = self.fixed.get(&id) {
            self.check_expected(name, &v.sort, expected)?;
            return Ok(Some(Term::Var(v.clone())));
        }
        let sort = match (self.free.get(&id), expected) {
            (Some(s), Some(e)) if s != e => {
                return Err(Error::sort(name, format!("used at sorts {s} and {e}")));
            }
            (Some(s), _) => s.clone(),
            (None, Some(e)) => e.clone(),
            (None, None) if self.default_sort.is_some() => self.default_sort.clone().unwrap(),
            (None, None) => return Err(Error::sort(name, "cannot determine the sort of this variable")),
        };
        self.free.insert(id, sort.clone());
        Ok(Some(Term::Var(TermVar::new(id, sort))))
    }

    pub fn term(&mut self, sx: &SExpr, expected: Option<&Sort>) -> Result<Term> {
        match sx {
            SExpr::Atom(a, pos) => {
                if let Some(t) = self.variable(a, expected)? {
                    return Ok(t);
                }
                let decl = self
                    .sig
                    .fun(&Symbol::new(a))
                    .ok_or_else(|| Error::syntax(*pos, format!("unknown symbol `{a}`")))?;
                if !decl.args.is_empty() {
                    return Err(Error::sort(a.as_str(), format!("expects {} arguments", decl.args.len())));
                }
                self.check_expected(a, &decl.result, expected)?;
                Ok(Term::App(decl.name.clone(), Vec::new()))
            }
            SExpr::List(items, pos) => {
                let (head, rest) = items.split_first().ok_or_else(|| Error::syntax(*pos, "empty term"))?;
                let f = head.expect_atom("function symbol")?;
                let decl = self
                    .sig
                    .fun(&Symbol::new(f))
                    .ok_or_else(|| Error::syntax(head.pos(), format!("unknown function symbol `{f}`")))?
                    .clone();
                if decl.args.len() != rest.len() {
                    return Err(Error::sort(f, format!("expects {} arguments, got {}", decl.args.len(), rest.len())));
                }
                let args = rest
                    .iter()
                    .zip(&decl.args)
                    .map(|(a, s)| self.term(a, Some(s)))
                    .collect::<Result<Vec<_>>>()?;
                self.check_expected(f, &decl.result, expected)?;
                Ok(Term::App(decl.name, args))
            }
        }
    }

    pub fn binder(&mut self, spec: &SExpr) -> Result<TermVar> {
        let parts = spec.expect_list("(<var> <sort>)")?;
        if parts.len() != 2 {
            return Err(Error::syntax(spec.pos(), "binder must be (<var> <sort>)"));
        }
        let name = parts[0].expect_atom("variable")?;
        let id = index_of(name).ok_or_else(|| Error::syntax(parts[0].pos(), format!("`{name}` is not a variable name")))?;
        let sort = Sort::new(parts[1].expect_atom("sort")?);
        if !self.sig.has_sort(&sort) {
            return Err(Error::sort(sort.as_str(), "undeclared sort"));
        }
        Ok(TermVar::new(id, sort))
    }

    pub fn formula(&mut self, sx: &SExpr) -> Result<Formula> {
        match sx {
            SExpr::Atom(a, pos) => match a.as_str() {
                "top" => Ok(Formula::Top),
                "bot" => Ok(Formula::Bot),
                other => self.atom(other, &[], *pos),
            },
            SExpr::List(items, pos) => {
                let (head, rest) = items.split_first().ok_or_else(|| Error::syntax(*pos, "empty formula"))?;
                let h = head.expect_atom("connective or predicate")?;
                let arity = |n: usize| -> Result<()> {
                    if rest.len() == n {
                        Ok(())
                    } else {
                        Err(Error::syntax(*pos, format!("`{h}` takes {n} arguments")))
                    }
                };
                match h {
                    "and" | "or" | "imp" => {
                        arity(2)?;
                        let a = self.formula(&rest[0])?;
                        let b = self.formula(&rest[1])?;
                        Ok(match h {
                            "and" => Formula::and(a, b),
                            "or" => Formula::or(a, b),
                            _ => Formula::imp(a, b),
                        })
                    }
                    "not" => {
                        arity(1)?;
                        Ok(Formula::not(self.formula(&rest[0])?))
                    }
                    "forall" | "exists" => {
                        arity(2)?;
                        let x = self.binder(&rest[0])?;
                        self.scope.push(x.clone());
                        let body = self.formula(&rest[1]);
                        self.scope.pop();
                        let body = body?;
                        Ok(if h == "forall" { Formula::forall(x, body) } else { Formula::exists(x, body) })
                    }
                    "top" | "bot" => {
                        arity(0)?;
                        Ok(if h == "top" { Formula::Top } else { Formula::Bot })
                    }
                    p => self.atom(p, rest, head.pos()),
                }
            }
        }
    }

    fn atom(&mut self, p: &str, args: &[SExpr], pos: crate::sexpr::Pos) -> Result<Formula> {
        let decl = self
            .sig
            .pred(&Symbol::new(p))
            .ok_or_else(|| Error::syntax(pos, format!("unknown predicate symbol `{p}`")))?
            .clone();
        if decl.args.len() != args.len() {
            return Err(Error::sort(p, format!("expects {} arguments, got {}", decl.args.len(), args.len())));
        }
        let terms = args
            .iter()
            .zip(&decl.args)
            .map(|(a, s)| self.term(a, Some(s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Formula::Atom(decl.name, terms))
    }
}

pub fn parse_formula_sexpr(sig: &Signature, sx: &SExpr) -> Result<Formula> {
    let f = FormulaParser::new(sig).formula(sx)?;
    sig.check_formula(&f)?;
    Ok(f)
}

pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula> {
    parse_formula_sexpr(sig, &sexpr::parse_one(text)?)
}

pub fn parse_term(sig: &Signature, text: &str) -> Result<Term> {
    FormulaParser::new(sig).term(&sexpr::parse_one(text)?, None)
}

fn sorts_of(list: &SExpr) -> Result<Vec<Sort>> {
    list.expect_list("(<sorts>)")?
        .iter()
        .map(|s| s.expect_atom("sort").map(Sort::new))
        .collect()
}

fn decl_name(sx: Option<&SExpr>, pos: crate::sexpr::Pos) -> Result<&str> {
    sx.ok_or_else(|| Error::syntax(pos, "missing name"))?.expect_atom("name")
}

pub fn parse_theory(text: &str) -> Result<Theory> {
    let doc = sexpr::parse_one(text)?;
    let forms = doc.expect_form("theory")?;
    let mut sig = Signature::new();
    for form in forms {
        let items = form.expect_list("declaration")?;
        let pos = form.pos();
        match form.head() {
            Some("sort") => {
                if items.len() != 2 {
                    return Err(Error::syntax(pos, "(sort <name>)"));
                }
                sig.add_sort(decl_name(items.get(1), pos)?)
                    .map_err(|e| relocate(e, pos))?;
            }
            Some("fun") => {
                if items.len() != 4 {
                    return Err(Error::syntax(pos, "(fun <name> (<argsorts>) <ressort>)"));
                }
                let name = decl_name(items.get(1), pos)?;
                let args = sorts_of(&items[2])?;
                let result = Sort::new(items[3].expect_atom("result sort")?);
                sig.add_fun_decl(FunDecl { name: Symbol::new(name), args, result })?;
            }
            Some("pred") => {
                if items.len() != 3 {
                    return Err(Error::syntax(pos, "(pred <name> (<argsorts>))"));
                }
                let name = decl_name(items.get(1), pos)?;
                let args = sorts_of(&items[2])?;
                sig.add_pred_decl(PredDecl { name: Symbol::new(name), args })?;
            }
            Some("rule") | Some("axiom") => {}
            _ => return Err(Error::syntax(pos, format!("unknown declaration `{form}`"))),
        }
    }
    let mut theory = Theory::new(sig);
    for form in forms {
        let items = form.as_list().unwrap();
        let pos = form.pos();
        match form.head() {
            Some("rule") => {
                if items.len() != 4 {
                    return Err(Error::syntax(pos, "(rule term|prop <lhs> <rhs>)"));
                }
                let mut p = FormulaParser::new(&theory.signature);
                let rule = match items[1].expect_atom("rule kind")? {
                    "term" => {
                        let lhs = p.term(&items[2], None)?;
                        let sort = theory.signature.sort_of(&lhs)?;
                        let rhs = p.term(&items[3], Some(&sort))?;
                        RewriteRule::Term { lhs, rhs }
                    }
                    "prop" => match p.formula(&items[2])? {
                        Formula::Atom(pred, args) => {
                            let rhs = p.formula(&items[3])?;
                            RewriteRule::Prop { pred, args, rhs }
                        }
                        _ => return Err(Error::syntax(items[2].pos(), "proposition rule must rewrite an atom")),
                    },
                    k => return Err(Error::syntax(items[1].pos(), format!("unknown rule kind `{k}`"))),
                };
                rule.check(&theory.signature)?;
                theory.rules.push(rule);
            }
            Some("axiom") => {
                if items.len() != 2 {
                    return Err(Error::syntax(pos, "(axiom <formula>)"));
                }
                let f = FormulaParser::new(&theory.signature).formula(&items[1])?;
                theory.axioms.push(f);
            }
            _ => {}
        }
    }
    theory.check()?;
    Ok(theory)
}

fn relocate(e: Error, pos: crate::sexpr::Pos) -> Error {
    match e {
        Error::Sort { symbol, msg } => Error::syntax(pos, format!("`{symbol}`: {msg}")),
        e => e,
    }
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(t, &mut s);
    s
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&v.name()),
        Term::App(f, args) if args.is_empty() => out.push_str(f.as_str()),
        Term::App(f, args) => {
            out.push('(');
            out.push_str(f.as_str());
            for a in args {
                out.push(' ');
                write_term(a, out);
            }
            out.push(')');
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(f, &mut s);
    s
}

fn write_formula(f: &Formula, out: &mut String) {
    let bin = |op: &str, a: &Formula, b: &Formula, out: &mut String| {
        out.push('(');
        out.push_str(op);
        out.push(' ');
        write_formula(a, out);
        out.push(' ');
        write_formula(b, out);
        out.push(')');
    };
    match f {
        Formula::Top => out.push_str("top"),
        Formula::Bot => out.push_str("bot"),
        Formula::Atom(p, args) => {
            out.push('(');
            out.push_str(p.as_str());
            for a in args {
                out.push(' ');
                write_term(a, out);
            }
            out.push(')');
        }
        Formula::And(a, b) => bin("and", a, b, out),
        Formula::Or(a, b) => bin("or", a, b, out),
        Formula::Imp(a, b) if **b == Formula::Bot => {
            out.push_str("(not ");
            write_formula(a, out);
            out.push(')');
        }
        Formula::Imp(a, b) => bin("imp", a, b, out),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let q = if matches!(f, Formula::Forall(..)) { "forall" } else { "exists" };
            out.push_str(&format!("({q} ({} {}) ", x.name(), x.sort));
            write_formula(body, out);
            out.push(')');
        }
    }
}

fn sorts_list(sorts: &[Sort]) -> String {
    let names: Vec<&str> = sorts.iter().map(Sort::as_str).collect();
    format!("({})", names.join(" "))
}

pub fn print_theory(t: &Theory) -> String {
    let sig = &t.signature;
    let mut out = String::from("(theory\n");
    for s in sig.sorts() {
        out.push_str(&format!("  (sort {s})\n"));
    }
    for f in sig.funs() {
        out.push_str(&format!("  (fun {} {} {})\n", f.name, sorts_list(&f.args), f.result));
    }
    for p in sig.preds() {
        out.push_str(&format!("  (pred {} {})\n", p.name, sorts_list(&p.args)));
    }
    for r in &t.rules {
        match r {
            RewriteRule::Term { lhs, rhs } => {
                out.push_str(&format!("  (rule term {} {})\n", print_term(lhs), print_term(rhs)))
            }
            RewriteRule::Prop { pred, args, rhs } => out.push_str(&format!(
                "  (rule prop {} {})\n",
                print_formula(&Formula::Atom(pred.clone(), args.clone())),
                print_formula(rhs)
            )),
        }
    }
    for a in &t.axioms {
        out.push_str(&format!("  (axiom {})\n", print_formula(a)));
    }
    out.push_str(")\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let t = parse_theory("(theory (sort i) (pred P (i)))").unwrap();
        assert_eq!(t.signature.sorts().len(), 1);
        assert_eq!(t.signature.preds().len(), 1);
        assert_eq!(t.signature.preds()[0].args.len(), 1);
    }

    #[test]
    fn rule_with_unsorted_variable_is_a_sort_error() {
        let err = parse_theory("(theory (sort i) (rule term x x))").unwrap_err();
        assert!(matches!(err, Error::Sort { ref symbol, .. } if symbol == "x"), "{err}");
    }

    #[test]
    fn rule_rhs_variable_must_occur_on_the_left() {
        let err = parse_theory("(theory (sort i) (fun f (i) i) (rule term (f x) y))").unwrap_err();
        assert!(matches!(err, Error::Sort { ref symbol, .. } if symbol == "y"), "{err}");
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_theory("(theory\n  (sort i)\n  (frob))").unwrap_err();
        assert!(matches!(err, Error::Syntax { pos, .. } if pos.line == 3 && pos.col == 3), "{err}");
    }

    #[test]
    fn open_axiom_is_rejected() {
        assert!(parse_theory("(theory (sort i) (pred P (i)) (axiom (P x)))").is_err());
    }

    #[test]
    fn negation_is_implication_into_bot() {
        let t = parse_theory("(theory (sort i) (pred P (i)))").unwrap();
        let f = parse_formula(&t.signature, "(forall (x i) (not (P x)))").unwrap();
        let g = parse_formula(&t.signature, "(forall (y i) (imp (P y) bot))").unwrap();
        assert!(f.alpha_eq(&g));
        assert_eq!(print_formula(&f), "(forall (x i) (not (P x)))");
    }

    #[test]
    fn bound_variable_shadows_constant_of_the_same_name() {
        let t = parse_theory("(theory (sort i) (fun c () i) (pred P (i)))").unwrap();
        let f = parse_formula(&t.signature, "(and (P c) (forall (c i) (P c)))").unwrap();
        assert_eq!(f.free_vars().len(), 0);
        match &f {
            Formula::And(a, b) => {
                assert_eq!(**a, Formula::atom("P", vec![Term::constant("c")]));
                assert!(matches!(&**b, Formula::Forall(_, body) if matches!(&**body, Formula::Atom(_, args) if matches!(args[0], Term::Var(_)))));
            }
            _ => unreachable!(),
        }
    }
}
