//! Proof-term syntax and the proof file format
//! `(proof (context (a A) ...) (goal B) (term p))`.

use super::term::ProofTerm::{self, *};
use crate::error::{Error, Result};
use crate::sexpr::{self, SExpr};
use crate::syntax::{index_of, print_term, FormulaParser, PVar, Sequent, Signature, Sort, TermVar};

pub fn print_proof(p: &ProofTerm) -> String {
    match p {
        Axiom(a) => format!("(var {a})"),
        TopI => "topI".into(),
        Lam(a, q) => format!("(lam {a} {})", print_proof(q)),
        App(q, r) => format!("(app {} {})", print_proof(q), print_proof(r)),
        Pair(q, r) => format!("(pair {} {})", print_proof(q), print_proof(r)),
        Fst(q) => format!("(fst {})", print_proof(q)),
        Snd(q) => format!("(snd {})", print_proof(q)),
        InjL(q) => format!("(inl {})", print_proof(q)),
        InjR(q) => format!("(inr {})", print_proof(q)),
        BotE(q) => format!("(botE {})", print_proof(q)),
        Case(s, a, q, b, r) => {
            format!("(case {} ({a} {}) ({b} {}))", print_proof(s), print_proof(q), print_proof(r))
        }
        TLam(x, q) => format!("(tlam ({x} {}) {})", x.sort, print_proof(q)),
        TApp(q, t) => format!("(tapp {} {})", print_proof(q), print_term(t)),
        Witness(t, q) => format!("(wit {} {})", print_term(t), print_proof(q)),
        ExElim(s, x, a, q) => format!("(exelim {} (({x} {}) {a} {}))", print_proof(s), x.sort, print_proof(q)),
    }
}

/// Proof-term reader. Term variables bound by `tlam`/`exelim` may be written
/// bare when the signature has a single sort, or as `(x sort)`.
pub struct ProofParser<'s> {
    sig: &'s Signature,
    fixed: Vec<TermVar>,
    scope: Vec<TermVar>,
}

impl<'s> ProofParser<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        ProofParser { sig, fixed: Vec::new(), scope: Vec::new() }
    }

    /// Declares the free term variables of the ambient sequent.
    pub fn with_vars(mut self, vars: impl IntoIterator<Item = TermVar>) -> Self {
        self.fixed.extend(vars);
        self
    }

    fn default_sort(&self) -> Option<Sort> {
        match self.sig.sorts() {
            [only] => Some(only.clone()),
            _ => None,
        }
    }

    fn pvar(&self, sx: &SExpr) -> Result<PVar> {
        let name = sx.expect_atom("proof variable")?;
        index_of(name)
            .map(PVar)
            .ok_or_else(|| Error::syntax(sx.pos(), format!("`{name}` is not a proof variable name")))
    }

    fn tbinder(&self, sx: &SExpr) -> Result<TermVar> {
        match sx {
            SExpr::Atom(name, pos) => {
                let id = index_of(name)
                    .ok_or_else(|| Error::syntax(*pos, format!("`{name}` is not a variable name")))?;
                let sort = self
                    .default_sort()
                    .ok_or_else(|| Error::sort(name.as_str(), "binder needs a sort annotation (x <sort>)"))?;
                Ok(TermVar::new(id, sort))
            }
            SExpr::List(..) => FormulaParser::new(self.sig).binder(sx),
        }
    }

    fn term(&self, sx: &SExpr) -> Result<crate::syntax::Term> {
        let mut fp = FormulaParser::new(self.sig).with_default_sort(self.default_sort());
        for v in &self.fixed {
            fp.declare(v.clone());
        }
        for v in &self.scope {
            fp.push_scope(v.clone());
        }
        let t = fp.term(sx, None)?;
        self.sig.sort_of(&t)?;
        Ok(t)
    }

    pub fn proof(&mut self, sx: &SExpr) -> Result<ProofTerm> {
        if let Some(a) = sx.as_atom() {
            return match a {
                "topI" => Ok(TopI),
                _ => Err(Error::syntax(sx.pos(), format!("unexpected atom `{a}` in proof-term"))),
            };
        }
        let items = sx.expect_list("proof-term")?;
        let (head, rest) = items
            .split_first()
            .ok_or_else(|| Error::syntax(sx.pos(), "empty proof-term"))?;
        let h = head.expect_atom("proof-term constructor")?;
        let want = |n: usize| {
            if rest.len() == n {
                Ok(())
            } else {
                Err(Error::syntax(sx.pos(), format!("`{h}` takes {n} arguments")))
            }
        };
        let b = Box::new;
        Ok(match h {
            "var" => {
                want(1)?;
                Axiom(self.pvar(&rest[0])?)
            }
            "topI" => {
                want(0)?;
                TopI
            }
            "lam" => {
                want(2)?;
                Lam(self.pvar(&rest[0])?, b(self.proof(&rest[1])?))
            }
            "app" | "pair" => {
                want(2)?;
                let p = b(self.proof(&rest[0])?);
                let q = b(self.proof(&rest[1])?);
                if h == "app" { App(p, q) } else { Pair(p, q) }
            }
            "fst" | "snd" | "inl" | "inr" | "botE" => {
                want(1)?;
                let p = b(self.proof(&rest[0])?);
                match h {
                    "fst" => Fst(p),
                    "snd" => Snd(p),
                    "inl" => InjL(p),
                    "inr" => InjR(p),
                    _ => BotE(p),
                }
            }
            "case" => {
                want(3)?;
                let s = self.proof(&rest[0])?;
                let branch = |this: &mut Self, sx: &SExpr| -> Result<(PVar, ProofTerm)> {
                    let parts = sx.expect_list("(<var> <proof>)")?;
                    if parts.len() != 2 {
                        return Err(Error::syntax(sx.pos(), "case branch must be (<var> <proof>)"));
                    }
                    Ok((this.pvar(&parts[0])?, this.proof(&parts[1])?))
                };
                let (a, q) = branch(self, &rest[1])?;
                let (c, r) = branch(self, &rest[2])?;
                Case(b(s), a, b(q), c, b(r))
            }
            "tlam" => {
                want(2)?;
                let x = self.tbinder(&rest[0])?;
                self.scope.push(x.clone());
                let p = self.proof(&rest[1]);
                self.scope.pop();
                TLam(x, b(p?))
            }
            "tapp" => {
                want(2)?;
                TApp(b(self.proof(&rest[0])?), self.term(&rest[1])?)
            }
            "wit" => {
                want(2)?;
                Witness(self.term(&rest[0])?, b(self.proof(&rest[1])?))
            }
            "exelim" => {
                want(2)?;
                let s = self.proof(&rest[0])?;
                let parts = rest[1].expect_list("(<x> <a> <proof>)")?;
                if parts.len() != 3 {
                    return Err(Error::syntax(rest[1].pos(), "exelim binder must be (<x> <a> <proof>)"));
                }
                let x = self.tbinder(&parts[0])?;
                let a = self.pvar(&parts[1])?;
                self.scope.push(x.clone());
                let q = self.proof(&parts[2]);
                self.scope.pop();
                ExElim(b(s), x, a, b(q?))
            }
            other => return Err(Error::syntax(head.pos(), format!("unknown proof-term constructor `{other}`"))),
        })
    }
}

pub fn parse_proof_term(sig: &Signature, text: &str) -> Result<ProofTerm> {
    ProofParser::new(sig).proof(&sexpr::parse_one(text)?)
}

/// Contents of a proof file. The sequent is absent when the file carries
/// only a `term` (useful for reduction experiments on untyped terms).
#[derive(Clone, Debug)]
pub struct ProofFile {
    pub sequent: Option<Sequent>,
    pub term: ProofTerm,
}

pub fn parse_proof_file(sig: &Signature, text: &str) -> Result<ProofFile> {
    let doc = sexpr::parse_one(text)?;
    let forms = doc.expect_form("proof")?;
    let mut fp = FormulaParser::new(sig);
    let mut hyps = Vec::new();
    let mut goal = None;
    let mut term_sx = None;
    for form in forms {
        match form.head() {
            Some("context") => {
                for h in &form.as_list().unwrap()[1..] {
                    let parts = h.expect_list("(<var> <formula>)")?;
                    if parts.len() != 2 {
                        return Err(Error::syntax(h.pos(), "hypothesis must be (<var> <formula>)"));
                    }
                    let name = parts[0].expect_atom("proof variable")?;
                    let a = index_of(name)
                        .map(PVar)
                        .ok_or_else(|| Error::syntax(parts[0].pos(), format!("`{name}` is not a proof variable name")))?;
                    hyps.push((a, fp.formula(&parts[1])?));
                }
            }
            Some("goal") => {
                let f = form.expect_form("goal")?;
                if f.len() != 1 {
                    return Err(Error::syntax(form.pos(), "(goal <formula>)"));
                }
                goal = Some(fp.formula(&f[0])?);
            }
            Some("term") => {
                let t = form.expect_form("term")?;
                if t.len() != 1 {
                    return Err(Error::syntax(form.pos(), "(term <proof-term>)"));
                }
                term_sx = Some(&t[0]);
            }
            _ => return Err(Error::syntax(form.pos(), "expected (context ...), (goal ...) or (term ...)")),
        }
    }
    let term_sx = term_sx.ok_or_else(|| Error::syntax(doc.pos(), "proof file has no (term ...)"))?;
    let term = ProofParser::new(sig).with_vars(fp.free_vars()).proof(term_sx)?;
    let sequent = match goal {
        Some(g) => Some(Sequent::new(hyps, g)?),
        None if hyps.is_empty() => None,
        None => return Err(Error::syntax(doc.pos(), "context given without a goal")),
    };
    Ok(ProofFile { sequent, term })
}

pub fn print_proof_file(seq: &Sequent, term: &ProofTerm) -> String {
    let mut out = String::from("(proof\n  (context");
    for (a, h) in &seq.hyps {
        out.push_str(&format!(" ({a} {h})"));
    }
    out.push_str(&format!(")\n  (goal {})\n  (term {}))\n", seq.goal, print_proof(term)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::term::*;
    use crate::syntax::parse_theory;

    #[test]
    fn parses_every_constructor_and_prints_back() {
        let th = parse_theory("(theory (sort i) (fun c () i) (pred P (i)))").unwrap();
        let src = "(exelim (wit c (pair topI (var a))) (x b (case (inl (var b)) (c (tapp (tlam y (var c)) x)) (d (botE (app (lam e (var e)) (snd (fst (inr topI)))))))))";
        let p = parse_proof_term(&th.signature, src).unwrap();
        let again = parse_proof_term(&th.signature, &print_proof(&p)).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn proof_file_declares_sequent_variables() {
        let th = parse_theory("(theory (sort i) (pred P (i)))").unwrap();
        let f = parse_proof_file(&th.signature, "(proof (context (a (P x))) (goal (P x)) (term (var a)))").unwrap();
        let seq = f.sequent.unwrap();
        assert_eq!(seq.hyps.len(), 1);
        assert_eq!(f.term, var("a"));
    }

    #[test]
    fn bare_binder_needs_a_single_sort() {
        let th = parse_theory("(theory (sort i) (sort j))").unwrap();
        assert!(parse_proof_term(&th.signature, "(tlam x topI)").is_err());
        assert!(parse_proof_term(&th.signature, "(tlam (x j) topI)").is_ok());
    }
}
