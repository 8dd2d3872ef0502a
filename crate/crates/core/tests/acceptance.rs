//! One line per acceptance criterion, each with a time limit.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use modkernel::codec::{emit_s_axioms, BuiltinRelationSet, PrEnv, TreeLang};
use modkernel::gen::{proofs, Generator};
use modkernel::premodel::{check_candidate_axioms, parse_premodel, Candidate, LabBounds};
use modkernel::proof::term::*;
use modkernel::proof::ProofTerm::TopI;
use modkernel::proof::{
    check, contract, enumerate, reducts, redn, sn_check, subst_proof, subst_term_in_proof, Alphabet, RuleTag,
    SnVerdict,
};
use modkernel::realize::{
    cr_formula, parse_realizability, realizability_target, realize, realize_sequent, statement,
    Bounds, EvalVerdict, Evaluator, RealizabilitySpec, StatementKind, Subject,
};
use modkernel::relativize::{parse_interpretation, translate_formula, translate_term, InterpretationSpec};
use modkernel::sexpr;
use modkernel::syntax::{
    parse_formula, parse_theory, print_formula, Formula, FormulaParser, PVar, Sequent, Template, Term, TermVar, Theory,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reduction_fidelity() -> Outcome {
    let x = TermVar::named("x", "i");
    let c = Term::constant("c");
    let cases = [
        (RuleTag::Beta, app(lam("a", pair(var("a"), var("b"))), TopI), pair(TopI, var("b"))),
        (RuleTag::Fst, fst(pair(var("a"), var("b"))), var("a")),
        (RuleTag::Snd, snd(pair(var("a"), var("b"))), var("b")),
        (RuleTag::CaseL, case(inl(TopI), "a", pair(var("a"), var("a")), "b", var("b")), pair(TopI, TopI)),
        (RuleTag::CaseR, case(inr(TopI), "a", var("a"), "b", pair(var("b"), var("b"))), pair(TopI, TopI)),
        (RuleTag::TBeta, tapp(tlam(x.clone(), witness(Term::var(&x), var("a"))), c.clone()), witness(c.clone(), var("a"))),
        (RuleTag::ExElim, exelim(witness(c.clone(), TopI), x.clone(), "a", witness(Term::var(&x), var("a"))), witness(c, TopI)),
    ];
    for (tag, redex, want) in &cases {
        let got = contract(redex).ok_or_else(|| format!("{redex} is not a redex"))?;
        ensure(got == (*tag, want.clone()), || format!("{redex}: got {} {}, want {tag} {want}", got.0, got.1))?;
    }
    Ok(format!("{} rules", cases.len()))
}

fn sn_analysis() -> Outcome {
    let id = lam("a", var("a"));
    ensure(sn_check(&id, 10) == SnVerdict::StronglyNormalizing(0), || format!("identity: {}", sn_check(&id, 10)))?;
    let v = sn_check(&omega(), 10);
    ensure(matches!(v, SnVerdict::CycleFound(_)), || format!("omega: {v}"))?;
    let k = app(lam("a", TopI), omega());
    let v = sn_check(&k, 10);
    ensure(matches!(v, SnVerdict::CycleFound(_)), || format!("K-omega: {v}"))?;
    Ok("identity, omega, weak-only".into())
}

fn encoding_faithfulness() -> Outcome {
    let th = parse_theory("(theory (sort i) (fun c () i))").unwrap();
    let b = BuiltinRelationSet::new(&th.signature).map_err(|e| e.to_string())?;
    let codec = b.codec();
    let env = b.env();
    let lang = codec.lang();
    let corpus = enumerate(&Alphabet::small("i", "c"), 6);
    let (x, y) = (TermVar::named("x", "i"), TermVar::named("y", "i"));
    let a = PVar::named("a");
    let p_repl = [app(var("a"), var("b"))];
    let t_repl = [Term::var(&y)];
    let reducts_def = env.find("reducts").unwrap();
    let stepall_def = env.find("stepall").unwrap();
    let bad = corpus.par_iter().find_map_any(|p| -> Option<String> {
        let code = codec.encode_proof(p);
        let got = env.eval(reducts_def, std::slice::from_ref(&code)).ok()?;
        let got: Vec<_> = codec.list_items(&got)?.iter().map(|t| codec.decode_proof(t).unwrap()).collect();
        let direct = reducts(p);
        if got != direct {
            return Some(format!("reducts of {p}"));
        }
        for r in &direct {
            if !env.holds("red", &[code.clone(), codec.encode_proof(r)]).unwrap_or(false) {
                return Some(format!("Red({p}, {r})"));
            }
        }
        if !direct.contains(p) && env.holds("red", &[code.clone(), code.clone()]).unwrap_or(true) {
            return Some(format!("Red({p}, {p})"));
        }
        // rednset at n+1 is stepall of rednset at n
        let mut level = env.eval_by_name("rednset", &[codec.list(vec![code.clone()]), lang.num(0)]).ok()?;
        for n in 0..=4 {
            if n > 0 {
                level = env.eval(stepall_def, &[level]).ok()?;
            }
            let got: BTreeSet<_> = codec.list_items(&level)?.iter().map(|t| codec.decode_proof(t).unwrap()).collect();
            if got != redn(p, n) {
                return Some(format!("Redn({p}, {n})"));
            }
        }
        for r in &p_repl {
            let got = env.eval_by_name("psubst", &[code.clone(), codec.encode_pvar(a), codec.encode_proof(r)]).ok()?;
            if codec.decode_proof(&got).ok()? != subst_proof(p, a, r) {
                return Some(format!("PSubst({p}, a, {r})"));
            }
        }
        for t in &t_repl {
            let got = env.eval_by_name("tsubst", &[code.clone(), codec.encode_tvar(&x), codec.encode_term(t)]).ok()?;
            if codec.decode_proof(&got).ok()? != subst_term_in_proof(p, &x, t) {
                return Some(format!("TSubst({p}, x, {t})"));
            }
        }
        None
    });
    match bad {
        Some(m) => Err(format!("disagreement: {m}")),
        None => Ok(format!("{} terms", corpus.len())),
    }
}

fn strip_foralls(f: &Formula) -> &Formula {
    let mut f = f;
    while let Formula::Forall(_, b) = f {
        f = b;
    }
    f
}

fn s_axiom_emitter() -> Outcome {
    let lang = TreeLang::new(&[("0", 0), ("s", 1), ("leaf", 0), ("node", 2), ("tri", 3)]).map_err(|e| e.to_string())?;
    let mut env = PrEnv::new(lang.clone());
    env.load(
        "(prdef le 2 (rec 0) (clause 0 1) (clause s (rec 0 (s (arg 1)))) (clause _ 0))
         (prdef size 1 (rec 0) (clause node (s (rec 0))) (clause _ (s 0)))",
    )
    .map_err(|e| e.to_string())?;
    let th = emit_s_axioms(&lang, env.defs(), &[]).map_err(|e| e.to_string())?;
    let ctor = |t: &Term| match t {
        Term::App(f, args) => lang.ctors().iter().find(|c| c.name == f.as_str()).map(|c| (c.name.clone(), args.len())),
        _ => None,
    };
    let mut injective = Vec::new();
    let mut confusion = BTreeSet::new();
    for ax in &th.axioms {
        match strip_foralls(ax) {
            Formula::Imp(l, r) => match (l.as_ref(), r.as_ref()) {
                (Formula::Atom(eq, lr), Formula::Bot) if eq.as_str() == "=" => {
                    if let (Some(a), Some(b)) = (ctor(&lr[0]), ctor(&lr[1])) {
                        if a.0 != b.0 {
                            confusion.insert((a.0, b.0));
                        }
                    }
                }
                (Formula::Atom(eq, lr), concl) if eq.as_str() == "=" => {
                    if let (Some(a), Some(b)) = (ctor(&lr[0]), ctor(&lr[1])) {
                        if a.0 == b.0 && a.1 == count_conj(concl) {
                            injective.push(a.0);
                        }
                    }
                }
                _ => {}
            },
            _ => {}
        }
    }
    ensure(injective.len() == 5, || format!("{} injectivity axioms", injective.len()))?;
    ensure(confusion.len() == 20, || format!("{} non-confusion axioms", confusion.len()))?;
    let clauses: usize = env.defs().iter().map(|d| d.expanded(&lang).len()).sum();
    let eqs: Vec<Formula> = env.defs().iter().flat_map(|d| d.equations(&lang, &modkernel::codec::s_sort())).collect();
    ensure(eqs.len() == clauses, || format!("{} equations for {clauses} clauses", eqs.len()))?;
    ensure(th.axioms[th.axioms.len() - clauses..] == eqs[..], || "equations differ".into())?;
    Ok(format!("5 + 20 + {clauses} equations"))
}

fn count_conj(f: &Formula) -> usize {
    match f {
        Formula::And(_, b) => 1 + count_conj(b),
        Formula::Top => 0,
        _ => 1,
    }
}

fn relativize_setup() -> (Theory, Theory, InterpretationSpec) {
    let t = parse_theory(
        "(theory (sort nat) (sort set) (fun z () nat) (fun succ (nat) nat) (fun single (nat) set)
           (pred even (nat)) (pred in (nat set)))",
    )
    .unwrap();
    let u = parse_theory("(theory (sort d) (fun k () d) (fun g (d) d) (fun h (d d) d) (pred N (d)) (pred S (d)) (pred E (d)) (pred M (d d)))")
        .unwrap();
    let spec = parse_interpretation(
        "(interp (sort nat d (rel (x) (N x)))
                 (sort set d (rel (x) (S x)))
                 (fun z () k)
                 (fun succ (y) (g (g y)))
                 (fun single (y) (h y k))
                 (pred even (y) (E y))
                 (pred in (y w) (M w y)))",
        &t.signature,
        &u.signature,
    )
    .unwrap();
    (t, u, spec)
}

/// Checks the defining equation of the translation at every node.
fn structural(spec: &InterpretationSpec, a: &Formula) -> Result<(), String> {
    let tr = |f: &Formula| translate_formula(spec, f).map_err(|e| e.to_string());
    let got = tr(a)?;
    let want = match a {
        Formula::Top | Formula::Bot => a.clone(),
        Formula::Atom(p, args) => {
            let tm = spec.pred_template(p).ok_or_else(|| format!("no template for {p}"))?;
            let args = args.iter().map(|t| translate_term(spec, t)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
            tm.instantiate(&args)
        }
        Formula::And(x, y) => Formula::and(tr(x)?, tr(y)?),
        Formula::Or(x, y) => Formula::or(tr(x)?, tr(y)?),
        Formula::Imp(x, y) => Formula::imp(tr(x)?, tr(y)?),
        Formula::Forall(x, b) => {
            let xs = spec.star_var(x).map_err(|e| e.to_string())?;
            Formula::forall(xs, Formula::imp(spec.guard(x).map_err(|e| e.to_string())?, tr(b)?))
        }
        Formula::Exists(x, b) => {
            let xs = spec.star_var(x).map_err(|e| e.to_string())?;
            Formula::exists(xs, Formula::and(spec.guard(x).map_err(|e| e.to_string())?, tr(b)?))
        }
    };
    if got != want {
        return Err(format!("{} translates to {}", print_formula(a), print_formula(&got)));
    }
    match a {
        Formula::And(x, y) | Formula::Or(x, y) | Formula::Imp(x, y) => {
            structural(spec, x)?;
            structural(spec, y)
        }
        Formula::Forall(_, b) | Formula::Exists(_, b) => structural(spec, b),
        _ => Ok(()),
    }
}

fn translation_identities() -> Outcome {
    let (t, u, spec) = relativize_setup();
    for seed in 0..500u64 {
        let a = Generator::new(&t, seed).formula(6);
        structural(&spec, &a)?;
        let star = translate_formula(&spec, &a).map_err(|e| e.to_string())?;
        u.signature.check_formula(&star).map_err(|e| e.to_string())?;
        let allowed: BTreeSet<TermVar> = a.free_vars().iter().map(|x| spec.star_var(x).unwrap()).collect();
        ensure(star.free_vars().is_subset(&allowed), || format!("free variables escape in {}", print_formula(&a)))?;
    }
    Ok("500 formulas".into())
}

const SPEC: &str = "(realize
    (sort nat L (rel (x) (Term x (Sortc 0))))
    (fun z () (Fun 0 Nil))
    (fun succ (y) (Fun (s 0) (Cons y Nil)))
    (realpred P (n) (p) (and (SN p) (= n n))))";

fn realize_setup() -> (Theory, Theory, RealizabilitySpec) {
    let t = parse_theory("(theory (sort nat) (fun z () nat) (fun succ (nat) nat) (pred P (nat)))").unwrap();
    let u = realizability_target(&t.signature).unwrap();
    let spec = parse_realizability(SPEC, &t.signature, &u.signature).unwrap();
    (t, u, spec)
}

fn realizability_goldens() -> Outcome {
    let (t, u, spec) = realize_setup();
    let p = TermVar::named("p", "L");
    let u_formula = |s: &str| FormulaParser::new(&u.signature).with_var(p.clone()).formula(&sexpr::parse_one(s).unwrap()).unwrap();
    let goldens = [
        ("top", "(SN p)"),
        ("bot", "(SN p)"),
        (
            "(imp top bot)",
            "(and (SN p) (forall (a L) (forall (b L) (imp (Red* p (ImpI a b))
                (forall (c L) (imp (SN c) (SN (psubst b a c))))))))",
        ),
        ("(and top top)", "(and (SN p) (forall (a L) (forall (b L) (imp (Red* p (AndI a b)) (and (SN a) (SN b))))))"),
        (
            "(or top bot)",
            "(and (SN p) (and (forall (a L) (imp (Red* p (OrI1 a)) (SN a)))
                              (forall (b L) (imp (Red* p (OrI2 b)) (SN b)))))",
        ),
        (
            "(forall (x nat) (P x))",
            "(and (SN p) (forall (v L) (forall (q L) (imp (Red* p (ForallI v q))
                (forall (x L) (forall (t L) (imp (and (Term x (Sortc 0)) (Term t (Sortc 0)))
                    (and (SN (tsubst q v t)) (= x x)))))))))",
        ),
        (
            "(exists (x nat) (P x))",
            "(and (SN p) (forall (q L) (forall (t L) (imp (Red* p (ExistsI t q))
                (exists (x L) (and (Term x (Sortc 0)) (and (SN q) (= x x))))))))",
        ),
    ];
    for (src, want) in goldens {
        let a = parse_formula(&t.signature, src).unwrap();
        let got = realize(&spec, &a, &Term::var(&p)).map_err(|e| e.to_string())?;
        ensure(got.alpha_eq(&u_formula(want)), || format!("{src}: {}", print_formula(&got)))?;
    }
    let cr = cr_formula(&Template::new(vec![p.clone()], u_formula("(SN p)"))).map_err(|e| e.to_string())?;
    let want = u_formula(
        "(and (forall (p L) (imp (SN p) (and (Proof p) (SN p))))
         (and (forall (a L) (imp (ProofVar a) (SN (Axiom a))))
         (and (forall (p L) (forall (q L) (imp (and (SN p) (Red p q)) (SN q))))
              (forall (p L) (imp (and (Elim p) (forall (q L) (imp (Red p q) (SN q)))) (SN p))))))",
    );
    ensure(cr.alpha_eq(&want), || format!("CR: {}", print_formula(&cr)))?;
    Ok("7 clauses and CR".into())
}

fn candidate_axioms() -> Outcome {
    let th = parse_theory("(theory (sort i) (fun c () i))").unwrap();
    let m = parse_premodel("(premodel (carrier i e) (fun c (() e)))", &th.signature).map_err(|e| e.to_string())?;
    let corpus = enumerate(&Alphabet::small("i", "c"), 6);
    let bounds = LabBounds::default();
    let mut unknown = 0;
    for c in [Candidate::Sn, Candidate::Interp(Formula::Top), Candidate::Interp(Formula::imp(Formula::Top, Formula::Top))] {
        let r = check_candidate_axioms(&m, &c, &corpus, &bounds).map_err(|e| e.to_string())?;
        ensure(r.passed(), || r.to_string())?;
        unknown += r.unknown();
    }
    Ok(format!("{} terms, {unknown} unknown", corpus.len()))
}

fn mini_arithmetic() -> Theory {
    parse_theory(
        "(theory (sort nat) (fun 0 () nat) (fun s (nat) nat) (fun + (nat nat) nat) (pred P (nat)) (pred Q (nat nat))
           (rule term (+ x 0) x))",
    )
    .unwrap()
}

fn deduction_modulo() -> Outcome {
    let th = mini_arithmetic();
    let goal = parse_formula(&th.signature, "(imp (P (+ y 0)) (P y))").unwrap();
    let seq = Sequent::new(vec![], goal).unwrap();
    let id = lam("a", var("a"));
    check(&th, &seq, &id).map_err(|e| format!("rejected with the rule: {e}"))?;
    let bare = Theory { rules: vec![], ..th.clone() };
    ensure(check(&bare, &seq, &id).is_err(), || "accepted without the rule".into())?;
    let gens = proofs(&th, 0x5eed, 1000, 5);
    let steps = gens
        .par_iter()
        .map(|g| -> Result<usize, String> {
            check(&th, &g.sequent, &g.term).map_err(|e| format!("generated proof rejected: {e}"))?;
            let rs = reducts(&g.term);
            for r in &rs {
                check(&th, &g.sequent, r).map_err(|e| format!("{} ▷ {r}: {e}", g.term))?;
            }
            Ok(rs.len())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(format!("1000 proofs, {} reducts", steps.iter().sum::<usize>()))
}

fn closed_corpus(t: &Theory) -> Vec<(Sequent, ProofTerm)> {
    let x = TermVar::named("x", "nat");
    let z = Term::constant("z");
    let f = |s: &str| parse_formula(&t.signature, s).unwrap();
    let seq = |s: &str| Sequent::new(vec![], f(s)).unwrap();
    vec![
        (seq("top"), TopI),
        (seq("(imp top top)"), lam("a", var("a"))),
        (seq("(and top top)"), pair(TopI, TopI)),
        (seq("(or top bot)"), inl(TopI)),
        (seq("(imp bot top)"), lam("a", TopI)),
        (seq("(imp (P z) (P z))"), lam("a", var("a"))),
        (seq("(forall (x nat) (imp (P x) (P x)))"), tlam(x.clone(), lam("a", var("a")))),
        (seq("(exists (x nat) top)"), witness(z.clone(), TopI)),
        (seq("top"), app(lam("a", var("a")), TopI)),
        (seq("top"), fst(pair(TopI, TopI))),
        (Sequent::new(vec![(PVar::named("a"), f("(P z)"))], f("(P z)")).unwrap(), var("a")),
        (seq("(imp (and (P z) top) (P z))"), lam("a", fst(var("a")))),
        (seq("(forall (x nat) top)"), tlam(x.clone(), TopI)),
        (seq("top"), tapp(tlam(x, TopI), z)),
    ]
}

fn leftmost_conjunct(f: &Formula) -> &Formula {
    match f {
        Formula::And(l, _) => leftmost_conjunct(l),
        _ => f,
    }
}

fn final_pipeline() -> Outcome {
    let (t, _, spec) = realize_setup();
    let ev = Evaluator::new(&t.signature, Bounds::new(6, 50)).map_err(|e| e.to_string())?;
    let corpus = closed_corpus(&t);
    let mut unknown = 0;
    for (seq, proof) in &corpus {
        ensure(seq.is_closed(), || "open sequent".into())?;
        check(&t, seq, proof).map_err(|e| format!("{proof}: {e}"))?;
        let code = spec.proof_code(proof);
        let real = realize_sequent(&spec, seq, &code).map_err(|e| e.to_string())?;
        let sn_part = leftmost_conjunct(&real);
        let v = ev.eval(sn_part).map_err(|e| e.to_string())?;
        ensure(v == EvalVerdict::True, || format!("{proof}: SN conjunct {}: {v}", print_formula(sn_part)))?;
        let st = statement(StatementKind::Existence, &spec, &Subject::Proof(seq.clone(), proof.clone()))
            .map_err(|e| e.to_string())?;
        let v = ev.eval(&st.formula).map_err(|e| e.to_string())?;
        ensure(!v.is_false(), || format!("{proof}: statement evaluates False"))?;
        unknown += usize::from(!v.is_true());
        let folded = seq.hyps.iter().rev().fold(proof.clone(), |acc, (a, _)| ProofTerm::Lam(*a, Box::new(acc)));
        ensure(sn_check(&folded, 50).is_sn(), || format!("{proof}: not SN"))?;
    }
    Ok(format!("{} proofs, {unknown} statements unknown", corpus.len()))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "reduction fidelity", limit: secs(1), run: reduction_fidelity },
        Criterion { name: "SN analysis", limit: secs(1), run: sn_analysis },
        Criterion { name: "encoding faithfulness", limit: secs(60), run: encoding_faithfulness },
        Criterion { name: "S-axiom emitter", limit: secs(1), run: s_axiom_emitter },
        Criterion { name: "translation identities", limit: secs(10), run: translation_identities },
        Criterion { name: "realizability golden clauses", limit: secs(1), run: realizability_goldens },
        Criterion { name: "candidate axioms", limit: secs(60), run: candidate_axioms },
        Criterion { name: "deduction modulo", limit: secs(30), run: deduction_modulo },
        Criterion { name: "end-to-end normalization", limit: secs(120), run: final_pipeline },
    ];
    let mut failed = Vec::new();
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} limit", c.limit)),
            Err(e) => (false, e),
        };
        println!(
            "criterion {} {:<30} {}  {:>9.3}s / {:>3}s  {detail}",
            i + 1,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            c.limit.as_secs()
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all {} criteria pass", criteria.len());
}
