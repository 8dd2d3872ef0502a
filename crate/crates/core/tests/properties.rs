use modkernel::gen::{proofs, Generator};
use modkernel::premodel::{interp_membership, parse_premodel, print_premodel, Assignment, LabBounds, Membership, PreModel};
use modkernel::proof::{by_size, check, parse_proof_term, print_proof, reducts, sn_check, Alphabet, ProofTerm};
use modkernel::syntax::{parse_formula, parse_theory, print_formula, print_theory, Formula, Theory};
use proptest::prelude::*;

fn theory() -> Theory {
    parse_theory(
        "(theory (sort nat) (fun z () nat) (fun succ (nat) nat) (pred P (nat)) (pred Q (nat nat)) \
         (rule prop (P z) top))",
    )
    .unwrap()
}

fn model(th: &Theory) -> PreModel {
    parse_premodel(
        "(premodel (carrier nat zero one) (fun z (() zero)) (fun succ ((zero) one) ((one) one)) \
         (pred P ((zero) sn) ((one) empty-plus-vars)) \
         (pred Q ((zero zero) sn) ((zero one) normal) ((one zero) (interp (and top top))) ((one one) sn)))",
        &th.signature,
    )
    .unwrap()
}

fn corpus(n: usize) -> Vec<ProofTerm> {
    by_size(&Alphabet::small("nat", "z"), n).into_iter().flatten().collect()
}

const FORMULAS: &[&str] = &[
    "top",
    "bot",
    "(P z)",
    "(P (succ z))",
    "(Q z (succ z))",
    "(and top (P z))",
    "(or bot (P (succ z)))",
    "(imp top top)",
    "(imp (P (succ z)) (P z))",
    "(forall (x nat) (P x))",
    "(exists (x nat) (Q x x))",
];

fn formulas(th: &Theory) -> Vec<Formula> {
    FORMULAS.iter().map(|f| parse_formula(&th.signature, f).unwrap()).collect()
}

fn mem(m: &PreModel, a: &Formula, p: &ProofTerm, b: &LabBounds) -> Membership {
    interp_membership(m, a, &Assignment::new(), p, b).unwrap()
}

#[test]
fn members_are_strongly_normalizing() {
    let th = theory();
    let m = model(&th);
    let b = LabBounds::default();
    for a in formulas(&th) {
        for p in corpus(4) {
            if mem(&m, &a, &p, &b) == Membership::Member {
                assert!(sn_check(&p, 50).is_sn(), "{} in {}", print_proof(&p), print_formula(&a));
            }
        }
    }
}

#[test]
fn top_and_bot_have_the_same_interpretation() {
    let th = theory();
    let m = model(&th);
    let b = LabBounds::default();
    for p in corpus(5) {
        assert_eq!(mem(&m, &Formula::Top, &p, &b), mem(&m, &Formula::Bot, &p, &b), "{}", print_proof(&p));
    }
}

#[test]
fn interpretations_are_closed_under_reduction() {
    let th = theory();
    let m = model(&th);
    let b = LabBounds::default();
    for a in formulas(&th) {
        for p in corpus(4) {
            if mem(&m, &a, &p, &b) != Membership::Member {
                continue;
            }
            for r in reducts(&p) {
                assert_ne!(mem(&m, &a, &r, &b), Membership::NonMember, "{} -> {}", print_proof(&p), print_proof(&r));
            }
        }
    }
}

fn candidates_only(th: &Theory) -> PreModel {
    parse_premodel(
        "(premodel (carrier nat zero one) (fun z (() zero)) (fun succ ((zero) one) ((one) one)) \
         (pred P ((zero) sn) ((one) (interp (imp top top)))) \
         (pred Q ((zero zero) sn) ((zero one) sn) ((one zero) (interp (and top top))) ((one one) sn)))",
        &th.signature,
    )
    .unwrap()
}

#[test]
fn application_preserves_membership() {
    let th = theory();
    let m = candidates_only(&th);
    let b = LabBounds::default();
    let small = corpus(3);
    let mut tested = 0;
    let pairs = [("top", "top"), ("(P z)", "(P (succ z))"), ("(Q z z)", "(and top top)")];
    for (lhs, rhs) in pairs {
        let a = parse_formula(&th.signature, lhs).unwrap();
        let c = parse_formula(&th.signature, rhs).unwrap();
        let imp = Formula::imp(a.clone(), c.clone());
        let fs: Vec<_> = small.iter().filter(|p| mem(&m, &imp, p, &b) == Membership::Member).collect();
        let xs: Vec<_> = small.iter().filter(|p| mem(&m, &a, p, &b) == Membership::Member).collect();
        for f in &fs {
            for x in &xs {
                let fx = ProofTerm::App(Box::new((*f).clone()), Box::new((*x).clone()));
                let v = mem(&m, &c, &fx, &b);
                assert_ne!(v, Membership::NonMember, "({} {}) against {lhs} -> {rhs}", print_proof(f), print_proof(x));
                tested += 1;
            }
        }
    }
    assert!(tested > 0);
}

#[test]
fn application_can_leave_a_non_candidate() {
    let th = theory();
    let m = model(&th);
    let b = LabBounds::default();
    let a = ProofTerm::Axiom(modkernel::syntax::PVar::named("a"));
    let imp = parse_formula(&th.signature, "(imp (P z) (P (succ z)))").unwrap();
    let arg = parse_formula(&th.signature, "(P z)").unwrap();
    let res = parse_formula(&th.signature, "(P (succ z))").unwrap();
    assert_eq!(mem(&m, &imp, &a, &b), Membership::Member);
    assert_eq!(mem(&m, &arg, &a, &b), Membership::Member);
    let aa = ProofTerm::App(Box::new(a.clone()), Box::new(a));
    assert_eq!(mem(&m, &res, &aa, &b), Membership::NonMember);
}

#[test]
fn definite_verdicts_survive_larger_bounds() {
    let th = theory();
    let m = model(&th);
    let small = LabBounds { sn: 20, term_size: 2, ..LabBounds::default() };
    let large = LabBounds { sn: 60, term_size: 4, ..LabBounds::default() };
    for a in formulas(&th) {
        for p in corpus(4) {
            let before = mem(&m, &a, &p, &small);
            if before != Membership::Unknown {
                assert_eq!(before, mem(&m, &a, &p, &large), "{} in {}", print_proof(&p), print_formula(&a));
            }
        }
    }
}

#[test]
fn premodel_round_trip() {
    let th = theory();
    let m = model(&th);
    let text = print_premodel(&m);
    assert_eq!(print_premodel(&parse_premodel(&text, &th.signature).unwrap()), text);
}

#[test]
fn theory_round_trip() {
    let th = theory();
    let text = print_theory(&th);
    assert_eq!(print_theory(&parse_theory(&text).unwrap()), text);
}

#[test]
fn proof_term_round_trip() {
    let th = theory();
    for p in corpus(5) {
        let text = print_proof(&p);
        assert_eq!(parse_proof_term(&th.signature, &text).unwrap(), p, "{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formula_round_trip(seed in any::<u64>(), depth in 0usize..6) {
        let th = theory();
        let f = Generator::new(&th, seed).formula(depth);
        let text = print_formula(&f);
        prop_assert_eq!(parse_formula(&th.signature, &text).unwrap(), f);
    }

    #[test]
    fn generated_proofs_check_and_keep_checking(seed in any::<u64>()) {
        let th = theory();
        for g in proofs(&th, seed, 4, 4) {
            prop_assert!(check(&th, &g.sequent, &g.term).is_ok(), "{}", print_proof(&g.term));
            for r in reducts(&g.term) {
                prop_assert!(check(&th, &g.sequent, &r).is_ok(), "{} -> {}", print_proof(&g.term), print_proof(&r));
            }
        }
    }
}
