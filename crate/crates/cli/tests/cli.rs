use std::path::PathBuf;
use std::process::Command;

use modkernel::codec::Codec;
use modkernel::proof::parse_proof_term;
use modkernel::realize::realizability_target;
use modkernel::syntax::{parse_formula, parse_theory, print_theory, FormulaParser, TermVar};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.display().to_string()
}

fn modk(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modk")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn sn_on_the_identity() {
    let (code, out, _) = modk(&["sn", &data("identity.proof")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("StronglyNormalizing 0"));
}

#[test]
fn sn_on_omega_finds_the_cycle() {
    let (code, out, _) = modk(&["sn", "--bound", "10", &data("omega.proof")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("CycleFound"), "{out}");
}

#[test]
fn sn_bound_exceeded_is_unknown() {
    let (code, out, _) = modk(&["sn", "--bound", "1", "(app (lam a (var a)) (app (lam b (var b)) topI))"]);
    assert_eq!(code, 2);
    assert_eq!(out.trim(), "BoundExceeded 1");
}

#[test]
fn realize_top_is_strong_normalization() {
    let (code, out, _) = modk(&["realize", "top"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(SN p)");
}

#[test]
fn check_accepts_modulo_the_rule_and_rejects_without_it() {
    let arith = data("mini-arithmetic.theory");
    let (code, out, _) = modk(&["--theory", &arith, "check", &data("plus-zero.proof")]);
    assert_eq!((code, out.trim()), (0, "accept (P (s 0))"));
    let dir = tempfile::tempdir().unwrap();
    let bare = dir.path().join("bare.theory");
    let text = std::fs::read_to_string(&arith).unwrap().replace("(rule term (+ x 0) x)", "");
    std::fs::write(&bare, text).unwrap();
    let (code, out, _) = modk(&["--theory", bare.to_str().unwrap(), "check", &data("plus-zero.proof")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("reject"), "{out}");
}

#[test]
fn reduce_prints_a_trace_that_reparses() {
    let (code, out, _) = modk(&["reduce", "(fst (pair (app (lam a (var a)) topI) (var b)))"]);
    assert_eq!(code, 0);
    let terms: Vec<&str> = out.lines().filter(|l| !l.starts_with(';')).collect();
    assert_eq!(terms.len(), 3);
    assert_eq!(terms[2], "topI");
    let sig = parse_theory("(theory)").unwrap().signature;
    for t in terms {
        parse_proof_term(&sig, t).unwrap();
    }
    assert!(out.contains("; fst at []"));
    let (code, _, _) = modk(&["reduce", "--fuel", "5", &data("omega.proof")]);
    assert_eq!(code, 2);
}

#[test]
fn translate_and_obligations() {
    let (t, u, i) = (data("even.theory"), data("unary.theory"), data("even-in-unary.interp"));
    let (code, out, _) = modk(&["--theory", &t, "translate", "--target", &u, "--interp", &i, "(even (succ z))"]);
    assert_eq!((code, out.trim()), (0, "(E (g (g k)))"));
    let (code, out, _) = modk(&["--theory", &t, "obligations", "--target", &u, "--interp", &i]);
    assert_eq!(code, 0);
    let usig = parse_theory(&std::fs::read_to_string(&u).unwrap()).unwrap().signature;
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    for l in &lines {
        let (f, tag) = l.split_once(" ; tag: ").unwrap();
        parse_formula(&usig, f).unwrap();
        assert!(!tag.is_empty());
    }
}

#[test]
fn realizability_obligations_and_sequents_reparse() {
    let t = data("nat.theory");
    let th = parse_theory(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let u = realizability_target(&th.signature).unwrap();
    let (code, out, _) = modk(&["--theory", &t, "obligations", "--realize", "--interp", &data("nat.realize")]);
    assert_eq!(code, 0);
    assert!(out.contains("tag: candidate"));
    for l in out.lines() {
        parse_formula(&u.signature, l.split(" ; ").next().unwrap()).unwrap();
    }
    let (code, out, _) =
        modk(&["--theory", &t, "realize", "--spec", &data("nat.realize"), "--sequent", &data("identity.proof")]);
    assert_eq!(code, 0);
    let pi = TermVar::named("p", "L");
    let sx = modkernel::sexpr::parse_one(out.trim()).unwrap();
    FormulaParser::new(&u.signature).with_var(pi).formula(&sx).unwrap();
}

#[test]
fn eval_verdicts_map_to_exit_codes() {
    let (code, out, _) = modk(&["eval", "(SN (ImpI 0 (Axiom 0)))"]);
    assert_eq!((code, out.trim()), (0, "True"));
    let (code, out, _) = modk(&["eval", "--tree-bound", "4", "(forall (x L) (SN x))"]);
    assert_eq!((code, out.trim()), (1, "False"));
    let omega = "(ImpE (ImpI 0 (ImpE (Axiom 0) (Axiom 0))) (ImpI 0 (ImpE (Axiom 0) (Axiom 0))))";
    let (code, out, _) = modk(&["eval", "--sn-bound", "5", &format!("(SN {omega})")]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn encode_and_decode_are_inverse() {
    let (code, tree, _) = modk(&["encode", "(lam b (app (var b) topI))"]);
    assert_eq!(code, 0);
    let (code, back, _) = modk(&["decode", tree.trim()]);
    assert_eq!((code, back.trim()), (0, "(lam b (app (var b) topI))"));
    let codec = Codec::new(&parse_theory("(theory)").unwrap().signature);
    codec.lang().parse(tree.trim()).unwrap();
    let (code, _, err) = modk(&["decode", "(ImpI (Nil) topI)"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn emit_s_reparses() {
    let (code, out, _) = modk(&["--theory", &data("nat.theory"), "emit-s"]);
    assert_eq!(code, 0);
    let th = parse_theory(&out).unwrap();
    assert_eq!(print_theory(&th).trim(), out.trim());
}

#[test]
fn premodel_reports() {
    let t = data("nat.theory");
    let (code, out, _) = modk(&["--theory", &t, "premodel-test", &data("nat.premodel")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("elimination  pass"));
    let (code, out, _) = modk(&["--theory", &t, "premodel-test", "--bound", "3", &data("nat-normal.premodel")]);
    assert_eq!(code, 1);
    assert!(out.contains("elimination  FAIL"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let (code, out, _) = modk(&["sn", "--out", path.to_str().unwrap(), &data("identity.proof")]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), "StronglyNormalizing 0");
}

#[test]
fn input_errors_exit_three() {
    let (code, _, err) = modk(&["sn", "(lam a"]);
    assert_eq!(code, 3);
    assert!(err.contains("syntax error at"), "{err}");
    assert_eq!(modk(&["check", "missing.proof"]).0, 3);
    assert_eq!(modk(&["check", &data("omega.proof")]).0, 3);
    assert_eq!(modk(&["sn", "--bound", "0", &data("identity.proof")]).0, 3);
    assert_eq!(modk(&["frobnicate"]).0, 3);
    assert_eq!(modk(&["--theory", &data("identity.proof"), "sn", "topI"]).0, 3);
}

#[test]
fn exit_status_is_deterministic() {
    let args = ["--theory", &data("nat.theory"), "premodel-test", "--seed", "7", &data("nat.premodel")];
    let args: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
    assert_eq!(modk(&args), modk(&args));
}

#[test]
fn bundled_theories_round_trip() {
    for name in ["mini-arithmetic.theory", "even.theory", "unary.theory", "nat.theory"] {
        let th = parse_theory(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        assert_eq!(parse_theory(&print_theory(&th)).unwrap(), th, "{name}");
    }
}
