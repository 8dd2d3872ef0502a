use criterion::{black_box, criterion_group, criterion_main, Criterion};
use modkernel::codec::BuiltinRelationSet;
use modkernel::gen::proofs;
use modkernel::premodel::{interp_membership, parse_premodel, Assignment, LabBounds, Membership};
use modkernel::proof::{check, enumerate, reducts, sn_check, Alphabet};
use modkernel::realize::{Bounds, Evaluator};
use modkernel::syntax::{parse_formula, parse_theory, Formula};

fn reduction(c: &mut Criterion) {
    let corpus = enumerate(&Alphabet::small("i", "c"), 5);
    c.bench_function("reducts over size-5 corpus", |b| {
        b.iter(|| corpus.iter().map(|p| reducts(black_box(p)).len()).sum::<usize>())
    });
    c.bench_function("sn_check over size-5 corpus", |b| {
        b.iter(|| corpus.iter().filter(|p| sn_check(black_box(p), 50).is_sn()).count())
    });
}

fn checking(c: &mut Criterion) {
    let th = parse_theory(
        "(theory (sort nat) (fun 0 () nat) (fun s (nat) nat) (fun + (nat nat) nat) \
         (pred P (nat)) (pred Q (nat nat)) (rule term (+ x 0) x))",
    )
    .unwrap();
    let ps = proofs(&th, 0x5eed, 200, 5);
    c.bench_function("check 200 generated proofs", |b| {
        b.iter(|| ps.iter().filter(|g| check(&th, &g.sequent, black_box(&g.term)).is_ok()).count())
    });
}

fn encoding(c: &mut Criterion) {
    let th = parse_theory("(theory (sort i) (fun c () i))").unwrap();
    let b = BuiltinRelationSet::new(&th.signature).unwrap();
    let (codec, env) = (b.codec(), b.env());
    let codes: Vec<_> = enumerate(&Alphabet::small("i", "c"), 4).iter().map(|p| codec.encode_proof(p)).collect();
    let f = env.find("reducts").unwrap();
    c.bench_function("PR reducts over size-4 corpus", |bch| {
        bch.iter(|| codes.iter().map(|t| env.eval(f, &[black_box(t.clone())]).unwrap().size()).sum::<usize>())
    });
}

fn semantics(c: &mut Criterion) {
    let th = parse_theory("(theory (sort nat) (fun z () nat) (fun succ (nat) nat) (pred P (nat)))").unwrap();
    let m = parse_premodel(
        "(premodel (carrier nat zero one) (fun z (() zero)) (fun succ ((zero) one) ((one) one)) \
         (pred P ((zero) sn) ((one) (interp top))))",
        &th.signature,
    )
    .unwrap();
    let a = parse_formula(&th.signature, "(imp (P z) (and (P (succ z)) top))").unwrap();
    let corpus = enumerate(&Alphabet::small("nat", "z"), 4);
    let bounds = LabBounds::default();
    c.bench_function("premodel membership over size-4 corpus", |b| {
        b.iter(|| corpus.iter().filter(|p| interp_membership(&m, &a, &Assignment::new(), p, &bounds).unwrap() == Membership::Member).count())
    });
    let ev = Evaluator::new(&th.signature, Bounds::new(5, 30)).unwrap();
    let u = modkernel::realize::realizability_target(&th.signature).unwrap();
    let f: Formula = parse_formula(&u.signature, "(forall (x L) (imp (Proof x) (SN x)))").unwrap();
    c.bench_function("eval SN over trees of size 5", |b| b.iter(|| ev.eval(black_box(&f)).unwrap()));
}

criterion_group!(benches, reduction, checking, encoding, semantics);
criterion_main!(benches);
