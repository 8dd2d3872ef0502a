use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modkernel::codec::{emit_s_axioms, s_sort, BuiltinRelationSet, Codec};
use modkernel::gen;
use modkernel::premodel::{
    check_candidate_axioms, check_premodel_congruence, parse_premodel, Candidate, LabBounds, PreModel,
};
use modkernel::proof::reduce::normalize_trace;
use modkernel::proof::{
    check_with_fuel, enumerate, parse_proof_file, parse_proof_term, print_proof, sn_check, Alphabet, ProofTerm,
    SnVerdict,
};
use modkernel::realize::{parse_realizability, realizability_target, realize, realize_sequent, Bounds, EvalVerdict, Evaluator};
use modkernel::relativize::{emit_obligations_with, parse_interpretation, translate_formula, ObligationOptions};
use modkernel::syntax::{parse_formula, parse_theory, print_formula, print_theory, PVar, Sequent, Term, TermVar, Theory};
use modkernel::Error;

#[derive(Parser)]
#[command(name = "modk", version, about = "Batch front-end for the deduction-modulo kernel")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Theory file; an empty theory when absent.
    #[arg(long, global = true)]
    theory: Option<PathBuf>,
    /// Depth bound for `sn`, corpus size for `premodel-test`.
    #[arg(long, global = true, value_parser = positive)]
    bound: Option<usize>,
    /// Largest tree enumerated by `eval`.
    #[arg(long, global = true, value_parser = positive)]
    tree_bound: Option<usize>,
    /// Bound for strong normalization checks inside `eval` and `premodel-test`.
    #[arg(long, global = true, value_parser = positive)]
    sn_bound: Option<usize>,
    /// Rewriting fuel for `check`, step limit for `reduce`.
    #[arg(long, global = true, value_parser = positive)]
    fuel: Option<usize>,
    /// Seed for generated proofs in `premodel-test`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a proof file against the theory.
    Check { proof: String },
    /// Print a leftmost-outermost normalization trace.
    Reduce { proof: String },
    /// Decide strong normalization up to `--bound`.
    Sn { proof: String },
    /// Translate a formula of the theory through an interpretation.
    Translate {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        interp: PathBuf,
        formula: String,
    },
    /// Emit the proof obligations of an interpretation or a realizability translation.
    Obligations {
        #[arg(long, required_unless_present = "realize")]
        target: Option<PathBuf>,
        #[arg(long)]
        interp: PathBuf,
        /// Read the spec as a realizability translation into the tree theory.
        #[arg(long)]
        realize: bool,
        /// Also emit the connective equivalences.
        #[arg(long)]
        connectives: bool,
    },
    /// Print `pi ⊩ A`, or the sequent realizer of a proof file with `--sequent`.
    Realize {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "p")]
        pi: String,
        #[arg(long)]
        sequent: bool,
        input: String,
    },
    /// Evaluate a closed formula of the tree theory in the standard model.
    Eval { formula: String },
    /// Print the tree theory with the builtin definitions and any extra ones.
    EmitS {
        #[arg(long)]
        defs: Option<PathBuf>,
    },
    /// Print the tree code of a proof-term.
    Encode { proof: String },
    /// Print the proof-term coded by a tree.
    Decode { tree: String },
    /// Check the candidate axioms and rule congruence of a pre-model.
    PremodelTest { premodel: PathBuf },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass = 0,
    Fail = 1,
    Unknown = 2,
    Input = 3,
}

/// An input error, with the file it came from when there is one.
struct InputError(String);

impl InputError {
    fn at(origin: &str, e: Error) -> Self {
        InputError(format!("{origin}: {e}"))
    }
}

type Run = Result<(Status, String), InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// A file path when one exists, otherwise the text itself.
fn text_or_file(arg: &str) -> Result<(String, String), InputError> {
    let path = Path::new(arg);
    let looks_like_path = !arg.trim_start().starts_with('(') && (arg.contains('/') || arg.contains('.'));
    if path.is_file() || looks_like_path {
        Ok((read(path)?, arg.to_string()))
    } else {
        Ok((arg.to_string(), "<argument>".to_string()))
    }
}

fn theory(opts: &Opts) -> Result<Theory, InputError> {
    match &opts.theory {
        Some(p) => load_theory(p),
        None => Ok(parse_theory("(theory)").expect("empty theory")),
    }
}

fn load_theory(p: &Path) -> Result<Theory, InputError> {
    parse_theory(&read(p)?).map_err(|e| InputError::at(&p.display().to_string(), e))
}

/// A proof file, or a bare proof-term.
fn load_proof(th: &Theory, arg: &str) -> Result<(Option<Sequent>, ProofTerm), InputError> {
    let (text, origin) = text_or_file(arg)?;
    let doc = modkernel::sexpr::parse_one(&text).map_err(|e| InputError::at(&origin, e))?;
    if doc.head() == Some("proof") {
        let f = parse_proof_file(&th.signature, &text).map_err(|e| InputError::at(&origin, e))?;
        Ok((f.sequent, f.term))
    } else {
        let p = parse_proof_term(&th.signature, &text).map_err(|e| InputError::at(&origin, e))?;
        Ok((None, p))
    }
}

fn run(cli: &Cli) -> Run {
    let opts = &cli.opts;
    let th = theory(opts)?;
    let mut out = String::new();
    let status = match &cli.cmd {
        Cmd::Check { proof } => {
            let (seq, p) = load_proof(&th, proof)?;
            let seq = seq.ok_or_else(|| InputError(format!("{proof}: the proof file has no goal")))?;
            match check_with_fuel(&th, &seq, &p, opts.fuel.unwrap_or(10_000)) {
                Ok(_) => {
                    writeln!(out, "accept {}", print_formula(&seq.goal)).unwrap();
                    Status::Pass
                }
                Err(e @ Error::FuelExhausted(_)) => {
                    writeln!(out, "unknown: {e}").unwrap();
                    Status::Unknown
                }
                Err(e) => {
                    writeln!(out, "reject: {e}").unwrap();
                    Status::Fail
                }
            }
        }
        Cmd::Reduce { proof } => {
            let (_, p) = load_proof(&th, proof)?;
            let (trace, normal) = normalize_trace(&p, opts.fuel.unwrap_or(1000));
            writeln!(out, "{}", print_proof(&p)).unwrap();
            for s in &trace {
                let pos: Vec<String> = s.position.iter().map(|i| i.to_string()).collect();
                writeln!(out, "; {} at [{}]", s.rule, pos.join(" ")).unwrap();
                writeln!(out, "{}", print_proof(&s.target)).unwrap();
            }
            if normal {
                writeln!(out, "; normal after {} steps", trace.len()).unwrap();
                Status::Pass
            } else {
                writeln!(out, "; fuel exhausted after {} steps", trace.len()).unwrap();
                Status::Unknown
            }
        }
        Cmd::Sn { proof } => {
            let (_, p) = load_proof(&th, proof)?;
            let v = sn_check(&p, opts.bound.unwrap_or(100));
            writeln!(out, "{v}").unwrap();
            match v {
                SnVerdict::StronglyNormalizing(_) => Status::Pass,
                SnVerdict::CycleFound(cycle) => {
                    for q in &cycle {
                        writeln!(out, "{}", print_proof(q)).unwrap();
                    }
                    Status::Fail
                }
                SnVerdict::BoundExceeded(_) => Status::Unknown,
            }
        }
        Cmd::Translate { target, interp, formula } => {
            let u = load_theory(target)?;
            let origin = interp.display().to_string();
            let spec = parse_interpretation(&read(interp)?, &th.signature, &u.signature)
                .map_err(|e| InputError::at(&origin, e))?;
            let (text, origin) = text_or_file(formula)?;
            let a = parse_formula(&th.signature, &text).map_err(|e| InputError::at(&origin, e))?;
            let b = translate_formula(&spec, &a).map_err(|e| InputError::at(&origin, e))?;
            writeln!(out, "{}", print_formula(&b)).unwrap();
            Status::Pass
        }
        Cmd::Obligations { target, interp, realize, connectives } => {
            let origin = interp.display().to_string();
            let text = read(interp)?;
            let obligations = if *realize {
                let u = realizability_target(&th.signature).map_err(|e| InputError::at("target", e))?;
                let spec = parse_realizability(&text, &th.signature, &u.signature).map_err(|e| InputError::at(&origin, e))?;
                modkernel::realize::emit_realizability_obligations(&spec, &th, &u)
            } else {
                let u = load_theory(target.as_deref().expect("required by clap"))?;
                let spec = parse_interpretation(&text, &th.signature, &u.signature).map_err(|e| InputError::at(&origin, e))?;
                emit_obligations_with(&spec, &th, &u, ObligationOptions { connectives: *connectives })
            };
            for o in obligations.map_err(|e| InputError::at(&origin, e))? {
                writeln!(out, "{o}").unwrap();
            }
            Status::Pass
        }
        Cmd::Realize { spec, pi, sequent, input } => {
            let u = realizability_target(&th.signature).map_err(|e| InputError::at("target", e))?;
            let (text, origin) = match spec {
                Some(p) => (read(p)?, p.display().to_string()),
                None => ("(realize)".to_string(), "<empty spec>".to_string()),
            };
            let spec = parse_realizability(&text, &th.signature, &u.signature).map_err(|e| InputError::at(&origin, e))?;
            let pi = Term::var(&TermVar::named(pi, s_sort().as_str()));
            let f = if *sequent {
                let (seq, _) = load_proof(&th, input)?;
                let seq = seq.ok_or_else(|| InputError(format!("{input}: the proof file has no goal")))?;
                realize_sequent(&spec, &seq, &pi)
            } else {
                let (text, origin) = text_or_file(input)?;
                let a = parse_formula(&th.signature, &text).map_err(|e| InputError::at(&origin, e))?;
                realize(&spec, &a, &pi)
            };
            writeln!(out, "{}", print_formula(&f.map_err(|e| InputError::at(input, e))?)).unwrap();
            Status::Pass
        }
        Cmd::Eval { formula } => {
            let u = realizability_target(&th.signature).map_err(|e| InputError::at("target", e))?;
            let (text, origin) = text_or_file(formula)?;
            let f = parse_formula(&u.signature, &text).map_err(|e| InputError::at(&origin, e))?;
            let bounds = Bounds::new(opts.tree_bound.unwrap_or(6), opts.sn_bound.unwrap_or(50));
            let ev = Evaluator::new(&th.signature, bounds).map_err(|e| InputError::at("evaluator", e))?;
            let v = ev.eval(&f).map_err(|e| InputError::at(&origin, e))?;
            writeln!(out, "{v}").unwrap();
            match v {
                EvalVerdict::True => Status::Pass,
                EvalVerdict::False => Status::Fail,
                EvalVerdict::Unknown(_) => Status::Unknown,
            }
        }
        Cmd::EmitS { defs } => {
            let mut b = BuiltinRelationSet::new(&th.signature).map_err(|e| InputError::at("builtins", e))?;
            if let Some(p) = defs {
                b.env_mut().load(&read(p)?).map_err(|e| InputError::at(&p.display().to_string(), e))?;
            }
            let s = emit_s_axioms(b.codec().lang(), b.env().defs(), &[]).map_err(|e| InputError::at("definitions", e))?;
            writeln!(out, "{}", print_theory(&s)).unwrap();
            Status::Pass
        }
        Cmd::Encode { proof } => {
            let (_, p) = load_proof(&th, proof)?;
            let codec = Codec::new(&th.signature);
            writeln!(out, "{}", codec.lang().print(&codec.encode_proof(&p))).unwrap();
            Status::Pass
        }
        Cmd::Decode { tree } => {
            let (text, origin) = text_or_file(tree)?;
            let codec = Codec::new(&th.signature);
            let t = codec.lang().parse(&text).map_err(|e| InputError::at(&origin, e))?;
            let p = codec.decode_proof(&t).map_err(|e| InputError::at(&origin, e))?;
            writeln!(out, "{}", print_proof(&p)).unwrap();
            Status::Pass
        }
        Cmd::PremodelTest { premodel } => {
            let origin = premodel.display().to_string();
            let m = parse_premodel(&read(premodel)?, &th.signature).map_err(|e| InputError::at(&origin, e))?;
            premodel_test(&th, &m, opts, &mut out).map_err(|e| InputError::at(&origin, e))?
        }
    };
    Ok((status, out))
}

fn corpus(th: &Theory, size: usize, seed: u64) -> Vec<ProofTerm> {
    let sig = &th.signature;
    let mut alpha = Alphabet { pvars: vec![PVar::named("a"), PVar::named("b")], tvars: Vec::new(), terms: Vec::new() };
    for s in sig.sorts() {
        let x = TermVar::named("x", s.as_str());
        alpha.terms.push(Term::var(&x));
        alpha.tvars.push(x);
    }
    for f in sig.funs().iter().filter(|f| f.args.is_empty()) {
        alpha.terms.push(Term::constant(f.name.as_str()));
    }
    let mut corpus = enumerate(&alpha, size);
    if !sig.sorts().is_empty() {
        corpus.extend(gen::proofs(th, seed, 32, 3).into_iter().map(|g| g.term));
    }
    corpus.sort();
    corpus.dedup();
    corpus
}

fn premodel_test(th: &Theory, m: &PreModel, opts: &Opts, out: &mut String) -> modkernel::Result<Status> {
    let corpus = corpus(th, opts.bound.unwrap_or(4), opts.seed.unwrap_or(1));
    let bounds = LabBounds::new(opts.sn_bound.unwrap_or(50));
    let mut candidates: Vec<&Candidate> = Vec::new();
    for p in th.signature.preds() {
        let carriers: Vec<_> = p.args.iter().map(|s| m.carrier(s)).collect();
        let mut tuple = vec![0; carriers.len()];
        'tuples: loop {
            let args: Vec<_> = tuple.iter().zip(&carriers).map(|(&i, c)| c[i].clone()).collect();
            if let Some(c) = m.pred(&p.name, &args) {
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
            for k in (0..tuple.len()).rev() {
                tuple[k] += 1;
                if tuple[k] < carriers[k].len() {
                    continue 'tuples;
                }
                tuple[k] = 0;
            }
            break;
        }
    }
    let (mut failed, mut unknown) = (false, false);
    writeln!(out, "corpus {} proof-terms", corpus.len()).unwrap();
    for c in candidates {
        let r = check_candidate_axioms(m, c, &corpus, &bounds)?;
        write!(out, "{r}").unwrap();
        failed |= !r.passed();
        unknown |= r.unknown() > 0;
    }
    let r = check_premodel_congruence(m, &th.rules, &corpus, &bounds)?;
    writeln!(out, "congruence").unwrap();
    write!(out, "{r}").unwrap();
    failed |= !r.passed();
    unknown |= r.unknown() > 0;
    Ok(if failed {
        Status::Fail
    } else if unknown {
        Status::Unknown
    } else {
        Status::Pass
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Input as u8 } else { 0 });
        }
    };
    let (status, report) = match run(&cli) {
        Ok(r) => r,
        Err(InputError(msg)) => {
            eprintln!("modk: {msg}");
            return ExitCode::from(Status::Input as u8);
        }
    };
    match &cli.opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report) {
                eprintln!("modk: {}: {e}", path.display());
                return ExitCode::from(Status::Input as u8);
            }
        }
        None => {
            let _ = std::io::stdout().write_all(report.as_bytes());
        }
    }
    ExitCode::from(status as u8)
}
