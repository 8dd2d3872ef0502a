//! Proof-terms, cut elimination and the proof checker.

pub mod check;
pub mod congruence;
pub mod enumerate;
pub mod reduce;
pub mod term;
pub mod text;

pub use check::{check, check_with_fuel, Derivation};
pub use enumerate::{by_size, enumerate, Alphabet};
pub use congruence::{congruent, normal_form, Rewriter};
pub use reduce::{contract, is_normal, reachable, reducts, redn, sn_check, step, ReductionStep, RuleTag, SnVerdict};
pub use term::{subst, subst_proof, subst_term_in_proof, ProofTerm};
pub use text::{parse_proof_file, parse_proof_term, print_proof, print_proof_file, ProofFile, ProofParser};
