//! Trees, encodings of proofs as trees, primitive recursive definitions
//! and the theory of syntactic constructions.

pub mod builtins;
pub mod encode;
pub mod pr;
pub mod s_theory;
pub mod tree;

pub use builtins::{definition_of, BuiltinRelationSet, FUNCTIONS, RELATIONS};
pub use encode::Codec;
pub use pr::{print_def, print_expr, Clause, DefParser, Expr, PrEnv, PrimRecDef};
pub use tree::{Constructor, Tree, TreeLang, STANDARD};
pub use s_theory::{
    add_notation, derived_relation, emit_s_axioms, induction_axiom, relation_template, s_signature, s_sort,
    one, term_to_tree, tree_to_term, S_SORT,
};
