//! A deduction-modulo kernel.
//!
//! The crate provides sorted first-order syntax ([`syntax`]), an untyped
//! proof-term calculus with cut-elimination reduction and a natural
//! deduction modulo checker ([`proof`]), a language of trees with Gödel-style
//! encodings and a primitive recursive evaluator ([`codec`]), the relativizing
//! interpretation of one theory in another ([`relativize`]), the realizability
//! translation into the theory of syntactic constructions ([`realize`]) and a
//! desk-scale laboratory for pre-models ([`premodel`]).

pub mod codec;
pub mod error;
pub mod gen;
pub mod premodel;
pub mod proof;
pub mod realize;
pub mod relativize;
pub mod sexpr;
pub mod syntax;

pub use error::{Error, Result};
