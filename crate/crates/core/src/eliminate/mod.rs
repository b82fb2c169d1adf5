//! The extended language with ε-terms and HF literals, its semantics, and
//! translations back into the pure language.
//!
//! Literal mode replaces each term by a definition of its value under one
//! assignment. Uniform mode replaces `y = εφ` by a formula that recomputes
//! the least defining formula and its minimal-rank parameters, with the
//! parameter left free.

mod macros;
mod semantics;
mod translate;

pub use self::macros::{
    literal_definition, literal_definition_within, literal_size, rank_below, rank_less, relativize,
};
pub use self::semantics::{denote_eps, eval_extended};
pub use self::translate::{
    translate_literal, translate_uniform, Denotation, DenotationJson, StageGuard, TranslationAudit, TranslationResult,
    LITERAL_NODE_BUDGET, MAX_UNIFORM_INDEX,
};

#[cfg(test)]
mod tests;
