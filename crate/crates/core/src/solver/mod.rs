//! Equational generalization: translation of symbolic problems into
//! algebraic ones, classification of the congruences of the 1-generated free
//! algebra, and extraction of minimal complete sets of generalizers.

mod classify;
mod problem;
mod report;
mod solve;

pub use classify::{
    Classification, Context, ExactWitness, NonRetractable, RetractPair, SectionAttempt, Verdict,
};
pub use problem::{alg_of, kernel_of_problem, AlgebraicProblem, SymbolicProblem};
pub use report::{classification_json, CongruenceEntry, GeneralizationReport, McsgEntry, TypeVerdict};
pub use solve::{
    compare_generality, g_congruences, pairwise_reduce, solve, sym_of, GCongruences, GStatus, Generality,
};

/// Default bound on the arity of free algebras searched for embeddings.
pub const DEFAULT_BOUND: usize = 2;
