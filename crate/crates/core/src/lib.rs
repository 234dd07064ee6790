//! Prenamings, substitution variants and variance of SLD-derivations.
//!
//! A *prenaming* is a variable-pure substitution that is injective on its
//! relaxed core. It generalizes renamings: every prenaming embeds into a
//! canonical renaming (its [closure](Prenaming::closure)), and the least
//! prenaming mapping one term onto another is computed by [`pren`].
//!
//! The [`sld`] module builds fully annotated derivations, and [`variance`]
//! certifies that two similar derivations are variants of each other step
//! by step.

pub mod io;
pub mod prenaming;
pub mod sld;
pub mod subst;
pub mod term;
pub mod unify;
pub mod variance;

pub use prenaming::{
    epsoid, make_prenaming, pren, pren_seq, Cycle, PrenFailure, PrenFailureKind, Prenaming,
    PrenamingError,
};
pub use sld::{
    derive, derive_with, resolve_step, resolve_step_with, standardize_apart, Clause,
    ClauseSelection, Derivation, DerivationStep, DeriveConfig, DeriveOutcome, DeriveStatus, Goal,
    Program, SldError,
};
pub use subst::{Subst, SubstError};
pub use term::{occurs_in, var_disjoint, vars_of, vars_of_all, Term, VarName, VarSet};
pub use unify::{
    unify, unify_oriented, unify_terms, Equation, SolvedForm, Unifier, UnifyFailure,
    UnifyFailureKind,
};
pub use variance::{
    check_similar, check_variant, propagate, Propagation, SimilarityReport, StepCertificate,
    StepSimilarity, StepVerdicts, VarianceCertificate, VarianceError, Verdict,
};
