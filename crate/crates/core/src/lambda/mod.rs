//! Typed lambda calculus for logical forms: terms over the base types
//! `t`, `v` and `r`, capture-avoiding substitution, normal-order
//! beta-reduction, alpha-equivalence and type checking.

mod canon;
mod parse;
mod reduce;
mod term;
mod types;
mod typing;

pub use canon::{alpha_equivalent, CanonicalForm};
pub use parse::{parse_template, parse_term, parse_type};
pub use reduce::{
    beta_reduce, beta_reduce_counted, beta_reduce_innermost, step_innermost, step_normal_order,
    substitute, DEFAULT_MAX_STEPS,
};
pub use term::{LambdaTerm, Symbol, BLANK};
pub use types::{SemType, TypeSubst, UnifyError};
pub use typing::{apply_defaults, ground, infer, meta_floor, resolve_types, type_of};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LambdaError {
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    TypeMismatch {
        path: String,
        expected: SemType,
        found: SemType,
    },
    #[error("not a function at {path}: {ty}")]
    NotAFunction { path: String, ty: SemType },
    #[error("type inference failed at {path}: {source}")]
    Unify { path: String, source: UnifyError },
    #[error("reduction did not terminate within {max_steps} steps")]
    StepBudgetExceeded { max_steps: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}
