//! Dependency trees to logical forms.

mod binarize;
mod convert;
mod corpus;
mod grammar;
mod outcome;
mod rules;

pub use binarize::{binarize, dependent_order, Step};
pub use convert::{
    assign_lfs, convert, derive, trim_blanks, Assigned, Assignment, ConvertOptions, Derivation,
    Grammar,
};
pub use corpus::{convert_corpus, convert_trees, ConversionSummary};
pub use grammar::{default_rule_texts, wh_lexicon, GrammarError};
pub use outcome::{ConversionOutcome, Failure, FailureReason, Outcome};
pub use rules::{
    LfAssignmentRule, LfRuleError, LfRuleSet, PriorityList, Rank, RuleBody, Selector, LEMMA_SLOT,
};
