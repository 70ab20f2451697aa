use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::lambda::LambdaTerm;

/// Why a sentence produced no LF. One failure aborts the whole sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    NoRuleForNode,
    NoRuleForEdge,
    TypingFailure,
    UnsupportedConstruction,
    /// Residual `X` tag or `dep` label.
    Residual,
    InvalidTree,
    RewriteError,
    ReductionBudget,
}

impl FailureReason {
    pub const ALL: [FailureReason; 8] = [
        FailureReason::NoRuleForNode,
        FailureReason::NoRuleForEdge,
        FailureReason::TypingFailure,
        FailureReason::UnsupportedConstruction,
        FailureReason::Residual,
        FailureReason::InvalidTree,
        FailureReason::RewriteError,
        FailureReason::ReductionBudget,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FailureReason::NoRuleForNode => "no-rule-for-node",
            FailureReason::NoRuleForEdge => "no-rule-for-edge",
            FailureReason::TypingFailure => "typing-failure",
            FailureReason::UnsupportedConstruction => "unsupported-construction",
            FailureReason::Residual => "residual",
            FailureReason::InvalidTree => "invalid-tree",
            FailureReason::RewriteError => "rewrite-error",
            FailureReason::ReductionBudget => "reduction-budget",
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for FailureReason {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FailureReason::ALL
            .into_iter()
            .find(|r| r.code() == s)
            .ok_or_else(|| format!("unknown failure reason {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub reason: FailureReason,
    /// Offending token ids in the transformed tree.
    pub tokens: Vec<usize>,
    pub detail: String,
}

impl Failure {
    pub fn new(reason: FailureReason, tokens: Vec<usize>, detail: impl Into<String>) -> Self {
        Failure {
            reason,
            tokens,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reason)?;
        if !self.tokens.is_empty() {
            write!(f, " at {:?}", self.tokens)?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Converted(LambdaTerm),
    Failed(Failure),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConversionOutcome {
    pub sentence_id: String,
    pub outcome: Outcome,
}

#[derive(Serialize)]
struct Record<'a> {
    sentence_id: &'a str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lf: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<FailureReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tokens: Option<&'a [usize]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
}

impl ConversionOutcome {
    pub fn lf(&self) -> Option<&LambdaTerm> {
        match &self.outcome {
            Outcome::Converted(t) => Some(t),
            Outcome::Failed(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match &self.outcome {
            Outcome::Converted(_) => None,
            Outcome::Failed(f) => Some(f),
        }
    }

    pub fn is_converted(&self) -> bool {
        matches!(self.outcome, Outcome::Converted(_))
    }

    /// One JSON object on a single line.
    pub fn to_record(&self) -> String {
        let rec = match &self.outcome {
            Outcome::Converted(t) => Record {
                sentence_id: &self.sentence_id,
                status: "converted",
                lf: Some(t.to_string()),
                reason: None,
                tokens: None,
                detail: None,
            },
            Outcome::Failed(f) => Record {
                sentence_id: &self.sentence_id,
                status: "failed",
                lf: None,
                reason: Some(f.reason),
                tokens: Some(&f.tokens),
                detail: Some(&f.detail),
            },
        };
        serde_json::to_string(&rec).expect("records always serialize")
    }
}
