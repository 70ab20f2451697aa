use super::convert::Grammar;
use super::rules::{LfRuleError, LfRuleSet, PriorityList};
use crate::pattern::{parse_rule_file, PatternError};

const REWRITE: &str = include_str!("../../rules/default.rewrite");
const LF_RULES: &str = include_str!("../../rules/default.lf");
const PRIORITIES: &str = include_str!("../../rules/default.priorities");
const WH_EN: &str = include_str!("../../rules/wh.en");
const WH_HE: &str = include_str!("../../rules/wh.he");

#[derive(Debug, thiserror::Error)]
pub enum GrammarError {
    #[error("unknown language {0:?} (expected en or he)")]
    UnknownLanguage(String),
    #[error(transparent)]
    Rewrite(#[from] PatternError),
    #[error(transparent)]
    Lf(#[from] LfRuleError),
}

/// Question-word lexicon for a language, as a `%define WH ...` line.
pub fn wh_lexicon(lang: &str) -> Result<&'static str, GrammarError> {
    match lang {
        "en" => Ok(WH_EN),
        "he" => Ok(WH_HE),
        other => Err(GrammarError::UnknownLanguage(other.to_string())),
    }
}

/// Texts of the bundled rule files.
pub fn default_rule_texts() -> (&'static str, &'static str, &'static str) {
    (REWRITE, LF_RULES, PRIORITIES)
}

impl Grammar {
    /// Builds a grammar from rule file texts. The language's question-word
    /// lexicon is visible to the rewrite rules as `@WH`.
    pub fn from_texts(
        lang: &str,
        rewrite: &str,
        lf_rules: &str,
        priorities: &str,
    ) -> Result<Grammar, GrammarError> {
        let lexicon = wh_lexicon(lang)?;
        // The lexicon goes in front as one extra line; shift reported line
        // numbers back so they point into the caller's file.
        let source = format!("{}\n{rewrite}", lexicon.trim_end());
        let rewrite = parse_rule_file(&source).map_err(|e| shift_line(e, 1))?;
        Ok(Grammar {
            rewrite,
            lf_rules: LfRuleSet::parse(lf_rules)?,
            priorities: PriorityList::parse(priorities),
        })
    }

    /// The bundled rule set.
    pub fn default_for(lang: &str) -> Result<Grammar, GrammarError> {
        Grammar::from_texts(lang, REWRITE, LF_RULES, PRIORITIES)
    }
}

fn shift_line(e: PatternError, by: usize) -> PatternError {
    match e {
        PatternError::Syntax { line, message } => PatternError::Syntax {
            line: line.saturating_sub(by),
            message,
        },
        other => other,
    }
}
