use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::convert::{convert, ConvertOptions, Grammar};
use super::outcome::ConversionOutcome;
use crate::treebank::{DepTree, Session};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConversionSummary {
    pub total: usize,
    pub converted: usize,
}

impl ConversionSummary {
    pub fn of(outcomes: &[ConversionOutcome]) -> Self {
        ConversionSummary {
            total: outcomes.len(),
            converted: outcomes.iter().filter(|o| o.is_converted()).count(),
        }
    }

    /// `None` for an empty corpus.
    pub fn rate(&self) -> Option<f64> {
        (self.total > 0).then(|| self.converted as f64 / self.total as f64)
    }
}

impl fmt::Display for ConversionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rate() {
            Some(r) => write!(f, "converted {}/{} rate {r:.4}", self.converted, self.total),
            None => write!(f, "converted 0/0 rate n/a"),
        }
    }
}

/// Converts every tree, in parallel on the current rayon pool. Outcomes come
/// back in input order whatever the pool size.
pub fn convert_trees(
    trees: &[DepTree],
    grammar: &Grammar,
    opts: &ConvertOptions,
) -> Vec<ConversionOutcome> {
    trees
        .par_iter()
        .map(|t| convert(t, grammar, opts))
        .collect()
}

/// Converts all sessions' trees in session order.
pub fn convert_corpus(
    sessions: &[Session],
    grammar: &Grammar,
    opts: &ConvertOptions,
) -> (Vec<ConversionOutcome>, ConversionSummary) {
    let trees: Vec<&DepTree> = sessions.iter().flat_map(|s| &s.trees).collect();
    let outcomes: Vec<ConversionOutcome> = trees
        .par_iter()
        .map(|t| convert(t, grammar, opts))
        .collect();
    let summary = ConversionSummary::of(&outcomes);
    (outcomes, summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::Token;

    fn session(trees: Vec<DepTree>) -> Session {
        Session {
            session_id: "1".into(),
            child_age_months: 27.0,
            trees,
        }
    }

    #[test]
    fn empty_corpus_has_no_rate() {
        let g = Grammar::default_for("en").unwrap();
        let (out, summary) = convert_corpus(&[], &g, &ConvertOptions::default());
        assert!(out.is_empty());
        assert_eq!(summary.rate(), None);
        assert_eq!(summary.to_string(), "converted 0/0 rate n/a");
    }

    #[test]
    fn one_good_sentence_is_full_rate() {
        let g = Grammar::default_for("en").unwrap();
        let t = DepTree::new(
            "a",
            vec![
                Token::new(1, "You", "you", "PRON", 2, "nsubj"),
                Token::new(2, "found", "found", "VERB", 0, "root"),
                Token::new(3, "it", "it", "PRON", 2, "dobj"),
            ],
        );
        let (out, summary) = convert_corpus(&[session(vec![t])], &g, &ConvertOptions::default());
        assert_eq!(summary.rate(), Some(1.0));
        assert_eq!(
            out[0].lf().unwrap().to_string(),
            "lambda e1:r. found(you, it, e1)"
        );
    }
}
