use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{fmt_f64, AnalyticsError};
use crate::treebank::labels::base_upos;
use crate::treebank::DepTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfusionCell {
    pub label_a: String,
    pub label_b: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub sentences: usize,
    /// Sentences present in both inputs but tokenized differently.
    pub skipped: usize,
    pub tokens: usize,
    pub labeled_matches: usize,
    pub unlabeled_matches: usize,
    pub las: f64,
    pub uas: f64,
    /// Label pairs over tokens, sorted by label.
    pub confusion: Vec<ConfusionCell>,
}

impl AgreementReport {
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "metric\tvalue\nsentences\t{}\nskipped\t{}\ntokens\t{}\nLAS\t{}\nUAS\t{}\n\nlabel_a\tlabel_b\tcount\n",
            self.sentences,
            self.skipped,
            self.tokens,
            fmt_f64(self.las),
            fmt_f64(self.uas)
        );
        for c in &self.confusion {
            out.push_str(&format!("{}\t{}\t{}\n", c.label_a, c.label_b, c.count));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("agreement serializes")
    }
}

fn is_punct(t: &crate::treebank::Token) -> bool {
    base_upos(&t.upos) == "PUNCT" || t.deprel == "punct"
}

/// Labeled and unlabeled attachment scores between two annotations of the
/// same sentences, paired by sentence id. Pairs whose token forms differ
/// are skipped with a warning. Punctuation counts unless `exclude_punct`.
pub fn attachment_agreement(
    a: &[DepTree],
    b: &[DepTree],
    exclude_punct: bool,
) -> Result<AgreementReport, AnalyticsError> {
    let by_id: HashMap<&str, &DepTree> = b.iter().map(|t| (t.sentence_id.as_str(), t)).collect();
    let mut sentences = 0;
    let mut skipped = 0;
    let mut tokens = 0;
    let mut labeled = 0;
    let mut unlabeled = 0;
    let mut confusion: BTreeMap<(String, String), usize> = BTreeMap::new();
    for ta in a {
        let Some(tb) = by_id.get(ta.sentence_id.as_str()) else {
            continue;
        };
        let same_forms = ta.len() == tb.len()
            && ta
                .tokens
                .iter()
                .zip(&tb.tokens)
                .all(|(x, y)| x.form == y.form);
        if !same_forms {
            log::warn!("sentence {}: tokenization differs, skipped", ta.sentence_id);
            skipped += 1;
            continue;
        }
        sentences += 1;
        for (x, y) in ta.tokens.iter().zip(&tb.tokens) {
            if exclude_punct && (is_punct(x) || is_punct(y)) {
                continue;
            }
            tokens += 1;
            if x.head == y.head {
                unlabeled += 1;
                if x.deprel == y.deprel {
                    labeled += 1;
                }
            }
            *confusion
                .entry((x.deprel.clone(), y.deprel.clone()))
                .or_default() += 1;
        }
    }
    if tokens == 0 {
        return Err(AnalyticsError::NoComparableSentences);
    }
    Ok(AgreementReport {
        sentences,
        skipped,
        tokens,
        labeled_matches: labeled,
        unlabeled_matches: unlabeled,
        las: labeled as f64 / tokens as f64,
        uas: unlabeled as f64 / tokens as f64,
        confusion: confusion
            .into_iter()
            .map(|((label_a, label_b), count)| ConfusionCell {
                label_a,
                label_b,
                count,
            })
            .collect(),
    })
}
