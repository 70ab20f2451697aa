use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{fmt_f64, AnalyticsError};
use crate::transducer::ConversionOutcome;
use crate::treebank::DepTree;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LabelCount {
    /// Edges carrying the label.
    pub count: usize,
    /// Sentences with at least one such edge.
    pub sentences: usize,
}

/// Dependency label frequencies. Subtyped labels are counted separately from
/// their base label.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LabelStats {
    pub tokens: usize,
    pub sentences: usize,
    pub labels: BTreeMap<String, LabelCount>,
}

impl LabelStats {
    pub fn count(&self, label: &str) -> usize {
        self.labels.get(label).map_or(0, |c| c.count)
    }

    /// Occurrences per token; 0 for an empty corpus.
    pub fn per_token(&self, label: &str) -> f64 {
        ratio(self.count(label), self.tokens)
    }

    /// Share of sentences containing the label.
    pub fn presence(&self, label: &str) -> f64 {
        ratio(
            self.labels.get(label).map_or(0, |c| c.sentences),
            self.sentences,
        )
    }

    pub fn mean_length(&self) -> f64 {
        ratio(self.tokens, self.sentences)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label\tcount\tper_token\tsentences\tpresence\n");
        for (label, c) in &self.labels {
            out.push_str(&format!(
                "{label}\t{}\t{}\t{}\t{}\n",
                c.count,
                fmt_f64(self.per_token(label)),
                c.sentences,
                fmt_f64(self.presence(label))
            ));
        }
        out.push_str(&format!(
            "#total\t{}\t\t{}\t\n#mean_length\t{}\t\t\t\n",
            self.tokens,
            self.sentences,
            fmt_f64(self.mean_length())
        ));
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            label: &'a str,
            count: usize,
            per_token: f64,
            sentences: usize,
            presence: f64,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            tokens: usize,
            sentences: usize,
            mean_length: f64,
            labels: Vec<Row<'a>>,
        }
        let doc = Doc {
            tokens: self.tokens,
            sentences: self.sentences,
            mean_length: self.mean_length(),
            labels: self
                .labels
                .iter()
                .map(|(l, c)| Row {
                    label: l,
                    count: c.count,
                    per_token: self.per_token(l),
                    sentences: c.sentences,
                    presence: self.presence(l),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("stats serialize")
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn label_counts<'a>(trees: impl IntoIterator<Item = &'a DepTree>) -> LabelStats {
    let mut stats = LabelStats::default();
    for tree in trees {
        stats.sentences += 1;
        stats.tokens += tree.len();
        let mut seen = BTreeSet::new();
        for t in &tree.tokens {
            let entry = stats.labels.entry(t.deprel.clone()).or_default();
            entry.count += 1;
            if seen.insert(t.deprel.as_str()) {
                entry.sentences += 1;
            }
        }
    }
    stats
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelRate {
    pub label: String,
    pub occurrences: usize,
    pub converted: usize,
}

impl LabelRate {
    pub fn rate(&self) -> f64 {
        ratio(self.converted, self.occurrences)
    }
}

/// Per-label share of occurrences in converted sentences. An occurrence
/// counts as not converted when its sentence failed. `outcomes` must follow
/// `trees` one to one.
pub fn conversion_rates(
    trees: &[DepTree],
    outcomes: &[ConversionOutcome],
) -> Result<Vec<LabelRate>, AnalyticsError> {
    if trees.len() != outcomes.len() {
        return Err(AnalyticsError::Consistency(format!(
            "{} sentences but {} outcomes",
            trees.len(),
            outcomes.len()
        )));
    }
    let mut table: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (tree, outcome) in trees.iter().zip(outcomes) {
        if tree.sentence_id != outcome.sentence_id {
            return Err(AnalyticsError::Consistency(format!(
                "sentence {} paired with outcome for {}",
                tree.sentence_id, outcome.sentence_id
            )));
        }
        let ok = outcome.is_converted() as usize;
        for t in &tree.tokens {
            let e = table.entry(t.deprel.as_str()).or_default();
            e.0 += 1;
            e.1 += ok;
        }
    }
    Ok(table
        .into_iter()
        .map(|(label, (occurrences, converted))| LabelRate {
            label: label.to_string(),
            occurrences,
            converted,
        })
        .collect())
}

pub fn rates_to_tsv(rates: &[LabelRate]) -> String {
    let mut out = String::from("label\toccurrences\tconverted\trate\n");
    for r in rates {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.label,
            r.occurrences,
            r.converted,
            fmt_f64(r.rate())
        ));
    }
    out
}
