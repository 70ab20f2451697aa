//! Corpus statistics: label frequencies, conversion rates, annotator
//! agreement, corpus comparison and longitudinal trends.

mod agreement;
mod compare;
mod stats;
mod trends;

pub use agreement::{attachment_agreement, AgreementReport, ConfusionCell};
pub use compare::{compare_corpora, differences_to_tsv, Difference, Higher, DEFAULT_THRESHOLD};
pub use stats::{conversion_rates, label_counts, rates_to_tsv, LabelCount, LabelRate, LabelStats};
pub use trends::{
    longitudinal_trends, ols, regularized_incomplete_beta, smooth, student_t_two_sided, LabelTrend,
    Regression, TrendReport, SIGNIFICANCE, SMOOTHING_WINDOW,
};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AnalyticsError {
    #[error("outcomes do not match the corpus: {0}")]
    Consistency(String),
    #[error("no sentence pairs with identical tokenization to compare")]
    NoComparableSentences,
    #[error(
        "trend regression needs at least 3 sessions with differing ages, got {sessions} session(s)"
    )]
    InsufficientData { sessions: usize },
}

/// Formats a float for TSV output. Shortest round-trip representation, so
/// equal values always print the same bytes.
pub(crate) fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x}")
    }
}
