use std::collections::BTreeSet;

use serde::Serialize;

use super::{fmt_f64, LabelStats};

/// Per-token difference below which labels are left out of a comparison.
pub const DEFAULT_THRESHOLD: f64 = 0.005;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Higher {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Difference {
    pub label: String,
    pub freq_a: f64,
    pub freq_b: f64,
    /// `freq_a - freq_b`.
    pub diff: f64,
    pub higher: Higher,
}

/// Labels whose count per token differs by more than `threshold`, from most
/// over-represented in A to most over-represented in B. Ties keep label
/// order.
pub fn compare_corpora(a: &LabelStats, b: &LabelStats, threshold: f64) -> Vec<Difference> {
    let labels: BTreeSet<&String> = a.labels.keys().chain(b.labels.keys()).collect();
    let mut out: Vec<Difference> = labels
        .into_iter()
        .filter_map(|label| {
            let (fa, fb) = (a.per_token(label), b.per_token(label));
            let diff = fa - fb;
            (diff.abs() > threshold).then(|| Difference {
                label: label.clone(),
                freq_a: fa,
                freq_b: fb,
                diff,
                higher: if diff > 0.0 { Higher::A } else { Higher::B },
            })
        })
        .collect();
    out.sort_by(|x, y| y.diff.total_cmp(&x.diff));
    out
}

pub fn differences_to_tsv(diffs: &[Difference]) -> String {
    let mut out = String::from("label\tfreq_a\tfreq_b\tdiff\thigher\n");
    for d in diffs {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{:?}\n",
            d.label,
            fmt_f64(d.freq_a),
            fmt_f64(d.freq_b),
            fmt_f64(d.diff),
            d.higher
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::LabelCount;

    fn stats(tokens: usize, rows: &[(&str, usize)]) -> LabelStats {
        LabelStats {
            tokens,
            sentences: 1,
            labels: rows
                .iter()
                .map(|&(l, c)| {
                    (
                        l.to_string(),
                        LabelCount {
                            count: c,
                            sentences: 1,
                        },
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn threshold_filters_and_tags_direction() {
        let a = stats(1000, &[("dobj", 10), ("amod", 3)]);
        let b = stats(1000, &[("dobj", 4), ("amod", 5)]);
        let d = compare_corpora(&a, &b, DEFAULT_THRESHOLD);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].label, "dobj");
        assert_eq!(d[0].higher, Higher::A);
        assert!(compare_corpora(&a, &a, DEFAULT_THRESHOLD).is_empty());
        let all = compare_corpora(&a, &b, 0.0);
        assert_eq!(
            all.iter().map(|d| d.label.as_str()).collect::<Vec<_>>(),
            ["dobj", "amod"]
        );
    }
}
