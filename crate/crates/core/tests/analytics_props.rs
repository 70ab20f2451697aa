mod support;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{
    oracle_ols, perturb_heads, random_labeled_tree, random_series, random_tree, recount,
    CORPUS50_RATES,
};
use udlf::analytics::{
    attachment_agreement, compare_corpora, conversion_rates, label_counts, longitudinal_trends,
    ols, Higher, SIGNIFICANCE,
};
use udlf::transducer::{convert_corpus, Grammar};
use udlf::treebank::{load_sessions, parse_conllu, DepTree, LoadOptions};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn ols_matches_closed_form_oracle_on_200_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut significant = 0;
    for i in 0..200 {
        let (xs, ys) = random_series(&mut rng);
        let got = ols(&xs, &ys).unwrap();
        let want = oracle_ols(&xs, &ys);
        assert!(
            close(got.slope, want.slope, 1e-9),
            "{i}: slope {} vs {}",
            got.slope,
            want.slope
        );
        assert!(close(got.t, want.t, 1e-9), "{i}: t {} vs {}", got.t, want.t);
        assert!(
            (got.p - want.p).abs() <= 1e-9,
            "{i}: p {} vs {}",
            got.p,
            want.p
        );
        assert_eq!(got.significant(), want.p < SIGNIFICANCE, "{i}");
        significant += got.significant() as usize;
    }
    // The series mix must exercise both decisions.
    assert!(significant > 20 && significant < 180, "{significant}");
}

#[test]
fn exact_line_fixture() {
    let sessions = load_sessions(&data("trend_line.conllu"), LoadOptions::default()).unwrap();
    assert_eq!(sessions.len(), 3);
    let report = longitudinal_trends(&sessions, None).unwrap();
    let amod = report.labels.iter().find(|l| l.label == "amod").unwrap();
    assert!((amod.regression.slope - 0.1).abs() < 1e-12);
    assert!(amod.regression.p < 1e-6);
    assert!(amod.significant);
    let det = report.labels.iter().find(|l| l.label == "det").unwrap();
    assert_eq!(det.regression.slope, 0.0);
    assert!(!det.significant);
}

#[test]
fn smoothing_keeps_the_regression() {
    let sessions = load_sessions(&data("trend_line.conllu"), LoadOptions::default()).unwrap();
    let plain = longitudinal_trends(&sessions, None).unwrap();
    let smoothed = longitudinal_trends(&sessions, Some(5)).unwrap();
    for (a, b) in plain.labels.iter().zip(&smoothed.labels) {
        assert_eq!(a.regression, b.regression);
        assert_eq!(b.smoothed.as_ref().unwrap().len(), 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trends_are_shift_and_scale_invariant(
        seed in any::<u64>(),
        shift in -50.0f64..50.0,
        scale in 0.1f64..10.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (xs, ys) = random_series(&mut rng);
        let base = ols(&xs, &ys).unwrap();
        let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let s = ols(&shifted, &ys).unwrap();
        prop_assert!(close(s.slope, base.slope, 1e-7));
        prop_assert!((s.p - base.p).abs() < 1e-7);
        let scaled: Vec<f64> = ys.iter().map(|y| y * scale).collect();
        let c = ols(&xs, &scaled).unwrap();
        prop_assert!(close(c.slope, base.slope * scale, 1e-7));
        prop_assert!(close(c.t, base.t, 1e-7));
        prop_assert!(0.0 <= base.p && base.p <= 1.0);
    }

    #[test]
    fn head_perturbation_gives_exact_uas(seed in any::<u64>(), n in 2usize..30, frac in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gold = random_tree(&mut rng, "p", n, &["nsubj", "dobj", "det", "amod"]);
        let (pert, k) = perturb_heads(&mut rng, &gold, ((n - 1) as f64 * frac) as usize);
        let r = attachment_agreement(std::slice::from_ref(&gold), std::slice::from_ref(&pert), false).unwrap();
        prop_assert_eq!(r.uas, (n - k) as f64 / n as f64);
        prop_assert_eq!(r.unlabeled_matches, n - k);
        prop_assert!(r.las <= r.uas);
        let back = attachment_agreement(&[pert], &[gold], false).unwrap();
        prop_assert_eq!((back.las, back.uas), (r.las, r.uas));
    }

    #[test]
    fn label_counts_match_a_recount(seed in any::<u64>(), count in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trees: Vec<DepTree> = (0..count)
            .map(|i| {
                let n = rng.gen_range(1..12);
                random_labeled_tree(&mut rng, &format!("s{i}"), n)
            })
            .collect();
        let stats = label_counts(&trees);
        let want = recount(&trees);
        prop_assert_eq!(stats.labels.len(), want.len());
        for (label, c) in &stats.labels {
            prop_assert_eq!(c.count, want[label]);
            prop_assert!((0.0..=1.0).contains(&stats.per_token(label)));
            prop_assert!((0.0..=1.0).contains(&stats.presence(label)));
        }
        let total: usize = stats.labels.values().map(|c| c.count).sum();
        prop_assert_eq!(total, stats.tokens);
        prop_assert_eq!(stats.mean_length(), stats.tokens as f64 / count as f64);
    }

    #[test]
    fn zero_threshold_partitions_labels(a in any::<u64>(), b in any::<u64>()) {
        let gen = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..8)
                .map(|i| {
                    let n = rng.gen_range(1..10);
                    random_labeled_tree(&mut rng, &format!("s{i}"), n)
                })
                .collect::<Vec<_>>()
        };
        let (ta, tb) = (gen(a), gen(b));
        let (sa, sb) = (label_counts(&ta), label_counts(&tb));
        let diffs = compare_corpora(&sa, &sb, 0.0);
        let mut labels: Vec<&String> = sa.labels.keys().chain(sb.labels.keys()).collect();
        labels.sort();
        labels.dedup();
        for l in labels {
            let (fa, fb) = (sa.per_token(l), sb.per_token(l));
            match diffs.iter().find(|d| &d.label == l) {
                Some(d) => {
                    prop_assert!(fa != fb);
                    prop_assert_eq!(d.higher, if fa > fb { Higher::A } else { Higher::B });
                }
                None => prop_assert_eq!(fa, fb),
            }
        }
    }
}

#[test]
fn self_and_flip_agreement() {
    let golden = parse_conllu(&data("golden.conllu")).unwrap();
    let r = attachment_agreement(&golden, &golden, false).unwrap();
    assert_eq!((r.las, r.uas), (1.0, 1.0));
    let a = parse_conllu(&data("agree_a.conllu")).unwrap();
    let b = parse_conllu(&data("agree_b.conllu")).unwrap();
    let r = attachment_agreement(&a, &b, false).unwrap();
    assert_eq!((r.las, r.uas), (0.75, 1.0));
}

#[test]
fn threshold_example() {
    // One label at 0.010 against 0.004 per token.
    let tree = |id: &str, hits: usize, n: usize| {
        let mut t = random_tree(&mut ChaCha8Rng::seed_from_u64(1), id, n, &["dep"]);
        for tok in t.tokens.iter_mut().skip(1).take(hits) {
            tok.deprel = "amod".into();
        }
        t
    };
    let a = label_counts(&[tree("a", 10, 1000)]);
    let b = label_counts(&[tree("b", 4, 1000)]);
    let d = compare_corpora(&a, &b, 0.005);
    let amod = d.iter().find(|d| d.label == "amod").unwrap();
    assert_eq!(amod.higher, Higher::A);
    assert!((amod.diff - 0.006).abs() < 1e-12);
    assert!(compare_corpora(&a, &a, 0.005).is_empty());
}

#[test]
fn corpus50_rates_match_the_tally() {
    let trees = parse_conllu(&data("corpus50.conllu")).unwrap();
    let sessions = load_sessions(&data("corpus50.conllu"), LoadOptions::default()).unwrap();
    let (outcomes, summary) = convert_corpus(
        &sessions,
        &Grammar::default_for("en").unwrap(),
        &Default::default(),
    );
    assert_eq!(summary.rate(), Some(0.8));
    let rates = conversion_rates(&trees, &outcomes).unwrap();
    let got: Vec<(&str, usize, usize)> = rates
        .iter()
        .map(|r| (r.label.as_str(), r.occurrences, r.converted))
        .collect();
    assert_eq!(got, CORPUS50_RATES);
}
