use udlf::lambda::{alpha_equivalent, parse_term};
use udlf::transducer::{convert, ConvertOptions, Grammar, Outcome};
use udlf::treebank::{parse_conllu, DepTree};

fn load(name: &str) -> Vec<DepTree> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_conllu(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Checks each tree against its `# lf =` or `# expect =` comment and
/// returns the ids that disagree, with a description.
fn mismatches(trees: &[DepTree]) -> Vec<String> {
    let grammar = Grammar::default_for("en").unwrap();
    let opts = ConvertOptions::default();
    let mut bad = Vec::new();
    for t in trees {
        let got = convert(t, &grammar, &opts);
        match (
            t.comment_value("lf"),
            t.comment_value("expect"),
            &got.outcome,
        ) {
            (Some(lf), _, Outcome::Converted(term)) => {
                let want = parse_term(lf)
                    .unwrap_or_else(|e| panic!("{}: bad fixture LF: {e}", t.sentence_id));
                if !alpha_equivalent(&want, term) {
                    bad.push(format!("{}: want {want}\n      got  {term}", t.sentence_id));
                }
            }
            (_, Some(reason), Outcome::Failed(f)) if f.reason.code() == reason => {}
            (_, _, Outcome::Failed(f)) => bad.push(format!("{}: failed: {f}", t.sentence_id)),
            (_, expect, Outcome::Converted(term)) => bad.push(format!(
                "{}: expected {expect:?}, got {term}",
                t.sentence_id
            )),
        }
    }
    bad
}

#[test]
fn golden_suite_matches_exactly() {
    let trees = load("golden.conllu");
    assert_eq!(trees.len(), 38);
    let bad = mismatches(&trees);
    assert!(
        bad.is_empty(),
        "{} mismatches:\n{}",
        bad.len(),
        bad.join("\n")
    );
}

#[test]
fn limitation_suite_reproduces_known_errors() {
    let trees = load("limitations.conllu");
    assert_eq!(trees.len(), 6);
    let bad = mismatches(&trees);
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn planted_failures_fail_for_the_declared_reason() {
    let trees = load("corpus50.conllu");
    assert_eq!(trees.len(), 50);
    let bad = mismatches(&trees);
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
