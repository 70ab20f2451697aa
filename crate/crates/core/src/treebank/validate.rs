use std::fmt;

use serde::Serialize;

use super::conllu::check_structure;
use super::labels::{base_deprel, is_known_deprel, is_known_upos};
use super::tree::DepTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    UnknownUpos {
        token: usize,
        upos: String,
    },
    UnknownDeprel {
        token: usize,
        deprel: String,
    },
    NoRoot,
    MultipleRoots {
        tokens: Vec<usize>,
    },
    /// Root token not labeled `root` (or a subtype of it), or a non-root
    /// labeled so.
    RootLabel {
        token: usize,
    },
    Structure(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownUpos { token, upos } => {
                write!(f, "token {token}: unknown POS {upos}")
            }
            Violation::UnknownDeprel { token, deprel } => {
                write!(f, "token {token}: unknown label {deprel}")
            }
            Violation::NoRoot => write!(f, "no root"),
            Violation::MultipleRoots { tokens } => write!(f, "multiple roots: {tokens:?}"),
            Violation::RootLabel { token } => write!(f, "token {token}: root/label mismatch"),
            Violation::Structure(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub sentence_id: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a tree against the label inventories and the single-root
/// requirement.
pub fn validate_tree(tree: &DepTree) -> ValidationReport {
    let mut violations = Vec::new();
    if let Err(m) = check_structure(tree) {
        violations.push(Violation::Structure(m));
    }
    let roots: Vec<usize> = tree.children(0).map(|t| t.id).collect();
    match roots.len() {
        0 => violations.push(Violation::NoRoot),
        1 => {}
        _ => violations.push(Violation::MultipleRoots { tokens: roots }),
    }
    for t in &tree.tokens {
        if !is_known_upos(&t.upos) {
            violations.push(Violation::UnknownUpos {
                token: t.id,
                upos: t.upos.clone(),
            });
        }
        if !is_known_deprel(&t.deprel) {
            violations.push(Violation::UnknownDeprel {
                token: t.id,
                deprel: t.deprel.clone(),
            });
        }
        if (t.head == 0) != (base_deprel(&t.deprel) == "root") {
            violations.push(Violation::RootLabel { token: t.id });
        }
    }
    ValidationReport {
        sentence_id: tree.sentence_id.clone(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::Token;

    #[test]
    fn two_roots_is_a_violation() {
        let t = DepTree::new(
            "x",
            vec![
                Token::new(1, "hi", "hi", "INTJ", 0, "root"),
                Token::new(2, "go", "go", "VERB", 0, "root"),
            ],
        );
        let r = validate_tree(&t);
        assert_eq!(
            r.violations,
            vec![Violation::MultipleRoots { tokens: vec![1, 2] }]
        );
    }

    #[test]
    fn unknown_labels_are_reported() {
        let t = DepTree::new(
            "x",
            vec![
                Token::new(1, "go", "go", "VRB", 0, "root"),
                Token::new(2, "now", "now", "ADV", 1, "advmodd"),
            ],
        );
        let r = validate_tree(&t);
        assert_eq!(r.violations.len(), 2);
        assert!(!r.is_valid());
    }

    #[test]
    fn subtyped_labels_pass() {
        let t = DepTree::new(
            "x",
            vec![
                Token::new(1, "go", "go", "VERB-DO", 0, "root"),
                Token::new(2, "go", "go", "VERB", 1, "parataxis:repeat"),
            ],
        );
        assert!(validate_tree(&t).is_valid());
    }
}
