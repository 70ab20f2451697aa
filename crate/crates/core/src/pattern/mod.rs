//! Tree patterns and prioritized rewrite rules over dependency trees.

mod apply;
mod dsl;

pub use apply::{apply_passes, apply_rules, apply_rules_traced, Firing};
pub use dsl::{parse_rule_file, parse_rule_line, RuleSet};

use serde::Serialize;

use crate::treebank::{DepTree, Token};

/// A set of labels or tags. An entry ending in `*` matches by prefix, so
/// `VERB*` covers `VERB-DO`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelSet(pub Vec<String>);

impl LabelSet {
    pub fn of<S: AsRef<str>>(items: &[S]) -> Self {
        LabelSet(items.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn matches(&self, value: &str) -> bool {
        self.0.iter().any(|p| glob(p, value))
    }

    fn matches_ci(&self, value: &str) -> bool {
        let lower = value.to_lowercase();
        self.0.iter().any(|p| glob(&p.to_lowercase(), &lower))
    }
}

fn glob(pattern: &str, value: &str) -> bool {
    match pattern.strip_suffix('*') {
        Some(prefix) => value.starts_with(prefix),
        None => pattern == value,
    }
}

/// Conditions on a single token. Lemmas compare case-insensitively.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NodeConstraint {
    pub upos: Option<LabelSet>,
    pub lemma: Option<LabelSet>,
    pub deprel: Option<LabelSet>,
    pub negated: bool,
}

impl NodeConstraint {
    pub fn is_empty(&self) -> bool {
        self.upos.is_none() && self.lemma.is_none() && self.deprel.is_none()
    }

    pub fn is_lexicalized(&self) -> bool {
        self.lemma.is_some()
    }

    pub fn matches(&self, t: &Token) -> bool {
        let ok = self.upos.as_ref().is_none_or(|s| s.matches(&t.upos))
            && self.lemma.as_ref().is_none_or(|s| s.matches_ci(&t.lemma))
            && self.deprel.as_ref().is_none_or(|s| s.matches(&t.deprel));
        ok != self.negated
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Requirement {
    Required,
    Forbidden,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChildRequirement {
    /// `None` accepts any label.
    pub deprels: Option<LabelSet>,
    pub constraint: NodeConstraint,
    pub requirement: Requirement,
    /// The child must be the target's immediate surface neighbor.
    pub adjacent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParentRequirement {
    /// Label of the target's own edge to the parent. `None` accepts any.
    pub deprel: Option<LabelSet>,
    pub constraint: NodeConstraint,
    pub adjacent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreePattern {
    pub target: NodeConstraint,
    pub children: Vec<ChildRequirement>,
    pub parent: Option<ParentRequirement>,
}

impl TreePattern {
    pub fn is_lexicalized(&self) -> bool {
        self.target.is_lexicalized()
            || self.children.iter().any(|c| c.constraint.is_lexicalized())
            || self
                .parent
                .as_ref()
                .is_some_and(|p| p.constraint.is_lexicalized())
    }
}

/// Token ids bound by a successful match. `children` holds one id per
/// required child requirement, in pattern order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchBindings {
    pub target: usize,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

fn adjacent(a: usize, b: usize) -> bool {
    a.abs_diff(b) == 1
}

/// Matches `pattern` at token `node_id`. Among several children satisfying a
/// requirement the one nearest to the target is bound, the left one on a tie.
pub fn match_pattern(
    pattern: &TreePattern,
    tree: &DepTree,
    node_id: usize,
) -> Option<MatchBindings> {
    let target = tree.token(node_id)?;
    if !pattern.target.matches(target) {
        return None;
    }
    let parent = match &pattern.parent {
        None => None,
        Some(req) => {
            let p = tree.token(target.head)?;
            if !req
                .deprel
                .as_ref()
                .is_none_or(|s| s.matches(&target.deprel))
                || !req.constraint.matches(p)
                || (req.adjacent && !adjacent(p.id, node_id))
            {
                return None;
            }
            Some(p.id)
        }
    };
    let mut children = Vec::new();
    for req in &pattern.children {
        let mut candidates: Vec<&Token> = tree
            .children(node_id)
            .filter(|c| {
                req.deprels.as_ref().is_none_or(|s| s.matches(&c.deprel))
                    && req.constraint.matches(c)
                    && (!req.adjacent || adjacent(c.id, node_id))
            })
            .collect();
        candidates.sort_by_key(|c| (c.id.abs_diff(node_id), c.id));
        match (req.requirement, candidates.first()) {
            (Requirement::Required, Some(c)) => children.push(c.id),
            (Requirement::Required, None) => return None,
            (Requirement::Forbidden, Some(_)) => return None,
            (Requirement::Forbidden, None) => {}
        }
    }
    Some(MatchBindings {
        target: node_id,
        children,
        parent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ActionKind {
    SetUpos,
    SetDeprel,
    DeleteNode,
    MergeIntoHead,
    /// Merges the target into the dependent bound by the first required
    /// child requirement.
    MergeIntoDependent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteAction {
    pub kind: ActionKind,
    /// New label for the `set_*` actions, separator for merges.
    pub argument: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteRule {
    pub name: String,
    /// Lower fires first.
    pub priority: i64,
    pub pattern: TreePattern,
    pub actions: Vec<RewriteAction>,
    pub lexicalized: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("rule file line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("rule {rule} on sentence {sentence_id}: {message}")]
    Application {
        rule: String,
        sentence_id: String,
        message: String,
    },
}
