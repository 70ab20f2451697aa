//! LF assignment rules and the dependency priority list.
//!
//! An LF rule file has one rule per line:
//!
//! ```text
//! # priority | name | selector | template
//! 10 | noun   | node NOUN                    | lambda q:(v->t)->v. q(lambda x:v. LEMMA(x))
//! 20 | det    | edge det head=NOUN*          | lambda h. lambda d. lambda q. h(d)
//! 30 | relcl  | edge acl:relcl               | !unsupported-construction
//! ```
//!
//! Selectors name a POS tag set (`node`) or a label set (`edge`), optionally
//! narrowed by the head's and the dependent's tags. Sets are comma lists and
//! a trailing `*` matches by prefix. `LEMMA` in a template stands for the
//! node's own atom. A template of the form `!reason` makes the rule a
//! declared failure.

use serde::Serialize;

use super::outcome::FailureReason;
use crate::lambda::{parse_template, LambdaTerm};
use crate::pattern::LabelSet;
use crate::treebank::labels::base_deprel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Selector {
    Node {
        upos: LabelSet,
    },
    Edge {
        deprel: LabelSet,
        head: Option<LabelSet>,
        dep: Option<LabelSet>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum RuleBody {
    Template(LambdaTerm),
    Fail(FailureReason),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LfAssignmentRule {
    pub name: String,
    pub priority: i64,
    pub selector: Selector,
    pub body: RuleBody,
}

/// Placeholder constant replaced by the node's atom.
pub const LEMMA_SLOT: &str = "LEMMA";

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("LF rule file line {line}: {message}")]
pub struct LfRuleError {
    pub line: usize,
    pub message: String,
}

/// Rules sorted by priority, file order breaking ties.
#[derive(Clone, Debug, Default)]
pub struct LfRuleSet {
    rules: Vec<LfAssignmentRule>,
}

impl LfRuleSet {
    pub fn new(mut rules: Vec<LfAssignmentRule>) -> Self {
        rules.sort_by_key(|r| r.priority);
        LfRuleSet { rules }
    }

    pub fn parse(text: &str) -> Result<Self, LfRuleError> {
        let mut rules = Vec::new();
        let mut names = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| LfRuleError {
                line: i + 1,
                message,
            };
            let rule = parse_line(line).map_err(err)?;
            if !names.insert(rule.name.clone()) {
                return Err(err(format!("duplicate rule name {}", rule.name)));
            }
            rules.push(rule);
        }
        Ok(LfRuleSet::new(rules))
    }

    pub fn rules(&self) -> &[LfAssignmentRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn for_node(&self, upos: &str) -> Option<&LfAssignmentRule> {
        self.rules
            .iter()
            .find(|r| matches!(&r.selector, Selector::Node { upos: u } if u.matches(upos)))
    }

    /// `dep_upos` is `None` for the root edge.
    pub fn for_edge(
        &self,
        deprel: &str,
        head_upos: &str,
        dep_upos: Option<&str>,
    ) -> Option<&LfAssignmentRule> {
        self.rules.iter().find(|r| match &r.selector {
            Selector::Edge {
                deprel: d,
                head,
                dep,
            } => {
                d.matches(deprel)
                    && head.as_ref().is_none_or(|h| h.matches(head_upos))
                    && dep
                        .as_ref()
                        .is_none_or(|s| dep_upos.is_some_and(|u| s.matches(u)))
            }
            Selector::Node { .. } => false,
        })
    }
}

fn parse_line(line: &str) -> Result<LfAssignmentRule, String> {
    let fields: Vec<&str> = line.splitn(4, '|').map(str::trim).collect();
    let [priority, name, selector, body] = fields[..] else {
        return Err("expected `priority | name | selector | template`".into());
    };
    let priority = priority
        .parse()
        .map_err(|_| format!("bad priority {priority:?}"))?;
    if name.is_empty() {
        return Err("empty rule name".into());
    }
    let selector = parse_selector(selector)?;
    let body = match body.strip_prefix('!') {
        Some(reason) => RuleBody::Fail(reason.trim().parse()?),
        None => RuleBody::Template(parse_template(body).map_err(|e| e.to_string())?),
    };
    Ok(LfAssignmentRule {
        name: name.to_string(),
        priority,
        selector,
        body,
    })
}

fn set(s: &str) -> Result<LabelSet, String> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().any(|x| x.is_empty()) {
        return Err(format!("empty entry in {s:?}"));
    }
    Ok(LabelSet::of(&items))
}

fn parse_selector(s: &str) -> Result<Selector, String> {
    let mut words = s.split_whitespace();
    match (words.next(), words.next()) {
        (Some("node"), Some(upos)) => {
            if let Some(extra) = words.next() {
                return Err(format!("unexpected {extra:?} in node selector"));
            }
            Ok(Selector::Node { upos: set(upos)? })
        }
        (Some("edge"), Some(deprel)) => {
            let mut head = None;
            let mut dep = None;
            for w in words {
                match w.split_once('=') {
                    Some(("head", v)) => head = Some(set(v)?),
                    Some(("dep", v)) => dep = Some(set(v)?),
                    _ => return Err(format!("unknown selector option {w:?}")),
                }
            }
            Ok(Selector::Edge {
                deprel: set(deprel)?,
                head,
                dep,
            })
        }
        _ => Err(format!("bad selector {s:?}")),
    }
}

/// Composition order of a head's dependents.
///
/// A label is looked up exactly, then by its base label. Labels that are not
/// listed at all come after every listed one, in alphabetical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PriorityList {
    labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    Listed(usize),
    Unlisted(String),
}

impl PriorityList {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Self {
        PriorityList {
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    /// One or more labels per line, whitespace separated, `#` comments.
    /// Labels on the same line keep their left-to-right order.
    pub fn parse(text: &str) -> Self {
        let labels: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .collect();
        PriorityList::new(&labels)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self, deprel: &str) -> Rank {
        let find = |l: &str| self.labels.iter().position(|x| x == l);
        match find(deprel).or_else(|| find(base_deprel(deprel))) {
            Some(i) => Rank::Listed(i),
            None => Rank::Unlisted(deprel.to_string()),
        }
    }
}
