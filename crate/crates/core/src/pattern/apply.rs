use serde::Serialize;

use super::{match_pattern, ActionKind, MatchBindings, PatternError, RewriteRule, RuleSet};
use crate::treebank::labels::base_deprel;
use crate::treebank::DepTree;

/// One rule application, for tracing. `node` is the token's id in the tree
/// the pass started from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Firing {
    pub pass: usize,
    pub node: usize,
    pub rule: String,
}

/// Runs every pass of a rule set in order.
pub fn apply_passes(rules: &RuleSet, tree: &DepTree) -> Result<DepTree, PatternError> {
    let mut cur = tree.clone();
    for (i, pass) in rules.passes.iter().enumerate() {
        cur = run_pass(pass, &cur, i, &mut Vec::new())?;
    }
    Ok(cur)
}

/// One top-down pass: breadth-first from the root, siblings in surface
/// order. At each node the first matching rule by priority (file order on
/// ties) fires, and no other.
pub fn apply_rules(rules: &[RewriteRule], tree: &DepTree) -> Result<DepTree, PatternError> {
    run_pass(rules, tree, 0, &mut Vec::new())
}

pub fn apply_rules_traced(
    rules: &[RewriteRule],
    tree: &DepTree,
) -> Result<(DepTree, Vec<Firing>), PatternError> {
    let mut log = Vec::new();
    let out = run_pass(rules, tree, 0, &mut log)?;
    Ok((out, log))
}

/// The tree being rewritten plus the original id of every surviving token.
struct Work {
    tree: DepTree,
    keys: Vec<usize>,
}

impl Work {
    fn id_of(&self, key: usize) -> Option<usize> {
        self.keys.iter().position(|&k| k == key).map(|i| i + 1)
    }

    fn child_keys(&self, id: usize) -> Vec<usize> {
        self.tree
            .children(id)
            .map(|t| self.keys[t.id - 1])
            .collect()
    }

    fn reattach_children(&mut self, from: usize, to: usize) {
        for t in &mut self.tree.tokens {
            if t.head == from {
                t.head = to;
            }
        }
    }

    /// Removes a token that no longer has dependents and renumbers.
    fn remove(&mut self, id: usize) {
        self.tree.tokens.remove(id - 1);
        self.keys.remove(id - 1);
        for (i, t) in self.tree.tokens.iter_mut().enumerate() {
            t.id = i + 1;
            if t.head > id {
                t.head -= 1;
            }
        }
    }

    /// Concatenates the lemmas (and morph strings) of two tokens in surface
    /// order into `into`.
    fn join_into(&mut self, into: usize, other: usize, sep: &str) {
        let (a, b) = if into < other {
            (into, other)
        } else {
            (other, into)
        };
        let (ta, tb) = (&self.tree.tokens[a - 1], &self.tree.tokens[b - 1]);
        let lemma = format!("{}{sep}{}", ta.lemma, tb.lemma);
        let morph = match (ta.morph.as_str(), tb.morph.as_str()) {
            ("_", m) | (m, "_") => m.to_string(),
            (x, y) => format!("{x}{sep}{y}"),
        };
        let t = &mut self.tree.tokens[into - 1];
        t.lemma = lemma;
        t.morph = morph;
    }
}

fn run_pass(
    rules: &[RewriteRule],
    tree: &DepTree,
    pass: usize,
    log: &mut Vec<Firing>,
) -> Result<DepTree, PatternError> {
    let mut order: Vec<&RewriteRule> = rules.iter().collect();
    order.sort_by_key(|r| r.priority);
    let mut w = Work {
        tree: tree.clone(),
        keys: (1..=tree.len()).collect(),
    };
    let mut queued = vec![false; tree.len() + 1];
    let mut queue = std::collections::VecDeque::new();
    for k in w.child_keys(0) {
        queued[k] = true;
        queue.push_back(k);
    }
    while let Some(key) = queue.pop_front() {
        let Some(id) = w.id_of(key) else { continue };
        let before = w.child_keys(id);
        let hit = order
            .iter()
            .find_map(|r| match_pattern(&r.pattern, &w.tree, id).map(|m| (*r, m)));
        if let Some((rule, m)) = hit {
            log.push(Firing {
                pass,
                node: key,
                rule: rule.name.clone(),
            });
            fire(rule, &m, &mut w)?;
        }
        let mut next = before;
        if let Some(id) = w.id_of(key) {
            next.extend(w.child_keys(id));
        }
        next.sort_by_key(|&k| w.id_of(k).unwrap_or(usize::MAX));
        for k in next {
            if !queued[k] {
                queued[k] = true;
                queue.push_back(k);
            }
        }
    }
    Ok(w.tree)
}

fn fire(rule: &RewriteRule, m: &MatchBindings, w: &mut Work) -> Result<(), PatternError> {
    let err = |message: &str| PatternError::Application {
        rule: rule.name.clone(),
        sentence_id: w.tree.sentence_id.clone(),
        message: message.to_string(),
    };
    let id = m.target;
    for action in &rule.actions {
        let head = w.tree.tokens[id - 1].head;
        match action.kind {
            ActionKind::SetUpos => w.tree.tokens[id - 1].upos = action.argument.clone(),
            ActionKind::SetDeprel => {
                if (head == 0) != (base_deprel(&action.argument) == "root") {
                    return Err(err("only the root may carry a root label"));
                }
                w.tree.tokens[id - 1].deprel = action.argument.clone();
            }
            ActionKind::DeleteNode => {
                if head == 0 {
                    return Err(err("deleting the root would orphan its dependents"));
                }
                w.reattach_children(id, head);
                w.remove(id);
                return Ok(());
            }
            ActionKind::MergeIntoHead => {
                if head == 0 {
                    return Err(err("the root has no head to merge into"));
                }
                w.join_into(head, id, &action.argument);
                w.reattach_children(id, head);
                w.remove(id);
                return Ok(());
            }
            ActionKind::MergeIntoDependent => {
                let Some(&dep) = m.children.first() else {
                    return Err(err(
                        "merge_into_dependent needs a required child in the pattern",
                    ));
                };
                w.join_into(dep, id, &action.argument);
                let deprel = w.tree.tokens[id - 1].deprel.clone();
                w.reattach_children(id, dep);
                let d = &mut w.tree.tokens[dep - 1];
                d.head = head;
                d.deprel = deprel;
                w.remove(id);
                return Ok(());
            }
        }
    }
    Ok(())
}
