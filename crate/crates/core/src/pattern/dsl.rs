//! Line-oriented rule files.
//!
//! ```text
//! # priority | name | pattern | actions
//! 10 | verb-do | (node upos=VERB (child dobj,ccomp,xcomp) (no-child nsubj,iobj)) | set_upos(VERB-DO)
//! 20 | particle | (node deprel=compound:prt (parent * upos=VERB* adjacent)) | merge_into_head
//! %pass
//! 10 | drop-punct | (node upos=PUNCT) | delete_node
//! ```
//!
//! Inside a pattern, `upos=`, `lemma=` and `deprel=` take comma-separated
//! sets (a trailing `*` matches by prefix) and `not` negates the node's
//! constraint. Requirements are `(child LABELS ...)`, `(no-child LABELS ...)`
//! and `(parent LABEL ...)`, where LABELS is a comma list or `*`, and the
//! extra flag `adjacent` asks for the two tokens to be surface neighbors.
//! `%pass` starts another top-down pass over the output of the previous one.
//! `%define NAME a,b,c` names a label set; later lines may write `@NAME`
//! wherever a set is expected.

use std::collections::{HashMap, HashSet};

use super::{
    ActionKind, ChildRequirement, LabelSet, NodeConstraint, ParentRequirement, PatternError,
    Requirement, RewriteAction, RewriteRule, TreePattern,
};
use crate::treebank::labels::{is_known_deprel, is_known_upos};

/// Rules grouped into passes that run one after another.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    pub passes: Vec<Vec<RewriteRule>>,
}

impl RuleSet {
    pub fn rule_count(&self) -> usize {
        self.passes.iter().map(Vec::len).sum()
    }
}

pub fn parse_rule_file(text: &str) -> Result<RuleSet, PatternError> {
    let mut passes: Vec<Vec<RewriteRule>> = vec![Vec::new()];
    let mut names = HashSet::new();
    let mut defines: HashMap<String, String> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| PatternError::Syntax {
            line: i + 1,
            message,
        };
        if let Some(rest) = line.strip_prefix("%define") {
            let mut parts = rest.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(name), Some(items), None) => {
                    defines.insert(name.to_string(), items.to_string());
                }
                _ => return Err(syntax("expected `%define NAME a,b,c`".into())),
            }
            continue;
        }
        let expanded = expand_defines(line, &defines).map_err(syntax)?;
        let line = expanded.as_str();
        if line == "%pass" {
            if !(passes.len() == 1 && passes[0].is_empty()) {
                passes.push(Vec::new());
            }
            continue;
        }
        let rule = parse_rule_line(line).map_err(|message| PatternError::Syntax {
            line: i + 1,
            message,
        })?;
        if !names.insert(rule.name.clone()) {
            return Err(PatternError::Syntax {
                line: i + 1,
                message: format!("duplicate rule name {}", rule.name),
            });
        }
        passes.last_mut().expect("at least one pass").push(rule);
    }
    Ok(RuleSet { passes })
}

fn expand_defines(line: &str, defines: &HashMap<String, String>) -> Result<String, String> {
    let mut out = String::with_capacity(line.len());
    let mut rest = line;
    while let Some(at) = rest.find('@') {
        out.push_str(&rest[..at]);
        let tail = &rest[at + 1..];
        let end = tail
            .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '-'))
            .unwrap_or(tail.len());
        let name = &tail[..end];
        let items = defines
            .get(name)
            .ok_or_else(|| format!("undefined set @{name}"))?;
        out.push_str(items);
        rest = &tail[end..];
    }
    out.push_str(rest);
    Ok(out)
}

pub fn parse_rule_line(line: &str) -> Result<RewriteRule, String> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    let [priority, name, pattern, actions] = fields[..] else {
        return Err(format!(
            "expected `priority | name | pattern | actions`, found {} fields",
            fields.len()
        ));
    };
    let priority: i64 = priority
        .parse()
        .map_err(|_| format!("bad priority {priority:?}"))?;
    if name.is_empty() {
        return Err("empty rule name".into());
    }
    let pattern = parse_pattern(pattern)?;
    let actions = parse_actions(actions)?;
    check_rule(&pattern, &actions)?;
    Ok(RewriteRule {
        name: name.to_string(),
        priority,
        lexicalized: pattern.is_lexicalized(),
        pattern,
        actions,
    })
}

#[derive(Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexp(src: &str) -> Result<Sexp, String> {
    let spaced = src.replace('(', " ( ").replace(')', " ) ");
    let toks: Vec<&str> = spaced.split_whitespace().collect();
    let mut pos = 0;
    let out = read_from(&toks, &mut pos)?;
    if let Some(extra) = toks.get(pos) {
        return Err(format!("unexpected {extra:?} after pattern"));
    }
    Ok(out)
}

fn read_from(toks: &[&str], pos: &mut usize) -> Result<Sexp, String> {
    let tok = toks.get(*pos).ok_or("unexpected end of pattern")?;
    *pos += 1;
    match *tok {
        ")" => Err("unexpected `)`".into()),
        "(" => {
            let mut items = Vec::new();
            loop {
                match toks.get(*pos) {
                    None => return Err("unclosed `(`".into()),
                    Some(&")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_from(toks, pos)?),
                }
            }
        }
        a => Ok(Sexp::Atom(a.to_string())),
    }
}

fn label_set(s: &str) -> Result<Option<LabelSet>, String> {
    if s == "*" {
        return Ok(None);
    }
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().any(|x| x.is_empty()) {
        return Err(format!("empty entry in label list {s:?}"));
    }
    Ok(Some(LabelSet::of(&items)))
}

/// Reads constraint atoms; returns the constraint and whether `adjacent` was
/// present.
fn constraint(atoms: &[&str]) -> Result<(NodeConstraint, bool), String> {
    let mut c = NodeConstraint::default();
    let mut adjacent = false;
    for a in atoms {
        match a.split_once('=') {
            Some(("upos", v)) => c.upos = label_set(v)?,
            Some(("lemma", v)) => c.lemma = label_set(v)?,
            Some(("deprel", v)) => c.deprel = label_set(v)?,
            None if *a == "not" => c.negated = true,
            None if *a == "adjacent" => adjacent = true,
            _ => return Err(format!("unknown constraint {a:?}")),
        }
    }
    Ok((c, adjacent))
}

fn atoms(items: &[Sexp]) -> Result<Vec<&str>, String> {
    items
        .iter()
        .map(|s| match s {
            Sexp::Atom(a) => Ok(a.as_str()),
            Sexp::List(_) => Err("nested list where an atom was expected".to_string()),
        })
        .collect()
}

pub(crate) fn parse_pattern(src: &str) -> Result<TreePattern, String> {
    let Sexp::List(items) = read_sexp(src)? else {
        return Err("pattern must be a list".into());
    };
    match items.first() {
        Some(Sexp::Atom(h)) if h == "node" => {}
        _ => return Err("pattern must start with `node`".into()),
    }
    let split = items
        .iter()
        .position(|s| matches!(s, Sexp::List(_)))
        .unwrap_or(items.len());
    let (target, adj) = constraint(&atoms(&items[1..split])?)?;
    if adj {
        return Err("`adjacent` belongs inside a child or parent requirement".into());
    }
    if target.is_empty() {
        return Err("target node needs at least one of upos, lemma, deprel".into());
    }
    let mut pattern = TreePattern {
        target,
        children: Vec::new(),
        parent: None,
    };
    for req in &items[split..] {
        let Sexp::List(parts) = req else {
            return Err("requirements must follow all node constraints".into());
        };
        let parts = atoms(parts)?;
        let (kind, labels, rest) = match parts.as_slice() {
            [kind, labels, rest @ ..] => (*kind, *labels, rest),
            _ => return Err("requirement needs a kind and a label list".into()),
        };
        let deprels = label_set(labels)?;
        let (c, adjacent) = constraint(rest)?;
        match kind {
            "child" | "no-child" => pattern.children.push(ChildRequirement {
                deprels,
                constraint: c,
                requirement: if kind == "child" {
                    Requirement::Required
                } else {
                    Requirement::Forbidden
                },
                adjacent,
            }),
            "parent" => {
                if pattern.parent.is_some() {
                    return Err("at most one parent requirement".into());
                }
                pattern.parent = Some(ParentRequirement {
                    deprel: deprels,
                    constraint: c,
                    adjacent,
                });
            }
            other => return Err(format!("unknown requirement {other:?}")),
        }
    }
    Ok(pattern)
}

fn parse_actions(src: &str) -> Result<Vec<RewriteAction>, String> {
    let mut out = Vec::new();
    for word in src.split_whitespace() {
        let (name, arg) = match word.split_once('(') {
            Some((n, rest)) => {
                let arg = rest
                    .strip_suffix(')')
                    .ok_or_else(|| format!("unclosed argument in {word:?}"))?;
                (n, Some(arg))
            }
            None => (word, None),
        };
        let (kind, needs_arg) = match name {
            "set_upos" => (ActionKind::SetUpos, true),
            "set_deprel" => (ActionKind::SetDeprel, true),
            "delete_node" => (ActionKind::DeleteNode, false),
            "merge_into_head" => (ActionKind::MergeIntoHead, false),
            "merge_into_dependent" => (ActionKind::MergeIntoDependent, false),
            other => return Err(format!("unknown action {other:?}")),
        };
        let argument = match (needs_arg, arg) {
            (true, Some(a)) if !a.is_empty() => a.to_string(),
            (true, _) => return Err(format!("{name} needs an argument")),
            (false, None) if kind == ActionKind::DeleteNode => String::new(),
            (false, None) => "_".to_string(),
            (false, Some(a)) if kind != ActionKind::DeleteNode => a.to_string(),
            (false, Some(_)) => return Err("delete_node takes no argument".into()),
        };
        out.push(RewriteAction { kind, argument });
    }
    if out.is_empty() {
        return Err("rule has no actions".into());
    }
    Ok(out)
}

fn check_rule(pattern: &TreePattern, actions: &[RewriteAction]) -> Result<(), String> {
    for (i, a) in actions.iter().enumerate() {
        let structural = matches!(
            a.kind,
            ActionKind::DeleteNode | ActionKind::MergeIntoHead | ActionKind::MergeIntoDependent
        );
        if structural && i + 1 != actions.len() {
            return Err("delete and merge actions must come last".into());
        }
        match a.kind {
            ActionKind::SetUpos if !is_known_upos(&a.argument) => {
                return Err(format!("unknown POS tag {}", a.argument))
            }
            ActionKind::SetDeprel if !is_known_deprel(&a.argument) || a.argument == "root" => {
                return Err(format!("cannot set label {}", a.argument))
            }
            ActionKind::MergeIntoDependent
                if !pattern
                    .children
                    .iter()
                    .any(|c| c.requirement == Requirement::Required) =>
            {
                return Err("merge_into_dependent needs a (child ...) requirement".into())
            }
            _ => {}
        }
    }
    for req in pattern
        .children
        .iter()
        .filter(|c| c.requirement == Requirement::Required)
    {
        let clash = pattern.children.iter().any(|f| {
            f.requirement == Requirement::Forbidden
                && f.deprels == req.deprels
                && f.constraint == req.constraint
                && f.adjacent == req.adjacent
        });
        if clash {
            return Err("the same child is both required and forbidden".into());
        }
    }
    Ok(())
}
