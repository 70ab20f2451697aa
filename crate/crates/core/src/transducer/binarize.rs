use serde::Serialize;

use super::rules::PriorityList;
use crate::treebank::DepTree;

/// One composition step: the edge LF is applied to the head's LF, then the
/// result to the dependent's LF. The root step has no dependent and applies
/// the root edge LF to the whole tree's LF.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub head: usize,
    pub dependent: Option<usize>,
    pub deprel: String,
}

/// Dependents of `head` in composition order: by priority, then nearest to
/// the head first, then leftmost.
pub fn dependent_order(tree: &DepTree, head: usize, priorities: &PriorityList) -> Vec<usize> {
    let mut deps: Vec<_> = tree.children(head).collect();
    deps.sort_by(|a, b| {
        priorities
            .rank(&a.deprel)
            .cmp(&priorities.rank(&b.deprel))
            .then(a.id.abs_diff(head).cmp(&b.id.abs_diff(head)))
            .then(a.id.cmp(&b.id))
    });
    deps.into_iter().map(|t| t.id).collect()
}

/// Fixes a total order over all edges. A dependent's own subtree is complete
/// before it attaches to its head, so the plan is a post-order walk; the root
/// step comes last.
pub fn binarize(tree: &DepTree, priorities: &PriorityList) -> Vec<Step> {
    let mut plan = Vec::with_capacity(tree.len());
    if let Some(root) = tree.root() {
        visit(tree, root.id, priorities, &mut plan);
        plan.push(Step {
            head: root.id,
            dependent: None,
            deprel: root.deprel.clone(),
        });
    }
    plan
}

fn visit(tree: &DepTree, head: usize, priorities: &PriorityList, plan: &mut Vec<Step>) {
    for dep in dependent_order(tree, head, priorities) {
        visit(tree, dep, priorities, plan);
        plan.push(Step {
            head,
            dependent: Some(dep),
            deprel: tree.tokens[dep - 1].deprel.clone(),
        });
    }
}
