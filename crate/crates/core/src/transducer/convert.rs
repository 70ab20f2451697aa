use serde::Serialize;

use super::binarize::{binarize, Step};
use super::outcome::{ConversionOutcome, Failure, FailureReason, Outcome};
use super::rules::{LfAssignmentRule, LfRuleSet, PriorityList, RuleBody, LEMMA_SLOT};
use crate::lambda::{
    apply_defaults, beta_reduce, ground, infer, meta_floor, type_of, CanonicalForm, LambdaError,
    LambdaTerm, SemType, Symbol, TypeSubst, BLANK, DEFAULT_MAX_STEPS,
};
use crate::pattern::{apply_passes, RuleSet};
use crate::treebank::{validate_tree, DepTree};

/// Everything the converter needs: the tree transformation rules, the LF
/// assignment rules and the composition priorities.
#[derive(Clone, Debug, Default)]
pub struct Grammar {
    pub rewrite: RuleSet,
    pub lf_rules: LfRuleSet,
    pub priorities: PriorityList,
}

#[derive(Clone, Copy, Debug)]
pub struct ConvertOptions {
    /// Beta-reduction budget per composition step.
    pub max_steps: usize,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// An LF assigned to a node or an edge, with the rule that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Assigned {
    pub rule: String,
    pub term: LambdaTerm,
}

/// Node and edge LFs for a transformed tree, before typing.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    /// Indexed by token id - 1.
    pub nodes: Vec<Assigned>,
    /// The LF of each token's incoming edge, indexed by token id - 1. For the
    /// root token this is the root edge.
    pub edges: Vec<Assigned>,
}

/// A complete record of one conversion.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub tree: DepTree,
    pub assignment: Assignment,
    pub plan: Vec<Step>,
    /// The reduced LF produced by each step of the plan.
    pub steps: Vec<LambdaTerm>,
    pub lf: LambdaTerm,
}

#[derive(Serialize)]
struct StepRecord {
    order: usize,
    head: usize,
    dependent: Option<usize>,
    deprel: String,
    edge_rule: String,
    result: String,
}

#[derive(Serialize)]
struct DerivationRecord<'a> {
    sentence_id: &'a str,
    nodes: Vec<(usize, &'a str, &'a str, String)>,
    steps: Vec<StepRecord>,
    lf: String,
}

impl Derivation {
    /// The composition steps as one JSON line, for debugging rule files.
    pub fn to_record(&self) -> String {
        let nodes = self
            .tree
            .tokens
            .iter()
            .zip(&self.assignment.nodes)
            .map(|(t, a)| (t.id, t.upos.as_str(), a.rule.as_str(), a.term.to_string()))
            .collect();
        let steps = self
            .plan
            .iter()
            .zip(&self.steps)
            .enumerate()
            .map(|(i, (s, r))| {
                let edge_of = s.dependent.unwrap_or(s.head);
                StepRecord {
                    order: i + 1,
                    head: s.head,
                    dependent: s.dependent,
                    deprel: s.deprel.clone(),
                    edge_rule: self.assignment.edges[edge_of - 1].rule.clone(),
                    result: CanonicalForm::of(r).to_string(),
                }
            })
            .collect();
        let rec = DerivationRecord {
            sentence_id: &self.tree.sentence_id,
            nodes,
            steps,
            lf: self.lf.to_string(),
        };
        serde_json::to_string(&rec).expect("derivations always serialize")
    }
}

/// Hands out disjoint blocks of metavariables to template instances.
struct MetaCounter(u32);

impl MetaCounter {
    fn instantiate(&mut self, template: &LambdaTerm, atom: &str) -> LambdaTerm {
        let offset = self.0;
        self.0 += meta_floor(template);
        let shifted = template.map_types(&mut |t| t.map_metas(&mut |m| SemType::Meta(m + offset)));
        fill_slot(&shifted, atom)
    }
}

fn fill_slot(t: &LambdaTerm, atom: &str) -> LambdaTerm {
    match t {
        LambdaTerm::Const(c) if c.name == LEMMA_SLOT => {
            LambdaTerm::Const(Symbol::new(atom, c.ty.clone()))
        }
        LambdaTerm::Var(_) | LambdaTerm::Const(_) => t.clone(),
        LambdaTerm::Abs(x, b) => LambdaTerm::abs(x.clone(), fill_slot(b, atom)),
        LambdaTerm::App(f, a) => LambdaTerm::app(fill_slot(f, atom), fill_slot(a, atom)),
    }
}

fn template_of(
    rule: &LfAssignmentRule,
    token: usize,
    counter: &mut MetaCounter,
    atom: &str,
) -> Result<Assigned, Failure> {
    match &rule.body {
        RuleBody::Template(t) => Ok(Assigned {
            rule: rule.name.clone(),
            term: counter.instantiate(t, atom),
        }),
        RuleBody::Fail(reason) => Err(Failure::new(
            *reason,
            vec![token],
            format!("rule {}", rule.name),
        )),
    }
}

/// Assigns an LF to every node and every edge of an already transformed
/// tree. Types are left open; they are solved over the whole composition.
pub fn assign_lfs(tree: &DepTree, rules: &LfRuleSet) -> Result<Assignment, Failure> {
    let mut counter = MetaCounter(0);
    assign_with(tree, rules, &mut counter)
}

fn assign_with(
    tree: &DepTree,
    rules: &LfRuleSet,
    counter: &mut MetaCounter,
) -> Result<Assignment, Failure> {
    let mut nodes = Vec::with_capacity(tree.len());
    let mut edges = Vec::with_capacity(tree.len());
    // Edge failures are reported before node failures so that a declared
    // construction failure is not masked by a residual tag below it.
    for t in &tree.tokens {
        let head_upos = match tree.token(t.head) {
            Some(h) => h.upos.as_str(),
            None => t.upos.as_str(),
        };
        let dep_upos = (t.head != 0).then_some(t.upos.as_str());
        let rule = rules
            .for_edge(&t.deprel, head_upos, dep_upos)
            .ok_or_else(|| {
                Failure::new(
                    FailureReason::NoRuleForEdge,
                    vec![t.id],
                    format!(
                        "{} ({} -> {})",
                        t.deprel,
                        head_upos,
                        dep_upos.unwrap_or("-")
                    ),
                )
            })?;
        edges.push(template_of(rule, t.id, counter, &t.lemma)?);
    }
    for t in &tree.tokens {
        let rule = rules.for_node(&t.upos).ok_or_else(|| {
            Failure::new(FailureReason::NoRuleForNode, vec![t.id], t.upos.clone())
        })?;
        nodes.push(template_of(rule, t.id, counter, &t.lemma)?);
    }
    Ok(Assignment { nodes, edges })
}

/// The whole derivation as one unreduced term, mirroring the plan.
fn composed_term(tree: &DepTree, a: &Assignment, priorities: &PriorityList) -> LambdaTerm {
    fn lf_of(tree: &DepTree, a: &Assignment, p: &PriorityList, id: usize) -> LambdaTerm {
        let mut acc = a.nodes[id - 1].term.clone();
        for dep in super::binarize::dependent_order(tree, id, p) {
            let edge = a.edges[dep - 1].term.clone();
            acc = LambdaTerm::app(LambdaTerm::app(edge, acc), lf_of(tree, a, p, dep));
        }
        acc
    }
    let root = tree.root().expect("validated trees have a root").id;
    LambdaTerm::app(
        a.edges[root - 1].term.clone(),
        lf_of(tree, a, priorities, root),
    )
}

fn typing_failure(e: LambdaError) -> Failure {
    Failure::new(FailureReason::TypingFailure, Vec::new(), e.to_string())
}

fn reduce_step(term: LambdaTerm, max_steps: usize) -> Result<LambdaTerm, Failure> {
    let out = beta_reduce(&term, max_steps).map_err(|e| match e {
        LambdaError::StepBudgetExceeded { .. } => {
            Failure::new(FailureReason::ReductionBudget, Vec::new(), e.to_string())
        }
        other => typing_failure(other),
    })?;
    type_of(&out).map_err(typing_failure)?;
    Ok(out)
}

/// Drops blank arguments immediately before the event argument of a
/// constant-headed application, so a verb with fewer than three participants
/// is not padded: `tried(she, _, _, e)` becomes `tried(she, e)`. Medial
/// blanks stay.
pub fn trim_blanks(t: &LambdaTerm) -> LambdaTerm {
    match t {
        LambdaTerm::Var(_) | LambdaTerm::Const(_) => t.clone(),
        LambdaTerm::Abs(x, b) => LambdaTerm::abs(x.clone(), trim_blanks(b)),
        LambdaTerm::App(..) => {
            let (head, args) = t.spine();
            let mut args: Vec<LambdaTerm> = args.into_iter().map(trim_blanks).collect();
            let head = match head {
                LambdaTerm::Const(c) if args.len() >= 2 && is_event(args.last().unwrap()) => {
                    let arity = args.len();
                    let (params, result) = c.ty.uncurry(arity);
                    let mut params: Vec<SemType> = params.into_iter().cloned().collect();
                    let result = result.clone();
                    let mut k = arity - 1;
                    while k > 0 && matches!(&args[k - 1], LambdaTerm::Const(b) if b.name == BLANK) {
                        args.remove(k - 1);
                        params.remove(k - 1);
                        k -= 1;
                    }
                    LambdaTerm::Const(Symbol::new(
                        c.name.clone(),
                        SemType::curried(params, result),
                    ))
                }
                other => trim_blanks(other),
            };
            LambdaTerm::apply(head, args)
        }
    }
}

fn is_event(t: &LambdaTerm) -> bool {
    matches!(type_of(t), Ok(SemType::R))
}

/// Runs the full pipeline on one tree and keeps every intermediate result.
pub fn derive(
    tree: &DepTree,
    grammar: &Grammar,
    opts: &ConvertOptions,
) -> Result<Derivation, Failure> {
    let report = validate_tree(tree);
    if !report.is_valid() {
        let detail: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::new(
            FailureReason::InvalidTree,
            Vec::new(),
            detail.join("; "),
        ));
    }
    let transformed = apply_passes(&grammar.rewrite, tree)
        .map_err(|e| Failure::new(FailureReason::RewriteError, Vec::new(), e.to_string()))?;
    let mut counter = MetaCounter(0);
    let mut assignment = assign_with(&transformed, &grammar.lf_rules, &mut counter)?;

    // Solve all types at once over the unreduced composition, then ground
    // every assigned term with the solution.
    let whole = composed_term(&transformed, &assignment, &grammar.priorities);
    let mut subst = TypeSubst::starting_at(counter.0);
    infer(&whole, &mut subst).map_err(typing_failure)?;
    apply_defaults(&whole, &mut subst);
    for a in assignment
        .nodes
        .iter_mut()
        .chain(assignment.edges.iter_mut())
    {
        a.term = ground(&a.term, &subst);
    }

    let plan = binarize(&transformed, &grammar.priorities);
    let mut current: Vec<LambdaTerm> = assignment.nodes.iter().map(|a| a.term.clone()).collect();
    let mut steps = Vec::with_capacity(plan.len());
    for step in &plan {
        let term = match step.dependent {
            Some(d) => LambdaTerm::app(
                LambdaTerm::app(
                    assignment.edges[d - 1].term.clone(),
                    current[step.head - 1].clone(),
                ),
                current[d - 1].clone(),
            ),
            None => LambdaTerm::app(
                assignment.edges[step.head - 1].term.clone(),
                current[step.head - 1].clone(),
            ),
        };
        let reduced = reduce_step(term, opts.max_steps)?;
        current[step.head - 1] = reduced.clone();
        steps.push(reduced);
    }
    let last = steps.last().cloned().ok_or_else(|| {
        Failure::new(
            FailureReason::InvalidTree,
            Vec::new(),
            "empty composition plan",
        )
    })?;
    let trimmed = trim_blanks(&last);
    type_of(&trimmed).map_err(typing_failure)?;
    let lf = CanonicalForm::of(&trimmed).into_term();
    Ok(Derivation {
        tree: transformed,
        assignment,
        plan,
        steps,
        lf,
    })
}

/// Converts one tree: rewrite, assign, binarize, compose and reduce. Never
/// panics on bad input; every problem becomes a failure outcome.
pub fn convert(tree: &DepTree, grammar: &Grammar, opts: &ConvertOptions) -> ConversionOutcome {
    let outcome = match derive(tree, grammar, opts) {
        Ok(d) => Outcome::Converted(d.lf),
        Err(f) => Outcome::Failed(f),
    };
    ConversionOutcome {
        sentence_id: tree.sentence_id.clone(),
        outcome,
    }
}
