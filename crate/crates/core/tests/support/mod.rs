//! Generators and oracles shared by the property tests and the acceptance
//! run. Each test target uses a different subset.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};
use udlf::lambda::{
    alpha_equivalent, beta_reduce, beta_reduce_innermost, type_of, CanonicalForm, LambdaTerm,
    SemType, Symbol, DEFAULT_MAX_STEPS,
};
use udlf::treebank::{DepTree, Token};

fn fun(a: SemType, b: SemType) -> SemType {
    SemType::func(a, b)
}

/// The small types terms are drawn from: base types plus the first- and
/// second-order shapes the grammar actually uses.
pub fn small_types() -> Vec<SemType> {
    use SemType::*;
    vec![
        T,
        V,
        R,
        fun(V, T),
        fun(R, T),
        fun(V, V),
        fun(V, fun(R, T)),
        fun(fun(V, T), T),
        fun(fun(V, T), V),
    ]
}

/// Binder names are drawn from a tiny pool so shadowing and capture
/// situations come up often.
const NAMES: &[&str] = &["x", "y", "z", "e"];

pub struct TermGen<'r, R: Rng> {
    rng: &'r mut R,
    types: Vec<SemType>,
    /// Function constants get names by type, since the text format does not
    /// record a constant's type.
    fn_names: HashMap<SemType, usize>,
}

impl<'r, R: Rng> TermGen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        TermGen {
            rng,
            types: small_types(),
            fn_names: HashMap::new(),
        }
    }

    /// A closed, well-typed term of a random small type.
    pub fn closed_term(&mut self, depth: u32) -> LambdaTerm {
        let ty = self.types.choose(self.rng).unwrap().clone();
        self.term(&ty, &mut Vec::new(), depth)
    }

    fn constant(&mut self, ty: &SemType) -> LambdaTerm {
        let k = self.rng.gen_range(0..2);
        let name = match ty {
            // Single letters would read back as binders in `q(x, body)`.
            SemType::T => ["yes", "no"][k].to_string(),
            SemType::V => ["ann", "bob"][k].to_string(),
            SemType::R => ["now", "then"][k].to_string(),
            _ => {
                let next = self.fn_names.len();
                let i = *self.fn_names.entry(ty.clone()).or_insert(next);
                format!("{}{i}", ["fun", "gun"][k])
            }
        };
        LambdaTerm::constant(name, ty.clone())
    }

    /// A term of type `ty` whose free variables all come from `ctx`.
    pub fn term(&mut self, ty: &SemType, ctx: &mut Vec<Symbol>, depth: u32) -> LambdaTerm {
        // Only the innermost binder of each name is visible.
        let mut seen = HashSet::new();
        let usable: Vec<Symbol> = ctx
            .iter()
            .rev()
            .filter(|s| seen.insert(s.name.clone()))
            .filter(|s| &s.ty == ty)
            .cloned()
            .collect();
        if depth == 0 {
            return match usable.choose(self.rng) {
                Some(s) if self.rng.gen_bool(0.7) => LambdaTerm::Var(s.clone()),
                _ => self.constant(ty),
            };
        }
        let roll = self.rng.gen_range(0..10);
        match roll {
            // A beta-redex: (λx:a. body) arg.
            0..=3 => {
                let a = self.types.choose(self.rng).unwrap().clone();
                let arg = self.term(&a, ctx, depth - 1);
                let binder = Symbol::new(*NAMES.choose(self.rng).unwrap(), a);
                ctx.push(binder.clone());
                let body = self.term(ty, ctx, depth - 1);
                ctx.pop();
                LambdaTerm::app(LambdaTerm::abs(binder, body), arg)
            }
            6..=7 if matches!(ty, SemType::Fn(..)) => {
                let SemType::Fn(a, b) = ty else {
                    unreachable!()
                };
                let binder = Symbol::new(*NAMES.choose(self.rng).unwrap(), a.as_ref().clone());
                ctx.push(binder.clone());
                let body = self.term(b, ctx, depth - 1);
                ctx.pop();
                LambdaTerm::abs(binder, body)
            }
            // An application with an arbitrary function part.
            4..=7 => {
                let a = self.types.choose(self.rng).unwrap().clone();
                let f = self.term(&fun(a.clone(), ty.clone()), ctx, depth - 1);
                let arg = self.term(&a, ctx, depth - 1);
                LambdaTerm::app(f, arg)
            }
            _ => match usable.choose(self.rng) {
                Some(s) => LambdaTerm::Var(s.clone()),
                None => self.constant(ty),
            },
        }
    }
}

/// Renames every binder to a fresh name, leaving free variables alone.
/// Written independently of the library's canonicalizer.
pub fn rename_all_binders(t: &LambdaTerm, salt: &str) -> LambdaTerm {
    fn go(
        t: &LambdaTerm,
        env: &mut Vec<(String, String)>,
        n: &mut usize,
        salt: &str,
    ) -> LambdaTerm {
        match t {
            LambdaTerm::Var(s) => {
                let name = env
                    .iter()
                    .rev()
                    .find(|(old, _)| *old == s.name)
                    .map(|(_, new)| new.clone())
                    .unwrap_or_else(|| s.name.clone());
                LambdaTerm::Var(Symbol::new(name, s.ty.clone()))
            }
            LambdaTerm::Const(_) => t.clone(),
            LambdaTerm::Abs(b, body) => {
                *n += 1;
                let fresh = format!("{salt}{n}");
                env.push((b.name.clone(), fresh.clone()));
                let body = go(body, env, n, salt);
                env.pop();
                LambdaTerm::abs(Symbol::new(fresh, b.ty.clone()), body)
            }
            LambdaTerm::App(f, a) => LambdaTerm::app(go(f, env, n, salt), go(a, env, n, salt)),
        }
    }
    go(t, &mut Vec::new(), &mut 0, salt)
}

/// Structural scan for `(λx. b) a` anywhere in the term.
pub fn has_redex(t: &LambdaTerm) -> bool {
    match t {
        LambdaTerm::App(f, a) => {
            matches!(f.as_ref(), LambdaTerm::Abs(..)) || has_redex(f) || has_redex(a)
        }
        LambdaTerm::Abs(_, b) => has_redex(b),
        _ => false,
    }
}

pub fn term_size(t: &LambdaTerm) -> usize {
    match t {
        LambdaTerm::App(f, a) => 1 + term_size(f) + term_size(a),
        LambdaTerm::Abs(_, b) => 1 + term_size(b),
        _ => 1,
    }
}

/// A noisy linear series over sorted ages; about half have no real trend.
pub fn random_series<R: Rng>(rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(4..40);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(12.0..60.0)).collect();
    xs.sort_by(f64::total_cmp);
    let slope = if rng.gen_bool(0.5) {
        0.0
    } else {
        rng.gen_range(-0.02..0.02)
    };
    let noise = rng.gen_range(0.001..0.2);
    let base = rng.gen_range(0.0..0.5);
    let ys = xs
        .iter()
        .map(|x| base + slope * x + noise * rng.gen_range(-1.0..1.0))
        .collect();
    (xs, ys)
}

/// Checks the lambda-core laws on one closed term, naming the first one
/// that fails.
pub fn check_lambda_laws(t: &LambdaTerm) -> Result<(), String> {
    let ty = type_of(t).map_err(|e| format!("generator produced an ill-typed term: {e}"))?;
    let nf = beta_reduce(t, DEFAULT_MAX_STEPS).map_err(|e| format!("reduce: {e}"))?;
    match type_of(&nf) {
        Ok(ty2) if ty2 == ty => {}
        other => return Err(format!("subject reduction: {ty} became {other:?} in {nf}")),
    }
    if has_redex(&nf) {
        return Err(format!("normal form still has a redex: {nf}"));
    }
    let c = CanonicalForm::of(t);
    let cc = CanonicalForm::of(c.term());
    if cc.term() != c.term() {
        return Err(format!("canonicalization not idempotent on {t}"));
    }
    if !alpha_equivalent(t, &rename_all_binders(t, "r")) {
        return Err(format!("renaming binders changed the class of {t}"));
    }
    if term_size(t) <= 30 {
        let inner = beta_reduce_innermost(t, DEFAULT_MAX_STEPS).map_err(|e| format!("{e}"))?;
        if !alpha_equivalent(&nf, &inner) {
            return Err(format!("normal and innermost order disagree on {t}"));
        }
    }
    Ok(())
}

/// Closed-form simple regression with the p-value from statrs.
#[derive(Debug, Clone, Copy)]
pub struct OracleFit {
    pub slope: f64,
    pub intercept: f64,
    pub t: f64,
    pub p: f64,
}

pub fn oracle_ols(xs: &[f64], ys: &[f64]) -> OracleFit {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let mx = sx / n;
    let ssx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let se = (sse / (n - 2.0) / ssx).sqrt();
    let t = slope / se;
    let dist = StudentsT::new(0.0, 1.0, n - 2.0).unwrap();
    let p = 2.0 * dist.cdf(-t.abs());
    OracleFit {
        slope,
        intercept,
        t,
        p,
    }
}

/// A random tree in which every token attaches to an earlier one.
pub fn random_tree<R: Rng>(rng: &mut R, id: &str, n: usize, labels: &[&str]) -> DepTree {
    let mut tokens = vec![Token::new(1, "w1", "w1", "NOUN", 0, "root")];
    for i in 2..=n {
        let head = rng.gen_range(1..i);
        let label = labels.choose(rng).unwrap();
        let form = format!("w{i}");
        tokens.push(Token::new(i, &form, &form, "NOUN", head, label));
    }
    let mut t = DepTree::new(id, tokens);
    t.text = Some(
        (1..=n)
            .map(|i| format!("w{i}"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    t
}

/// Moves the heads of up to `k` non-root tokens to a different token
/// without creating cycles, keeping labels. Returns the new tree and how many
/// heads actually moved; some shapes (a chain, say) leave a token nowhere to
/// go.
pub fn perturb_heads<R: Rng>(rng: &mut R, tree: &DepTree, k: usize) -> (DepTree, usize) {
    let mut out = tree.clone();
    let mut candidates: Vec<usize> = (2..=tree.len()).collect();
    candidates.shuffle(rng);
    let mut moved = 0;
    for id in candidates {
        if moved == k {
            break;
        }
        let options: Vec<usize> = (1..=tree.len())
            .filter(|&h| h != id && h != out.tokens[id - 1].head && !dominates(&out, id, h))
            .collect();
        if let Some(&h) = options.choose(rng) {
            out.tokens[id - 1].head = h;
            moved += 1;
        }
    }
    (out, moved)
}

/// Whether `a` is an ancestor of (or equal to) `b`.
fn dominates(t: &DepTree, a: usize, b: usize) -> bool {
    let mut cur = b;
    while cur != 0 {
        if cur == a {
            return true;
        }
        cur = t.tokens[cur - 1].head;
    }
    false
}

/// Brute-force per-label token counts.
pub fn recount(trees: &[DepTree]) -> HashMap<String, usize> {
    let mut m = HashMap::new();
    for t in trees {
        for tok in &t.tokens {
            *m.entry(tok.deprel.clone()).or_insert(0) += 1;
        }
    }
    m
}

const TAGS: &[&str] = &[
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "PROPN", "DET", "ADP", "AUX", "PART", "PUNCT", "CONJ",
    "INTJ", "NUM", "X",
];

const EDGE_LABELS: &[&str] = &[
    "nsubj",
    "dobj",
    "iobj",
    "det",
    "amod",
    "advmod",
    "case",
    "nmod",
    "nmod:poss",
    "compound",
    "compound:prt",
    "mwe",
    "name",
    "aux",
    "cop",
    "neg",
    "mark",
    "xcomp",
    "ccomp",
    "advcl",
    "acl",
    "acl:relcl",
    "acl:relcl:obj",
    "conj",
    "cc",
    "punct",
    "parataxis",
    "discourse",
    "nsubjpass",
    "auxpass",
    "dobj:comp",
    "vocative",
];

const LEMMAS: &[&str] = &[
    "what", "who", "it", "up", "?", "go", "dog", "the", "Ma", "שלום",
];

/// A random tree of any shape over a label mix that exercises the default
/// rewrite rules. The root is never punctuation.
pub fn random_labeled_tree<R: Rng>(rng: &mut R, id: &str, n: usize) -> DepTree {
    // Attach tokens in a random order so heads may lie on either side.
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0; n + 1];
    for i in 1..n {
        heads[order[i]] = order[rng.gen_range(0..i)];
    }
    let tokens = (1..=n)
        .map(|i| {
            let lemma = *LEMMAS.choose(rng).unwrap();
            let (upos, deprel) = if heads[i] == 0 {
                (*["VERB", "NOUN", "ADJ"].choose(rng).unwrap(), "root")
            } else {
                (
                    *TAGS.choose(rng).unwrap(),
                    *EDGE_LABELS.choose(rng).unwrap(),
                )
            };
            let mut t = Token::new(i, &format!("{lemma}{i}"), lemma, upos, heads[i], deprel);
            if rng.gen_bool(0.3) {
                t.morph = format!("{}|{lemma}", upos.to_lowercase());
            }
            t
        })
        .collect();
    let mut t = DepTree::new(id, tokens);
    t.text = Some(
        t.tokens
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" "),
    );
    if rng.gen_bool(0.5) {
        t.comments
            .push(format!("session_id = {}", rng.gen_range(1..5)));
    }
    t
}

/// Per-label (occurrences, occurrences in converted sentences) for
/// corpus50.conllu, tallied outside the library from the fixture's
/// `# expect` lines.
pub const CORPUS50_RATES: &[(&str, usize, usize)] = &[
    ("acl", 2, 2),
    ("acl:relcl", 4, 0),
    ("acl:relcl:obj", 2, 2),
    ("advcl", 1, 1),
    ("advmod", 4, 3),
    ("amod", 2, 2),
    ("appos", 1, 0),
    ("aux", 9, 9),
    ("case", 5, 3),
    ("cc", 3, 3),
    ("ccomp", 3, 3),
    ("compound", 1, 1),
    ("compound:prt", 5, 3),
    ("compound:svc", 1, 1),
    ("conj", 3, 3),
    ("cop", 7, 7),
    ("dep", 1, 0),
    ("det", 30, 24),
    ("dobj", 29, 27),
    ("dobj:comp", 1, 1),
    ("expl", 1, 0),
    ("iobj", 3, 3),
    ("mark", 7, 7),
    ("neg", 1, 1),
    ("nmod", 4, 2),
    ("nmod:poss", 6, 5),
    ("nmod:tmod", 1, 0),
    ("nsubj", 44, 36),
    ("nummod", 1, 1),
    ("parataxis", 1, 1),
    ("punct", 5, 4),
    ("root", 50, 40),
    ("vocative", 1, 0),
    ("xcomp", 3, 3),
];
