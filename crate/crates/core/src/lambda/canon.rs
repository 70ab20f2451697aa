use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::term::{LambdaTerm, Symbol};
use super::types::SemType;

/// A term whose bound variables have been renamed to a canonical numbering:
/// individuals become `x1, x2, ...`, events `e1, e2, ...` and anything else
/// `f1, f2, ...`, in order of first appearance.
///
/// Equality is structural except that constants compare by name only. A
/// constant's type belongs to the signature it was drawn from, and the text
/// format does not record it.
#[derive(Clone, Debug)]
pub struct CanonicalForm(LambdaTerm);

impl CanonicalForm {
    pub fn of(term: &LambdaTerm) -> Self {
        let free = term.free_vars();
        let mut namer = Namer {
            counters: HashMap::new(),
            avoid: free,
        };
        CanonicalForm(rename(term, &mut Vec::new(), &mut namer))
    }

    pub fn term(&self) -> &LambdaTerm {
        &self.0
    }

    pub fn into_term(self) -> LambdaTerm {
        self.0
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        eq_modulo_const_types(&self.0, &other.0)
    }
}

impl Eq for CanonicalForm {}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn eq_modulo_const_types(a: &LambdaTerm, b: &LambdaTerm) -> bool {
    match (a, b) {
        (LambdaTerm::Const(x), LambdaTerm::Const(y)) => x.name == y.name,
        (LambdaTerm::Var(x), LambdaTerm::Var(y)) => x == y,
        (LambdaTerm::Abs(x, bx), LambdaTerm::Abs(y, by)) => x == y && eq_modulo_const_types(bx, by),
        (LambdaTerm::App(f1, a1), LambdaTerm::App(f2, a2)) => {
            eq_modulo_const_types(f1, f2) && eq_modulo_const_types(a1, a2)
        }
        _ => false,
    }
}

struct Namer {
    counters: HashMap<char, usize>,
    avoid: BTreeSet<String>,
}

impl Namer {
    fn next(&mut self, ty: &SemType) -> String {
        let prefix = match ty {
            SemType::V => 'x',
            SemType::R => 'e',
            _ => 'f',
        };
        loop {
            let n = self.counters.entry(prefix).or_insert(0);
            *n += 1;
            let candidate = format!("{prefix}{n}");
            if !self.avoid.contains(&candidate) {
                return candidate;
            }
        }
    }
}

fn rename(t: &LambdaTerm, scope: &mut Vec<(String, String)>, namer: &mut Namer) -> LambdaTerm {
    match t {
        LambdaTerm::Var(v) => match scope.iter().rev().find(|(old, _)| *old == v.name) {
            Some((_, new)) => LambdaTerm::var(new.clone(), v.ty.clone()),
            None => t.clone(),
        },
        LambdaTerm::Const(_) => t.clone(),
        LambdaTerm::Abs(x, body) => {
            let fresh = namer.next(&x.ty);
            scope.push((x.name.clone(), fresh.clone()));
            let b = rename(body, scope, namer);
            scope.pop();
            LambdaTerm::abs(Symbol::new(fresh, x.ty.clone()), b)
        }
        LambdaTerm::App(f, a) => LambdaTerm::app(rename(f, scope, namer), rename(a, scope, namer)),
    }
}

/// True iff the two terms are equal up to consistent renaming of bound
/// variables.
pub fn alpha_equivalent(a: &LambdaTerm, b: &LambdaTerm) -> bool {
    CanonicalForm::of(a) == CanonicalForm::of(b)
}
