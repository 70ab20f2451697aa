use std::collections::BTreeSet;
use std::fmt;

use super::types::SemType;

/// A typed name: used for variables and constants alike.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub ty: SemType,
}

impl Symbol {
    pub fn new(name: impl Into<String>, ty: SemType) -> Self {
        Symbol {
            name: name.into(),
            ty,
        }
    }
}

/// Terms of the typed lambda calculus used for logical forms.
///
/// Lexical predicates, quantifier heads, logical heads (`and`, `not`, `Q`,
/// ...) and the blank argument `_` are all constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LambdaTerm {
    Var(Symbol),
    Const(Symbol),
    Abs(Symbol, Box<LambdaTerm>),
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

/// The blank argument that fills a missing medial slot.
pub const BLANK: &str = "_";

impl LambdaTerm {
    pub fn var(name: impl Into<String>, ty: SemType) -> Self {
        LambdaTerm::Var(Symbol::new(name, ty))
    }

    pub fn constant(name: impl Into<String>, ty: SemType) -> Self {
        LambdaTerm::Const(Symbol::new(name, ty))
    }

    pub fn abs(binder: Symbol, body: LambdaTerm) -> Self {
        LambdaTerm::Abs(binder, Box::new(body))
    }

    pub fn app(f: LambdaTerm, arg: LambdaTerm) -> Self {
        LambdaTerm::App(Box::new(f), Box::new(arg))
    }

    /// Curried application of `f` to every argument in turn.
    pub fn apply<I: IntoIterator<Item = LambdaTerm>>(f: LambdaTerm, args: I) -> Self {
        args.into_iter().fold(f, LambdaTerm::app)
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&LambdaTerm, Vec<&LambdaTerm>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let LambdaTerm::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, LambdaTerm::App(f, _) if matches!(f.as_ref(), LambdaTerm::Abs(..)))
    }

    /// True if no subterm is a beta-redex.
    pub fn is_normal(&self) -> bool {
        match self {
            LambdaTerm::Var(_) | LambdaTerm::Const(_) => true,
            LambdaTerm::Abs(_, b) => b.is_normal(),
            LambdaTerm::App(f, a) => !self.is_redex() && f.is_normal() && a.is_normal(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            LambdaTerm::Var(_) | LambdaTerm::Const(_) => 1,
            LambdaTerm::Abs(_, b) => 1 + b.size(),
            LambdaTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            LambdaTerm::Var(v) => {
                if !bound.contains(&v.name.as_str()) {
                    out.insert(v.name.clone());
                }
            }
            LambdaTerm::Const(_) => {}
            LambdaTerm::Abs(x, b) => {
                bound.push(&x.name);
                b.collect_free(bound, out);
                bound.pop();
            }
            LambdaTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            LambdaTerm::Var(v) => {
                out.insert(v.name.clone());
            }
            LambdaTerm::Const(_) => {}
            LambdaTerm::Abs(x, b) => {
                out.insert(x.name.clone());
                b.all_var_names(out);
            }
            LambdaTerm::App(f, a) => {
                f.all_var_names(out);
                a.all_var_names(out);
            }
        }
    }

    pub fn constants(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let LambdaTerm::Const(c) = t {
                out.push(c);
            }
        });
        out
    }

    pub fn contains_const(&self, name: &str) -> bool {
        self.constants().iter().any(|c| c.name == name)
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a LambdaTerm)) {
        f(self);
        match self {
            LambdaTerm::Abs(_, b) => b.visit(f),
            LambdaTerm::App(g, a) => {
                g.visit(f);
                a.visit(f);
            }
            _ => {}
        }
    }

    /// Rewrites every type annotation in the term.
    pub fn map_types(&self, f: &mut impl FnMut(&SemType) -> SemType) -> LambdaTerm {
        match self {
            LambdaTerm::Var(v) => LambdaTerm::var(v.name.clone(), f(&v.ty)),
            LambdaTerm::Const(c) => LambdaTerm::constant(c.name.clone(), f(&c.ty)),
            LambdaTerm::Abs(x, b) => {
                LambdaTerm::abs(Symbol::new(x.name.clone(), f(&x.ty)), b.map_types(f))
            }
            LambdaTerm::App(g, a) => LambdaTerm::app(g.map_types(f), a.map_types(f)),
        }
    }

    /// Renders with the λ-and-subscript notation familiar from the semantics
    /// literature: event arguments are shown as subscripts and quantified
    /// phrases as `a x. toy(x)`. Display only; not parseable.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        pretty(self, &mut s);
        s
    }
}

fn needs_quotes(name: &str) -> bool {
    name.is_empty()
        || name == "lambda"
        || name.starts_with('?')
        || name.chars().any(|c| {
            c.is_whitespace() || matches!(c, '(' | ')' | ',' | '.' | ':' | '"' | 'λ' | '\\')
        })
}

pub(crate) fn write_atom(f: &mut impl fmt::Write, name: &str) -> fmt::Result {
    if needs_quotes(name) {
        write!(f, "\"")?;
        for c in name.chars() {
            if c == '"' || c == '\\' {
                write!(f, "\\")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "\"")
    } else {
        write!(f, "{name}")
    }
}

/// Binder form `q(x, body)` is used for a one-argument application of a
/// variable or constant to an abstraction over an individual.
fn binder_form<'a>(
    head: &LambdaTerm,
    args: &[&'a LambdaTerm],
) -> Option<(&'a Symbol, &'a LambdaTerm)> {
    if !matches!(head, LambdaTerm::Var(_) | LambdaTerm::Const(_)) || args.len() != 1 {
        return None;
    }
    match args[0] {
        LambdaTerm::Abs(x, body) if x.ty == SemType::V => Some((x, body)),
        _ => None,
    }
}

/// Names the parser may read as the bound variable of a binder form.
pub(crate) fn variable_shaped(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() && c != 'a' => {
            chars.all(|c| c.is_ascii_digit() || c == '\'')
        }
        _ => false,
    }
}

// Binder form only when the parser would read it back the same way: the
// name is variable-shaped and not already bound. A variable-shaped constant
// in the first of two argument slots is quoted so it is not taken for one.
fn write_term<'a>(
    f: &mut fmt::Formatter<'_>,
    t: &'a LambdaTerm,
    scope: &mut Vec<&'a str>,
) -> fmt::Result {
    match t {
        LambdaTerm::Var(v) | LambdaTerm::Const(v) => write_atom(f, &v.name),
        LambdaTerm::Abs(x, body) => {
            write!(f, "lambda ")?;
            write_atom(f, &x.name)?;
            write!(f, ":{}. ", x.ty)?;
            scope.push(&x.name);
            let r = write_term(f, body, scope);
            scope.pop();
            r
        }
        LambdaTerm::App(..) => {
            let (head, args) = t.spine();
            let atomic = matches!(head, LambdaTerm::Var(_) | LambdaTerm::Const(_));
            if atomic {
                write_term(f, head, scope)?;
            } else {
                write!(f, "(")?;
                write_term(f, head, scope)?;
                write!(f, ")")?;
            }
            write!(f, "(")?;
            if let Some((x, body)) = binder_form(head, &args) {
                if variable_shaped(&x.name) && !scope.contains(&x.name.as_str()) {
                    write!(f, "{}, ", x.name)?;
                    scope.push(&x.name);
                    let r = write_term(f, body, scope);
                    scope.pop();
                    r?;
                    return write!(f, ")");
                }
            }
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                match a {
                    LambdaTerm::Const(c)
                        if i == 0 && args.len() == 2 && variable_shaped(&c.name) =>
                    {
                        write!(f, "\"{}\"", c.name)?
                    }
                    _ => write_term(f, a, scope)?,
                }
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for LambdaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, &mut Vec::new())
    }
}

fn pretty(t: &LambdaTerm, out: &mut String) {
    use std::fmt::Write;
    match t {
        LambdaTerm::Var(v) | LambdaTerm::Const(v) => out.push_str(&v.name),
        LambdaTerm::Abs(x, body) => {
            let _ = write!(out, "λ{}. ", x.name);
            pretty(body, out);
        }
        LambdaTerm::App(..) => {
            let (head, args) = t.spine();
            if let Some((x, body)) = binder_form(head, &args) {
                pretty(head, out);
                let _ = write!(out, " {}. ", x.name);
                pretty(body, out);
                return;
            }
            let mut args: Vec<&LambdaTerm> = args;
            let mut subscript = None;
            if let Some(LambdaTerm::Var(ev)) = args.last() {
                if ev.ty == SemType::R {
                    subscript = Some(ev.name.clone());
                    args.pop();
                }
            }
            match head {
                LambdaTerm::Var(_) | LambdaTerm::Const(_) => pretty(head, out),
                _ => {
                    out.push('(');
                    pretty(head, out);
                    out.push(')');
                }
            }
            if let Some(e) = subscript {
                let _ = write!(out, "_{e}");
            }
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    pretty(a, out);
                }
                out.push(')');
            }
        }
    }
}
