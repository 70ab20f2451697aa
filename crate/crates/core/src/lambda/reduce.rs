use std::collections::BTreeSet;

use super::term::{LambdaTerm, Symbol};
use super::typing::type_of;
use super::LambdaError;

/// Default reduction budget.
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Capture-avoiding substitution of `value` for the free occurrences of `var`
/// in `body`. The value must have the variable's type.
pub fn substitute(
    body: &LambdaTerm,
    var: &Symbol,
    value: &LambdaTerm,
) -> Result<LambdaTerm, LambdaError> {
    let vt = type_of(value)?;
    if vt != var.ty {
        return Err(LambdaError::TypeMismatch {
            path: format!("substitution for {}", var.name),
            expected: var.ty.clone(),
            found: vt,
        });
    }
    Ok(subst(body, &var.name, value, &value.free_vars()))
}

pub(crate) fn subst(
    body: &LambdaTerm,
    name: &str,
    value: &LambdaTerm,
    value_fv: &BTreeSet<String>,
) -> LambdaTerm {
    match body {
        LambdaTerm::Var(v) if v.name == name => value.clone(),
        LambdaTerm::Var(_) | LambdaTerm::Const(_) => body.clone(),
        LambdaTerm::App(f, a) => LambdaTerm::app(
            subst(f, name, value, value_fv),
            subst(a, name, value, value_fv),
        ),
        LambdaTerm::Abs(x, b) => {
            if x.name == name {
                return body.clone();
            }
            if value_fv.contains(&x.name) && b.free_vars().contains(name) {
                let mut avoid = value_fv.clone();
                b.all_var_names(&mut avoid);
                avoid.insert(name.to_string());
                let fresh = prime_until_fresh(&x.name, &avoid);
                let renamed_binder = Symbol::new(fresh.clone(), x.ty.clone());
                let renamed_body = subst(
                    b,
                    &x.name,
                    &LambdaTerm::Var(renamed_binder.clone()),
                    &BTreeSet::from([fresh]),
                );
                LambdaTerm::abs(renamed_binder, subst(&renamed_body, name, value, value_fv))
            } else {
                LambdaTerm::abs(x.clone(), subst(b, name, value, value_fv))
            }
        }
    }
}

fn prime_until_fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

fn contract(redex: &LambdaTerm) -> LambdaTerm {
    match redex {
        LambdaTerm::App(f, a) => match f.as_ref() {
            LambdaTerm::Abs(x, b) => subst(b, &x.name, a, &a.free_vars()),
            _ => unreachable!("contract called on a non-redex"),
        },
        _ => unreachable!("contract called on a non-redex"),
    }
}

/// One leftmost-outermost step, or `None` if the term is normal.
pub fn step_normal_order(t: &LambdaTerm) -> Option<LambdaTerm> {
    if t.is_redex() {
        return Some(contract(t));
    }
    match t {
        LambdaTerm::App(f, a) => {
            if let Some(f2) = step_normal_order(f) {
                Some(LambdaTerm::app(f2, a.as_ref().clone()))
            } else {
                step_normal_order(a).map(|a2| LambdaTerm::app(f.as_ref().clone(), a2))
            }
        }
        LambdaTerm::Abs(x, b) => step_normal_order(b).map(|b2| LambdaTerm::abs(x.clone(), b2)),
        _ => None,
    }
}

/// One leftmost-innermost step, or `None` if the term is normal.
pub fn step_innermost(t: &LambdaTerm) -> Option<LambdaTerm> {
    match t {
        LambdaTerm::App(f, a) => {
            if let Some(f2) = step_innermost(f) {
                return Some(LambdaTerm::app(f2, a.as_ref().clone()));
            }
            if let Some(a2) = step_innermost(a) {
                return Some(LambdaTerm::app(f.as_ref().clone(), a2));
            }
            if t.is_redex() {
                Some(contract(t))
            } else {
                None
            }
        }
        LambdaTerm::Abs(x, b) => step_innermost(b).map(|b2| LambdaTerm::abs(x.clone(), b2)),
        _ => None,
    }
}

fn reduce_with(
    term: &LambdaTerm,
    max_steps: usize,
    step: fn(&LambdaTerm) -> Option<LambdaTerm>,
) -> Result<(LambdaTerm, usize), LambdaError> {
    let mut cur = term.clone();
    let mut steps = 0;
    while let Some(next) = step(&cur) {
        if steps == max_steps {
            return Err(LambdaError::StepBudgetExceeded { max_steps });
        }
        cur = next;
        steps += 1;
    }
    Ok((cur, steps))
}

/// Normal-order reduction to beta-normal form.
pub fn beta_reduce(term: &LambdaTerm, max_steps: usize) -> Result<LambdaTerm, LambdaError> {
    beta_reduce_counted(term, max_steps).map(|(t, _)| t)
}

/// Like [`beta_reduce`], also reporting how many contractions were made.
pub fn beta_reduce_counted(
    term: &LambdaTerm,
    max_steps: usize,
) -> Result<(LambdaTerm, usize), LambdaError> {
    reduce_with(term, max_steps, step_normal_order)
}

/// Leftmost-innermost reduction. Only used to cross-check normal order.
pub fn beta_reduce_innermost(
    term: &LambdaTerm,
    max_steps: usize,
) -> Result<LambdaTerm, LambdaError> {
    reduce_with(term, max_steps, step_innermost).map(|(t, _)| t)
}
