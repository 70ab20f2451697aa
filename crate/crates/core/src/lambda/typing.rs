use super::term::{LambdaTerm, Symbol};
use super::types::{SemType, TypeSubst};
use super::LambdaError;

/// Computes the type of a term whose annotations are all ground.
///
/// Errors carry a path to the offending subterm: `fn`/`arg` step into an
/// application, `body` into an abstraction.
pub fn type_of(term: &LambdaTerm) -> Result<SemType, LambdaError> {
    let mut scope: Vec<&Symbol> = Vec::new();
    let mut path = Vec::new();
    check(term, &mut scope, &mut path)
}

fn render_path(path: &[&'static str]) -> String {
    if path.is_empty() {
        "<root>".to_string()
    } else {
        path.join(".")
    }
}

fn check<'a>(
    term: &'a LambdaTerm,
    scope: &mut Vec<&'a Symbol>,
    path: &mut Vec<&'static str>,
) -> Result<SemType, LambdaError> {
    match term {
        LambdaTerm::Const(c) => Ok(c.ty.clone()),
        LambdaTerm::Var(v) => {
            if let Some(b) = scope.iter().rev().find(|b| b.name == v.name) {
                if b.ty != v.ty {
                    return Err(LambdaError::TypeMismatch {
                        path: render_path(path),
                        expected: b.ty.clone(),
                        found: v.ty.clone(),
                    });
                }
            }
            Ok(v.ty.clone())
        }
        LambdaTerm::Abs(x, body) => {
            scope.push(x);
            path.push("body");
            let bt = check(body, scope, path);
            path.pop();
            scope.pop();
            Ok(SemType::func(x.ty.clone(), bt?))
        }
        LambdaTerm::App(f, a) => {
            path.push("fn");
            let ft = check(f, scope, path)?;
            path.pop();
            path.push("arg");
            let at = check(a, scope, path)?;
            path.pop();
            match ft {
                SemType::Fn(from, to) => {
                    if *from != at {
                        return Err(LambdaError::TypeMismatch {
                            path: render_path(path),
                            expected: *from,
                            found: at,
                        });
                    }
                    Ok(*to)
                }
                other => Err(LambdaError::NotAFunction {
                    path: render_path(path),
                    ty: other,
                }),
            }
        }
    }
}

/// Type inference by unification. Metavariables in annotations are solved
/// into `subst`; the returned type is not yet substituted.
pub fn infer(term: &LambdaTerm, subst: &mut TypeSubst) -> Result<SemType, LambdaError> {
    let mut scope: Vec<&Symbol> = Vec::new();
    let mut path = Vec::new();
    infer_in(term, subst, &mut scope, &mut path)
}

fn infer_in<'a>(
    term: &'a LambdaTerm,
    subst: &mut TypeSubst,
    scope: &mut Vec<&'a Symbol>,
    path: &mut Vec<&'static str>,
) -> Result<SemType, LambdaError> {
    let unify_err = |path: &[&'static str], e: super::types::UnifyError| LambdaError::Unify {
        path: render_path(path),
        source: e,
    };
    match term {
        LambdaTerm::Const(c) => Ok(c.ty.clone()),
        LambdaTerm::Var(v) => {
            if let Some(b) = scope.iter().rev().find(|b| b.name == v.name) {
                subst.unify(&b.ty, &v.ty).map_err(|e| unify_err(path, e))?;
            }
            Ok(v.ty.clone())
        }
        LambdaTerm::Abs(x, body) => {
            scope.push(x);
            path.push("body");
            let bt = infer_in(body, subst, scope, path);
            path.pop();
            scope.pop();
            Ok(SemType::func(x.ty.clone(), bt?))
        }
        LambdaTerm::App(f, a) => {
            path.push("fn");
            let ft = infer_in(f, subst, scope, path)?;
            path.pop();
            path.push("arg");
            let at = infer_in(a, subst, scope, path)?;
            path.pop();
            let result = subst.fresh();
            subst
                .unify(&ft, &SemType::func(at, result.clone()))
                .map_err(|e| unify_err(path, e))?;
            Ok(result)
        }
    }
}

/// Highest metavariable id used in the term, plus one.
pub fn meta_floor(term: &LambdaTerm) -> u32 {
    let mut metas = Vec::new();
    let _ = term.map_types(&mut |t| {
        t.metas(&mut metas);
        t.clone()
    });
    metas.into_iter().max().map_or(0, |m| m + 1)
}

/// Solves every metavariable in `term`.
///
/// Constraints come from unification. Whatever is left unconstrained is
/// defaulted: an applied constant yields a truth value, except a quantifier
/// head in binder form, which yields an individual; every other leftover is
/// an individual.
pub fn resolve_types(term: &LambdaTerm) -> Result<LambdaTerm, LambdaError> {
    let mut subst = TypeSubst::starting_at(meta_floor(term));
    infer(term, &mut subst)?;
    apply_defaults(term, &mut subst);
    Ok(ground(term, &subst))
}

/// Applies the defaulting rules of [`resolve_types`] to an already-inferred
/// substitution.
pub fn apply_defaults(term: &LambdaTerm, subst: &mut TypeSubst) {
    let mut pending = Vec::new();
    term.visit(&mut |t| {
        if let LambdaTerm::App(..) = t {
            let (head, args) = t.spine();
            if let LambdaTerm::Const(c) = head {
                let quantifier = args.len() == 1
                    && matches!(args[0], LambdaTerm::Abs(x, _) if subst.apply(&x.ty) == SemType::V);
                pending.push((c.ty.clone(), args.len(), quantifier));
            }
        }
    });
    for (ty, arity, quantifier) in pending {
        let resolved = subst.apply(&ty);
        let (_, result) = resolved.uncurry(arity);
        if let SemType::Meta(m) = result {
            let m = *m;
            if !subst.is_bound(m) {
                subst.bind(m, if quantifier { SemType::V } else { SemType::T });
            }
        }
    }
}

/// Substitutes solved metavariables and sends the rest to `v`.
pub fn ground(term: &LambdaTerm, subst: &TypeSubst) -> LambdaTerm {
    term.map_types(&mut |t| subst.apply(t).map_metas(&mut |_| SemType::V))
}
