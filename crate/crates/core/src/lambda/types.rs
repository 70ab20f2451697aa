use std::collections::HashMap;
use std::fmt;

/// Semantic types of the object language.
///
/// `T` is the truth type, `V` individuals and `R` events. `Meta` is an
/// unresolved type variable; it only appears in rule templates and in terms
/// that are still being elaborated, never in a finished logical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    T,
    V,
    R,
    Fn(Box<SemType>, Box<SemType>),
    Meta(u32),
}

impl SemType {
    pub fn func(from: SemType, to: SemType) -> SemType {
        SemType::Fn(Box::new(from), Box::new(to))
    }

    /// Builds `a1 -> a2 -> ... -> result`.
    pub fn curried<I: IntoIterator<Item = SemType>>(args: I, result: SemType) -> SemType
    where
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, arg| SemType::func(arg, acc))
    }

    /// `<r,t>`, the type of a saturated predicate.
    pub fn event_predicate() -> SemType {
        SemType::func(SemType::R, SemType::T)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            SemType::Meta(_) => false,
            SemType::Fn(a, b) => a.is_ground() && b.is_ground(),
            _ => true,
        }
    }

    pub fn occurs(&self, meta: u32) -> bool {
        match self {
            SemType::Meta(m) => *m == meta,
            SemType::Fn(a, b) => a.occurs(meta) || b.occurs(meta),
            _ => false,
        }
    }

    /// Splits off up to `n` argument types. Returns the argument types and the
    /// remaining result type.
    pub fn uncurry(&self, n: usize) -> (Vec<&SemType>, &SemType) {
        let mut args = Vec::new();
        let mut cur = self;
        while args.len() < n {
            match cur {
                SemType::Fn(a, b) => {
                    args.push(a.as_ref());
                    cur = b;
                }
                _ => break,
            }
        }
        (args, cur)
    }

    pub fn metas(&self, out: &mut Vec<u32>) {
        match self {
            SemType::Meta(m) => {
                if !out.contains(m) {
                    out.push(*m)
                }
            }
            SemType::Fn(a, b) => {
                a.metas(out);
                b.metas(out);
            }
            _ => {}
        }
    }

    pub fn map_metas(&self, f: &mut impl FnMut(u32) -> SemType) -> SemType {
        match self {
            SemType::Meta(m) => f(*m),
            SemType::Fn(a, b) => SemType::func(a.map_metas(f), b.map_metas(f)),
            other => other.clone(),
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::T => write!(f, "t"),
            SemType::V => write!(f, "v"),
            SemType::R => write!(f, "r"),
            SemType::Meta(m) => write!(f, "?{m}"),
            SemType::Fn(a, b) => {
                if matches!(a.as_ref(), SemType::Fn(..)) {
                    write!(f, "({a})->{b}")
                } else {
                    write!(f, "{a}->{b}")
                }
            }
        }
    }
}

/// A substitution from type metavariables to types, with union-find style
/// resolution on lookup.
#[derive(Clone, Debug, Default)]
pub struct TypeSubst {
    bindings: HashMap<u32, SemType>,
    next: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    #[error("cannot unify {0} with {1}")]
    Mismatch(SemType, SemType),
    #[error("infinite type: ?{0} occurs in {1}")]
    Occurs(u32, SemType),
}

impl TypeSubst {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts fresh metavariables above `floor`, so ids already used by a
    /// term are never reissued.
    pub fn starting_at(floor: u32) -> Self {
        TypeSubst {
            bindings: HashMap::new(),
            next: floor,
        }
    }

    pub fn fresh(&mut self) -> SemType {
        let m = self.next;
        self.next += 1;
        SemType::Meta(m)
    }

    pub fn is_bound(&self, meta: u32) -> bool {
        self.bindings.contains_key(&meta)
    }

    pub fn bind(&mut self, meta: u32, ty: SemType) {
        self.bindings.insert(meta, ty);
    }

    /// Fully applies the substitution.
    pub fn apply(&self, ty: &SemType) -> SemType {
        match ty {
            SemType::Meta(m) => match self.bindings.get(m) {
                Some(t) => self.apply(t),
                None => ty.clone(),
            },
            SemType::Fn(a, b) => SemType::func(self.apply(a), self.apply(b)),
            other => other.clone(),
        }
    }

    fn shallow(&self, ty: &SemType) -> SemType {
        let mut cur = ty.clone();
        while let SemType::Meta(m) = cur {
            match self.bindings.get(&m) {
                Some(t) => cur = t.clone(),
                None => break,
            }
        }
        cur
    }

    pub fn unify(&mut self, a: &SemType, b: &SemType) -> Result<(), UnifyError> {
        let a = self.shallow(a);
        let b = self.shallow(b);
        match (&a, &b) {
            (SemType::Meta(x), SemType::Meta(y)) if x == y => Ok(()),
            (SemType::Meta(x), other) | (other, SemType::Meta(x)) => {
                let resolved = self.apply(other);
                if resolved.occurs(*x) {
                    return Err(UnifyError::Occurs(*x, resolved));
                }
                self.bindings.insert(*x, resolved);
                Ok(())
            }
            (SemType::Fn(a1, b1), SemType::Fn(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ if a == b => Ok(()),
            _ => Err(UnifyError::Mismatch(self.apply(&a), self.apply(&b))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_right_associative() {
        let t = SemType::curried([SemType::V, SemType::V], SemType::event_predicate());
        assert_eq!(t.to_string(), "v->v->r->t");
        let q = SemType::func(SemType::func(SemType::V, SemType::T), SemType::V);
        assert_eq!(q.to_string(), "(v->t)->v");
    }

    #[test]
    fn unify_binds_metas() {
        let mut s = TypeSubst::starting_at(10);
        let a = s.fresh();
        let b = s.fresh();
        let f = SemType::func(a.clone(), b.clone());
        s.unify(&f, &SemType::event_predicate()).unwrap();
        assert_eq!(s.apply(&a), SemType::R);
        assert_eq!(s.apply(&b), SemType::T);
    }

    #[test]
    fn unify_occurs_check() {
        let mut s = TypeSubst::new();
        let a = s.fresh();
        let err = s
            .unify(&a, &SemType::func(a.clone(), SemType::T))
            .unwrap_err();
        assert!(matches!(err, UnifyError::Occurs(..)));
    }

    #[test]
    fn unify_mismatch() {
        let mut s = TypeSubst::new();
        assert!(s.unify(&SemType::T, &SemType::V).is_err());
    }
}
