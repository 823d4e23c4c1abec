//! Linear typing: every variable in the context is used exactly once.
//!
//! Contexts are split by free variables rather than guessed, and checking is
//! syntax-directed: `put` and unitaries carry their types, injections carry
//! the full sum type.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Ctx, Name, QExp, QType, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    UnboundVar,
    DuplicateUse,
    UnusedVar,
    TypeMismatch,
    ContextOverlap,
    BranchMismatch,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeErrorKind::UnboundVar => "UnboundVar",
            TypeErrorKind::DuplicateUse => "DuplicateUse",
            TypeErrorKind::UnusedVar => "UnusedVar",
            TypeErrorKind::TypeMismatch => "TypeMismatch",
            TypeErrorKind::ContextOverlap => "ContextOverlap",
            TypeErrorKind::BranchMismatch => "BranchMismatch",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {detail}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub detail: String,
}

impl TypeError {
    fn new(kind: TypeErrorKind, detail: impl Into<String>) -> Self {
        TypeError {
            kind,
            detail: detail.into(),
        }
    }
}

type TResult<T> = Result<T, TypeError>;

/// Infers the type of `e` under exactly the context `ctx`.
pub fn infer(ctx: &Ctx, e: &QExp) -> TResult<QType> {
    synth(ctx, e)?.ok_or_else(|| {
        TypeError::new(
            TypeErrorKind::TypeMismatch,
            "a measurement of an empty type has no determined result type",
        )
    })
}

/// Checks `e` against an expected type. Unlike [`infer`], this accepts
/// terms whose type is only fixed from outside, such as an empty measurement.
pub fn check(ctx: &Ctx, e: &QExp, expected: &QType) -> TResult<()> {
    match synth(ctx, e)? {
        Some(t) if &t != expected => Err(TypeError::new(
            TypeErrorKind::TypeMismatch,
            format!("expected {expected}, found {t}"),
        )),
        _ => Ok(()),
    }
}

/// Splits `ctx` into the parts used by two disjoint subterms.
pub fn split_context(ctx: &Ctx, fv1: &BTreeSet<Name>, fv2: &BTreeSet<Name>) -> TResult<(Ctx, Ctx)> {
    if let Some(x) = fv1.intersection(fv2).next() {
        return Err(TypeError::new(
            TypeErrorKind::ContextOverlap,
            format!("variable {x} is needed on both sides of a split"),
        ));
    }
    for x in fv1.iter().chain(fv2) {
        if !ctx.contains(x) {
            return Err(TypeError::new(
                TypeErrorKind::UnboundVar,
                format!("variable {x} is not in the context"),
            ));
        }
    }
    let names = ctx.names();
    if let Some(x) = names.iter().find(|x| !fv1.contains(*x) && !fv2.contains(*x)) {
        return Err(TypeError::new(
            TypeErrorKind::UnusedVar,
            format!("variable {x} is never used"),
        ));
    }
    Ok((ctx.restrict(fv1), ctx.restrict(fv2)))
}

fn mismatch(expected: &QType, found: &QType, what: &str) -> TypeError {
    TypeError::new(
        TypeErrorKind::TypeMismatch,
        format!("{what}: expected {expected}, found {found}"),
    )
}

fn known(t: Option<QType>, what: &str) -> TResult<QType> {
    t.ok_or_else(|| {
        TypeError::new(
            TypeErrorKind::TypeMismatch,
            format!("{what} has no determined type"),
        )
    })
}

/// Splits off the part of `ctx` used by the eliminated term `e`; the rest is
/// handed to the continuation. `cont_fv` are the continuation's free
/// variables minus its binders.
fn split_elim(ctx: &Ctx, e: &QExp, cont_fv: &BTreeSet<Name>) -> TResult<(Ctx, Ctx)> {
    let fv = e.free_vars();
    if let Some(x) = fv.intersection(cont_fv).next() {
        return Err(TypeError::new(
            TypeErrorKind::DuplicateUse,
            format!("variable {x} is used more than once"),
        ));
    }
    if let Some(x) = fv.iter().find(|x| !ctx.contains(x)) {
        return Err(TypeError::new(
            TypeErrorKind::UnboundVar,
            format!("variable {x} is not in the context"),
        ));
    }
    let used = ctx.restrict(&fv);
    let rest_names: BTreeSet<Name> = ctx.names().difference(&fv).cloned().collect();
    Ok((used, ctx.restrict(&rest_names)))
}

fn bind(rest: &Ctx, x: &Name, t: QType) -> TResult<Ctx> {
    if rest.contains(x) {
        return Err(TypeError::new(
            TypeErrorKind::ContextOverlap,
            format!("binder {x} clashes with a variable already in the context"),
        ));
    }
    Ok(rest.clone().with(x, t))
}

fn fv_minus(e: &QExp, binders: &[&Name]) -> BTreeSet<Name> {
    let mut fv = e.free_vars();
    for b in binders {
        fv.remove(*b);
    }
    fv
}

fn sum_parts(t: &QType) -> Option<(&QType, &QType)> {
    match t {
        QType::Oplus(a, b) => Some((a, b)),
        _ => None,
    }
}

/// `None` means the term is an empty measurement, compatible with any type.
fn synth(ctx: &Ctx, e: &QExp) -> TResult<Option<QType>> {
    use TypeErrorKind::*;
    match e {
        QExp::Var(x) => {
            let Some(t) = ctx.get(x) else {
                return Err(TypeError::new(UnboundVar, format!("variable {x} is not in the context")));
            };
            if let Some((y, _)) = ctx.iter().find(|(y, _)| *y != x) {
                return Err(TypeError::new(UnusedVar, format!("variable {y} is never used")));
            }
            Ok(Some(t.clone()))
        }
        QExp::Put(a, i) => {
            if let Some((y, _)) = ctx.iter().next() {
                return Err(TypeError::new(UnusedVar, format!("variable {y} is never used")));
            }
            if *i >= a.card() {
                return Err(TypeError::new(
                    TypeMismatch,
                    format!("index {i} is out of range for {a} ({} elements)", a.card()),
                ));
            }
            Ok(Some(QType::Lower(a.clone())))
        }
        QExp::Pair(a, b) => {
            let fa = a.free_vars();
            let fb = b.free_vars();
            if let Some(x) = fa.intersection(&fb).next() {
                return Err(TypeError::new(DuplicateUse, format!("variable {x} is used more than once")));
            }
            let (ca, cb) = split_elim(ctx, a, &fb)?;
            let ta = known(synth(&ca, a)?, "left component")?;
            let tb = known(synth(&cb, b)?, "right component")?;
            Ok(Some(QType::tensor(ta, tb)))
        }
        QExp::Let(x, a, body) => {
            let (ca, rest) = split_elim(ctx, a, &fv_minus(body, &[x]))?;
            let ta = known(synth(&ca, a)?, "bound term")?;
            synth(&bind(&rest, x, ta)?, body)
        }
        QExp::LetPair(x, y, a, body) => {
            if x == y {
                return Err(TypeError::new(
                    ContextOverlap,
                    format!("both components are bound to {x}"),
                ));
            }
            let (ca, rest) = split_elim(ctx, a, &fv_minus(body, &[x, y]))?;
            let ta = known(synth(&ca, a)?, "pair scrutinee")?;
            let QType::Tensor(t1, t2) = ta else {
                return Err(TypeError::new(
                    TypeMismatch,
                    format!("pair elimination of a term of type {ta}"),
                ));
            };
            let inner = bind(&bind(&rest, x, *t1)?, y, *t2)?;
            synth(&inner, body)
        }
        QExp::Inj(side, sum, a) => {
            let Some((l, r)) = sum_parts(sum) else {
                return Err(TypeError::new(
                    TypeMismatch,
                    format!("injection annotated with non-sum type {sum}"),
                ));
            };
            let want = if *side == Side::Left { l } else { r };
            if let Some(t) = synth(ctx, a)? {
                if &t != want {
                    return Err(mismatch(want, &t, "injected term"));
                }
            }
            Ok(Some(sum.clone()))
        }
        QExp::Case(a, x1, e1, x2, e2) => {
            let mut cont = fv_minus(e1, &[x1]);
            cont.extend(fv_minus(e2, &[x2]));
            let (ca, rest) = split_elim(ctx, a, &cont)?;
            let ta = known(synth(&ca, a)?, "case scrutinee")?;
            let Some((t1, t2)) = sum_parts(&ta) else {
                return Err(TypeError::new(
                    TypeMismatch,
                    format!("case analysis of a term of type {ta}"),
                ));
            };
            let r1 = synth(&bind(&rest, x1, t1.clone())?, e1)?;
            let r2 = synth(&bind(&rest, x2, t2.clone())?, e2)?;
            join_branches([r1, r2])
        }
        QExp::LetBang(a, bs) => {
            let cont: BTreeSet<Name> = bs.iter().flat_map(|b| b.free_vars()).collect();
            let (ca, rest) = split_elim(ctx, a, &cont)?;
            let ta = known(synth(&ca, a)?, "measured term")?;
            let QType::Lower(alpha) = &ta else {
                return Err(TypeError::new(
                    TypeMismatch,
                    format!("measurement of a term of type {ta}, which is not classical"),
                ));
            };
            if bs.len() != alpha.card() {
                return Err(TypeError::new(
                    BranchMismatch,
                    format!("{} branches for {alpha} with {} elements", bs.len(), alpha.card()),
                ));
            }
            let results = bs.iter().map(|b| synth(&rest, b)).collect::<TResult<Vec<_>>>()?;
            join_branches(results)
        }
        QExp::UApp(u, a) => {
            let (src, dst) = u.signature().map_err(|err| {
                TypeError::new(TypeMismatch, format!("ill-formed unitary: {err}"))
            })?;
            match synth(ctx, a)? {
                Some(t) if t != src => Err(mismatch(&src, &t, "unitary argument")),
                _ => Ok(Some(dst)),
            }
        }
    }
}

fn join_branches(results: impl IntoIterator<Item = Option<QType>>) -> TResult<Option<QType>> {
    let mut acc: Option<QType> = None;
    for (i, r) in results.into_iter().enumerate() {
        match (&acc, r) {
            (_, None) => {}
            (None, Some(t)) => acc = Some(t),
            (Some(a), Some(t)) if *a != t => {
                return Err(TypeError::new(
                    TypeErrorKind::BranchMismatch,
                    format!("branch {i} has type {t}, earlier branches have {a}"),
                ))
            }
            _ => {}
        }
    }
    Ok(acc)
}

/// Context and type of the subterm at `path`, following the same splits as
/// [`infer`]. The whole term must type-check.
pub fn subterm_typing(ctx: &Ctx, e: &QExp, path: &[usize]) -> TResult<(Ctx, Option<QType>)> {
    let Some((&i, rest_path)) = path.split_first() else {
        return Ok((ctx.clone(), synth(ctx, e)?));
    };
    let bad = || TypeError::new(TypeErrorKind::TypeMismatch, "path leaves the term");
    let (sub_ctx, sub) = match (e, i) {
        (QExp::Pair(a, b), 0) => (split_elim(ctx, a, &b.free_vars())?.0, &**a),
        (QExp::Pair(a, b), 1) => (split_elim(ctx, a, &b.free_vars())?.1, &**b),
        (QExp::Let(x, a, body), _) => {
            let (ca, rest) = split_elim(ctx, a, &fv_minus(body, &[x]))?;
            if i == 0 {
                (ca, &**a)
            } else {
                let ta = known(synth(&ca, a)?, "bound term")?;
                (bind(&rest, x, ta)?, &**body)
            }
        }
        (QExp::LetPair(x, y, a, body), _) => {
            let (ca, rest) = split_elim(ctx, a, &fv_minus(body, &[x, y]))?;
            if i == 0 {
                (ca, &**a)
            } else {
                let Some(QType::Tensor(t1, t2)) = synth(&ca, a)? else {
                    return Err(bad());
                };
                (bind(&bind(&rest, x, *t1)?, y, *t2)?, &**body)
            }
        }
        (QExp::Inj(_, _, a) | QExp::UApp(_, a), 0) => (ctx.clone(), &**a),
        (QExp::Case(a, x1, e1, x2, e2), _) => {
            let mut cont = fv_minus(e1, &[x1]);
            cont.extend(fv_minus(e2, &[x2]));
            let (ca, rest) = split_elim(ctx, a, &cont)?;
            if i == 0 {
                (ca, &**a)
            } else {
                let Some(QType::Oplus(t1, t2)) = synth(&ca, a)? else {
                    return Err(bad());
                };
                match i {
                    1 => (bind(&rest, x1, *t1)?, &**e1),
                    2 => (bind(&rest, x2, *t2)?, &**e2),
                    _ => return Err(bad()),
                }
            }
        }
        (QExp::LetBang(a, bs), _) => {
            let cont: BTreeSet<Name> = bs.iter().flat_map(|b| b.free_vars()).collect();
            let (ca, rest) = split_elim(ctx, a, &cont)?;
            if i == 0 {
                (ca, &**a)
            } else {
                (rest, bs.get(i - 1).ok_or_else(bad)?)
            }
        }
        _ => return Err(bad()),
    };
    subterm_typing(&sub_ctx, sub, rest_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{FinType, Unitary};
    use TypeErrorKind::*;

    fn q() -> QType {
        QType::qubit()
    }

    fn kind(ctx: &Ctx, e: &QExp) -> TypeErrorKind {
        infer(ctx, e).unwrap_err().kind
    }

    #[test]
    fn documented_examples() {
        let x = Ctx::singleton("x", q());
        assert_eq!(infer(&x, &QExp::var("x")).unwrap(), q());
        let dup = QExp::pair(QExp::var("x"), QExp::var("x"));
        assert_eq!(kind(&x, &dup), DuplicateUse);
        assert_eq!(infer(&Ctx::new(), &QExp::put_bool(true)).unwrap(), q());
    }

    #[test]
    fn split_examples() {
        let c = Ctx::new().with("x", q()).with("y", q());
        let (a, b) = split_context(&c, &["x".into()].into(), &["y".into()].into()).unwrap();
        assert_eq!(a, Ctx::singleton("x", q()));
        assert_eq!(b, Ctx::singleton("y", q()));
        let one = Ctx::singleton("x", q());
        assert!(split_context(&one, &["x".into()].into(), &["x".into()].into()).is_err());
        let c3 = c.clone().with("z", QType::unit());
        let (a, b) = split_context(&c3, &["x".into(), "z".into()].into(), &["y".into()].into()).unwrap();
        assert_eq!(a, Ctx::new().with("x", q()).with("z", QType::unit()));
        assert_eq!(b, Ctx::singleton("y", q()));
    }

    #[test]
    fn linearity_errors() {
        let x = Ctx::singleton("x", q());
        assert_eq!(kind(&x, &QExp::put_bool(false)), UnusedVar);
        assert_eq!(kind(&Ctx::new(), &QExp::var("x")), UnboundVar);
        let discard = QExp::let_("y", QExp::var("x"), QExp::put_unit());
        assert_eq!(kind(&x, &discard), UnusedVar);
        let same = QExp::letpair("a", "a", QExp::pair(QExp::put_bool(true), QExp::var("x")), QExp::var("a"));
        assert_eq!(kind(&x, &same), ContextOverlap);
        let e = QExp::let_("y", QExp::var("x"), QExp::pair(QExp::var("y"), QExp::var("y")));
        assert_eq!(kind(&x, &e), DuplicateUse);
        let shadow = Ctx::new().with("x", q()).with("y", q());
        let e = QExp::let_("y", QExp::var("x"), QExp::var("y"));
        assert_eq!(kind(&shadow, &e), ContextOverlap);
    }

    #[test]
    fn branches_must_agree() {
        let x = Ctx::singleton("x", q());
        let ok = QExp::meas(QExp::var("x"));
        assert_eq!(infer(&x, &ok).unwrap(), q());
        let bad = QExp::letbang(QExp::var("x"), vec![QExp::put_bool(false), QExp::put_unit()]);
        assert_eq!(kind(&x, &bad), BranchMismatch);
        let short = QExp::letbang(QExp::var("x"), vec![QExp::put_bool(false)]);
        assert_eq!(kind(&x, &short), BranchMismatch);
        // both branches must consume the shared context
        let c = Ctx::new().with("x", q()).with("y", q());
        let half = QExp::letbang(QExp::var("x"), vec![QExp::var("y"), QExp::put_bool(true)]);
        assert_eq!(kind(&c, &half), UnusedVar);
    }

    #[test]
    fn sums_and_unitaries() {
        let s = QType::oplus(q(), QType::unit());
        let x = Ctx::singleton("x", q());
        let inj = QExp::inj(Side::Left, s.clone(), QExp::var("x"));
        assert_eq!(infer(&x, &inj).unwrap(), s);
        let wrong = QExp::inj(Side::Right, s.clone(), QExp::var("x"));
        assert_eq!(kind(&x, &wrong), TypeMismatch);
        let c = QExp::case(inj, "a", QExp::var("a"), "b", QExp::letbang(QExp::var("b"), vec![QExp::put_bool(true)]));
        assert_eq!(infer(&x, &c).unwrap(), q());
        let u = QExp::uapp(Unitary::not(), QExp::var("x"));
        assert_eq!(infer(&x, &u).unwrap(), q());
        let bad = QExp::uapp(Unitary::named("CNOT").unwrap(), QExp::var("x"));
        assert_eq!(kind(&x, &bad), TypeMismatch);
    }

    #[test]
    fn empty_measurement_takes_any_type() {
        let v = Ctx::singleton("v", QType::Lower(FinType::Void)).with("y", q());
        let e = QExp::letbang(QExp::var("v"), vec![]);
        assert!(infer(&v, &e).is_err());
        assert!(check(&v, &e, &q()).is_ok());
    }

    #[test]
    fn subterm_contexts() {
        let c = Ctx::new().with("x", q()).with("y", q());
        let e = QExp::let_("z", QExp::var("x"), QExp::pair(QExp::var("z"), QExp::var("y")));
        let (ctx, t) = subterm_typing(&c, &e, &[1, 0]).unwrap();
        assert_eq!(ctx, Ctx::singleton("z", q()));
        assert_eq!(t, Some(q()));
        let (ctx, _) = subterm_typing(&c, &e, &[1]).unwrap();
        assert_eq!(ctx, Ctx::new().with("z", q()).with("y", q()));
    }
}
