//! Elaborating basis values into expressions: the wire context a value
//! binds, initialisation from a value, and pattern matching on all values.

use crate::syntax::{Assignment, Ctx, Name, NameSupply, OpenType, QExp, QType, Side};

use super::basis::{matches_shape, BasisValue};
use super::OpenTypeError;

/// The wires a variable-leaved basis value binds, each at the point type of
/// its variable's assignment.
pub fn gamma(ty: &OpenType, b: &BasisValue<Name>, m: &Assignment) -> Result<Ctx, OpenTypeError> {
    let mut ctx = Ctx::new();
    collect_gamma(ty, b, m, &mut ctx)?;
    Ok(ctx)
}

fn collect_gamma(ty: &OpenType, b: &BasisValue<Name>, m: &Assignment, ctx: &mut Ctx) -> Result<(), OpenTypeError> {
    let mismatch = || OpenTypeError::Shape { ty: ty.clone(), value: b.to_string() };
    match (ty, b) {
        (OpenType::Var(x), BasisValue::Leaf(w)) => {
            if ctx.insert(w.clone(), QType::Lower(m.get(x)?.clone())).is_some() {
                return Err(OpenTypeError::DuplicateWire(w.clone()));
            }
        }
        (OpenType::Lower(a), BasisValue::Elem(i)) if *i < a.card() => {}
        (OpenType::Tensor(s, t), BasisValue::Pair(bs, bt)) => {
            collect_gamma(s, bs, m, ctx)?;
            collect_gamma(t, bt, m, ctx)?;
        }
        (OpenType::Oplus(s, _), BasisValue::Inl(bs)) => collect_gamma(s, bs, m, ctx)?,
        (OpenType::Oplus(_, t), BasisValue::Inr(bt)) => collect_gamma(t, bt, m, ctx)?,
        _ => return Err(mismatch()),
    }
    Ok(())
}

/// Build the expression preparing basis value `b`, whose variable leaves are
/// arbitrary expressions. Injections are annotated with the instantiated sum.
pub fn partial_init_terms(ty: &OpenType, b: &BasisValue<QExp>, m: &Assignment) -> Result<QExp, OpenTypeError> {
    let mismatch = || OpenTypeError::Shape { ty: ty.clone(), value: b.shape_string() };
    Ok(match (ty, b) {
        (OpenType::Var(_), BasisValue::Leaf(e)) => e.clone(),
        (OpenType::Lower(a), BasisValue::Elem(i)) if *i < a.card() => QExp::put(a.clone(), *i),
        (OpenType::Tensor(s, t), BasisValue::Pair(bs, bt)) => {
            QExp::pair(partial_init_terms(s, bs, m)?, partial_init_terms(t, bt, m)?)
        }
        (OpenType::Oplus(s, _), BasisValue::Inl(bs)) => {
            QExp::inj(Side::Left, ty.instantiate(m)?, partial_init_terms(s, bs, m)?)
        }
        (OpenType::Oplus(_, t), BasisValue::Inr(bt)) => {
            QExp::inj(Side::Right, ty.instantiate(m)?, partial_init_terms(t, bt, m)?)
        }
        _ => return Err(mismatch()),
    })
}

/// [`partial_init_terms`] with every leaf a wire.
pub fn partial_init(ty: &OpenType, b: &BasisValue<Name>, m: &Assignment) -> Result<QExp, OpenTypeError> {
    partial_init_terms(ty, &b.map_leaves(&mut |w| QExp::var(w)), m)
}

/// Continuation for [`partial_match`]: the branch for one basis value.
pub type Branches<'a> = dyn Fn(&BasisValue<Name>, &mut NameSupply) -> Result<QExp, OpenTypeError> + 'a;

/// Match `scrutinee` against every basis value of `ty`, producing the branch
/// chosen by `branches`. Wire names are drawn from `names`, which should
/// already avoid every name in the scrutinee and in the branches.
// `m` only travels down the recursion, but belongs in the signature
// alongside `partial_init` and `gamma`.
#[allow(clippy::only_used_in_recursion)]
pub fn partial_match(
    ty: &OpenType,
    scrutinee: QExp,
    branches: &Branches<'_>,
    m: &Assignment,
    names: &mut NameSupply,
) -> Result<QExp, OpenTypeError> {
    match ty {
        OpenType::Var(_) => {
            let w = names.fresh("w");
            let body = branches(&BasisValue::Leaf(w.clone()), names)?;
            Ok(body.subst1(&w, &scrutinee))
        }
        OpenType::Lower(a) => {
            let arms = (0..a.card())
                .map(|i| branches(&BasisValue::Elem(i), names))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(QExp::letbang(scrutinee, arms))
        }
        OpenType::Tensor(s, t) => {
            let w1 = names.fresh("w");
            let w2 = names.fresh("w");
            let inner = partial_match(
                s,
                QExp::var(&w1),
                &|b1, names| {
                    partial_match(
                        t,
                        QExp::var(&w2),
                        &|b2, names| branches(&BasisValue::pair(b1.clone(), b2.clone()), names),
                        m,
                        names,
                    )
                },
                m,
                names,
            )?;
            Ok(QExp::letpair(&w1, &w2, scrutinee, inner))
        }
        OpenType::Oplus(s, t) => {
            let w1 = names.fresh("w");
            let left = partial_match(s, QExp::var(&w1), &|b, names| branches(&BasisValue::inl(b.clone()), names), m, names)?;
            let w2 = names.fresh("w");
            let right = partial_match(t, QExp::var(&w2), &|b, names| branches(&BasisValue::inr(b.clone()), names), m, names)?;
            Ok(QExp::case(scrutinee, &w1, left, &w2, right))
        }
    }
}

/// Check a value against a type before elaborating it.
pub fn require_shape<L>(ty: &OpenType, b: &BasisValue<L>) -> Result<(), OpenTypeError> {
    if matches_shape(ty, b) {
        Ok(())
    } else {
        Err(OpenTypeError::Shape { ty: ty.clone(), value: b.shape_string() })
    }
}
