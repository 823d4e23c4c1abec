//! Recognising partial initialisations and partial matches, and rewriting a
//! lifted equivalence applied to them.

use std::collections::BTreeMap;

use crate::opentype::{apply_equiv, partial_init_terms, partial_match, BasisValue, OpenTypeError};
use crate::syntax::{Assignment, Equiv, Name, NameSupply, OpenType, QExp, Side, Unitary};

/// The equivalence behind a lifted unitary, inverted for an adjoint.
fn lifted(u: &Unitary) -> Option<(Equiv, &Assignment)> {
    match u {
        Unitary::FromEquiv(f, m) => Some((f.clone(), m)),
        Unitary::Adjoint(inner) => match inner.as_ref() {
            Unitary::FromEquiv(f, m) => Some((Equiv::symm(f.clone()), m)),
            _ => None,
        },
        _ => None,
    }
}

/// Read `e` as `init_ty b`, with whole subterms at the variable leaves.
fn as_init(ty: &OpenType, e: &QExp) -> Option<BasisValue<QExp>> {
    Some(match (ty, e) {
        (OpenType::Var(_), _) => BasisValue::Leaf(e.clone()),
        (OpenType::Lower(a), QExp::Put(b, i)) if a == b => BasisValue::Elem(*i),
        (OpenType::Tensor(s, t), QExp::Pair(x, y)) => BasisValue::pair(as_init(s, x)?, as_init(t, y)?),
        (OpenType::Oplus(s, _), QExp::Inj(Side::Left, _, x)) => BasisValue::inl(as_init(s, x)?),
        (OpenType::Oplus(_, t), QExp::Inj(Side::Right, _, x)) => BasisValue::inr(as_init(t, x)?),
        _ => return None,
    })
}

pub(super) fn intro(t: &QExp) -> Option<QExp> {
    let QExp::UApp(u, arg) = t else { return None };
    let (f, m) = lifted(u)?;
    let (src, dst) = f.endpoints().ok()?;
    let b = as_init(&src, arg)?;
    let image = apply_equiv(&f, &b).ok()?;
    partial_init_terms(&dst, &image, m).ok()
}

/// One branch of a recognised match: the basis value with its wire names,
/// and the body that uses them.
type Arm = (BasisValue<Name>, QExp);

/// Read `t` as `match_ty scrutinee with bs`, returning the arms of `bs`.
fn as_match(ty: &OpenType, t: &QExp, scrutinee: &QExp, names: &mut NameSupply) -> Option<Vec<Arm>> {
    match ty {
        OpenType::Var(_) => match scrutinee {
            QExp::Var(w) => Some(vec![(BasisValue::Leaf(w.clone()), t.clone())]),
            _ if t.alpha_eq(scrutinee) => {
                let w = names.fresh("w");
                Some(vec![(BasisValue::Leaf(w.clone()), QExp::var(&w))])
            }
            _ => None,
        },
        OpenType::Lower(a) => match t {
            QExp::LetBang(s, fs) if s.alpha_eq(scrutinee) && fs.len() == a.card() => {
                Some(fs.iter().enumerate().map(|(i, f)| (BasisValue::Elem(i), f.clone())).collect())
            }
            _ => None,
        },
        OpenType::Tensor(a, b) => match t {
            QExp::LetPair(w1, w2, s, inner) if w1 != w2 && s.alpha_eq(scrutinee) => {
                let mut arms = Vec::new();
                for (left, body) in as_match(a, inner, &QExp::var(w1), names)? {
                    for (right, body) in as_match(b, &body, &QExp::var(w2), names)? {
                        arms.push((BasisValue::pair(left.clone(), right), body));
                    }
                }
                Some(arms)
            }
            _ => None,
        },
        OpenType::Oplus(a, b) => match t {
            QExp::Case(s, w1, e1, w2, e2) if s.alpha_eq(scrutinee) => {
                let mut arms: Vec<Arm> = as_match(a, e1, &QExp::var(w1), names)?
                    .into_iter()
                    .map(|(v, body)| (BasisValue::inl(v), body))
                    .collect();
                arms.extend(as_match(b, e2, &QExp::var(w2), names)?.into_iter().map(|(v, body)| (BasisValue::inr(v), body)));
                Some(arms)
            }
            _ => None,
        },
    }
}

/// The scrutinee a match on `t` would have at its root.
fn root_scrutinee(t: &QExp) -> Vec<&QExp> {
    let mut out = vec![t];
    match t {
        QExp::LetBang(s, _) | QExp::LetPair(_, _, s, _) | QExp::Case(s, ..) => out.push(s),
        _ => {}
    }
    out
}

fn distinct_leaves(v: &BasisValue<Name>) -> bool {
    let leaves = v.leaves();
    let mut seen = std::collections::BTreeSet::new();
    leaves.into_iter().all(|l| seen.insert(l))
}

pub(super) fn elim(t: &QExp, names: &mut NameSupply) -> Option<QExp> {
    for scrutinee in root_scrutinee(t) {
        let QExp::UApp(u, e) = scrutinee else { continue };
        let Some((f, m)) = lifted(u) else { continue };
        let Ok((src, dst)) = f.endpoints() else { continue };
        // a bare application is only a match on a variable type
        if std::ptr::eq(scrutinee, t) && !matches!(dst, OpenType::Var(_)) {
            continue;
        }
        let Some(arms) = as_match(&dst, t, scrutinee, names) else { continue };
        if !arms.iter().all(|(v, _)| distinct_leaves(v)) {
            continue;
        }
        let branches = |b: &BasisValue<Name>, _: &mut NameSupply| -> Result<QExp, OpenTypeError> {
            let target = apply_equiv(&f, b)?;
            let shape = target.shape();
            let (key, body) = arms.iter().find(|(k, _)| k.shape() == shape).ok_or_else(|| OpenTypeError::Shape {
                ty: dst.clone(),
                value: target.shape_string(),
            })?;
            let renaming: BTreeMap<Name, QExp> = key
                .leaves()
                .into_iter()
                .zip(target.leaves())
                .map(|(old, new)| (old.clone(), QExp::var(new)))
                .collect();
            Ok(body.subst(&renaming))
        };
        if let Ok(out) = partial_match(&src, (**e).clone(), &branches, m, names) {
            return Some(out);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;
    use crate::semantics::equiv_check;
    use crate::syntax::unitary::{bool_distr_equiv, not_equiv};
    use crate::syntax::{Ctx, FinType, QType};

    fn names_for(t: &QExp) -> NameSupply {
        NameSupply::avoiding(t.all_names())
    }

    #[test]
    fn init_recognition() {
        let ty = OpenType::tensor(OpenType::lower(FinType::Bool), OpenType::var("X"));
        let e = QExp::pair(QExp::put_bool(true), QExp::var("q"));
        assert_eq!(as_init(&ty, &e), Some(BasisValue::pair(BasisValue::Elem(1), BasisValue::Leaf(QExp::var("q")))));
        assert_eq!(as_init(&ty, &QExp::var("p")), None);
    }

    #[test]
    fn distr_intro_routes_on_the_control() {
        let d = Unitary::from_equiv(bool_distr_equiv("X"), Assignment::new().with("X", FinType::Bool));
        let q = QType::qubit();
        let ctx = Ctx::singleton("q", q.clone());
        for b in [false, true] {
            let t = QExp::uapp(d.clone(), QExp::pair(QExp::put_bool(b), QExp::var("q")));
            let side = if b { Side::Right } else { Side::Left };
            let want = QExp::inj(side, QType::oplus(q.clone(), q.clone()), QExp::var("q"));
            let out = intro(&t).unwrap();
            assert_eq!(out, want);
            assert!(equiv_check(&t, &out, &ctx, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn not_elim_swaps_branches() {
        let x = Unitary::from_equiv(not_equiv(), Assignment::new());
        let ctx = Ctx::singleton("q", QType::qubit()).with("r", QType::qubit());
        let h = Unitary::named("H").unwrap();
        let t = QExp::letbang(QExp::uapp(x, QExp::var("q")), vec![QExp::var("r"), QExp::uapp(h.clone(), QExp::var("r"))]);
        let out = elim(&t, &mut names_for(&t)).unwrap();
        assert_eq!(out, QExp::letbang(QExp::var("q"), vec![QExp::uapp(h, QExp::var("r")), QExp::var("r")]));
        assert!(equiv_check(&t, &out, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn distr_elim_measures_the_control() {
        let d = Unitary::from_equiv(bool_distr_equiv("X"), Assignment::new().with("X", FinType::Bool));
        let q = QType::qubit();
        let ctx = Ctx::singleton("p", QType::tensor(q.clone(), q.clone()));
        let h = Unitary::named("H").unwrap();
        let t = QExp::case(QExp::uapp(d, QExp::var("p")), "a", QExp::uapp(h.clone(), QExp::var("a")), "b", QExp::var("b"));
        let out = elim(&t, &mut names_for(&t)).unwrap();
        let want = QExp::letpair(
            "c",
            "y",
            QExp::var("p"),
            QExp::letbang(QExp::var("c"), vec![QExp::uapp(h, QExp::var("y")), QExp::var("y")]),
        );
        assert!(out.alpha_eq(&want), "{out}");
        assert!(equiv_check(&t, &out, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn elim_through_an_adjoint() {
        let d = Unitary::from_equiv(bool_distr_equiv("X"), Assignment::new().with("X", FinType::Bool));
        let q = QType::qubit();
        let sum = QType::oplus(q.clone(), q.clone());
        let ctx = Ctx::singleton("s", sum);
        let body = QExp::letbang(QExp::var("c"), vec![QExp::var("y"), QExp::var("y")]);
        let t = QExp::letpair("c", "y", QExp::uapp(Unitary::adjoint(d), QExp::var("s")), body);
        let out = elim(&t, &mut names_for(&t)).unwrap();
        assert!(matches!(&out, QExp::Case(..)), "{out}");
        assert!(equiv_check(&t, &out, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn swap_elim_renames_the_pair() {
        let xy = OpenType::tensor(OpenType::var("X"), OpenType::var("Y"));
        let f = Equiv::SwapTensor(OpenType::var("X"), OpenType::var("Y"));
        let m = Assignment::new().with("X", FinType::Bool).with("Y", FinType::Fin(3));
        let swap = Unitary::from_equiv(f, m.clone());
        let p = xy.instantiate(&m).unwrap();
        let ctx = Ctx::singleton("p", p);
        let h = Unitary::named("H").unwrap();
        let body = QExp::pair(QExp::uapp(h.clone(), QExp::var("x")), QExp::var("y"));
        let t = QExp::letpair("y", "x", QExp::uapp(swap, QExp::var("p")), body.clone());
        let out = elim(&t, &mut names_for(&t)).unwrap();
        assert!(out.alpha_eq(&QExp::letpair("x", "y", QExp::var("p"), body)), "{out}");
        assert!(equiv_check(&t, &out, &ctx, DEFAULT_TOL).unwrap());
    }
}
