//! Translations between expressions over binary types and the algebraic
//! calculus.

use thiserror::Error;

use crate::syntax::{Ctx, FinType, Name, NameSupply, QExp, QType, Unitary};
use crate::typecheck::{infer, TypeError};

use super::{alg_subst, AlgTerm, Wires};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TranslateError {
    #[error("type {0} is not binary")]
    NotBinary(QType),
    #[error("sum types have no algebraic counterpart")]
    SumConstructor,
    #[error("only classical booleans can be put, found {0}")]
    NonBooleanPut(FinType),
    #[error("term calls continuation {found}, but only {expected} is allowed")]
    ForeignContinuation { expected: Name, found: Name },
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn wires_to_qexp(w: &Wires) -> QExp {
    match w {
        Wires::One(a) => QExp::var(a),
        Wires::Tuple(ws) => {
            let mut parts: Vec<QExp> = ws.iter().map(wires_to_qexp).collect();
            let mut acc = parts.pop().expect("tuples are non-empty");
            while let Some(p) = parts.pop() {
                acc = QExp::pair(p, acc);
            }
            acc
        }
    }
}

/// Read a term with the single continuation `k` as an expression. Fresh
/// qubits start as `put false`, measurement is a two-way `letbang`, and a
/// unitary step is a `let` of the application.
pub fn to_qexp(t: &AlgTerm, k: &str) -> Result<QExp, TranslateError> {
    Ok(match t {
        AlgTerm::Apply(j, args) if j == k => wires_to_qexp(&Wires::tuple(args.clone())),
        AlgTerm::Apply(j, _) => {
            return Err(TranslateError::ForeignContinuation { expected: k.to_string(), found: j.clone() })
        }
        AlgTerm::SplitPair(w, a1, a2, body) => QExp::letpair(a1, a2, wires_to_qexp(w), to_qexp(body, k)?),
        AlgTerm::New(a, body) => QExp::let_(a, QExp::put_bool(false), to_qexp(body, k)?),
        AlgTerm::Meas(w, t0, t1) => QExp::letbang(wires_to_qexp(w), vec![to_qexp(t0, k)?, to_qexp(t1, k)?]),
        AlgTerm::UStep(u, w, b, body) => QExp::let_(b, QExp::uapp(u.clone(), wires_to_qexp(w)), to_qexp(body, k)?),
    })
}

fn binary(t: QType) -> Result<QType, TranslateError> {
    if t.is_binary() {
        Ok(t)
    } else {
        Err(TranslateError::NotBinary(t))
    }
}

/// Translate a well-typed sum-free expression over binary types into a term
/// that passes its result to the continuation `k`.
pub fn to_alg(ctx: &Ctx, e: &QExp, k: &str) -> Result<AlgTerm, TranslateError> {
    for (_, t) in ctx.iter() {
        binary(t.clone())?;
    }
    binary(infer(ctx, e)?)?;
    let mut used = e.all_names();
    used.extend(ctx.names());
    used.insert(k.to_string());
    let mut names = NameSupply::avoiding(used);
    go(ctx, e, k, &mut names)
}

/// The type of a subterm, checked to be binary.
fn type_of(ctx: &Ctx, e: &QExp) -> Result<QType, TranslateError> {
    binary(infer(&ctx.restrict(&e.free_vars()), e)?)
}

fn go(ctx: &Ctx, e: &QExp, k: &str, names: &mut NameSupply) -> Result<AlgTerm, TranslateError> {
    let local = |e: &QExp| ctx.restrict(&e.free_vars());
    // ⟨inner⟩ with its result bound to `a` in `rest`
    let then = |inner: &QExp, a: &Name, rest: AlgTerm, names: &mut NameSupply| -> Result<AlgTerm, TranslateError> {
        let j = names.fresh("k");
        let first = go(&local(inner), inner, &j, names)?;
        Ok(alg_subst(&first, &j, a, &rest))
    };
    Ok(match e {
        QExp::Var(x) => AlgTerm::Apply(k.to_string(), vec![Wires::One(x.clone())]),
        QExp::Let(x, e1, e2) => {
            let ty = type_of(ctx, e1)?;
            let body = go(&local(e2).with(x, ty), e2, k, names)?;
            then(e1, x, body, names)?
        }
        QExp::Pair(e1, e2) => {
            let (x1, x2) = (names.fresh("x"), names.fresh("x"));
            let out = AlgTerm::Apply(k.to_string(), vec![Wires::One(x1.clone()), Wires::One(x2.clone())]);
            let second = then(e2, &x2, out, names)?;
            then(e1, &x1, second, names)?
        }
        QExp::LetPair(x1, x2, e1, e2) => {
            let QType::Tensor(s1, s2) = type_of(ctx, e1)? else { unreachable!("checked by infer") };
            let body = go(&local(e2).with(x1, *s1).with(x2, *s2), e2, k, names)?;
            let w = names.fresh("w");
            then(e1, &w, AlgTerm::SplitPair(Wires::One(w.clone()), x1.clone(), x2.clone(), Box::new(body)), names)?
        }
        QExp::Put(FinType::Bool, b) => {
            let a = names.fresh("a");
            let out = AlgTerm::apply(k, &[&a]);
            let body = if *b == 0 { out } else { AlgTerm::ustep_in_place(Unitary::not(), &a, out) };
            AlgTerm::new_qubit(&a, body)
        }
        QExp::Put(ty, _) => return Err(TranslateError::NonBooleanPut(ty.clone())),
        QExp::LetBang(e1, fs) => {
            let ty = type_of(ctx, e1)?;
            if ty != QType::qubit() || fs.len() != 2 {
                return Err(TranslateError::NotBinary(ty));
            }
            let rest = local(&QExp::letbang(QExp::put_bool(false), fs.clone()));
            let t0 = go(&rest.restrict(&fs[0].free_vars()), &fs[0], k, names)?;
            let t1 = go(&rest.restrict(&fs[1].free_vars()), &fs[1], k, names)?;
            let q = names.fresh("q");
            then(e1, &q, AlgTerm::Meas(Wires::One(q.clone()), Box::new(t0), Box::new(t1)), names)?
        }
        QExp::UApp(u, e1) => {
            let (src, dst) = u.signature().map_err(|_| TranslateError::SumConstructor)?;
            binary(src)?;
            binary(dst)?;
            let (a, b) = (names.fresh("a"), names.fresh("b"));
            then(e1, &a, AlgTerm::ustep(u.clone(), Wires::One(a.clone()), &b, AlgTerm::apply(k, &[&b])), names)?
        }
        QExp::Inj(..) | QExp::Case(..) => return Err(TranslateError::SumConstructor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::check_alg;
    use crate::linalg::DEFAULT_TOL;
    use crate::semantics::equiv_check;
    use crate::syntax::Side;

    fn q() -> QType {
        QType::qubit()
    }

    #[test]
    fn to_qexp_clauses() {
        assert_eq!(
            to_qexp(&AlgTerm::apply("x", &["a1", "a2"]), "x").unwrap(),
            QExp::pair(QExp::var("a1"), QExp::var("a2"))
        );
        assert_eq!(
            to_qexp(&AlgTerm::new_qubit("a", AlgTerm::apply("x", &["a"])), "x").unwrap(),
            QExp::let_("a", QExp::put_bool(false), QExp::var("a"))
        );
        let m = AlgTerm::meas("a", AlgTerm::apply("x", &["b"]), AlgTerm::apply("x", &["c"]));
        assert_eq!(to_qexp(&m, "x").unwrap(), QExp::letbang(QExp::var("a"), vec![QExp::var("b"), QExp::var("c")]));
        assert!(matches!(
            to_qexp(&AlgTerm::apply("y", &["a"]), "x"),
            Err(TranslateError::ForeignContinuation { .. })
        ));
    }

    #[test]
    fn to_alg_clauses() {
        let ctx = Ctx::singleton("x", q());
        assert_eq!(to_alg(&ctx, &QExp::var("x"), "y").unwrap(), AlgTerm::apply("y", &["x"]));
        let zero = to_alg(&Ctx::new(), &QExp::put_bool(false), "x").unwrap();
        assert!(zero.alpha_eq(&AlgTerm::new_qubit("a", AlgTerm::apply("x", &["a"]))));
        let one = to_alg(&Ctx::new(), &QExp::put_bool(true), "x").unwrap();
        let want = AlgTerm::new_qubit("a", AlgTerm::ustep_in_place(Unitary::not(), "a", AlgTerm::apply("x", &["a"])));
        assert!(one.alpha_eq(&want), "{one}");
    }

    #[test]
    fn sums_and_wide_types_are_rejected() {
        let ctx = Ctx::singleton("x", q());
        let inj = QExp::inj(Side::Left, QType::oplus(q(), q()), QExp::var("x"));
        assert_eq!(to_alg(&ctx, &inj, "y"), Err(TranslateError::NotBinary(QType::oplus(q(), q()))));
        assert_eq!(to_alg(&Ctx::new(), &QExp::put(FinType::Fin(3), 0), "y"), Err(TranslateError::NotBinary(QType::Lower(FinType::Fin(3)))));
    }

    #[test]
    fn round_trip_of_a_small_program() {
        // let (a, b) := p in letbang (H # a) [ (b, put false), (X # b, put true) ]
        let h = Unitary::named("H").unwrap();
        let ctx = Ctx::singleton("p", QType::tensor(q(), q()));
        let e = QExp::letpair(
            "a",
            "b",
            QExp::var("p"),
            QExp::letbang(
                QExp::uapp(h, QExp::var("a")),
                vec![
                    QExp::pair(QExp::var("b"), QExp::put_bool(false)),
                    QExp::pair(QExp::uapp(Unitary::not(), QExp::var("b")), QExp::put_bool(true)),
                ],
            ),
        );
        let t = to_alg(&ctx, &e, "y").unwrap();
        let gamma = Ctx::singleton("y", QType::tensor(q(), q()));
        check_alg(&gamma, &ctx, &t).unwrap();
        let back = to_qexp(&t, "y").unwrap();
        assert!(equiv_check(&e, &back, &ctx, DEFAULT_TOL).unwrap(), "{back}");
    }
}
