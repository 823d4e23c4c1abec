//! Each rig generator, lifted to a unitary under a random assignment, against
//! the initialisations and matches it should commute with. Right-hand sides
//! are written out by hand; indices into finite types go through
//! `FinType::index_of` rather than arithmetic on the enumeration.

use rand::Rng;

use crate::gen::TermGen;
use crate::opentype::basis_card;
use crate::syntax::{Assignment, Ctx, Equiv, FinType, FinValue, OpenType, QExp, QType, Side, Unitary};

use super::{Case, Instance};

const SUB: usize = 2;
const DIM: usize = 4;
const VAR_BUDGET: usize = 8;
const CTX_BUDGET: usize = 4;

/// Three type variables under a random assignment.
struct Vars {
    m: Assignment,
}

impl Vars {
    /// Keeps the product of the three cardinalities at most `VAR_BUDGET`, so
    /// that a body binding all three stays small.
    fn new(g: &mut TermGen) -> Self {
        let names = ["X".to_string(), "Y".to_string(), "Z".to_string()];
        loop {
            let m = g.assignment(names.iter());
            let product: usize = names.iter().map(|x| m.get(x).expect("assigned").card()).product();
            if product <= VAR_BUDGET {
                return Vars { m };
            }
        }
    }

    fn ty(&self, x: &str) -> QType {
        QType::Lower(self.m.get(x).expect("assigned").clone())
    }

    fn lift(&self, f: Equiv) -> Unitary {
        Unitary::from_equiv(f, self.m.clone())
    }
}

fn var(x: &str) -> OpenType {
    OpenType::var(x)
}

fn frame(g: &mut TermGen) -> (Ctx, QType) {
    loop {
        let n = g.rng().gen_range(0..=2);
        let ctx = g.ctx(n);
        if ctx.dim() <= CTX_BUDGET {
            return (ctx, g.qtype(DIM));
        }
    }
}

fn sub(g: &mut TermGen, ctx: &Ctx, ty: &QType) -> QExp {
    g.term(ctx, ty, SUB)
}

fn inj(side: Side, a: QType, b: QType, e: QExp) -> QExp {
    QExp::inj(side, QType::oplus(a, b), e)
}

fn index(ty: &FinType, v: &FinValue) -> usize {
    ty.index_of(v).expect("value of this type")
}

fn value(ty: &FinType, i: usize) -> FinValue {
    ty.value_at(i).expect("index in range")
}

/// Two finite types for the `Lower` generators.
fn two_fin(g: &mut TermGen) -> (FinType, FinType) {
    (g.fin_type(), g.fin_type())
}

/// Types whose basis is empty under every assignment tried.
fn empty_basis(ty: OpenType) -> Result<(), String> {
    for a in [FinType::Unit, FinType::Bool, FinType::Fin(3)] {
        let m = Assignment::new().with("X", a);
        let n = basis_card(&ty, &m).map_err(|e| e.to_string())?;
        if n != 0 {
            return Err(format!("{ty} has {n} basis values"));
        }
    }
    Ok(())
}

pub(super) fn generators() -> Vec<Case> {
    use Side::{Left, Right};
    vec![
        Case::random("SWAP⊗ on a pair", |g| {
            let v = Vars::new(g);
            let (ctx, _) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (e1, e2) = (sub(g, &c1, &v.ty("X")), sub(g, &c2, &v.ty("Y")));
            let lhs = QExp::uapp(v.lift(Equiv::SwapTensor(var("X"), var("Y"))), QExp::pair(e1.clone(), e2.clone()));
            Ok(Instance::new(ctx, lhs, QExp::pair(e2, e1)))
        }),
        Case::random("SWAP⊕ on ι1", |g| swap_oplus(g, Left)),
        Case::random("SWAP⊕ on ι2", |g| swap_oplus(g, Right)),
        Case::random("ASSOC⊗ on a triple", |g| {
            let v = Vars::new(g);
            let (ctx, _) = frame(g);
            let (c1, rest) = g.split_ctx(&ctx);
            let (c2, c3) = g.split_ctx(&rest);
            let e1 = sub(g, &c1, &v.ty("X"));
            let e2 = sub(g, &c2, &v.ty("Y"));
            let e3 = sub(g, &c3, &v.ty("Z"));
            let u = v.lift(Equiv::AssocTensor(var("X"), var("Y"), var("Z")));
            let lhs = QExp::uapp(u, QExp::pair(e1.clone(), QExp::pair(e2.clone(), e3.clone())));
            Ok(Instance::new(ctx, lhs, QExp::pair(QExp::pair(e1, e2), e3)))
        }),
        Case::random("ASSOC⊕ on ι1", |g| assoc_oplus(g, 0)),
        Case::random("ASSOC⊕ on ι2 ι1", |g| assoc_oplus(g, 1)),
        Case::random("ASSOC⊕ on ι2 ι2", |g| assoc_oplus(g, 2)),
        Case::random("DISTR on a pair", |g| {
            let v = Vars::new(g);
            let (ctx, _) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (x, y, z) = (v.ty("X"), v.ty("Y"), v.ty("Z"));
            let which = if g.rng().gen_bool(0.5) { Left } else { Right };
            let e1 = sub(g, &c1, &x);
            let e2 = sub(g, &c2, if which == Left { &y } else { &z });
            let u = v.lift(Equiv::Distr(var("X"), var("Y"), var("Z")));
            let lhs = QExp::uapp(u, QExp::pair(e1.clone(), inj(which, y.clone(), z.clone(), e2.clone())));
            let xy = QType::tensor(x.clone(), y);
            let xz = QType::tensor(x, z);
            Ok(Instance::new(ctx, lhs, inj(which, xy, xz, QExp::pair(e1, e2))))
        }),
        Case::random("Lower⊗ on two puts", |g| {
            let (a, b) = two_fin(g);
            let (i, j) = (g.rng().gen_range(0..a.card()), g.rng().gen_range(0..b.card()));
            let lhs = QExp::uapp(
                Unitary::from_equiv(Equiv::LowerTensor(a.clone(), b.clone()), Assignment::new()),
                QExp::pair(QExp::put(a.clone(), i), QExp::put(b.clone(), j)),
            );
            let ab = FinType::prod(a.clone(), b.clone());
            let k = index(&ab, &FinValue::Pair(Box::new(value(&a, i)), Box::new(value(&b, j))));
            Ok(Instance::new(Ctx::new(), lhs, QExp::put(ab, k)))
        }),
        Case::random("Lower⊕ on an injected put", |g| {
            let (a, b) = two_fin(g);
            let left = g.rng().gen_bool(0.5);
            let (part, which) = if left { (&a, Left) } else { (&b, Right) };
            let i = g.rng().gen_range(0..part.card());
            let arg = inj(which, QType::Lower(a.clone()), QType::Lower(b.clone()), QExp::put(part.clone(), i));
            let u = Unitary::from_equiv(Equiv::LowerOplus(a.clone(), b.clone()), Assignment::new());
            let ab = FinType::sum(a.clone(), b.clone());
            let tagged = if left { FinValue::Inl(Box::new(value(&a, i))) } else { FinValue::Inr(Box::new(value(&b, i))) };
            Ok(Instance::new(Ctx::new(), QExp::uapp(u, arg), QExp::put(ab.clone(), index(&ab, &tagged))))
        }),
        Case::random("lunit⊗ on a pair", |g| {
            let v = Vars::new(g);
            let (ctx, _) = frame(g);
            let e = sub(g, &ctx, &v.ty("X"));
            let lhs = QExp::uapp(v.lift(Equiv::LUnitTensor(var("X"))), QExp::pair(QExp::put_unit(), e.clone()));
            Ok(Instance::new(ctx, lhs, e))
        }),
        Case::vacuous("lunit⊕ on ι1 of a void put", || empty_basis(OpenType::Lower(FinType::Void))),
        Case::random("lunit⊕ on ι2", |g| {
            let v = Vars::new(g);
            let (ctx, _) = frame(g);
            let x = v.ty("X");
            let e = sub(g, &ctx, &x);
            let arg = inj(Right, QType::Lower(FinType::Void), x, e.clone());
            Ok(Instance::new(ctx, QExp::uapp(v.lift(Equiv::LUnitOplus(var("X"))), arg), e))
        }),
        Case::vacuous("LZERO on a void put", || empty_basis(OpenType::tensor(OpenType::Lower(FinType::Void), var("X")))),
        Case::random("match through SWAP⊗", |g| {
            let v = Vars::new(g);
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (x, y) = (v.ty("X"), v.ty("Y"));
            let e = sub(g, &c1, &QType::tensor(x.clone(), y.clone()));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let body = sub(g, &c2.with(&x1, x).with(&x2, y), &ty);
            let u = v.lift(Equiv::SwapTensor(var("X"), var("Y")));
            let lhs = QExp::letpair(&x2, &x1, QExp::uapp(u, e.clone()), body.clone());
            Ok(Instance::new(ctx, lhs, QExp::letpair(&x1, &x2, e, body)))
        }),
        Case::random("match through SWAP⊕", |g| {
            let v = Vars::new(g);
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (x, y) = (v.ty("X"), v.ty("Y"));
            let e = sub(g, &c1, &QType::oplus(x.clone(), y.clone()));
            let (x0, x1) = (g.fresh("x"), g.fresh("x"));
            // after the swap the left summand is Y
            let e0 = sub(g, &c2.clone().with(&x0, y), &ty);
            let e1 = sub(g, &c2.with(&x1, x), &ty);
            let u = v.lift(Equiv::SwapOplus(var("X"), var("Y")));
            let lhs = QExp::case(QExp::uapp(u, e.clone()), &x0, e0.clone(), &x1, e1.clone());
            Ok(Instance::new(ctx, lhs, QExp::case(e, &x1, e1, &x0, e0)))
        }),
        Case::random("match through ASSOC⊗", |g| {
            let v = Vars::new(g);
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (x, y, z) = (v.ty("X"), v.ty("Y"), v.ty("Z"));
            let e = sub(g, &c1, &QType::tensor(x.clone(), QType::tensor(y.clone(), z.clone())));
            let [x1, x2, x3, p, q] = ["x", "x", "x", "p", "q"].map(|b| g.fresh(b));
            let body = sub(g, &c2.with(&x1, x).with(&x2, y).with(&x3, z), &ty);
            let u = v.lift(Equiv::AssocTensor(var("X"), var("Y"), var("Z")));
            let lhs = QExp::letpair(&p, &x3, QExp::uapp(u, e.clone()), QExp::letpair(&x1, &x2, QExp::var(&p), body.clone()));
            let rhs = QExp::letpair(&x1, &q, e, QExp::letpair(&x2, &x3, QExp::var(&q), body));
            Ok(Instance::new(ctx, lhs, rhs))
        }),
        Case::random("match through ASSOC⊕", |g| {
            let v = Vars::new(g);
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (x, y, z) = (v.ty("X"), v.ty("Y"), v.ty("Z"));
            let e = sub(g, &c1, &QType::oplus(QType::oplus(x.clone(), y.clone()), z.clone()));
            let [y1, y2, y3, w, p] = ["y", "y", "y", "w", "p"].map(|b| g.fresh(b));
            let b1 = sub(g, &c2.clone().with(&y1, x), &ty);
            let b2 = sub(g, &c2.clone().with(&y2, y), &ty);
            let b3 = sub(g, &c2.with(&y3, z), &ty);
            // (X ⊕ Y) ⊕ Z → X ⊕ (Y ⊕ Z)
            let u = v.lift(Equiv::symm(Equiv::AssocOplus(var("X"), var("Y"), var("Z"))));
            let lhs = QExp::case(
                QExp::uapp(u, e.clone()),
                &y1,
                b1.clone(),
                &w,
                QExp::case(QExp::var(&w), &y2, b2.clone(), &y3, b3.clone()),
            );
            let rhs = QExp::case(e, &p, QExp::case(QExp::var(&p), &y1, b1, &y2, b2), &y3, b3);
            Ok(Instance::new(ctx, lhs, rhs))
        }),
        Case::random("match through Lower⊗", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (a, b) = two_fin(g);
            let ab = FinType::prod(a.clone(), b.clone());
            let e = sub(g, &c1, &QType::tensor(QType::Lower(a.clone()), QType::Lower(b.clone())));
            let bodies: Vec<QExp> = (0..ab.card()).map(|_| sub(g, &c2, &ty)).collect();
            let u = Unitary::from_equiv(Equiv::LowerTensor(a.clone(), b.clone()), Assignment::new());
            let lhs = QExp::letbang(QExp::uapp(u, e.clone()), bodies.clone());
            let (p, q) = (g.fresh("p"), g.fresh("q"));
            let rows = (0..a.card())
                .map(|i| {
                    let cols = (0..b.card())
                        .map(|j| bodies[index(&ab, &FinValue::Pair(Box::new(value(&a, i)), Box::new(value(&b, j))))].clone())
                        .collect();
                    QExp::letbang(QExp::var(&q), cols)
                })
                .collect();
            Ok(Instance::new(ctx, lhs, QExp::letpair(&p, &q, e, QExp::letbang(QExp::var(&p), rows))))
        }),
        Case::random("match through DISTR", |g| {
            let v = Vars::new(g);
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (x, y, z) = (v.ty("X"), v.ty("Y"), v.ty("Z"));
            let e = sub(g, &c1, &QType::tensor(x.clone(), QType::oplus(y.clone(), z.clone())));
            let [a, y0, y1, w0, w1, t] = ["a", "y", "y", "w", "w", "t"].map(|b| g.fresh(b));
            let e0 = sub(g, &c2.clone().with(&a, x.clone()).with(&y0, y), &ty);
            let e1 = sub(g, &c2.with(&a, x).with(&y1, z), &ty);
            let u = v.lift(Equiv::Distr(var("X"), var("Y"), var("Z")));
            let lhs = QExp::case(
                QExp::uapp(u, e.clone()),
                &w0,
                QExp::letpair(&a, &y0, QExp::var(&w0), e0.clone()),
                &w1,
                QExp::letpair(&a, &y1, QExp::var(&w1), e1.clone()),
            );
            let rhs = QExp::letpair(&a, &t, e, QExp::case(QExp::var(&t), &y0, e0, &y1, e1));
            Ok(Instance::new(ctx, lhs, rhs))
        }),
        Case::random("measure through Lower⊕", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (a, b) = two_fin(g);
            let ab = FinType::sum(a.clone(), b.clone());
            let e = sub(g, &c1, &QType::oplus(QType::Lower(a.clone()), QType::Lower(b.clone())));
            let bodies: Vec<QExp> = (0..ab.card()).map(|_| sub(g, &c2, &ty)).collect();
            let u = Unitary::from_equiv(Equiv::LowerOplus(a.clone(), b.clone()), Assignment::new());
            let lhs = QExp::letbang(QExp::uapp(u, e.clone()), bodies.clone());
            let pick = |v: FinValue| bodies[index(&ab, &v)].clone();
            let left = (0..a.card()).map(|i| pick(FinValue::Inl(Box::new(value(&a, i))))).collect();
            let right = (0..b.card()).map(|i| pick(FinValue::Inr(Box::new(value(&b, i))))).collect();
            let (x0, x1) = (g.fresh("x"), g.fresh("x"));
            let rhs = QExp::case(e, &x0, QExp::letbang(QExp::var(&x0), left), &x1, QExp::letbang(QExp::var(&x1), right));
            Ok(Instance::new(ctx, lhs, rhs))
        }),
        Case::random("match through lunit⊗", |g| {
            let v = Vars::new(g);
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let x = v.ty("X");
            let e = sub(g, &c1, &x);
            let (unit, a) = (g.fresh("u"), g.fresh("x"));
            let body = sub(g, &c2.with(&a, x), &ty);
            // X → Lower () ⊗ X
            let u = v.lift(Equiv::symm(Equiv::LUnitTensor(var("X"))));
            let lhs = QExp::letpair(&unit, &a, QExp::uapp(u, e.clone()), QExp::letbang(QExp::var(&unit), vec![body.clone()]));
            Ok(Instance::new(ctx, lhs, QExp::let_(&a, e, body)))
        }),
        Case::random("match through lunit⊕", |g| {
            let v = Vars::new(g);
            let (ctx, _) = frame(g);
            let x = v.ty("X");
            let e = sub(g, &ctx, &QType::oplus(QType::Lower(FinType::Void), x.clone()));
            let (none, a) = (g.fresh("n"), g.fresh("x"));
            let lhs = QExp::uapp(v.lift(Equiv::LUnitOplus(var("X"))), e.clone());
            let rhs = QExp::case(e, &none, QExp::letbang(QExp::var(&none), vec![]), &a, QExp::var(&a));
            Ok(Instance::new(ctx, lhs, rhs))
        }),
        Case::vacuous("measure through LZERO", || empty_basis(OpenType::tensor(OpenType::Lower(FinType::Void), var("X")))),
    ]
}

fn swap_oplus(g: &mut TermGen, which: Side) -> Result<Instance, String> {
    let v = Vars::new(g);
    let (ctx, _) = frame(g);
    let (x, y) = (v.ty("X"), v.ty("Y"));
    let e = sub(g, &ctx, if which == Side::Left { &x } else { &y });
    let lhs = QExp::uapp(v.lift(Equiv::SwapOplus(var("X"), var("Y"))), inj(which, x.clone(), y.clone(), e.clone()));
    Ok(Instance::new(ctx, lhs, inj(which.flip(), y, x, e)))
}

/// `ASSOC⊕` on the three summands of `X ⊕ (Y ⊕ Z)`.
fn assoc_oplus(g: &mut TermGen, summand: usize) -> Result<Instance, String> {
    use Side::{Left, Right};
    let v = Vars::new(g);
    let (ctx, _) = frame(g);
    let (x, y, z) = (v.ty("X"), v.ty("Y"), v.ty("Z"));
    let part = [&x, &y, &z][summand].clone();
    let e = sub(g, &ctx, &part);
    let yz = QType::oplus(y.clone(), z.clone());
    let xy = QType::oplus(x.clone(), y.clone());
    let (arg, image) = match summand {
        0 => (inj(Left, x.clone(), yz, e.clone()), inj(Left, xy, z, inj(Left, x, y, e))),
        1 => (
            inj(Right, x.clone(), yz, inj(Left, y.clone(), z.clone(), e.clone())),
            inj(Left, xy, z, inj(Right, x, y, e)),
        ),
        _ => (inj(Right, x, yz, inj(Right, y, z.clone(), e.clone())), inj(Right, xy, z, e)),
    };
    let u = v.lift(Equiv::AssocOplus(var("X"), var("Y"), var("Z")));
    Ok(Instance::new(ctx, QExp::uapp(u, arg), image))
}
