//! Gate-level equations built from lifted equivalences, with random
//! subterms, and random lifted equivalences against init and match.

use std::cell::RefCell;

use rand::Rng;

use crate::gen::TermGen;
use crate::opentype::{basis_card, gamma, partial_init_terms, partial_match, BasisValue};
use crate::rewrite::{apply_rule, Direction, Rule};
use crate::syntax::unitary::{controlled, distr_unitary, not_equiv};
use crate::syntax::{Assignment, Ctx, Equiv, FinType, Name, NameSupply, OpenType, QExp, QType, Side, Unitary};

use super::{Case, Instance};

const SUB: usize = 2;
const DIM: usize = 4;

fn not_gate() -> Unitary {
    Unitary::from_equiv(not_equiv(), Assignment::new())
}

fn qubit() -> QType {
    QType::qubit()
}

fn frame(g: &mut TermGen) -> (Ctx, QType) {
    let n = g.rng().gen_range(0..=2);
    let ctx = g.ctx(n);
    (ctx, g.qtype(DIM))
}

fn sub(g: &mut TermGen, ctx: &Ctx, ty: &QType) -> QExp {
    g.term(ctx, ty, SUB)
}

pub(super) fn gates() -> Vec<Case> {
    vec![
        Case::random("X-INTRO", |g| {
            let b = g.rng().gen_bool(0.5);
            let lhs = QExp::uapp(not_gate(), QExp::put_bool(b));
            Ok(Instance::new(Ctx::new(), lhs, QExp::put_bool(!b)))
        }),
        Case::random("X-ELIM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let e = sub(g, &c1, &qubit());
            let (f0, f1) = (sub(g, &c2, &ty), sub(g, &c2, &ty));
            let lhs = QExp::letbang(QExp::uapp(not_gate(), e.clone()), vec![f0.clone(), f1.clone()]);
            Ok(Instance::new(ctx, lhs, QExp::letbang(e, vec![f1, f0])))
        }),
        Case::random("SWAP-INTRO", |g| {
            let (ctx, _) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (alpha, beta) = (g.fin_type(), g.fin_type());
            let swap = swap_tensor(alpha.clone(), beta.clone());
            let e1 = sub(g, &c1, &QType::Lower(alpha));
            let e2 = sub(g, &c2, &QType::Lower(beta));
            let lhs = QExp::uapp(swap, QExp::pair(e1.clone(), e2.clone()));
            Ok(Instance::new(ctx, lhs, QExp::pair(e2, e1)))
        }),
        Case::random("SWAP-ELIM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (alpha, beta) = (g.fin_type(), g.fin_type());
            let swap = swap_tensor(alpha.clone(), beta.clone());
            let e = sub(g, &c1, &QType::tensor(QType::Lower(alpha.clone()), QType::Lower(beta.clone())));
            let (x, y) = (g.fresh("x"), g.fresh("y"));
            let body = sub(g, &c2.with(&x, QType::Lower(alpha)).with(&y, QType::Lower(beta)), &ty);
            let lhs = QExp::letpair(&y, &x, QExp::uapp(swap, e.clone()), body.clone());
            Ok(Instance::new(ctx, lhs, QExp::letpair(&x, &y, e, body)))
        }),
        Case::random("DISTR-INTRO", |g| {
            let (ctx, _) = frame(g);
            let alpha = g.fin_type();
            let a = QType::Lower(alpha.clone());
            let b = g.rng().gen_bool(0.5);
            let e = sub(g, &ctx, &a);
            let lhs = QExp::uapp(distr_unitary(alpha), QExp::pair(QExp::put_bool(b), e.clone()));
            let which = if b { Side::Right } else { Side::Left };
            Ok(Instance::new(ctx, lhs, QExp::inj(which, QType::oplus(a.clone(), a), e)))
        }),
        Case::random("DISTR-ELIM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let alpha = g.fin_type();
            let a = QType::Lower(alpha.clone());
            let e = sub(g, &c1, &QType::tensor(qubit(), a.clone()));
            let y = g.fresh("y");
            let e1 = sub(g, &c2.clone().with(&y, a.clone()), &ty);
            let e2 = sub(g, &c2.with(&y, a), &ty);
            let c = g.fresh("c");
            let lhs = QExp::case(QExp::uapp(distr_unitary(alpha), e.clone()), &y, e1.clone(), &y, e2.clone());
            let rhs = QExp::letpair(&c, &y, e, QExp::letbang(QExp::var(&c), vec![e1, e2]));
            Ok(Instance::new(ctx, lhs, rhs))
        }),
        Case::random("CNOT-INTRO", |g| {
            let (ctx, _) = frame(g);
            let b = g.rng().gen_bool(0.5);
            let e = sub(g, &ctx, &qubit());
            let cnot = controlled(FinType::Bool, not_gate());
            let lhs = QExp::uapp(cnot, QExp::pair(QExp::put_bool(b), e.clone()));
            let target = if b { QExp::uapp(not_gate(), e) } else { e };
            Ok(Instance::new(ctx, lhs, QExp::pair(QExp::put_bool(b), target)))
        }),
        Case::random("CNOT-ELIM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let e = sub(g, &c1, &QType::tensor(qubit(), qubit()));
            let (c, y) = (g.fresh("c"), g.fresh("y"));
            let inner = c2.with(&y, qubit());
            let (f0, f1) = (sub(g, &inner, &ty), sub(g, &inner, &ty));
            let cnot = controlled(FinType::Bool, not_gate());
            let lhs = QExp::letpair(&c, &y, QExp::uapp(cnot, e.clone()), QExp::letbang(QExp::var(&c), vec![f0.clone(), f1.clone()]));
            let flipped = f1.subst1(&y, &QExp::uapp(not_gate(), QExp::var(&y)));
            let rhs = QExp::letpair(&c, &y, e, QExp::letbang(QExp::var(&c), vec![f0, flipped]));
            Ok(Instance::new(ctx, lhs, rhs))
        }),
    ]
}

fn swap_tensor(alpha: FinType, beta: FinType) -> Unitary {
    let m = Assignment::new().with("X", alpha).with("Y", beta);
    Unitary::from_equiv(Equiv::SwapTensor(OpenType::var("X"), OpenType::var("Y")), m)
}

/// Largest basis of a lifted equivalence's source.
const LIFT_CARD: usize = 12;
const GENERATORS: usize = 6;

/// A random equivalence of at most six generators, with an assignment of
/// cardinality at most three per variable, whose source has a small
/// non-empty basis.
fn lifted_equiv(g: &mut TermGen) -> (Equiv, OpenType, OpenType, Assignment) {
    loop {
        let ty = g.open_type(&["X", "Y"], 3);
        let n = g.rng().gen_range(1..=GENERATORS);
        let f = g.equiv_from(&ty, n);
        let (src, dst) = f.endpoints().expect("generated chains are well formed");
        let m = g.assignment(src.vars().union(&dst.vars()));
        let card = basis_card(&src, &m).expect("assignment covers the variables");
        if (1..=LIFT_CARD).contains(&card) {
            return (f, src, dst, m);
        }
    }
}

/// A random basis value of `ty` under `m`, with variable leaves left open.
fn random_value(g: &mut TermGen, ty: &OpenType, m: &Assignment) -> BasisValue<()> {
    let card = |t: &OpenType| basis_card(t, m).expect("assignment covers the variables");
    match ty {
        OpenType::Var(_) => BasisValue::Leaf(()),
        OpenType::Lower(a) => BasisValue::Elem(g.rng().gen_range(0..a.card())),
        OpenType::Tensor(s, t) => BasisValue::pair(random_value(g, s, m), random_value(g, t, m)),
        OpenType::Oplus(s, t) => {
            let (l, r) = (card(s), card(t));
            if g.rng().gen_range(0..l + r) < l {
                BasisValue::inl(random_value(g, s, m))
            } else {
                BasisValue::inr(random_value(g, t, m))
            }
        }
    }
}

/// Fill the variable leaves of `v` with terms, some of them fresh context
/// variables.
fn fill_leaves(g: &mut TermGen, ty: &OpenType, v: &BasisValue<()>, m: &Assignment, ctx: &mut Ctx) -> BasisValue<QExp> {
    match (ty, v) {
        (OpenType::Var(x), _) => {
            let a = QType::Lower(m.get(x).expect("assigned").clone());
            if ctx.dim() * a.dim() <= 8 && g.rng().gen_bool(0.5) {
                let w = g.fresh("v");
                ctx.insert(w.clone(), a.clone());
                let e = g.term(&Ctx::singleton(&w, a.clone()), &a, 1);
                BasisValue::Leaf(e)
            } else {
                BasisValue::Leaf(g.closed(&a, 1))
            }
        }
        (_, BasisValue::Elem(i)) => BasisValue::Elem(*i),
        (OpenType::Tensor(s, t), BasisValue::Pair(a, b)) => {
            BasisValue::pair(fill_leaves(g, s, a, m, ctx), fill_leaves(g, t, b, m, ctx))
        }
        (OpenType::Oplus(s, _), BasisValue::Inl(a)) => BasisValue::inl(fill_leaves(g, s, a, m, ctx)),
        (OpenType::Oplus(_, t), BasisValue::Inr(b)) => BasisValue::inr(fill_leaves(g, t, b, m, ctx)),
        _ => unreachable!("value generated against this type"),
    }
}

fn rewrite_root(rule: Rule, ctx: Ctx, lhs: QExp) -> Result<Instance, String> {
    match apply_rule(rule, &lhs, &ctx, &[], Direction::Forward) {
        Ok(Some(rhs)) => Ok(Instance::new(ctx, lhs, rhs)),
        Ok(None) => Err(format!("  {rule} does not match\n  {lhs}\n  under {ctx}")),
        Err(e) => Err(format!("  {rule} on {lhs}: {e}")),
    }
}

pub(super) fn axiom20() -> Vec<Case> {
    vec![
        Case::random("AXIOM20-INTRO", |g| {
            let (f, src, _, m) = lifted_equiv(g);
            let shape = random_value(g, &src, &m);
            let mut ctx = Ctx::new();
            let value = fill_leaves(g, &src, &shape, &m, &mut ctx);
            let init = partial_init_terms(&src, &value, &m).map_err(|e| e.to_string())?;
            rewrite_root(Rule::Axiom20Intro, ctx, QExp::uapp(Unitary::from_equiv(f, m), init))
        }),
        Case::random("AXIOM20-ELIM", |g| {
            let (f, src, dst, m) = loop {
                let found = lifted_equiv(g);
                if !matches!(found.2, OpenType::Var(_)) {
                    break found;
                }
            };
            let src_ty = src.instantiate(&m).map_err(|e| e.to_string())?;
            let n = g.rng().gen_range(0..=1);
            let (c1, c2) = {
                let ctx = g.ctx(n);
                g.split_ctx(&ctx)
            };
            let ctx = c1.merge(&c2).expect("disjoint");
            let e = g.term(&c1, &src_ty, 1);
            let ty = g.qtype(DIM);
            let scrutinee = QExp::uapp(Unitary::from_equiv(f, m.clone()), e);
            let mut used = scrutinee.all_names();
            used.extend(ctx.names());
            let mut names = NameSupply::avoiding(used);
            let cell = RefCell::new(&mut *g);
            let branches = |b: &BasisValue<Name>, _: &mut NameSupply| {
                let wires = gamma(&dst, b, &m)?;
                let local = c2.merge(&wires).expect("wires are fresh");
                Ok(cell.borrow_mut().term(&local, &ty, 1))
            };
            let lhs = partial_match(&dst, scrutinee, &branches, &m, &mut names).map_err(|e| e.to_string())?;
            rewrite_root(Rule::Axiom20Elim, ctx, lhs)
        }),
    ]
}
