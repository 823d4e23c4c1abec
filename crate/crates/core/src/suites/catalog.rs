//! Random redexes for the catalog rules. Each instance builds a term that
//! the rule must match, rewrites it with the rule, and compares the two.

use rand::Rng;

use crate::gen::TermGen;
use crate::rewrite::{apply_rule, Direction, Rule};
use crate::syntax::{Ctx, FinType, QExp, QType, Side, Unitary};

use super::{Case, Instance};

/// Depth of the random subterms filling a redex.
const SUB: usize = 2;
/// Largest dimension of a type chosen for a redex.
const DIM: usize = 4;

fn rewrite_at(rule: Rule, ctx: Ctx, lhs: QExp, pos: &[usize]) -> Result<Instance, String> {
    match apply_rule(rule, &lhs, &ctx, pos, Direction::Forward) {
        Ok(Some(rhs)) => Ok(Instance::new(ctx, lhs, rhs)),
        Ok(None) => Err(format!("  {rule} does not match at {pos:?} of\n  {lhs}\n  under {ctx}")),
        Err(e) => Err(format!("  {rule} at {pos:?} of {lhs}: {e}")),
    }
}

fn side(g: &mut TermGen) -> Side {
    if g.rng().gen_bool(0.5) {
        Side::Left
    } else {
        Side::Right
    }
}

fn sub(g: &mut TermGen, ctx: &Ctx, ty: &QType) -> QExp {
    g.term(ctx, ty, SUB)
}

/// Base context and result type of a redex.
fn frame(g: &mut TermGen) -> (Ctx, QType) {
    let n = g.rng().gen_range(0..=2);
    let ctx = g.ctx(n);
    (ctx, g.qtype(DIM))
}

fn split3(g: &mut TermGen, ctx: &Ctx) -> (Ctx, Ctx, Ctx) {
    let (a, rest) = g.split_ctx(ctx);
    let (b, c) = g.split_ctx(&rest);
    (a, b, c)
}

fn plus(ctx: &Ctx, binders: &[(&str, &QType)]) -> Ctx {
    binders.iter().fold(ctx.clone(), |c, (x, t)| c.with(x, (*t).clone()))
}

pub(super) fn beta() -> Vec<Case> {
    vec![
        Case::random("β-LET", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let s = g.qtype(DIM);
            let x = g.fresh("x");
            let lhs = QExp::let_(&x, sub(g, &c1, &s), sub(g, &plus(&c2, &[(&x, &s)]), &ty));
            rewrite_at(Rule::BetaLet, ctx, lhs, &[])
        }),
        Case::random("β-⊗", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2, c3) = split3(g, &ctx);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let pair = QExp::pair(sub(g, &c1, &s1), sub(g, &c2, &s2));
            let body = sub(g, &plus(&c3, &[(&x1, &s1), (&x2, &s2)]), &ty);
            rewrite_at(Rule::BetaTensor, ctx, QExp::letpair(&x1, &x2, pair, body), &[])
        }),
        Case::random("β-⊕", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let which = side(g);
            let part = if which == Side::Left { &s1 } else { &s2 };
            let inj = QExp::inj(which, QType::oplus(s1.clone(), s2.clone()), sub(g, &c1, part));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let e1 = sub(g, &plus(&c2, &[(&x1, &s1)]), &ty);
            let e2 = sub(g, &plus(&c2, &[(&x2, &s2)]), &ty);
            rewrite_at(Rule::BetaOplus, ctx, QExp::case(inj, &x1, e1, &x2, e2), &[])
        }),
        Case::random("β-LOWER", |g| {
            let (ctx, ty) = frame(g);
            let alpha = g.fin_type();
            let a = g.rng().gen_range(0..alpha.card());
            let branches = (0..alpha.card()).map(|_| sub(g, &ctx, &ty)).collect();
            rewrite_at(Rule::BetaLower, ctx, QExp::letbang(QExp::put(alpha, a), branches), &[])
        }),
    ]
}

pub(super) fn eta() -> Vec<Case> {
    vec![
        Case::random("η-⊗", |g| {
            let (ctx, _) = frame(g);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let e = sub(g, &ctx, &QType::tensor(s1, s2));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let lhs = QExp::letpair(&x1, &x2, e, QExp::pair(QExp::var(&x1), QExp::var(&x2)));
            rewrite_at(Rule::EtaTensor, ctx, lhs, &[])
        }),
        Case::random("η-()", |g| {
            // terms already in canonical discard form have nothing to rewrite
            for _ in 0..32 {
                let (ctx, _) = frame(g);
                let e = g.term(&ctx, &QType::unit(), SUB + 1);
                if let Ok(Some(rhs)) = apply_rule(Rule::EtaUnit, &e, &ctx, &[], Direction::Forward) {
                    return Ok(Instance::new(ctx, e, rhs));
                }
            }
            Err("no unit term off the canonical discard form in 32 tries".into())
        }),
    ]
}

/// An elimination of the kind `rule` lifts, of type `ty`. Its scrutinee uses
/// `scrut`; its bodies use `rest`.
fn elimination(g: &mut TermGen, rule: Rule, scrut: &Ctx, rest: &Ctx, ty: &QType) -> QExp {
    match rule {
        Rule::CcLet => {
            let r = g.qtype(DIM);
            let y = g.fresh("y");
            let e = sub(g, scrut, &r);
            QExp::let_(&y, e, sub(g, &plus(rest, &[(&y, &r)]), ty))
        }
        Rule::CcTensor => {
            let (r1, r2) = (g.qtype(DIM), g.qtype(DIM));
            let (y1, y2) = (g.fresh("y"), g.fresh("y"));
            let e = sub(g, scrut, &QType::tensor(r1.clone(), r2.clone()));
            QExp::letpair(&y1, &y2, e, sub(g, &plus(rest, &[(&y1, &r1), (&y2, &r2)]), ty))
        }
        Rule::CcOplus => {
            let (r1, r2) = (g.qtype(DIM), g.qtype(DIM));
            let (y1, y2) = (g.fresh("y"), g.fresh("y"));
            let e = sub(g, scrut, &QType::oplus(r1.clone(), r2.clone()));
            let e1 = sub(g, &plus(rest, &[(&y1, &r1)]), ty);
            let e2 = sub(g, &plus(rest, &[(&y2, &r2)]), ty);
            QExp::case(e, &y1, e1, &y2, e2)
        }
        _ => {
            let alpha = g.fin_type();
            let e = sub(g, scrut, &QType::Lower(alpha.clone()));
            QExp::letbang(e, (0..alpha.card()).map(|_| sub(g, rest, ty)).collect())
        }
    }
}

/// An elimination placed directly under a random parent, and the position
/// of the elimination.
fn commuting_instance(g: &mut TermGen, rule: Rule) -> Result<Instance, String> {
    let (ctx, ty) = frame(g);
    let (cs, cr, cf) = split3(g, &ctx);
    let elim = |g: &mut TermGen, rest: &Ctx, t: &QType| elimination(g, rule, &cs, rest, t);
    let merged = cr.merge(&cf).expect("disjoint halves");
    let (lhs, k) = match g.rng().gen_range(0..10) {
        0 => {
            let s = g.qtype(DIM);
            let z = g.fresh("z");
            let e = elim(g, &cr, &s);
            (QExp::let_(&z, e, sub(g, &plus(&cf, &[(&z, &s)]), &ty)), 0)
        }
        1 => {
            let r = g.qtype(DIM);
            let z = g.fresh("z");
            let bound = sub(g, &cf, &r);
            (QExp::let_(&z, bound, elim(g, &plus(&cr, &[(&z, &r)]), &ty)), 1)
        }
        2 => {
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let (z1, z2) = (g.fresh("z"), g.fresh("z"));
            let e = elim(g, &cr, &QType::tensor(s1.clone(), s2.clone()));
            (QExp::letpair(&z1, &z2, e, sub(g, &plus(&cf, &[(&z1, &s1), (&z2, &s2)]), &ty)), 0)
        }
        3 => {
            let (r1, r2) = (g.qtype(DIM), g.qtype(DIM));
            let (z1, z2) = (g.fresh("z"), g.fresh("z"));
            let bound = sub(g, &cf, &QType::tensor(r1.clone(), r2.clone()));
            (QExp::letpair(&z1, &z2, bound, elim(g, &plus(&cr, &[(&z1, &r1), (&z2, &r2)]), &ty)), 1)
        }
        4 => {
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let e = elim(g, &cr, &s1);
            (QExp::pair(e, sub(g, &cf, &s2)), 0)
        }
        5 => {
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let other = sub(g, &cf, &s1);
            (QExp::pair(other, elim(g, &cr, &s2)), 1)
        }
        6 => {
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let which = side(g);
            let part = if which == Side::Left { &s1 } else { &s2 };
            let e = elim(g, &merged, part);
            (QExp::inj(which, QType::oplus(s1.clone(), s2.clone()), e), 0)
        }
        7 => {
            let s = g.qtype(DIM);
            let u = g.unitary(&s);
            (QExp::uapp(u, elim(g, &merged, &s)), 0)
        }
        8 => {
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let (z1, z2) = (g.fresh("z"), g.fresh("z"));
            let e = elim(g, &cr, &QType::oplus(s1.clone(), s2.clone()));
            let e1 = sub(g, &plus(&cf, &[(&z1, &s1)]), &ty);
            let e2 = sub(g, &plus(&cf, &[(&z2, &s2)]), &ty);
            (QExp::case(e, &z1, e1, &z2, e2), 0)
        }
        _ => {
            let alpha = g.fin_type();
            let e = elim(g, &cr, &QType::Lower(alpha.clone()));
            let branches = (0..alpha.card()).map(|_| sub(g, &cf, &ty)).collect();
            (QExp::letbang(e, branches), 0)
        }
    };
    rewrite_at(rule, ctx, lhs, &[k])
}

pub(super) fn commuting() -> Vec<Case> {
    [Rule::CcLet, Rule::CcTensor, Rule::CcOplus, Rule::CcLower]
        .into_iter()
        .map(|rule| Case::random(rule.name(), move |g| commuting_instance(g, rule)))
        .collect()
}

/// A unitary out of `src`, with its target.
fn unitary_from(g: &mut TermGen, src: &QType) -> (Unitary, QType) {
    let u = g.unitary(src);
    let dst = u.dst().expect("generated unitaries are well formed");
    (u, dst)
}

pub(super) fn structural() -> Vec<Case> {
    vec![
        Case::random("U-⊗-INTRO", |g| {
            let (ctx, _) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let (u1, _) = unitary_from(g, &s1);
            let (u2, _) = unitary_from(g, &s2);
            let pair = QExp::pair(sub(g, &c1, &s1), sub(g, &c2, &s2));
            rewrite_at(Rule::UTensorIntro, ctx, QExp::uapp(Unitary::tensor(u1, u2), pair), &[])
        }),
        Case::random("U-⊗-ELIM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let (u1, t1) = unitary_from(g, &s1);
            let (u2, t2) = unitary_from(g, &s2);
            let e = sub(g, &c1, &QType::tensor(s1, s2));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let body = sub(g, &plus(&c2, &[(&x1, &t1), (&x2, &t2)]), &ty);
            let lhs = QExp::letpair(&x1, &x2, QExp::uapp(Unitary::tensor(u1, u2), e), body);
            rewrite_at(Rule::UTensorElim, ctx, lhs, &[])
        }),
        Case::random("U-⊗-COMM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let e = sub(g, &c1, &QType::tensor(s1.clone(), s2.clone()));
            let body = sub(g, &plus(&c2, &[(&x1, &s1), (&x2, &s2)]), &ty);
            let (u, _) = unitary_from(g, &ty);
            rewrite_at(Rule::UTensorComm, ctx, QExp::uapp(u, QExp::letpair(&x1, &x2, e, body)), &[])
        }),
        Case::random("U-⊕-INTRO₁", |g| oplus_intro(g, Side::Left)),
        Case::random("U-⊕-INTRO₂", |g| oplus_intro(g, Side::Right)),
        Case::random("U-⊕-ELIM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let (u1, t1) = unitary_from(g, &s1);
            let (u2, t2) = unitary_from(g, &s2);
            let e = sub(g, &c1, &QType::oplus(s1, s2));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let e1 = sub(g, &plus(&c2, &[(&x1, &t1)]), &ty);
            let e2 = sub(g, &plus(&c2, &[(&x2, &t2)]), &ty);
            let lhs = QExp::case(QExp::uapp(Unitary::direct_sum(u1, u2), e), &x1, e1, &x2, e2);
            rewrite_at(Rule::UOplusElim, ctx, lhs, &[])
        }),
        Case::random("U-⊕-COMM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
            let e = sub(g, &c1, &QType::oplus(s1.clone(), s2.clone()));
            let (x1, x2) = (g.fresh("x"), g.fresh("x"));
            let e1 = sub(g, &plus(&c2, &[(&x1, &s1)]), &ty);
            let e2 = sub(g, &plus(&c2, &[(&x2, &s2)]), &ty);
            let (u, _) = unitary_from(g, &ty);
            rewrite_at(Rule::UOplusComm, ctx, QExp::uapp(u, QExp::case(e, &x1, e1, &x2, e2)), &[])
        }),
        Case::random("U-LOWER-COMM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let alpha = g.fin_type();
            let e = sub(g, &c1, &QType::Lower(alpha.clone()));
            let branches = (0..alpha.card()).map(|_| sub(g, &c2, &ty)).collect();
            let (u, _) = unitary_from(g, &ty);
            rewrite_at(Rule::ULowerComm, ctx, QExp::uapp(u, QExp::letbang(e, branches)), &[])
        }),
        Case::random("U-LOWER-ELIM", |g| {
            let (ctx, ty) = frame(g);
            let (c1, c2) = g.split_ctx(&ctx);
            let alpha = g.fin_type();
            let (u, dst) = unitary_from(g, &QType::Lower(alpha));
            let QType::Lower(beta) = &dst else { return Err(format!("  {u} leaves Lower")) };
            let e = sub(g, &c1, &QType::Lower(alpha_of(&u)));
            let body = sub(g, &c2, &ty);
            let lhs = QExp::letbang(QExp::uapp(u, e), vec![body; beta.card()]);
            rewrite_at(Rule::ULowerElim, ctx, lhs, &[])
        }),
    ]
}

fn alpha_of(u: &Unitary) -> FinType {
    match u.src() {
        Ok(QType::Lower(a)) => a,
        _ => unreachable!("built from a Lower source"),
    }
}

fn oplus_intro(g: &mut TermGen, which: Side) -> Result<Instance, String> {
    let (ctx, _) = frame(g);
    let (s1, s2) = (g.qtype(DIM), g.qtype(DIM));
    let (u1, _) = unitary_from(g, &s1);
    let (u2, _) = unitary_from(g, &s2);
    let part = if which == Side::Left { &s1 } else { &s2 };
    let e = sub(g, &ctx, part);
    let lhs = QExp::uapp(Unitary::direct_sum(u1, u2), QExp::inj(which, QType::oplus(s1.clone(), s2.clone()), e));
    let rule = if which == Side::Left { Rule::UOplusIntro1 } else { Rule::UOplusIntro2 };
    rewrite_at(rule, ctx, lhs, &[])
}

pub(super) fn groupoid() -> Vec<Case> {
    vec![
        Case::random("U-COMPOSE", |g| {
            let (ctx, _) = frame(g);
            let s = g.qtype(DIM);
            let (v, mid) = unitary_from(g, &s);
            let (u, _) = unitary_from(g, &mid);
            let e = sub(g, &ctx, &s);
            rewrite_at(Rule::UCompose, ctx, QExp::uapp(u, QExp::uapp(v, e)), &[])
        }),
        Case::random("U-I", |g| {
            let (ctx, _) = frame(g);
            let s = g.qtype(DIM);
            let e = sub(g, &ctx, &s);
            rewrite_at(Rule::UIdentity, ctx, QExp::uapp(Unitary::id(s), e), &[])
        }),
        Case::random("U-†", |g| {
            let (ctx, _) = frame(g);
            let s = g.qtype(DIM);
            let (u, _) = unitary_from(g, &s);
            let e = sub(g, &ctx, &s);
            rewrite_at(Rule::UDagger, ctx, QExp::uapp(Unitary::adjoint(u.clone()), QExp::uapp(u, e)), &[])
        }),
    ]
}
