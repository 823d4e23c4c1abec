//! The algebraic axioms read back as expressions, and round trips through
//! the translations in both directions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebraic::{alg_axioms, alg_subst, check_alg, random_alg_term, to_alg, to_qexp, AlgTerm, Wires};
use crate::gen::TermGen;
use crate::rewrite::{apply_rule, Direction, Rule};
use crate::syntax::{Ctx, QExp, QType};

use super::{Case, Instance};

const K: &str = "k";
const ALG_DEPTH: usize = 4;

fn checked(gamma: &Ctx, delta: &Ctx, t: &AlgTerm) -> Result<(), String> {
    check_alg(gamma, delta, t).map_err(|e| format!("  {t}\n  ill-typed: {e}"))
}

fn read_back(t: &AlgTerm, k: &str) -> Result<QExp, String> {
    to_qexp(t, k).map_err(|e| format!("  {t}\n  does not read back: {e}"))
}

fn translate(ctx: &Ctx, e: &QExp, k: &str) -> Result<AlgTerm, String> {
    to_alg(ctx, e, k).map_err(|e2| format!("  {e}\n  does not translate: {e2}"))
}

pub(super) fn axioms() -> Vec<Case> {
    alg_axioms()
        .into_iter()
        .enumerate()
        .map(|(i, ax)| {
            Case::random(ax.name, move |g: &mut TermGen| {
                let inst = alg_axioms()[i].instance(g.rng());
                let gamma = inst.gamma();
                checked(&gamma, &inst.delta, &inst.lhs)?;
                checked(&gamma, &inst.delta, &inst.rhs)?;
                let lhs = read_back(&inst.lhs, &inst.k)?;
                let rhs = read_back(&inst.rhs, &inst.k)?;
                Ok(Instance::new(inst.delta, lhs, rhs))
            })
        })
        .collect()
}

/// A random context and result type for the binary fragment.
fn frame(g: &mut TermGen) -> (Ctx, QType) {
    let n = g.rng().gen_range(0..=2);
    let ctx = g.ctx(n);
    (ctx, g.qtype(4))
}

/// An expression against its translation read back.
fn expr_round_trip(g: &mut TermGen) -> Result<Instance, String> {
    let (ctx, ty) = frame(g);
    let e = g.term(&ctx, &ty, 3);
    let t = translate(&ctx, &e, K)?;
    checked(&Ctx::singleton(K, ty), &ctx, &t)?;
    let back = read_back(&t, K)?;
    Ok(Instance::new(ctx, e, back))
}

/// An algebraic term read as an expression, against that expression
/// translated and read again.
fn alg_round_trip(g: &mut TermGen) -> Result<Instance, String> {
    let (delta, goal) = frame(g);
    let t = random_alg_term(g.rng(), K, &goal, &delta, ALG_DEPTH);
    let gamma = Ctx::singleton(K, goal);
    checked(&gamma, &delta, &t)?;
    let e = read_back(&t, K)?;
    let t2 = translate(&delta, &e, K)?;
    checked(&gamma, &delta, &t2)?;
    let e2 = read_back(&t2, K)?;
    Ok(Instance::new(delta, e, e2))
}

/// Both sides of one rewrite step, each sent through the translation.
fn rewrite_round_trip(g: &mut TermGen) -> Result<Instance, String> {
    const TERMS: usize = 64;
    for _ in 0..TERMS {
        let (ctx, ty) = frame(g);
        let e = g.term(&ctx, &ty, 3);
        let mut steps: Vec<(Rule, Vec<usize>)> =
            e.positions().into_iter().flat_map(|p| Rule::ALL.into_iter().map(move |r| (r, p.clone()))).collect();
        steps.shuffle(g.rng());
        for (rule, pos) in steps {
            let Ok(Some(rhs)) = apply_rule(rule, &e, &ctx, &pos, Direction::Forward) else {
                continue;
            };
            // rules that leave the sum-free fragment have no translation
            let Ok(t2) = to_alg(&ctx, &rhs, K) else {
                continue;
            };
            let t1 = translate(&ctx, &e, K)?;
            let gamma = Ctx::singleton(K, ty.clone());
            checked(&gamma, &ctx, &t1)?;
            checked(&gamma, &ctx, &t2)?;
            let (l, r) = (read_back(&t1, K)?, read_back(&t2, K)?);
            return Ok(Instance::new(ctx, l, r));
        }
    }
    Err(format!("no rewrite applied to any of {TERMS} terms"))
}

/// Translating `U # e` against plugging a unitary step into the
/// continuation of `e`'s translation.
fn unitary_substitution(g: &mut TermGen) -> Result<Instance, String> {
    let (ctx, ty) = frame(g);
    let e = g.term(&ctx, &ty, 3);
    let u = g.unitary(&ty);
    let out = u.dst().map_err(|e| e.to_string())?;
    let (x, y) = ("x", "y");
    let whole = translate(&ctx, &QExp::uapp(u.clone(), e.clone()), y)?;
    let inner = translate(&ctx, &e, x)?;
    let step = AlgTerm::ustep(u, Wires::one("a"), "b", AlgTerm::apply(y, &["b"]));
    let plugged = alg_subst(&inner, x, "a", &step);
    let gamma = Ctx::singleton(y, out);
    checked(&gamma, &ctx, &whole)?;
    checked(&gamma, &ctx, &plugged)?;
    Ok(Instance::new(ctx, read_back(&whole, y)?, read_back(&plugged, y)?))
}

pub(super) fn round_trips() -> Vec<Case> {
    vec![
        Case::random("expression round trip", expr_round_trip),
        Case::random("algebraic round trip", alg_round_trip),
        Case::random("rewrite step translated", rewrite_round_trip),
        Case::random("unitary substitution", unitary_substitution),
    ]
}
