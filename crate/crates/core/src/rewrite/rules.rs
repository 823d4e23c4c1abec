//! The rule catalog and single-step application.

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{Ctx, Name, NameSupply, QExp, QType, Side, Unitary};
use crate::typecheck::{infer, subterm_typing};

use super::axiom20;
use super::RewriteError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// Left-hand side to right-hand side.
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "->",
            Direction::Backward => "<-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    BetaLet,
    BetaTensor,
    BetaOplus,
    BetaLower,
    EtaTensor,
    EtaUnit,
    CcLet,
    CcTensor,
    CcOplus,
    CcLower,
    UTensorIntro,
    UTensorElim,
    UTensorComm,
    UOplusIntro1,
    UOplusIntro2,
    UOplusElim,
    UOplusComm,
    ULowerComm,
    ULowerElim,
    UCompose,
    UIdentity,
    UDagger,
    Axiom20Intro,
    Axiom20Elim,
}

impl Rule {
    pub const ALL: [Rule; 24] = [
        Rule::BetaLet,
        Rule::BetaTensor,
        Rule::BetaOplus,
        Rule::BetaLower,
        Rule::EtaTensor,
        Rule::EtaUnit,
        Rule::CcLet,
        Rule::CcTensor,
        Rule::CcOplus,
        Rule::CcLower,
        Rule::UTensorIntro,
        Rule::UTensorElim,
        Rule::UTensorComm,
        Rule::UOplusIntro1,
        Rule::UOplusIntro2,
        Rule::UOplusElim,
        Rule::UOplusComm,
        Rule::ULowerComm,
        Rule::ULowerElim,
        Rule::UCompose,
        Rule::UIdentity,
        Rule::UDagger,
        Rule::Axiom20Intro,
        Rule::Axiom20Elim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::BetaLet => "β-LET",
            Rule::BetaTensor => "β-⊗",
            Rule::BetaOplus => "β-⊕",
            Rule::BetaLower => "β-LOWER",
            Rule::EtaTensor => "η-⊗",
            Rule::EtaUnit => "η-()",
            Rule::CcLet => "CC-LET",
            Rule::CcTensor => "CC-⊗",
            Rule::CcOplus => "CC-⊕",
            Rule::CcLower => "CC-LOWER",
            Rule::UTensorIntro => "U-⊗-INTRO",
            Rule::UTensorElim => "U-⊗-ELIM",
            Rule::UTensorComm => "U-⊗-COMM",
            Rule::UOplusIntro1 => "U-⊕-INTRO₁",
            Rule::UOplusIntro2 => "U-⊕-INTRO₂",
            Rule::UOplusElim => "U-⊕-ELIM",
            Rule::UOplusComm => "U-⊕-COMM",
            Rule::ULowerComm => "U-LOWER-COMM",
            Rule::ULowerElim => "U-LOWER-ELIM",
            Rule::UCompose => "U-COMPOSE",
            Rule::UIdentity => "U-I",
            Rule::UDagger => "U-†",
            Rule::Axiom20Intro => "AXIOM20-INTRO",
            Rule::Axiom20Elim => "AXIOM20-ELIM",
        }
    }

    /// ASCII spelling, used on the command line.
    pub fn ascii_name(self) -> &'static str {
        match self {
            Rule::BetaLet => "beta-let",
            Rule::BetaTensor => "beta-tensor",
            Rule::BetaOplus => "beta-oplus",
            Rule::BetaLower => "beta-lower",
            Rule::EtaTensor => "eta-tensor",
            Rule::EtaUnit => "eta-unit",
            Rule::CcLet => "cc-let",
            Rule::CcTensor => "cc-tensor",
            Rule::CcOplus => "cc-oplus",
            Rule::CcLower => "cc-lower",
            Rule::UTensorIntro => "u-tensor-intro",
            Rule::UTensorElim => "u-tensor-elim",
            Rule::UTensorComm => "u-tensor-comm",
            Rule::UOplusIntro1 => "u-oplus-intro1",
            Rule::UOplusIntro2 => "u-oplus-intro2",
            Rule::UOplusElim => "u-oplus-elim",
            Rule::UOplusComm => "u-oplus-comm",
            Rule::ULowerComm => "u-lower-comm",
            Rule::ULowerElim => "u-lower-elim",
            Rule::UCompose => "u-compose",
            Rule::UIdentity => "u-i",
            Rule::UDagger => "u-dagger",
            Rule::Axiom20Intro => "axiom20-intro",
            Rule::Axiom20Elim => "axiom20-elim",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s || r.ascii_name().eq_ignore_ascii_case(s))
    }

    /// Commuting conversions are addressed by the position of the
    /// elimination being lifted; they rewrite its parent.
    pub fn lifts_child(self) -> bool {
        matches!(self, Rule::CcLet | Rule::CcTensor | Rule::CcOplus | Rule::CcLower)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A catalog entry: the rule together with its printed form.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub rule: Rule,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub side_conditions: &'static str,
    /// The direction the derivation search explores.
    pub search: Direction,
}

impl RewriteRule {
    pub fn name(&self) -> &'static str {
        self.rule.name()
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<14} {}  →  {}", self.rule.name(), self.lhs, self.rhs)?;
        if !self.side_conditions.is_empty() {
            write!(f, "   [{}]", self.side_conditions)?;
        }
        Ok(())
    }
}

pub fn rule_catalog() -> Vec<RewriteRule> {
    use Direction::*;
    let entry = |rule, lhs, rhs, side_conditions, search| RewriteRule { rule, lhs, rhs, side_conditions, search };
    vec![
        entry(Rule::BetaLet, "let x := e in e'", "e'{e/x}", "", Forward),
        entry(Rule::BetaTensor, "let (x1, x2) := (e1, e2) in e'", "e'{e1/x1, e2/x2}", "", Forward),
        entry(Rule::BetaOplus, "case ιi e of (ι1 x1 → e1 | ι2 x2 → e2)", "ei{e/xi}", "", Forward),
        entry(Rule::BetaLower, "put a >! f", "f a", "", Forward),
        entry(Rule::EtaTensor, "let (x1, x2) := e in (x1, x2)", "e", "x1 ≠ x2", Forward),
        entry(
            Rule::EtaUnit,
            "e : Lower ()",
            "discard every wire of e, then put ()",
            "any two terms of type Lower () in one context are equal",
            Forward,
        ),
        entry(Rule::CcLet, "e0{let y := e in e'/x}", "let y := e in e0{e'/x}", "e0 binds nothing free in the elimination", Forward),
        entry(
            Rule::CcTensor,
            "e0{let (y1, y2) := e in e'/x}",
            "let (y1, y2) := e in e0{e'/x}",
            "e0 binds nothing free in the elimination",
            Forward,
        ),
        entry(
            Rule::CcOplus,
            "e0{case e of (ι1 y1 → e1 | ι2 y2 → e2)/x}",
            "case e of (ι1 y1 → e0{e1/x} | ι2 y2 → e0{e2/x})",
            "e0 binds nothing free in the elimination",
            Forward,
        ),
        entry(Rule::CcLower, "e0{e >! f/x}", "e >! λa. e0{f a/x}", "e0 binds nothing free in the elimination", Forward),
        entry(Rule::UTensorIntro, "(U1 ⊗ U2) # (e1, e2)", "(U1 # e1, U2 # e2)", "", Forward),
        entry(
            Rule::UTensorElim,
            "let (x1, x2) := (U1 ⊗ U2) # e in e'",
            "let (y1, y2) := e in e'{U1 # y1/x1, U2 # y2/x2}",
            "y1, y2 fresh",
            Forward,
        ),
        entry(Rule::UTensorComm, "U # (let (x1, x2) := e in e')", "let (x1, x2) := e in U # e'", "", Forward),
        entry(Rule::UOplusIntro1, "(U1 ⊕ U2) # ι1 e", "ι1 (U1 # e)", "", Forward),
        entry(Rule::UOplusIntro2, "(U1 ⊕ U2) # ι2 e", "ι2 (U2 # e)", "", Forward),
        entry(
            Rule::UOplusElim,
            "case (U1 ⊕ U2) # e of (ι1 x1 → e1 | ι2 x2 → e2)",
            "case e of (ι1 y1 → e1{U1 # y1/x1} | ι2 y2 → e2{U2 # y2/x2})",
            "y1, y2 fresh",
            Forward,
        ),
        entry(
            Rule::UOplusComm,
            "U # (case e of (ι1 x1 → e1 | ι2 x2 → e2))",
            "case e of (ι1 x1 → U # e1 | ι2 x2 → U # e2)",
            "",
            Forward,
        ),
        entry(Rule::ULowerComm, "U # (e >! f)", "e >! λa. U # (f a)", "", Forward),
        entry(Rule::ULowerElim, "U # e >! λ_. e'", "e >! λ_. e'", "the family is constant; U starts at a Lower type", Forward),
        // Searched right to left: splitting composites exposes the redexes
        // of the other unitary rules.
        entry(Rule::UCompose, "U # (V # e)", "(U ∘ V) # e", "", Backward),
        entry(Rule::UIdentity, "I # e", "e", "", Forward),
        entry(Rule::UDagger, "U† # (U # e)", "e", "", Forward),
        entry(
            Rule::Axiom20Intro,
            "[f]^m # init_σ b",
            "init_τ (f b)",
            "f : σ ⇌ τ lifted under m; the argument is a partial initialisation of σ",
            Forward,
        ),
        entry(
            Rule::Axiom20Elim,
            "match_τ ([f]^m # e) with bs",
            "match_σ e with bs ∘ f",
            "f : σ ⇌ τ lifted under m; the term is a partial match on τ",
            Forward,
        ),
    ]
}

/// A subterm with everything needed to rewrite it.
pub(crate) struct Site<'a> {
    pub term: &'a QExp,
    /// Exactly the free variables of `term`, with their types.
    pub ctx: Ctx,
    pub ty: Option<QType>,
    /// Avoids every name of the enclosing term and its context.
    pub names: NameSupply,
}

impl<'a> Site<'a> {
    pub fn new(whole: &'a QExp, ctx: &Ctx, pos: &[usize]) -> Option<Site<'a>> {
        let term = whole.at_path(pos)?;
        let (local, ty) = subterm_typing(ctx, whole, pos).ok()?;
        let mut used = whole.all_names();
        used.extend(ctx.names());
        Some(Site { term, ctx: local.restrict(&term.free_vars()), ty, names: NameSupply::avoiding(used) })
    }
}

/// Apply `rule` at `pos` of `e`, which must be well typed under `ctx`.
///
/// For commuting conversions `pos` addresses the elimination that is lifted
/// out of its parent. `Ok(None)` means the rule does not match there, or has
/// no determined inverse when run backwards.
pub fn apply_rule(rule: Rule, e: &QExp, ctx: &Ctx, pos: &[usize], dir: Direction) -> Result<Option<QExp>, RewriteError> {
    let (site_pos, child) = match (rule.lifts_child(), pos.split_last()) {
        (true, Some((&k, parent))) => (parent, Some(k)),
        (true, None) => return Ok(None),
        (false, _) => (pos, None),
    };
    let Some(mut site) = Site::new(e, ctx, site_pos) else {
        return Ok(None);
    };
    rewrite_site(rule, &mut site, child, dir, site_pos)
        .map(|new| new.and_then(|new| e.replace_at(site_pos, new)))
}

/// Rewrite one site and check that the result has the same type and free
/// variables.
pub(crate) fn rewrite_site(
    rule: Rule,
    site: &mut Site<'_>,
    child: Option<usize>,
    dir: Direction,
    pos: &[usize],
) -> Result<Option<QExp>, RewriteError> {
    let out = match (dir, child) {
        (Direction::Forward, Some(k)) => lift(rule, site, k),
        (Direction::Backward, Some(_)) => None,
        (Direction::Forward, None) => forward(rule, site),
        (Direction::Backward, None) => backward(rule, site),
    };
    let Some(new) = out else { return Ok(None) };
    let fail = |detail: String| RewriteError::TypeNotPreserved { rule, position: pos.to_vec(), detail };
    if new.free_vars() != site.term.free_vars() {
        return Err(fail(format!("free variables of {} differ from {}", new, site.term)));
    }
    match (&site.ty, infer(&site.ctx, &new)) {
        (Some(t), Ok(u)) if *t == u => {}
        (None, _) => {}
        (Some(t), Ok(u)) => return Err(fail(format!("{t} became {u}"))),
        (Some(_), Err(err)) => return Err(fail(format!("{new} is ill typed: {err}"))),
    }
    Ok(Some(new))
}

fn subst2(e: &QExp, x: &Name, a: QExp, y: &Name, b: QExp) -> QExp {
    let mut m = BTreeMap::new();
    m.insert(x.clone(), a);
    m.insert(y.clone(), b);
    e.subst(&m)
}

fn uapp_var(u: &Unitary, y: &Name) -> QExp {
    QExp::uapp(u.clone(), QExp::var(y))
}

fn forward(rule: Rule, site: &mut Site<'_>) -> Option<QExp> {
    use QExp as E;
    let t = site.term;
    match (rule, t) {
        (Rule::BetaLet, E::Let(x, e, body)) => Some(body.subst1(x, e)),
        (Rule::BetaTensor, E::LetPair(x1, x2, scrut, body)) if x1 != x2 => match scrut.as_ref() {
            E::Pair(a, b) => Some(subst2(body, x1, (**a).clone(), x2, (**b).clone())),
            _ => None,
        },
        (Rule::BetaOplus, E::Case(scrut, x1, e1, x2, e2)) => match scrut.as_ref() {
            E::Inj(Side::Left, _, a) => Some(e1.subst1(x1, a)),
            E::Inj(Side::Right, _, a) => Some(e2.subst1(x2, a)),
            _ => None,
        },
        (Rule::BetaLower, E::LetBang(scrut, fs)) => match scrut.as_ref() {
            E::Put(_, i) => fs.get(*i).cloned(),
            _ => None,
        },
        (Rule::EtaTensor, E::LetPair(x1, x2, scrut, body)) if x1 != x2 => match body.as_ref() {
            E::Pair(a, b) if **a == E::Var(x1.clone()) && **b == E::Var(x2.clone()) => Some((**scrut).clone()),
            _ => None,
        },
        (Rule::EtaUnit, _) => {
            if site.ty != Some(QType::unit()) || site.ctx.iter().any(|(_, ty)| ty.dim() == 0) {
                return None;
            }
            let canon = canonical_discard(&site.ctx, &mut site.names);
            (!canon.alpha_eq(t)).then_some(canon)
        }
        (Rule::UTensorIntro, E::UApp(Unitary::Tensor(u1, u2), arg)) => match arg.as_ref() {
            E::Pair(a, b) => Some(E::pair(E::uapp((**u1).clone(), (**a).clone()), E::uapp((**u2).clone(), (**b).clone()))),
            _ => None,
        },
        (Rule::UTensorElim, E::LetPair(x1, x2, scrut, body)) if x1 != x2 => match scrut.as_ref() {
            E::UApp(Unitary::Tensor(u1, u2), e) => {
                let y1 = site.names.fresh(x1);
                let y2 = site.names.fresh(x2);
                let body = subst2(body, x1, uapp_var(u1, &y1), x2, uapp_var(u2, &y2));
                Some(E::letpair(&y1, &y2, (**e).clone(), body))
            }
            _ => None,
        },
        (Rule::UTensorComm, E::UApp(u, arg)) => match arg.as_ref() {
            E::LetPair(x1, x2, e, body) => Some(E::letpair(x1, x2, (**e).clone(), E::uapp(u.clone(), (**body).clone()))),
            _ => None,
        },
        (Rule::UOplusIntro1 | Rule::UOplusIntro2, E::UApp(sum @ Unitary::DirectSum(u1, u2), arg)) => {
            let want = if rule == Rule::UOplusIntro1 { Side::Left } else { Side::Right };
            match arg.as_ref() {
                E::Inj(side, _, a) if *side == want => {
                    let u = if want == Side::Left { u1 } else { u2 };
                    Some(E::inj(want, sum.dst().ok()?, E::uapp((**u).clone(), (**a).clone())))
                }
                _ => None,
            }
        }
        (Rule::UOplusElim, E::Case(scrut, x1, e1, x2, e2)) => match scrut.as_ref() {
            E::UApp(Unitary::DirectSum(u1, u2), e) => {
                let y1 = site.names.fresh(x1);
                let y2 = site.names.fresh(x2);
                Some(E::case(
                    (**e).clone(),
                    &y1,
                    e1.subst1(x1, &uapp_var(u1, &y1)),
                    &y2,
                    e2.subst1(x2, &uapp_var(u2, &y2)),
                ))
            }
            _ => None,
        },
        (Rule::UOplusComm, E::UApp(u, arg)) => match arg.as_ref() {
            E::Case(e, x1, e1, x2, e2) => Some(E::case(
                (**e).clone(),
                x1,
                E::uapp(u.clone(), (**e1).clone()),
                x2,
                E::uapp(u.clone(), (**e2).clone()),
            )),
            _ => None,
        },
        (Rule::ULowerComm, E::UApp(u, arg)) => match arg.as_ref() {
            E::LetBang(e, fs) => Some(E::letbang((**e).clone(), fs.iter().map(|f| E::uapp(u.clone(), f.clone())).collect())),
            _ => None,
        },
        (Rule::ULowerElim, E::LetBang(scrut, fs)) => match scrut.as_ref() {
            E::UApp(u, e) => {
                let QType::Lower(src) = u.src().ok()? else { return None };
                let constant = fs.windows(2).all(|w| w[0].alpha_eq(&w[1]));
                (constant && src.card() == fs.len()).then(|| E::letbang((**e).clone(), fs.clone()))
            }
            _ => None,
        },
        (Rule::UCompose, E::UApp(u, arg)) => match arg.as_ref() {
            E::UApp(v, e) => Some(E::uapp(Unitary::compose(u.clone(), v.clone()), (**e).clone())),
            _ => None,
        },
        (Rule::UIdentity, E::UApp(Unitary::Id(_), e)) => Some((**e).clone()),
        (Rule::UDagger, E::UApp(Unitary::Adjoint(u), arg)) => match arg.as_ref() {
            E::UApp(v, e) if **u == *v => Some((**e).clone()),
            _ => None,
        },
        (Rule::Axiom20Intro, _) => axiom20::intro(t),
        (Rule::Axiom20Elim, _) => axiom20::elim(t, &mut site.names),
        _ => None,
    }
}

/// Inverse rewrites that are determined by the right-hand side alone.
fn backward(rule: Rule, site: &mut Site<'_>) -> Option<QExp> {
    use QExp as E;
    let t = site.term;
    match (rule, t) {
        (Rule::BetaLet, _) => {
            let x = site.names.fresh("x");
            Some(E::let_(&x, t.clone(), E::var(&x)))
        }
        (Rule::EtaTensor, _) => {
            if !matches!(site.ty, Some(QType::Tensor(..))) {
                return None;
            }
            let x1 = site.names.fresh("x");
            let x2 = site.names.fresh("x");
            Some(E::letpair(&x1, &x2, t.clone(), E::pair(E::var(&x1), E::var(&x2))))
        }
        (Rule::UTensorIntro, E::Pair(a, b)) => match (a.as_ref(), b.as_ref()) {
            (E::UApp(u1, a), E::UApp(u2, b)) => {
                Some(E::uapp(Unitary::tensor(u1.clone(), u2.clone()), E::pair((**a).clone(), (**b).clone())))
            }
            _ => None,
        },
        (Rule::UTensorComm, E::LetPair(x1, x2, e, body)) => match body.as_ref() {
            E::UApp(u, b) => Some(E::uapp(u.clone(), E::letpair(x1, x2, (**e).clone(), (**b).clone()))),
            _ => None,
        },
        (Rule::UOplusComm, E::Case(e, x1, e1, x2, e2)) => match (e1.as_ref(), e2.as_ref()) {
            (E::UApp(u, a), E::UApp(v, b)) if u == v => {
                Some(E::uapp(u.clone(), E::case((**e).clone(), x1, (**a).clone(), x2, (**b).clone())))
            }
            _ => None,
        },
        (Rule::ULowerComm, E::LetBang(e, fs)) => {
            let mut inner = Vec::with_capacity(fs.len());
            let mut shared: Option<&Unitary> = None;
            for f in fs {
                let E::UApp(u, b) = f else { return None };
                if shared.is_some_and(|s| s != u) {
                    return None;
                }
                shared = Some(u);
                inner.push((**b).clone());
            }
            Some(E::uapp(shared?.clone(), E::letbang((**e).clone(), inner)))
        }
        (Rule::UCompose, E::UApp(Unitary::Compose(u, v), e)) => {
            Some(E::uapp((**u).clone(), E::uapp((**v).clone(), (**e).clone())))
        }
        (Rule::UIdentity, _) => Some(E::uapp(Unitary::id(site.ty.clone()?), t.clone())),
        _ => None,
    }
}

/// Lift the elimination at child `k` of the site out past the site's root.
fn lift(rule: Rule, site: &mut Site<'_>, k: usize) -> Option<QExp> {
    use QExp as E;
    let parent = site.term;
    let child = parent.children().get(k).copied()?;
    let elim_matches = matches!(
        (rule, child),
        (Rule::CcLet, E::Let(..)) | (Rule::CcTensor, E::LetPair(..)) | (Rule::CcOplus, E::Case(..)) | (Rule::CcLower, E::LetBang(..))
    );
    if !elim_matches {
        return None;
    }
    // The hole may only sit where the parent uses its context once, and the
    // parent must not bind anything the scrutinee mentions.
    let binders: Vec<&Name> = match (parent, k) {
        (E::Let(..) | E::LetPair(..) | E::Pair(..) | E::Case(..) | E::LetBang(..), 0) => vec![],
        (E::Inj(..) | E::UApp(..), 0) => vec![],
        (E::Pair(..), 1) => vec![],
        (E::Let(x, ..), 1) => vec![x],
        (E::LetPair(x, y, ..), 1) => vec![x, y],
        _ => return None,
    };
    let scrutinee_fv = child.children().first()?.free_vars();
    if binders.iter().any(|b| scrutinee_fv.contains(*b)) {
        return None;
    }
    // plugging deliberately captures: the body may use the parent's binders
    let plug = |body: &QExp| parent.replace_at(&[k], body.clone()).expect("child exists");
    Some(match child {
        E::Let(y, e, body) => {
            let y2 = site.names.fresh(y);
            E::let_(&y2, (**e).clone(), plug(&body.subst1(y, &E::var(&y2))))
        }
        E::LetPair(y1, y2, e, body) => {
            let z1 = site.names.fresh(y1);
            let z2 = site.names.fresh(y2);
            let body = subst2(body, y1, E::var(&z1), y2, E::var(&z2));
            E::letpair(&z1, &z2, (**e).clone(), plug(&body))
        }
        E::Case(e, y1, e1, y2, e2) => {
            let z1 = site.names.fresh(y1);
            let z2 = site.names.fresh(y2);
            let b1 = plug(&e1.subst1(y1, &E::var(&z1)));
            let b2 = plug(&e2.subst1(y2, &E::var(&z2)));
            E::case((**e).clone(), &z1, b1, &z2, b2)
        }
        E::LetBang(e, fs) => E::letbang((**e).clone(), fs.iter().map(plug).collect()),
        _ => return None,
    })
}

/// The chosen representative of the terms of type `Lower ()` over `ctx`:
/// every wire is taken apart and measured in turn, then `put ()`.
pub fn canonical_discard(ctx: &Ctx, names: &mut NameSupply) -> QExp {
    ctx.iter()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .fold(QExp::put_unit(), |k, (x, ty)| discard(QExp::var(x), ty, k, names))
}

fn discard(e: QExp, ty: &QType, k: QExp, names: &mut NameSupply) -> QExp {
    match ty {
        QType::Lower(a) => QExp::letbang(e, vec![k; a.card()]),
        QType::Tensor(a, b) => {
            let w1 = names.fresh("d");
            let w2 = names.fresh("d");
            let inner = discard(QExp::var(&w2), b, k, names);
            QExp::letpair(&w1, &w2, e, discard(QExp::var(&w1), a, inner, names))
        }
        QType::Oplus(a, b) => {
            let w1 = names.fresh("d");
            let w2 = names.fresh("d");
            let left = discard(QExp::var(&w1), a, k.clone(), names);
            let right = discard(QExp::var(&w2), b, k, names);
            QExp::case(e, &w1, left, &w2, right)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;
    use crate::semantics::equiv_check;
    use crate::syntax::unitary::not_equiv;
    use crate::syntax::{Assignment, FinType};

    fn q() -> QType {
        QType::qubit()
    }

    fn h() -> Unitary {
        Unitary::named("H").unwrap()
    }

    fn fwd(rule: Rule, e: &QExp, ctx: &Ctx, pos: &[usize]) -> Option<QExp> {
        apply_rule(rule, e, ctx, pos, Direction::Forward).unwrap()
    }

    #[test]
    fn catalog_has_one_entry_per_rule() {
        let cat = rule_catalog();
        assert_eq!(cat.len(), Rule::ALL.len());
        for (entry, rule) in cat.iter().zip(Rule::ALL) {
            assert_eq!(entry.rule, rule);
            assert_eq!(Rule::from_name(rule.name()), Some(rule));
            assert_eq!(Rule::from_name(rule.ascii_name()), Some(rule));
        }
        let beta = &cat[0];
        assert_eq!((beta.lhs, beta.rhs), ("let x := e in e'", "e'{e/x}"));
        let lower = cat.iter().find(|r| r.rule == Rule::ULowerElim).unwrap();
        assert_eq!(lower.rhs, "e >! λ_. e'");
    }

    #[test]
    fn beta_let_at_root() {
        let e = QExp::let_("x", QExp::put_bool(true), QExp::var("x"));
        assert_eq!(fwd(Rule::BetaLet, &e, &Ctx::new(), &[]), Some(QExp::put_bool(true)));
        // not a let there
        assert_eq!(fwd(Rule::BetaLet, &e, &Ctx::new(), &[0]), None);
        assert_eq!(fwd(Rule::BetaLet, &e, &Ctx::new(), &[5]), None);
    }

    #[test]
    fn identity_is_removed_and_reinserted() {
        let ctx = Ctx::singleton("q", q());
        let e = QExp::uapp(Unitary::id(q()), QExp::var("q"));
        assert_eq!(fwd(Rule::UIdentity, &e, &ctx, &[]), Some(QExp::var("q")));
        let back = apply_rule(Rule::UIdentity, &QExp::var("q"), &ctx, &[], Direction::Backward).unwrap();
        assert_eq!(back, Some(e));
    }

    #[test]
    fn beta_rules_substitute() {
        let ctx = Ctx::singleton("q", q());
        let pair = QExp::letpair("a", "b", QExp::pair(QExp::var("q"), QExp::put_bool(false)), QExp::pair(QExp::var("b"), QExp::var("a")));
        assert_eq!(fwd(Rule::BetaTensor, &pair, &ctx, &[]), Some(QExp::pair(QExp::put_bool(false), QExp::var("q"))));
        let sum = QType::oplus(q(), q());
        let case = QExp::case(
            QExp::inj(Side::Right, sum, QExp::var("q")),
            "l",
            QExp::var("l"),
            "r",
            QExp::uapp(h(), QExp::var("r")),
        );
        assert_eq!(fwd(Rule::BetaOplus, &case, &ctx, &[]), Some(QExp::uapp(h(), QExp::var("q"))));
        let bang = QExp::letbang(QExp::put(FinType::Fin(3), 2), vec![QExp::put_bool(false), QExp::put_bool(false), QExp::put_bool(true)]);
        assert_eq!(fwd(Rule::BetaLower, &bang, &Ctx::new(), &[]), Some(QExp::put_bool(true)));
    }

    #[test]
    fn eta_tensor_contracts_and_expands() {
        let ctx = Ctx::singleton("p", QType::tensor(q(), q()));
        let e = QExp::letpair("a", "b", QExp::var("p"), QExp::pair(QExp::var("a"), QExp::var("b")));
        assert_eq!(fwd(Rule::EtaTensor, &e, &ctx, &[]), Some(QExp::var("p")));
        let swapped = QExp::letpair("a", "b", QExp::var("p"), QExp::pair(QExp::var("b"), QExp::var("a")));
        assert_eq!(fwd(Rule::EtaTensor, &swapped, &ctx, &[]), None);
        let back = apply_rule(Rule::EtaTensor, &QExp::var("p"), &ctx, &[], Direction::Backward).unwrap().unwrap();
        assert!(back.alpha_eq(&e));
        assert_eq!(apply_rule(Rule::EtaTensor, &QExp::var("q"), &Ctx::singleton("q", q()), &[], Direction::Backward).unwrap(), None);
    }

    #[test]
    fn eta_unit_reaches_one_representative() {
        let ctx = Ctx::singleton("q", q()).with("r", q());
        let a = QExp::letbang(QExp::var("q"), vec![QExp::letbang(QExp::var("r"), vec![QExp::put_unit(); 2]); 2]);
        let b = QExp::letbang(
            QExp::uapp(h(), QExp::var("r")),
            vec![QExp::letbang(QExp::meas(QExp::var("q")), vec![QExp::put_unit(); 2]); 2],
        );
        let ca = fwd(Rule::EtaUnit, &a, &ctx, &[]);
        let cb = fwd(Rule::EtaUnit, &b, &ctx, &[]).unwrap();
        // `a` already is the representative
        assert_eq!(ca, None);
        assert!(cb.alpha_eq(&a));
        assert!(equiv_check(&a, &b, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn commuting_conversion_lifts_out_of_parent() {
        let ctx = Ctx::singleton("p", QType::tensor(q(), q()));
        let inner = QExp::letpair("a", "b", QExp::var("p"), QExp::pair(QExp::var("b"), QExp::var("a")));
        let e = QExp::uapp(Unitary::named("SWAP").unwrap(), inner);
        let out = fwd(Rule::CcTensor, &e, &ctx, &[0]).unwrap();
        let want = QExp::letpair(
            "a",
            "b",
            QExp::var("p"),
            QExp::uapp(Unitary::named("SWAP").unwrap(), QExp::pair(QExp::var("b"), QExp::var("a"))),
        );
        assert!(out.alpha_eq(&want));
        assert!(equiv_check(&e, &out, &ctx, DEFAULT_TOL).unwrap());
        // a root has no parent
        assert_eq!(fwd(Rule::CcTensor, &e, &ctx, &[]), None);
    }

    #[test]
    fn commuting_conversion_respects_binders() {
        // let z := q in let y := z in y : the inner let mentions z, so it cannot leave
        let ctx = Ctx::singleton("q", q());
        let e = QExp::let_("z", QExp::var("q"), QExp::let_("y", QExp::var("z"), QExp::var("y")));
        assert_eq!(fwd(Rule::CcLet, &e, &ctx, &[1]), None);
        let ok = QExp::let_("z", QExp::put_bool(true), QExp::let_("y", QExp::var("q"), QExp::pair(QExp::var("y"), QExp::var("z"))));
        let out = fwd(Rule::CcLet, &ok, &ctx, &[1]).unwrap();
        assert!(matches!(&out, QExp::Let(_, e, _) if **e == QExp::var("q")));
        assert!(equiv_check(&ok, &out, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn case_lift_duplicates_frame() {
        let sum = QType::oplus(q(), q());
        let ctx = Ctx::singleton("s", sum.clone()).with("r", q());
        let case = QExp::case(QExp::var("s"), "a", QExp::var("a"), "b", QExp::uapp(h(), QExp::var("b")));
        let e = QExp::pair(QExp::var("r"), case);
        let out = fwd(Rule::CcOplus, &e, &ctx, &[1]).unwrap();
        let QExp::Case(_, _, l, _, r) = &out else { panic!("{out}") };
        assert!(matches!(l.as_ref(), QExp::Pair(..)) && matches!(r.as_ref(), QExp::Pair(..)));
        assert!(equiv_check(&e, &out, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn unitary_structure_rules() {
        let ctx = Ctx::singleton("q", q()).with("r", q());
        let x = Unitary::not();
        let e = QExp::uapp(Unitary::tensor(h(), x.clone()), QExp::pair(QExp::var("q"), QExp::var("r")));
        let out = fwd(Rule::UTensorIntro, &e, &ctx, &[]).unwrap();
        assert_eq!(out, QExp::pair(QExp::uapp(h(), QExp::var("q")), QExp::uapp(x.clone(), QExp::var("r"))));
        let back = apply_rule(Rule::UTensorIntro, &out, &ctx, &[], Direction::Backward).unwrap();
        assert_eq!(back, Some(e));

        let composed = QExp::uapp(h(), QExp::uapp(x.clone(), QExp::var("q")));
        let one = Ctx::singleton("q", q());
        let merged = fwd(Rule::UCompose, &composed, &one, &[]).unwrap();
        assert_eq!(merged, QExp::uapp(Unitary::compose(h(), x.clone()), QExp::var("q")));
        assert_eq!(apply_rule(Rule::UCompose, &merged, &one, &[], Direction::Backward).unwrap(), Some(composed));

        let dag = QExp::uapp(Unitary::adjoint(h()), QExp::uapp(h(), QExp::var("q")));
        assert_eq!(fwd(Rule::UDagger, &dag, &one, &[]), Some(QExp::var("q")));
        let wrong = QExp::uapp(Unitary::adjoint(h()), QExp::uapp(x, QExp::var("q")));
        assert_eq!(fwd(Rule::UDagger, &wrong, &one, &[]), None);
    }

    #[test]
    fn oplus_intro_keeps_the_injection() {
        let ctx = Ctx::singleton("q", q());
        let u = Unitary::direct_sum(h(), Unitary::id(QType::unit()));
        let e = QExp::uapp(u, QExp::inj(Side::Left, QType::oplus(q(), QType::unit()), QExp::var("q")));
        let out = fwd(Rule::UOplusIntro1, &e, &ctx, &[]).unwrap();
        assert_eq!(out, QExp::inj(Side::Left, QType::oplus(q(), QType::unit()), QExp::uapp(h(), QExp::var("q"))));
        assert_eq!(fwd(Rule::UOplusIntro2, &e, &ctx, &[]), None);
        assert!(equiv_check(&e, &out, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn lower_elim_needs_a_constant_family() {
        let ctx = Ctx::singleton("q", q()).with("r", q());
        let e = QExp::letbang(QExp::uapp(h(), QExp::var("q")), vec![QExp::var("r"), QExp::var("r")]);
        let out = fwd(Rule::ULowerElim, &e, &ctx, &[]).unwrap();
        assert_eq!(out, QExp::letbang(QExp::var("q"), vec![QExp::var("r"), QExp::var("r")]));
        assert!(equiv_check(&e, &out, &ctx, DEFAULT_TOL).unwrap());
        let one = Ctx::singleton("q", q());
        let varying = QExp::letbang(QExp::uapp(h(), QExp::var("q")), vec![QExp::put_bool(false), QExp::put_bool(true)]);
        assert_eq!(fwd(Rule::ULowerElim, &varying, &one, &[]), None);
    }

    #[test]
    fn axiom20_intro_negates_a_put() {
        let x = Unitary::from_equiv(not_equiv(), Assignment::new());
        let e = QExp::uapp(x, QExp::put_bool(false));
        assert_eq!(fwd(Rule::Axiom20Intro, &e, &Ctx::new(), &[]), Some(QExp::put_bool(true)));
    }
}
