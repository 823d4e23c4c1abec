//! Bounded bidirectional breadth-first search for derivations.

use std::collections::HashMap;
use std::fmt;

use log::debug;

use crate::linalg::DEFAULT_TOL;
use crate::semantics::equiv_report_at;
use crate::syntax::{Ctx, QExp};
use crate::typecheck::infer;

use super::rules::{apply_rule, rewrite_site, rule_catalog, Direction, Rule, Site};
use super::RewriteError;

#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Total number of steps on both sides together.
    pub depth: usize,
    /// Terms visited before giving up.
    pub max_terms: usize,
    /// Terms larger than this many nodes are not explored.
    pub max_size: usize,
    /// Tolerance of the semantic referee.
    pub tol: f64,
    pub rules: Vec<Rule>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { depth: 8, max_terms: 100_000, max_size: 200, tol: DEFAULT_TOL, rules: Rule::ALL.to_vec() }
    }
}

impl SearchLimits {
    pub fn with_depth(depth: usize) -> Self {
        SearchLimits { depth, ..SearchLimits::default() }
    }

    pub fn without(mut self, excluded: &[Rule]) -> Self {
        self.rules.retain(|r| !excluded.contains(r));
        self
    }
}

/// One rewrite. `position` is where the rule's left-hand side sits: in the
/// term before the step when going forward, in the term after it when going
/// backward. Commuting conversions point at the lifted elimination.
#[derive(Clone, Debug)]
pub struct Step {
    pub rule: Rule,
    pub position: Vec<usize>,
    pub direction: Direction,
    pub result: QExp,
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub start: QExp,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn end(&self) -> &QExp {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-run every step, returning the final term.
    pub fn replay(&self, ctx: &Ctx) -> Result<QExp, RewriteError> {
        let mut cur = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let fits = |got: Option<QExp>, want: &QExp| got.is_some_and(|g| g.alpha_eq(want));
            let ok = match step.direction {
                Direction::Forward => fits(apply_rule(step.rule, &cur, ctx, &step.position, Direction::Forward)?, &step.result),
                Direction::Backward => {
                    fits(apply_rule(step.rule, &step.result, ctx, &step.position, Direction::Forward)?, &cur)
                        || fits(apply_rule(step.rule, &cur, ctx, &step.position, Direction::Backward)?, &step.result)
                }
            };
            if !ok {
                return Err(RewriteError::Replay { step: i + 1, rule: step.rule });
            }
            cur = step.result.clone();
        }
        Ok(cur)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "  0. {}", self.start)?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "  {}. {} {} at {:?}: {}", i + 1, s.rule, s.direction, s.position, s.result)?;
        }
        Ok(())
    }
}

/// [`prove_equiv_with`] under the default limits at the given depth.
pub fn prove_equiv(e1: &QExp, e2: &QExp, ctx: &Ctx, depth: usize) -> Result<Option<Derivation>, RewriteError> {
    prove_equiv_with(e1, e2, ctx, &SearchLimits::with_depth(depth))
}

struct Node {
    term: QExp,
    /// Predecessor index and the step that produced this node from it.
    via: Option<(usize, Rule, Vec<usize>, Direction)>,
}

struct Side {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(root: &QExp) -> Side {
        let mut index = HashMap::new();
        index.insert(key(root), 0);
        Side { nodes: vec![Node { term: root.clone(), via: None }], index, frontier: vec![0] }
    }

    /// Steps from the root to node `i`, root first.
    fn path(&self, mut i: usize) -> Vec<(usize, Rule, Vec<usize>, Direction, usize)> {
        let mut out = Vec::new();
        while let Some((p, rule, pos, dir)) = &self.nodes[i].via {
            out.push((*p, *rule, pos.clone(), *dir, i));
            i = *p;
        }
        out.reverse();
        out
    }
}

fn key(e: &QExp) -> String {
    e.alpha_normalize().to_string()
}

/// A rule applied at a position in one direction, and the term it yields.
type Successor = (Rule, Vec<usize>, Direction, QExp);

/// Every single-step rewrite of `e` in the search directions.
fn successors(e: &QExp, ctx: &Ctx, rules: &[(Rule, Direction)]) -> Result<Vec<Successor>, RewriteError> {
    let mut out = Vec::new();
    for pos in e.positions() {
        let Some(mut site) = Site::new(e, ctx, &pos) else { continue };
        let arity = site.term.children().len();
        for &(rule, dir) in rules {
            if rule.lifts_child() {
                for k in 0..arity {
                    if let Some(new) = rewrite_site(rule, &mut site, Some(k), dir, &pos)? {
                        let mut at = pos.clone();
                        at.push(k);
                        out.extend(e.replace_at(&pos, new).map(|t| (rule, at, dir, t)));
                    }
                }
            } else if let Some(new) = rewrite_site(rule, &mut site, None, dir, &pos)? {
                out.extend(e.replace_at(&pos, new).map(|t| (rule, pos.clone(), dir, t)));
            }
        }
    }
    Ok(out)
}

/// Search for a derivation of `e1 ≈ e2` by rewriting both ends until they
/// meet up to renaming of bound variables. Exhausting the limits is
/// `Ok(None)`. A derivation is only returned after it has been replayed and
/// every intermediate term has been checked against `e1` semantically.
pub fn prove_equiv_with(e1: &QExp, e2: &QExp, ctx: &Ctx, limits: &SearchLimits) -> Result<Option<Derivation>, RewriteError> {
    let directions: Vec<(Rule, Direction)> = rule_catalog()
        .into_iter()
        .filter(|r| limits.rules.contains(&r.rule))
        .map(|r| (r.rule, r.search))
        .collect();
    let mut sides = [Side::new(e1), Side::new(e2)];
    let mut meeting = sides[1].index.get(&key(e1)).map(|&j| (0, j));
    let mut spent = 0;
    while meeting.is_none() && spent < limits.depth {
        // grow the smaller live frontier
        let s = match (sides[0].frontier.len(), sides[1].frontier.len()) {
            (0, 0) => break,
            (0, _) => 1,
            (a, b) if b > 0 && b < a => 1,
            _ => 0,
        };
        spent += 1;
        let frontier = std::mem::take(&mut sides[s].frontier);
        'level: for i in frontier {
            let term = sides[s].nodes[i].term.clone();
            for (rule, pos, dir, next) in successors(&term, ctx, &directions)? {
                if next.size() > limits.max_size {
                    continue;
                }
                let k = key(&next);
                if sides[s].index.contains_key(&k) {
                    continue;
                }
                let id = sides[s].nodes.len();
                sides[s].nodes.push(Node { term: next, via: Some((i, rule, pos, dir)) });
                sides[s].frontier.push(id);
                if let Some(&j) = sides[1 - s].index.get(&k) {
                    meeting = Some(if s == 0 { (id, j) } else { (j, id) });
                    sides[s].index.insert(k, id);
                    break 'level;
                }
                sides[s].index.insert(k, id);
            }
            if sides[0].nodes.len() + sides[1].nodes.len() > limits.max_terms {
                debug!("search gave up after {} terms", limits.max_terms);
                return Ok(None);
            }
        }
        debug!("level {spent}: {} + {} terms", sides[0].nodes.len(), sides[1].nodes.len());
    }
    let Some((a, b)) = meeting else { return Ok(None) };

    let mut steps: Vec<Step> = sides[0]
        .path(a)
        .into_iter()
        .map(|(_, rule, position, direction, to)| Step { rule, position, direction, result: sides[0].nodes[to].term.clone() })
        .collect();
    for (from, rule, position, direction, _) in sides[1].path(b).into_iter().rev() {
        steps.push(Step { rule, position, direction: direction.flip(), result: sides[1].nodes[from].term.clone() });
    }
    let derivation = Derivation { start: e1.clone(), steps };
    let end = derivation.replay(ctx)?;
    if !end.alpha_eq(e2) {
        return Err(RewriteError::Replay { step: derivation.len(), rule: derivation.steps.last().map_or(Rule::BetaLet, |s| s.rule) });
    }
    referee(&derivation, ctx, limits.tol)?;
    Ok(Some(derivation))
}

/// Check every intermediate term against the start in the semantics.
fn referee(d: &Derivation, ctx: &Ctx, tol: f64) -> Result<(), RewriteError> {
    let ty = infer(ctx, &d.start)?;
    for (i, s) in d.steps.iter().enumerate() {
        if !equiv_report_at(&d.start, &s.result, ctx, &ty, tol)?.equal {
            return Err(RewriteError::Referee { step: i + 1, rule: s.rule, term: s.result.to_string() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::equiv_check;
    use crate::syntax::unitary::not_equiv;
    use crate::syntax::{Assignment, Equiv, FinType, OpenType, QType, Unitary};

    #[test]
    fn not_intro_in_one_step() {
        let x = Unitary::from_equiv(not_equiv(), Assignment::new());
        let d = prove_equiv(&QExp::uapp(x, QExp::put_bool(false)), &QExp::put_bool(true), &Ctx::new(), 8)
            .unwrap()
            .unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.steps[0].rule, Rule::Axiom20Intro);
    }

    #[test]
    fn swap_intro_closes() {
        let m = Assignment::new().with("X", FinType::Bool).with("Y", FinType::Bool);
        let swap = Unitary::from_equiv(Equiv::SwapTensor(OpenType::var("X"), OpenType::var("Y")), m);
        let ctx = Ctx::singleton("a", QType::qubit()).with("b", QType::qubit());
        let lhs = QExp::uapp(swap, QExp::pair(QExp::var("a"), QExp::var("b")));
        let rhs = QExp::pair(QExp::var("b"), QExp::var("a"));
        let d = prove_equiv(&lhs, &rhs, &ctx, 8).unwrap().unwrap();
        assert!(d.replay(&ctx).unwrap().alpha_eq(&rhs));
    }

    #[test]
    fn measurement_is_not_provably_identity() {
        let ctx = Ctx::singleton("q", QType::qubit());
        let meas = QExp::meas(QExp::var("q"));
        assert!(prove_equiv(&QExp::var("q"), &meas, &ctx, 8).unwrap().is_none());
        assert!(!equiv_check(&QExp::var("q"), &meas, &ctx, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn backward_steps_replay() {
        // (H ∘ X) # q is split by the search, so the derivation from the
        // nested form runs U-COMPOSE forward and the reverse runs it backward.
        let h = Unitary::named("H").unwrap();
        let x = Unitary::not();
        let ctx = Ctx::singleton("q", QType::qubit());
        let nested = QExp::uapp(h.clone(), QExp::uapp(x.clone(), QExp::var("q")));
        let merged = QExp::uapp(Unitary::compose(h, x), QExp::var("q"));
        let there = prove_equiv(&nested, &merged, &ctx, 2).unwrap().unwrap();
        let back = prove_equiv(&merged, &nested, &ctx, 2).unwrap().unwrap();
        assert_eq!(there.steps[0].direction, Direction::Forward);
        assert_eq!(back.steps[0].direction, Direction::Backward);
        assert!(back.replay(&ctx).unwrap().alpha_eq(&nested));
    }

    #[test]
    fn identical_terms_need_no_steps() {
        let ctx = Ctx::singleton("q", QType::qubit());
        let e = QExp::let_("a", QExp::var("q"), QExp::var("a"));
        let f = QExp::let_("b", QExp::var("q"), QExp::var("b"));
        assert!(prove_equiv(&e, &f, &ctx, 0).unwrap().unwrap().is_empty());
    }
}
