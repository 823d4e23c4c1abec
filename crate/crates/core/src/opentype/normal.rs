//! Sum-of-products normal forms for open types, with derivations.
//!
//! Every open type is equivalent to a sum of clauses `Lower α ⊗ X1 ⊗ … ⊗ Xn`.
//! Two types are equivalent exactly when, for every multiset of variables,
//! the clauses carrying that multiset have the same total cardinality. The
//! canonical form sorts and merges clauses so that this check is equality.

use std::fmt;

use crate::syntax::{Equiv, FinType, OpenType};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub card: FinType,
    /// Variables in tensor order; a multiset once canonicalised.
    pub vars: Vec<String>,
}

impl Clause {
    pub fn new(card: FinType, vars: Vec<String>) -> Self {
        Clause { card, vars }
    }

    /// `Lower α` alone, or `Lower α ⊗ (X1 ⊗ (X2 ⊗ …))`.
    pub fn to_type(&self) -> OpenType {
        if self.vars.is_empty() {
            OpenType::Lower(self.card.clone())
        } else {
            OpenType::tensor(OpenType::Lower(self.card.clone()), vars_type(&self.vars))
        }
    }

    fn sort_key(&self) -> (Vec<String>, usize) {
        (self.vars.clone(), self.card.card())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.card)?;
        for x in &self.vars {
            write!(f, " {x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NormalForm {
    pub clauses: Vec<Clause>,
}

impl NormalForm {
    /// Right-nested sum of the clause types; `Lower Void` when empty.
    pub fn to_type(&self) -> OpenType {
        sum_type(&self.clauses)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn vars_type(vars: &[String]) -> OpenType {
    nest(Op::Tensor, &vars.iter().map(|x| OpenType::var(x)).collect::<Vec<_>>())
}

fn sum_type(clauses: &[Clause]) -> OpenType {
    if clauses.is_empty() {
        OpenType::Lower(FinType::Void)
    } else {
        nest(Op::Oplus, &clauses.iter().map(Clause::to_type).collect::<Vec<_>>())
    }
}

fn void() -> OpenType {
    OpenType::Lower(FinType::Void)
}

/// The two monoidal structures, so list manipulations are written once.
#[derive(Clone, Copy)]
enum Op {
    Tensor,
    Oplus,
}

impl Op {
    fn node(self, a: OpenType, b: OpenType) -> OpenType {
        match self {
            Op::Tensor => OpenType::tensor(a, b),
            Op::Oplus => OpenType::oplus(a, b),
        }
    }

    fn swap(self, a: &OpenType, b: &OpenType) -> Equiv {
        match self {
            Op::Tensor => Equiv::SwapTensor(a.clone(), b.clone()),
            Op::Oplus => Equiv::SwapOplus(a.clone(), b.clone()),
        }
    }

    /// `a · (b · c) → (a · b) · c`
    fn assoc(self, a: &OpenType, b: &OpenType, c: &OpenType) -> Equiv {
        match self {
            Op::Tensor => Equiv::AssocTensor(a.clone(), b.clone(), c.clone()),
            Op::Oplus => Equiv::AssocOplus(a.clone(), b.clone(), c.clone()),
        }
    }

    fn cong(self, f: Equiv, g: Equiv) -> Equiv {
        match self {
            Op::Tensor => Equiv::cong_tensor(f, g),
            Op::Oplus => Equiv::cong_oplus(f, g),
        }
    }
}

/// Right-nested combination of a non-empty list.
fn nest(op: Op, items: &[OpenType]) -> OpenType {
    let (last, init) = items.split_last().expect("nest of an empty list");
    init.iter().rev().fold(last.clone(), |acc, t| op.node(t.clone(), acc))
}

/// Lift an equivalence on the suffix starting at `k` to the whole list.
fn lift(op: Op, items: &[OpenType], k: usize, g: Equiv) -> Equiv {
    items[..k].iter().rev().fold(g, |acc, t| op.cong(Equiv::Refl(t.clone()), acc))
}

/// Exchange items `k` and `k + 1`.
fn swap_adjacent(op: Op, items: &[OpenType], k: usize) -> Equiv {
    let (a, b) = (&items[k], &items[k + 1]);
    let g = if k + 2 == items.len() {
        op.swap(a, b)
    } else {
        let rest = nest(op, &items[k + 2..]);
        Equiv::chain(
            op.node(a.clone(), op.node(b.clone(), rest.clone())),
            [
                op.assoc(a, b, &rest),
                op.cong(op.swap(a, b), Equiv::Refl(rest.clone())),
                Equiv::symm(op.assoc(b, a, &rest)),
            ],
        )
    };
    lift(op, items, k, g)
}

/// Replace the two items at `k`, `k + 1` by one, given `pair: a · b ≃ c`.
fn fuse_adjacent(op: Op, items: &[OpenType], k: usize, pair: Equiv) -> Equiv {
    let g = if k + 2 == items.len() {
        pair
    } else {
        let rest = nest(op, &items[k + 2..]);
        Equiv::trans(
            op.assoc(&items[k], &items[k + 1], &rest),
            op.cong(pair, Equiv::Refl(rest)),
        )
    };
    lift(op, items, k, g)
}

/// `sum(a) ⊕ sum(b) ≃ sum(a ++ b)`
fn concat(a: &[Clause], b: &[Clause]) -> Equiv {
    match a {
        [] => Equiv::LUnitOplus(sum_type(b)),
        _ if b.is_empty() => {
            let ta = sum_type(a);
            Equiv::trans(Equiv::SwapOplus(ta.clone(), void()), Equiv::LUnitOplus(ta))
        }
        [c] => Equiv::Refl(OpenType::oplus(c.to_type(), sum_type(b))),
        [c, rest @ ..] => Equiv::trans(
            Equiv::symm(Equiv::AssocOplus(c.to_type(), sum_type(rest), sum_type(b))),
            Equiv::cong_oplus(Equiv::Refl(c.to_type()), concat(rest, b)),
        ),
    }
}

/// `vars(xs) ⊗ vars(ys) ≃ vars(xs ++ ys)` for non-empty lists.
fn vars_concat(xs: &[String], ys: &[String]) -> Equiv {
    match xs {
        [x] => Equiv::Refl(OpenType::tensor(OpenType::var(x), vars_type(ys))),
        [x, rest @ ..] => Equiv::trans(
            Equiv::symm(Equiv::AssocTensor(OpenType::var(x), vars_type(rest), vars_type(ys))),
            Equiv::cong_tensor(Equiv::Refl(OpenType::var(x)), vars_concat(rest, ys)),
        ),
        [] => unreachable!("vars_concat of an empty list"),
    }
}

/// `clause(c) ⊗ clause(d) ≃ Lower(α × β) ⊗ (xs ++ ys)`
fn clause_mul(c: &Clause, d: &Clause) -> (Clause, Equiv) {
    let (la, lb) = (OpenType::Lower(c.card.clone()), OpenType::Lower(d.card.clone()));
    let merge = Equiv::LowerTensor(c.card.clone(), d.card.clone());
    let out = Clause::new(
        FinType::prod(c.card.clone(), d.card.clone()),
        c.vars.iter().chain(&d.vars).cloned().collect(),
    );
    let f = match (c.vars.is_empty(), d.vars.is_empty()) {
        (true, true) => merge,
        (true, false) => {
            let ys = vars_type(&d.vars);
            Equiv::trans(
                Equiv::AssocTensor(la, lb, ys.clone()),
                Equiv::cong_tensor(merge, Equiv::Refl(ys)),
            )
        }
        (false, true) => {
            let xs = vars_type(&c.vars);
            Equiv::chain(
                OpenType::tensor(c.to_type(), lb.clone()),
                [
                    Equiv::symm(Equiv::AssocTensor(la.clone(), xs.clone(), lb.clone())),
                    Equiv::cong_tensor(Equiv::Refl(la.clone()), Equiv::SwapTensor(xs.clone(), lb.clone())),
                    Equiv::AssocTensor(la, lb, xs.clone()),
                    Equiv::cong_tensor(merge, Equiv::Refl(xs)),
                ],
            )
        }
        (false, false) => {
            let (xs, ys) = (vars_type(&c.vars), vars_type(&d.vars));
            let all = vars_type(&out.vars);
            let inner = Equiv::chain(
                OpenType::tensor(xs.clone(), d.to_type()),
                [
                    Equiv::AssocTensor(xs.clone(), lb.clone(), ys.clone()),
                    Equiv::cong_tensor(Equiv::SwapTensor(xs.clone(), lb.clone()), Equiv::Refl(ys.clone())),
                    Equiv::symm(Equiv::AssocTensor(lb.clone(), xs, ys)),
                    Equiv::cong_tensor(Equiv::Refl(lb.clone()), vars_concat(&c.vars, &d.vars)),
                ],
            );
            Equiv::chain(
                OpenType::tensor(c.to_type(), d.to_type()),
                [
                    Equiv::symm(Equiv::AssocTensor(la.clone(), vars_type(&c.vars), d.to_type())),
                    Equiv::cong_tensor(Equiv::Refl(la.clone()), inner),
                    Equiv::AssocTensor(la, lb, all.clone()),
                    Equiv::cong_tensor(merge, Equiv::Refl(all)),
                ],
            )
        }
    };
    (out, f)
}

/// `clause(c) ⊗ sum(ds) ≃ sum(c·d for d in ds)` for non-empty `ds`.
fn distr_right(c: &Clause, ds: &[Clause]) -> (Vec<Clause>, Equiv) {
    match ds {
        [d] => {
            let (cd, f) = clause_mul(c, d);
            (vec![cd], f)
        }
        [d, rest @ ..] => {
            let (cd, f) = clause_mul(c, d);
            let (tail, g) = distr_right(c, rest);
            let step = Equiv::trans(
                Equiv::Distr(c.to_type(), d.to_type(), sum_type(rest)),
                Equiv::cong_oplus(f, g),
            );
            (std::iter::once(cd).chain(tail).collect(), step)
        }
        [] => unreachable!("distr_right over an empty sum"),
    }
}

/// `sum(a) ⊗ sum(b) ≃ sum(a_i · b_j)`, enumerated with `i` outermost.
fn product(a: &[Clause], b: &[Clause]) -> (Vec<Clause>, Equiv) {
    if a.is_empty() {
        return (vec![], Equiv::LZero(sum_type(b)));
    }
    if b.is_empty() {
        let ta = sum_type(a);
        return (vec![], Equiv::trans(Equiv::SwapTensor(ta.clone(), void()), Equiv::LZero(ta)));
    }
    match a {
        [c] => distr_right(c, b),
        [c, rest @ ..] => {
            let (tb, tc, tr) = (sum_type(b), c.to_type(), sum_type(rest));
            let (n1, f1) = distr_right(c, b);
            let (n2, f2) = product(rest, b);
            let step = Equiv::chain(
                OpenType::tensor(sum_type(a), tb.clone()),
                [
                    Equiv::SwapTensor(sum_type(a), tb.clone()),
                    Equiv::Distr(tb.clone(), tc.clone(), tr.clone()),
                    Equiv::cong_oplus(Equiv::SwapTensor(tb.clone(), tc), Equiv::SwapTensor(tb, tr)),
                    Equiv::cong_oplus(f1, f2),
                    concat(&n1, &n2),
                ],
            );
            (n1.into_iter().chain(n2).collect(), step)
        }
        [] => unreachable!(),
    }
}

/// The sum-of-products form of `ty` and a derivation `ty ≃ form`. Clauses
/// appear in the order the recursion produces them, with variables in
/// occurrence order.
pub fn normalize_type(ty: &OpenType) -> (NormalForm, Equiv) {
    let (clauses, f) = normalize_clauses(ty);
    (NormalForm { clauses }, f)
}

fn normalize_clauses(ty: &OpenType) -> (Vec<Clause>, Equiv) {
    match ty {
        OpenType::Var(x) => (
            vec![Clause::new(FinType::Unit, vec![x.clone()])],
            Equiv::symm(Equiv::LUnitTensor(ty.clone())),
        ),
        OpenType::Lower(a) => (vec![Clause::new(a.clone(), vec![])], Equiv::Refl(ty.clone())),
        OpenType::Oplus(s, t) => {
            let (ns, fs) = normalize_clauses(s);
            let (nt, ft) = normalize_clauses(t);
            let f = Equiv::trans(Equiv::cong_oplus(fs, ft), concat(&ns, &nt));
            (ns.into_iter().chain(nt).collect(), f)
        }
        OpenType::Tensor(s, t) => {
            let (ns, fs) = normalize_clauses(s);
            let (nt, ft) = normalize_clauses(t);
            let (n, g) = product(&ns, &nt);
            (n, Equiv::trans(Equiv::cong_tensor(fs, ft), g))
        }
    }
}

/// Accumulates a chain of rewrites of a clause list.
struct Rewriter {
    start: OpenType,
    clauses: Vec<Clause>,
    steps: Vec<Equiv>,
}

impl Rewriter {
    fn types(&self) -> Vec<OpenType> {
        self.clauses.iter().map(Clause::to_type).collect()
    }

    /// `clause ≃ Lower Void` for a clause of cardinality zero.
    fn vanish(c: &Clause) -> Equiv {
        let relabel = if c.card == FinType::Void {
            Equiv::Refl(OpenType::Lower(FinType::Void))
        } else {
            Equiv::Relabel(c.card.clone(), FinType::Void)
        };
        if c.vars.is_empty() {
            relabel
        } else {
            let vs = vars_type(&c.vars);
            Equiv::trans(Equiv::cong_tensor(relabel, Equiv::Refl(vs.clone())), Equiv::LZero(vs))
        }
    }

    fn drop_empty(&mut self) {
        while let Some(i) = self.clauses.iter().position(|c| c.card.card() == 0) {
            let items = self.types();
            let n = items.len();
            let gone = Self::vanish(&self.clauses[i]);
            let step = if n == 1 {
                gone
            } else if i + 1 < n {
                let rest = nest(Op::Oplus, &items[i + 1..]);
                lift(
                    Op::Oplus,
                    &items,
                    i,
                    Equiv::trans(Equiv::cong_oplus(gone, Equiv::Refl(rest.clone())), Equiv::LUnitOplus(rest)),
                )
            } else {
                let prev = items[i - 1].clone();
                lift(
                    Op::Oplus,
                    &items,
                    i - 1,
                    Equiv::chain(
                        OpenType::oplus(prev.clone(), items[i].clone()),
                        [
                            Equiv::cong_oplus(Equiv::Refl(prev.clone()), gone),
                            Equiv::SwapOplus(prev.clone(), void()),
                            Equiv::LUnitOplus(prev),
                        ],
                    ),
                )
            };
            self.steps.push(step);
            self.clauses.remove(i);
        }
    }

    fn sort_vars(&mut self) {
        for i in 0..self.clauses.len() {
            loop {
                let vars = &self.clauses[i].vars;
                let Some(k) = (0..vars.len().saturating_sub(1)).find(|&k| vars[k] > vars[k + 1]) else {
                    break;
                };
                let var_types: Vec<OpenType> = vars.iter().map(|x| OpenType::var(x)).collect();
                let inner = swap_adjacent(Op::Tensor, &var_types, k);
                let lowered = Equiv::cong_tensor(Equiv::Refl(OpenType::Lower(self.clauses[i].card.clone())), inner);
                self.steps.push(lift(Op::Oplus, &self.types(), i, lowered_in_tail(&self.types(), i, lowered)));
                self.clauses[i].vars.swap(k, k + 1);
            }
        }
    }

    fn sort_clauses(&mut self) {
        while let Some(k) = (0..self.clauses.len().saturating_sub(1))
            .find(|&k| self.clauses[k].sort_key() > self.clauses[k + 1].sort_key())
        {
            self.steps.push(swap_adjacent(Op::Oplus, &self.types(), k));
            self.clauses.swap(k, k + 1);
        }
    }

    fn merge_equal_vars(&mut self) {
        while let Some(k) = (0..self.clauses.len().saturating_sub(1))
            .find(|&k| self.clauses[k].vars == self.clauses[k + 1].vars)
        {
            let (c, d) = (&self.clauses[k], &self.clauses[k + 1]);
            let (la, lb) = (OpenType::Lower(c.card.clone()), OpenType::Lower(d.card.clone()));
            let sum = Equiv::LowerOplus(c.card.clone(), d.card.clone());
            let merged = Clause::new(FinType::sum(c.card.clone(), d.card.clone()), c.vars.clone());
            let pair = if c.vars.is_empty() {
                sum
            } else {
                let vs = vars_type(&c.vars);
                Equiv::chain(
                    OpenType::oplus(c.to_type(), d.to_type()),
                    [
                        Equiv::cong_oplus(Equiv::SwapTensor(la.clone(), vs.clone()), Equiv::SwapTensor(lb.clone(), vs.clone())),
                        Equiv::symm(Equiv::Distr(vs.clone(), la, lb)),
                        Equiv::cong_tensor(Equiv::Refl(vs.clone()), sum),
                        Equiv::SwapTensor(vs, OpenType::Lower(merged.card.clone())),
                    ],
                )
            };
            self.steps.push(fuse_adjacent(Op::Oplus, &self.types(), k, pair));
            self.clauses[k] = merged;
            self.clauses.remove(k + 1);
        }
    }

    fn relabel_cards(&mut self) {
        for i in 0..self.clauses.len() {
            let card = &self.clauses[i].card;
            let target = FinType::Fin(card.card());
            if *card == target {
                continue;
            }
            let relabel = Equiv::Relabel(card.clone(), target.clone());
            let g = if self.clauses[i].vars.is_empty() {
                relabel
            } else {
                Equiv::cong_tensor(relabel, Equiv::Refl(vars_type(&self.clauses[i].vars)))
            };
            let items = self.types();
            self.steps.push(lift(Op::Oplus, &items, i, lowered_in_tail(&items, i, g)));
            self.clauses[i].card = target;
        }
    }

    fn finish(self) -> (NormalForm, Equiv) {
        (NormalForm { clauses: self.clauses }, Equiv::chain(self.start, self.steps))
    }
}

/// Extend a rewrite of item `i` to the suffix starting at `i`.
fn lowered_in_tail(items: &[OpenType], i: usize, g: Equiv) -> Equiv {
    if i + 1 == items.len() {
        g
    } else {
        Equiv::cong_oplus(g, Equiv::Refl(nest(Op::Oplus, &items[i + 1..])))
    }
}

/// The canonical form of `ty`: no empty clauses, sorted variables, one
/// clause per variable multiset, cardinalities as `Fin n`, clauses sorted.
pub fn canonical_form(ty: &OpenType) -> (NormalForm, Equiv) {
    let (clauses, f) = normalize_clauses(ty);
    let mut rw = Rewriter { start: ty.clone(), clauses, steps: vec![f] };
    rw.drop_empty();
    rw.sort_vars();
    rw.sort_clauses();
    rw.merge_equal_vars();
    rw.relabel_cards();
    rw.finish()
}

/// A derivation `a ≃ b` when the two types are equivalent.
pub fn decide_equiv(a: &OpenType, b: &OpenType) -> Option<Equiv> {
    let (na, fa) = canonical_form(a);
    let (nb, fb) = canonical_form(b);
    (na == nb).then(|| Equiv::trans(fa, Equiv::symm(fb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opentype::action::equiv_basis_bijection;
    use crate::opentype::basis::basis_card;
    use crate::syntax::Assignment;

    fn x() -> OpenType {
        OpenType::var("X")
    }
    fn y() -> OpenType {
        OpenType::var("Y")
    }
    fn z() -> OpenType {
        OpenType::var("Z")
    }
    fn lower(a: FinType) -> OpenType {
        OpenType::lower(a)
    }

    fn assignments(ty: &OpenType) -> Vec<Assignment> {
        let mut out = vec![Assignment::new()];
        for v in ty.vars() {
            out = out
                .into_iter()
                .flat_map(|m| {
                    [FinType::Unit, FinType::Bool, FinType::Fin(3)].map(|a| m.clone().with(&v, a))
                })
                .collect();
        }
        out
    }

    fn assert_witness(ty: &OpenType, nf: &NormalForm, f: &Equiv) {
        let (src, dst) = f.endpoints().unwrap();
        assert_eq!(&src, ty);
        assert_eq!(dst, nf.to_type());
        for m in assignments(ty) {
            let perm = equiv_basis_bijection(f, &m).unwrap();
            assert_eq!(perm.len(), basis_card(ty, &m).unwrap());
        }
    }

    #[test]
    fn documented_normal_forms() {
        let (n, f) = normalize_type(&x());
        assert_eq!(n.clauses, vec![Clause::new(FinType::Unit, vec!["X".into()])]);
        assert_witness(&x(), &n, &f);
        let (n, _) = normalize_type(&lower(FinType::Bool));
        assert_eq!(n.clauses, vec![Clause::new(FinType::Bool, vec![])]);
        let t = OpenType::tensor(x(), lower(FinType::Bool));
        let (n, f) = normalize_type(&t);
        assert_eq!(n.clauses, vec![Clause::new(FinType::prod(FinType::Unit, FinType::Bool), vec!["X".into()])]);
        assert_eq!(n.clauses[0].card.card(), 2);
        assert_witness(&t, &n, &f);
    }

    #[test]
    fn products_of_sums_distribute() {
        let t = OpenType::tensor(
            OpenType::oplus(x(), lower(FinType::Bool)),
            OpenType::oplus(OpenType::tensor(y(), x()), OpenType::oplus(lower(FinType::Void), z())),
        );
        let (n, f) = normalize_type(&t);
        assert_eq!(n.clauses.len(), 6);
        assert_eq!(n.clauses[0].vars, vec!["X", "Y", "X"]);
        assert_witness(&t, &n, &f);
        let (c, g) = canonical_form(&t);
        assert_witness(&t, &c, &g);
        // X·YX + X·Z + YX·2 + 2Z, with the empty clauses dropped
        assert_eq!(c.clauses.len(), 4);
        assert!(c.clauses.iter().all(|cl| cl.vars.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn decide_examples() {
        let two = OpenType::oplus(lower(FinType::Unit), lower(FinType::Unit));
        let f = decide_equiv(&lower(FinType::Bool), &two).unwrap();
        assert_eq!(f.endpoints().unwrap(), (lower(FinType::Bool), two));
        assert!(decide_equiv(&x(), &lower(FinType::Bool)).is_none());
        let l = OpenType::tensor(x(), OpenType::oplus(y(), z()));
        let r = OpenType::oplus(OpenType::tensor(x(), y()), OpenType::tensor(x(), z()));
        let f = decide_equiv(&l, &r).unwrap();
        assert_eq!(f.endpoints().unwrap(), (l.clone(), r));
        for m in assignments(&l) {
            equiv_basis_bijection(&f, &m).unwrap();
        }
    }

    #[test]
    fn empty_and_merged_clauses() {
        let void_x = OpenType::tensor(lower(FinType::Void), x());
        let f = decide_equiv(&void_x, &lower(FinType::Void)).unwrap();
        assert_eq!(equiv_basis_bijection(&f, &Assignment::new().with("X", FinType::Bool)).unwrap(), Vec::<usize>::new());
        let xx = OpenType::oplus(x(), x());
        let bx = OpenType::tensor(lower(FinType::Bool), x());
        let f = decide_equiv(&xx, &bx).unwrap();
        let perm = equiv_basis_bijection(&f, &Assignment::new().with("X", FinType::Fin(3))).unwrap();
        assert_eq!(perm.len(), 6);
        assert!(decide_equiv(&xx, &OpenType::tensor(x(), x())).is_none());
    }
}
