//! Density-matrix semantics: every well-typed expression denotes a
//! superoperator from the joint state of its context to its result type.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::linalg::{Complex, ComplexMatrix, Discrepancy, LinalgError, Superoperator};
use crate::opentype::{equiv_basis_bijection, OpenTypeError};
use crate::syntax::{Ctx, FinType, Name, QExp, QType, Side, Unitary, UnitaryError};
use crate::typecheck::{check, infer, TypeError};

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error(transparent)]
    OpenType(#[from] OpenTypeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("index {index} is outside {ty}")]
    Index { ty: FinType, index: usize },
    #[error("wire orders {from} and {to} do not hold the same wires")]
    WireMismatch { from: WireOrder, to: WireOrder },
    #[error("terms have different types: {0} and {1}")]
    TypeDisagreement(QType, QType),
    #[error("expected a {expected} type, found {found}")]
    Shape { expected: &'static str, found: QType },
}

type SResult<T> = Result<T, SemanticsError>;

/// Layout of a context's joint state: the first wire is the most
/// significant tensor factor.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WireOrder(pub Vec<(Name, QType)>);

impl WireOrder {
    /// Lexicographic by name.
    pub fn canonical(ctx: &Ctx) -> Self {
        WireOrder(ctx.iter().map(|(x, t)| (x.clone(), t.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|(_, t)| t.dim()).product()
    }

    pub fn to_ctx(&self) -> Ctx {
        Ctx::from_pairs(self.0.iter().cloned())
    }

    /// Wires in `keep` and the remaining wires, each in their original order.
    fn partition(&self, keep: &BTreeSet<Name>) -> (WireOrder, WireOrder) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(x, _)| keep.contains(x));
        (WireOrder(a), WireOrder(b))
    }

    fn then(&self, other: &WireOrder) -> WireOrder {
        WireOrder(self.0.iter().chain(&other.0).cloned().collect())
    }

    fn prepend(&self, wires: &[(Name, QType)]) -> WireOrder {
        WireOrder(wires.iter().chain(&self.0).cloned().collect())
    }
}

impl fmt::Display for WireOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}: {t}")?;
        }
        write!(f, "]")
    }
}

/// Diagonal matrix unit `|a⟩⟨a|` on `α`.
pub fn delta(alpha: &FinType, a: usize) -> SResult<ComplexMatrix> {
    let n = alpha.card();
    if a >= n {
        return Err(SemanticsError::Index { ty: alpha.clone(), index: a });
    }
    Ok(ComplexMatrix::unit(n, n, a, a))
}

/// The permutation realising `(α1 + α2) × β ≅ (α1 × β) + (α2 × β)` under the
/// left-major, left-block-first enumerations. With those conventions the two
/// enumerations coincide, which this builds point by point rather than assumes.
pub fn distr_matrix(alpha1: &FinType, alpha2: &FinType, beta: usize) -> ComplexMatrix {
    let (n1, n2) = (alpha1.card(), alpha2.card());
    let mut perm = vec![0; (n1 + n2) * beta];
    for s in 0..n1 + n2 {
        for j in 0..beta {
            let target = if s < n1 { s * beta + j } else { n1 * beta + (s - n1) * beta + j };
            perm[s * beta + j] = target;
        }
    }
    ComplexMatrix::permutation(&perm)
}

/// Matrix of a unitary expression; equivalence-derived unitaries become the
/// permutation matrix of their basis bijection.
pub fn denote_unitary(u: &Unitary) -> SResult<ComplexMatrix> {
    Ok(match u {
        Unitary::Id(t) => ComplexMatrix::identity(t.dim()),
        Unitary::Compose(v, w) => {
            u.signature()?;
            denote_unitary(v)?.mul(&denote_unitary(w)?)?
        }
        Unitary::Adjoint(w) => denote_unitary(w)?.adjoint(),
        Unitary::Tensor(a, b) => denote_unitary(a)?.kron(&denote_unitary(b)?),
        Unitary::DirectSum(a, b) => denote_unitary(a)?.direct_sum(&denote_unitary(b)?),
        Unitary::Primitive(p) => p.matrix().clone(),
        Unitary::FromEquiv(f, m) => ComplexMatrix::permutation(&equiv_basis_bijection(f, m)?),
    })
}

/// Reorders tensor factors from one wire layout to another.
pub fn context_permutation(from: &WireOrder, to: &WireOrder) -> SResult<Superoperator> {
    Ok(Superoperator::conjugation(&permutation_matrix(from, to)?))
}

fn permutation_matrix(from: &WireOrder, to: &WireOrder) -> SResult<ComplexMatrix> {
    let mismatch = || SemanticsError::WireMismatch { from: from.clone(), to: to.clone() };
    if from.0.len() != to.0.len() {
        return Err(mismatch());
    }
    // position in `from` of each wire of `to`
    let mut source_of = Vec::with_capacity(to.0.len());
    for wire in &to.0 {
        let k = from.0.iter().position(|w| w == wire).ok_or_else(mismatch)?;
        if source_of.contains(&k) {
            return Err(mismatch());
        }
        source_of.push(k);
    }
    let from_dims: Vec<usize> = from.0.iter().map(|(_, t)| t.dim()).collect();
    let n = from.dim();
    let mut perm = vec![0; n];
    let mut digits = vec![0; from_dims.len()];
    for (idx, slot) in perm.iter_mut().enumerate() {
        let mut rest = idx;
        for (d, &size) in digits.iter_mut().zip(&from_dims).rev() {
            *d = rest % size;
            rest /= size;
        }
        *slot = source_of.iter().fold(0, |acc, &k| acc * from_dims[k] + digits[k]);
    }
    Ok(ComplexMatrix::permutation(&perm))
}

/// The superoperator of `e : ty` with its context laid out as `order`.
pub fn denote(order: &WireOrder, e: &QExp, ty: &QType) -> SResult<Superoperator> {
    check(&order.to_ctx(), e, ty)?;
    go(order, e, ty)
}

/// [`denote`] with the canonical wire order of `ctx`.
pub fn denote_in(ctx: &Ctx, e: &QExp, ty: &QType) -> SResult<Superoperator> {
    denote(&WireOrder::canonical(ctx), e, ty)
}

/// Split `order` into the wires of `a` and the rest, returning the
/// reordering into `a`-wires-first layout alongside the two halves.
fn split(order: &WireOrder, a: &QExp) -> SResult<(WireOrder, WireOrder, Option<Superoperator>)> {
    let (used, rest) = order.partition(&a.free_vars());
    let joined = used.then(&rest);
    let perm = if &joined == order { None } else { Some(context_permutation(order, &joined)?) };
    Ok((used, rest, perm))
}

/// `(f ⊗ id_rest) ∘ perm`
fn run_first(f: &Superoperator, rest: &WireOrder, perm: Option<Superoperator>) -> SResult<Superoperator> {
    let g = if rest.0.is_empty() { f.clone() } else { Superoperator::tensor(f, &Superoperator::identity(rest.dim())) };
    Ok(match perm {
        Some(p) => Superoperator::compose(&g, &p)?,
        None => g,
    })
}

fn scrutinee_type(order: &WireOrder, a: &QExp) -> SResult<QType> {
    Ok(infer(&order.to_ctx(), a)?)
}

fn shape(expected: &'static str, found: &QType) -> SemanticsError {
    SemanticsError::Shape { expected, found: found.clone() }
}

fn go(order: &WireOrder, e: &QExp, ty: &QType) -> SResult<Superoperator> {
    Ok(match e {
        QExp::Var(_) => Superoperator::identity(order.dim()),
        QExp::Put(alpha, i) => Superoperator::constant(order.dim(), &delta(alpha, *i)?)?,
        QExp::Pair(a, b) => {
            let QType::Tensor(ta, tb) = ty else { return Err(shape("tensor", ty)) };
            let (oa, ob, perm) = split(order, a)?;
            let f = Superoperator::tensor(&go(&oa, a, ta)?, &go(&ob, b, tb)?);
            match perm {
                Some(p) => Superoperator::compose(&f, &p)?,
                None => f,
            }
        }
        QExp::Let(x, a, body) => {
            let (oa, rest, perm) = split(order, a)?;
            let ta = scrutinee_type(&oa, a)?;
            let first = run_first(&go(&oa, a, &ta)?, &rest, perm)?;
            let then = go(&rest.prepend(&[(x.clone(), ta)]), body, ty)?;
            Superoperator::compose(&then, &first)?
        }
        QExp::LetPair(x, y, a, body) => {
            let (oa, rest, perm) = split(order, a)?;
            let ta = scrutinee_type(&oa, a)?;
            let QType::Tensor(t1, t2) = &ta else { return Err(shape("tensor", &ta)) };
            let first = run_first(&go(&oa, a, &ta)?, &rest, perm)?;
            let inner = rest.prepend(&[(x.clone(), (**t1).clone()), (y.clone(), (**t2).clone())]);
            Superoperator::compose(&go(&inner, body, ty)?, &first)?
        }
        QExp::Inj(side, sum, a) => {
            let QType::Oplus(t1, t2) = sum else { return Err(shape("sum", sum)) };
            let (part, offset) = match side {
                Side::Left => (t1, 0),
                Side::Right => (t2, t1.dim()),
            };
            let iso = ComplexMatrix::from_fn(sum.dim(), part.dim(), |r, c| {
                if r == offset + c { Complex::ONE } else { Complex::ZERO }
            });
            Superoperator::compose(&Superoperator::conjugation(&iso), &go(order, a, part)?)?
        }
        QExp::Case(a, x1, e1, x2, e2) => {
            let (oa, rest, perm) = split(order, a)?;
            let ta = scrutinee_type(&oa, a)?;
            let QType::Oplus(t1, t2) = &ta else { return Err(shape("sum", &ta)) };
            let first = run_first(&go(&oa, a, &ta)?, &rest, perm)?;
            let d_rest = rest.dim();
            let mut total = Superoperator::zero(order.dim(), ty.dim());
            for (x, t, body, offset) in [(x1, t1, e1, 0), (x2, t2, e2, t1.dim())] {
                let proj = block_projection(t.dim(), offset, ta.dim(), d_rest);
                let branch = go(&rest.prepend(&[(x.clone(), (**t).clone())]), body, ty)?;
                let path = Superoperator::compose(&Superoperator::conjugation(&proj), &first)?;
                total.add_assign(&Superoperator::compose(&branch, &path)?)?;
            }
            total
        }
        QExp::LetBang(a, branches) => {
            let (oa, rest, perm) = split(order, a)?;
            let ta = scrutinee_type(&oa, a)?;
            let first = run_first(&go(&oa, a, &ta)?, &rest, perm)?;
            let d_rest = rest.dim();
            let mut total = Superoperator::zero(order.dim(), ty.dim());
            for (i, body) in branches.iter().enumerate() {
                let proj = block_projection(1, i, ta.dim(), d_rest);
                let path = Superoperator::compose(&Superoperator::conjugation(&proj), &first)?;
                total.add_assign(&Superoperator::compose(&go(&rest, body, ty)?, &path)?)?;
            }
            total
        }
        QExp::UApp(u, a) => {
            let src = u.src()?;
            let m = denote_unitary(u)?;
            Superoperator::compose(&Superoperator::conjugation(&m), &go(order, a, &src)?)?
        }
    })
}

/// Projection of `(whole) ⊗ rest` onto the block of `width` basis states
/// starting at `offset`, landing in `(block) ⊗ rest`.
fn block_projection(width: usize, offset: usize, whole: usize, rest: usize) -> ComplexMatrix {
    let mut k = ComplexMatrix::zeros(width * rest, whole * rest);
    for j in 0..width {
        for g in 0..rest {
            k.set(j * rest + g, (offset + j) * rest + g, Complex::ONE);
        }
    }
    k
}

/// Outcome of comparing two denotations.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub equal: bool,
    pub ty: QType,
    /// Largest entrywise difference, if the spaces are non-empty.
    pub discrepancy: Option<Discrepancy>,
}

/// Compare the denotations of two terms of the same type under `ctx`.
pub fn equiv_report(e1: &QExp, e2: &QExp, ctx: &Ctx, tol: f64) -> SResult<Verdict> {
    let t1 = infer(ctx, e1)?;
    let t2 = infer(ctx, e2)?;
    if t1 != t2 {
        return Err(SemanticsError::TypeDisagreement(t1, t2));
    }
    equiv_report_at(e1, e2, ctx, &t1, tol)
}

/// [`equiv_report`] at a given type, which also covers empty measurements.
pub fn equiv_report_at(e1: &QExp, e2: &QExp, ctx: &Ctx, ty: &QType, tol: f64) -> SResult<Verdict> {
    let f = denote_in(ctx, e1, ty)?;
    let g = denote_in(ctx, e2, ty)?;
    let discrepancy = f.max_discrepancy(&g)?;
    let equal = discrepancy.as_ref().is_none_or(|d| d.magnitude <= tol);
    Ok(Verdict { equal, ty: ty.clone(), discrepancy })
}

pub fn equiv_check(e1: &QExp, e2: &QExp, ctx: &Ctx, tol: f64) -> SResult<bool> {
    Ok(equiv_report(e1, e2, ctx, tol)?.equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;
    use crate::syntax::{Assignment, Equiv, OpenType};

    fn q() -> QType {
        QType::qubit()
    }

    fn plus() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap()
    }

    fn one() -> ComplexMatrix {
        ComplexMatrix::identity(1)
    }

    #[test]
    fn deltas() {
        assert_eq!(delta(&FinType::Bool, 0).unwrap(), ComplexMatrix::diag(&[1.0, 0.0]));
        assert_eq!(delta(&FinType::Unit, 0).unwrap(), one());
        assert_eq!(delta(&FinType::Fin(3), 2).unwrap(), ComplexMatrix::diag(&[0.0, 0.0, 1.0]));
        assert!(delta(&FinType::Bool, 2).is_err());
    }

    #[test]
    fn distr_matches_point_enumeration() {
        // oracle: enumerate (s, j) and its image (block, (k, j)) by value
        for (a1, a2, beta) in [(FinType::Unit, FinType::Unit, 1), (FinType::Bool, FinType::Bool, 1), (FinType::Unit, FinType::Unit, 2)] {
            let src = FinType::prod(FinType::sum(a1.clone(), a2.clone()), FinType::Fin(beta));
            let dst = FinType::sum(
                FinType::prod(a1.clone(), FinType::Fin(beta)),
                FinType::prod(a2.clone(), FinType::Fin(beta)),
            );
            let mut perm = vec![0; src.card()];
            for (i, slot) in perm.iter_mut().enumerate() {
                use crate::syntax::FinValue as V;
                let Some(V::Pair(s, j)) = src.value_at(i) else { panic!() };
                let image = match *s {
                    V::Inl(k) => V::Inl(Box::new(V::Pair(k, j))),
                    V::Inr(k) => V::Inr(Box::new(V::Pair(k, j))),
                    _ => panic!(),
                };
                *slot = dst.index_of(&image).unwrap();
            }
            assert_eq!(distr_matrix(&a1, &a2, beta), ComplexMatrix::permutation(&perm));
        }
    }

    #[test]
    fn unitary_matrices() {
        assert_eq!(denote_unitary(&Unitary::id(q())).unwrap(), ComplexMatrix::identity(2));
        let x = denote_unitary(&Unitary::named("X").unwrap()).unwrap();
        assert_eq!(x, ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
        let b = OpenType::lower(FinType::Bool);
        let sw = Unitary::from_equiv(Equiv::SwapTensor(b.clone(), b), Assignment::new());
        let want = ComplexMatrix::permutation(&[0, 2, 1, 3]);
        assert_eq!(denote_unitary(&sw).unwrap(), want);
        let bad = Unitary::compose(Unitary::id(q()), Unitary::id(QType::unit()));
        assert!(denote_unitary(&bad).is_err());
    }

    #[test]
    fn documented_denotations() {
        let put = denote_in(&Ctx::new(), &QExp::put_bool(true), &q()).unwrap();
        assert_eq!(put.apply(&one()).unwrap(), ComplexMatrix::diag(&[0.0, 1.0]));

        let x = Ctx::singleton("x", q());
        let meas = denote_in(&x, &QExp::meas(QExp::var("x")), &q()).unwrap();
        assert!(meas.apply(&plus()).unwrap().approx_eq(&ComplexMatrix::diag(&[0.5, 0.5]), 1e-12));

        let flip = QExp::uapp(Unitary::named("X").unwrap(), QExp::put_bool(false));
        let out = denote_in(&Ctx::new(), &flip, &q()).unwrap().apply(&one()).unwrap();
        assert_eq!(out, ComplexMatrix::diag(&[0.0, 1.0]));
    }

    #[test]
    fn wire_permutations() {
        let xy = WireOrder(vec![("x".into(), q()), ("y".into(), q())]);
        let yx = WireOrder(vec![("y".into(), q()), ("x".into(), q())]);
        let id = context_permutation(&xy, &xy).unwrap();
        assert!(id.equal(&Superoperator::identity(4), 1e-12).unwrap());
        let r1 = ComplexMatrix::diag(&[1.0, 0.0]);
        let r2 = plus();
        let swapped = context_permutation(&xy, &yx).unwrap().apply(&r1.kron(&r2)).unwrap();
        assert!(swapped.approx_eq(&r2.kron(&r1), 1e-12));

        // rotation of three wires is the product of two transpositions
        let w = |n: &[&str]| WireOrder(n.iter().map(|s| (s.to_string(), q())).collect());
        let rot = permutation_matrix(&w(&["a", "b", "c"]), &w(&["b", "c", "a"])).unwrap();
        let t1 = permutation_matrix(&w(&["a", "b", "c"]), &w(&["b", "a", "c"])).unwrap();
        let t2 = permutation_matrix(&w(&["b", "a", "c"]), &w(&["b", "c", "a"])).unwrap();
        assert_eq!(rot, t2.mul(&t1).unwrap());
        assert!(context_permutation(&xy, &w(&["x", "z"])).is_err());
    }

    #[test]
    fn documented_equivalences() {
        let beta = QExp::let_("x", QExp::put_bool(true), QExp::var("x"));
        assert!(equiv_check(&beta, &QExp::put_bool(true), &Ctx::new(), DEFAULT_TOL).unwrap());
        let q_ctx = Ctx::singleton("q", q());
        let x = Unitary::named("X").unwrap();
        let twice = QExp::uapp(x.clone(), QExp::uapp(x, QExp::var("q")));
        assert!(equiv_check(&twice, &QExp::var("q"), &q_ctx, DEFAULT_TOL).unwrap());
        let measured = QExp::meas(QExp::var("q"));
        let verdict = equiv_report(&QExp::var("q"), &measured, &q_ctx, DEFAULT_TOL).unwrap();
        assert!(!verdict.equal);
        let d = verdict.discrepancy.unwrap();
        assert!((d.magnitude - 1.0).abs() < 1e-12);
        assert_eq!(d.input, (0, 1));
    }

    #[test]
    fn case_routes_each_block() {
        // case of a prepared injection runs only the matching branch
        let sum = QType::oplus(q(), QType::unit());
        let e = QExp::case(
            QExp::inj(Side::Right, sum, QExp::put_unit()),
            "a",
            QExp::var("a"),
            "u",
            QExp::letbang(QExp::var("u"), vec![QExp::put_bool(true)]),
        );
        let out = denote_in(&Ctx::new(), &e, &q()).unwrap().apply(&one()).unwrap();
        assert_eq!(out, ComplexMatrix::diag(&[0.0, 1.0]));
    }

    #[test]
    fn letpair_reorders_context() {
        // (y, x) from context {x, y} is a swap of the joint state
        let ctx = Ctx::new().with("x", q()).with("y", q());
        let e = QExp::pair(QExp::var("y"), QExp::var("x"));
        let f = denote_in(&ctx, &e, &QType::tensor(q(), q())).unwrap();
        let swap = Superoperator::conjugation(&ComplexMatrix::permutation(&[0, 2, 1, 3]));
        assert!(f.equal(&swap, 1e-12).unwrap());
        let r = ComplexMatrix::diag(&[1.0, 0.0]).kron(&plus());
        let out = f.apply(&r).unwrap();
        assert!(out.approx_eq(&plus().kron(&ComplexMatrix::diag(&[1.0, 0.0])), 1e-12));
    }
}
