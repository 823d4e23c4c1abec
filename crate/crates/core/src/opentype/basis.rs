//! Basis values of open types and their enumeration under an assignment.

use std::fmt;

use crate::syntax::{Assignment, FinType, Name, NameSupply, OpenType};

use super::OpenTypeError;

/// A basis element of an open type. Variable positions hold an opaque leaf:
/// an index into the assigned finite type, a wire name, or a whole term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisValue<L> {
    Leaf(L),
    /// Index into the finite type of a `Lower` position.
    Elem(usize),
    Pair(Box<BasisValue<L>>, Box<BasisValue<L>>),
    Inl(Box<BasisValue<L>>),
    Inr(Box<BasisValue<L>>),
}

impl<L> BasisValue<L> {
    pub fn pair(a: Self, b: Self) -> Self {
        BasisValue::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(a: Self) -> Self {
        BasisValue::Inl(Box::new(a))
    }

    pub fn inr(a: Self) -> Self {
        BasisValue::Inr(Box::new(a))
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            BasisValue::Leaf(l) => out.push(l),
            BasisValue::Elem(_) => {}
            BasisValue::Pair(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
            BasisValue::Inl(a) | BasisValue::Inr(a) => a.collect_leaves(out),
        }
    }

    pub fn map_leaves<M>(&self, f: &mut impl FnMut(&L) -> M) -> BasisValue<M> {
        match self {
            BasisValue::Leaf(l) => BasisValue::Leaf(f(l)),
            BasisValue::Elem(i) => BasisValue::Elem(*i),
            BasisValue::Pair(a, b) => BasisValue::pair(a.map_leaves(f), b.map_leaves(f)),
            BasisValue::Inl(a) => BasisValue::inl(a.map_leaves(f)),
            BasisValue::Inr(a) => BasisValue::inr(a.map_leaves(f)),
        }
    }

    /// Forget the leaf contents, keeping only the shape.
    pub fn shape(&self) -> BasisValue<()> {
        self.map_leaves(&mut |_| ())
    }

    /// Rendering with every leaf shown as `_`.
    pub fn shape_string(&self) -> String {
        self.map_leaves(&mut |_| "_").to_string()
    }
}

impl<L: fmt::Display> fmt::Display for BasisValue<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisValue::Leaf(l) => write!(f, "{l}"),
            BasisValue::Elem(i) => write!(f, "#{i}"),
            BasisValue::Pair(a, b) => write!(f, "({a}, {b})"),
            BasisValue::Inl(a) => write!(f, "inl {a}"),
            BasisValue::Inr(a) => write!(f, "inr {a}"),
        }
    }
}

/// The finite type enumerating the basis of `ty` under `m`.
pub fn basis(ty: &OpenType, m: &Assignment) -> Result<FinType, OpenTypeError> {
    Ok(match ty {
        OpenType::Var(x) => m.get(x)?.clone(),
        OpenType::Lower(a) => a.clone(),
        OpenType::Tensor(a, b) => FinType::prod(basis(a, m)?, basis(b, m)?),
        OpenType::Oplus(a, b) => FinType::sum(basis(a, m)?, basis(b, m)?),
    })
}

pub fn basis_card(ty: &OpenType, m: &Assignment) -> Result<usize, OpenTypeError> {
    Ok(match ty {
        OpenType::Var(x) => m.get(x)?.card(),
        OpenType::Lower(a) => a.card(),
        OpenType::Tensor(a, b) => basis_card(a, m)? * basis_card(b, m)?,
        OpenType::Oplus(a, b) => basis_card(a, m)? + basis_card(b, m)?,
    })
}

/// The basis value at position `idx`; variable leaves carry their index into
/// the assigned type. Products are left-major and sums list the left block first.
pub fn decode(ty: &OpenType, m: &Assignment, idx: usize) -> Result<BasisValue<usize>, OpenTypeError> {
    let out_of_range = || OpenTypeError::Index { ty: ty.clone(), index: idx };
    Ok(match ty {
        OpenType::Var(x) => {
            if idx >= m.get(x)?.card() {
                return Err(out_of_range());
            }
            BasisValue::Leaf(idx)
        }
        OpenType::Lower(a) => {
            if idx >= a.card() {
                return Err(out_of_range());
            }
            BasisValue::Elem(idx)
        }
        OpenType::Tensor(a, b) => {
            let nb = basis_card(b, m)?;
            if nb == 0 {
                return Err(out_of_range());
            }
            BasisValue::pair(decode(a, m, idx / nb)?, decode(b, m, idx % nb)?)
        }
        OpenType::Oplus(a, b) => {
            let na = basis_card(a, m)?;
            if idx < na {
                BasisValue::inl(decode(a, m, idx)?)
            } else {
                BasisValue::inr(decode(b, m, idx - na)?)
            }
        }
    })
}

/// Inverse of [`decode`].
pub fn encode(ty: &OpenType, m: &Assignment, v: &BasisValue<usize>) -> Result<usize, OpenTypeError> {
    let mismatch = || OpenTypeError::Shape { ty: ty.clone(), value: v.to_string() };
    match (ty, v) {
        (OpenType::Var(x), BasisValue::Leaf(i)) if *i < m.get(x)?.card() => Ok(*i),
        (OpenType::Lower(a), BasisValue::Elem(i)) if *i < a.card() => Ok(*i),
        (OpenType::Tensor(a, b), BasisValue::Pair(va, vb)) => {
            Ok(encode(a, m, va)? * basis_card(b, m)? + encode(b, m, vb)?)
        }
        (OpenType::Oplus(a, _), BasisValue::Inl(va)) => encode(a, m, va),
        (OpenType::Oplus(a, b), BasisValue::Inr(vb)) => Ok(basis_card(a, m)? + encode(b, m, vb)?),
        _ => Err(mismatch()),
    }
}

/// Every basis shape of `ty` with variables left abstract, in the order of
/// the basis under the assignment sending each variable to `()`.
pub fn shapes(ty: &OpenType) -> Vec<BasisValue<()>> {
    match ty {
        OpenType::Var(_) => vec![BasisValue::Leaf(())],
        OpenType::Lower(a) => (0..a.card()).map(BasisValue::Elem).collect(),
        OpenType::Tensor(a, b) => {
            let right = shapes(b);
            shapes(a)
                .into_iter()
                .flat_map(|l| right.iter().map(move |r| BasisValue::pair(l.clone(), r.clone())))
                .collect()
        }
        OpenType::Oplus(a, b) => shapes(a)
            .into_iter()
            .map(BasisValue::inl)
            .chain(shapes(b).into_iter().map(BasisValue::inr))
            .collect(),
    }
}

/// Give every leaf of a shape a fresh wire name.
pub fn name_leaves(shape: &BasisValue<()>, names: &mut NameSupply, base: &str) -> BasisValue<Name> {
    shape.map_leaves(&mut |_| names.fresh(base))
}

/// Check that `v` inhabits `ty`, treating leaves as opaque.
pub fn matches_shape<L>(ty: &OpenType, v: &BasisValue<L>) -> bool {
    match (ty, v) {
        (OpenType::Var(_), BasisValue::Leaf(_)) => true,
        (OpenType::Lower(a), BasisValue::Elem(i)) => *i < a.card(),
        (OpenType::Tensor(a, b), BasisValue::Pair(va, vb)) => matches_shape(a, va) && matches_shape(b, vb),
        (OpenType::Oplus(a, _), BasisValue::Inl(va)) => matches_shape(a, va),
        (OpenType::Oplus(_, b), BasisValue::Inr(vb)) => matches_shape(b, vb),
        _ => false,
    }
}
