//! Finite classical types, closed and open quantum types, assignments and contexts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Finite classical types. Every inhabitant is addressed by its index in the
/// canonical enumeration: `false < true`, left block before right block for
/// sums, left-major order for products.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FinType {
    Void,
    Unit,
    Bool,
    Sum(Box<FinType>, Box<FinType>),
    Prod(Box<FinType>, Box<FinType>),
    Fin(usize),
}

/// A structured view of one element of a [`FinType`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinValue {
    Unit,
    Bool(bool),
    Inl(Box<FinValue>),
    Inr(Box<FinValue>),
    Pair(Box<FinValue>, Box<FinValue>),
    Fin(usize),
}

impl FinType {
    pub fn sum(a: FinType, b: FinType) -> FinType {
        FinType::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: FinType, b: FinType) -> FinType {
        FinType::Prod(Box::new(a), Box::new(b))
    }

    pub fn card(&self) -> usize {
        match self {
            FinType::Void => 0,
            FinType::Unit => 1,
            FinType::Bool => 2,
            FinType::Sum(a, b) => a.card() + b.card(),
            FinType::Prod(a, b) => a.card() * b.card(),
            FinType::Fin(n) => *n,
        }
    }

    /// Decodes an enumeration index into a structured element.
    pub fn value_at(&self, idx: usize) -> Option<FinValue> {
        if idx >= self.card() {
            return None;
        }
        Some(match self {
            FinType::Void => unreachable!(),
            FinType::Unit => FinValue::Unit,
            FinType::Bool => FinValue::Bool(idx == 1),
            FinType::Fin(_) => FinValue::Fin(idx),
            FinType::Sum(a, b) => {
                let n = a.card();
                if idx < n {
                    FinValue::Inl(Box::new(a.value_at(idx)?))
                } else {
                    FinValue::Inr(Box::new(b.value_at(idx - n)?))
                }
            }
            FinType::Prod(a, b) => {
                let m = b.card();
                FinValue::Pair(
                    Box::new(a.value_at(idx / m)?),
                    Box::new(b.value_at(idx % m)?),
                )
            }
        })
    }

    /// Encodes a structured element back into its enumeration index.
    pub fn index_of(&self, v: &FinValue) -> Option<usize> {
        match (self, v) {
            (FinType::Unit, FinValue::Unit) => Some(0),
            (FinType::Bool, FinValue::Bool(b)) => Some(*b as usize),
            (FinType::Fin(n), FinValue::Fin(i)) if i < n => Some(*i),
            (FinType::Sum(a, _), FinValue::Inl(x)) => a.index_of(x),
            (FinType::Sum(a, b), FinValue::Inr(x)) => Some(a.card() + b.index_of(x)?),
            (FinType::Prod(a, b), FinValue::Pair(x, y)) => {
                Some(a.index_of(x)? * b.card() + b.index_of(y)?)
            }
            (t, FinValue::Fin(i)) if *i < t.card() => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for FinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinType::Void => write!(f, "void"),
            FinType::Unit => write!(f, "unit"),
            FinType::Bool => write!(f, "bool"),
            FinType::Sum(a, b) => write!(f, "(sum {a} {b})"),
            FinType::Prod(a, b) => write!(f, "(prod {a} {b})"),
            FinType::Fin(n) => write!(f, "(fin {n})"),
        }
    }
}

impl fmt::Display for FinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinValue::Unit => write!(f, "tt"),
            FinValue::Bool(b) => write!(f, "{b}"),
            FinValue::Inl(v) => write!(f, "(inl {v})"),
            FinValue::Inr(v) => write!(f, "(inr {v})"),
            FinValue::Pair(a, b) => write!(f, "(pair {a} {b})"),
            FinValue::Fin(i) => write!(f, "{i}"),
        }
    }
}

/// Closed quantum types.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QType {
    Lower(FinType),
    Tensor(Box<QType>, Box<QType>),
    Oplus(Box<QType>, Box<QType>),
}

impl QType {
    pub fn qubit() -> QType {
        QType::Lower(FinType::Bool)
    }

    pub fn unit() -> QType {
        QType::Lower(FinType::Unit)
    }

    pub fn tensor(a: QType, b: QType) -> QType {
        QType::Tensor(Box::new(a), Box::new(b))
    }

    pub fn oplus(a: QType, b: QType) -> QType {
        QType::Oplus(Box::new(a), Box::new(b))
    }

    /// Dimension of the underlying Hilbert space.
    pub fn dim(&self) -> usize {
        match self {
            QType::Lower(a) => a.card(),
            QType::Tensor(a, b) => a.dim() * b.dim(),
            QType::Oplus(a, b) => a.dim() + b.dim(),
        }
    }

    /// Right-nested tensor of a non-empty list; `Lower ()` for the empty list.
    pub fn tensor_all(mut tys: Vec<QType>) -> QType {
        let Some(mut acc) = tys.pop() else {
            return QType::unit();
        };
        while let Some(t) = tys.pop() {
            acc = QType::tensor(t, acc);
        }
        acc
    }

    pub fn is_binary(&self) -> bool {
        match self {
            QType::Lower(FinType::Bool) => true,
            QType::Tensor(a, b) => a.is_binary() && b.is_binary(),
            _ => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            QType::Lower(_) => 1,
            QType::Tensor(a, b) | QType::Oplus(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for QType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QType::Lower(a) => write!(f, "(lower {a})"),
            QType::Tensor(a, b) => write!(f, "(tensor {a} {b})"),
            QType::Oplus(a, b) => write!(f, "(oplus {a} {b})"),
        }
    }
}

/// Quantum types with type variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpenType {
    Var(String),
    Lower(FinType),
    Tensor(Box<OpenType>, Box<OpenType>),
    Oplus(Box<OpenType>, Box<OpenType>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type variable {0} has no assignment")]
pub struct UnboundTypeVar(pub String);

impl OpenType {
    pub fn var(x: &str) -> OpenType {
        OpenType::Var(x.to_string())
    }

    pub fn lower(a: FinType) -> OpenType {
        OpenType::Lower(a)
    }

    pub fn tensor(a: OpenType, b: OpenType) -> OpenType {
        OpenType::Tensor(Box::new(a), Box::new(b))
    }

    pub fn oplus(a: OpenType, b: OpenType) -> OpenType {
        OpenType::Oplus(Box::new(a), Box::new(b))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            OpenType::Var(x) => {
                out.insert(x.clone());
            }
            OpenType::Lower(_) => {}
            OpenType::Tensor(a, b) | OpenType::Oplus(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Variable occurrences in left-to-right order (with repetition).
    pub fn var_occurrences(&self) -> Vec<String> {
        match self {
            OpenType::Var(x) => vec![x.clone()],
            OpenType::Lower(_) => vec![],
            OpenType::Tensor(a, b) | OpenType::Oplus(a, b) => {
                let mut v = a.var_occurrences();
                v.extend(b.var_occurrences());
                v
            }
        }
    }

    /// Closes the type by reading each variable `X` as `Lower (m X)`.
    pub fn instantiate(&self, m: &Assignment) -> Result<QType, UnboundTypeVar> {
        Ok(match self {
            OpenType::Var(x) => QType::Lower(m.get(x)?.clone()),
            OpenType::Lower(a) => QType::Lower(a.clone()),
            OpenType::Tensor(a, b) => QType::tensor(a.instantiate(m)?, b.instantiate(m)?),
            OpenType::Oplus(a, b) => QType::oplus(a.instantiate(m)?, b.instantiate(m)?),
        })
    }

    pub fn as_closed(&self) -> Option<QType> {
        self.instantiate(&Assignment::default()).ok()
    }

    pub fn size(&self) -> usize {
        match self {
            OpenType::Var(_) | OpenType::Lower(_) => 1,
            OpenType::Tensor(a, b) | OpenType::Oplus(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl From<&QType> for OpenType {
    fn from(t: &QType) -> OpenType {
        match t {
            QType::Lower(a) => OpenType::Lower(a.clone()),
            QType::Tensor(a, b) => OpenType::tensor(a.as_ref().into(), b.as_ref().into()),
            QType::Oplus(a, b) => OpenType::oplus(a.as_ref().into(), b.as_ref().into()),
        }
    }
}

impl From<QType> for OpenType {
    fn from(t: QType) -> OpenType {
        OpenType::from(&t)
    }
}

impl fmt::Display for OpenType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenType::Var(x) => write!(f, "(tvar {x})"),
            OpenType::Lower(a) => write!(f, "(lower {a})"),
            OpenType::Tensor(a, b) => write!(f, "(tensor {a} {b})"),
            OpenType::Oplus(a, b) => write!(f, "(oplus {a} {b})"),
        }
    }
}

/// Assignment of finite types to type variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub BTreeMap<String, FinType>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, x: &str, a: FinType) -> Self {
        self.0.insert(x.to_string(), a);
        self
    }

    pub fn get(&self, x: &str) -> Result<&FinType, UnboundTypeVar> {
        self.0.get(x).ok_or_else(|| UnboundTypeVar(x.to_string()))
    }

    pub fn insert(&mut self, x: &str, a: FinType) {
        self.0.insert(x.to_string(), a);
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (x, a)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({x} {a})")?;
        }
        write!(f, ")")
    }
}

pub type Name = String;

/// Linear typing context. Iteration order is lexicographic by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ctx(BTreeMap<Name, QType>);

impl Ctx {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: &str, t: QType) -> Self {
        let mut c = Self::new();
        c.0.insert(x.to_string(), t);
        c
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, QType)>,
        S: Into<Name>,
    {
        Ctx(pairs.into_iter().map(|(n, t)| (n.into(), t)).collect())
    }

    pub fn with(mut self, x: &str, t: QType) -> Self {
        self.0.insert(x.to_string(), t);
        self
    }

    pub fn insert(&mut self, x: Name, t: QType) -> Option<QType> {
        self.0.insert(x, t)
    }

    pub fn remove(&mut self, x: &str) -> Option<QType> {
        self.0.remove(x)
    }

    pub fn get(&self, x: &str) -> Option<&QType> {
        self.0.get(x)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.0.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &QType)> {
        self.0.iter()
    }

    /// Keeps only the variables in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Name>) -> Ctx {
        Ctx(self
            .0
            .iter()
            .filter(|(k, _)| keep.contains(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect())
    }

    /// Disjoint union; `None` when the domains overlap.
    pub fn merge(&self, other: &Ctx) -> Option<Ctx> {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            if out.0.insert(k.clone(), v.clone()).is_some() {
                return None;
            }
        }
        Some(out)
    }

    /// Total dimension of the context read as a tensor product.
    pub fn dim(&self) -> usize {
        self.0.values().map(QType::dim).product()
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}: {t}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        assert_eq!(FinType::Void.card(), 0);
        assert_eq!(FinType::Bool.card(), 2);
        let t = FinType::prod(FinType::Bool, FinType::sum(FinType::Unit, FinType::Fin(3)));
        assert_eq!(t.card(), 8);
    }

    #[test]
    fn enumeration_round_trips() {
        let t = FinType::prod(FinType::sum(FinType::Unit, FinType::Bool), FinType::Fin(3));
        for i in 0..t.card() {
            let v = t.value_at(i).unwrap();
            assert_eq!(t.index_of(&v), Some(i));
        }
        assert_eq!(t.value_at(t.card()), None);
    }

    #[test]
    fn product_enumeration_is_left_major() {
        let t = FinType::prod(FinType::Bool, FinType::Fin(3));
        let v = t.value_at(4).unwrap();
        assert_eq!(
            v,
            FinValue::Pair(Box::new(FinValue::Bool(true)), Box::new(FinValue::Fin(1)))
        );
    }

    #[test]
    fn dims() {
        assert_eq!(QType::Lower(FinType::Void).dim(), 0);
        assert_eq!(QType::qubit().dim(), 2);
        let t = QType::tensor(
            QType::qubit(),
            QType::oplus(QType::qubit(), QType::Lower(FinType::Unit)),
        );
        // oracle: 2 * (2 + 1)
        assert_eq!(t.dim(), 6);
    }

    #[test]
    fn instantiate_reads_vars_as_lower() {
        let s = OpenType::tensor(OpenType::var("X"), OpenType::lower(FinType::Bool));
        let m = Assignment::new().with("X", FinType::Fin(3));
        assert_eq!(
            s.instantiate(&m).unwrap(),
            QType::tensor(QType::Lower(FinType::Fin(3)), QType::qubit())
        );
        assert!(s.instantiate(&Assignment::new()).is_err());
    }

    #[test]
    fn ctx_merge_requires_disjointness() {
        let a = Ctx::singleton("x", QType::qubit());
        let b = Ctx::singleton("y", QType::qubit());
        assert_eq!(a.merge(&b).unwrap().len(), 2);
        assert!(a.merge(&a).is_none());
    }
}
