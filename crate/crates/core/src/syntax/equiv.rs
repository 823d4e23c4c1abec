//! Derivation trees for open-type equivalence.

use std::fmt;

use thiserror::Error;

use super::types::{FinType, OpenType};

/// A proof that two open quantum types are equivalent, built from the rig
/// generators. Each generator carries enough type data to fix its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equiv {
    Refl(OpenType),
    Symm(Box<Equiv>),
    /// First `f`, then `g`.
    Trans(Box<Equiv>, Box<Equiv>),
    CongTensor(Box<Equiv>, Box<Equiv>),
    CongOplus(Box<Equiv>, Box<Equiv>),
    /// `a ⊗ b → b ⊗ a`
    SwapTensor(OpenType, OpenType),
    /// `a ⊕ b → b ⊕ a`
    SwapOplus(OpenType, OpenType),
    /// `a ⊗ (b ⊗ c) → (a ⊗ b) ⊗ c`
    AssocTensor(OpenType, OpenType, OpenType),
    /// `a ⊕ (b ⊕ c) → (a ⊕ b) ⊕ c`
    AssocOplus(OpenType, OpenType, OpenType),
    /// `a ⊗ (b ⊕ c) → (a ⊗ b) ⊕ (a ⊗ c)`
    Distr(OpenType, OpenType, OpenType),
    /// `Lower α ⊗ Lower β → Lower (α × β)`
    LowerTensor(FinType, FinType),
    /// `Lower α ⊕ Lower β → Lower (α + β)`
    LowerOplus(FinType, FinType),
    /// `Lower () ⊗ s → s`
    LUnitTensor(OpenType),
    /// `Lower Void ⊕ s → s`
    LUnitOplus(OpenType),
    /// `Lower Void ⊗ s → Lower Void`
    LZero(OpenType),
    /// `Lower α → Lower β` for equal cardinalities, identity on indices.
    Relabel(FinType, FinType),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("cannot chain {first} into {second}")]
    Chain { first: OpenType, second: OpenType },
    #[error("cannot relabel {0} ({1} elements) as {2} ({3} elements)")]
    Relabel(FinType, usize, FinType, usize),
}

impl Equiv {
    pub fn refl(t: OpenType) -> Equiv {
        Equiv::Refl(t)
    }

    pub fn symm(f: Equiv) -> Equiv {
        Equiv::Symm(Box::new(f))
    }

    pub fn trans(f: Equiv, g: Equiv) -> Equiv {
        Equiv::Trans(Box::new(f), Box::new(g))
    }

    /// Left-to-right chain; `Refl(start)` when empty.
    pub fn chain(start: OpenType, steps: impl IntoIterator<Item = Equiv>) -> Equiv {
        let mut it = steps.into_iter();
        match it.next() {
            None => Equiv::Refl(start),
            Some(first) => it.fold(first, Equiv::trans),
        }
    }

    pub fn cong_tensor(f: Equiv, g: Equiv) -> Equiv {
        Equiv::CongTensor(Box::new(f), Box::new(g))
    }

    pub fn cong_oplus(f: Equiv, g: Equiv) -> Equiv {
        Equiv::CongOplus(Box::new(f), Box::new(g))
    }

    /// `(source, target)`.
    pub fn endpoints(&self) -> Result<(OpenType, OpenType), EquivError> {
        use OpenType as T;
        Ok(match self {
            Equiv::Refl(t) => (t.clone(), t.clone()),
            Equiv::Symm(f) => {
                let (a, b) = f.endpoints()?;
                (b, a)
            }
            Equiv::Trans(f, g) => {
                let (a, b) = f.endpoints()?;
                let (c, d) = g.endpoints()?;
                if b != c {
                    return Err(EquivError::Chain { first: b, second: c });
                }
                (a, d)
            }
            Equiv::CongTensor(f, g) => {
                let (a, b) = f.endpoints()?;
                let (c, d) = g.endpoints()?;
                (T::tensor(a, c), T::tensor(b, d))
            }
            Equiv::CongOplus(f, g) => {
                let (a, b) = f.endpoints()?;
                let (c, d) = g.endpoints()?;
                (T::oplus(a, c), T::oplus(b, d))
            }
            Equiv::SwapTensor(a, b) => (T::tensor(a.clone(), b.clone()), T::tensor(b.clone(), a.clone())),
            Equiv::SwapOplus(a, b) => (T::oplus(a.clone(), b.clone()), T::oplus(b.clone(), a.clone())),
            Equiv::AssocTensor(a, b, c) => (
                T::tensor(a.clone(), T::tensor(b.clone(), c.clone())),
                T::tensor(T::tensor(a.clone(), b.clone()), c.clone()),
            ),
            Equiv::AssocOplus(a, b, c) => (
                T::oplus(a.clone(), T::oplus(b.clone(), c.clone())),
                T::oplus(T::oplus(a.clone(), b.clone()), c.clone()),
            ),
            Equiv::Distr(a, b, c) => (
                T::tensor(a.clone(), T::oplus(b.clone(), c.clone())),
                T::oplus(T::tensor(a.clone(), b.clone()), T::tensor(a.clone(), c.clone())),
            ),
            Equiv::LowerTensor(a, b) => (
                T::tensor(T::Lower(a.clone()), T::Lower(b.clone())),
                T::Lower(FinType::prod(a.clone(), b.clone())),
            ),
            Equiv::LowerOplus(a, b) => (
                T::oplus(T::Lower(a.clone()), T::Lower(b.clone())),
                T::Lower(FinType::sum(a.clone(), b.clone())),
            ),
            Equiv::LUnitTensor(s) => (T::tensor(T::Lower(FinType::Unit), s.clone()), s.clone()),
            Equiv::LUnitOplus(s) => (T::oplus(T::Lower(FinType::Void), s.clone()), s.clone()),
            Equiv::LZero(s) => (
                T::tensor(T::Lower(FinType::Void), s.clone()),
                T::Lower(FinType::Void),
            ),
            Equiv::Relabel(a, b) => {
                if a.card() != b.card() {
                    return Err(EquivError::Relabel(a.clone(), a.card(), b.clone(), b.card()));
                }
                (T::Lower(a.clone()), T::Lower(b.clone()))
            }
        })
    }

    /// Number of nodes in the derivation tree.
    pub fn size(&self) -> usize {
        match self {
            Equiv::Symm(f) => 1 + f.size(),
            Equiv::Trans(f, g) | Equiv::CongTensor(f, g) | Equiv::CongOplus(f, g) => {
                1 + f.size() + g.size()
            }
            _ => 1,
        }
    }

    /// Number of leaf generators other than reflexivity.
    pub fn generator_count(&self) -> usize {
        match self {
            Equiv::Refl(_) => 0,
            Equiv::Symm(f) => f.generator_count(),
            Equiv::Trans(f, g) | Equiv::CongTensor(f, g) | Equiv::CongOplus(f, g) => {
                f.generator_count() + g.generator_count()
            }
            _ => 1,
        }
    }
}

impl fmt::Display for Equiv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equiv::Refl(t) => write!(f, "(refl {t})"),
            Equiv::Symm(g) => write!(f, "(symm {g})"),
            Equiv::Trans(g, h) => write!(f, "(trans {g} {h})"),
            Equiv::CongTensor(g, h) => write!(f, "(cong-tensor {g} {h})"),
            Equiv::CongOplus(g, h) => write!(f, "(cong-oplus {g} {h})"),
            Equiv::SwapTensor(a, b) => write!(f, "(swap-tensor {a} {b})"),
            Equiv::SwapOplus(a, b) => write!(f, "(swap-oplus {a} {b})"),
            Equiv::AssocTensor(a, b, c) => write!(f, "(assoc-tensor {a} {b} {c})"),
            Equiv::AssocOplus(a, b, c) => write!(f, "(assoc-oplus {a} {b} {c})"),
            Equiv::Distr(a, b, c) => write!(f, "(distr {a} {b} {c})"),
            Equiv::LowerTensor(a, b) => write!(f, "(lower-tensor {a} {b})"),
            Equiv::LowerOplus(a, b) => write!(f, "(lower-oplus {a} {b})"),
            Equiv::LUnitTensor(s) => write!(f, "(lunit-tensor {s})"),
            Equiv::LUnitOplus(s) => write!(f, "(lunit-oplus {s})"),
            Equiv::LZero(s) => write!(f, "(lzero {s})"),
            Equiv::Relabel(a, b) => write!(f, "(relabel {a} {b})"),
        }
    }
}
