//! Syntactic unitaries: groupoid combinators, named gates and lifted
//! open-type equivalences.

use std::fmt;

use thiserror::Error;

use super::equiv::{Equiv, EquivError};
use super::types::{Assignment, FinType, QType, UnboundTypeVar};
use crate::linalg::{ComplexMatrix, LinalgError};

/// A gate given directly by its matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Primitive {
    name: String,
    matrix: ComplexMatrix,
    src: QType,
    dst: QType,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitaryError {
    #[error("cannot compose: inner unitary ends at {inner}, outer starts at {outer}")]
    ComposeMismatch { inner: QType, outer: QType },
    #[error("primitive {name}: matrix is {rows}x{cols} but types need {src_dim} -> {dst_dim}")]
    PrimitiveShape {
        name: String,
        rows: usize,
        cols: usize,
        src_dim: usize,
        dst_dim: usize,
    },
    #[error("primitive {0} is not unitary")]
    NotUnitary(String),
    #[error("unknown primitive {0}")]
    UnknownPrimitive(String),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error(transparent)]
    Unbound(#[from] UnboundTypeVar),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl Primitive {
    pub fn new(name: &str, matrix: ComplexMatrix, src: QType, dst: QType) -> Result<Self, UnitaryError> {
        if matrix.cols() != src.dim() || matrix.rows() != dst.dim() {
            return Err(UnitaryError::PrimitiveShape {
                name: name.to_string(),
                rows: matrix.rows(),
                cols: matrix.cols(),
                src_dim: src.dim(),
                dst_dim: dst.dim(),
            });
        }
        if !matrix.is_unitary(1e-9)? {
            return Err(UnitaryError::NotUnitary(name.to_string()));
        }
        Ok(Primitive {
            name: name.to_string(),
            matrix,
            src,
            dst,
        })
    }

    /// The built-in gate set.
    pub fn named(name: &str) -> Result<Self, UnitaryError> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = QType::qubit;
        let qq = || QType::tensor(QType::qubit(), QType::qubit());
        let one = |m: ComplexMatrix| Primitive::new(name, m, q(), q());
        let two = |m: ComplexMatrix| Primitive::new(name, m, qq(), qq());
        use crate::linalg::Complex as C;
        match name {
            "X" => one(ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])?),
            "Y" => one(ComplexMatrix::from_vec(2, 2, vec![C::ZERO, -C::I, C::I, C::ZERO])?),
            "Z" => one(ComplexMatrix::diag(&[1.0, -1.0])),
            "H" => one(ComplexMatrix::from_real(2, 2, &[s, s, s, -s])?),
            "S" => one(ComplexMatrix::from_vec(2, 2, vec![C::ONE, C::ZERO, C::ZERO, C::I])?),
            "T" => one(ComplexMatrix::from_vec(
                2,
                2,
                vec![C::ONE, C::ZERO, C::ZERO, C::cis(std::f64::consts::FRAC_PI_4)],
            )?),
            "CNOT" => two(ComplexMatrix::permutation(&[0, 1, 3, 2])),
            "SWAP" => two(ComplexMatrix::permutation(&[0, 2, 1, 3])),
            "CZ" => two(ComplexMatrix::diag(&[1.0, 1.0, 1.0, -1.0])),
            _ => Err(UnitaryError::UnknownPrimitive(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn src(&self) -> &QType {
        &self.src
    }

    pub fn dst(&self) -> &QType {
        &self.dst
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Unitary {
    Id(QType),
    /// `Compose(v, u)` applies `u` first.
    Compose(Box<Unitary>, Box<Unitary>),
    Adjoint(Box<Unitary>),
    Tensor(Box<Unitary>, Box<Unitary>),
    DirectSum(Box<Unitary>, Box<Unitary>),
    Primitive(Primitive),
    /// The permutation unitary of an equivalence, closed by an assignment.
    FromEquiv(Equiv, Assignment),
}

impl Unitary {
    pub fn id(t: QType) -> Unitary {
        Unitary::Id(t)
    }

    /// `outer ∘ inner`
    pub fn compose(outer: Unitary, inner: Unitary) -> Unitary {
        Unitary::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn adjoint(u: Unitary) -> Unitary {
        Unitary::Adjoint(Box::new(u))
    }

    pub fn tensor(u: Unitary, v: Unitary) -> Unitary {
        Unitary::Tensor(Box::new(u), Box::new(v))
    }

    pub fn direct_sum(u: Unitary, v: Unitary) -> Unitary {
        Unitary::DirectSum(Box::new(u), Box::new(v))
    }

    pub fn named(name: &str) -> Result<Unitary, UnitaryError> {
        Primitive::named(name).map(Unitary::Primitive)
    }

    /// The `X` gate.
    pub fn not() -> Unitary {
        Unitary::named("X").expect("built-in gate")
    }

    pub fn from_equiv(f: Equiv, m: Assignment) -> Unitary {
        Unitary::FromEquiv(f, m)
    }

    /// `(source, target)` types.
    pub fn signature(&self) -> Result<(QType, QType), UnitaryError> {
        Ok(match self {
            Unitary::Id(t) => (t.clone(), t.clone()),
            Unitary::Compose(v, u) => {
                let (a, b) = u.signature()?;
                let (c, d) = v.signature()?;
                if b != c {
                    return Err(UnitaryError::ComposeMismatch { inner: b, outer: c });
                }
                (a, d)
            }
            Unitary::Adjoint(u) => {
                let (a, b) = u.signature()?;
                (b, a)
            }
            Unitary::Tensor(u, v) => {
                let (a, b) = u.signature()?;
                let (c, d) = v.signature()?;
                (QType::tensor(a, c), QType::tensor(b, d))
            }
            Unitary::DirectSum(u, v) => {
                let (a, b) = u.signature()?;
                let (c, d) = v.signature()?;
                (QType::oplus(a, c), QType::oplus(b, d))
            }
            Unitary::Primitive(p) => (p.src.clone(), p.dst.clone()),
            Unitary::FromEquiv(f, m) => {
                let (a, b) = f.endpoints()?;
                (a.instantiate(m)?, b.instantiate(m)?)
            }
        })
    }

    pub fn src(&self) -> Result<QType, UnitaryError> {
        Ok(self.signature()?.0)
    }

    pub fn dst(&self) -> Result<QType, UnitaryError> {
        Ok(self.signature()?.1)
    }

    pub fn size(&self) -> usize {
        match self {
            Unitary::Compose(a, b) | Unitary::Tensor(a, b) | Unitary::DirectSum(a, b) => {
                1 + a.size() + b.size()
            }
            Unitary::Adjoint(a) => 1 + a.size(),
            Unitary::FromEquiv(f, _) => f.size(),
            _ => 1,
        }
    }
}

/// `Lower Bool ⊗ X → X ⊕ X` sending `(false, x)` to the left summand and
/// `(true, x)` to the right, as an equivalence in variable `X`.
pub fn bool_distr_equiv(var: &str) -> Equiv {
    use super::types::OpenType as T;
    let x = T::var(var);
    let unit = T::Lower(FinType::Unit);
    let two = FinType::sum(FinType::Unit, FinType::Unit);
    let split = Equiv::trans(
        Equiv::Relabel(FinType::Bool, two),
        Equiv::symm(Equiv::LowerOplus(FinType::Unit, FinType::Unit)),
    );
    Equiv::chain(
        T::tensor(T::Lower(FinType::Bool), x.clone()),
        [
            // Lower Bool ⊗ X → (1 ⊕ 1) ⊗ X
            Equiv::cong_tensor(split, Equiv::Refl(x.clone())),
            // → X ⊗ (1 ⊕ 1)
            Equiv::SwapTensor(T::oplus(unit.clone(), unit.clone()), x.clone()),
            // → (X ⊗ 1) ⊕ (X ⊗ 1)
            Equiv::Distr(x.clone(), unit.clone(), unit.clone()),
            // → (1 ⊗ X) ⊕ (1 ⊗ X)
            Equiv::cong_oplus(
                Equiv::SwapTensor(x.clone(), unit.clone()),
                Equiv::SwapTensor(x.clone(), unit.clone()),
            ),
            // → X ⊕ X
            Equiv::cong_oplus(Equiv::LUnitTensor(x.clone()), Equiv::LUnitTensor(x)),
        ],
    )
}

/// Negation on `Lower Bool` as an equivalence.
pub fn not_equiv() -> Equiv {
    use super::types::OpenType as T;
    let two = FinType::sum(FinType::Unit, FinType::Unit);
    let unit = T::Lower(FinType::Unit);
    Equiv::chain(
        T::Lower(FinType::Bool),
        [
            Equiv::Relabel(FinType::Bool, two.clone()),
            Equiv::symm(Equiv::LowerOplus(FinType::Unit, FinType::Unit)),
            Equiv::SwapOplus(unit.clone(), unit),
            Equiv::LowerOplus(FinType::Unit, FinType::Unit),
            Equiv::Relabel(two, FinType::Bool),
        ],
    )
}

/// The distributor on `Qubit ⊗ Lower α` as a closed unitary.
pub fn distr_unitary(alpha: FinType) -> Unitary {
    Unitary::from_equiv(bool_distr_equiv("X"), Assignment::new().with("X", alpha))
}

/// Controlled gate `DISTR† ∘ (I ⊕ u) ∘ DISTR` on `Qubit ⊗ Lower α`.
pub fn controlled(alpha: FinType, u: Unitary) -> Unitary {
    let d = distr_unitary(alpha.clone());
    let body = Unitary::direct_sum(Unitary::id(QType::Lower(alpha)), u);
    Unitary::compose(Unitary::adjoint(d.clone()), Unitary::compose(body, d))
}

/// `D(U, V) = DISTR† ∘ (U ⊕ V) ∘ DISTR`.
pub fn distr_conjugate(alpha: FinType, u: Unitary, v: Unitary) -> Unitary {
    let d = distr_unitary(alpha);
    Unitary::compose(
        Unitary::adjoint(d.clone()),
        Unitary::compose(Unitary::direct_sum(u, v), d),
    )
}

impl fmt::Display for Unitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unitary::Id(t) => write!(f, "(id {t})"),
            Unitary::Compose(v, u) => write!(f, "(compose {v} {u})"),
            Unitary::Adjoint(u) => write!(f, "(dagger {u})"),
            Unitary::Tensor(u, v) => write!(f, "(utensor {u} {v})"),
            Unitary::DirectSum(u, v) => write!(f, "(uoplus {u} {v})"),
            Unitary::Primitive(p) => write!(f, "(prim {})", p.name),
            Unitary::FromEquiv(e, m) => write!(f, "(equiv {e} {m})"),
        }
    }
}
