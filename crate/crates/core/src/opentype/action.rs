//! How an equivalence derivation acts on basis values.
//!
//! Leaves are never inspected, so the action is the same for every
//! assignment of the type variables.

use crate::syntax::{Assignment, Equiv, FinType};

use super::basis::{basis_card, decode, encode, BasisValue};
use super::OpenTypeError;

type Value<L> = BasisValue<L>;

/// Apply `f` in the forward direction.
pub fn apply_equiv<L: Clone>(f: &Equiv, v: &Value<L>) -> Result<Value<L>, OpenTypeError> {
    act(f, v, true)
}

/// Apply the inverse of `f`.
pub fn apply_inverse<L: Clone>(f: &Equiv, v: &Value<L>) -> Result<Value<L>, OpenTypeError> {
    act(f, v, false)
}

fn stuck<L>(f: &Equiv, forward: bool, v: &Value<L>) -> OpenTypeError {
    OpenTypeError::Stuck { equiv: f.to_string(), forward, value: v.map_leaves(&mut |_| "_").to_string() }
}

fn act<L: Clone>(f: &Equiv, v: &Value<L>, forward: bool) -> Result<Value<L>, OpenTypeError> {
    use BasisValue as B;
    let err = || stuck(f, forward, v);
    Ok(match f {
        Equiv::Refl(_) => v.clone(),
        Equiv::Symm(g) => act(g, v, !forward)?,
        Equiv::Trans(g, h) => {
            if forward {
                act(h, &act(g, v, true)?, true)?
            } else {
                act(g, &act(h, v, false)?, false)?
            }
        }
        Equiv::CongTensor(g, h) => match v {
            B::Pair(a, b) => B::pair(act(g, a, forward)?, act(h, b, forward)?),
            _ => return Err(err()),
        },
        Equiv::CongOplus(g, h) => match v {
            B::Inl(a) => B::inl(act(g, a, forward)?),
            B::Inr(b) => B::inr(act(h, b, forward)?),
            _ => return Err(err()),
        },
        Equiv::SwapTensor(..) => match v {
            B::Pair(a, b) => B::Pair(b.clone(), a.clone()),
            _ => return Err(err()),
        },
        Equiv::SwapOplus(..) => match v {
            B::Inl(a) => B::Inr(a.clone()),
            B::Inr(b) => B::Inl(b.clone()),
            _ => return Err(err()),
        },
        Equiv::AssocTensor(..) => match (forward, v) {
            (true, B::Pair(a, bc)) => match bc.as_ref() {
                B::Pair(b, c) => B::pair(B::Pair(a.clone(), b.clone()), c.as_ref().clone()),
                _ => return Err(err()),
            },
            (false, B::Pair(ab, c)) => match ab.as_ref() {
                B::Pair(a, b) => B::pair(a.as_ref().clone(), B::Pair(b.clone(), c.clone())),
                _ => return Err(err()),
            },
            _ => return Err(err()),
        },
        Equiv::AssocOplus(..) => {
            if forward {
                match v {
                    B::Inl(a) => B::inl(B::Inl(a.clone())),
                    B::Inr(bc) => match bc.as_ref() {
                        B::Inl(b) => B::inl(B::Inr(b.clone())),
                        B::Inr(c) => B::Inr(c.clone()),
                        _ => return Err(err()),
                    },
                    _ => return Err(err()),
                }
            } else {
                match v {
                    B::Inl(ab) => match ab.as_ref() {
                        B::Inl(a) => B::Inl(a.clone()),
                        B::Inr(b) => B::inr(B::Inl(b.clone())),
                        _ => return Err(err()),
                    },
                    B::Inr(c) => B::inr(B::Inr(c.clone())),
                    _ => return Err(err()),
                }
            }
        }
        Equiv::Distr(..) => {
            if forward {
                match v {
                    B::Pair(a, bc) => match bc.as_ref() {
                        B::Inl(b) => B::inl(B::Pair(a.clone(), b.clone())),
                        B::Inr(c) => B::inr(B::Pair(a.clone(), c.clone())),
                        _ => return Err(err()),
                    },
                    _ => return Err(err()),
                }
            } else {
                match v {
                    B::Inl(ab) => match ab.as_ref() {
                        B::Pair(a, b) => B::Pair(a.clone(), Box::new(B::Inl(b.clone()))),
                        _ => return Err(err()),
                    },
                    B::Inr(ac) => match ac.as_ref() {
                        B::Pair(a, c) => B::Pair(a.clone(), Box::new(B::Inr(c.clone()))),
                        _ => return Err(err()),
                    },
                    _ => return Err(err()),
                }
            }
        }
        Equiv::LowerTensor(_, b) => {
            let nb = b.card();
            if forward {
                match v {
                    B::Pair(x, y) => match (x.as_ref(), y.as_ref()) {
                        (B::Elem(i), B::Elem(j)) => B::Elem(i * nb + j),
                        _ => return Err(err()),
                    },
                    _ => return Err(err()),
                }
            } else {
                match v {
                    B::Elem(k) if nb > 0 => B::pair(B::Elem(k / nb), B::Elem(k % nb)),
                    _ => return Err(err()),
                }
            }
        }
        Equiv::LowerOplus(a, _) => {
            let na = a.card();
            if forward {
                match v {
                    B::Inl(x) => match x.as_ref() {
                        B::Elem(i) => B::Elem(*i),
                        _ => return Err(err()),
                    },
                    B::Inr(y) => match y.as_ref() {
                        B::Elem(j) => B::Elem(na + j),
                        _ => return Err(err()),
                    },
                    _ => return Err(err()),
                }
            } else {
                match v {
                    B::Elem(k) if *k < na => B::inl(B::Elem(*k)),
                    B::Elem(k) => B::inr(B::Elem(k - na)),
                    _ => return Err(err()),
                }
            }
        }
        Equiv::LUnitTensor(_) => {
            if forward {
                match v {
                    B::Pair(u, s) if matches!(u.as_ref(), B::Elem(0)) => s.as_ref().clone(),
                    _ => return Err(err()),
                }
            } else {
                B::pair(B::Elem(0), v.clone())
            }
        }
        Equiv::LUnitOplus(_) => {
            if forward {
                match v {
                    B::Inr(s) => s.as_ref().clone(),
                    _ => return Err(err()),
                }
            } else {
                B::inr(v.clone())
            }
        }
        // Both sides are empty, so there is nothing to map.
        Equiv::LZero(_) => return Err(err()),
        Equiv::Relabel(a, b) => match v {
            B::Elem(i) if *i < a.card().min(b.card()) => B::Elem(*i),
            _ => return Err(err()),
        },
    })
}

/// The permutation of basis indices induced by `f` under `m`:
/// entry `i` is the target index of source basis element `i`.
/// Bijectivity is checked by enumeration.
pub fn equiv_basis_bijection(f: &Equiv, m: &Assignment) -> Result<Vec<usize>, OpenTypeError> {
    let (src, dst) = f.endpoints()?;
    let n = basis_card(&src, m)?;
    let n_dst = basis_card(&dst, m)?;
    if n != n_dst {
        return Err(OpenTypeError::NotBijective { src: n, dst: n_dst });
    }
    let mut seen = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let v = decode(&src, m, i)?;
        let j = encode(&dst, m, &apply_equiv(f, &v)?)?;
        if std::mem::replace(&mut seen[j], true) {
            return Err(OpenTypeError::NotBijective { src: n, dst: n_dst });
        }
        perm.push(j);
    }
    Ok(perm)
}

/// The assignment sending every variable of `f`'s endpoints to `a`.
pub fn uniform_assignment(f: &Equiv, a: FinType) -> Result<Assignment, OpenTypeError> {
    let (src, dst) = f.endpoints()?;
    let mut m = Assignment::new();
    for x in src.vars().union(&dst.vars()) {
        m.insert(x, a.clone());
    }
    Ok(m)
}
