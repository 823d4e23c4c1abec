//! A continuation-passing calculus of qubits, its axioms, and translations
//! to and from expressions over binary types.
//!
//! A term `t` is checked against two zones: continuations, which may be
//! ignored or used in both branches of a measurement, and wires, which are
//! linear. Positions that consume wires accept a tuple of wires, so a
//! unitary on `Qubit ⊗ Qubit` can take `(a b)` directly.

pub mod axioms;
mod translate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Ctx, Name, NameSupply, QType, Unitary};

pub use axioms::{alg_axioms, random_alg_term, AlgAxiom, AlgInstance};
pub use translate::{to_alg, to_qexp, TranslateError};

/// Wires fed to a consumer, as a right-nested tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Wires {
    One(Name),
    /// At least two components.
    Tuple(Vec<Wires>),
}

impl Wires {
    pub fn one(a: &str) -> Wires {
        Wires::One(a.to_string())
    }

    pub fn pair(a: &str, b: &str) -> Wires {
        Wires::Tuple(vec![Wires::one(a), Wires::one(b)])
    }

    /// A single component stays as it is.
    pub fn tuple(mut ws: Vec<Wires>) -> Wires {
        if ws.len() == 1 {
            ws.pop().expect("one element")
        } else {
            Wires::Tuple(ws)
        }
    }

    pub fn names(&self) -> Vec<&Name> {
        match self {
            Wires::One(a) => vec![a],
            Wires::Tuple(ws) => ws.iter().flat_map(Wires::names).collect(),
        }
    }

    fn replace(&self, a: &str, with: &Wires) -> Wires {
        match self {
            Wires::One(b) if b == a => with.clone(),
            Wires::One(_) => self.clone(),
            Wires::Tuple(ws) => Wires::Tuple(ws.iter().map(|w| w.replace(a, with)).collect()),
        }
    }
}

impl fmt::Display for Wires {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wires::One(a) => f.write_str(a),
            Wires::Tuple(ws) => {
                f.write_str("(")?;
                for (i, w) in ws.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{w}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgTerm {
    /// Pass wires to a continuation.
    Apply(Name, Vec<Wires>),
    /// Split a pair into two wires.
    SplitPair(Wires, Name, Name, Box<AlgTerm>),
    /// Allocate a qubit in state zero.
    New(Name, Box<AlgTerm>),
    /// Measure a qubit, continuing with the first term on zero.
    Meas(Wires, Box<AlgTerm>, Box<AlgTerm>),
    /// Apply a unitary and bind its output.
    UStep(Unitary, Wires, Name, Box<AlgTerm>),
}

impl AlgTerm {
    pub fn apply(k: &str, args: &[&str]) -> AlgTerm {
        AlgTerm::Apply(k.to_string(), args.iter().map(|a| Wires::one(a)).collect())
    }

    pub fn split(w: Wires, a1: &str, a2: &str, t: AlgTerm) -> AlgTerm {
        AlgTerm::SplitPair(w, a1.to_string(), a2.to_string(), Box::new(t))
    }

    pub fn new_qubit(a: &str, t: AlgTerm) -> AlgTerm {
        AlgTerm::New(a.to_string(), Box::new(t))
    }

    pub fn meas(a: &str, t0: AlgTerm, t1: AlgTerm) -> AlgTerm {
        AlgTerm::Meas(Wires::one(a), Box::new(t0), Box::new(t1))
    }

    /// `meas(a, t, t)`.
    pub fn discard(a: &str, t: AlgTerm) -> AlgTerm {
        AlgTerm::meas(a, t.clone(), t)
    }

    pub fn ustep(u: Unitary, w: Wires, b: &str, t: AlgTerm) -> AlgTerm {
        AlgTerm::UStep(u, w, b.to_string(), Box::new(t))
    }

    /// `U(a, t)`: apply in place, rebinding the same name.
    pub fn ustep_in_place(u: Unitary, a: &str, t: AlgTerm) -> AlgTerm {
        AlgTerm::ustep(u, Wires::one(a), a, t)
    }

    pub fn free_wires(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        let under = |binders: &[&Name], t: &AlgTerm, out: &mut BTreeSet<Name>| {
            let mut inner = BTreeSet::new();
            t.collect_free(&mut inner);
            out.extend(inner.into_iter().filter(|n| !binders.contains(&n)));
        };
        match self {
            AlgTerm::Apply(_, args) => out.extend(args.iter().flat_map(Wires::names).cloned()),
            AlgTerm::SplitPair(w, a1, a2, t) => {
                out.extend(w.names().into_iter().cloned());
                under(&[a1, a2], t, out);
            }
            AlgTerm::New(a, t) => under(&[a], t, out),
            AlgTerm::Meas(w, t0, t1) => {
                out.extend(w.names().into_iter().cloned());
                t0.collect_free(out);
                t1.collect_free(out);
            }
            AlgTerm::UStep(_, w, b, t) => {
                out.extend(w.names().into_iter().cloned());
                under(&[b], t, out);
            }
        }
    }

    /// Every wire and continuation name, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            AlgTerm::Apply(k, args) => {
                out.insert(k.clone());
                out.extend(args.iter().flat_map(Wires::names).cloned());
            }
            AlgTerm::SplitPair(w, a1, a2, _) => {
                out.extend(w.names().into_iter().cloned());
                out.extend([a1.clone(), a2.clone()]);
            }
            AlgTerm::New(a, _) => {
                out.insert(a.clone());
            }
            AlgTerm::Meas(w, ..) => out.extend(w.names().into_iter().cloned()),
            AlgTerm::UStep(_, w, b, _) => {
                out.extend(w.names().into_iter().cloned());
                out.insert(b.clone());
            }
        });
        out
    }

    pub fn continuations(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let AlgTerm::Apply(k, _) = t {
                out.insert(k.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&AlgTerm)) {
        f(self);
        match self {
            AlgTerm::Apply(..) => {}
            AlgTerm::SplitPair(.., t) | AlgTerm::New(_, t) | AlgTerm::UStep(.., t) => t.visit(f),
            AlgTerm::Meas(_, t0, t1) => {
                t0.visit(f);
                t1.visit(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Replace the free wire `a` by `with`, renaming binders that would
    /// capture it.
    pub fn subst_wire(&self, a: &str, with: &Wires, names: &mut NameSupply) -> AlgTerm {
        let avoid: BTreeSet<Name> = with.names().into_iter().cloned().collect();
        self.subst_wire_avoiding(a, with, &avoid, names)
    }

    fn subst_wire_avoiding(&self, a: &str, with: &Wires, avoid: &BTreeSet<Name>, names: &mut NameSupply) -> AlgTerm {
        let go = |t: &AlgTerm, names: &mut NameSupply| t.subst_wire_avoiding(a, with, avoid, names);
        match self {
            AlgTerm::Apply(k, args) => AlgTerm::Apply(k.clone(), args.iter().map(|w| w.replace(a, with)).collect()),
            AlgTerm::SplitPair(w, b1, b2, t) => {
                let w = w.replace(a, with);
                if b1 == a || b2 == a {
                    return AlgTerm::SplitPair(w, b1.clone(), b2.clone(), t.clone());
                }
                let (b1, t) = rebind(b1, t, avoid, names);
                let (b2, t) = rebind(b2, &t, avoid, names);
                AlgTerm::SplitPair(w, b1, b2, Box::new(go(&t, names)))
            }
            AlgTerm::New(b, t) => {
                if b == a {
                    return self.clone();
                }
                let (b, t) = rebind(b, t, avoid, names);
                AlgTerm::New(b, Box::new(go(&t, names)))
            }
            AlgTerm::Meas(w, t0, t1) => AlgTerm::Meas(w.replace(a, with), Box::new(go(t0, names)), Box::new(go(t1, names))),
            AlgTerm::UStep(u, w, b, t) => {
                let w = w.replace(a, with);
                if b == a {
                    return AlgTerm::UStep(u.clone(), w, b.clone(), t.clone());
                }
                let (b, t) = rebind(b, t, avoid, names);
                AlgTerm::UStep(u.clone(), w, b, Box::new(go(&t, names)))
            }
        }
    }

    /// Rename every bound wire to a canonical name, so alpha-equivalent
    /// terms become equal.
    pub fn alpha_normalize(&self) -> AlgTerm {
        fn go(t: &AlgTerm, env: &BTreeMap<Name, Name>, next: &mut usize) -> AlgTerm {
            let w = |w: &Wires| rename_all(w, env);
            let mut bind = |b: &Name, env: &BTreeMap<Name, Name>| {
                let mut env = env.clone();
                let fresh = format!("%{next}");
                *next += 1;
                env.insert(b.clone(), fresh.clone());
                (fresh, env)
            };
            match t {
                AlgTerm::Apply(k, args) => AlgTerm::Apply(k.clone(), args.iter().map(w).collect()),
                AlgTerm::SplitPair(s, b1, b2, body) => {
                    let (n1, env1) = bind(b1, env);
                    let (n2, env2) = bind(b2, &env1);
                    AlgTerm::SplitPair(w(s), n1, n2, Box::new(go(body, &env2, next)))
                }
                AlgTerm::New(b, body) => {
                    let (n, env) = bind(b, env);
                    AlgTerm::New(n, Box::new(go(body, &env, next)))
                }
                AlgTerm::Meas(s, t0, t1) => AlgTerm::Meas(w(s), Box::new(go(t0, env, next)), Box::new(go(t1, env, next))),
                AlgTerm::UStep(u, s, b, body) => {
                    let s = w(s);
                    let (n, env) = bind(b, env);
                    AlgTerm::UStep(u.clone(), s, n, Box::new(go(body, &env, next)))
                }
            }
        }
        go(self, &BTreeMap::new(), &mut 0)
    }

    pub fn alpha_eq(&self, other: &AlgTerm) -> bool {
        self.alpha_normalize() == other.alpha_normalize()
    }
}

fn rename_all(w: &Wires, env: &BTreeMap<Name, Name>) -> Wires {
    match w {
        Wires::One(a) => Wires::One(env.get(a).cloned().unwrap_or_else(|| a.clone())),
        Wires::Tuple(ws) => Wires::Tuple(ws.iter().map(|w| rename_all(w, env)).collect()),
    }
}

/// Rename binder `b` of `t` when it is in `avoid`.
fn rebind(b: &Name, t: &AlgTerm, avoid: &BTreeSet<Name>, names: &mut NameSupply) -> (Name, AlgTerm) {
    if !avoid.contains(b) {
        return (b.clone(), t.clone());
    }
    let fresh = names.fresh(b);
    let renamed = t.subst_wire(b, &Wires::One(fresh.clone()), names);
    (fresh, renamed)
}

impl fmt::Display for AlgTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgTerm::Apply(k, args) => {
                write!(f, "(apply {k} (")?;
                for (i, w) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{w}")?;
                }
                f.write_str("))")
            }
            AlgTerm::SplitPair(w, a1, a2, t) => write!(f, "(split {w} ({a1} {a2}) {t})"),
            AlgTerm::New(a, t) => write!(f, "(new {a} {t})"),
            AlgTerm::Meas(w, t0, t1) => write!(f, "(meas {w} {t0} {t1})"),
            AlgTerm::UStep(u, w, b, t) => write!(f, "(ustep {u} {w} {b} {t})"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum AlgTypeError {
    #[error("type {0} is not binary")]
    NotBinary(QType),
    #[error("continuation {0} is not in scope")]
    UnknownContinuation(Name),
    #[error("wire {0} is not available")]
    UnboundWire(Name),
    #[error("wire {0} is bound twice")]
    Rebound(Name),
    #[error("wires left unused: {0:?}")]
    UnusedWires(Vec<Name>),
    #[error("{what}: expected {expected}, found {found}")]
    Mismatch { what: String, expected: QType, found: QType },
    #[error("unitary {0} has no valid signature")]
    BadUnitary(String),
    #[error("{0} takes at least one argument")]
    NoArguments(Name),
}

fn binary(t: &QType) -> Result<(), AlgTypeError> {
    if t.is_binary() {
        Ok(())
    } else {
        Err(AlgTypeError::NotBinary(t.clone()))
    }
}

fn take(delta: &mut Ctx, w: &Wires) -> Result<QType, AlgTypeError> {
    match w {
        Wires::One(a) => delta.remove(a).ok_or_else(|| AlgTypeError::UnboundWire(a.clone())),
        Wires::Tuple(ws) => Ok(QType::tensor_all(ws.iter().map(|w| take(delta, w)).collect::<Result<_, _>>()?)),
    }
}

fn bind(delta: &mut Ctx, a: &Name, t: QType) -> Result<(), AlgTypeError> {
    match delta.insert(a.clone(), t) {
        Some(_) => Err(AlgTypeError::Rebound(a.clone())),
        None => Ok(()),
    }
}

/// Check `gamma | delta ⊢ t`. `gamma` holds continuations and `delta` the
/// linear wires; every type involved must be binary.
pub fn check_alg(gamma: &Ctx, delta: &Ctx, t: &AlgTerm) -> Result<(), AlgTypeError> {
    for (_, ty) in gamma.iter().chain(delta.iter()) {
        binary(ty)?;
    }
    check_in(gamma, delta.clone(), t)
}

fn check_in(gamma: &Ctx, mut delta: Ctx, t: &AlgTerm) -> Result<(), AlgTypeError> {
    match t {
        AlgTerm::Apply(k, args) => {
            let expected = gamma.get(k).ok_or_else(|| AlgTypeError::UnknownContinuation(k.clone()))?;
            if args.is_empty() {
                return Err(AlgTypeError::NoArguments(k.clone()));
            }
            let found = take(&mut delta, &Wires::tuple(args.clone()))?;
            if &found != expected {
                return Err(AlgTypeError::Mismatch { what: format!("arguments of {k}"), expected: expected.clone(), found });
            }
            if !delta.is_empty() {
                return Err(AlgTypeError::UnusedWires(delta.names().into_iter().collect()));
            }
            Ok(())
        }
        AlgTerm::SplitPair(w, a1, a2, body) => {
            let QType::Tensor(s1, s2) = take(&mut delta, w)? else {
                let found = take(&mut Ctx::new(), w).unwrap_or(QType::unit());
                return Err(AlgTypeError::Mismatch {
                    what: format!("split of {w}"),
                    expected: QType::tensor(QType::qubit(), QType::qubit()),
                    found,
                });
            };
            if a1 == a2 {
                return Err(AlgTypeError::Rebound(a1.clone()));
            }
            bind(&mut delta, a1, *s1)?;
            bind(&mut delta, a2, *s2)?;
            check_in(gamma, delta, body)
        }
        AlgTerm::New(a, body) => {
            bind(&mut delta, a, QType::qubit())?;
            check_in(gamma, delta, body)
        }
        AlgTerm::Meas(w, t0, t1) => {
            let found = take(&mut delta, w)?;
            if found != QType::qubit() {
                return Err(AlgTypeError::Mismatch { what: format!("measured {w}"), expected: QType::qubit(), found });
            }
            check_in(gamma, delta.clone(), t0)?;
            check_in(gamma, delta, t1)
        }
        AlgTerm::UStep(u, w, b, body) => {
            let (src, dst) = u.signature().map_err(|_| AlgTypeError::BadUnitary(u.to_string()))?;
            binary(&src)?;
            binary(&dst)?;
            let found = take(&mut delta, w)?;
            if found != src {
                return Err(AlgTypeError::Mismatch { what: format!("input of {u}"), expected: src, found });
            }
            bind(&mut delta, b, dst)?;
            check_in(gamma, delta, body)
        }
    }
}

/// `t[k(a) ↦ u]`: every call of the continuation `k` in `t` is replaced by
/// `u`, with `u`'s wire `a` standing for the call's arguments.
pub fn alg_subst(t: &AlgTerm, k: &str, a: &str, u: &AlgTerm) -> AlgTerm {
    let mut used = t.all_names();
    used.extend(u.all_names());
    let mut names = NameSupply::avoiding(used);
    let mut captured = u.free_wires();
    captured.remove(a);
    subst_in(t, k, a, u, &captured, &mut names)
}

fn subst_in(t: &AlgTerm, k: &str, a: &str, u: &AlgTerm, captured: &BTreeSet<Name>, names: &mut NameSupply) -> AlgTerm {
    let go = |t: &AlgTerm, names: &mut NameSupply| Box::new(subst_in(t, k, a, u, captured, names));
    match t {
        AlgTerm::Apply(j, args) if j == k => u.subst_wire(a, &Wires::tuple(args.clone()), names),
        AlgTerm::Apply(..) => t.clone(),
        AlgTerm::SplitPair(w, b1, b2, body) => {
            let (b1, body) = rebind(b1, body, captured, names);
            let (b2, body) = rebind(b2, &body, captured, names);
            AlgTerm::SplitPair(w.clone(), b1, b2, go(&body, names))
        }
        AlgTerm::New(b, body) => {
            let (b, body) = rebind(b, body, captured, names);
            AlgTerm::New(b, go(&body, names))
        }
        AlgTerm::Meas(w, t0, t1) => AlgTerm::Meas(w.clone(), go(t0, names), go(t1, names)),
        AlgTerm::UStep(v, w, b, body) => {
            let (b, body) = rebind(b, body, captured, names);
            AlgTerm::UStep(v.clone(), w.clone(), b, go(&body, names))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QType {
        QType::qubit()
    }

    #[test]
    fn var_rule() {
        let gamma = Ctx::singleton("y", q());
        let delta = Ctx::singleton("x", q());
        assert_eq!(check_alg(&gamma, &delta, &AlgTerm::apply("y", &["x"])), Ok(()));
        // continuations other than the one called may be ignored
        let gamma2 = gamma.clone().with("z", q());
        assert_eq!(check_alg(&gamma2, &delta, &AlgTerm::apply("y", &["x"])), Ok(()));
        let pair = Ctx::singleton("y", QType::tensor(q(), q()));
        let two = Ctx::singleton("a", q()).with("b", q());
        assert_eq!(check_alg(&pair, &two, &AlgTerm::apply("y", &["a", "b"])), Ok(()));
        assert_eq!(check_alg(&pair, &two, &AlgTerm::apply("y", &["a"])).map_err(|_| ()), Err(()));
    }

    #[test]
    fn new_must_consume_its_qubit() {
        let gamma = Ctx::singleton("x", q());
        let delta = Ctx::singleton("b", q());
        let t = AlgTerm::new_qubit("a", AlgTerm::apply("x", &["b"]));
        assert!(matches!(check_alg(&gamma, &delta, &t), Err(AlgTypeError::UnusedWires(_))));
        let ok = AlgTerm::new_qubit("a", AlgTerm::apply("x", &["a"]));
        assert_eq!(check_alg(&gamma, &Ctx::new(), &ok), Ok(()));
    }

    #[test]
    fn meas_shares_the_rest() {
        let gamma = Ctx::singleton("x", q());
        let delta = Ctx::singleton("a", q()).with("c", q());
        let t = AlgTerm::meas("a", AlgTerm::apply("x", &["c"]), AlgTerm::ustep_in_place(Unitary::not(), "c", AlgTerm::apply("x", &["c"])));
        assert_eq!(check_alg(&gamma, &delta, &t), Ok(()));
        let bad = AlgTerm::meas("a", AlgTerm::apply("x", &["a"]), AlgTerm::apply("x", &["c"]));
        assert!(check_alg(&gamma, &delta, &bad).is_err());
    }

    #[test]
    fn non_binary_types_are_rejected() {
        let gamma = Ctx::singleton("x", QType::unit());
        assert_eq!(
            check_alg(&gamma, &Ctx::new(), &AlgTerm::apply("x", &["a"])),
            Err(AlgTypeError::NotBinary(QType::unit()))
        );
    }

    #[test]
    fn subst_clauses() {
        let u = AlgTerm::ustep_in_place(Unitary::not(), "a", AlgTerm::apply("y", &["a"]));
        // x(b)[x(a) ↦ u] plugs b in for a
        let out = alg_subst(&AlgTerm::apply("x", &["b"]), "x", "a", &u);
        assert_eq!(out, AlgTerm::ustep(Unitary::not(), Wires::one("b"), "a", AlgTerm::apply("y", &["a"])));
        // other continuations are untouched
        assert_eq!(alg_subst(&AlgTerm::apply("z", &["b"]), "x", "a", &u), AlgTerm::apply("z", &["b"]));
        // both measurement branches are substituted
        let m = AlgTerm::meas("c", AlgTerm::apply("x", &["b"]), AlgTerm::apply("x", &["b"]));
        let AlgTerm::Meas(_, t0, t1) = alg_subst(&m, "x", "a", &u) else { panic!() };
        assert_eq!(t0, t1);
        assert!(matches!(*t0, AlgTerm::UStep(..)));
    }

    #[test]
    fn subst_passes_tuples_and_avoids_capture() {
        // x(b, c)[x(a) ↦ y(a)] is y((b c)) as a single argument
        let out = alg_subst(&AlgTerm::apply("x", &["b", "c"]), "x", "a", &AlgTerm::apply("y", &["a"]));
        assert_eq!(out, AlgTerm::Apply("y".into(), vec![Wires::pair("b", "c")]));
        // new(d. x(d)) where u mentions a free d: the binder must move
        let t = AlgTerm::new_qubit("d", AlgTerm::apply("x", &["d"]));
        let u = AlgTerm::Apply("y".into(), vec![Wires::pair("a", "d")]);
        let out = alg_subst(&t, "x", "a", &u);
        let AlgTerm::New(b, body) = &out else { panic!() };
        assert_ne!(b, "d");
        assert_eq!(**body, AlgTerm::Apply("y".into(), vec![Wires::Tuple(vec![Wires::One(b.clone()), Wires::one("d")])]));
    }

    #[test]
    fn alpha_equivalence() {
        let t = AlgTerm::new_qubit("a", AlgTerm::apply("x", &["a"]));
        let u = AlgTerm::new_qubit("b", AlgTerm::apply("x", &["b"]));
        assert!(t.alpha_eq(&u));
        assert!(!t.alpha_eq(&AlgTerm::new_qubit("b", AlgTerm::apply("y", &["b"]))));
    }
}
