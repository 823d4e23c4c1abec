//! The fifteen axioms of the algebraic calculus, as generators of random
//! closed instances, and a random term generator for the calculus.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::syntax::unitary::distr_conjugate;
use crate::syntax::{Ctx, FinType, Name, NameSupply, QType, Unitary};

use super::{AlgTerm, Wires};

/// Upper bound on live qubits inside generated terms.
const MAX_QUBITS: usize = 5;
const ONE_QUBIT: [&str; 6] = ["H", "X", "Y", "Z", "S", "T"];
const TWO_QUBIT: [&str; 3] = ["CNOT", "SWAP", "CZ"];

/// Both sides of one axiom instance, with a single continuation.
#[derive(Clone, Debug)]
pub struct AlgInstance {
    pub k: Name,
    pub goal: QType,
    pub delta: Ctx,
    pub lhs: AlgTerm,
    pub rhs: AlgTerm,
}

impl AlgInstance {
    pub fn gamma(&self) -> Ctx {
        Ctx::singleton(&self.k, self.goal.clone())
    }
}

pub struct AlgAxiom {
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    instantiate: fn(&mut dyn RngCore) -> AlgInstance,
}

impl AlgAxiom {
    pub fn instance(&self, rng: &mut dyn RngCore) -> AlgInstance {
        (self.instantiate)(rng)
    }
}

impl fmt::Debug for AlgAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {} ≈ {}", self.name, self.lhs, self.rhs)
    }
}

impl fmt::Display for AlgAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn q() -> QType {
    QType::qubit()
}

fn qq() -> QType {
    QType::tensor(q(), q())
}

fn gate(rng: &mut dyn RngCore, pool: &[&str]) -> Unitary {
    Unitary::named(pool.choose(rng).expect("non-empty pool")).expect("built-in gate")
}

fn gate_on(rng: &mut dyn RngCore, ty: &QType) -> Unitary {
    if *ty == q() {
        gate(rng, &ONE_QUBIT)
    } else {
        gate(rng, &TWO_QUBIT)
    }
}

fn leaves(t: &QType) -> usize {
    match t {
        QType::Tensor(a, b) => leaves(a) + leaves(b),
        _ => 1,
    }
}

struct Gen<'r> {
    rng: &'r mut dyn RngCore,
    names: NameSupply,
    k: Name,
    goal: QType,
}

impl Gen<'_> {
    fn fresh(&mut self) -> Name {
        self.names.fresh("w")
    }

    fn term(&mut self, mut wires: Vec<(Name, QType)>, depth: usize) -> AlgTerm {
        if depth == 0 {
            return self.finish(wires);
        }
        let live: usize = wires.iter().map(|(_, t)| leaves(t)).sum();
        let qubits: Vec<usize> = (0..wires.len()).filter(|&i| wires[i].1 == q()).collect();
        let pairs: Vec<usize> = (0..wires.len()).filter(|&i| wires[i].1 != q()).collect();
        match self.rng.gen_range(0..6) {
            0 if live < MAX_QUBITS => {
                let a = self.fresh();
                wires.push((a.clone(), q()));
                AlgTerm::New(a, Box::new(self.term(wires, depth - 1)))
            }
            1 if !qubits.is_empty() => {
                let (a, _) = wires.remove(*qubits.choose(self.rng).expect("non-empty"));
                let t0 = self.term(wires.clone(), depth - 1);
                let t1 = self.term(wires, depth - 1);
                AlgTerm::Meas(Wires::One(a), Box::new(t0), Box::new(t1))
            }
            2 if !qubits.is_empty() => {
                let i = *qubits.choose(self.rng).expect("non-empty");
                let (a, _) = wires.remove(i);
                let u = gate(self.rng, &ONE_QUBIT);
                let b = if self.rng.gen_bool(0.5) { a.clone() } else { self.fresh() };
                wires.push((b.clone(), q()));
                AlgTerm::UStep(u, Wires::One(a), b, Box::new(self.term(wires, depth - 1)))
            }
            3 if qubits.len() >= 2 => {
                let mut picked: Vec<usize> = qubits.choose_multiple(self.rng, 2).copied().collect();
                let (first, second) = (wires[picked[0]].0.clone(), wires[picked[1]].0.clone());
                picked.sort_unstable();
                wires.remove(picked[1]);
                wires.remove(picked[0]);
                let u = gate(self.rng, &TWO_QUBIT);
                let c = self.fresh();
                wires.push((c.clone(), qq()));
                AlgTerm::UStep(u, Wires::pair(&first, &second), c, Box::new(self.term(wires, depth - 1)))
            }
            4 if !pairs.is_empty() => {
                let (w, ty) = wires.remove(*pairs.choose(self.rng).expect("non-empty"));
                self.split(w, ty, wires, depth - 1)
            }
            _ => self.term(wires, depth - 1),
        }
    }

    fn split(&mut self, w: Name, ty: QType, mut wires: Vec<(Name, QType)>, depth: usize) -> AlgTerm {
        let QType::Tensor(s1, s2) = ty else { unreachable!("only tensors are split") };
        let (a1, a2) = (self.fresh(), self.fresh());
        wires.push((a1.clone(), *s1));
        wires.push((a2.clone(), *s2));
        AlgTerm::SplitPair(Wires::One(w), a1, a2, Box::new(self.term(wires, depth)))
    }

    /// Consume every wire and call the continuation.
    fn finish(&mut self, mut wires: Vec<(Name, QType)>) -> AlgTerm {
        if let Some(i) = wires.iter().position(|(_, t)| *t != q()) {
            let (w, ty) = wires.remove(i);
            return self.split(w, ty, wires, 0);
        }
        let need = leaves(&self.goal);
        if wires.len() > need {
            let (a, _) = wires.remove(self.rng.gen_range(0..wires.len()));
            let t0 = self.finish(wires.clone());
            let t1 = self.finish(wires);
            return AlgTerm::Meas(Wires::One(a), Box::new(t0), Box::new(t1));
        }
        if wires.len() < need {
            let a = self.fresh();
            wires.push((a.clone(), q()));
            return AlgTerm::New(a, Box::new(self.finish(wires)));
        }
        wires.shuffle(self.rng);
        let mut it = wires.into_iter().map(|(a, _)| a);
        let goal = self.goal.clone();
        let args = match &goal {
            QType::Tensor(s1, s2) => vec![shape(s1, &mut it), shape(s2, &mut it)],
            _ => vec![shape(&goal, &mut it)],
        };
        AlgTerm::Apply(self.k.clone(), args)
    }
}

fn shape(t: &QType, it: &mut impl Iterator<Item = Name>) -> Wires {
    match t {
        QType::Tensor(a, b) => Wires::Tuple(vec![shape(a, it), shape(b, it)]),
        _ => Wires::One(it.next().expect("enough wires")),
    }
}

/// A random well-typed term `k : goal | delta ⊢ t` over binary types.
/// Generated binders are named `w0`, `w1`, ... avoiding `delta`.
pub fn random_alg_term(rng: &mut dyn RngCore, k: &str, goal: &QType, delta: &Ctx, depth: usize) -> AlgTerm {
    let mut used = delta.names();
    used.insert(k.to_string());
    let mut g = Gen { rng, names: NameSupply::avoiding(used), k: k.to_string(), goal: goal.clone() };
    let wires = delta.iter().map(|(n, t)| (n.clone(), t.clone())).collect();
    g.term(wires, depth)
}

/// Shared setup for one instance: the continuation, its type, and an
/// optional spare qubit `s` threaded through every metavariable.
struct Setup<'r> {
    rng: &'r mut dyn RngCore,
    goal: QType,
    theta: Ctx,
}

impl<'r> Setup<'r> {
    fn new(rng: &'r mut dyn RngCore) -> Self {
        let goal = if rng.gen_bool(0.5) { q() } else { qq() };
        let theta = if rng.gen_bool(0.5) { Ctx::singleton("s", q()) } else { Ctx::new() };
        Setup { rng, goal, theta }
    }

    /// A metavariable with the given parameter wires.
    fn meta(&mut self, params: &[(&str, QType)]) -> AlgTerm {
        let mut delta = self.theta.clone();
        for (p, t) in params {
            delta.insert(p.to_string(), t.clone());
        }
        let depth = self.rng.gen_range(0..=3);
        random_alg_term(self.rng, "k", &self.goal.clone(), &delta, depth)
    }

    fn done(self, wires: &[(&str, QType)], lhs: AlgTerm, rhs: AlgTerm) -> AlgInstance {
        let mut delta = self.theta;
        for (w, t) in wires {
            delta.insert(w.to_string(), t.clone());
        }
        AlgInstance { k: "k".into(), goal: self.goal, delta, lhs, rhs }
    }
}

fn rename(t: &AlgTerm, pairs: &[(&str, &str)]) -> AlgTerm {
    // go through placeholders so that swaps do not interfere
    let mut names = NameSupply::avoiding(t.all_names());
    let mut out = t.clone();
    let temps: Vec<Name> = pairs.iter().map(|(from, _)| names.fresh(&format!("{from}_"))).collect();
    for ((from, _), tmp) in pairs.iter().zip(&temps) {
        out = out.subst_wire(from, &Wires::One(tmp.clone()), &mut names);
    }
    for ((_, to), tmp) in pairs.iter().zip(&temps) {
        out = out.subst_wire(tmp, &Wires::one(to), &mut names);
    }
    out
}

fn d(u: Unitary, v: Unitary) -> Unitary {
    distr_conjugate(FinType::Bool, u, v)
}

fn b(t: AlgTerm) -> Box<AlgTerm> {
    Box::new(t)
}

fn axiom_a(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (x, y) = (s.meta(&[]), s.meta(&[]));
    let lhs = AlgTerm::ustep_in_place(Unitary::not(), "a", AlgTerm::meas("a", x.clone(), y.clone()));
    let rhs = AlgTerm::meas("a", y, x);
    s.done(&[("a", q())], lhs, rhs)
}

fn axiom_b(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (u, v) = (gate(s.rng, &ONE_QUBIT), gate(s.rng, &ONE_QUBIT));
    let (x, y) = (s.meta(&[("b", q())]), s.meta(&[("b", q())]));
    let lhs = AlgTerm::meas(
        "a",
        AlgTerm::ustep_in_place(u.clone(), "b", x.clone()),
        AlgTerm::ustep_in_place(v.clone(), "b", y.clone()),
    );
    let rhs = AlgTerm::ustep(d(u, v), Wires::pair("a", "b"), "c", AlgTerm::split(Wires::one("c"), "a", "b", AlgTerm::meas("a", x, y)));
    s.done(&[("a", q()), ("b", q())], lhs, rhs)
}

fn axiom_c(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let u = gate(s.rng, &ONE_QUBIT);
    let x = s.meta(&[]);
    let lhs = AlgTerm::ustep_in_place(u, "a", AlgTerm::discard("a", x.clone()));
    let rhs = AlgTerm::discard("a", x);
    s.done(&[("a", q())], lhs, rhs)
}

fn axiom_d(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (x, y) = (s.meta(&[]), s.meta(&[]));
    let lhs = AlgTerm::new_qubit("a", AlgTerm::meas("a", x.clone(), y));
    s.done(&[], lhs, x)
}

fn axiom_e(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (u, v) = (gate(s.rng, &ONE_QUBIT), gate(s.rng, &ONE_QUBIT));
    let x = s.meta(&[("a", q()), ("b", q())]);
    let lhs = AlgTerm::new_qubit(
        "a",
        AlgTerm::ustep(d(u.clone(), v), Wires::pair("a", "b"), "c", AlgTerm::split(Wires::one("c"), "a", "b", x.clone())),
    );
    let rhs = AlgTerm::ustep_in_place(u, "b", AlgTerm::new_qubit("a", x));
    s.done(&[("b", q())], lhs, rhs)
}

fn axiom_f(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let x = s.meta(&[("p", q()), ("r", q())]);
    let swap = Unitary::named("SWAP").expect("built-in gate");
    let lhs = AlgTerm::ustep(swap, Wires::pair("a", "b"), "c", AlgTerm::split(Wires::one("c"), "a", "b", rename(&x, &[("p", "a"), ("r", "b")])));
    let rhs = rename(&x, &[("p", "b"), ("r", "a")]);
    s.done(&[("a", q()), ("b", q())], lhs, rhs)
}

fn some_binary(rng: &mut dyn RngCore) -> QType {
    if rng.gen_bool(0.5) {
        q()
    } else {
        qq()
    }
}

fn axiom_g(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let sigma = some_binary(s.rng);
    let x = s.meta(&[("a", sigma.clone())]);
    let lhs = AlgTerm::ustep_in_place(Unitary::id(sigma.clone()), "a", x.clone());
    s.done(&[("a", sigma)], lhs, x)
}

fn axiom_h(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let sigma = some_binary(s.rng);
    let (u, v) = (gate_on(s.rng, &sigma), gate_on(s.rng, &sigma));
    let x = s.meta(&[("a", sigma.clone())]);
    // (VU) runs V first: the right-hand side applies V, then U
    let lhs = AlgTerm::ustep_in_place(Unitary::compose(u.clone(), v.clone()), "a", x.clone());
    let rhs = AlgTerm::ustep_in_place(v, "a", AlgTerm::ustep_in_place(u, "a", x));
    s.done(&[("a", sigma)], lhs, rhs)
}

fn axiom_i(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (u, v) = (gate(s.rng, &ONE_QUBIT), gate(s.rng, &ONE_QUBIT));
    let x = s.meta(&[("a", q()), ("b", q())]);
    let lhs = AlgTerm::ustep(
        Unitary::tensor(u.clone(), v.clone()),
        Wires::pair("a", "b"),
        "c",
        AlgTerm::split(Wires::one("c"), "a", "b", x.clone()),
    );
    let rhs = AlgTerm::ustep_in_place(u, "a", AlgTerm::ustep_in_place(v, "b", x));
    s.done(&[("a", q()), ("b", q())], lhs, rhs)
}

fn axiom_j(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (u, v, x, y) = (s.meta(&[]), s.meta(&[]), s.meta(&[]), s.meta(&[]));
    let lhs = AlgTerm::meas("a", AlgTerm::meas("b", u.clone(), v.clone()), AlgTerm::meas("b", x.clone(), y.clone()));
    let rhs = AlgTerm::meas("b", AlgTerm::meas("a", u, x), AlgTerm::meas("a", v, y));
    s.done(&[("a", q()), ("b", q())], lhs, rhs)
}

fn axiom_k(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let x = s.meta(&[("a", q()), ("b", q())]);
    let lhs = AlgTerm::new_qubit("a", AlgTerm::new_qubit("b", x.clone()));
    let rhs = AlgTerm::new_qubit("b", AlgTerm::new_qubit("a", x));
    s.done(&[], lhs, rhs)
}

fn axiom_l(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (x, y) = (s.meta(&[("a", q())]), s.meta(&[("a", q())]));
    let lhs = AlgTerm::new_qubit("a", AlgTerm::meas("b", x.clone(), y.clone()));
    let rhs = AlgTerm::meas("b", AlgTerm::new_qubit("a", x), AlgTerm::new_qubit("b", rename(&y, &[("a", "b")])));
    s.done(&[("b", q())], lhs, rhs)
}

fn axiom_m(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let t = s.meta(&[("a1", q()), ("a2", q()), ("b1", q()), ("b2", q())]);
    let split_a = |t: AlgTerm| AlgTerm::split(Wires::one("a"), "a1", "a2", t);
    let split_b = |t: AlgTerm| AlgTerm::split(Wires::one("b"), "b1", "b2", t);
    let lhs = split_a(split_b(t.clone()));
    let rhs = split_b(split_a(t));
    s.done(&[("a", qq()), ("b", qq())], lhs, rhs)
}

fn axiom_n(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let t = s.meta(&[("a1", q()), ("a2", q()), ("b", q())]);
    let lhs = AlgTerm::split(Wires::one("a"), "a1", "a2", AlgTerm::new_qubit("b", t.clone()));
    let rhs = AlgTerm::new_qubit("b", AlgTerm::split(Wires::one("a"), "a1", "a2", t));
    s.done(&[("a", qq())], lhs, rhs)
}

fn axiom_o(rng: &mut dyn RngCore) -> AlgInstance {
    let mut s = Setup::new(rng);
    let (t1, t2) = (s.meta(&[("a1", q()), ("a2", q())]), s.meta(&[("a1", q()), ("a2", q())]));
    let split_a = |t: AlgTerm| AlgTerm::split(Wires::one("a"), "a1", "a2", t);
    let lhs = split_a(AlgTerm::Meas(Wires::one("b"), b(t1.clone()), b(t2.clone())));
    let rhs = AlgTerm::meas("b", split_a(t1), split_a(t2));
    s.done(&[("a", qq()), ("b", q())], lhs, rhs)
}

pub fn alg_axioms() -> Vec<AlgAxiom> {
    let ax = |name, lhs, rhs, instantiate| AlgAxiom { name, lhs, rhs, instantiate };
    vec![
        ax("A", "X(a, meas(a, x, y))", "meas(a, y, x)", axiom_a as fn(&mut dyn RngCore) -> AlgInstance),
        ax("B", "meas(a, U(b, x(b)), V(b, y(b)))", "D(U,V)((a, b), meas(a, x(b), y(b)))", axiom_b),
        ax("C", "U(a, discard a in x)", "discard a in x", axiom_c),
        ax("D", "new(a, meas(a, x, y))", "x", axiom_d),
        ax("E", "new(a, D(U,V)((a, b), x(a, b)))", "U(b, new(a, x(a, b)))", axiom_e),
        ax("F", "SWAP((a, b), x(a, b))", "x(b, a)", axiom_f),
        ax("G", "I(a, x(a))", "x(a)", axiom_g),
        ax("H", "(VU)(a, x(a))", "V(a, U(a, x(a)))", axiom_h),
        ax("I", "(U ⊗ V)((a, b), x(a, b))", "U(a, V(b, x(a, b)))", axiom_i),
        ax("J", "meas(a, meas(b, u, v), meas(b, x, y))", "meas(b, meas(a, u, x), meas(a, v, y))", axiom_j),
        ax("K", "new(a, new(b, x(a, b)))", "new(b, new(a, x(a, b)))", axiom_k),
        ax("L", "new(a, meas(b, x(a), y(a)))", "meas(b, new(a, x(a)), new(b, y(b)))", axiom_l),
        ax("M", "a(a1, a2).b(b1, b2).t", "b(b1, b2).a(a1, a2).t", axiom_m),
        ax("N", "a(a1, a2).new(b.t)", "new(b.a(a1, a2).t)", axiom_n),
        ax("O", "a(a1, a2).meas(b, t1, t2)", "meas(b, a(a1, a2).t1, a(a1, a2).t2)", axiom_o),
    ]
}
