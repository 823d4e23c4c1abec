//! Seeded, type-directed generation of well-typed random terms, types,
//! contexts and unitaries. Everything downstream of a seed is deterministic.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Assignment, Ctx, Equiv, FinType, Name, NameSupply, OpenType, QExp, QType, Side, Unitary};

const ONE_QUBIT: [&str; 6] = ["H", "X", "Y", "Z", "S", "T"];
const TWO_QUBIT: [&str; 3] = ["CNOT", "SWAP", "CZ"];

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    /// Restrict to sum-free terms over tensors of qubits.
    pub binary_only: bool,
    /// Bound on the dimension of any context reached during generation.
    pub max_ctx_dim: usize,
    /// Bound on the dimension of intermediate types.
    pub max_type_dim: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { binary_only: false, max_ctx_dim: 64, max_type_dim: 6 }
    }
}

pub struct TermGen {
    rng: ChaCha8Rng,
    names: NameSupply,
    cfg: GenConfig,
}

impl TermGen {
    pub fn new(seed: u64) -> Self {
        Self::with_config(seed, GenConfig::default())
    }

    /// Generator for the sum-free fragment over binary types.
    pub fn binary(seed: u64) -> Self {
        Self::with_config(seed, GenConfig { binary_only: true, max_ctx_dim: 32, max_type_dim: 4 })
    }

    pub fn with_config(seed: u64, cfg: GenConfig) -> Self {
        TermGen { rng: ChaCha8Rng::seed_from_u64(seed), names: NameSupply::default(), cfg }
    }

    pub fn config(&self) -> GenConfig {
        self.cfg
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        self.names.fresh(base)
    }

    /// Keep generated binders away from names chosen elsewhere.
    pub fn reserve(&mut self, names: impl IntoIterator<Item = Name>) {
        self.names.reserve(names);
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A finite type of cardinality between 1 and 4.
    pub fn fin_type(&mut self) -> FinType {
        match self.rng.gen_range(0..7) {
            0 => FinType::Unit,
            1 | 2 => FinType::Bool,
            3 => FinType::Fin(3),
            4 => FinType::sum(FinType::Unit, FinType::Bool),
            5 => FinType::prod(FinType::Bool, FinType::Bool),
            _ => FinType::sum(FinType::Unit, FinType::Unit),
        }
    }

    /// A type of dimension at most `max_dim` (and at least one).
    pub fn qtype(&mut self, max_dim: usize) -> QType {
        if self.cfg.binary_only {
            let n = self.rng.gen_range(1..=max_dim.max(2).ilog2() as usize);
            return self.qubits(n);
        }
        for _ in 0..16 {
            let t = self.qtype_sized(3);
            if t.dim() <= max_dim {
                return t;
            }
        }
        QType::qubit()
    }

    fn qtype_sized(&mut self, fuel: usize) -> QType {
        if fuel == 0 || self.chance(0.45) {
            return QType::Lower(self.fin_type());
        }
        let a = self.qtype_sized(fuel - 1);
        let b = self.qtype_sized(fuel - 1);
        if self.chance(0.5) {
            QType::tensor(a, b)
        } else {
            QType::oplus(a, b)
        }
    }

    /// `n` qubits, associated to the right, with random bracketing.
    pub fn qubits(&mut self, n: usize) -> QType {
        if n <= 1 {
            return QType::qubit();
        }
        let k = self.rng.gen_range(1..n);
        QType::tensor(self.qubits(k), self.qubits(n - k))
    }

    /// A context of `size` fresh variables, of total dimension within the
    /// configured bound.
    pub fn ctx(&mut self, size: usize) -> Ctx {
        let mut ctx = Ctx::new();
        for _ in 0..size {
            let room = self.cfg.max_ctx_dim / ctx.dim().max(1);
            if room < 2 {
                break;
            }
            let t = self.qtype(room.min(self.cfg.max_type_dim));
            let x = self.fresh("x");
            ctx.insert(x, t);
        }
        ctx
    }

    /// A unitary whose source is `src`. The target may differ when the
    /// unitary reshapes its input.
    pub fn unitary(&mut self, src: &QType) -> Unitary {
        let u = self.unitary_layer(src, 2);
        if self.chance(0.25) {
            let mid = u.dst().expect("generated unitaries are well formed");
            let v = self.unitary_layer(&mid, 1);
            return Unitary::compose(v, u);
        }
        if self.chance(0.1) {
            // an inverse whose adjoint starts at `src`
            let back = self.unitary_layer(src, 1);
            let dst = back.dst().expect("well formed");
            if dst == *src {
                return Unitary::adjoint(back);
            }
        }
        u
    }

    /// A unitary from `src` to itself.
    pub fn endo_unitary(&mut self, src: &QType) -> Unitary {
        let u = self.unitary(src);
        let dst = u.dst().expect("well formed");
        if dst == *src {
            return u;
        }
        let back = self.unitary(src);
        let mid = back.dst().expect("well formed");
        if mid == dst {
            Unitary::compose(Unitary::adjoint(back), u)
        } else {
            Unitary::compose(Unitary::adjoint(u.clone()), Unitary::compose(Unitary::id(dst), u))
        }
    }

    fn unitary_layer(&mut self, src: &QType, fuel: usize) -> Unitary {
        let prim = |n: &str| Unitary::named(n).expect("built-in gate");
        let binary = self.cfg.binary_only;
        match src {
            QType::Lower(FinType::Bool) => match self.rng.gen_range(0..8) {
                0 => Unitary::id(src.clone()),
                1 if !binary => {
                    Unitary::from_equiv(Equiv::Relabel(FinType::Bool, FinType::sum(FinType::Unit, FinType::Unit)), Default::default())
                }
                _ => prim(ONE_QUBIT.choose(&mut self.rng).expect("non-empty")),
            },
            QType::Lower(a) => {
                if !binary && a.card() == 2 && self.chance(0.5) {
                    Unitary::from_equiv(Equiv::Relabel(a.clone(), FinType::Bool), Default::default())
                } else if !binary && self.chance(0.3) {
                    Unitary::from_equiv(Equiv::Relabel(a.clone(), FinType::Fin(a.card())), Default::default())
                } else {
                    Unitary::id(src.clone())
                }
            }
            QType::Tensor(a, b) => {
                let qubit = QType::qubit();
                let roll = self.rng.gen_range(0..10);
                if **a == qubit && **b == qubit && roll < 3 {
                    return prim(TWO_QUBIT.choose(&mut self.rng).expect("non-empty"));
                }
                if roll < 5 {
                    return Unitary::from_equiv(Equiv::SwapTensor(OpenType::from(&**a), OpenType::from(&**b)), Default::default());
                }
                if !binary && roll < 6 {
                    if let (QType::Lower(x), QType::Lower(y)) = (&**a, &**b) {
                        return Unitary::from_equiv(Equiv::LowerTensor(x.clone(), y.clone()), Default::default());
                    }
                }
                if fuel == 0 {
                    return Unitary::id(src.clone());
                }
                Unitary::tensor(self.unitary_layer(a, fuel - 1), self.unitary_layer(b, fuel - 1))
            }
            QType::Oplus(a, b) => {
                let roll = self.rng.gen_range(0..10);
                if roll < 3 {
                    return Unitary::from_equiv(Equiv::SwapOplus(OpenType::from(&**a), OpenType::from(&**b)), Default::default());
                }
                if roll < 4 {
                    if let (QType::Lower(x), QType::Lower(y)) = (&**a, &**b) {
                        return Unitary::from_equiv(Equiv::LowerOplus(x.clone(), y.clone()), Default::default());
                    }
                }
                if fuel == 0 {
                    return Unitary::id(src.clone());
                }
                Unitary::direct_sum(self.unitary_layer(a, fuel - 1), self.unitary_layer(b, fuel - 1))
            }
        }
    }

    /// An open type over `vars`, with small `Lower` leaves (`Void` rarely).
    pub fn open_type(&mut self, vars: &[&str], fuel: usize) -> OpenType {
        if fuel == 0 || self.chance(0.4) {
            if !vars.is_empty() && self.chance(0.5) {
                return OpenType::var(vars.choose(&mut self.rng).expect("non-empty"));
            }
            let a = match self.rng.gen_range(0..10) {
                0 => FinType::Void,
                1 | 2 => FinType::Unit,
                3..=6 => FinType::Bool,
                _ => FinType::Fin(3),
            };
            return OpenType::Lower(a);
        }
        let a = self.open_type(vars, fuel - 1);
        let b = self.open_type(vars, fuel - 1);
        if self.chance(0.5) {
            OpenType::tensor(a, b)
        } else {
            OpenType::oplus(a, b)
        }
    }

    /// Each variable sent to a finite type of cardinality 1 to 3.
    pub fn assignment<'a>(&mut self, vars: impl IntoIterator<Item = &'a String>) -> Assignment {
        let mut m = Assignment::new();
        for x in vars {
            let a = match self.rng.gen_range(0..4) {
                0 => FinType::Unit,
                1 => FinType::Bool,
                2 => FinType::Fin(3),
                _ => FinType::sum(FinType::Unit, FinType::Bool),
            };
            m.insert(x, a);
        }
        m
    }

    /// A chain of `generators` random rig steps starting at `ty`.
    pub fn equiv_from(&mut self, ty: &OpenType, generators: usize) -> Equiv {
        let mut cur = ty.clone();
        let mut steps = Vec::new();
        for _ in 0..generators {
            let step = self.equiv_step(&cur);
            cur = step.endpoints().expect("generated steps chain").1;
            steps.push(step);
        }
        Equiv::chain(ty.clone(), steps)
    }

    /// One generator, or its inverse, applied somewhere inside `ty`.
    fn equiv_step(&mut self, ty: &OpenType) -> Equiv {
        use OpenType as T;
        let children: Option<(&T, &T, bool)> = match ty {
            T::Tensor(a, b) => Some((a, b, true)),
            T::Oplus(a, b) => Some((a, b, false)),
            _ => None,
        };
        if let Some((a, b, tensor)) = children {
            if self.chance(0.4) {
                let left = self.chance(0.5);
                let (inner, other) = if left { (a, b) } else { (b, a) };
                let step = self.equiv_step(inner);
                let keep = Equiv::Refl(other.clone());
                let (l, r) = if left { (step, keep) } else { (keep, step) };
                return if tensor { Equiv::cong_tensor(l, r) } else { Equiv::cong_oplus(l, r) };
            }
        }
        let mut options = Vec::new();
        let lower = |t: &T| match t {
            T::Lower(a) => Some(a.clone()),
            _ => None,
        };
        match ty {
            T::Tensor(a, b) => {
                options.push(Equiv::SwapTensor((**a).clone(), (**b).clone()));
                if let T::Tensor(b1, b2) = &**b {
                    options.push(Equiv::AssocTensor((**a).clone(), (**b1).clone(), (**b2).clone()));
                }
                if let T::Tensor(a1, a2) = &**a {
                    options.push(Equiv::symm(Equiv::AssocTensor((**a1).clone(), (**a2).clone(), (**b).clone())));
                }
                if let T::Oplus(b1, b2) = &**b {
                    options.push(Equiv::Distr((**a).clone(), (**b1).clone(), (**b2).clone()));
                }
                match lower(a) {
                    Some(FinType::Unit) => options.push(Equiv::LUnitTensor((**b).clone())),
                    Some(FinType::Void) => options.push(Equiv::LZero((**b).clone())),
                    _ => {}
                }
                if let (Some(x), Some(y)) = (lower(a), lower(b)) {
                    options.push(Equiv::LowerTensor(x, y));
                }
            }
            T::Oplus(a, b) => {
                options.push(Equiv::SwapOplus((**a).clone(), (**b).clone()));
                if let T::Oplus(b1, b2) = &**b {
                    options.push(Equiv::AssocOplus((**a).clone(), (**b1).clone(), (**b2).clone()));
                }
                if let T::Oplus(a1, a2) = &**a {
                    options.push(Equiv::symm(Equiv::AssocOplus((**a1).clone(), (**a2).clone(), (**b).clone())));
                }
                if let (T::Tensor(x, y), T::Tensor(x2, z)) = (&**a, &**b) {
                    if x == x2 {
                        options.push(Equiv::symm(Equiv::Distr((**x).clone(), (**y).clone(), (**z).clone())));
                    }
                }
                if lower(a) == Some(FinType::Void) {
                    options.push(Equiv::LUnitOplus((**b).clone()));
                }
                if let (Some(x), Some(y)) = (lower(a), lower(b)) {
                    options.push(Equiv::LowerOplus(x, y));
                }
            }
            T::Lower(alpha) => {
                match alpha {
                    FinType::Prod(x, y) => options.push(Equiv::symm(Equiv::LowerTensor((**x).clone(), (**y).clone()))),
                    FinType::Sum(x, y) => options.push(Equiv::symm(Equiv::LowerOplus((**x).clone(), (**y).clone()))),
                    _ => {}
                }
                let flat = FinType::Fin(alpha.card());
                if *alpha != flat {
                    options.push(Equiv::Relabel(alpha.clone(), flat));
                }
            }
            T::Var(_) => {}
        }
        if options.is_empty() || self.chance(0.08) {
            return if self.chance(0.5) {
                Equiv::symm(Equiv::LUnitTensor(ty.clone()))
            } else {
                Equiv::symm(Equiv::LUnitOplus(ty.clone()))
            };
        }
        options.swap_remove(self.rng.gen_range(0..options.len()))
    }

    /// A closed term of type `ty`.
    pub fn closed(&mut self, ty: &QType, depth: usize) -> QExp {
        self.term(&Ctx::new(), ty, depth)
    }

    /// A term of type `ty` that uses every variable of `ctx` exactly once.
    pub fn term(&mut self, ctx: &Ctx, ty: &QType, depth: usize) -> QExp {
        self.names.reserve(ctx.names());
        self.go(ctx, ty, depth)
    }

    /// Send each variable of `ctx` to one side at random.
    pub fn split_ctx(&mut self, ctx: &Ctx) -> (Ctx, Ctx) {
        let (mut l, mut r) = (Ctx::new(), Ctx::new());
        for (x, t) in ctx.iter() {
            let side = if self.chance(0.5) { &mut l } else { &mut r };
            side.insert(x.clone(), t.clone());
        }
        (l, r)
    }

    fn go(&mut self, ctx: &Ctx, ty: &QType, depth: usize) -> QExp {
        if depth == 0 {
            return self.close(ctx, ty);
        }
        let d = depth - 1;
        let binary = self.cfg.binary_only;
        loop {
            match self.rng.gen_range(0..7) {
                0 => {
                    if let QType::Tensor(a, b) = ty {
                        let (l, r) = self.split_ctx(ctx);
                        return QExp::pair(self.go(&l, a, d), self.go(&r, b, d));
                    }
                }
                1 if !binary => {
                    if let QType::Oplus(a, b) = ty {
                        let side = self.inhabited_side(a, b);
                        let part = if side == Side::Left { a } else { b };
                        return QExp::inj(side, ty.clone(), self.go(ctx, part, d));
                    }
                }
                2 => {
                    let (l, r) = self.split_ctx(ctx);
                    let room = self.cfg.max_ctx_dim / r.dim().max(1);
                    if room >= 2 {
                        let sigma = self.qtype(room.min(self.cfg.max_type_dim));
                        let x = self.fresh("x");
                        let bound = self.go(&l, &sigma, d);
                        let body = self.go(&r.clone().with(&x, sigma), ty, d);
                        return QExp::let_(&x, bound, body);
                    }
                }
                3 | 4 => {
                    if let Some(e) = self.eliminate(ctx, ty, d, false) {
                        return e;
                    }
                }
                5 => {
                    let u = self.unitary(ty);
                    let dst = u.dst().expect("well formed");
                    return if dst == *ty {
                        QExp::uapp(u, self.go(ctx, ty, d))
                    } else {
                        QExp::uapp(Unitary::adjoint(u), self.go(ctx, &dst, d))
                    };
                }
                _ => return self.close(ctx, ty),
            }
        }
    }

    /// Eliminate one variable of `ctx`, continuing with `go` (or `close`
    /// when `closing`).
    fn eliminate(&mut self, ctx: &Ctx, ty: &QType, depth: usize, closing: bool) -> Option<QExp> {
        let vars: Vec<(Name, QType)> = ctx.iter().map(|(x, t)| (x.clone(), t.clone())).collect();
        let (x, t) = vars.choose(&mut self.rng)?.clone();
        let mut rest = ctx.clone();
        rest.remove(&x);
        let next = |g: &mut Self, c: &Ctx| if closing { g.close(c, ty) } else { g.go(c, ty, depth) };
        Some(match t {
            QType::Tensor(a, b) => {
                let (y1, y2) = (self.fresh("y"), self.fresh("y"));
                let inner = rest.with(&y1, *a).with(&y2, *b);
                QExp::letpair(&y1, &y2, QExp::var(&x), next(self, &inner))
            }
            QType::Oplus(a, b) => {
                let (y1, y2) = (self.fresh("y"), self.fresh("y"));
                let left = next(self, &rest.clone().with(&y1, *a));
                let right = next(self, &rest.with(&y2, *b));
                QExp::case(QExp::var(&x), &y1, left, &y2, right)
            }
            QType::Lower(a) => {
                let branches = (0..a.card()).map(|_| next(self, &rest)).collect();
                QExp::letbang(QExp::var(&x), branches)
            }
        })
    }

    /// A random summand, avoiding one with no basis states.
    fn inhabited_side(&mut self, a: &QType, b: &QType) -> Side {
        match (a.dim(), b.dim()) {
            (0, _) => Side::Right,
            (_, 0) => Side::Left,
            _ if self.chance(0.5) => Side::Left,
            _ => Side::Right,
        }
    }

    /// Use up `ctx` and build `ty` with no further detours.
    fn close(&mut self, ctx: &Ctx, ty: &QType) -> QExp {
        if ctx.len() == 1 {
            let (x, t) = ctx.iter().next().expect("one entry");
            if t == ty {
                return QExp::var(x);
            }
        }
        if ctx.is_empty() {
            return match ty {
                QType::Lower(a) => QExp::put(a.clone(), self.rng.gen_range(0..a.card())),
                QType::Tensor(a, b) => QExp::pair(self.close(ctx, a), self.close(ctx, b)),
                QType::Oplus(a, b) => {
                    let side = self.inhabited_side(a, b);
                    let part = if side == Side::Left { a } else { b };
                    QExp::inj(side, ty.clone(), self.close(ctx, part))
                }
            };
        }
        if let QType::Tensor(a, b) = ty {
            if self.chance(0.5) {
                let (l, r) = self.split_ctx(ctx);
                return QExp::pair(self.close(&l, a), self.close(&r, b));
            }
        }
        self.eliminate(ctx, ty, 0, true).expect("context is not empty")
    }
}

/// A random context of `ctx_size` variables and a term of type `ty` over it.
pub fn random_term(seed: u64, ctx_size: usize, depth: usize, ty: &QType) -> (Ctx, QExp) {
    let mut g = TermGen::new(seed);
    let ctx = g.ctx(ctx_size);
    let e = g.term(&ctx, ty, depth);
    (ctx, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecheck::infer;

    #[test]
    fn depth_zero_closed_bool_is_a_put() {
        for seed in 0..20 {
            let (ctx, e) = random_term(seed, 0, 0, &QType::qubit());
            assert!(ctx.is_empty());
            assert!(matches!(e, QExp::Put(FinType::Bool, _)), "{e}");
        }
    }

    #[test]
    fn generated_terms_type_check() {
        for seed in 0..300 {
            let mut g = TermGen::new(seed);
            let ctx = g.ctx(seed as usize % 4);
            let ty = g.qtype(6);
            let e = g.term(&ctx, &ty, 1 + seed as usize % 4);
            assert_eq!(infer(&ctx, &e).unwrap_or_else(|err| panic!("{e}: {err}")), ty, "{e}");
        }
    }

    #[test]
    fn binary_terms_stay_in_the_fragment() {
        for seed in 0..200 {
            let mut g = TermGen::binary(seed);
            let ctx = g.ctx(seed as usize % 3);
            let ty = g.qtype(4);
            let e = g.term(&ctx, &ty, 3);
            assert_eq!(infer(&ctx, &e).unwrap(), ty);
            let mut ok = true;
            e.visit(&mut |s| match s {
                QExp::Inj(..) | QExp::Case(..) => ok = false,
                QExp::Put(a, _) => ok &= *a == FinType::Bool,
                QExp::UApp(u, _) => {
                    let (s, t) = u.signature().unwrap();
                    ok &= s.is_binary() && t.is_binary();
                }
                _ => {}
            });
            assert!(ok, "{e}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let ty = QType::tensor(QType::qubit(), QType::Lower(FinType::Fin(3)));
        assert_eq!(random_term(42, 3, 4, &ty), random_term(42, 3, 4, &ty));
    }

    #[test]
    fn unitaries_start_where_asked() {
        let mut g = TermGen::new(5);
        for _ in 0..200 {
            let t = g.qtype(8);
            assert_eq!(g.unitary(&t).src().unwrap(), t);
            let u = g.endo_unitary(&t);
            assert_eq!(u.signature().unwrap(), (t.clone(), t));
        }
    }

    #[test]
    fn random_equivalences_chain() {
        let mut g = TermGen::new(9);
        for _ in 0..300 {
            let t = g.open_type(&["X", "Y"], 3);
            let f = g.equiv_from(&t, 6);
            let (src, dst) = f.endpoints().unwrap();
            assert_eq!(src, t);
            let m = g.assignment(src.vars().union(&dst.vars()));
            crate::opentype::equiv_basis_bijection(&f, &m).unwrap();
        }
    }
}
