//! Linear quantum expressions and their purely syntactic operations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::types::{FinType, Name, QType};
use super::unitary::Unitary;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// `1` for the left summand, `2` for the right one.
    pub fn index(self) -> u8 {
        match self {
            Side::Left => 1,
            Side::Right => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Side> {
        match i {
            1 => Some(Side::Left),
            2 => Some(Side::Right),
            _ => None,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QExp {
    Var(Name),
    Let(Name, Box<QExp>, Box<QExp>),
    Pair(Box<QExp>, Box<QExp>),
    LetPair(Name, Name, Box<QExp>, Box<QExp>),
    /// Injection annotated with the full sum type it lands in.
    Inj(Side, QType, Box<QExp>),
    Case(Box<QExp>, Name, Box<QExp>, Name, Box<QExp>),
    /// A classical value, given by its index in the type's enumeration.
    Put(FinType, usize),
    /// Measurement; one branch per element of the scrutinee's base type.
    LetBang(Box<QExp>, Vec<QExp>),
    UApp(Unitary, Box<QExp>),
}

/// Host-level linear function `suspend(x. body)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFn {
    pub param: Name,
    pub param_type: QType,
    pub body: QExp,
}

impl LinearFn {
    pub fn new(param: &str, param_type: QType, body: QExp) -> Self {
        LinearFn {
            param: param.to_string(),
            param_type,
            body,
        }
    }

    pub fn identity(t: QType) -> Self {
        LinearFn::new("x", t, QExp::var("x"))
    }

    pub fn swap(a: QType, b: QType) -> Self {
        let body = QExp::letpair("x", "y", QExp::var("p"), QExp::pair(QExp::var("y"), QExp::var("x")));
        LinearFn::new("p", QType::tensor(a, b), body)
    }

    /// Qubit measurement returning the classical outcome as a basis state.
    pub fn meas() -> Self {
        LinearFn::new("x", QType::qubit(), QExp::meas(QExp::var("x")))
    }

    pub fn force(&self, arg: QExp) -> QExp {
        let mut m = BTreeMap::new();
        m.insert(self.param.clone(), arg);
        self.body.subst(&m)
    }
}

impl QExp {
    pub fn var(x: &str) -> QExp {
        QExp::Var(x.to_string())
    }

    pub fn let_(x: &str, e: QExp, body: QExp) -> QExp {
        QExp::Let(x.to_string(), Box::new(e), Box::new(body))
    }

    pub fn pair(a: QExp, b: QExp) -> QExp {
        QExp::Pair(Box::new(a), Box::new(b))
    }

    pub fn letpair(x: &str, y: &str, e: QExp, body: QExp) -> QExp {
        QExp::LetPair(x.to_string(), y.to_string(), Box::new(e), Box::new(body))
    }

    pub fn inj(side: Side, sum: QType, e: QExp) -> QExp {
        QExp::Inj(side, sum, Box::new(e))
    }

    pub fn case(e: QExp, x: &str, e1: QExp, y: &str, e2: QExp) -> QExp {
        QExp::Case(
            Box::new(e),
            x.to_string(),
            Box::new(e1),
            y.to_string(),
            Box::new(e2),
        )
    }

    pub fn put(ty: FinType, idx: usize) -> QExp {
        QExp::Put(ty, idx)
    }

    pub fn put_bool(b: bool) -> QExp {
        QExp::Put(FinType::Bool, b as usize)
    }

    pub fn put_unit() -> QExp {
        QExp::Put(FinType::Unit, 0)
    }

    pub fn letbang(e: QExp, branches: Vec<QExp>) -> QExp {
        QExp::LetBang(Box::new(e), branches)
    }

    pub fn uapp(u: Unitary, e: QExp) -> QExp {
        QExp::UApp(u, Box::new(e))
    }

    /// `let !b := e in put b` for a qubit.
    pub fn meas(e: QExp) -> QExp {
        QExp::letbang(e, vec![QExp::put_bool(false), QExp::put_bool(true)])
    }

    /// `if e then t else f`, a measurement of a qubit.
    pub fn if_then_else(e: QExp, then: QExp, otherwise: QExp) -> QExp {
        QExp::letbang(e, vec![otherwise, then])
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            QExp::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            QExp::Let(x, e, body) => {
                e.collect_free(bound, out);
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            QExp::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            QExp::LetPair(x, y, e, body) => {
                e.collect_free(bound, out);
                bound.push(x.clone());
                bound.push(y.clone());
                body.collect_free(bound, out);
                bound.pop();
                bound.pop();
            }
            QExp::Inj(_, _, e) | QExp::UApp(_, e) => e.collect_free(bound, out),
            QExp::Case(e, x, e1, y, e2) => {
                e.collect_free(bound, out);
                bound.push(x.clone());
                e1.collect_free(bound, out);
                bound.pop();
                bound.push(y.clone());
                e2.collect_free(bound, out);
                bound.pop();
            }
            QExp::Put(..) => {}
            QExp::LetBang(e, bs) => {
                e.collect_free(bound, out);
                for b in bs {
                    b.collect_free(bound, out);
                }
            }
        }
    }

    /// Every variable name mentioned anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| match e {
            QExp::Var(x) | QExp::Let(x, ..) => {
                out.insert(x.clone());
            }
            QExp::LetPair(x, y, ..) | QExp::Case(_, x, _, y, _) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a QExp)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Immediate subterms in a fixed order; paths index into this list.
    pub fn children(&self) -> Vec<&QExp> {
        match self {
            QExp::Var(_) | QExp::Put(..) => vec![],
            QExp::Let(_, e, b) | QExp::LetPair(_, _, e, b) | QExp::Pair(e, b) => vec![e, b],
            QExp::Inj(_, _, e) | QExp::UApp(_, e) => vec![e],
            QExp::Case(e, _, e1, _, e2) => vec![e, e1, e2],
            QExp::LetBang(e, bs) => std::iter::once(&**e).chain(bs.iter()).collect(),
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut QExp> {
        match (self, i) {
            (QExp::Let(_, e, _) | QExp::LetPair(_, _, e, _) | QExp::Pair(e, _), 0) => Some(e),
            (QExp::Let(_, _, b) | QExp::LetPair(_, _, _, b) | QExp::Pair(_, b), 1) => Some(b),
            (QExp::Inj(_, _, e) | QExp::UApp(_, e), 0) => Some(e),
            (QExp::Case(e, ..), 0) => Some(e),
            (QExp::Case(_, _, e1, _, _), 1) => Some(e1),
            (QExp::Case(_, _, _, _, e2), 2) => Some(e2),
            (QExp::LetBang(e, _), 0) => Some(e),
            (QExp::LetBang(_, bs), k) => bs.get_mut(k - 1),
            _ => None,
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&QExp> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at_path(rest),
        }
    }

    /// Copy of `self` with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: QExp) -> Option<QExp> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in path {
            cur = cur.child_mut(i)?;
        }
        *cur = new;
        Some(out)
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_positions(&mut Vec::new(), &mut out);
        out
    }

    fn collect_positions(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for (i, c) in self.children().into_iter().enumerate() {
            prefix.push(i);
            c.collect_positions(prefix, out);
            prefix.pop();
        }
    }

    /// Simultaneous capture-avoiding substitution. Names not free in `self`
    /// are ignored.
    pub fn subst(&self, map: &BTreeMap<Name, QExp>) -> QExp {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            QExp::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            QExp::Put(..) => self.clone(),
            QExp::Pair(a, b) => QExp::pair(a.subst(map), b.subst(map)),
            QExp::Inj(s, t, e) => QExp::inj(*s, t.clone(), e.subst(map)),
            QExp::UApp(u, e) => QExp::uapp(u.clone(), e.subst(map)),
            QExp::LetBang(e, bs) => {
                QExp::letbang(e.subst(map), bs.iter().map(|b| b.subst(map)).collect())
            }
            QExp::Let(x, e, body) => {
                let (names, body) = subst_under(&[x], body, map);
                QExp::Let(names[0].clone(), Box::new(e.subst(map)), Box::new(body))
            }
            QExp::LetPair(x, y, e, body) => {
                let (names, body) = subst_under(&[x, y], body, map);
                QExp::LetPair(
                    names[0].clone(),
                    names[1].clone(),
                    Box::new(e.subst(map)),
                    Box::new(body),
                )
            }
            QExp::Case(e, x, e1, y, e2) => {
                let (nx, e1) = subst_under(&[x], e1, map);
                let (ny, e2) = subst_under(&[y], e2, map);
                QExp::Case(
                    Box::new(e.subst(map)),
                    nx[0].clone(),
                    Box::new(e1),
                    ny[0].clone(),
                    Box::new(e2),
                )
            }
        }
    }

    pub fn subst1(&self, x: &str, u: &QExp) -> QExp {
        let mut m = BTreeMap::new();
        m.insert(x.to_string(), u.clone());
        self.subst(&m)
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &QExp) -> bool {
        alpha(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Renames every binder to a position-determined name (`%0`, `%1`, ...),
    /// so alpha-equivalent terms become structurally equal.
    pub fn alpha_normalize(&self) -> QExp {
        let mut counter = 0;
        normalize(self, &mut Vec::new(), &mut counter)
    }
}

/// Substitutes under binders `xs`, renaming any binder that would capture a
/// free variable of the substituted terms.
fn subst_under(xs: &[&Name], body: &QExp, map: &BTreeMap<Name, QExp>) -> (Vec<Name>, QExp) {
    let mut inner: BTreeMap<Name, QExp> = map
        .iter()
        .filter(|(k, _)| !xs.contains(k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let body_fv = body.free_vars();
    inner.retain(|k, _| body_fv.contains(k));
    let range_fv: BTreeSet<Name> = inner.values().flat_map(|v| v.free_vars()).collect();
    let mut avoid: BTreeSet<Name> = range_fv.clone();
    avoid.extend(body.all_names());
    avoid.extend(inner.keys().cloned());
    avoid.extend(xs.iter().map(|x| (*x).clone()));
    let mut names = Vec::with_capacity(xs.len());
    for x in xs {
        if range_fv.contains(*x) {
            let fresh = fresh_name(x, &avoid);
            avoid.insert(fresh.clone());
            inner.insert((*x).clone(), QExp::Var(fresh.clone()));
            names.push(fresh);
        } else {
            names.push((*x).clone());
        }
    }
    (names, body.subst(&inner))
}

/// `base` followed by the smallest number that avoids `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (0..)
        .map(|n| format!("{stem}{n}"))
        .find(|n| !avoid.contains(n))
        .expect("infinitely many candidates")
}

/// Supplies fresh names avoiding a growing set.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: BTreeSet<Name>,
}

impl NameSupply {
    pub fn avoiding(used: BTreeSet<Name>) -> Self {
        NameSupply { used }
    }

    pub fn reserve(&mut self, names: impl IntoIterator<Item = Name>) {
        self.used.extend(names);
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        let n = fresh_name(base, &self.used);
        self.used.insert(n.clone());
        n
    }
}

fn lookup(stack: &[Name], x: &str) -> Option<usize> {
    stack.iter().rposition(|y| y == x)
}

fn alpha(a: &QExp, b: &QExp, sa: &mut Vec<Name>, sb: &mut Vec<Name>) -> bool {
    fn under(
        xa: &[&Name],
        xb: &[&Name],
        a: &QExp,
        b: &QExp,
        sa: &mut Vec<Name>,
        sb: &mut Vec<Name>,
    ) -> bool {
        sa.extend(xa.iter().map(|x| (*x).clone()));
        sb.extend(xb.iter().map(|x| (*x).clone()));
        let r = alpha(a, b, sa, sb);
        sa.truncate(sa.len() - xa.len());
        sb.truncate(sb.len() - xb.len());
        r
    }
    match (a, b) {
        (QExp::Var(x), QExp::Var(y)) => match (lookup(sa, x), lookup(sb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (QExp::Let(x, e, b1), QExp::Let(y, f, b2)) => {
            alpha(e, f, sa, sb) && under(&[x], &[y], b1, b2, sa, sb)
        }
        (QExp::Pair(a1, a2), QExp::Pair(b1, b2)) => alpha(a1, b1, sa, sb) && alpha(a2, b2, sa, sb),
        (QExp::LetPair(x1, x2, e, b1), QExp::LetPair(y1, y2, f, b2)) => {
            alpha(e, f, sa, sb) && under(&[x1, x2], &[y1, y2], b1, b2, sa, sb)
        }
        (QExp::Inj(s, t, e), QExp::Inj(r, u, f)) => s == r && t == u && alpha(e, f, sa, sb),
        (QExp::Case(e, x1, a1, x2, a2), QExp::Case(f, y1, b1, y2, b2)) => {
            alpha(e, f, sa, sb)
                && under(&[x1], &[y1], a1, b1, sa, sb)
                && under(&[x2], &[y2], a2, b2, sa, sb)
        }
        (QExp::Put(t, i), QExp::Put(u, j)) => t == u && i == j,
        (QExp::LetBang(e, bs), QExp::LetBang(f, cs)) => {
            bs.len() == cs.len()
                && alpha(e, f, sa, sb)
                && bs.iter().zip(cs).all(|(x, y)| alpha(x, y, sa, sb))
        }
        (QExp::UApp(u, e), QExp::UApp(v, f)) => u == v && alpha(e, f, sa, sb),
        _ => false,
    }
}

fn normalize(e: &QExp, stack: &mut Vec<(Name, Name)>, counter: &mut usize) -> QExp {
    let bind = |stack: &mut Vec<(Name, Name)>, x: &Name, counter: &mut usize| {
        let n = format!("%{counter}");
        *counter += 1;
        stack.push((x.clone(), n.clone()));
        n
    };
    match e {
        QExp::Var(x) => QExp::Var(
            stack
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, n)| n.clone())
                .unwrap_or_else(|| x.clone()),
        ),
        QExp::Put(..) => e.clone(),
        QExp::Pair(a, b) => QExp::pair(normalize(a, stack, counter), normalize(b, stack, counter)),
        QExp::Inj(s, t, a) => QExp::inj(*s, t.clone(), normalize(a, stack, counter)),
        QExp::UApp(u, a) => QExp::uapp(u.clone(), normalize(a, stack, counter)),
        QExp::LetBang(a, bs) => {
            let a = normalize(a, stack, counter);
            QExp::letbang(a, bs.iter().map(|b| normalize(b, stack, counter)).collect())
        }
        QExp::Let(x, a, body) => {
            let a = normalize(a, stack, counter);
            let n = bind(stack, x, counter);
            let body = normalize(body, stack, counter);
            stack.pop();
            QExp::Let(n, Box::new(a), Box::new(body))
        }
        QExp::LetPair(x, y, a, body) => {
            let a = normalize(a, stack, counter);
            let nx = bind(stack, x, counter);
            let ny = bind(stack, y, counter);
            let body = normalize(body, stack, counter);
            stack.pop();
            stack.pop();
            QExp::LetPair(nx, ny, Box::new(a), Box::new(body))
        }
        QExp::Case(a, x, e1, y, e2) => {
            let a = normalize(a, stack, counter);
            let nx = bind(stack, x, counter);
            let e1 = normalize(e1, stack, counter);
            stack.pop();
            let ny = bind(stack, y, counter);
            let e2 = normalize(e2, stack, counter);
            stack.pop();
            QExp::Case(Box::new(a), nx, Box::new(e1), ny, Box::new(e2))
        }
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QExp::Var(x) => write!(f, "(var {x})"),
            QExp::Let(x, e, b) => write!(f, "(let {x} {e} {b})"),
            QExp::Pair(a, b) => write!(f, "(pair {a} {b})"),
            QExp::LetPair(x, y, e, b) => write!(f, "(letpair {x} {y} {e} {b})"),
            QExp::Inj(s, t, e) => write!(f, "(inj {} {t} {e})", s.index()),
            QExp::Case(e, x, e1, y, e2) => write!(f, "(case {e} ({x} {e1}) ({y} {e2}))"),
            QExp::Put(t, i) => match t.value_at(*i) {
                Some(v) => write!(f, "(put {t} {v})"),
                None => write!(f, "(put {t} {i})"),
            },
            QExp::LetBang(e, bs) => {
                write!(f, "(letbang {e} (")?;
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "({i} {b})")?;
                }
                write!(f, "))")
            }
            QExp::UApp(u, e) => write!(f, "(uapp {u} {e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: de Bruijn terms with free variables kept by name.
    #[derive(Debug, PartialEq)]
    enum Db {
        Free(String),
        Bound(usize),
        Node(&'static str, String, Vec<Db>),
    }

    fn db(e: &QExp, env: &mut Vec<String>) -> Db {
        let under = |xs: &[&String], b: &QExp, env: &mut Vec<String>| {
            env.extend(xs.iter().map(|x| (*x).clone()));
            let r = db(b, env);
            env.truncate(env.len() - xs.len());
            r
        };
        match e {
            QExp::Var(x) => match env.iter().rev().position(|y| y == x) {
                Some(i) => Db::Bound(i),
                None => Db::Free(x.clone()),
            },
            QExp::Let(x, a, b) => {
                let a = db(a, env);
                Db::Node("let", String::new(), vec![a, under(&[x], b, env)])
            }
            QExp::LetPair(x, y, a, b) => {
                let a = db(a, env);
                Db::Node("letpair", String::new(), vec![a, under(&[x, y], b, env)])
            }
            QExp::Case(a, x, b, y, c) => {
                let a = db(a, env);
                let b = under(&[x], b, env);
                Db::Node("case", String::new(), vec![a, b, under(&[y], c, env)])
            }
            QExp::Pair(a, b) => Db::Node("pair", String::new(), vec![db(a, env), db(b, env)]),
            QExp::Inj(s, t, a) => Db::Node("inj", format!("{} {t}", s.index()), vec![db(a, env)]),
            QExp::Put(t, i) => Db::Node("put", format!("{t} {i}"), vec![]),
            QExp::LetBang(a, bs) => {
                let mut kids = vec![db(a, env)];
                kids.extend(bs.iter().map(|b| db(b, env)));
                Db::Node("letbang", String::new(), kids)
            }
            QExp::UApp(u, a) => Db::Node("uapp", u.to_string(), vec![db(a, env)]),
        }
    }

    fn oracle_alpha(a: &QExp, b: &QExp) -> bool {
        db(a, &mut vec![]) == db(b, &mut vec![])
    }

    fn qsum() -> QType {
        QType::oplus(QType::qubit(), QType::qubit())
    }

    #[test]
    fn free_variable_examples() {
        assert_eq!(QExp::var("x").free_vars(), ["x".to_string()].into());
        assert!(QExp::put_bool(true).free_vars().is_empty());
        let e = QExp::letpair("x1", "x2", QExp::var("y"), QExp::pair(QExp::var("x1"), QExp::var("x2")));
        assert_eq!(e.free_vars(), ["y".to_string()].into());
    }

    #[test]
    fn alpha_examples() {
        let a = QExp::let_("x", QExp::put_bool(false), QExp::var("x"));
        let b = QExp::let_("y", QExp::put_bool(false), QExp::var("y"));
        assert!(a.alpha_eq(&b));
        assert!(!QExp::var("x").alpha_eq(&QExp::var("y")));
        let c1 = QExp::case(
            QExp::var("e"),
            "x",
            QExp::inj(Side::Left, qsum(), QExp::var("x")),
            "y",
            QExp::inj(Side::Right, qsum(), QExp::var("y")),
        );
        let c2 = QExp::case(
            QExp::var("e"),
            "z",
            QExp::inj(Side::Left, qsum(), QExp::var("z")),
            "z",
            QExp::inj(Side::Right, qsum(), QExp::var("z")),
        );
        assert!(c1.alpha_eq(&c2));
        assert!(oracle_alpha(&c1, &c2));
        // a bound name must not match a free one
        let d1 = QExp::let_("x", QExp::var("y"), QExp::var("x"));
        let d2 = QExp::let_("x", QExp::var("y"), QExp::var("y"));
        assert!(!d1.alpha_eq(&d2));
        assert!(c1.alpha_normalize() == c2.alpha_normalize());
    }

    #[test]
    fn substitution_examples() {
        let e = QExp::var("x").subst1("x", &QExp::put_bool(true));
        assert_eq!(e, QExp::put_bool(true));

        let e = QExp::let_("x", QExp::var("y"), QExp::var("x")).subst1("y", &QExp::put_unit());
        assert_eq!(e, QExp::let_("x", QExp::put_unit(), QExp::var("x")));

        let e = QExp::let_("x", QExp::put_bool(false), QExp::pair(QExp::var("x"), QExp::var("z")));
        let out = e.subst1("z", &QExp::var("x"));
        // the binder must be renamed so the substituted x stays free
        assert!(out.free_vars().contains("x"));
        let expect = QExp::let_("w", QExp::put_bool(false), QExp::pair(QExp::var("w"), QExp::var("x")));
        assert!(out.alpha_eq(&expect));
        assert!(oracle_alpha(&out, &expect));
    }

    #[test]
    fn simultaneous_substitution_swaps() {
        let e = QExp::pair(QExp::var("a"), QExp::var("b"));
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), QExp::var("b"));
        m.insert("b".to_string(), QExp::var("a"));
        assert_eq!(e.subst(&m), QExp::pair(QExp::var("b"), QExp::var("a")));
    }

    #[test]
    fn force_examples() {
        let e = QExp::put_bool(true);
        assert_eq!(LinearFn::identity(QType::qubit()).force(e.clone()), e);
        let sw = LinearFn::swap(QType::qubit(), QType::qubit()).force(QExp::var("q"));
        let expect = QExp::letpair("x", "y", QExp::var("q"), QExp::pair(QExp::var("y"), QExp::var("x")));
        assert_eq!(sw, expect);
        let m = LinearFn::meas().force(QExp::var("q"));
        assert_eq!(m, QExp::letbang(QExp::var("q"), vec![QExp::put_bool(false), QExp::put_bool(true)]));
    }

    #[test]
    fn paths_address_children() {
        let e = QExp::case(QExp::var("e"), "x", QExp::var("x"), "y", QExp::var("y"));
        assert_eq!(e.at_path(&[2]), Some(&QExp::var("y")));
        let r = e.replace_at(&[0], QExp::var("f")).unwrap();
        assert_eq!(r.at_path(&[0]), Some(&QExp::var("f")));
        assert_eq!(e.positions().len(), 4);
        assert!(e.at_path(&[3]).is_none());
    }

    #[test]
    fn fresh_names_skip_used() {
        let avoid: BTreeSet<Name> = ["x0".into(), "x1".into()].into();
        assert_eq!(fresh_name("x", &avoid), "x2");
        let mut s = NameSupply::avoiding(avoid);
        assert_eq!(s.fresh("x"), "x2");
        assert_eq!(s.fresh("x"), "x3");
    }
}
