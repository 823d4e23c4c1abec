//! S-expression reader for every printed form in the crate: finite types,
//! quantum types, equivalences, unitaries, expressions, contexts and
//! algebraic terms. Printing is the `Display` impl of each type; parsing
//! a printed value gives it back.

use std::fmt;

use thiserror::Error;

use crate::algebraic::{AlgTerm, Wires};
use crate::syntax::{Assignment, Ctx, Equiv, FinType, FinValue, Name, OpenType, QExp, QType, Side, Unitary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn atom(&self) -> PResult<&str> {
        match self {
            Sexp::Atom(s, _) => Ok(s),
            Sexp::List(..) => self.err("expected an atom"),
        }
    }

    fn list(&self) -> PResult<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Ok(items),
            Sexp::Atom(a, _) => self.err(format!("expected a list, found {a}")),
        }
    }

    /// A list whose head is an atom, returned as head and arguments.
    fn form(&self) -> PResult<(&str, &[Sexp])> {
        let items = self.list()?;
        match items.split_first() {
            Some((Sexp::Atom(h, _), rest)) => Ok((h, rest)),
            _ => self.err("expected a form with a keyword"),
        }
    }

    fn args<const N: usize>(&self, head: &str, rest: &[Sexp]) -> PResult<[Sexp; N]> {
        <[Sexp; N]>::try_from(rest.to_vec())
            .or_else(|_| self.err(format!("{head} takes {N} arguments, found {}", rest.len())))
    }

    fn name(&self) -> PResult<Name> {
        let a = self.atom()?;
        if a.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_' || c == '%') {
            Ok(a.to_string())
        } else {
            self.err(format!("{a} is not a name"))
        }
    }

    fn number(&self) -> PResult<usize> {
        let a = self.atom()?;
        a.parse().or_else(|_| self.err(format!("{a} is not a natural number")))
    }
}

/// Read every top-level form of `text`. `;` starts a comment.
pub fn read_all(text: &str) -> PResult<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 0);
    let mut chars = text.chars().peekable();
    let mut atom: Option<(String, Pos)> = None;
    let flush = |atom: &mut Option<(String, Pos)>, stack: &mut Vec<(Vec<Sexp>, Pos)>, out: &mut Vec<Sexp>| {
        if let Some((s, p)) = atom.take() {
            match stack.last_mut() {
                Some((items, _)) => items.push(Sexp::Atom(s, p)),
                None => out.push(Sexp::Atom(s, p)),
            }
        }
    };
    while let Some(c) = chars.next() {
        if c == '\n' {
            line += 1;
            col = 0;
        } else {
            col += 1;
        }
        let here = Pos { line, col };
        match c {
            ';' => {
                flush(&mut atom, &mut stack, &mut out);
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '(' => {
                flush(&mut atom, &mut stack, &mut out);
                stack.push((Vec::new(), here));
            }
            ')' => {
                flush(&mut atom, &mut stack, &mut out);
                let Some((items, start)) = stack.pop() else {
                    return Err(ParseError { pos: here, msg: "unbalanced )".into() });
                };
                let list = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((items, _)) => items.push(list),
                    None => out.push(list),
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack, &mut out),
            c => match &mut atom {
                Some((s, _)) => s.push(c),
                None => atom = Some((c.to_string(), here)),
            },
        }
    }
    flush(&mut atom, &mut stack, &mut out);
    if let Some((_, start)) = stack.pop() {
        return Err(ParseError { pos: start, msg: "unclosed (".into() });
    }
    Ok(out)
}

/// Read exactly one form.
pub fn read_one(text: &str) -> PResult<Sexp> {
    let mut forms = read_all(text)?;
    match forms.len() {
        1 => Ok(forms.pop().expect("one form")),
        0 => Err(ParseError { pos: Pos { line: 1, col: 1 }, msg: "empty input".into() }),
        _ => forms[1].err("expected a single form"),
    }
}

pub fn fin_type(s: &Sexp) -> PResult<FinType> {
    if let Sexp::Atom(a, _) = s {
        return match a.as_str() {
            "void" => Ok(FinType::Void),
            "unit" => Ok(FinType::Unit),
            "bool" => Ok(FinType::Bool),
            _ => s.err(format!("unknown finite type {a}")),
        };
    }
    let (head, rest) = s.form()?;
    match head {
        "sum" => {
            let [a, b] = s.args(head, rest)?;
            Ok(FinType::sum(fin_type(&a)?, fin_type(&b)?))
        }
        "prod" => {
            let [a, b] = s.args(head, rest)?;
            Ok(FinType::prod(fin_type(&a)?, fin_type(&b)?))
        }
        "fin" => {
            let [n] = s.args(head, rest)?;
            Ok(FinType::Fin(n.number()?))
        }
        _ => s.err(format!("unknown finite type {head}")),
    }
}

fn fin_value(s: &Sexp) -> PResult<FinValue> {
    if let Sexp::Atom(a, _) = s {
        return match a.as_str() {
            "tt" => Ok(FinValue::Unit),
            "true" => Ok(FinValue::Bool(true)),
            "false" => Ok(FinValue::Bool(false)),
            _ => Ok(FinValue::Fin(s.number()?)),
        };
    }
    let (head, rest) = s.form()?;
    match head {
        "inl" => {
            let [v] = s.args(head, rest)?;
            Ok(FinValue::Inl(Box::new(fin_value(&v)?)))
        }
        "inr" => {
            let [v] = s.args(head, rest)?;
            Ok(FinValue::Inr(Box::new(fin_value(&v)?)))
        }
        "pair" => {
            let [a, b] = s.args(head, rest)?;
            Ok(FinValue::Pair(Box::new(fin_value(&a)?), Box::new(fin_value(&b)?)))
        }
        _ => s.err(format!("unknown value {head}")),
    }
}

pub fn qtype(s: &Sexp) -> PResult<QType> {
    let (head, rest) = s.form()?;
    match head {
        "lower" => {
            let [a] = s.args(head, rest)?;
            Ok(QType::Lower(fin_type(&a)?))
        }
        "tensor" => {
            let [a, b] = s.args(head, rest)?;
            Ok(QType::tensor(qtype(&a)?, qtype(&b)?))
        }
        "oplus" => {
            let [a, b] = s.args(head, rest)?;
            Ok(QType::oplus(qtype(&a)?, qtype(&b)?))
        }
        "qubit" if rest.is_empty() => Ok(QType::qubit()),
        _ => s.err(format!("unknown quantum type {head}")),
    }
}

pub fn open_type(s: &Sexp) -> PResult<OpenType> {
    let (head, rest) = s.form()?;
    match head {
        "tvar" => {
            let [x] = s.args(head, rest)?;
            Ok(OpenType::Var(x.name()?))
        }
        "lower" => {
            let [a] = s.args(head, rest)?;
            Ok(OpenType::Lower(fin_type(&a)?))
        }
        "tensor" => {
            let [a, b] = s.args(head, rest)?;
            Ok(OpenType::tensor(open_type(&a)?, open_type(&b)?))
        }
        "oplus" => {
            let [a, b] = s.args(head, rest)?;
            Ok(OpenType::oplus(open_type(&a)?, open_type(&b)?))
        }
        "qubit" if rest.is_empty() => Ok(OpenType::Lower(FinType::Bool)),
        _ => s.err(format!("unknown type {head}")),
    }
}

pub fn assignment(s: &Sexp) -> PResult<Assignment> {
    let mut m = Assignment::new();
    for entry in s.list()? {
        let [x, a] = entry.args("binding", entry.list()?)?;
        m.insert(&x.name()?, fin_type(&a)?);
    }
    Ok(m)
}

pub fn equiv(s: &Sexp) -> PResult<Equiv> {
    let (head, rest) = s.form()?;
    let ot = open_type;
    let b = |e: PResult<Equiv>| e.map(Box::new);
    Ok(match head {
        "refl" => {
            let [a] = s.args(head, rest)?;
            Equiv::Refl(ot(&a)?)
        }
        "symm" => {
            let [g] = s.args(head, rest)?;
            Equiv::Symm(b(equiv(&g))?)
        }
        "trans" | "cong-tensor" | "cong-oplus" => {
            let [g, h] = s.args(head, rest)?;
            let (g, h) = (b(equiv(&g))?, b(equiv(&h))?);
            match head {
                "trans" => Equiv::Trans(g, h),
                "cong-tensor" => Equiv::CongTensor(g, h),
                _ => Equiv::CongOplus(g, h),
            }
        }
        "swap-tensor" | "swap-oplus" => {
            let [x, y] = s.args(head, rest)?;
            let (x, y) = (ot(&x)?, ot(&y)?);
            if head == "swap-tensor" {
                Equiv::SwapTensor(x, y)
            } else {
                Equiv::SwapOplus(x, y)
            }
        }
        "assoc-tensor" | "assoc-oplus" | "distr" => {
            let [x, y, z] = s.args(head, rest)?;
            let (x, y, z) = (ot(&x)?, ot(&y)?, ot(&z)?);
            match head {
                "assoc-tensor" => Equiv::AssocTensor(x, y, z),
                "assoc-oplus" => Equiv::AssocOplus(x, y, z),
                _ => Equiv::Distr(x, y, z),
            }
        }
        "lower-tensor" | "lower-oplus" | "relabel" => {
            let [x, y] = s.args(head, rest)?;
            let (x, y) = (fin_type(&x)?, fin_type(&y)?);
            match head {
                "lower-tensor" => Equiv::LowerTensor(x, y),
                "lower-oplus" => Equiv::LowerOplus(x, y),
                _ => Equiv::Relabel(x, y),
            }
        }
        "lunit-tensor" | "lunit-oplus" | "lzero" => {
            let [x] = s.args(head, rest)?;
            let x = ot(&x)?;
            match head {
                "lunit-tensor" => Equiv::LUnitTensor(x),
                "lunit-oplus" => Equiv::LUnitOplus(x),
                _ => Equiv::LZero(x),
            }
        }
        _ => return s.err(format!("unknown equivalence {head}")),
    })
}

pub fn unitary(s: &Sexp) -> PResult<Unitary> {
    let (head, rest) = s.form()?;
    Ok(match head {
        "id" => {
            let [t] = s.args(head, rest)?;
            Unitary::id(qtype(&t)?)
        }
        "compose" | "utensor" | "uoplus" => {
            let [u, v] = s.args(head, rest)?;
            let (u, v) = (unitary(&u)?, unitary(&v)?);
            match head {
                "compose" => Unitary::compose(u, v),
                "utensor" => Unitary::tensor(u, v),
                _ => Unitary::direct_sum(u, v),
            }
        }
        "dagger" => {
            let [u] = s.args(head, rest)?;
            Unitary::adjoint(unitary(&u)?)
        }
        "prim" => {
            let [n] = s.args(head, rest)?;
            match Unitary::named(n.atom()?) {
                Ok(u) => u,
                Err(e) => return n.err(e.to_string()),
            }
        }
        "equiv" => {
            let [f, m] = s.args(head, rest)?;
            Unitary::from_equiv(equiv(&f)?, assignment(&m)?)
        }
        _ => return s.err(format!("unknown unitary {head}")),
    })
}

pub fn qexp(s: &Sexp) -> PResult<QExp> {
    let (head, rest) = s.form()?;
    Ok(match head {
        "var" => {
            let [x] = s.args(head, rest)?;
            QExp::var(&x.name()?)
        }
        "let" => {
            let [x, e, b] = s.args(head, rest)?;
            QExp::let_(&x.name()?, qexp(&e)?, qexp(&b)?)
        }
        "pair" => {
            let [a, b] = s.args(head, rest)?;
            QExp::pair(qexp(&a)?, qexp(&b)?)
        }
        "letpair" => {
            let [x, y, e, b] = s.args(head, rest)?;
            QExp::letpair(&x.name()?, &y.name()?, qexp(&e)?, qexp(&b)?)
        }
        "inj" => {
            let [i, t, e] = s.args(head, rest)?;
            let side = i.number().ok().and_then(|n| u8::try_from(n).ok()).and_then(Side::from_index);
            let Some(side) = side else { return i.err("injection index must be 1 or 2") };
            QExp::inj(side, qtype(&t)?, qexp(&e)?)
        }
        "case" => {
            let [e, l, r] = s.args(head, rest)?;
            let [x, e1] = l.args("branch", l.list()?)?;
            let [y, e2] = r.args("branch", r.list()?)?;
            QExp::case(qexp(&e)?, &x.name()?, qexp(&e1)?, &y.name()?, qexp(&e2)?)
        }
        "put" => {
            let [t, v] = s.args(head, rest)?;
            let ty = fin_type(&t)?;
            let Some(i) = ty.index_of(&fin_value(&v)?) else {
                return v.err(format!("not a value of {ty}"));
            };
            QExp::put(ty, i)
        }
        "letbang" => {
            let [e, bs] = s.args(head, rest)?;
            let mut branches = Vec::new();
            for (k, b) in bs.list()?.iter().enumerate() {
                let [i, body] = b.args("branch", b.list()?)?;
                if i.number()? != k {
                    return i.err(format!("branch {k} expected"));
                }
                branches.push(qexp(&body)?);
            }
            QExp::letbang(qexp(&e)?, branches)
        }
        "uapp" => {
            let [u, e] = s.args(head, rest)?;
            QExp::uapp(unitary(&u)?, qexp(&e)?)
        }
        _ => return s.err(format!("unknown expression {head}")),
    })
}

/// `((x T) (y T) ...)` or `(ctx (x T) ...)`.
pub fn ctx(s: &Sexp) -> PResult<Ctx> {
    let items = match s.form() {
        Ok(("ctx", rest)) => rest,
        _ => s.list()?,
    };
    let mut out = Ctx::new();
    for entry in items {
        let [x, t] = entry.args("binding", entry.list()?)?;
        let x = x.name()?;
        if out.insert(x.clone(), qtype(&t)?).is_some() {
            return entry.err(format!("{x} is bound twice"));
        }
    }
    Ok(out)
}

pub fn print_ctx(c: &Ctx) -> String {
    let entries: Vec<String> = c.iter().map(|(x, t)| format!("({x} {t})")).collect();
    format!("(ctx {})", entries.join(" ")).replace("(ctx )", "(ctx)")
}

fn wires(s: &Sexp) -> PResult<Wires> {
    match s {
        Sexp::Atom(..) => Ok(Wires::One(s.name()?)),
        Sexp::List(items, _) if items.len() >= 2 => Ok(Wires::Tuple(items.iter().map(wires).collect::<PResult<_>>()?)),
        Sexp::List(..) => s.err("a wire tuple has at least two components"),
    }
}

pub fn alg(s: &Sexp) -> PResult<AlgTerm> {
    let (head, rest) = s.form()?;
    let b = |t: PResult<AlgTerm>| t.map(Box::new);
    Ok(match head {
        "apply" => {
            let [k, args] = s.args(head, rest)?;
            let args: Vec<Wires> = args.list()?.iter().map(wires).collect::<PResult<_>>()?;
            if args.is_empty() {
                return s.err("apply takes at least one wire");
            }
            AlgTerm::Apply(k.name()?, args)
        }
        "split" => {
            let [w, binders, t] = s.args(head, rest)?;
            let [a1, a2] = binders.args("binders", binders.list()?)?;
            AlgTerm::SplitPair(wires(&w)?, a1.name()?, a2.name()?, b(alg(&t))?)
        }
        "new" => {
            let [a, t] = s.args(head, rest)?;
            AlgTerm::New(a.name()?, b(alg(&t))?)
        }
        "meas" => {
            let [w, t0, t1] = s.args(head, rest)?;
            AlgTerm::Meas(wires(&w)?, b(alg(&t0))?, b(alg(&t1))?)
        }
        "ustep" => {
            let [u, w, x, t] = s.args(head, rest)?;
            AlgTerm::UStep(unitary(&u)?, wires(&w)?, x.name()?, b(alg(&t))?)
        }
        _ => return s.err(format!("unknown algebraic term {head}")),
    })
}

fn one<T>(text: &str, f: fn(&Sexp) -> PResult<T>) -> PResult<T> {
    f(&read_one(text)?)
}

pub fn parse_qexp(text: &str) -> PResult<QExp> {
    one(text, qexp)
}

pub fn parse_qtype(text: &str) -> PResult<QType> {
    one(text, qtype)
}

pub fn parse_open_type(text: &str) -> PResult<OpenType> {
    one(text, open_type)
}

pub fn parse_unitary(text: &str) -> PResult<Unitary> {
    one(text, unitary)
}

pub fn parse_equiv(text: &str) -> PResult<Equiv> {
    one(text, equiv)
}

pub fn parse_alg(text: &str) -> PResult<AlgTerm> {
    one(text, alg)
}

pub fn parse_ctx(text: &str) -> PResult<Ctx> {
    one(text, ctx)
}

/// A term file: an optional `(ctx ...)`, an optional `(cont k T)` naming
/// the continuation of an algebraic term, and one term.
#[derive(Clone, Debug)]
pub struct Source {
    pub ctx: Ctx,
    pub cont: Option<(Name, QType)>,
    pub body: Sexp,
}

impl Source {
    pub fn qexp(&self) -> PResult<QExp> {
        qexp(&self.body)
    }

    pub fn alg(&self) -> PResult<AlgTerm> {
        alg(&self.body)
    }
}

pub fn parse_source(text: &str) -> PResult<Source> {
    let mut ctx_form = None;
    let mut cont = None;
    let mut body = None;
    for form in read_all(text)? {
        match form.form().map(|(h, _)| h) {
            Ok("ctx") if ctx_form.is_none() => ctx_form = Some(ctx(&form)?),
            Ok("cont") if cont.is_none() => {
                let (_, rest) = form.form()?;
                let [k, t] = form.args("cont", rest)?;
                cont = Some((k.name()?, qtype(&t)?));
            }
            _ if body.is_none() => body = Some(form),
            _ => return form.err("unexpected extra form"),
        }
    }
    let Some(body) = body else {
        return Err(ParseError { pos: Pos { line: 1, col: 1 }, msg: "no term in input".into() });
    };
    Ok(Source { ctx: ctx_form.unwrap_or_default(), cont, body })
}
