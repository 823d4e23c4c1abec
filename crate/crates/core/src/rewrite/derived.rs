//! Concrete instances of derived equations that the search must be able to
//! close from the basic rules.

use crate::syntax::unitary::{controlled, distr_unitary, not_equiv};
use crate::syntax::{Assignment, Ctx, Equiv, FinType, OpenType, QExp, QType, Side, Unitary};

use super::rules::Rule;

#[derive(Clone, Debug)]
pub struct DerivedRule {
    pub name: &'static str,
    pub ctx: Ctx,
    pub lhs: QExp,
    pub rhs: QExp,
    /// Search depth that must suffice.
    pub depth: usize,
    /// Rules withheld from the search, to force a particular proof.
    pub excluded: Vec<Rule>,
}

impl DerivedRule {
    fn new(name: &'static str, ctx: Ctx, lhs: QExp, rhs: QExp, depth: usize) -> Self {
        DerivedRule { name, ctx, lhs, rhs, depth, excluded: Vec::new() }
    }

    fn without(mut self, rules: &[Rule]) -> Self {
        self.excluded.extend_from_slice(rules);
        self
    }
}

fn hadamard() -> Unitary {
    Unitary::named("H").expect("H is built in")
}

fn not_gate() -> Unitary {
    Unitary::from_equiv(not_equiv(), Assignment::new())
}

fn h(e: QExp) -> QExp {
    QExp::uapp(hadamard(), e)
}

fn v(x: &str) -> QExp {
    QExp::var(x)
}

pub fn derived_rule_suite() -> Vec<DerivedRule> {
    let q = QType::qubit();
    let one_qubit = Ctx::singleton("q", q.clone());
    let two_qubits = Ctx::singleton("q", q.clone()).with("r", q.clone());
    let qq = QType::tensor(q.clone(), q.clone());
    let x = not_gate();
    let discard = |e: QExp| QExp::letbang(e, vec![QExp::put_unit(), QExp::put_unit()]);

    let three = FinType::Fin(3);
    let swap_m = Assignment::new().with("X", FinType::Bool).with("Y", three.clone());
    let swap = Unitary::from_equiv(Equiv::SwapTensor(OpenType::var("X"), OpenType::var("Y")), swap_m);
    let bool_three = QType::tensor(q.clone(), QType::Lower(three.clone()));

    let distr = distr_unitary(FinType::Bool);
    let cnot = controlled(FinType::Bool, x.clone());
    let on_pair = Ctx::singleton("p", qq.clone());

    vec![
        DerivedRule::new(
            "U-COMPOSE",
            one_qubit.clone(),
            h(QExp::uapp(x.clone(), v("q"))),
            QExp::uapp(Unitary::compose(hadamard(), x.clone()), v("q")),
            2,
        ),
        DerivedRule::new(
            "U-I",
            Ctx::singleton("a", q.clone()).with("b", q.clone()),
            QExp::uapp(Unitary::id(qq.clone()), QExp::pair(v("a"), v("b"))),
            QExp::pair(v("a"), v("b")),
            2,
        ),
        DerivedRule::new("U-†", one_qubit.clone(), QExp::uapp(Unitary::adjoint(hadamard()), h(v("q"))), v("q"), 2),
        // discarding a measured, rotated qubit is discarding it
        DerivedRule::new("DISCARD-MEAS-UNITARY", one_qubit.clone(), discard(QExp::meas(h(v("q")))), discard(v("q")), 4)
            .without(&[Rule::ULowerElim]),
        DerivedRule::new(
            "MEAS-UNITARY-CONST",
            two_qubits.clone(),
            QExp::letbang(QExp::meas(h(v("q"))), vec![v("r"), v("r")]),
            QExp::letbang(v("q"), vec![v("r"), v("r")]),
            6,
        ),
        DerivedRule::new("X-INTRO-0", Ctx::new(), QExp::uapp(x.clone(), QExp::put_bool(false)), QExp::put_bool(true), 2),
        DerivedRule::new("X-INTRO-1", Ctx::new(), QExp::uapp(x.clone(), QExp::put_bool(true)), QExp::put_bool(false), 2),
        DerivedRule::new(
            "X-ELIM",
            two_qubits.clone(),
            QExp::letbang(QExp::uapp(x.clone(), v("q")), vec![v("r"), h(v("r"))]),
            QExp::letbang(v("q"), vec![h(v("r")), v("r")]),
            2,
        ),
        DerivedRule::new(
            "SWAP-INTRO",
            one_qubit.clone(),
            QExp::uapp(swap.clone(), QExp::pair(h(v("q")), QExp::put(three.clone(), 1))),
            QExp::pair(QExp::put(three.clone(), 1), h(v("q"))),
            2,
        ),
        DerivedRule::new(
            "SWAP-ELIM",
            Ctx::singleton("p", bool_three),
            QExp::letpair("y", "x", QExp::uapp(swap, v("p")), QExp::pair(h(v("x")), v("y"))),
            QExp::letpair("x", "y", v("p"), QExp::pair(h(v("x")), v("y"))),
            2,
        ),
        DerivedRule::new(
            "DISTR-INTRO",
            one_qubit.clone(),
            QExp::uapp(distr.clone(), QExp::pair(QExp::put_bool(true), h(v("q")))),
            QExp::inj(Side::Right, QType::oplus(q.clone(), q.clone()), h(v("q"))),
            2,
        ),
        DerivedRule::new(
            "DISTR-ELIM",
            on_pair.clone(),
            QExp::case(QExp::uapp(distr, v("p")), "z1", h(v("z1")), "z2", v("z2")),
            QExp::letpair("b", "y", v("p"), QExp::letbang(v("b"), vec![h(v("y")), v("y")])),
            2,
        ),
        DerivedRule::new(
            "CNOT-INTRO-1",
            one_qubit.clone(),
            QExp::uapp(cnot.clone(), QExp::pair(QExp::put_bool(true), v("q"))),
            QExp::pair(QExp::put_bool(true), QExp::uapp(x.clone(), v("q"))),
            8,
        ),
        DerivedRule::new(
            "CNOT-INTRO-0",
            one_qubit,
            QExp::uapp(cnot.clone(), QExp::pair(QExp::put_bool(false), v("q"))),
            QExp::pair(QExp::put_bool(false), v("q")),
            8,
        ),
        DerivedRule::new(
            "CNOT-ELIM",
            on_pair,
            QExp::letpair("c", "y", QExp::uapp(cnot, v("p")), QExp::letbang(v("c"), vec![h(v("y")), h(v("y"))])),
            QExp::letpair("c", "y", v("p"), QExp::letbang(v("c"), vec![h(v("y")), h(QExp::uapp(x, v("y")))])),
            8,
        ),
    ]
}
