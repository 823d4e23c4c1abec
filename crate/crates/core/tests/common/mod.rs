//! Fixtures shared by the integration and acceptance tests.
#![allow(dead_code)]

use qeq_core::sexp::parse_source;
use qeq_core::syntax::{Ctx, QExp};
use qeq_core::typecheck::TypeErrorKind;

/// Terms that break linearity, with the error each must produce. `q` in the
/// comments is a qubit.
pub const NON_LINEAR: [(&str, TypeErrorKind); 20] = {
    use TypeErrorKind::*;
    [
        ("(ctx (x (lower bool))) (pair (var x) (var x))", DuplicateUse),
        ("(ctx (x (lower bool))) (letbang (var x) ((0 (var x)) (1 (var x))))", DuplicateUse),
        ("(ctx (x (lower bool))) (let y (var x) (pair (var y) (var x)))", DuplicateUse),
        ("(ctx (p (tensor (lower bool) (lower bool)))) (letpair a b (var p) (pair (var p) (var a)))", DuplicateUse),
        ("(ctx (x (lower bool))) (uapp (prim CNOT) (pair (var x) (var x)))", DuplicateUse),
        ("(ctx (x (lower bool)) (y (lower bool))) (pair (var x) (pair (var y) (var x)))", DuplicateUse),
        ("(ctx (x (oplus (lower bool) (lower bool)))) (case (var x) (a (var x)) (b (var b)))", DuplicateUse),
        ("(ctx (x (lower bool))) (let y (var x) (let z (var x) (pair (var y) (var z))))", DuplicateUse),
        // dropping quantum data without measuring it
        ("(ctx (x (lower bool))) (put bool true)", UnusedVar),
        ("(ctx (x (lower bool)) (y (lower bool))) (var x)", UnusedVar),
        ("(ctx (p (tensor (lower bool) (lower bool)))) (letpair a b (var p) (var a))", UnusedVar),
        ("(ctx (x (lower bool))) (let y (var x) (put bool false))", UnusedVar),
        ("(ctx (x (lower bool)) (y (lower bool))) (uapp (prim H) (var x))", UnusedVar),
        (
            "(ctx (x (lower bool)) (y (lower bool))) (letbang (var x) ((0 (put bool false)) (1 (put bool true))))",
            UnusedVar,
        ),
        ("(let y (put bool true) (put bool false))", UnusedVar),
        // a binder shadowing a variable that is still live
        ("(ctx (x (lower bool)) (y (lower bool))) (let x (var y) (var x))", ContextOverlap),
        ("(ctx (p (tensor (lower bool) (lower bool)))) (letpair a a (var p) (var a))", ContextOverlap),
        (
            "(ctx (p (tensor (lower bool) (lower bool))) (a (lower bool))) (letpair a b (var p) (pair (var a) (var b)))",
            ContextOverlap,
        ),
        ("(ctx (x (oplus (lower bool) (lower bool))) (y (lower bool))) (case (var x) (y (var y)) (z (var z)))", ContextOverlap),
        (
            "(ctx (x (lower bool)) (y (lower bool))) (letbang (var x) ((0 (let y (put bool true) (var y))) (1 (var y))))",
            ContextOverlap,
        ),
    ]
};

/// Well-typed terms, with the printed type each should get.
pub const LINEAR: [(&str, &str); 20] = [
    ("(ctx (x (lower bool))) (var x)", "(lower bool)"),
    ("(put bool true)", "(lower bool)"),
    ("(ctx (x (lower bool)) (y (lower bool))) (pair (var y) (var x))", "(tensor (lower bool) (lower bool))"),
    ("(ctx (x (lower bool))) (letbang (var x) ((0 (put bool false)) (1 (put bool true))))", "(lower bool)"),
    ("(ctx (x (lower bool))) (letbang (var x) ((0 (put unit tt)) (1 (put unit tt))))", "(lower unit)"),
    (
        "(ctx (p (tensor (lower bool) (lower bool)))) (letpair a b (var p) (pair (var b) (var a)))",
        "(tensor (lower bool) (lower bool))",
    ),
    ("(ctx (x (lower bool))) (uapp (prim H) (var x))", "(lower bool)"),
    (
        "(ctx (x (lower bool)) (y (lower bool))) (uapp (prim CNOT) (pair (var x) (var y)))",
        "(tensor (lower bool) (lower bool))",
    ),
    ("(ctx (x (lower bool))) (let y (var x) (var y))", "(lower bool)"),
    (
        "(ctx (x (lower bool))) (inj 1 (oplus (lower bool) (lower bool)) (var x))",
        "(oplus (lower bool) (lower bool))",
    ),
    (
        "(ctx (x (oplus (lower bool) (lower bool)))) (case (var x) (a (var a)) (b (uapp (prim X) (var b))))",
        "(lower bool)",
    ),
    ("(let x (put bool false) (uapp (prim H) (var x)))", "(lower bool)"),
    (
        "(ctx (x (lower bool)) (y (lower bool))) (letbang (var x) ((0 (var y)) (1 (uapp (prim X) (var y)))))",
        "(lower bool)",
    ),
    ("(put (fin 3) 2)", "(lower (fin 3))"),
    (
        "(ctx (x (lower bool)) (y (lower bool)) (z (lower bool))) (pair (var x) (pair (var y) (var z)))",
        "(tensor (lower bool) (tensor (lower bool) (lower bool)))",
    ),
    (
        "(ctx (p (tensor (lower bool) (lower bool)))) (letpair a b (uapp (prim SWAP) (var p)) (letbang (var a) ((0 (var b)) (1 (var b)))))",
        "(lower bool)",
    ),
    (
        "(ctx (x (lower bool))) (letbang (uapp (prim H) (var x)) ((0 (put bool false)) (1 (put bool true))))",
        "(lower bool)",
    ),
    ("(pair (put bool false) (put unit tt))", "(tensor (lower bool) (lower unit))"),
    (
        "(ctx (x (oplus (lower bool) (lower bool)))) (case (var x) (a (letbang (var a) ((0 (put bool true)) (1 (put bool false))))) (b (var b)))",
        "(lower bool)",
    ),
    (
        "(ctx (x (lower bool)) (y (lower bool))) (let z (pair (var x) (var y)) (letpair a b (var z) (pair (var b) (var a))))",
        "(tensor (lower bool) (lower bool))",
    ),
];

pub fn term(text: &str) -> (Ctx, QExp) {
    let src = parse_source(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    let e = src.qexp().unwrap_or_else(|e| panic!("{text}: {e}"));
    (src.ctx, e)
}
