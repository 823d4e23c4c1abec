//! Properties of randomly generated terms across modules.

mod common;

use proptest::prelude::*;
use qeq_core::gen::random_term;
use qeq_core::linalg::{DEFAULT_TOL, PSD_TOL};
use qeq_core::rewrite::{apply_rule, Direction, Rule};
use qeq_core::semantics::{denote_in, equiv_check};
use qeq_core::sexp::parse_qexp;
use qeq_core::syntax::QType;
use qeq_core::typecheck::infer;

fn small_type(pick: u8) -> QType {
    let q = QType::qubit();
    match pick % 4 {
        0 => q,
        1 => QType::tensor(q.clone(), q),
        2 => QType::oplus(q, QType::unit()),
        _ => QType::unit(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_terms_are_linear_and_denote_channels(seed in any::<u64>(), size in 0usize..3, pick in any::<u8>()) {
        let ty = small_type(pick);
        let (ctx, e) = random_term(seed, size, 3, &ty);
        prop_assert_eq!(infer(&ctx, &e).unwrap(), ty.clone());
        let f = denote_in(&ctx, &e, &ty).unwrap();
        prop_assert!(f.is_trace_nonincreasing(DEFAULT_TOL));
        prop_assert!(f.is_completely_positive(PSD_TOL));
    }

    #[test]
    fn printed_terms_reparse(seed in any::<u64>(), pick in any::<u8>()) {
        let (_, e) = random_term(seed, 2, 3, &small_type(pick));
        let back = parse_qexp(&e.to_string()).unwrap();
        prop_assert!(back.alpha_eq(&e));
    }

    #[test]
    fn any_rewrite_step_preserves_meaning(seed in any::<u64>(), pick in any::<u8>()) {
        let ty = small_type(pick);
        let (ctx, e) = random_term(seed, 2, 3, &ty);
        for pos in e.positions() {
            for rule in Rule::ALL {
                if let Ok(Some(next)) = apply_rule(rule, &e, &ctx, &pos, Direction::Forward) {
                    prop_assert_eq!(infer(&ctx, &next).unwrap(), ty.clone());
                    prop_assert!(equiv_check(&e, &next, &ctx, DEFAULT_TOL).unwrap(), "{} at {:?}: {} vs {}", rule, pos, e, next);
                }
            }
        }
    }
}

#[test]
fn corpus_terms_reparse_after_printing() {
    for (text, _) in common::LINEAR {
        let (_, e) = common::term(text);
        assert!(parse_qexp(&e.to_string()).unwrap().alpha_eq(&e), "{text}");
    }
}
