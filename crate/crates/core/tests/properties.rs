use deformcalc::algebra::{kappa_exp, q_difference, q_exp, q_log, q_sum, KappaParam, QParam};
use deformcalc::expr::{differentiate, parse, BinOp, Builtin, Expr};
use proptest::prelude::*;

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        (0.0f64..1e6).prop_map(Expr::Number),
        (0u32..20).prop_map(|n| Expr::Number(n as f64)),
    ];
    leaf.prop_recursive(5, 64, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow),
        ];
        let unary = prop::sample::select(
            Builtin::ALL
                .iter()
                .copied()
                .filter(|b| b.arity() == 1)
                .collect::<Vec<_>>(),
        );
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            (unary, inner.clone()).prop_map(|(f, a)| Expr::call(f, a)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Builtin::Pow, vec![a, b])),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(e in arb_expr()) {
        let printed = e.to_string();
        let reparsed = parse(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(reparsed, e);
    }

    #[test]
    fn parser_is_total_on_grammar_alphabet(src in "[0-9x+*/^().,e \\-a-z]{0,2000}") {
        if let Err(err) = parse(&src) {
            prop_assert!(err.position <= src.len() + 1);
        }
    }

    #[test]
    fn parser_is_total_on_arbitrary_text(src in any::<String>()) {
        if let Err(err) = parse(&src) {
            prop_assert!(err.position <= src.len() + 1);
        }
    }

    #[test]
    fn derivative_is_a_valid_tree(e in arb_expr()) {
        if let Ok(d) = differentiate(&e) {
            let printed = d.to_string();
            if d.depth() <= deformcalc::expr::MAX_DEPTH {
                prop_assert!(parse(&printed).is_ok(), "{}", printed);
            }
        }
    }

    #[test]
    fn q_sum_inverts_q_difference(x in -0.9f64..3.0, y in -0.9f64..3.0, q in 0.2f64..1.8) {
        let q = QParam::new(q).unwrap();
        let d = q_difference(x, y, q).unwrap();
        let back = q_sum(d, y, q);
        prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn q_log_inverts_q_exp(x in -0.5f64..2.0, q in 0.2f64..1.3) {
        let qp = QParam::new(q).unwrap();
        prop_assume!(1.0 + (1.0 - q) * x > 0.05);
        let back = q_log(q_exp(x, qp), qp).unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * x.abs().max(1.0));
    }

    #[test]
    fn q_exp_is_nonnegative(x in -100.0f64..100.0, q in 0.0f64..3.0) {
        let v = q_exp(x, QParam::new(q).unwrap());
        prop_assert!(v >= 0.0, "{}", v);
    }

    #[test]
    fn kappa_exp_reciprocal_symmetry(x in -20.0f64..20.0, k in 0.0f64..2.0) {
        let kp = KappaParam::new(k).unwrap();
        let prod = kappa_exp(x, kp) * kappa_exp(-x, kp);
        prop_assert!((prod - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn deep_nesting_is_rejected_with_position() {
    for src in [
        "(".repeat(10_000),
        "-".repeat(10_000),
        format!("{}x", "sin(".repeat(2_500)),
    ] {
        let err = parse(&src).unwrap_err();
        assert!(err.position <= src.len() + 1);
    }
}

#[test]
fn depth_limit_boundary() {
    let ok = format!("{}x{}", "(-".repeat(63), ")".repeat(63));
    assert_eq!(parse(&ok).unwrap().depth(), 64);
    let too_deep = format!("{}x{}", "(-".repeat(64), ")".repeat(64));
    assert!(parse(&too_deep).unwrap_err().to_string().contains("64"));
}
