use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;

fn env(pairs: &[(&str, f64)]) -> EvalEnv {
    pairs.iter().map(|(k, v)| (k.to_string(), Complex64::new(*v, 0.0))).collect()
}

fn renv(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn oscillator_free_vars() {
    let e = LagrangianExpr::parse("qdot^2/2 - q^2/2").unwrap();
    assert_eq!(e.free_vars(), ["q", "qdot"]);
    let e = LagrangianExpr::parse("(qx^2 + qy^2)/2").unwrap();
    assert_eq!(e.free_vars(), ["qx", "qy"]);
}

#[test]
fn unclosed_parenthesis_position() {
    let err = LagrangianExpr::parse("sin(q").unwrap_err();
    assert_eq!(err.position, 6);
    match err.kind {
        ParseErrorKind::Syntax { expected, .. } => assert!(expected.contains("')'")),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_function_is_distinct() {
    let err = LagrangianExpr::parse("1 + tan(q)").unwrap_err();
    assert_eq!(err.kind, ParseErrorKind::UnknownFunction("tan".into()));
    assert_eq!(err.position, 5);
}

#[test]
fn other_syntax_errors() {
    for bad in ["", "   ", "q +", "2 3", "q $ 1", "sin q", "(q))", "*q"] {
        assert!(LagrangianExpr::parse(bad).is_err(), "{bad:?} parsed");
    }
}

#[test]
fn precedence_and_associativity() {
    let ev = |s: &str| LagrangianExpr::parse(s).unwrap().eval_real(&renv(&[])).unwrap();
    assert_eq!(ev("2^3^2"), 512.0);
    assert_eq!(ev("-2^2"), -4.0);
    assert_eq!(ev("2^-1"), 0.5);
    assert_eq!(ev("8 - 3 - 2"), 3.0);
    assert_eq!(ev("8 / 4 / 2"), 1.0);
    assert_eq!(ev("1 + 2 * 3"), 7.0);
    assert_eq!(ev("-3 * 2"), -6.0);
    assert_eq!(ev("1.5e1 + .5"), 15.5);
}

#[test]
fn evaluation_examples() {
    let e = LagrangianExpr::parse("qdot^2/2 - q^2/2").unwrap();
    assert_eq!(e.eval(&env(&[("qdot", 2.0), ("q", 1.0)])).unwrap(), Complex64::new(1.5, 0.0));
    let e = LagrangianExpr::parse("exp(tau)").unwrap();
    assert_eq!(e.eval_real(&renv(&[("tau", 0.0)])).unwrap(), 1.0);
}

#[test]
fn evaluation_errors() {
    let e = LagrangianExpr::parse("sqrt(q)").unwrap();
    assert!(matches!(e.eval_real(&renv(&[("q", -1.0)])), Err(EvalError::Domain { func: "sqrt", .. })));
    // complex mode takes the principal branch instead
    let z = e.eval(&env(&[("q", -1.0)])).unwrap();
    assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    assert_eq!(e.eval_real(&renv(&[])), Err(EvalError::Unbound("q".into())));
    let e = LagrangianExpr::parse("1/q").unwrap();
    assert_eq!(e.eval_real(&renv(&[("q", 0.0)])), Err(EvalError::DivisionByZero));
    let e = LagrangianExpr::parse("log(q)").unwrap();
    assert!(e.eval_real(&renv(&[("q", 0.0)])).is_err());
    let e = LagrangianExpr::parse("q^1.5").unwrap();
    assert!(e.eval_real(&renv(&[("q", -2.0)])).is_err());
}

#[test]
fn partial_examples() {
    let e = LagrangianExpr::parse("qdot^2/2 - q^2/2").unwrap();
    let at = env(&[("qdot", 2.0), ("q", 1.0)]);
    assert_eq!(e.partial("qdot", &at).unwrap(), Complex64::new(2.0, 0.0));
    assert_eq!(e.partial("q", &at).unwrap(), Complex64::new(-1.0, 0.0));
    assert_eq!(e.partial("tau", &at).unwrap(), Complex64::new(0.0, 0.0));

    // oracle: central difference with step 1e-6
    let e = LagrangianExpr::parse("sin(qdot*q)").unwrap();
    let f = |v: f64| e.eval_real(&renv(&[("qdot", v), ("q", 0.7)])).unwrap();
    let fd = (f(0.3 + 1e-6) - f(0.3 - 1e-6)) / 2e-6;
    let ad = e.partial("qdot", &env(&[("qdot", 0.3), ("q", 0.7)])).unwrap().re;
    assert!((ad - fd).abs() < 1e-8);
    assert!((ad - 0.7 * libm::cos(0.21)).abs() < 1e-15);
}

#[test]
fn slot_binding() {
    let e = LagrangianExpr::parse("qdot^2/2 - q^2/2 + tau*q").unwrap();
    let b = e.bind_slots(&["qdot", "q", "tau"]).unwrap();
    let p = [2.0, 1.0, 0.5];
    let (v, g) = b.gradient(&p).unwrap();
    assert_eq!(v, 2.0 - 0.5 + 0.5);
    assert_eq!(g, vec![2.0, -1.0 + 0.5, 1.0]);
    assert_eq!(b.second_partial(&p, 0, 0).unwrap(), 1.0);
    assert_eq!(b.second_partial(&p, 1, 1).unwrap(), -1.0);
    assert_eq!(b.second_partial(&p, 1, 2).unwrap(), 1.0);
    assert_eq!(b.second_partial(&p, 0, 2).unwrap(), 0.0);
    let err = e.bind_slots(&["qx", "qy", "q", "x", "y"]).unwrap_err();
    assert_eq!(err.name, "qdot");
}

#[test]
fn constants_are_substituted() {
    let e = LagrangianExpr::parse("m*qdot^2/2 - k*q^2/2").unwrap();
    let bound = e.bind_constants(&[("m", 2.0), ("k", 3.0)]);
    assert_eq!(bound.free_vars(), ["q", "qdot"]);
    let v = bound.eval_real(&renv(&[("qdot", 1.0), ("q", 1.0)])).unwrap();
    assert_eq!(v, 1.0 - 1.5);
}

#[test]
fn display_reparses_to_same_tree() {
    for src in ["qdot^2/2 - q^2/2", "-x^-2.5e-7", "sin(cos(q))*exp(-tau)/abs(q)", "2^3^4"] {
        let e = LagrangianExpr::parse(src).unwrap();
        let again = LagrangianExpr::parse(&e.to_string()).unwrap();
        assert_eq!(e, again, "{src} -> {e}");
    }
}

const VARS: [&str; 3] = ["qdot", "q", "tau"];

fn arb_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0.1f64..5.0).prop_map(|v| alloc::format!("{v}")),
        (0usize..3).prop_map(|i| VARS[i].to_string()),
        (1i32..4).prop_map(|k| alloc::format!("{k}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), 0usize..5).prop_map(|(a, b, op)| {
                let sym = ["+", "-", "*", "/", "^"][op];
                alloc::format!("({a}) {sym} ({b})")
            }),
            inner.clone().prop_map(|a| alloc::format!("-({a})")),
            (inner, 0usize..6).prop_map(|(a, f)| alloc::format!("{}({a})", Func::ALL[f].name())),
        ]
    })
}

proptest! {
    #[test]
    fn serialize_round_trip_is_bitwise(src in arb_expr(), x in 0.5f64..1.5, y in 0.5f64..1.5, z in 0.5f64..1.5) {
        let e = LagrangianExpr::parse(&src).unwrap();
        let again = LagrangianExpr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(&e, &again);
        let at = env(&[("qdot", x), ("q", y), ("tau", z)]);
        match (e.eval(&at), again.eval(&at)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "evaluation outcome differs"),
        }
    }

    #[test]
    fn unused_variable_partial_is_exact_zero(src in arb_expr(), x in 0.5f64..1.5) {
        let e = LagrangianExpr::parse(&src).unwrap();
        let at = env(&[("qdot", x), ("q", x), ("tau", x), ("unused", x)]);
        if let Ok(d) = e.partial("unused", &at) {
            prop_assert_eq!(d, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn free_vars_are_exactly_the_identifiers(src in arb_expr()) {
        let e = LagrangianExpr::parse(&src).unwrap();
        let expected: Vec<&str> = {
            let mut v: Vec<&str> = VARS.iter().copied().filter(|n| {
                // identifiers are whole words in the generated source
                src.split(|c: char| !c.is_ascii_alphanumeric() && c != '_').any(|w| w == *n)
            }).collect();
            v.sort();
            v
        };
        prop_assert_eq!(e.free_vars().iter().map(String::as_str).collect::<Vec<_>>(), expected);
    }
}
