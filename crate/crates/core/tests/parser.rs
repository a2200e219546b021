mod common;

use proptest::prelude::*;
use tlsf::ast::{Assoc, BinaryOp, Expr, ExprKind};
use tlsf::export::{basic_formula, flat_formula, full_expr, Dialect};
use tlsf::formula::Formula;
use tlsf::parser::{parse_expression_str, parse_spec, parse_spec_with, Mode, ParseOptions};

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        "[a-d]".prop_map(Formula::atom),
        (0u8..4).prop_map(|k| Formula::atom(format!("bus[{k}]"))),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (0..common::UNARY.len(), inner.clone()).prop_map(|(k, f)| common::UNARY[k](f)),
            (0..common::BINARY.len(), inner.clone(), inner).prop_map(|(k, a, b)| common::BINARY[k](a, b)),
        ]
    })
}

fn arb_arith() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0u64..100).prop_map(Expr::num), "[x-z]".prop_map(|s| Expr::ident(&s))];
    let ops = [
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Mod,
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Eq,
        BinaryOp::Lt,
        BinaryOp::Ge,
        BinaryOp::And,
        BinaryOp::Or,
    ];
    leaf.prop_recursive(5, 32, 2, move |inner| {
        (0..ops.len(), inner.clone(), inner).prop_map(move |(k, a, b)| Expr::binary(ops[k], a, b))
    })
}

fn reparse(text: &str) -> Formula {
    let e = parse_expression_str(text).unwrap_or_else(|d| panic!("{text}: {d:?}"));
    Formula::from_expr(&e).unwrap()
}

proptest! {
    #[test]
    fn basic_printing_reparses(f in arb_formula()) {
        prop_assert_eq!(reparse(&basic_formula(&f)), f);
    }

    #[test]
    fn flat_printing_reparses(f in arb_formula()) {
        prop_assert_eq!(reparse(&flat_formula(&f, Dialect::Finite).unwrap()), f.clone());
        prop_assert_eq!(reparse(&f.to_string()), f);
    }

    #[test]
    fn full_expression_printing_reparses(e in arb_arith()) {
        let text = full_expr(&e);
        let back = parse_expression_str(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(full_expr(&back), text);
    }
}

const CHAINABLE: [(BinaryOp, &str); 7] = [
    (BinaryOp::And, "&&"),
    (BinaryOp::Or, "||"),
    (BinaryOp::Implies, "->"),
    (BinaryOp::Equiv, "<->"),
    (BinaryOp::WeakUntil, "W"),
    (BinaryOp::Until, "U"),
    (BinaryOp::Release, "R"),
];

#[test]
fn mixed_chains_follow_the_operator_table() {
    for (p, ps) in CHAINABLE {
        for (q, qs) in CHAINABLE {
            let got = parse_expression_str(&format!("a {ps} b {qs} c")).unwrap();
            let left_first = p.level() < q.level() || (p.level() == q.level() && p.assoc() == Assoc::Left);
            let want = if left_first { format!("(a {ps} b) {qs} c") } else { format!("a {ps} (b {qs} c)") };
            assert_eq!(got, parse_expression_str(&want).unwrap(), "a {ps} b {qs} c");
        }
    }
}

#[test]
fn prefix_operators_bind_tightly() {
    let parse = |s: &str| parse_expression_str(s).unwrap();
    assert_eq!(parse("! a && b"), parse("(! a) && b"));
    assert_eq!(parse("X a U b"), parse("(X a) U b"));
    assert_eq!(parse("G F a -> b"), parse("(G (F a)) -> b"));
    assert_eq!(parse("1 + 2 * 3"), parse("1 + (2 * 3)"));
    assert_eq!(parse("8 - 2 - 1"), parse("(8 - 2) - 1"));
}

#[test]
fn spans_do_not_affect_equality() {
    let a = parse_expression_str("a && b").unwrap();
    let b = parse_expression_str("   a   &&\n b").unwrap();
    assert_ne!(a.span, b.span);
    assert_eq!(a, b);
}

#[test]
fn syntax_errors_carry_positions() {
    let src = "INFO {\n  TITLE: \"t\"\n  DESCRIPTION: \"d\"\n  SEMANTICS: Mealy\n  TARGET: Mealy\n}\nMAIN {\n  INPUTS { a[; }\n  OUTPUTS { g; }\n}\n";
    let diags = parse_spec(src).unwrap_err();
    let rendered = diags[0].render("x.tlsf", src);
    assert!(rendered.starts_with("x.tlsf:8:"), "{rendered}");
    assert!(rendered.contains(": error: "), "{rendered}");
}

#[test]
fn unterminated_comment_is_an_error() {
    assert!(parse_spec("/* never closed").is_err());
    assert!(parse_expression_str("a && /* b").is_err());
}

#[test]
fn fixtures_parse_in_their_mode() {
    for (name, src) in common::full_fixtures() {
        parse_spec(&src).unwrap_or_else(|d| panic!("{name}: {d:?}"));
    }
    for (name, src) in common::basic_fixtures() {
        parse_spec_with(&src, ParseOptions { mode: Mode::Basic }).unwrap_or_else(|d| panic!("{name}: {d:?}"));
    }
}

#[test]
fn basic_mode_rejects_global() {
    let src = common::full_fixtures().into_iter().find(|(n, _)| n == "arbiter").unwrap().1;
    assert!(parse_spec_with(&src, ParseOptions { mode: Mode::Basic }).is_err());
}

#[test]
fn bus_access_keeps_its_index_expression() {
    let e = parse_expression_str("r[i + 1]").unwrap();
    let ExprKind::BusAccess { bus, index } = e.kind else { panic!() };
    assert_eq!(bus, "r");
    assert_eq!(*index, parse_expression_str("i + 1").unwrap());
}
