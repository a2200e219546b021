use std::collections::BTreeMap;

use crate::ast::{BinaryOp, Expr, ExprKind, UnaryOp};
use crate::formula::Formula;

/// Matches `subject` against the connective structure of `pattern`.
///
/// Identifiers in the pattern bind the corresponding subformula; `_` matches
/// anything without binding. An identifier used twice must meet equal
/// subformulas. Constructs that are not connectives never match.
pub fn pattern_match(subject: &Formula, pattern: &Expr) -> Option<BTreeMap<String, Formula>> {
    let mut bindings = BTreeMap::new();
    go(subject, pattern, &mut bindings).then_some(bindings)
}

fn go(f: &Formula, p: &Expr, binds: &mut BTreeMap<String, Formula>) -> bool {
    use Formula as F;
    match &p.kind {
        ExprKind::Ident(name) | ExprKind::Signal(name) if name == "_" => true,
        ExprKind::Ident(name) | ExprKind::Signal(name) => match binds.get(name) {
            Some(bound) => bound == f,
            None => {
                binds.insert(name.clone(), f.clone());
                true
            }
        },
        ExprKind::Bool(b) => *f == if *b { F::True } else { F::False },
        ExprKind::Unary { op, operand } => {
            let inner = match (op, f) {
                (UnaryOp::Not, F::Not(a))
                | (UnaryOp::Next, F::Next(a))
                | (UnaryOp::StrongNext, F::StrongNext(a))
                | (UnaryOp::Finally, F::Finally(a))
                | (UnaryOp::Globally, F::Globally(a)) => a,
                _ => return false,
            };
            go(inner, operand, binds)
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let (a, b) = match (op, f) {
                (BinaryOp::And, F::And(a, b))
                | (BinaryOp::Or, F::Or(a, b))
                | (BinaryOp::Implies, F::Implies(a, b))
                | (BinaryOp::Equiv, F::Equiv(a, b))
                | (BinaryOp::Until, F::Until(a, b))
                | (BinaryOp::Release, F::Release(a, b))
                | (BinaryOp::WeakUntil, F::WeakUntil(a, b)) => (a, b),
                _ => return false,
            };
            go(a, lhs, binds) && go(b, rhs, binds)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_expression_str;

    fn a() -> Formula {
        Formula::atom("a")
    }

    #[test]
    fn until_with_wildcard() {
        let subject = Formula::until(a(), Formula::and(Formula::atom("b"), Formula::atom("c")));
        let binds = pattern_match(&subject, &parse_expression_str("x U _").unwrap()).unwrap();
        assert_eq!(binds, BTreeMap::from([("x".to_string(), a())]));
    }

    #[test]
    fn connective_mismatch() {
        let pattern = parse_expression_str("x U y").unwrap();
        assert!(pattern_match(&Formula::next(a()), &pattern).is_none());
    }

    #[test]
    fn repeated_binder() {
        let pattern = parse_expression_str("x && x").unwrap();
        let same = pattern_match(&Formula::and(a(), a()), &pattern).unwrap();
        assert_eq!(same["x"], a());
        assert!(pattern_match(&Formula::and(a(), Formula::atom("b")), &pattern).is_none());
    }
}
