//! Closed LTL/LTLf formulas over atomic propositions.
//!
//! This is what elaboration produces and what the evaluator, the
//! realizability checker and the exporters consume. The derived ordering is
//! the fixed total order used for canonical operand sorting.

use std::fmt;

use serde::Serialize;

use crate::ast::{BinaryOp, Expr, ExprKind, UnaryOp};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Equiv(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    StrongNext(Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn equiv(a: Formula, b: Formula) -> Formula {
        Formula::Equiv(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn strong_next(f: Formula) -> Formula {
        Formula::StrongNext(Box::new(f))
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Formula, b: Formula) -> Formula {
        Formula::WeakUntil(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `true` for an empty list.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` for an empty list.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | StrongNext(a) | Finally(a) | Globally(a) => vec![a],
            And(a, b)
            | Or(a, b)
            | Implies(a, b)
            | Equiv(a, b)
            | Until(a, b)
            | Release(a, b)
            | WeakUntil(a, b) => vec![a, b],
        }
    }

    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Formula::Atom(p) = self {
            out.push(p);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn contains_strong_next(&self) -> bool {
        matches!(self, Formula::StrongNext(_))
            || self.children().iter().any(|c| c.contains_strong_next())
    }

    /// Number of nodes matching `pred`.
    pub fn count(&self, pred: &dyn Fn(&Formula) -> bool) -> usize {
        usize::from(pred(self)) + self.children().iter().map(|c| c.count(pred)).sum::<usize>()
    }

    /// Converts an expression that is already a plain formula.
    ///
    /// Identifiers and signals become atoms, and `b[k]` with a literal index
    /// becomes the atom `b[k]`. Anything else is rejected.
    pub fn from_expr(expr: &Expr) -> Result<Formula, String> {
        let lower = Formula::from_expr;
        Ok(match &expr.kind {
            ExprKind::Bool(true) => Formula::True,
            ExprKind::Bool(false) => Formula::False,
            ExprKind::Signal(name) | ExprKind::Ident(name) => Formula::Atom(name.clone()),
            ExprKind::BusAccess { bus, index } => match &index.kind {
                ExprKind::Num(n) => Formula::Atom(format!("{bus}[{n}]")),
                _ => return Err(format!("non-literal bus index on `{bus}`")),
            },
            ExprKind::Unary { op, operand } => {
                let inner = lower(operand)?;
                match op {
                    UnaryOp::Not => Formula::not(inner),
                    UnaryOp::Next => Formula::next(inner),
                    UnaryOp::StrongNext => Formula::strong_next(inner),
                    UnaryOp::Finally => Formula::finally(inner),
                    UnaryOp::Globally => Formula::globally(inner),
                    other => return Err(format!("`{}` is not a temporal operator", other.symbol())),
                }
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let (a, b) = (lower(lhs)?, lower(rhs)?);
                match op {
                    BinaryOp::And => Formula::and(a, b),
                    BinaryOp::Or => Formula::or(a, b),
                    BinaryOp::Implies => Formula::implies(a, b),
                    BinaryOp::Equiv => Formula::equiv(a, b),
                    BinaryOp::Until => Formula::until(a, b),
                    BinaryOp::Release => Formula::release(a, b),
                    BinaryOp::WeakUntil => Formula::weak_until(a, b),
                    other => return Err(format!("`{}` is not a temporal operator", other.symbol())),
                }
            }
            _ => return Err("expression is not a plain formula".to_string()),
        })
    }
}

impl fmt::Display for Formula {
    /// TLSF syntax with every compound operand parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match g {
                Formula::True | Formula::False | Formula::Atom(_) => write!(f, "{g}"),
                _ => write!(f, "({g})"),
            }
        }
        let unary = |sym: &str, a: &Formula, f: &mut fmt::Formatter<'_>| {
            write!(f, "{sym} ")?;
            operand(a, f)
        };
        let binary = |sym: &str, a: &Formula, b: &Formula, f: &mut fmt::Formatter<'_>| {
            operand(a, f)?;
            write!(f, " {sym} ")?;
            operand(b, f)
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(p) => f.write_str(p),
            Formula::Not(a) => unary("!", a, f),
            Formula::Next(a) => unary("X", a, f),
            Formula::StrongNext(a) => unary("X[!]", a, f),
            Formula::Finally(a) => unary("F", a, f),
            Formula::Globally(a) => unary("G", a, f),
            Formula::And(a, b) => binary("&&", a, b, f),
            Formula::Or(a, b) => binary("||", a, b, f),
            Formula::Implies(a, b) => binary("->", a, b, f),
            Formula::Equiv(a, b) => binary("<->", a, b, f),
            Formula::Until(a, b) => binary("U", a, b, f),
            Formula::Release(a, b) => binary("R", a, b, f),
            Formula::WeakUntil(a, b) => binary("W", a, b, f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds() {
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        let c = Formula::atom("c");
        assert_eq!(Formula::conjunction([]), Formula::True);
        assert_eq!(Formula::disjunction([]), Formula::False);
        assert_eq!(
            Formula::conjunction([a.clone(), b.clone(), c.clone()]),
            Formula::and(Formula::and(a, b), c)
        );
    }

    #[test]
    fn display() {
        let f = Formula::implies(
            Formula::atom("r"),
            Formula::finally(Formula::and(Formula::atom("g"), Formula::True)),
        );
        assert_eq!(f.to_string(), "r -> (F (g && true))");
        assert_eq!(f.size(), 6);
    }
}
