//! Printers: basic TLSF, full TLSF, flat formulas and JSON dumps.
//!
//! Output uses two-space indentation, LF line endings and no trailing
//! whitespace. Flat formulas use this operator table:
//!
//! | formula | flat |
//! |---|---|
//! | not, and, or | `!`, `&`, `\|` |
//! | implies, equivalent | `->`, `<->` |
//! | next, strong next | `X`, `X[!]` |
//! | finally, globally | `F`, `G` |
//! | until, release, weak until | `U`, `R`, `W` |
//! | constants | `true`, `false` |

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::ast::*;
use crate::elaborate::ElaboratedSpec;
use crate::formula::Formula;
use crate::semantics::CompositionResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    /// LTLf; the only dialect allowed to contain `X[!]`.
    Finite,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("strong next `X[!]` has no meaning in the infinite-word dialect")]
    StrongNextInInfinite,
    #[error("cannot serialize: {0}")]
    Serialize(String),
}

/// Spelling of `&&` and `||`.
#[derive(Clone, Copy)]
struct Junctions {
    and: &'static str,
    or: &'static str,
}

const FLAT: Junctions = Junctions { and: "&", or: "|" };
const TLSF: Junctions = Junctions { and: "&&", or: "||" };

/// Formula with every operand parenthesized, the outermost operator bare.
fn render(f: &Formula, j: Junctions, out: &mut String) {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || render_inner(f, j, out))
}

fn render_inner(f: &Formula, j: Junctions, out: &mut String) {
    let operand = |g: &Formula, out: &mut String| {
        out.push('(');
        render(g, j, out);
        out.push(')');
    };
    let unary = |sym: &str, a: &Formula, out: &mut String| {
        out.push_str(sym);
        out.push(' ');
        operand(a, out);
    };
    let binary = |sym: &str, a: &Formula, b: &Formula, out: &mut String| {
        operand(a, out);
        out.push(' ');
        out.push_str(sym);
        out.push(' ');
        operand(b, out);
    };
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(p) => out.push_str(p),
        Formula::Not(a) => unary("!", a, out),
        Formula::Next(a) => unary("X", a, out),
        Formula::StrongNext(a) => unary("X[!]", a, out),
        Formula::Finally(a) => unary("F", a, out),
        Formula::Globally(a) => unary("G", a, out),
        Formula::And(a, b) => binary(j.and, a, b, out),
        Formula::Or(a, b) => binary(j.or, a, b, out),
        Formula::Implies(a, b) => binary("->", a, b, out),
        Formula::Equiv(a, b) => binary("<->", a, b, out),
        Formula::Until(a, b) => binary("U", a, b, out),
        Formula::Release(a, b) => binary("R", a, b, out),
        Formula::WeakUntil(a, b) => binary("W", a, b, out),
    }
}

/// Single-line formula for LTLf/LTL consumers.
pub fn write_flat_formula(result: &CompositionResult, dialect: Dialect) -> Result<String, ExportError> {
    flat_formula(&result.formula, dialect)
}

pub fn flat_formula(f: &Formula, dialect: Dialect) -> Result<String, ExportError> {
    if dialect == Dialect::Infinite && f.contains_strong_next() {
        return Err(ExportError::StrongNextInInfinite);
    }
    let mut out = String::new();
    render(f, FLAT, &mut out);
    Ok(out)
}

/// A formula as one fully parenthesized basic-format expression.
pub fn basic_formula(f: &Formula) -> String {
    let mut out = String::from("(");
    render(f, TLSF, &mut out);
    out.push(')');
    out
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn write_info(out: &mut String, info: &Info) {
    out.push_str("INFO {\n");
    let _ = writeln!(out, "  TITLE:       {}", quote(&info.title));
    let _ = writeln!(out, "  DESCRIPTION: {}", quote(&info.description));
    let _ = writeln!(out, "  SEMANTICS:   {}", info.semantics);
    let _ = writeln!(out, "  TARGET:      {}", info.target);
    if !info.tags.is_empty() {
        let tags: Vec<String> = info.tags.iter().map(|t| quote(t)).collect();
        let _ = writeln!(out, "  TAGS:        {}", tags.join(", "));
    }
    out.push_str("}\n");
}

/// `  NAME {` + one `item;` per line + `  }`.
fn write_block(out: &mut String, indent: &str, name: &str, items: &[String]) {
    let _ = writeln!(out, "{indent}{name} {{");
    for item in items {
        let _ = writeln!(out, "{indent}  {item};");
    }
    let _ = writeln!(out, "{indent}}}");
}

/// Basic-format TLSF with buses flattened and every expression parenthesized.
pub fn write_basic_tlsf(spec: &ElaboratedSpec) -> String {
    let info = Info {
        title: spec.title.clone(),
        description: spec.description.clone(),
        semantics: spec.semantics,
        target: spec.target,
        tags: spec.tags.clone(),
    };
    let mut out = String::new();
    write_info(&mut out, &info);
    out.push_str("\nMAIN {\n");
    write_block(&mut out, "  ", "INPUTS", &spec.inputs);
    out.push('\n');
    write_block(&mut out, "  ", "OUTPUTS", &spec.outputs);
    for section in Section::ALL {
        let items = spec.buckets.get(section);
        if items.is_empty() {
            continue;
        }
        let lines: Vec<String> = items.iter().map(basic_formula).collect();
        out.push('\n');
        write_block(&mut out, "  ", section.keyword(), &lines);
    }
    out.push_str("}\n");
    out
}

/// Full-format TLSF that parses back to a structurally equal specification.
pub fn write_full_tlsf(spec: &Specification) -> String {
    let mut out = String::new();
    write_info(&mut out, &spec.info);
    if let Some(global) = &spec.global {
        out.push_str("\nGLOBAL {\n");
        let params: Vec<String> = global
            .parameters
            .iter()
            .map(|p| format!("{} = {}", p.name, full_expr(&p.value)))
            .collect();
        write_block(&mut out, "  ", "PARAMETERS", &params);
        out.push('\n');
        let defs: Vec<String> = global.definitions.iter().map(definition).collect();
        write_block(&mut out, "  ", "DEFINITIONS", &defs);
        out.push_str("}\n");
    }
    out.push_str("\nMAIN {\n");
    let signals = |decls: &[SignalDecl]| -> Vec<String> {
        decls
            .iter()
            .map(|d| match &d.width {
                SignalWidth::Single => d.name.clone(),
                SignalWidth::Sized(w) => format!("{}[{}]", d.name, full_expr(w)),
                SignalWidth::Enum(ty) => format!("{ty} {}", d.name),
            })
            .collect()
    };
    write_block(&mut out, "  ", "INPUTS", &signals(&spec.main_.inputs));
    out.push('\n');
    write_block(&mut out, "  ", "OUTPUTS", &signals(&spec.main_.outputs));
    for section in Section::ALL {
        let items = spec.main_.sections.get(section);
        if items.is_empty() {
            continue;
        }
        let lines: Vec<String> = items.iter().map(full_expr).collect();
        out.push('\n');
        write_block(&mut out, "  ", section.keyword(), &lines);
    }
    out.push_str("}\n");
    out
}

fn definition(def: &Definition) -> String {
    match def {
        Definition::Enum(e) => {
            let mut s = format!("enum {} =", e.name);
            for (id, patterns) in &e.values {
                let ps: Vec<String> = patterns.iter().map(|p| p.to_string()).collect();
                let _ = write!(s, "\n      {id}: {}", ps.join(", "));
            }
            s
        }
        Definition::Function(f) => format!("{}({}) ={}", f.name, f.params.join(", "), cases(&f.cases)),
        Definition::Binding { name, cases: cs } => format!("{name} ={}", cases(cs)),
    }
}

fn cases(cs: &[Case]) -> String {
    if let [Case {
        guard: Guard::Always,
        body,
    }] = cs
    {
        return format!(" {}", full_expr(body));
    }
    let mut s = String::new();
    for case in cs {
        s.push_str("\n      ");
        s.push_str(&case_text(case));
    }
    s
}

fn case_text(case: &Case) -> String {
    let body = wrap(&case.body);
    match &case.guard {
        Guard::Always => body,
        Guard::Otherwise => format!("otherwise : {body}"),
        Guard::Cond(g) => format!("{} : {body}", wrap(g)),
        Guard::Match { subject, pattern } => format!("{} ~ {} : {body}", wrap(subject), wrap(pattern)),
    }
}

fn is_primary(e: &Expr) -> bool {
    matches!(
        e.kind,
        ExprKind::Num(_)
            | ExprKind::Bool(_)
            | ExprKind::Signal(_)
            | ExprKind::Ident(_)
            | ExprKind::BusAccess { .. }
            | ExprKind::Call { .. }
            | ExprKind::SetLiteral(_)
            | ExprKind::SetRange { .. }
    )
}

fn wrap(e: &Expr) -> String {
    if is_primary(e) {
        full_expr(e)
    } else {
        format!("({})", full_expr(e))
    }
}

/// Full-format expression; every non-primary operand is parenthesized.
pub fn full_expr(e: &Expr) -> String {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || full_expr_inner(e))
}

fn full_expr_inner(e: &Expr) -> String {
    let list = |items: &[Expr]| items.iter().map(full_expr).collect::<Vec<_>>().join(", ");
    match &e.kind {
        ExprKind::Num(n) => n.to_string(),
        ExprKind::Bool(b) => b.to_string(),
        ExprKind::Signal(name) | ExprKind::Ident(name) => name.clone(),
        ExprKind::BusAccess { bus, index } => format!("{bus}[{}]", full_expr(index)),
        ExprKind::Call { name, args } => format!("{name}({})", list(args)),
        ExprKind::SetLiteral(items) => format!("{{{}}}", list(items)),
        ExprKind::SetRange { start, step, end } => {
            format!("{{{}, {} .. {}}}", full_expr(start), full_expr(step), full_expr(end))
        }
        ExprKind::Unary { op, operand } => format!("{} {}", op.symbol(), wrap(operand)),
        ExprKind::Binary { op, lhs, rhs } => format!("{} {} {}", wrap(lhs), op.symbol(), wrap(rhs)),
        ExprKind::BigOp { op, binders, body } => {
            let bs: Vec<String> = binders
                .iter()
                .map(|b| match b {
                    Binder::Member { name, set } => format!("{name} IN {}", wrap(set)),
                    Binder::Bounded {
                        lower,
                        lower_kind,
                        name,
                        upper_kind,
                        upper,
                    } => {
                        let k = |k: &BoundKind| if *k == BoundKind::Strict { "<" } else { "<=" };
                        format!("{} {} {name} {} {}", wrap(lower), k(lower_kind), k(upper_kind), wrap(upper))
                    }
                })
                .collect();
            format!("{}[{}] {}", op.symbol(), bs.join(", "), wrap(body))
        }
        ExprKind::EnumCompare { polarity, bus, value } => {
            let op = if *polarity == Polarity::Eq { "==" } else { "!=" };
            format!("{bus} {op} {value}")
        }
        ExprKind::Guarded(cs) => cs.iter().map(case_text).collect::<Vec<_>>().join(" "),
        ExprKind::Sugar { kind, strength, body } => {
            let bang = if *strength == Strength::Strong { "!" } else { "" };
            let head = match kind {
                SugarKind::NextStack(n) => format!("X[{bang}{}]", wrap(n)),
                SugarKind::FinallyRange(n, m) => format!("F[{bang}{}:{}]", wrap(n), wrap(m)),
                SugarKind::GloballyRange(n, m) => format!("G[{bang}{}:{}]", wrap(n), wrap(m)),
            };
            format!("{head} {}", wrap(body))
        }
    }
}

/// Deterministic JSON; spans are never serialized.
pub fn write_ast_dump<T: Serialize>(value: &T) -> Result<String, ExportError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| ExportError::Serialize(e.to_string()))
}

/// Folds `true`/`false` through every operator. Nothing else is rewritten.
pub fn simplify(f: &Formula) -> Formula {
    stacker::maybe_grow(64 * 1024, 1024 * 1024, || simplify_inner(f))
}

fn simplify_inner(f: &Formula) -> Formula {
    use Formula::*;
    let not = |a: Formula| match a {
        True => False,
        False => True,
        a => Formula::not(a),
    };
    match f {
        True | False | Atom(_) => f.clone(),
        Not(a) => not(simplify(a)),
        And(a, b) => match (simplify(a), simplify(b)) {
            (False, _) | (_, False) => False,
            (True, x) | (x, True) => x,
            (a, b) => Formula::and(a, b),
        },
        Or(a, b) => match (simplify(a), simplify(b)) {
            (True, _) | (_, True) => True,
            (False, x) | (x, False) => x,
            (a, b) => Formula::or(a, b),
        },
        Implies(a, b) => match (simplify(a), simplify(b)) {
            (False, _) | (_, True) => True,
            (True, x) => x,
            (x, False) => not(x),
            (a, b) => Formula::implies(a, b),
        },
        Equiv(a, b) => match (simplify(a), simplify(b)) {
            (True, x) | (x, True) => x,
            (False, x) | (x, False) => not(x),
            (a, b) => Formula::equiv(a, b),
        },
        Next(a) => match simplify(a) {
            True => True,
            a => Formula::next(a),
        },
        StrongNext(a) => match simplify(a) {
            False => False,
            a => Formula::strong_next(a),
        },
        Finally(a) => match simplify(a) {
            c @ (True | False) => c,
            a => Formula::finally(a),
        },
        Globally(a) => match simplify(a) {
            c @ (True | False) => c,
            a => Formula::globally(a),
        },
        Until(a, b) => match (simplify(a), simplify(b)) {
            (_, c @ (True | False)) => c,
            (False, b) => b,
            (a, b) => Formula::until(a, b),
        },
        WeakUntil(a, b) => match (simplify(a), simplify(b)) {
            (_, True) | (True, _) => True,
            (False, b) => b,
            (a, b) => Formula::weak_until(a, b),
        },
        Release(a, b) => match (simplify(a), simplify(b)) {
            (_, c @ (True | False)) => c,
            (True, b) => b,
            (a, b) => Formula::release(a, b),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elaborate::{elaborate, ElabOptions};
    use crate::parser::{parse_expression_str, parse_spec, parse_spec_with, Mode, ParseOptions};
    use crate::semantics::compose;

    fn a() -> Formula {
        Formula::atom("a")
    }

    #[test]
    fn flat_mapping() {
        let f = Formula::and(a(), Formula::atom("b"));
        assert_eq!(flat_formula(&f, Dialect::Infinite).unwrap(), "(a) & (b)");
        let x = Formula::strong_next(a());
        assert_eq!(flat_formula(&x, Dialect::Finite).unwrap(), "X[!] (a)");
        assert_eq!(flat_formula(&x, Dialect::Infinite), Err(ExportError::StrongNextInInfinite));
        assert_eq!(basic_formula(&x), "(X[!] (a))");
    }

    #[test]
    fn trivial_composition() {
        let src = r#"INFO { TITLE: "t" DESCRIPTION: "d" SEMANTICS: Mealy TARGET: Mealy }
            MAIN { INPUTS { r; } OUTPUTS { g; } }"#;
        let e = elaborate(&parse_spec(src).unwrap(), &ElabOptions::default()).unwrap();
        let c = compose(&e).unwrap();
        assert_eq!(
            write_flat_formula(&c, Dialect::Infinite).unwrap(),
            "(true) -> ((true) & (((G (true)) & (true)) -> ((G (true)) & (true))))"
        );
        assert_eq!(
            flat_formula(&simplify(&c.formula), Dialect::Infinite).unwrap(),
            "true"
        );
    }

    #[test]
    fn flat_reparses() {
        let f = Formula::until(Formula::or(a(), Formula::not(Formula::atom("g[0]"))), Formula::True);
        let text = flat_formula(&f, Dialect::Finite).unwrap();
        let back = Formula::from_expr(&parse_expression_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn basic_round_trip() {
        let src = r#"INFO { TITLE: "say \"hi\"" DESCRIPTION: "d" SEMANTICS: Mealy,Finite TARGET: Mealy TAGS: "x" }
            MAIN { INPUTS { r[2]; } OUTPUTS { g[2]; }
                   GUARANTEE { &&[0 <= i < 2] G (r[i] -> F g[i]); X[!] g[0]; } }"#;
        let e = elaborate(&parse_spec(src).unwrap(), &ElabOptions::default()).unwrap();
        let text = write_basic_tlsf(&e);
        assert!(text.contains("(G ((r[0]) -> (F (g[0]))))"));
        assert!(text.contains("(X[!] (g[0]))"));
        assert!(!text.contains("ASSUME"));
        assert!(text.lines().all(|l| l == l.trim_end()));
        let back = parse_spec_with(&text, ParseOptions { mode: Mode::Basic }).unwrap();
        let again = elaborate(&back, &ElabOptions::default()).unwrap();
        assert_eq!(again, e);
        assert_eq!(write_basic_tlsf(&again), text);
    }

    #[test]
    fn full_printer_fixpoint() {
        let src = r#"INFO { TITLE: "t" DESCRIPTION: "d" SEMANTICS: Mealy,Finite TARGET: Mealy TAGS: a, b }
            GLOBAL {
              PARAMETERS { n = 2; }
              DEFINITIONS {
                enum E = A: 0* B: 10, 11;
                bit(v,i) = i <= 0 : v % 2 otherwise : bit(v/2,i-1);
                two = 2;
                neg(f) = f ~ !x : x otherwise : !f;
              }
            }
            MAIN {
              INPUTS { r[n]; E e; }
              OUTPUTS { g[SIZE {1, 2}]; }
              REQUIRE { e == A; }
              GUARANTEE { (+)[i IN {0, 1 .. n - 1}] {i} == {0, 1}; G[!1:2] r[0] U X[2] g[bit(2,1)]; }
            }"#;
        let spec = parse_spec(src).unwrap();
        let text = write_full_tlsf(&spec);
        let back = parse_spec(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(write_full_tlsf(&back), text);
    }

    #[test]
    fn dump_ignores_spans() {
        let a = parse_expression_str("a && b").unwrap();
        let b = parse_expression_str("a   &&\n b").unwrap();
        assert_eq!(write_ast_dump(&a).unwrap(), write_ast_dump(&b).unwrap());
    }
}
