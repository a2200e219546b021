//! Syntax tree for TLSF specifications.
//!
//! A single [`Expr`] type covers numeric, set, boolean and temporal
//! expressions; the elaborator assigns meaning by evaluating it. Source spans
//! travel with every node but never take part in equality.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, Default, Eq, PartialEq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    /// 1-based line and column of the span start.
    pub fn line_col(&self, source: &str) -> (usize, usize) {
        let upto = &source[..self.start.min(source.len())];
        let line = upto.matches('\n').count() + 1;
        let col = match upto.rfind('\n') {
            Some(nl) => upto[nl + 1..].chars().count() + 1,
            None => upto.chars().count() + 1,
        };
        (line, col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UnaryOp {
    Not,
    Next,
    StrongNext,
    Finally,
    Globally,
    /// `|S|` or `SIZE S`
    Size,
    Min,
    Max,
    SizeOf,
}

impl UnaryOp {
    /// Binding level from the operator table (smaller binds tighter).
    pub fn level(self) -> u8 {
        match self {
            UnaryOp::Size | UnaryOp::Min | UnaryOp::Max | UnaryOp::SizeOf => 1,
            _ => 11,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Next => "X",
            UnaryOp::StrongNext => "X[!]",
            UnaryOp::Finally => "F",
            UnaryOp::Globally => "G",
            UnaryOp::Size => "SIZE",
            UnaryOp::Min => "MIN",
            UnaryOp::Max => "MAX",
            UnaryOp::SizeOf => "SIZEOF",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BinaryOp {
    Mul,
    Div,
    Mod,
    Add,
    Sub,
    SetMinus,
    Intersect,
    Union,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    In,
    And,
    Or,
    Implies,
    Equiv,
    WeakUntil,
    Until,
    Release,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assoc {
    Left,
    Right,
}

impl BinaryOp {
    /// Binding level from the operator table (smaller binds tighter).
    pub fn level(self) -> u8 {
        use BinaryOp::*;
        match self {
            Mul => 2,
            Div | Mod => 3,
            Add | Sub => 4,
            SetMinus => 6,
            Intersect => 7,
            Union => 8,
            Eq | Neq | Lt | Le | Gt | Ge => 9,
            In => 10,
            And => 12,
            Or => 13,
            Implies | Equiv => 14,
            WeakUntil => 15,
            Until => 16,
            Release => 17,
        }
    }

    pub fn assoc(self) -> Assoc {
        use BinaryOp::*;
        match self {
            Div | Mod | SetMinus | Implies | Equiv | WeakUntil | Until => Assoc::Right,
            _ => Assoc::Left,
        }
    }

    pub fn symbol(self) -> &'static str {
        use BinaryOp::*;
        match self {
            Mul => "*",
            Div => "/",
            Mod => "%",
            Add => "+",
            Sub => "-",
            SetMinus => "(\\)",
            Intersect => "(*)",
            Union => "(+)",
            Eq => "==",
            Neq => "!=",
            Lt => "<",
            Le => "<=",
            Gt => ">",
            Ge => ">=",
            In => "IN",
            And => "&&",
            Or => "||",
            Implies => "->",
            Equiv => "<->",
            WeakUntil => "W",
            Until => "U",
            Release => "R",
        }
    }
}

/// Operators usable in big-operator notation `op[binders] body`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BigOpKind {
    Sum,
    Product,
    Union,
    Intersect,
    And,
    Or,
}

impl BigOpKind {
    pub fn level(self) -> u8 {
        match self {
            BigOpKind::Sum | BigOpKind::Product => 1,
            BigOpKind::Union | BigOpKind::Intersect => 5,
            BigOpKind::And | BigOpKind::Or => 11,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BigOpKind::Sum => "+",
            BigOpKind::Product => "*",
            BigOpKind::Union => "(+)",
            BigOpKind::Intersect => "(*)",
            BigOpKind::And => "&&",
            BigOpKind::Or => "||",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    /// `<`
    Strict,
    /// `<=`
    Inclusive,
}

/// One binder of a big operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Binder {
    /// `name IN set`
    Member { name: String, set: Expr },
    /// `lower <= name < upper` and its strict/inclusive variants
    Bounded {
        lower: Expr,
        lower_kind: BoundKind,
        name: String,
        upper_kind: BoundKind,
        upper: Expr,
    },
}

impl Binder {
    pub fn name(&self) -> &str {
        match self {
            Binder::Member { name, .. } | Binder::Bounded { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Guard {
    /// No guard written; behaves like `true`.
    Always,
    Cond(Expr),
    /// `subject ~ pattern`
    Match { subject: Expr, pattern: Expr },
    Otherwise,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub guard: Guard,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SugarKind {
    /// `X[n]`
    NextStack(Box<Expr>),
    /// `F[n:m]`
    FinallyRange(Box<Expr>, Box<Expr>),
    /// `G[n:m]`
    GloballyRange(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strength {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Polarity {
    Eq,
    Neq,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ExprKind {
    Num(#[serde(serialize_with = "ser_biguint")] BigUint),
    Bool(bool),
    Signal(String),
    /// Bus element `bus[index]`; `bus` may also name a bus-valued parameter.
    BusAccess { bus: String, index: Box<Expr> },
    Ident(String),
    Call { name: String, args: Vec<Expr> },
    SetLiteral(Vec<Expr>),
    /// `{start, step .. end}`
    SetRange {
        start: Box<Expr>,
        step: Box<Expr>,
        end: Box<Expr>,
    },
    Unary { op: UnaryOp, operand: Box<Expr> },
    Binary { op: BinaryOp, lhs: Box<Expr>, rhs: Box<Expr> },
    BigOp {
        op: BigOpKind,
        binders: Vec<Binder>,
        body: Box<Expr>,
    },
    EnumCompare {
        polarity: Polarity,
        bus: String,
        value: String,
    },
    Guarded(Vec<Case>),
    Sugar {
        kind: SugarKind,
        strength: Strength,
        body: Box<Expr>,
    },
}

fn ser_biguint<S: serde::Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// An expression node with its source span.
///
/// Equality is structural: spans are ignored, operand order is not.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct Expr {
    pub kind: ExprKind,
    #[serde(skip)]
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Node without source location, for trees built in code.
    pub fn synth(kind: ExprKind) -> Self {
        Expr::new(kind, Span::default())
    }

    pub fn num(n: u64) -> Self {
        Expr::synth(ExprKind::Num(BigUint::from(n)))
    }

    pub fn ident(name: &str) -> Self {
        Expr::synth(ExprKind::Ident(name.to_string()))
    }

    pub fn signal(name: &str) -> Self {
        Expr::synth(ExprKind::Signal(name.to_string()))
    }

    pub fn unary(op: UnaryOp, operand: Expr) -> Self {
        Expr::synth(ExprKind::Unary {
            op,
            operand: Box::new(operand),
        })
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::synth(ExprKind::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        })
    }

    /// Direct children in source order.
    pub fn children(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        match &self.kind {
            ExprKind::Num(_)
            | ExprKind::Bool(_)
            | ExprKind::Signal(_)
            | ExprKind::Ident(_)
            | ExprKind::EnumCompare { .. } => {}
            ExprKind::BusAccess { index, .. } => out.push(&**index),
            ExprKind::Call { args, .. } => out.extend(args.iter()),
            ExprKind::SetLiteral(items) => out.extend(items.iter()),
            ExprKind::SetRange { start, step, end } => {
                out.extend([&**start, &**step, &**end]);
            }
            ExprKind::Unary { operand, .. } => out.push(operand),
            ExprKind::Binary { lhs, rhs, .. } => out.extend([&**lhs, &**rhs]),
            ExprKind::BigOp { binders, body, .. } => {
                for b in binders {
                    match b {
                        Binder::Member { set, .. } => out.push(set),
                        Binder::Bounded { lower, upper, .. } => out.extend([lower, upper]),
                    }
                }
                out.push(body);
            }
            ExprKind::Guarded(cases) => {
                for case in cases {
                    match &case.guard {
                        Guard::Cond(g) => out.push(g),
                        Guard::Match { subject, pattern } => out.extend([subject, pattern]),
                        Guard::Always | Guard::Otherwise => {}
                    }
                    out.push(&case.body);
                }
            }
            ExprKind::Sugar { kind, body, .. } => {
                match kind {
                    SugarKind::NextStack(n) => out.push(n),
                    SugarKind::FinallyRange(n, m) | SugarKind::GloballyRange(n, m) => {
                        out.extend([&**n, &**m])
                    }
                }
                out.push(body);
            }
        }
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        for child in self.children() {
            child.walk(f);
        }
    }

    /// True for nodes that print without surrounding parentheses.
    pub fn is_primary(&self) -> bool {
        matches!(
            self.kind,
            ExprKind::Num(_)
                | ExprKind::Bool(_)
                | ExprKind::Signal(_)
                | ExprKind::Ident(_)
                | ExprKind::BusAccess { .. }
                | ExprKind::Call { .. }
                | ExprKind::SetLiteral(_)
                | ExprKind::SetRange { .. }
        ) || matches!(
            self.kind,
            ExprKind::Unary {
                op: UnaryOp::Size,
                ..
            }
        )
    }
}

/// Node-for-node equality, spans ignored, no commutative normalization.
pub fn structurally_equal(a: &Expr, b: &Expr) -> bool {
    a == b
}

/// Replaces identifier references by the bound expressions.
///
/// Only [`ExprKind::Ident`] nodes are affected; signals, bus names and call
/// targets are left alone. Binder names are assumed fresh, so no capture
/// handling is done.
pub fn substitute(expr: &Expr, binding: &HashMap<String, Expr>) -> Expr {
    let sub = |e: &Expr| substitute(e, binding);
    let sub_box = |e: &Expr| Box::new(substitute(e, binding));
    let kind = match &expr.kind {
        ExprKind::Ident(name) => {
            if let Some(replacement) = binding.get(name) {
                return replacement.clone();
            }
            ExprKind::Ident(name.clone())
        }
        ExprKind::Num(_)
        | ExprKind::Bool(_)
        | ExprKind::Signal(_)
        | ExprKind::EnumCompare { .. } => expr.kind.clone(),
        ExprKind::BusAccess { bus, index } => ExprKind::BusAccess {
            bus: bus.clone(),
            index: sub_box(index),
        },
        ExprKind::Call { name, args } => ExprKind::Call {
            name: name.clone(),
            args: args.iter().map(sub).collect(),
        },
        ExprKind::SetLiteral(items) => ExprKind::SetLiteral(items.iter().map(sub).collect()),
        ExprKind::SetRange { start, step, end } => ExprKind::SetRange {
            start: sub_box(start),
            step: sub_box(step),
            end: sub_box(end),
        },
        ExprKind::Unary { op, operand } => ExprKind::Unary {
            op: *op,
            operand: sub_box(operand),
        },
        ExprKind::Binary { op, lhs, rhs } => ExprKind::Binary {
            op: *op,
            lhs: sub_box(lhs),
            rhs: sub_box(rhs),
        },
        ExprKind::BigOp { op, binders, body } => ExprKind::BigOp {
            op: *op,
            binders: binders
                .iter()
                .map(|b| match b {
                    Binder::Member { name, set } => Binder::Member {
                        name: name.clone(),
                        set: sub(set),
                    },
                    Binder::Bounded {
                        lower,
                        lower_kind,
                        name,
                        upper_kind,
                        upper,
                    } => Binder::Bounded {
                        lower: sub(lower),
                        lower_kind: *lower_kind,
                        name: name.clone(),
                        upper_kind: *upper_kind,
                        upper: sub(upper),
                    },
                })
                .collect(),
            body: sub_box(body),
        },
        ExprKind::Guarded(cases) => ExprKind::Guarded(
            cases
                .iter()
                .map(|c| Case {
                    guard: match &c.guard {
                        Guard::Always => Guard::Always,
                        Guard::Otherwise => Guard::Otherwise,
                        Guard::Cond(g) => Guard::Cond(sub(g)),
                        Guard::Match { subject, pattern } => Guard::Match {
                            subject: sub(subject),
                            pattern: pattern.clone(),
                        },
                    },
                    body: sub(&c.body),
                })
                .collect(),
        ),
        ExprKind::Sugar {
            kind,
            strength,
            body,
        } => ExprKind::Sugar {
            kind: match kind {
                SugarKind::NextStack(n) => SugarKind::NextStack(sub_box(n)),
                SugarKind::FinallyRange(n, m) => SugarKind::FinallyRange(sub_box(n), sub_box(m)),
                SugarKind::GloballyRange(n, m) => SugarKind::GloballyRange(sub_box(n), sub_box(m)),
            },
            strength: *strength,
            body: sub_box(body),
        },
    };
    Expr::new(kind, expr.span)
}

// ---------------------------------------------------------------------------
// Specification record

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    Mealy,
    Moore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    Standard,
    Strict,
    Finite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Semantics {
    pub model: Model,
    pub variant: Variant,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Mealy => "Mealy",
            Model::Moore => "Moore",
        })
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::Standard => write!(f, "{}", self.model),
            Variant::Strict => write!(f, "{},Strict", self.model),
            Variant::Finite => write!(f, "{},Finite", self.model),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Info {
    pub title: String,
    pub description: String,
    pub semantics: Semantics,
    pub target: Model,
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Bit {
    Zero,
    One,
    Any,
}

/// One `0`/`1`/`*` valuation pattern of an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BitPattern(pub Vec<Bit>);

impl fmt::Display for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in &self.0 {
            f.write_str(match bit {
                Bit::Zero => "0",
                Bit::One => "1",
                Bit::Any => "*",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumDecl {
    pub name: String,
    /// `(identifier, patterns)` in declaration order.
    pub values: Vec<(String, Vec<BitPattern>)>,
    #[serde(skip)]
    pub span: Span,
}

impl PartialEq for EnumDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.values == other.values
    }
}

impl EnumDecl {
    /// Pattern length, taken from the first pattern.
    pub fn width(&self) -> usize {
        self.values
            .iter()
            .flat_map(|(_, ps)| ps.first())
            .map(|p| p.0.len())
            .next()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionDecl {
    pub name: String,
    pub params: Vec<String>,
    pub cases: Vec<Case>,
    #[serde(skip)]
    pub span: Span,
}

impl PartialEq for FunctionDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.params == other.params && self.cases == other.cases
    }
}

impl FunctionDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Definition {
    Function(FunctionDecl),
    Enum(EnumDecl),
    /// `name = cases`; a plain binding is a single unguarded case.
    Binding {
        name: String,
        cases: Vec<Case>,
    },
}

impl Definition {
    pub fn name(&self) -> &str {
        match self {
            Definition::Function(f) => &f.name,
            Definition::Enum(e) => &e.name,
            Definition::Binding { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameter {
    pub name: String,
    pub value: Expr,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Global {
    pub parameters: Vec<Parameter>,
    pub definitions: Vec<Definition>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SignalWidth {
    Single,
    Sized(Expr),
    Enum(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignalDecl {
    pub name: String,
    pub width: SignalWidth,
    pub direction: Direction,
    #[serde(skip)]
    pub span: Span,
}

impl PartialEq for SignalDecl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.width == other.width && self.direction == other.direction
    }
}

/// The six property sections of `MAIN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Section {
    Initially,
    Preset,
    Require,
    Assert,
    Assume,
    Guarantee,
}

impl Section {
    pub const ALL: [Section; 6] = [
        Section::Initially,
        Section::Preset,
        Section::Require,
        Section::Assert,
        Section::Assume,
        Section::Guarantee,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Section::Initially => "INITIALLY",
            Section::Preset => "PRESET",
            Section::Require => "REQUIRE",
            Section::Assert => "ASSERT",
            Section::Assume => "ASSUME",
            Section::Guarantee => "GUARANTEE",
        }
    }
}

/// Per-section storage, indexed by [`Section`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Sections<T> {
    pub initially: Vec<T>,
    pub preset: Vec<T>,
    pub require: Vec<T>,
    #[serde(rename = "assert")]
    pub assert_: Vec<T>,
    pub assume: Vec<T>,
    pub guarantee: Vec<T>,
}

impl<T> Sections<T> {
    pub fn new() -> Self {
        Sections {
            initially: Vec::new(),
            preset: Vec::new(),
            require: Vec::new(),
            assert_: Vec::new(),
            assume: Vec::new(),
            guarantee: Vec::new(),
        }
    }

    pub fn get(&self, section: Section) -> &Vec<T> {
        match section {
            Section::Initially => &self.initially,
            Section::Preset => &self.preset,
            Section::Require => &self.require,
            Section::Assert => &self.assert_,
            Section::Assume => &self.assume,
            Section::Guarantee => &self.guarantee,
        }
    }

    pub fn get_mut(&mut self, section: Section) -> &mut Vec<T> {
        match section {
            Section::Initially => &mut self.initially,
            Section::Preset => &mut self.preset,
            Section::Require => &mut self.require,
            Section::Assert => &mut self.assert_,
            Section::Assume => &mut self.assume,
            Section::Guarantee => &mut self.guarantee,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Main {
    pub inputs: Vec<SignalDecl>,
    pub outputs: Vec<SignalDecl>,
    pub sections: Sections<Expr>,
}

/// A parsed TLSF file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Specification {
    pub info: Info,
    pub global: Option<Global>,
    #[serde(rename = "main")]
    pub main_: Main,
}

impl Specification {
    pub fn parameters(&self) -> &[Parameter] {
        self.global.as_ref().map_or(&[], |g| &g.parameters)
    }

    pub fn definitions(&self) -> &[Definition] {
        self.global.as_ref().map_or(&[], |g| &g.definitions)
    }

    pub fn signals(&self) -> impl Iterator<Item = &SignalDecl> {
        self.main_.inputs.iter().chain(self.main_.outputs.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and(a: Expr, b: Expr) -> Expr {
        Expr::binary(BinaryOp::And, a, b)
    }

    #[test]
    fn substitute_direct_hit() {
        let binding = HashMap::from([("i".to_string(), Expr::num(3))]);
        assert_eq!(substitute(&Expr::ident("i"), &binding), Expr::num(3));
    }

    #[test]
    fn substitute_recurses() {
        let binding = HashMap::from([("i".to_string(), Expr::num(3))]);
        let e = Expr::binary(BinaryOp::Add, Expr::ident("i"), Expr::num(1));
        let expected = Expr::binary(BinaryOp::Add, Expr::num(3), Expr::num(1));
        assert_eq!(substitute(&e, &binding), expected);
    }

    #[test]
    fn substitute_leaves_signals() {
        let binding = HashMap::from([("i".to_string(), Expr::num(3))]);
        assert_eq!(substitute(&Expr::signal("i"), &binding), Expr::signal("i"));
    }

    #[test]
    fn equality_is_order_sensitive() {
        let ab = and(Expr::signal("a"), Expr::signal("b"));
        let ba = and(Expr::signal("b"), Expr::signal("a"));
        assert!(structurally_equal(&ab, &ab.clone()));
        assert!(!structurally_equal(&ab, &ba));
        let weak = Expr::unary(UnaryOp::Next, Expr::signal("a"));
        let strong = Expr::unary(UnaryOp::StrongNext, Expr::signal("a"));
        assert!(!structurally_equal(&weak, &strong));
    }

    #[test]
    fn spans_do_not_matter() {
        let a = Expr::new(ExprKind::Ident("x".into()), Span::new(0, 1));
        let b = Expr::new(ExprKind::Ident("x".into()), Span::new(10, 11));
        assert!(structurally_equal(&a, &b));
    }

    #[test]
    fn line_col() {
        let src = "ab\ncd\nef";
        assert_eq!(Span::new(4, 5).line_col(src), (2, 2));
        assert_eq!(Span::new(0, 1).line_col(src), (1, 1));
    }
}
