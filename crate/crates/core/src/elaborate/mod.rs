//! Evaluation of the full-format layer down to plain formulas.
//!
//! An [`Environment`] holds parameters, definitions, enumerations and
//! signals of one specification. Evaluating an expression yields a
//! [`Value`]; property sections must evaluate to booleans or formulas, and
//! [`elaborate`] collects them into an [`ElaboratedSpec`].

mod enums;
mod pattern;
mod sets;
mod sugar;
mod value;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub use enums::{
    covered_count, desugar_enum_compare, enum_implicit_constraint, overlaps, pattern_formula,
    validate_enum, EnumTable,
};
pub use pattern::pattern_match;
pub use sets::{bounded_range, eval_set_range};
pub use sugar::{desugar_temporal, TemporalSugar};
pub use value::{make_set, Value};

use crate::ast::*;
use crate::diagnostic::Diagnostic;
use crate::formula::Formula;

pub const DEFAULT_RECURSION_LIMIT: usize = 10_000;

/// Largest step count accepted in `X[n]`, `F[n:m]` and `G[n:m]`.
const MAX_SUGAR_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ElabError {
    pub message: String,
    pub span: Span,
}

impl ElabError {
    pub fn new(message: impl Into<String>, span: Span) -> Self {
        ElabError {
            message: message.into(),
            span,
        }
    }
}

impl From<ElabError> for Diagnostic {
    fn from(e: ElabError) -> Self {
        Diagnostic::error(e.message, e.span)
    }
}

type EResult<T> = Result<T, ElabError>;

#[derive(Debug, Clone)]
pub struct ElabOptions {
    /// Parameter values that replace the ones written in the file.
    pub overrides: BTreeMap<String, BigUint>,
    /// Maximum nesting of function applications.
    pub recursion_limit: usize,
}

impl Default for ElabOptions {
    fn default() -> Self {
        ElabOptions {
            overrides: BTreeMap::new(),
            recursion_limit: DEFAULT_RECURSION_LIMIT,
        }
    }
}

/// A specification reduced to formulas over atomic signals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElaboratedSpec {
    pub title: String,
    pub description: String,
    pub tags: Vec<String>,
    pub semantics: Semantics,
    pub target: Model,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    /// One formula per written entry, implicit enum constraints last.
    pub buckets: Sections<Formula>,
}

impl ElaboratedSpec {
    pub fn bucket(&self, section: Section) -> Formula {
        Formula::conjunction(self.buckets.get(section).iter().cloned())
    }

    /// INITIALLY
    pub fn theta_e(&self) -> Formula {
        self.bucket(Section::Initially)
    }

    /// PRESET
    pub fn theta_s(&self) -> Formula {
        self.bucket(Section::Preset)
    }

    /// REQUIRE
    pub fn psi_e(&self) -> Formula {
        self.bucket(Section::Require)
    }

    /// ASSERT
    pub fn psi_s(&self) -> Formula {
        self.bucket(Section::Assert)
    }

    /// ASSUME
    pub fn phi_e(&self) -> Formula {
        self.bucket(Section::Assume)
    }

    /// GUARANTEE
    pub fn phi_s(&self) -> Formula {
        self.bucket(Section::Guarantee)
    }
}

/// Coarse result kinds used to check that all cases of a definition agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Nat,
    Logic,
    Set,
    Unknown,
}

fn infer(e: &Expr) -> Ty {
    use BinaryOp as B;
    match &e.kind {
        ExprKind::Num(_) => Ty::Nat,
        ExprKind::Bool(_) | ExprKind::BusAccess { .. } | ExprKind::EnumCompare { .. } => Ty::Logic,
        ExprKind::Sugar { .. } => Ty::Logic,
        ExprKind::SetLiteral(_) | ExprKind::SetRange { .. } => Ty::Set,
        ExprKind::Unary { op, .. } => match op {
            UnaryOp::Size | UnaryOp::SizeOf | UnaryOp::Min | UnaryOp::Max => Ty::Nat,
            _ => Ty::Logic,
        },
        ExprKind::Binary { op, .. } => match op {
            B::Mul | B::Div | B::Mod | B::Add | B::Sub => Ty::Nat,
            B::SetMinus | B::Intersect | B::Union => Ty::Set,
            _ => Ty::Logic,
        },
        ExprKind::BigOp { op, .. } => match op {
            BigOpKind::Sum | BigOpKind::Product => Ty::Nat,
            BigOpKind::Union | BigOpKind::Intersect => Ty::Set,
            BigOpKind::And | BigOpKind::Or => Ty::Logic,
        },
        ExprKind::Signal(_) | ExprKind::Ident(_) | ExprKind::Call { .. } | ExprKind::Guarded(_) => Ty::Unknown,
    }
}

fn check_case_types(name: &str, cases: &[Case], span: Span) -> EResult<()> {
    let mut seen: Option<(Ty, Span)> = None;
    for case in cases {
        let ty = infer(&case.body);
        if ty == Ty::Unknown {
            continue;
        }
        match seen {
            Some((other, _)) if other != ty => {
                let span = if case.body.span == Span::default() { span } else { case.body.span };
                return Err(ElabError::new(
                    format!("cases of `{name}` return different kinds of values"),
                    span,
                ));
            }
            _ => seen = Some((ty, case.body.span)),
        }
    }
    Ok(())
}

/// Evaluation context for one specification.
pub struct Environment {
    params: HashMap<String, Value>,
    functions: HashMap<String, Rc<FunctionDecl>>,
    bindings: HashMap<String, Rc<Vec<Case>>>,
    binding_cache: HashMap<String, Value>,
    evaluating: Vec<String>,
    enums: EnumTable,
    /// Signal and bus names; single signals map to atoms.
    signals: HashMap<String, Value>,
    locals: Vec<(String, Value)>,
    depth: usize,
    recursion_limit: usize,
    variant: Variant,
}

impl Environment {
    /// Installs enumerations, definitions, parameters and signals.
    pub fn new(spec: &Specification, options: &ElabOptions) -> EResult<Environment> {
        let mut env = Environment {
            params: HashMap::new(),
            functions: HashMap::new(),
            bindings: HashMap::new(),
            binding_cache: HashMap::new(),
            evaluating: Vec::new(),
            enums: EnumTable::default(),
            signals: HashMap::new(),
            locals: Vec::new(),
            depth: 0,
            recursion_limit: options.recursion_limit,
            variant: spec.info.semantics.variant,
        };
        let mut names: HashMap<&str, ()> = HashMap::new();
        for def in spec.definitions() {
            if names.insert(def.name(), ()).is_some() {
                return Err(ElabError::new(
                    format!("`{}` is defined twice", def.name()),
                    def_span(def),
                ));
            }
            match def {
                Definition::Enum(e) => env
                    .enums
                    .insert(e)
                    .map_err(|m| ElabError::new(m, e.span))?,
                Definition::Function(f) => {
                    check_case_types(&f.name, &f.cases, f.span)?;
                    env.functions.insert(f.name.clone(), Rc::new(f.clone()));
                }
                Definition::Binding { name, cases } => {
                    check_case_types(name, cases, def_span(def))?;
                    env.bindings.insert(name.clone(), Rc::new(cases.clone()));
                }
            }
        }
        for name in options.overrides.keys() {
            if !spec.parameters().iter().any(|p| &p.name == name) {
                return Err(ElabError::new(format!("unknown parameter `{name}`"), Span::default()));
            }
        }
        for p in spec.parameters() {
            if names.contains_key(p.name.as_str()) || env.params.contains_key(&p.name) {
                return Err(ElabError::new(
                    format!("parameter `{}` clashes with another global name", p.name),
                    p.value.span,
                ));
            }
            let value = match options.overrides.get(&p.name) {
                Some(v) => v.clone(),
                None => env.eval_numeric(&p.value)?,
            };
            env.params.insert(p.name.clone(), Value::Nat(value));
        }
        for decl in spec.signals() {
            let value = match &decl.width {
                SignalWidth::Single => Value::Formula(Formula::atom(&decl.name)),
                SignalWidth::Sized(e) => {
                    let width = env.eval_numeric(e)?;
                    let width = to_usize(&width, e.span)?;
                    if width == 0 {
                        return Err(ElabError::new(
                            format!("bus `{}` must have a positive width", decl.name),
                            e.span,
                        ));
                    }
                    Value::Bus {
                        name: decl.name.clone(),
                        width,
                    }
                }
                SignalWidth::Enum(ty) => {
                    let e = env.enums.get(ty).ok_or_else(|| {
                        ElabError::new(format!("unknown enumeration `{ty}`"), decl.span)
                    })?;
                    Value::Bus {
                        name: decl.name.clone(),
                        width: e.width(),
                    }
                }
            };
            env.signals.insert(decl.name.clone(), value);
        }
        Ok(env)
    }

    pub fn enums(&self) -> &EnumTable {
        &self.enums
    }

    pub fn parameter(&self, name: &str) -> Option<&Value> {
        self.params.get(name)
    }

    /// Atomic signal names a declaration expands to.
    pub fn expand_signal(&self, name: &str) -> Vec<String> {
        match self.signals.get(name) {
            Some(Value::Bus { name, width }) => (0..*width).map(|k| format!("{name}[{k}]")).collect(),
            Some(_) => vec![name.to_string()],
            None => vec![],
        }
    }

    pub fn eval(&mut self, e: &Expr) -> EResult<Value> {
        stacker::maybe_grow(128 * 1024, 2 * 1024 * 1024, || self.eval_inner(e))
    }

    pub fn eval_numeric(&mut self, e: &Expr) -> EResult<BigUint> {
        match self.eval(e)? {
            Value::Nat(n) => Ok(n),
            other => Err(expected("a number", &other, e.span)),
        }
    }

    pub fn eval_formula(&mut self, e: &Expr) -> EResult<Formula> {
        let v = self.eval(e)?;
        v.as_formula().ok_or_else(|| expected("a formula", &v, e.span))
    }

    fn eval_bool(&mut self, e: &Expr) -> EResult<bool> {
        match self.eval(e)? {
            Value::Bool(b) => Ok(b),
            other => Err(expected("a boolean", &other, e.span)),
        }
    }

    fn eval_set(&mut self, e: &Expr) -> EResult<BTreeSet<Value>> {
        match self.eval(e)? {
            Value::Set(s) => Ok(s),
            other => Err(expected("a set", &other, e.span)),
        }
    }

    fn lookup(&mut self, name: &str, span: Span) -> EResult<Value> {
        if let Some((_, v)) = self.locals.iter().rev().find(|(n, _)| n == name) {
            return Ok(v.clone());
        }
        if let Some(v) = self.params.get(name) {
            return Ok(v.clone());
        }
        if let Some(v) = self.binding_cache.get(name) {
            return Ok(v.clone());
        }
        if let Some(cases) = self.bindings.get(name).cloned() {
            if self.evaluating.iter().any(|n| n == name) {
                return Err(ElabError::new(format!("definition of `{name}` depends on itself"), span));
            }
            self.evaluating.push(name.to_string());
            let saved = std::mem::take(&mut self.locals);
            let result = self.select_case(&cases, span);
            self.locals = saved;
            self.evaluating.pop();
            let v = result?;
            self.binding_cache.insert(name.to_string(), v.clone());
            return Ok(v);
        }
        if self.functions.contains_key(name) {
            return Err(ElabError::new(format!("function `{name}` needs arguments"), span));
        }
        if let Some(v) = self.signals.get(name) {
            return Ok(v.clone());
        }
        if self.enums.is_identifier(name) {
            return Ok(Value::EnumId(name.to_string()));
        }
        Err(ElabError::new(format!("unbound identifier `{name}`"), span))
    }

    /// Picks the first case whose guard holds and evaluates its body.
    fn select_case(&mut self, cases: &[Case], span: Span) -> EResult<Value> {
        for (idx, case) in cases.iter().enumerate() {
            let taken = match &case.guard {
                Guard::Otherwise => {
                    let mut any = false;
                    for later in &cases[idx + 1..] {
                        if self.guard_holds(&later.guard)?.is_some() {
                            any = true;
                            break;
                        }
                    }
                    (!any).then(Vec::new)
                }
                guard => self.guard_holds(guard)?,
            };
            if let Some(bound) = taken {
                let mark = self.locals.len();
                self.locals.extend(bound);
                let result = self.eval(&case.body);
                self.locals.truncate(mark);
                return result;
            }
        }
        Err(ElabError::new("no case applies and there is no `otherwise`", span))
    }

    /// `Some(bindings)` when a non-`otherwise` guard is true.
    fn guard_holds(&mut self, guard: &Guard) -> EResult<Option<Vec<(String, Value)>>> {
        Ok(match guard {
            Guard::Always => Some(Vec::new()),
            Guard::Cond(g) => self.eval_bool(g)?.then(Vec::new),
            Guard::Match { subject, pattern } => {
                let f = self.eval_formula(subject)?;
                pattern_match(&f, pattern).map(|b| {
                    b.into_iter()
                        .map(|(name, f)| (name, Value::Formula(f)))
                        .collect()
                })
            }
            Guard::Otherwise => None,
        })
    }

    /// Applies a declared function to evaluated arguments.
    pub fn apply_function(&mut self, name: &str, args: Vec<Value>, span: Span) -> EResult<Value> {
        let f = self
            .functions
            .get(name)
            .cloned()
            .ok_or_else(|| ElabError::new(format!("unknown function `{name}`"), span))?;
        if f.arity() != args.len() {
            return Err(ElabError::new(
                format!("`{name}` takes {} arguments, got {}", f.arity(), args.len()),
                span,
            ));
        }
        if self.depth >= self.recursion_limit {
            return Err(ElabError::new(
                format!(
                    "recursion limit of {} nested applications exceeded in `{name}`",
                    self.recursion_limit
                ),
                span,
            ));
        }
        let frame = f.params.iter().cloned().zip(args).collect();
        let saved = std::mem::replace(&mut self.locals, frame);
        self.depth += 1;
        let result = self.select_case(&f.cases, span);
        self.depth -= 1;
        self.locals = saved;
        result
    }

    /// Folds `op` over every binder combination, innermost binder first.
    pub fn expand_big_operator(
        &mut self,
        op: BigOpKind,
        binders: &[Binder],
        body: &Expr,
        span: Span,
    ) -> EResult<Value> {
        let Some((first, rest)) = binders.split_first() else {
            return self.eval(body);
        };
        let domain: Vec<Value> = match first {
            Binder::Member { set, .. } => self.eval_set(set)?.into_iter().collect(),
            Binder::Bounded {
                lower,
                lower_kind,
                upper,
                upper_kind,
                ..
            } => {
                let lo = self.eval_numeric(lower)?;
                let hi = self.eval_numeric(upper)?;
                bounded_range(
                    &lo,
                    *lower_kind == BoundKind::Inclusive,
                    &hi,
                    *upper_kind == BoundKind::Inclusive,
                )
                .into_iter()
                .map(Value::Nat)
                .collect()
            }
        };
        let mut parts = Vec::with_capacity(domain.len());
        for v in domain {
            self.locals.push((first.name().to_string(), v));
            let part = self.expand_big_operator(op, rest, body, span);
            self.locals.pop();
            parts.push(part?);
        }
        let binop = match op {
            BigOpKind::Sum => BinaryOp::Add,
            BigOpKind::Product => BinaryOp::Mul,
            BigOpKind::Union => BinaryOp::Union,
            BigOpKind::Intersect => BinaryOp::Intersect,
            BigOpKind::And => BinaryOp::And,
            BigOpKind::Or => BinaryOp::Or,
        };
        let mut parts = parts.into_iter();
        let Some(mut acc) = parts.next() else {
            return match op {
                BigOpKind::Sum => Ok(Value::Nat(BigUint::zero())),
                BigOpKind::Product => Ok(Value::Nat(BigUint::one())),
                BigOpKind::Union => Ok(Value::Set(BTreeSet::new())),
                BigOpKind::And => Ok(Value::Bool(true)),
                BigOpKind::Or => Ok(Value::Bool(false)),
                BigOpKind::Intersect => Err(ElabError::new("intersection over an empty domain", span)),
            };
        };
        for part in parts {
            acc = self.binary(binop, acc, part, span)?;
        }
        Ok(acc)
    }

    fn eval_inner(&mut self, e: &Expr) -> EResult<Value> {
        let span = e.span;
        match &e.kind {
            ExprKind::Num(n) => Ok(Value::Nat(n.clone())),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Signal(name) | ExprKind::Ident(name) => self.lookup(name, span),
            ExprKind::BusAccess { bus, index } => {
                let target = self.lookup(bus, span)?;
                let Value::Bus { name, width } = target else {
                    return Err(expected("a bus", &target, span));
                };
                let k = self.eval_numeric(index)?;
                if k >= BigUint::from(width) {
                    return Err(ElabError::new(
                        format!("index {k} is out of range for bus `{name}` of width {width}"),
                        index.span,
                    ));
                }
                Ok(Value::Formula(Formula::atom(format!("{name}[{k}]"))))
            }
            ExprKind::Call { name, args } => {
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.eval(a)?);
                }
                self.apply_function(name, values, span)
            }
            ExprKind::SetLiteral(items) => {
                let mut values = Vec::with_capacity(items.len());
                for item in items {
                    values.push(self.eval(item)?);
                }
                make_set(values).map(Value::Set).map_err(|m| ElabError::new(m, span))
            }
            ExprKind::SetRange { start, step, end } => {
                let x = self.eval_numeric(start)?;
                let y = self.eval_numeric(step)?;
                let z = self.eval_numeric(end)?;
                let set = eval_set_range(&x, &y, &z).map_err(|m| ElabError::new(m, span))?;
                Ok(Value::Set(set.into_iter().map(Value::Nat).collect()))
            }
            ExprKind::Unary { op, operand } => {
                let v = self.eval(operand)?;
                self.unary(*op, v, span)
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.eval(lhs)?;
                let r = self.eval(rhs)?;
                self.binary(*op, l, r, span)
            }
            ExprKind::BigOp { op, binders, body } => self.expand_big_operator(*op, binders, body, span),
            ExprKind::EnumCompare { polarity, bus, value } => {
                let target = self.lookup(bus, span)?;
                let Value::Bus { name, width } = target else {
                    return Err(expected("a bus", &target, span));
                };
                desugar_enum_compare(*polarity, &name, width, value, &self.enums)
                    .map(Value::Formula)
                    .map_err(|m| ElabError::new(m, span))
            }
            ExprKind::Guarded(cases) => self.select_case(cases, span),
            ExprKind::Sugar { kind, strength, body } => {
                if *strength == Strength::Strong && self.variant != Variant::Finite {
                    return Err(ElabError::new(
                        "strong sugar needs finite semantics",
                        span,
                    ));
                }
                let bound = |this: &mut Self, b: &Expr| -> EResult<usize> {
                    let n = this.eval_numeric(b)?;
                    let n = to_usize(&n, b.span)?;
                    if n > MAX_SUGAR_STEPS {
                        return Err(ElabError::new(format!("step bound {n} is too large"), b.span));
                    }
                    Ok(n)
                };
                let sugar = match kind {
                    SugarKind::NextStack(n) => TemporalSugar::Next(bound(self, n)?),
                    SugarKind::FinallyRange(n, m) => TemporalSugar::Finally(bound(self, n)?, bound(self, m)?),
                    SugarKind::GloballyRange(n, m) => {
                        TemporalSugar::Globally(bound(self, n)?, bound(self, m)?)
                    }
                };
                let body = self.eval_formula(body)?;
                desugar_temporal(sugar, *strength, body)
                    .map(Value::Formula)
                    .map_err(|m| ElabError::new(m, span))
            }
        }
    }

    fn unary(&mut self, op: UnaryOp, v: Value, span: Span) -> EResult<Value> {
        let formula = |v: &Value| v.as_formula().ok_or_else(|| expected("a formula", v, span));
        Ok(match op {
            UnaryOp::Not => match v {
                Value::Bool(b) => Value::Bool(!b),
                other => Value::Formula(Formula::not(formula(&other)?)),
            },
            UnaryOp::Next => Value::Formula(Formula::next(formula(&v)?)),
            UnaryOp::StrongNext => {
                if self.variant != Variant::Finite {
                    return Err(ElabError::new("`X[!]` needs finite semantics", span));
                }
                Value::Formula(Formula::strong_next(formula(&v)?))
            }
            UnaryOp::Finally => Value::Formula(Formula::finally(formula(&v)?)),
            UnaryOp::Globally => Value::Formula(Formula::globally(formula(&v)?)),
            UnaryOp::Size => match v {
                Value::Set(s) => Value::Nat(BigUint::from(s.len())),
                other => return Err(expected("a set", &other, span)),
            },
            UnaryOp::SizeOf => match v {
                Value::Bus { width, .. } => Value::Nat(BigUint::from(width)),
                other => return Err(expected("a bus", &other, span)),
            },
            UnaryOp::Min | UnaryOp::Max => {
                let Value::Set(s) = v else {
                    return Err(expected("a set", &v, span));
                };
                let pick = if op == UnaryOp::Min { s.first() } else { s.last() };
                match pick {
                    Some(Value::Nat(n)) => Value::Nat(n.clone()),
                    Some(other) => return Err(expected("a number", other, span)),
                    None => {
                        return Err(ElabError::new(
                            format!("{} of an empty set", op.symbol()),
                            span,
                        ))
                    }
                }
            }
        })
    }

    fn binary(&mut self, op: BinaryOp, l: Value, r: Value, span: Span) -> EResult<Value> {
        use BinaryOp as B;
        let nats = |l: &Value, r: &Value| -> EResult<(BigUint, BigUint)> {
            match (l, r) {
                (Value::Nat(a), Value::Nat(b)) => Ok((a.clone(), b.clone())),
                (Value::Nat(_), other) | (other, _) => Err(expected("a number", other, span)),
            }
        };
        let sets = |l: Value, r: Value| -> EResult<(BTreeSet<Value>, BTreeSet<Value>)> {
            match (l, r) {
                (Value::Set(a), Value::Set(b)) => {
                    if let (Some(x), Some(y)) = (a.first(), b.first()) {
                        if x.family() != y.family() {
                            return Err(ElabError::new(
                                format!("set of {} combined with set of {}", x.kind_name(), y.kind_name()),
                                span,
                            ));
                        }
                    }
                    Ok((a, b))
                }
                (Value::Set(_), other) | (other, _) => Err(expected("a set", &other, span)),
            }
        };
        let arith_err = |what: &str| ElabError::new(what.to_string(), span);
        Ok(match op {
            B::Add => {
                let (a, b) = nats(&l, &r)?;
                Value::Nat(a + b)
            }
            B::Sub => {
                let (a, b) = nats(&l, &r)?;
                Value::Nat(sets::checked_sub(&a, &b).ok_or_else(|| {
                    arith_err(&format!("{a} - {b} is negative"))
                })?)
            }
            B::Mul => {
                let (a, b) = nats(&l, &r)?;
                Value::Nat(a * b)
            }
            B::Div => {
                let (a, b) = nats(&l, &r)?;
                Value::Nat(sets::checked_div(&a, &b).ok_or_else(|| arith_err("division by zero"))?)
            }
            B::Mod => {
                let (a, b) = nats(&l, &r)?;
                Value::Nat(sets::checked_rem(&a, &b).ok_or_else(|| arith_err("modulo by zero"))?)
            }
            B::Lt | B::Le | B::Gt | B::Ge => {
                let (a, b) = nats(&l, &r)?;
                Value::Bool(match op {
                    B::Lt => a < b,
                    B::Le => a <= b,
                    B::Gt => a > b,
                    _ => a >= b,
                })
            }
            B::SetMinus => {
                let (a, b) = sets(l, r)?;
                Value::Set(a.difference(&b).cloned().collect())
            }
            B::Intersect => {
                let (a, b) = sets(l, r)?;
                Value::Set(a.intersection(&b).cloned().collect())
            }
            B::Union => {
                let (a, b) = sets(l, r)?;
                Value::Set(a.union(&b).cloned().collect())
            }
            B::Eq | B::Neq => {
                let polarity = if op == B::Eq { Polarity::Eq } else { Polarity::Neq };
                match (&l, &r) {
                    (Value::Bus { name, width }, Value::EnumId(id)) | (Value::EnumId(id), Value::Bus { name, width }) => {
                        Value::Formula(
                            desugar_enum_compare(polarity, name, *width, id, &self.enums)
                                .map_err(|m| ElabError::new(m, span))?,
                        )
                    }
                    (Value::Nat(_), Value::Nat(_))
                    | (Value::Bool(_), Value::Bool(_))
                    | (Value::Set(_), Value::Set(_))
                    | (Value::EnumId(_), Value::EnumId(_)) => Value::Bool((l == r) == (op == B::Eq)),
                    _ => {
                        return Err(ElabError::new(
                            format!("cannot compare {} with {}", l.kind_name(), r.kind_name()),
                            span,
                        ))
                    }
                }
            }
            B::In => {
                let Value::Set(s) = &r else {
                    return Err(expected("a set", &r, span));
                };
                let lifted = match (&l, s.first()) {
                    (Value::Bool(_), Some(Value::Formula(_))) => Value::Formula(l.as_formula().expect("boolean")),
                    _ => l,
                };
                Value::Bool(s.contains(&lifted))
            }
            B::And | B::Or | B::Implies | B::Equiv => {
                if let (Value::Bool(a), Value::Bool(b)) = (&l, &r) {
                    let (a, b) = (*a, *b);
                    return Ok(Value::Bool(match op {
                        B::And => a && b,
                        B::Or => a || b,
                        B::Implies => !a || b,
                        _ => a == b,
                    }));
                }
                let a = l.as_formula().ok_or_else(|| expected("a formula", &l, span))?;
                let b = r.as_formula().ok_or_else(|| expected("a formula", &r, span))?;
                Value::Formula(match op {
                    B::And => Formula::and(a, b),
                    B::Or => Formula::or(a, b),
                    B::Implies => Formula::implies(a, b),
                    _ => Formula::equiv(a, b),
                })
            }
            B::Until | B::Release | B::WeakUntil => {
                let a = l.as_formula().ok_or_else(|| expected("a formula", &l, span))?;
                let b = r.as_formula().ok_or_else(|| expected("a formula", &r, span))?;
                Value::Formula(match op {
                    B::Until => Formula::until(a, b),
                    B::Release => Formula::release(a, b),
                    _ => Formula::weak_until(a, b),
                })
            }
        })
    }
}

fn def_span(def: &Definition) -> Span {
    match def {
        Definition::Function(f) => f.span,
        Definition::Enum(e) => e.span,
        Definition::Binding { cases, .. } => cases.first().map_or(Span::default(), |c| c.body.span),
    }
}

fn expected(what: &str, found: &Value, span: Span) -> ElabError {
    ElabError::new(format!("expected {what}, found {} `{found}`", found.kind_name()), span)
}

fn to_usize(n: &BigUint, span: Span) -> EResult<usize> {
    n.to_usize()
        .ok_or_else(|| ElabError::new(format!("{n} is too large"), span))
}

/// Elaborates a parsed specification with the given parameter overrides.
pub fn elaborate(spec: &Specification, options: &ElabOptions) -> EResult<ElaboratedSpec> {
    let mut env = Environment::new(spec, options)?;
    let mut buckets = Sections::new();
    for section in Section::ALL {
        for e in spec.main_.sections.get(section) {
            let f = env.eval_formula(e)?;
            buckets.get_mut(section).push(f);
        }
    }
    for decl in spec.signals() {
        if let SignalWidth::Enum(ty) = &decl.width {
            let e = env.enums().get(ty).expect("checked when installing signals");
            if let Some((f, section)) = enum_implicit_constraint(&decl.name, decl.direction, e) {
                buckets.get_mut(section).push(f);
            }
        }
    }
    let expand = |decls: &[SignalDecl]| decls.iter().flat_map(|d| env.expand_signal(&d.name)).collect();
    Ok(ElaboratedSpec {
        title: spec.info.title.clone(),
        description: spec.info.description.clone(),
        tags: spec.info.tags.clone(),
        semantics: spec.info.semantics,
        target: spec.info.target,
        inputs: expand(&spec.main_.inputs),
        outputs: expand(&spec.main_.outputs),
        buckets,
    })
}
