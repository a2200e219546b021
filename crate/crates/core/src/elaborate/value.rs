use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

use crate::formula::Formula;

/// Result of evaluating an expression during elaboration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Nat(BigUint),
    Bool(bool),
    Formula(Formula),
    Bus { name: String, width: usize },
    EnumId(String),
    /// Elements share one kind; booleans are lifted when mixed with formulas.
    Set(BTreeSet<Value>),
}

impl Value {
    pub fn nat(n: u64) -> Value {
        Value::Nat(BigUint::from(n))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Nat(_) => "number",
            Value::Bool(_) => "boolean",
            Value::Formula(_) => "formula",
            Value::Bus { .. } => "bus",
            Value::EnumId(_) => "enumeration identifier",
            Value::Set(_) => "set",
        }
    }

    /// Booleans and formulas are one family; the rest stand alone.
    pub(crate) fn family(&self) -> u8 {
        match self {
            Value::Nat(_) => 0,
            Value::Bool(_) | Value::Formula(_) => 1,
            Value::Bus { .. } => 2,
            Value::EnumId(_) => 3,
            Value::Set(_) => 4,
        }
    }

    /// Views a boolean or formula as a formula.
    pub fn as_formula(&self) -> Option<Formula> {
        match self {
            Value::Bool(true) => Some(Formula::True),
            Value::Bool(false) => Some(Formula::False),
            Value::Formula(f) => Some(f.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Formula(g) => write!(f, "{g}"),
            Value::Bus { name, width } => write!(f, "{name}[{width}]"),
            Value::EnumId(id) => f.write_str(id),
            Value::Set(items) => {
                f.write_str("{")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Builds a set, rejecting mixed element kinds.
pub fn make_set(items: impl IntoIterator<Item = Value>) -> Result<BTreeSet<Value>, String> {
    let items: Vec<Value> = items.into_iter().collect();
    let Some(first) = items.first() else {
        return Ok(BTreeSet::new());
    };
    let family = first.family();
    if let Some(odd) = items.iter().find(|v| v.family() != family) {
        return Err(format!(
            "set mixes {} and {} elements",
            first.kind_name(),
            odd.kind_name()
        ));
    }
    let lift = family == 1 && items.iter().any(|v| matches!(v, Value::Formula(_)));
    Ok(items
        .into_iter()
        .map(|v| match (&v, lift) {
            (Value::Bool(_), true) => Value::Formula(v.as_formula().expect("boolean")),
            _ => v,
        })
        .collect())
}
