//! Enumeration checks and desugaring of bus/enum comparisons.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::ast::{Bit, BitPattern, Direction, EnumDecl, Polarity, Section};
use crate::formula::Formula;

/// Declared enumerations, indexed by type name and by identifier.
#[derive(Debug, Clone, Default)]
pub struct EnumTable {
    types: HashMap<String, EnumDecl>,
    /// identifier -> type name
    owners: HashMap<String, String>,
}

impl EnumTable {
    /// Adds a declaration after checking widths, disjointness and name reuse.
    pub fn insert(&mut self, decl: &EnumDecl) -> Result<(), String> {
        validate_enum(decl)?;
        if self.types.contains_key(&decl.name) {
            return Err(format!("enumeration `{}` is declared twice", decl.name));
        }
        for (id, _) in &decl.values {
            if let Some(other) = self.owners.get(id) {
                return Err(format!("enumeration identifier `{id}` is already used by `{other}`"));
            }
            self.owners.insert(id.clone(), decl.name.clone());
        }
        self.types.insert(decl.name.clone(), decl.clone());
        Ok(())
    }

    pub fn get(&self, type_name: &str) -> Option<&EnumDecl> {
        self.types.get(type_name)
    }

    pub fn is_identifier(&self, id: &str) -> bool {
        self.owners.contains_key(id)
    }

    /// Patterns of `id` with the width of its enumeration.
    pub fn patterns(&self, id: &str) -> Option<(usize, &[BitPattern])> {
        let decl = self.types.get(self.owners.get(id)?)?;
        let (_, patterns) = decl.values.iter().find(|(name, _)| name == id)?;
        Some((decl.width(), patterns))
    }
}

/// Checks that all patterns have one positive width and that distinct
/// identifiers denote disjoint valuations.
pub fn validate_enum(decl: &EnumDecl) -> Result<(), String> {
    let width = decl.width();
    if width == 0 {
        return Err(format!("enumeration `{}` has empty valuations", decl.name));
    }
    let mut seen = HashMap::new();
    for (id, patterns) in &decl.values {
        if seen.insert(id.as_str(), ()).is_some() {
            return Err(format!("`{id}` appears twice in enumeration `{}`", decl.name));
        }
        if let Some(p) = patterns.iter().find(|p| p.0.len() != width) {
            return Err(format!(
                "pattern `{p}` of `{id}` has width {}, expected {width}",
                p.0.len()
            ));
        }
    }
    for (i, (a, pa)) in decl.values.iter().enumerate() {
        for (b, pb) in &decl.values[i + 1..] {
            for p in pa {
                if let Some(q) = pb.iter().find(|q| overlaps(p, q)) {
                    return Err(format!(
                        "`{a}` ({p}) and `{b}` ({q}) share a valuation in enumeration `{}`",
                        decl.name
                    ));
                }
            }
        }
    }
    Ok(())
}

/// True when some bit vector matches both patterns.
pub fn overlaps(p: &BitPattern, q: &BitPattern) -> bool {
    p.0.iter()
        .zip(&q.0)
        .all(|(a, b)| a == b || *a == Bit::Any || *b == Bit::Any)
}

/// Number of distinct bit vectors matched by at least one pattern.
pub fn covered_count(patterns: &[&BitPattern], width: usize) -> BigUint {
    fn go(patterns: &[&[Bit]], remaining: usize) -> BigUint {
        if patterns.is_empty() {
            return BigUint::zero();
        }
        if patterns.iter().any(|p| p.iter().all(|b| *b == Bit::Any)) {
            return BigUint::one() << remaining;
        }
        let branch = |bit: Bit| -> Vec<&[Bit]> {
            patterns
                .iter()
                .filter(|p| p[0] == bit || p[0] == Bit::Any)
                .map(|p| &p[1..])
                .collect()
        };
        go(&branch(Bit::Zero), remaining - 1) + go(&branch(Bit::One), remaining - 1)
    }
    let slices: Vec<&[Bit]> = patterns.iter().map(|p| p.0.as_slice()).collect();
    go(&slices, width)
}

/// Conjunction of bit literals; `*` positions contribute nothing.
pub fn pattern_formula(bus: &str, pattern: &BitPattern) -> Formula {
    Formula::conjunction(pattern.0.iter().enumerate().filter_map(|(k, bit)| {
        let atom = Formula::atom(format!("{bus}[{k}]"));
        match bit {
            Bit::Zero => Some(Formula::not(atom)),
            Bit::One => Some(atom),
            Bit::Any => None,
        }
    }))
}

/// `bus == id` or `bus != id` as a formula over the bus bits.
pub fn desugar_enum_compare(
    polarity: Polarity,
    bus: &str,
    bus_width: usize,
    id: &str,
    enums: &EnumTable,
) -> Result<Formula, String> {
    let (width, patterns) = enums
        .patterns(id)
        .ok_or_else(|| format!("unknown enumeration identifier `{id}`"))?;
    if width != bus_width {
        return Err(format!(
            "bus `{bus}` has width {bus_width} but `{id}` has width {width}"
        ));
    }
    let eq = Formula::disjunction(patterns.iter().map(|p| pattern_formula(bus, p)));
    Ok(match polarity {
        Polarity::Eq => eq,
        Polarity::Neq => Formula::not(eq),
    })
}

/// The constraint restricting an enum-typed bus to its declared valuations,
/// or `None` when every valuation is named.
pub fn enum_implicit_constraint(
    bus: &str,
    direction: Direction,
    decl: &EnumDecl,
) -> Option<(Formula, Section)> {
    let width = decl.width();
    let all: Vec<&BitPattern> = decl.values.iter().flat_map(|(_, ps)| ps).collect();
    if covered_count(&all, width) == BigUint::one() << width {
        return None;
    }
    let formula = Formula::disjunction(
        decl.values
            .iter()
            .map(|(_, ps)| Formula::disjunction(ps.iter().map(|p| pattern_formula(bus, p)))),
    );
    let section = match direction {
        Direction::Input => Section::Require,
        Direction::Output => Section::Assert,
    };
    Some((formula, section))
}
